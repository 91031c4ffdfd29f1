//! Invariant suites, runnable at any case count.

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use translog::harness::corpus::{random_model, Gen};
use translog::harness::Fragment;
use translog::syntax::{desugar, fragment_check_game, is_desugared};
use translog::teams::restrict;
use translog::{
    strategies, successors, Budget, EngineHandle, EngineKind, EvalError, GameFormula,
    Model, ParamEnv, Team, Transition, VarSet,
};

pub type Suite = (&'static str, fn(u32) -> Result<(), String>);

pub const SUITES: &[Suite] = &[
    ("image nonemptiness", image_nonemptiness),
    ("compose/union laws", algebra_laws),
    ("frame property", frame_property),
    ("restrict partition", restrict_partition),
    ("desugar idempotence", desugar_idempotence),
    ("star unit", star_unit),
];

fn budget() -> Budget {
    Budget {
        max_items: 2_000_000,
        max_star_depth: 1024,
    }
}

fn run<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn model(domain: usize) -> Model {
    Model::new(domain, &["x", "y"]).unwrap()
}

/// A transition over `prec` whose image at assignment `i` is `images[i]`
/// restricted to the assignment space.
fn transition(m: &Model, prec: Team, images: &[u128]) -> Transition {
    let full = m.full_team().bits();
    Transition::new(prec.iter().map(|s| {
        let bits = images[s.index()] & full;
        let img = if bits == 0 { Team::singleton(s) } else { Team::from_bits(bits) };
        (s, img)
    }))
    .unwrap()
}

#[derive(Debug, Clone)]
struct Raw {
    domain: usize,
    prec: u128,
    images: [Vec<u128>; 3],
}

fn raw() -> impl Strategy<Value = Raw> {
    let imgs = || prop::collection::vec(1u128..512, 9);
    (1usize..=3, any::<u128>(), imgs(), imgs(), imgs()).prop_map(|(domain, prec, a, b, c)| Raw {
        domain,
        prec,
        images: [a, b, c],
    })
}

impl Raw {
    fn model(&self) -> Model {
        model(self.domain)
    }

    fn prec(&self, m: &Model) -> Team {
        Team::from_bits(self.prec & m.full_team().bits())
    }
}

fn nonempty(t: &Transition) -> bool {
    t.images().iter().all(|img| !img.is_empty())
}

fn random_game(seed: u64, domain: usize, fragment: Fragment, depth: usize) -> (Model, GameFormula) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = random_model(&mut rng, domain, domain, 2);
    let g = Gen::new(&mut rng, m.team_vars().to_vec(), fragment).game(depth);
    (m, g)
}

fn skip_budget<T>(r: Result<T, EvalError>) -> Result<Option<T>, TestCaseError> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(e) if e.is_budget() => Ok(None),
        Err(e) => Err(TestCaseError::fail(e.to_string())),
    }
}

pub fn image_nonemptiness(cases: u32) -> Result<(), String> {
    run(cases, (raw(), any::<u64>(), 1usize..=2), |(r, seed, gd)| {
        let m = r.model();
        let x = r.prec(&m);
        let a = transition(&m, x, &r.images[0]);
        let b = transition(&m, a.post(), &r.images[1]);
        let c = transition(&m, x, &r.images[2]);
        prop_assert!(nonempty(&a.compose(&b).unwrap()));
        prop_assert!(nonempty(&a.union(&b)));
        let (vx, vy) = (VarSet::singleton(0), VarSet::singleton(1));
        prop_assert!(nonempty(&Transition::parallel(&m, &a, &c, vx, vy).unwrap()));
        if let Some(s) = x.iter().next() {
            prop_assert!(Transition::new([(s, Team::EMPTY)]).is_err());
        }
        let (gm, g) = random_game(seed, gd, Fragment::Full, 2);
        let handle = EngineHandle::new(EngineKind::Reference, budget());
        let team = Team::from_bits(r.prec & gm.full_team().bits());
        if let Some(set) = skip_budget(strategies(&gm, &g, team, &ParamEnv::new(), &handle))? {
            for t in &set {
                prop_assert_eq!(t.prec(), team);
                prop_assert!(nonempty(t), "{} yields an empty image", g);
            }
        }
        Ok(())
    })
}

pub fn algebra_laws(cases: u32) -> Result<(), String> {
    run(cases, raw(), |r| {
        let m = r.model();
        let x = r.prec(&m);
        let a = transition(&m, x, &r.images[0]);
        let b = transition(&m, a.post(), &r.images[1]);
        let c = transition(&m, b.post(), &r.images[2]);
        let ab_c = a.compose(&b).unwrap().compose(&c).unwrap();
        let a_bc = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(&ab_c, &a_bc);
        prop_assert_eq!(&Transition::identity(x).compose(&a).unwrap(), &a);
        prop_assert_eq!(&a.compose(&Transition::identity(a.post())).unwrap(), &a);

        let b2 = transition(&m, a.post(), &r.images[2]);
        let left = a.compose(&b.union(&b2)).unwrap();
        let right = a.compose(&b).unwrap().union(&a.compose(&b2).unwrap());
        prop_assert_eq!(left, right);

        prop_assert_eq!(a.union(&b), b.union(&a));
        prop_assert_eq!(a.union(&b).union(&c), a.union(&b.union(&c)));
        prop_assert_eq!(&a.union(&a), &a);
        let u = a.union(&c);
        prop_assert_eq!(u.prec(), a.prec().union(c.prec()));
        prop_assert_eq!(u.post(), a.post().union(c.post()));
        if b.post() != x {
            prop_assert!(b.compose(&a).is_err());
        }
        Ok(())
    })
}

pub fn frame_property(cases: u32) -> Result<(), String> {
    run(cases, (any::<u64>(), 1usize..=2, any::<u128>()), |(seed, d, bits)| {
        let (m, g) = random_game(seed, d, Fragment::Full, 2);
        let team = Team::from_bits(bits & m.full_team().bits());
        let handle = EngineHandle::new(EngineKind::Reference, budget());
        let Some(set) = skip_budget(strategies(&m, &g, team, &ParamEnv::new(), &handle))? else {
            return Ok(());
        };
        let aff = g.affected_in(&m);
        for t in &set {
            for (s, img) in t.iter() {
                for u in img {
                    for v in 0..m.team_vars().len() {
                        if !aff.contains(v) {
                            prop_assert_eq!(m.value(s, v), m.value(u, v), "{} moves {}", g, v);
                        }
                    }
                }
            }
        }
        Ok(())
    })
}

pub fn restrict_partition(cases: u32) -> Result<(), String> {
    run(cases, (any::<u64>(), 1usize..=3, any::<u128>()), |(seed, d, bits)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_model(&mut rng, d, d, 2);
        let term = Gen::new(&mut rng, m.team_vars().to_vec(), Fragment::Full).term();
        let x = Team::from_bits(bits & m.full_team().bits());
        let env = ParamEnv::new();
        let mut seen = Team::EMPTY;
        for v in m.domain() {
            let part = restrict(&m, x, &term, v, &env).unwrap();
            prop_assert!(part.is_subset(x));
            prop_assert!(part.intersection(seen).is_empty());
            seen = seen.union(part);
        }
        prop_assert_eq!(seen, x);
        Ok(())
    })
}

pub fn desugar_idempotence(cases: u32) -> Result<(), String> {
    run(cases, (any::<u64>(), 0usize..=3), |(seed, depth)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_model(&mut rng, 2, 2, 2);
        let phi = Gen::new(&mut rng, m.team_vars().to_vec(), Fragment::Full).belief(depth);
        let once = desugar(&phi);
        prop_assert!(is_desugared(&once), "{}", once);
        prop_assert_eq!(desugar(&once), once);
        Ok(())
    })
}

pub fn star_unit(cases: u32) -> Result<(), String> {
    run(cases, (any::<u64>(), 1usize..=2, any::<u128>()), |(seed, d, bits)| {
        let (m, g) = random_game(seed, d, Fragment::Full, 2);
        let x = Team::from_bits(bits & m.full_team().bits());
        let star = GameFormula::star(g);
        let env = ParamEnv::new();
        let reference = EngineHandle::new(EngineKind::Reference, budget());
        if let Some(set) = skip_budget(strategies(&m, &star, x, &env, &reference))? {
            prop_assert!(set.contains(&Transition::identity(x)), "{}", star);
        }
        if fragment_check_game(&star).in_fragment {
            let transition = EngineHandle::new(EngineKind::Transition, budget());
            if let Some(ys) = skip_budget(successors(&m, &star, x, &env, &transition))? {
                prop_assert!(ys.contains(&x), "{}", star);
            }
        }
        Ok(())
    })
}
