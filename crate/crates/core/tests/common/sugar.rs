//! Native clause against encoding, for every sugared construct.

use translog::syntax::desugar;
use translog::{parse_belief, satisfies, EngineHandle, Model, ParamEnv};

/// Each construct with a few instances over the symbols `R`, `S`, `f`, `c`.
pub const INSTANCES: &[(&str, &[&str])] = &[
    ("tensor", &["R(x) (+) -R(x)", "x = y (+) x != y", "dep(x) (+) dep(y)", "(R(y) (+) x = c) (+) ~S(x, y)"]),
    ("tuple inequality", &["(x, y) != (y, x)", "(x) != (f(y))", "(x, f(x)) != (c, y)"]),
    ("announcement", &["delta x. R(y)", "delta f(x). dep(y)", "delta y. (x = y (+) R(x))"]),
    ("constancy", &["dep(x)", "dep(f(y))", "dep(c)"]),
    ("dependence", &["dep(x, y)", "dep(y, x)", "dep(x, y, f(x))", "dep(f(x), c, y)"]),
    ("inclusion", &["inc(x; y)", "inc(x, y; y, x)", "inc(f(x); x)", "inc(c; y)"]),
    ("exclusion", &["exc(x; y)", "exc(x, y; y, f(x))", "exc(c; f(y))"]),
    ("independence", &["indep(; x; y)", "indep(x; y; f(y))", "indep(c; x; y)", "indep(f(x); x; y)"]),
    ("intuitionistic implication", &["R(x) ~> dep(y)", "dep(x) ~> x = y", "(x = y (+) R(x)) ~> inc(x; y)"]),
];

/// Checks every instance of every construct on every team of `m`; returns the
/// number of comparisons.
pub fn check_model(m: &Model) -> Result<usize, String> {
    let env = ParamEnv::new();
    let reference = EngineHandle::reference();
    let transition = EngineHandle::transition();
    let teams: Vec<_> = m.full_team().subteams().collect();
    let mut count = 0;
    for (kind, texts) in INSTANCES {
        for text in *texts {
            let phi = parse_belief(text, m).map_err(|e| format!("{}: {}", text, e))?;
            let encoded = desugar(&phi);
            for &x in &teams {
                let native = satisfies(m, x, &phi, &env, &reference).map_err(|e| e.to_string())?;
                for h in [&reference, &transition] {
                    let via = satisfies(m, x, &encoded, &env, h).map_err(|e| e.to_string())?;
                    if native != via {
                        return Err(format!(
                            "{} `{}` at {}: native {}, encoded ({}) {}",
                            kind,
                            text,
                            m.display_team(x),
                            native,
                            h.kind,
                            via
                        ));
                    }
                }
                count += 1;
            }
        }
    }
    Ok(count)
}
