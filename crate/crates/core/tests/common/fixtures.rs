//! The parallel and hiding counterexamples.

use translog::transition::hide_game;
use translog::{ExplicitGame, Model, Team, Transition, VarSet};

fn two_point(vars: [&str; 2]) -> Model {
    Model::new(2, &vars).unwrap()
}

fn team(m: &Model, rows: &[[usize; 2]]) -> Team {
    rows.iter().map(|r| m.assignment(r).unwrap()).collect()
}

fn trans(m: &Model, entries: &[([usize; 2], &[[usize; 2]])]) -> Transition {
    Transition::new(entries.iter().map(|(s, img)| (m.assignment(s).unwrap(), team(m, img)))).unwrap()
}

/// Same (prec, post) for both transitions, different parallel postconditions.
pub fn parallel() -> Result<(), String> {
    let m = two_point(["v", "w"]);
    let (s0, s1) = ([0, 0], [1, 1]);
    let tau = trans(&m, &[(s0, &[s0]), (s1, &[s1])]);
    let tau2 = trans(&m, &[(s0, &[s1]), (s1, &[s0])]);
    if (tau.prec(), tau.post()) != (tau2.prec(), tau2.post()) {
        return Err("fixture transitions should share prec and post".into());
    }
    let (v, w) = (VarSet::singleton(0), VarSet::singleton(1));
    let same = Transition::parallel(&m, &tau, &tau, v, w).map_err(|e| e.to_string())?;
    let mixed = Transition::parallel(&m, &tau, &tau2, v, w).map_err(|e| e.to_string())?;
    let want_same = team(&m, &[s0, s1]);
    let want_mixed = team(&m, &[[0, 1], [1, 0]]);
    if same.post() != want_same {
        return Err(format!("post(t (v||w) t) = {}", m.display_team(same.post())));
    }
    if mixed.post() != want_mixed {
        return Err(format!("post(t (v||w) t') = {}", m.display_team(mixed.post())));
    }
    Ok(())
}

/// Hiding keeps the constant game and empties the other, although both games
/// present the same (prec, post) pair.
pub fn hiding() -> Result<(), String> {
    let m = two_point(["x", "y"]);
    let (s0, s1) = ([0, 0], [1, 0]);
    let g0: ExplicitGame = [trans(&m, &[(s0, &[s0, s1]), (s1, &[s0, s1])])].into();
    let g1: ExplicitGame = [trans(&m, &[(s0, &[s0]), (s1, &[s1])])].into();
    let pairs = |g: &ExplicitGame| -> Vec<(Team, Team)> { g.iter().map(|t| (t.prec(), t.post())).collect() };
    if pairs(&g0) != pairs(&g1) {
        return Err("fixture games should present the same (prec, post) pairs".into());
    }
    let hidden = VarSet::singleton(0);
    if hide_game(&m, &g0, &hidden) != g0 {
        return Err("G0 / {x} should equal G0".into());
    }
    let h1 = hide_game(&m, &g1, &hidden);
    if !h1.is_empty() {
        return Err(format!("G1 / {{x}} should be empty, has {} transitions", h1.len()));
    }
    Ok(())
}
