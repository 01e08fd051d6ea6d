//! Test-time strategy: replay the belief recursion along a history with the
//! checkpoint's own policies and query the interpolated policy.

use crate::belief::{bayes_update_raw, Belief};
use crate::error::EvalError;
use crate::game::History;
use crate::solver::Checkpoint;

#[derive(Debug, Clone, PartialEq)]
pub struct TestTimeState {
    pub belief: Belief,
    pub history: History,
    /// Some update along the history had zero likelihood under every type
    /// and was replaced by the uniform belief.
    pub fallback_used: bool,
}

/// Interpolated policies `([type][a1], [a2])` at `(round, b, s)`.
pub fn policy_at(ckpt: &Checkpoint, round: usize, b: &[f64], s: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
    let w = ckpt.grids[round].weights(b, ckpt.interpolation());
    let pol = &ckpt.policies[round];
    (pol.p1_at(&w, s), pol.p2_at(&w, s))
}

/// Posterior after player 1 plays `a1` under `p1`; uniform with `true` when
/// the update is infeasible.
pub fn update_belief(b: &[f64], p1: &[Vec<f64>], a1: usize) -> (Vec<f64>, bool) {
    let lik: Vec<f64> = p1.iter().map(|row| row[a1]).collect();
    match bayes_update_raw(b, &lik) {
        Ok(post) => (post, false),
        Err(_) => (vec![1.0 / b.len() as f64; b.len()], true),
    }
}

pub fn check_history(ckpt: &Checkpoint, h: &History) -> Result<(), EvalError> {
    let bad = |m: String| Err(EvalError::HistoryMismatch(m));
    if h.steps.len() >= ckpt.horizon {
        return bad(format!(
            "{} rounds elapsed but the horizon is {}",
            h.steps.len(),
            ckpt.horizon
        ));
    }
    if h.initial_state >= ckpt.n_states {
        return bad(format!("initial state {} out of range", h.initial_state));
    }
    for (j, st) in h.steps.iter().enumerate() {
        if st.a1 >= ckpt.n_actions_p1 || st.a2 >= ckpt.n_actions_p2 || st.next_state >= ckpt.n_states {
            return bad(format!("step {j} ({}, {}) -> s{} out of range", st.a1, st.a2, st.next_state));
        }
    }
    Ok(())
}

/// Belief at the end of `h`, starting from the checkpoint's prior.
pub fn belief_along(ckpt: &Checkpoint, h: &History) -> Result<(Vec<f64>, bool), EvalError> {
    check_history(ckpt, h)?;
    let mut b = ckpt.prior.clone();
    let mut fallback = false;
    for (j, st) in h.steps.iter().enumerate() {
        let (p1, _) = policy_at(ckpt, j, &b, h.state_at(j));
        let (next, fb) = update_belief(&b, &p1, st.a1);
        b = next;
        fallback |= fb;
    }
    Ok((b, fallback))
}

/// Player-1 per-type and player-2 distributions for the round following `h`.
pub fn test_time_policy(
    ckpt: &Checkpoint,
    h: &History,
) -> Result<(Vec<Vec<f64>>, Vec<f64>, TestTimeState), EvalError> {
    let (b, fallback_used) = belief_along(ckpt, h)?;
    let (p1, p2) = policy_at(ckpt, h.rounds_elapsed(), &b, h.current_state());
    Ok((
        p1,
        p2,
        TestTimeState {
            belief: Belief::new(b).map_err(EvalError::Belief)?,
            history: h.clone(),
            fallback_used,
        },
    ))
}
