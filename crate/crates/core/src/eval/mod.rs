//! Test-time strategies, exact best responses and equilibrium certificates.

pub mod br;
pub mod brute;
pub mod induced;
pub mod report;
pub mod testtime;

pub use br::{
    analyze_histories, best_response_value, count_histories, count_subtree, profile_root_values,
    HistoryGain, NodeValues, DEFAULT_HISTORY_BUDGET, REACH_TOL,
};
pub use brute::{brute_force_epsilon, brute_force_gains, BruteForceResult, DEFAULT_PLAN_BUDGET};
pub use induced::{induced_game_eval, InducedGame, InducedReport, InducedSummary, INDUCED_SCHEMA};
pub use report::{
    bound_inputs, checkpoint_bound, epsilon_both, epsilon_ne, epsilon_pbe, epsilon_with_budget, theoretical_bound,
    BoundInputs, Enumeration, EpsilonMode, EpsilonReport, GainRow, REPORT_SCHEMA,
};
pub use testtime::{belief_along, check_history, policy_at, test_time_policy, update_belief, TestTimeState};
