//! Classical game analysis: payoffs under mixed play, equilibria,
//! dominance, Pareto flags, zero-sum values, ESS and the core.

mod bimatrix;
mod coalition;
mod equilibria;
mod ess;
mod repeated;

pub use bimatrix::{expected_payoff, Bimatrix, BimatrixJson, MixedStrategy, PROB_TOL};
pub use coalition::{core_check, core_grid_probe, CharacteristicGame, Imputation, MAX_PLAYERS};
pub use equilibria::{
    dominant_moves, mixed_nash_2x2, pareto_analysis, pure_nash, strictly_dominant_moves, zero_sum_value_2x2,
    MixedNash, ParetoFlags, ZeroSumSolution,
};
pub use ess::{ess_test, fitness, EssReport, BARRIER_TOL};
pub use repeated::repeated_payoff_distribution;
