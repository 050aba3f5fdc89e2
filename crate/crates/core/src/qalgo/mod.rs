//! Oracle algorithms at desk scale: Grover search, Bernstein–Vazirani, and
//! simulated period finding with the number theory around it.

mod bv;
mod grover;
pub mod number;
mod shor;

pub use bv::{bernstein_vazirani, BvRun, PhaseOracle};
pub use grover::{
    grover_iterations, grover_operators, grover_search, grover_search_with_iterations, grover_success_probability,
    grover_theta, GroverRun,
};
pub use number::{
    classical_order, continued_fraction_best, continued_fraction_convergents, factor_from_order, gcd, mod_inverse,
    modpow, verified_order_candidate, Factors, OrderFailure,
};
pub use shor::{
    order_find, register_width, rsa_demo, shor_factor, FactorMethod, OrderFinder, PeriodSample, RsaOutcome,
    ShorOutcome, ShorRound, DEFAULT_MAX_ROUNDS,
};
