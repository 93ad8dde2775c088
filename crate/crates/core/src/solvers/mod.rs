//! Equilibrium and bargaining search built on the [`crate::lp`] kernel.

mod bargaining;
mod correlated;
mod nash;

pub use bargaining::{nash_bargaining, BargainingArgument, BargainingDomain, NashBargainingResult, REFINEMENT_ROUNDS};
pub use correlated::{optimize_over_equilibrium_set, EquilibriumConcept, EquilibriumOptimum};
pub use nash::{
    enumerate_pure_ne, mixed_ne_2x2, support_enumeration_2p, zero_sum_value, ZeroSumSolution, MAX_SUPPORT_ACTIONS,
};
