//! Classification data: supernatural numbers and `Q(δ)`, the `K_0`/`K_1`
//! normal forms with their order structure, the isomorphism and amplification
//! deciders, and the structure deciders for finite cyclic coefficients.

mod decide;
mod ktheory;
mod supernatural;

pub use decide::{
    circle_trace_uniqueness, decide_amplification, decide_isomorphism, decide_simplicity_finite_model,
    decide_trace_uniqueness_finite_model, Answer, Decision, FiniteModelDecision,
};
pub use ktheory::{
    k0_limit_normalize, k0_positive, k0_tau_value, k1_limit_normalize, K0Class, K1Class, ThetaEnclosure, DEFAULT_BUDGET,
};
pub use supernatural::{factorize, q_delta_member, q_delta_witness, Exponent, SupernaturalNumber};
