//! Deterministic per-case randomness: one seed per run, one ChaCha stream per case.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::{Rational, Scalar};

pub type CaseRng = ChaCha8Rng;

pub fn case_rng(seed: u64, case: usize) -> CaseRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(case as u64);
    rng
}

/// A small random scalar: one or two terms, small integer coefficients,
/// occasional roots of unity of order 2, 3 or 4, θ-exponents in {-1, 0, 1}.
pub fn random_scalar(rng: &mut CaseRng) -> Scalar {
    let terms = rng.gen_range(1..=2);
    let mut s = Scalar::zero();
    for _ in 0..terms {
        let mut coeff = rng.gen_range(-3i64..=3);
        if coeff == 0 {
            coeff = 1;
        }
        let root = if rng.gen_ratio(1, 4) {
            let q = rng.gen_range(2i64..=4);
            Rational::new(rng.gen_range(1..q), q)
        } else {
            Rational::zero()
        };
        let theta = Rational::from_integer(rng.gen_range(-1i64..=1));
        let term = Scalar::monomial(Rational::from_integer(coeff), root, theta)
            .expect("small denominators are always accepted");
        s = &s + &term;
    }
    s
}

/// A random exponent vector entry pattern: each index in `-degree..=degree`
/// independently with probability `1/2`.
pub fn sparse_range(rng: &mut CaseRng, degree: i64) -> Vec<i64> {
    (-degree..=degree).filter(|_| rng.gen_bool(0.5)).collect()
}
