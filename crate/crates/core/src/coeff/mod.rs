//! The coefficient *-algebra `A` together with its automorphism `α`.
//!
//! Two concrete instances are provided: trigonometric polynomials on the
//! circle with a rotation ([`CircleRotation`]) and functions on `Z/d` with the
//! cyclic shift ([`FiniteCyclicShift`]). Weights are not required to be
//! positive anywhere in this crate; every identity checked here is linear in
//! the weights.

mod angle;
mod circle;
mod cyclic;

use std::fmt::Debug;

use serde_json::Value;

pub use angle::Angle;
pub use circle::{CircleFunction, CircleRotation};
pub use cyclic::{cyclic_invariant_ideal_search, shift_orbits, FiniteCyclicFunction, FiniteCyclicShift};

use crate::error::Result;
use crate::random::CaseRng;
use crate::scalar::Scalar;

/// A unital *-algebra with a distinguished *-automorphism `α` and an
/// `α`-invariant tracial state `trace0`.
///
/// The algebra object carries the parameters (angle, modulus); elements are
/// plain data and every operation goes through the algebra.
pub trait CoefficientAlgebra: Clone + Debug + Send + Sync {
    type Element: Clone + Debug + PartialEq + Send + Sync;

    /// Short name used in serialized elements.
    fn tag(&self) -> &'static str;

    fn zero(&self) -> Self::Element;
    fn one(&self) -> Self::Element;
    #[allow(clippy::wrong_self_convention)]
    fn from_scalar(&self, s: &Scalar) -> Self::Element;
    fn is_zero(&self, x: &Self::Element) -> bool;

    fn add(&self, x: &Self::Element, y: &Self::Element) -> Self::Element;
    fn neg(&self, x: &Self::Element) -> Self::Element;
    fn mul(&self, x: &Self::Element, y: &Self::Element) -> Self::Element;
    fn star(&self, x: &Self::Element) -> Self::Element;

    fn sub(&self, x: &Self::Element, y: &Self::Element) -> Self::Element {
        self.add(x, &self.neg(y))
    }

    fn scale(&self, x: &Self::Element, s: &Scalar) -> Self::Element {
        self.mul(&self.from_scalar(s), x)
    }

    /// `α^m(x)`.
    fn alpha_power(&self, x: &Self::Element, m: i64) -> Self::Element;

    fn trace0(&self, x: &Self::Element) -> Scalar;

    /// Size measure used by the degree caps (largest `|z|`-exponent for the
    /// circle, zero for finite models).
    fn degree(&self, x: &Self::Element) -> i64;

    /// Random element; `degree` bounds the spread of a circle function.
    fn sample(&self, rng: &mut CaseRng, degree: i64) -> Self::Element;

    fn element_to_json(&self, x: &Self::Element) -> Value;
    fn element_from_json(&self, v: &Value) -> Result<Self::Element>;

    fn is_one(&self, x: &Self::Element) -> bool {
        *x == self.one()
    }
}

/// The same algebra with `α` replaced by `α^power` (`power` may be negative).
///
/// Used for the Fock spaces `F^{(k)}` (automorphism `α^k`) and for the
/// reversed odometer crossed product (automorphism `α^{-1}`).
#[derive(Clone, Debug)]
pub struct Powered<A> {
    pub inner: A,
    pub power: i64,
}

impl<A: CoefficientAlgebra> Powered<A> {
    pub fn new(inner: A, power: i64) -> Self {
        Powered { inner, power }
    }
}

impl<A: CoefficientAlgebra> CoefficientAlgebra for Powered<A> {
    type Element = A::Element;

    fn tag(&self) -> &'static str {
        self.inner.tag()
    }
    fn zero(&self) -> Self::Element {
        self.inner.zero()
    }
    fn one(&self) -> Self::Element {
        self.inner.one()
    }
    fn from_scalar(&self, s: &Scalar) -> Self::Element {
        self.inner.from_scalar(s)
    }
    fn is_zero(&self, x: &Self::Element) -> bool {
        self.inner.is_zero(x)
    }
    fn add(&self, x: &Self::Element, y: &Self::Element) -> Self::Element {
        self.inner.add(x, y)
    }
    fn neg(&self, x: &Self::Element) -> Self::Element {
        self.inner.neg(x)
    }
    fn sub(&self, x: &Self::Element, y: &Self::Element) -> Self::Element {
        self.inner.sub(x, y)
    }
    fn mul(&self, x: &Self::Element, y: &Self::Element) -> Self::Element {
        self.inner.mul(x, y)
    }
    fn scale(&self, x: &Self::Element, s: &Scalar) -> Self::Element {
        self.inner.scale(x, s)
    }
    fn star(&self, x: &Self::Element) -> Self::Element {
        self.inner.star(x)
    }
    fn alpha_power(&self, x: &Self::Element, m: i64) -> Self::Element {
        self.inner.alpha_power(x, m * self.power)
    }
    fn trace0(&self, x: &Self::Element) -> Scalar {
        self.inner.trace0(x)
    }
    fn degree(&self, x: &Self::Element) -> i64 {
        self.inner.degree(x)
    }
    fn sample(&self, rng: &mut CaseRng, degree: i64) -> Self::Element {
        self.inner.sample(rng, degree)
    }
    fn element_to_json(&self, x: &Self::Element) -> Value {
        self.inner.element_to_json(x)
    }
    fn element_from_json(&self, v: &Value) -> Result<Self::Element> {
        self.inner.element_from_json(v)
    }
}

#[cfg(test)]
pub(crate) mod laws {
    //! Shared property checks for both instances.
    use super::*;
    use crate::random::case_rng;

    pub fn check_star_automorphism<A: CoefficientAlgebra>(alg: &A, cases: usize) {
        for case in 0..cases {
            let mut rng = case_rng(0xA11CE, case);
            let x = alg.sample(&mut rng, 3);
            let y = alg.sample(&mut rng, 3);
            for m in -8..=8 {
                let xy = alg.mul(&x, &y);
                assert_eq!(
                    alg.alpha_power(&xy, m),
                    alg.mul(&alg.alpha_power(&x, m), &alg.alpha_power(&y, m)),
                    "multiplicative, m = {m}"
                );
                assert_eq!(alg.alpha_power(&alg.star(&x), m), alg.star(&alg.alpha_power(&x, m)));
                assert_eq!(alg.trace0(&alg.alpha_power(&x, m)), alg.trace0(&x), "invariance, m = {m}");
            }
            assert_eq!(alg.alpha_power(&x, 0), x);
            assert_eq!(alg.alpha_power(&alg.alpha_power(&x, 2), 3), alg.alpha_power(&x, 5));
            assert_eq!(alg.trace0(&alg.mul(&x, &y)), alg.trace0(&alg.mul(&y, &x)));
            assert_eq!(alg.star(&alg.star(&x)), x);
            assert_eq!(alg.star(&alg.mul(&x, &y)), alg.mul(&alg.star(&y), &alg.star(&x)));
        }
        assert!(alg.trace0(&alg.one()).is_one());
    }
}
