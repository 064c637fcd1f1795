//! Finite sums `Σ a_l u^l` in `A ×_{α^n} Z` and matrices over them: the
//! stage algebras `B(n) = M_n(A ×_{α^n} Z)`.

mod matrix;

use std::collections::BTreeMap;

use rand::Rng;
use serde_json::{json, Map, Value};

pub use matrix::{MatrixElement, StageAlgebra};

use crate::coeff::CoefficientAlgebra;
use crate::error::{Error, Result};
use crate::random::{sparse_range, CaseRng};
use crate::scalar::Scalar;

/// Default bound on `|u|`- and coefficient degrees of computed products.
pub const DEFAULT_DEGREE_CAP: i64 = 64;

/// A finite sum `Σ a_l u_n^l` with `u_n a = α^n(a) u_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct CrossedElement<E> {
    power: u64,
    coeffs: BTreeMap<i64, E>,
}

impl<E> CrossedElement<E> {
    pub fn power(&self) -> u64 {
        self.power
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &E)> {
        self.coeffs.iter().map(|(l, a)| (*l, a))
    }

    pub fn coeff(&self, l: i64) -> Option<&E> {
        self.coeffs.get(&l)
    }

    pub fn u_degree(&self) -> i64 {
        self.coeffs.keys().map(|l| l.abs()).max().unwrap_or(0)
    }

    /// The same coefficient data read in a crossed product of another power
    /// (used when two presentations share the automorphism, e.g. `α_θ^n = α_{θ/p}^{pn}`).
    pub fn reinterpret(self, power: u64) -> Self {
        CrossedElement { power, coeffs: self.coeffs }
    }
}

/// The crossed product `A ×_{α^n} Z` restricted to finite Laurent sums.
#[derive(Clone, Debug)]
pub struct CrossedProduct<A> {
    pub alg: A,
    pub power: u64,
    pub degree_cap: i64,
}

impl<A: CoefficientAlgebra> CrossedProduct<A> {
    pub fn new(alg: A, power: u64) -> Self {
        assert!(power >= 1, "crossed product power must be positive");
        CrossedProduct { alg, power, degree_cap: DEFAULT_DEGREE_CAP }
    }

    pub fn with_degree_cap(mut self, cap: i64) -> Self {
        self.degree_cap = cap;
        self
    }

    pub fn zero(&self) -> CrossedElement<A::Element> {
        CrossedElement { power: self.power, coeffs: BTreeMap::new() }
    }

    pub fn one(&self) -> CrossedElement<A::Element> {
        self.monomial(self.alg.one(), 0)
    }

    /// `a · u^l`.
    pub fn monomial(&self, a: A::Element, l: i64) -> CrossedElement<A::Element> {
        let mut coeffs = BTreeMap::new();
        if !self.alg.is_zero(&a) {
            coeffs.insert(l, a);
        }
        CrossedElement { power: self.power, coeffs }
    }

    pub fn from_coeff(&self, a: A::Element) -> CrossedElement<A::Element> {
        self.monomial(a, 0)
    }

    /// `u^l`.
    pub fn u(&self, l: i64) -> CrossedElement<A::Element> {
        self.monomial(self.alg.one(), l)
    }

    pub fn from_terms(&self, terms: impl IntoIterator<Item = (i64, A::Element)>) -> CrossedElement<A::Element> {
        let mut x = self.zero();
        for (l, a) in terms {
            self.add_term(&mut x, l, a);
        }
        x
    }

    fn add_term(&self, x: &mut CrossedElement<A::Element>, l: i64, a: A::Element) {
        if self.alg.is_zero(&a) {
            return;
        }
        match x.coeffs.remove(&l) {
            Some(prev) => {
                let sum = self.alg.add(&prev, &a);
                if !self.alg.is_zero(&sum) {
                    x.coeffs.insert(l, sum);
                }
            }
            None => {
                x.coeffs.insert(l, a);
            }
        }
    }

    fn check(&self, x: &CrossedElement<A::Element>) -> Result<()> {
        if x.power != self.power {
            return Err(Error::PowerMismatch { left: self.power, right: x.power });
        }
        Ok(())
    }

    pub fn add(&self, x: &CrossedElement<A::Element>, y: &CrossedElement<A::Element>) -> Result<CrossedElement<A::Element>> {
        self.check(x)?;
        self.check(y)?;
        let mut out = x.clone();
        for (l, a) in &y.coeffs {
            self.add_term(&mut out, *l, a.clone());
        }
        Ok(out)
    }

    pub fn neg(&self, x: &CrossedElement<A::Element>) -> CrossedElement<A::Element> {
        CrossedElement { power: x.power, coeffs: x.coeffs.iter().map(|(l, a)| (*l, self.alg.neg(a))).collect() }
    }

    pub fn sub(&self, x: &CrossedElement<A::Element>, y: &CrossedElement<A::Element>) -> Result<CrossedElement<A::Element>> {
        self.add(x, &self.neg(y))
    }

    pub fn scale(&self, x: &CrossedElement<A::Element>, s: &Scalar) -> CrossedElement<A::Element> {
        let mut out = self.zero();
        out.power = x.power;
        for (l, a) in &x.coeffs {
            self.add_term(&mut out, *l, self.alg.scale(a, s));
        }
        out
    }

    /// Left multiplication by a coefficient: `b · x`.
    pub fn left_mul_coeff(&self, b: &A::Element, x: &CrossedElement<A::Element>) -> CrossedElement<A::Element> {
        let mut out = CrossedElement { power: x.power, coeffs: BTreeMap::new() };
        for (l, a) in &x.coeffs {
            self.add_term(&mut out, *l, self.alg.mul(b, a));
        }
        out
    }

    /// Twisted convolution `(a u^l)(b u^r) = a α^{n l}(b) u^{l+r}`.
    pub fn mul(&self, x: &CrossedElement<A::Element>, y: &CrossedElement<A::Element>) -> Result<CrossedElement<A::Element>> {
        self.check(x)?;
        self.check(y)?;
        let n = self.power as i64;
        let mut out = self.zero();
        for (l, a) in &x.coeffs {
            for (r, b) in &y.coeffs {
                let twisted = if *l == 0 { b.clone() } else { self.alg.alpha_power(b, n * l) };
                self.add_term(&mut out, l + r, self.alg.mul(a, &twisted));
            }
        }
        self.check_caps(&out)?;
        Ok(out)
    }

    fn check_caps(&self, x: &CrossedElement<A::Element>) -> Result<()> {
        let u_deg = x.u_degree();
        if u_deg > self.degree_cap {
            return Err(Error::DegreeCap { degree: u_deg, cap: self.degree_cap });
        }
        let c_deg = x.coeffs.values().map(|a| self.alg.degree(a)).max().unwrap_or(0);
        if c_deg > self.degree_cap {
            return Err(Error::DegreeCap { degree: c_deg, cap: self.degree_cap });
        }
        Ok(())
    }

    /// `(a u^l)* = α^{-n l}(a*) u^{-l}`.
    pub fn star(&self, x: &CrossedElement<A::Element>) -> CrossedElement<A::Element> {
        let n = x.power as i64;
        let coeffs = x
            .coeffs
            .iter()
            .map(|(l, a)| (-l, self.alg.alpha_power(&self.alg.star(a), -n * l)))
            .collect();
        CrossedElement { power: x.power, coeffs }
    }

    /// The `u^0` coefficient.
    pub fn conditional_expectation(&self, x: &CrossedElement<A::Element>) -> A::Element {
        x.coeffs.get(&0).cloned().unwrap_or_else(|| self.alg.zero())
    }

    /// `τ₀ ∘ E`.
    pub fn stage_trace(&self, x: &CrossedElement<A::Element>) -> Scalar {
        x.coeffs.get(&0).map(|a| self.alg.trace0(a)).unwrap_or_default()
    }

    /// Random element with `u`-exponents in `[-u_degree, u_degree]`, each
    /// present with probability 1/2.
    pub fn sample(&self, rng: &mut CaseRng, u_degree: i64, coeff_degree: i64) -> CrossedElement<A::Element> {
        let mut x = self.zero();
        for l in sparse_range(rng, u_degree) {
            let a = self.alg.sample(rng, coeff_degree);
            self.add_term(&mut x, l, a);
        }
        if x.is_zero() && rng.gen_bool(0.5) {
            let a = self.alg.sample(rng, coeff_degree);
            self.add_term(&mut x, 0, a);
        }
        x
    }

    pub fn to_json(&self, x: &CrossedElement<A::Element>) -> Value {
        let mut coeffs = Map::new();
        for (l, a) in &x.coeffs {
            coeffs.insert(format!("u:{l}"), self.alg.element_to_json(a));
        }
        json!({ "n": x.power, "algebra": self.alg.tag(), "coeffs": coeffs })
    }

    pub fn from_json(&self, v: &Value) -> Result<CrossedElement<A::Element>> {
        let power = v.get("n").and_then(Value::as_u64).ok_or_else(|| Error::Parse("crossed element needs \"n\"".into()))?;
        if let Some(tag) = v.get("algebra").and_then(Value::as_str) {
            if tag != self.alg.tag() {
                return Err(Error::Parse(format!("expected a {} element, found {tag}", self.alg.tag())));
            }
        }
        if power != self.power {
            return Err(Error::PowerMismatch { left: self.power, right: power });
        }
        let coeffs = v
            .get("coeffs")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Parse("crossed element needs \"coeffs\"".into()))?;
        let mut x = self.zero();
        for (key, val) in coeffs {
            let l: i64 = key
                .strip_prefix("u:")
                .and_then(|l| l.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad crossed element key {key:?}")))?;
            let a = self.alg.element_from_json(val)?;
            self.add_term(&mut x, l, a);
        }
        Ok(x)
    }
}
