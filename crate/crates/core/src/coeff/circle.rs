use std::collections::BTreeMap;

use num::complex::Complex64;
use rand::Rng;
use serde_json::{Map, Value};

use super::{Angle, CoefficientAlgebra};
use crate::error::{Error, Result};
use crate::random::{random_scalar, sparse_range, CaseRng};
use crate::scalar::{Rational, Scalar};

/// Trigonometric polynomial `Σ c_m z^m` on the unit circle.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CircleFunction {
    coeffs: BTreeMap<i64, Scalar>,
}

impl CircleFunction {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Scalar) -> Self {
        Self::monomial(0, c)
    }

    /// `c · z^m`.
    pub fn monomial(m: i64, c: Scalar) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(m, c);
        }
        CircleFunction { coeffs }
    }

    /// The coordinate function `z`.
    pub fn z() -> Self {
        Self::monomial(1, Scalar::one())
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, Scalar)>) -> Self {
        let mut f = Self::zero();
        for (m, c) in terms {
            f.add_term(m, &c);
        }
        f
    }

    fn add_term(&mut self, m: i64, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&m) {
            Some(slot) => {
                let sum = &*slot + c;
                if sum.is_zero() {
                    self.coeffs.remove(&m);
                } else {
                    *slot = sum;
                }
            }
            None => {
                self.coeffs.insert(m, c.clone());
            }
        }
    }

    pub fn coeff(&self, m: i64) -> Scalar {
        self.coeffs.get(&m).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Scalar)> {
        self.coeffs.iter().map(|(m, c)| (*m, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.coeffs {
            out.add_term(*m, c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        CircleFunction { coeffs: self.coeffs.iter().map(|(m, c)| (*m, -c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m, a) in &self.coeffs {
            for (p, b) in &other.coeffs {
                out.add_term(m + p, &(a * b));
            }
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Self::from_terms(self.coeffs.iter().map(|(m, c)| (*m, c * s)))
    }

    /// Pointwise conjugate: `c z^m ↦ c* z^{-m}`.
    pub fn star(&self) -> Self {
        CircleFunction { coeffs: self.coeffs.iter().map(|(m, c)| (-m, c.star())).collect() }
    }

    pub fn degree(&self) -> i64 {
        self.coeffs.keys().map(|m| m.abs()).max().unwrap_or(0)
    }

    /// Value at the point `e^{2πis}` with `t = e^{2πiθ₀}`.
    pub fn evaluate(&self, s: f64, theta0: f64) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(m, c)| c.evaluate(theta0) * Complex64::from_polar(1.0, std::f64::consts::TAU * s * *m as f64))
            .sum()
    }

    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for (m, c) in &self.coeffs {
            map.insert(format!("z:{m}"), c.to_json());
        }
        Value::Object(map)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::Parse("circle function must be an object".into()))?;
        let mut f = Self::zero();
        for (key, val) in obj {
            let m: i64 = key
                .strip_prefix("z:")
                .and_then(|m| m.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad circle function key {key:?}")))?;
            f.add_term(m, &Scalar::from_json(val)?);
        }
        Ok(f)
    }
}

/// `C(T)` (trigonometric polynomials) with the rotation `α(f)(s) = f(s - angle)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CircleRotation {
    pub angle: Angle,
}

impl CircleRotation {
    pub fn new(angle: Angle) -> Self {
        CircleRotation { angle }
    }

    /// Phase picked up by `z^p` under `α^m`: `e(-p·m·q) · t^{-p·m·r}`.
    fn phase(&self, p: i64, m: i64) -> Scalar {
        let k = -p * m;
        Scalar::monomial(
            Rational::one(),
            self.angle.rational_part.mul_int(k),
            self.angle.theta_part.mul_int(k),
        )
        .expect("angle denominator was validated on construction")
    }
}

impl CoefficientAlgebra for CircleRotation {
    type Element = CircleFunction;

    fn tag(&self) -> &'static str {
        "circle"
    }
    fn zero(&self) -> CircleFunction {
        CircleFunction::zero()
    }
    fn one(&self) -> CircleFunction {
        CircleFunction::constant(Scalar::one())
    }
    fn from_scalar(&self, s: &Scalar) -> CircleFunction {
        CircleFunction::constant(s.clone())
    }
    fn is_zero(&self, x: &CircleFunction) -> bool {
        x.is_zero()
    }
    fn add(&self, x: &CircleFunction, y: &CircleFunction) -> CircleFunction {
        x.add(y)
    }
    fn neg(&self, x: &CircleFunction) -> CircleFunction {
        x.neg()
    }
    fn mul(&self, x: &CircleFunction, y: &CircleFunction) -> CircleFunction {
        x.mul(y)
    }
    fn scale(&self, x: &CircleFunction, s: &Scalar) -> CircleFunction {
        x.scale(s)
    }
    fn star(&self, x: &CircleFunction) -> CircleFunction {
        x.star()
    }
    fn alpha_power(&self, x: &CircleFunction, m: i64) -> CircleFunction {
        if m == 0 {
            return x.clone();
        }
        CircleFunction { coeffs: x.coeffs.iter().map(|(p, c)| (*p, c * &self.phase(*p, m))).collect() }
    }
    fn trace0(&self, x: &CircleFunction) -> Scalar {
        x.coeff(0)
    }
    fn degree(&self, x: &CircleFunction) -> i64 {
        x.degree()
    }
    fn sample(&self, rng: &mut CaseRng, degree: i64) -> CircleFunction {
        let mut f = CircleFunction::from_terms(sparse_range(rng, degree).into_iter().map(|m| (m, random_scalar(rng))));
        if f.is_zero() && rng.gen_bool(0.5) {
            f = CircleFunction::constant(random_scalar(rng));
        }
        f
    }
    fn element_to_json(&self, x: &CircleFunction) -> Value {
        x.to_json()
    }
    fn element_from_json(&self, v: &Value) -> Result<CircleFunction> {
        CircleFunction::from_json(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::laws;
    use crate::random::case_rng;

    fn t(p: i64) -> Scalar {
        Scalar::t_power(Rational::from_integer(p))
    }

    #[test]
    fn alpha_power_examples() {
        let theta = CircleRotation::new(Angle::theta());
        let z = CircleFunction::z();
        assert_eq!(theta.alpha_power(&z, 1), CircleFunction::monomial(1, t(-1)));
        assert_eq!(theta.alpha_power(&z, 0), z);
        let quarter = CircleRotation::new("1/4".parse().unwrap());
        let z2 = CircleFunction::monomial(2, Scalar::one());
        assert_eq!(quarter.alpha_power(&z2, 1), CircleFunction::monomial(2, Scalar::from_integer(-1)));
    }

    #[test]
    fn alpha_matches_rotation_numerically() {
        // α(f)(s) = f(s - θ₀) at θ₀ = 0.3
        let alg = CircleRotation::new("1/5+theta".parse().unwrap());
        let theta0 = 0.3;
        for case in 0..20 {
            let mut rng = case_rng(7, case);
            let f = alg.sample(&mut rng, 3);
            let g = alg.alpha_power(&f, 1);
            for k in 0..8 {
                let s = k as f64 / 8.0;
                let lhs = g.evaluate(s, theta0);
                let rhs = f.evaluate(s - 0.2 - theta0, theta0);
                assert!((lhs - rhs).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn trace0_examples() {
        let alg = CircleRotation::new(Angle::theta());
        assert!(alg.trace0(&CircleFunction::z()).is_zero());
        let f = CircleFunction::from_terms([(0, Scalar::one()), (2, Scalar::from_integer(3))]);
        assert!(alg.trace0(&f).is_one());
        assert_eq!(alg.trace0(&CircleFunction::constant(t(1))), t(1));
    }

    #[test]
    fn multiplication_agrees_pointwise() {
        for (case, angle) in ["theta", "1/3+theta", "theta/2"].iter().enumerate() {
            let alg = CircleRotation::new(angle.parse().unwrap());
            for sub in 0..20 {
                let mut rng = case_rng(case as u64, sub);
                let f = alg.sample(&mut rng, 3);
                let g = alg.sample(&mut rng, 3);
                let fg = alg.mul(&f, &g);
                for k in 0..16 {
                    let s = k as f64 / 16.0 + 0.01;
                    let theta0 = 0.618_033_988_749_895;
                    let lhs = fg.evaluate(s, theta0);
                    let rhs = f.evaluate(s, theta0) * g.evaluate(s, theta0);
                    assert!((lhs - rhs).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn star_automorphism_laws() {
        laws::check_star_automorphism(&CircleRotation::new(Angle::theta()), 200);
        laws::check_star_automorphism(&CircleRotation::new("1/4-theta/3".parse().unwrap()), 50);
    }

    #[test]
    fn json_round_trip() {
        let f = CircleFunction::from_terms([(-1, t(1)), (3, Scalar::from_integer(2))]);
        let v = f.to_json();
        assert!(v.get("z:-1").is_some());
        assert_eq!(CircleFunction::from_json(&v).unwrap(), f);
    }
}
