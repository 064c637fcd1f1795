use rand::Rng;
use serde_json::{json, Value};

use super::CoefficientAlgebra;
use crate::error::{Error, Result};
use crate::random::{random_scalar, CaseRng};
use crate::scalar::{Rational, Scalar};

/// A function `Z/d → C`, stored as its `d` values.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteCyclicFunction {
    values: Vec<Scalar>,
}

impl FiniteCyclicFunction {
    pub fn new(values: Vec<Scalar>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput("a finite cyclic function needs d ≥ 1 values".into()));
        }
        Ok(FiniteCyclicFunction { values })
    }

    pub fn constant(d: usize, c: Scalar) -> Self {
        FiniteCyclicFunction { values: vec![c; d] }
    }

    /// Indicator of the point `i`.
    pub fn indicator(d: usize, i: usize) -> Self {
        let mut values = vec![Scalar::zero(); d];
        values[i % d] = Scalar::one();
        FiniteCyclicFunction { values }
    }

    pub fn modulus(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    fn zip(&self, other: &Self, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Self {
        assert_eq!(self.modulus(), other.modulus(), "finite cyclic functions of different moduli");
        FiniteCyclicFunction { values: self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect() }
    }

    fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Self {
        FiniteCyclicFunction { values: self.values.iter().map(f).collect() }
    }

    /// `result[i] = f[(i - m) mod d]`.
    pub fn shift(&self, m: i64) -> Self {
        let d = self.modulus() as i64;
        let values = (0..d).map(|i| self.values[(i - m).rem_euclid(d) as usize].clone()).collect();
        FiniteCyclicFunction { values }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "d": self.modulus(),
            "values": self.values.iter().map(Scalar::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let d = v
            .get("d")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("finite cyclic function needs \"d\"".into()))? as usize;
        let values = v
            .get("values")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("finite cyclic function needs \"values\"".into()))?;
        if values.len() != d {
            return Err(Error::Parse(format!("expected {d} values, found {}", values.len())));
        }
        FiniteCyclicFunction::new(values.iter().map(Scalar::from_json).collect::<Result<_>>()?)
    }
}

/// Functions on `Z/d` with the shift automorphism and the uniform trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteCyclicShift {
    pub modulus: usize,
}

impl FiniteCyclicShift {
    pub fn new(modulus: usize) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidInput("modulus must be positive".into()));
        }
        Ok(FiniteCyclicShift { modulus })
    }

    fn check(&self, x: &FiniteCyclicFunction) {
        assert_eq!(x.modulus(), self.modulus, "element does not belong to Z/{}", self.modulus);
    }
}

impl CoefficientAlgebra for FiniteCyclicShift {
    type Element = FiniteCyclicFunction;

    fn tag(&self) -> &'static str {
        "cyclic"
    }
    fn zero(&self) -> FiniteCyclicFunction {
        FiniteCyclicFunction::constant(self.modulus, Scalar::zero())
    }
    fn one(&self) -> FiniteCyclicFunction {
        FiniteCyclicFunction::constant(self.modulus, Scalar::one())
    }
    fn from_scalar(&self, s: &Scalar) -> FiniteCyclicFunction {
        FiniteCyclicFunction::constant(self.modulus, s.clone())
    }
    fn is_zero(&self, x: &FiniteCyclicFunction) -> bool {
        x.values.iter().all(Scalar::is_zero)
    }
    fn add(&self, x: &FiniteCyclicFunction, y: &FiniteCyclicFunction) -> FiniteCyclicFunction {
        x.zip(y, |a, b| a + b)
    }
    fn neg(&self, x: &FiniteCyclicFunction) -> FiniteCyclicFunction {
        x.map(|a| -a)
    }
    fn sub(&self, x: &FiniteCyclicFunction, y: &FiniteCyclicFunction) -> FiniteCyclicFunction {
        x.zip(y, |a, b| a - b)
    }
    fn mul(&self, x: &FiniteCyclicFunction, y: &FiniteCyclicFunction) -> FiniteCyclicFunction {
        x.zip(y, |a, b| a * b)
    }
    fn scale(&self, x: &FiniteCyclicFunction, s: &Scalar) -> FiniteCyclicFunction {
        x.map(|a| a * s)
    }
    fn star(&self, x: &FiniteCyclicFunction) -> FiniteCyclicFunction {
        x.map(Scalar::star)
    }
    fn alpha_power(&self, x: &FiniteCyclicFunction, m: i64) -> FiniteCyclicFunction {
        self.check(x);
        x.shift(m)
    }
    fn trace0(&self, x: &FiniteCyclicFunction) -> Scalar {
        self.check(x);
        let sum = x.values.iter().fold(Scalar::zero(), |acc, v| &acc + v);
        sum.scale(&Rational::new(1, self.modulus as i64))
    }
    fn degree(&self, _x: &FiniteCyclicFunction) -> i64 {
        0
    }
    fn sample(&self, rng: &mut CaseRng, _degree: i64) -> FiniteCyclicFunction {
        let values = (0..self.modulus)
            .map(|_| if rng.gen_ratio(3, 4) { random_scalar(rng) } else { Scalar::zero() })
            .collect();
        FiniteCyclicFunction { values }
    }
    fn element_to_json(&self, x: &FiniteCyclicFunction) -> Value {
        x.to_json()
    }
    fn element_from_json(&self, v: &Value) -> Result<FiniteCyclicFunction> {
        let f = FiniteCyclicFunction::from_json(v)?;
        if f.modulus() != self.modulus {
            return Err(Error::Parse(format!("expected modulus {}, found {}", self.modulus, f.modulus())));
        }
        Ok(f)
    }
}

/// Orbits of `i ↦ i + n` on `Z/d`, each sorted, ordered by least element.
pub fn shift_orbits(d: usize, n: u64) -> Vec<Vec<usize>> {
    let mut seen = vec![false; d];
    let mut orbits = Vec::new();
    for start in 0..d {
        if seen[start] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            orbit.push(i);
            i = (i + (n % d as u64) as usize) % d;
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    orbits
}

/// A nonempty proper subset `S ⊂ Z/d` with `S + n = S`, if one exists.
///
/// Such subsets are exactly the nonempty proper unions of shift orbits; they
/// index the proper nonzero `α^n`-invariant ideals (functions vanishing off
/// `S`). The first union in enumeration order is the orbit of `0`.
pub fn cyclic_invariant_ideal_search(d: usize, n: u64) -> Option<Vec<usize>> {
    let orbits = shift_orbits(d, n);
    if orbits.len() < 2 {
        return None;
    }
    // Enumerate unions by bitmask over orbits; the full union is excluded.
    let k = orbits.len().min(63);
    let full = if orbits.len() > 63 { u64::MAX } else { (1u64 << k) - 1 };
    (1..full).map(|mask| {
        let mut subset: Vec<usize> =
            (0..k).filter(|b| mask >> b & 1 == 1).flat_map(|b| orbits[b].iter().copied()).collect();
        subset.sort_unstable();
        subset
    })
    .find(|s| !s.is_empty() && s.len() < d)
}
