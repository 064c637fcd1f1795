//! The odometer presentation: `B_α({n_k})` as the crossed product of
//! `C(X, A)` by `σ(f)(x) = α(f(σ_0^{-1}(x)))`, where `X` is the Cantor set of
//! mixed-radix digit sequences and `σ_0` adds one with carry.
//!
//! Only cylinder functions are represented. A function of depth `k` depends on
//! the first `k - 1` digits and is stored by its `n_k` values, indexed by
//! `j = Σ j_l n_l`. On that truncation `σ_0` is `j ↦ j + 1 mod n_k`.

mod verify;

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

pub use verify::{verify_flip_conjugacy, verify_gk_generation, verify_psi_flip, verify_rg, verify_rho_homomorphism};

use crate::coeff::{CoefficientAlgebra, Powered};
use crate::crossed::MatrixElement;
use crate::error::{Error, Result};
use crate::limits::StageSequence;
use crate::random::{sparse_range, CaseRng};
use crate::scalar::{Rational, Scalar};

fn check_digits(radii: &[u64], digits: &[u64]) -> Result<()> {
    if digits.len() != radii.len() {
        return Err(Error::InvalidInput(format!("{} digits for {} radii", digits.len(), radii.len())));
    }
    if let Some((i, (d, m))) = digits.iter().zip(radii).enumerate().find(|(_, (d, m))| d >= m) {
        return Err(Error::InvalidInput(format!("digit {i} is {d}, radix is {m}")));
    }
    Ok(())
}

/// One step of the odometer on a finite digit string (least significant
/// first). `direction` 1 adds one with carry, -1 subtracts one with borrow; a
/// carry out of the last digit wraps to all zeros (all maxima for a borrow).
pub fn odometer_step(radii: &[u64], digits: &[u64], direction: i64) -> Result<Vec<u64>> {
    check_digits(radii, digits)?;
    let mut out = digits.to_vec();
    for (d, &m) in out.iter_mut().zip(radii) {
        match direction {
            1 if *d + 1 < m => {
                *d += 1;
                return Ok(out);
            }
            1 => *d = 0,
            -1 if *d > 0 => {
                *d -= 1;
                return Ok(out);
            }
            -1 => *d = m - 1,
            _ => return Err(Error::InvalidInput(format!("odometer direction must be ±1, got {direction}"))),
        }
    }
    Ok(out)
}

/// Digitwise complement `x_i ↦ m_i - 1 - x_i`.
pub fn flip(radii: &[u64], digits: &[u64]) -> Result<Vec<u64>> {
    check_digits(radii, digits)?;
    Ok(digits.iter().zip(radii).map(|(d, m)| m - 1 - d).collect())
}

pub fn digits_to_index(radii: &[u64], digits: &[u64]) -> Result<u64> {
    check_digits(radii, digits)?;
    let mut index = 0;
    let mut weight = 1;
    for (d, m) in digits.iter().zip(radii) {
        index += d * weight;
        weight *= m;
    }
    Ok(index)
}

pub fn index_to_digits(radii: &[u64], mut index: u64) -> Vec<u64> {
    radii
        .iter()
        .map(|m| {
            let d = index % m;
            index /= m;
            d
        })
        .collect()
}

type FunctionPair<E> = (CylinderFunction<E>, CylinderFunction<E>);

/// A depth-`k` cylinder function `X → A`, stored as its `n_k` values.
#[derive(Clone, Debug, PartialEq)]
pub struct CylinderFunction<E> {
    depth: usize,
    values: Vec<E>,
}

impl<E> CylinderFunction<E> {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn values(&self) -> &[E] {
        &self.values
    }

    pub fn value(&self, j: usize) -> &E {
        &self.values[j]
    }
}

/// A finite sum `Σ f_d U^d` with every `f_d` of the same depth.
#[derive(Clone, Debug, PartialEq)]
pub struct OdometerElement<E> {
    depth: usize,
    coeffs: BTreeMap<i64, CylinderFunction<E>>,
}

impl<E> OdometerElement<E> {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn coeff(&self, d: i64) -> Option<&CylinderFunction<E>> {
        self.coeffs.get(&d)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &CylinderFunction<E>)> {
        self.coeffs.iter().map(|(d, f)| (*d, f))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// `C(X, A) ×_σ Z` over a fixed stage sequence, restricted to cylinder coefficients.
#[derive(Clone, Debug)]
pub struct OdometerAlgebra<A> {
    pub alg: A,
    pub sequence: StageSequence,
}

impl<A: CoefficientAlgebra> OdometerAlgebra<A> {
    pub fn new(alg: A, sequence: StageSequence) -> Self {
        OdometerAlgebra { alg, sequence }
    }

    /// The algebra for `σ'(f)(x) = α^{-1}(f(σ_0^{-1}(x)))` on the same space.
    pub fn reversed(&self) -> OdometerAlgebra<Powered<A>> {
        OdometerAlgebra::new(Powered::new(self.alg.clone(), -1), self.sequence.clone())
    }

    /// `n_k` as an index bound.
    pub fn points(&self, depth: usize) -> Result<usize> {
        Ok(self.sequence.size(depth)? as usize)
    }

    /// Radii of the digits that a depth-`k` function depends on.
    pub fn radii(&self, depth: usize) -> Result<Vec<u64>> {
        self.sequence.size(depth)?;
        Ok(self.sequence.radii()[..depth - 1].to_vec())
    }

    // Cylinder functions.

    pub fn function(&self, depth: usize, values: Vec<A::Element>) -> Result<CylinderFunction<A::Element>> {
        let n = self.points(depth)?;
        if values.len() != n {
            return Err(Error::SizeMismatch { left: n, right: values.len() });
        }
        Ok(CylinderFunction { depth, values })
    }

    pub fn constant(&self, a: &A::Element, depth: usize) -> Result<CylinderFunction<A::Element>> {
        Ok(CylinderFunction { depth, values: vec![a.clone(); self.points(depth)?] })
    }

    /// `a δ_j`: the value `a` on the cylinder of index `j`, zero elsewhere.
    pub fn point_mass(&self, a: &A::Element, j: usize, depth: usize) -> Result<CylinderFunction<A::Element>> {
        let n = self.points(depth)?;
        let mut values = vec![self.alg.zero(); n];
        values[j % n] = a.clone();
        Ok(CylinderFunction { depth, values })
    }

    /// The indicator `δ_j` of depth `k`.
    pub fn indicator(&self, j: usize, depth: usize) -> Result<CylinderFunction<A::Element>> {
        self.point_mass(&self.alg.one(), j, depth)
    }

    pub fn function_is_zero(&self, f: &CylinderFunction<A::Element>) -> bool {
        f.values.iter().all(|v| self.alg.is_zero(v))
    }

    /// The same function read at a larger depth: `g[j] = f[j mod n_k]`.
    pub fn promote_function(&self, f: &CylinderFunction<A::Element>, depth: usize) -> Result<CylinderFunction<A::Element>> {
        if depth < f.depth {
            return Err(Error::InvalidInput(format!("cannot lower depth {} to {depth}", f.depth)));
        }
        let n = f.values.len();
        let values = (0..self.points(depth)?).map(|j| f.values[j % n].clone()).collect();
        Ok(CylinderFunction { depth, values })
    }

    fn common_functions(
        &self,
        f: &CylinderFunction<A::Element>,
        g: &CylinderFunction<A::Element>,
    ) -> Result<FunctionPair<A::Element>> {
        let depth = f.depth.max(g.depth);
        Ok((self.promote_function(f, depth)?, self.promote_function(g, depth)?))
    }

    fn zip(
        &self,
        f: &CylinderFunction<A::Element>,
        g: &CylinderFunction<A::Element>,
        op: impl Fn(&A::Element, &A::Element) -> A::Element,
    ) -> Result<CylinderFunction<A::Element>> {
        let (f, g) = self.common_functions(f, g)?;
        Ok(CylinderFunction { depth: f.depth, values: f.values.iter().zip(&g.values).map(|(a, b)| op(a, b)).collect() })
    }

    pub fn function_add(&self, f: &CylinderFunction<A::Element>, g: &CylinderFunction<A::Element>) -> Result<CylinderFunction<A::Element>> {
        self.zip(f, g, |a, b| self.alg.add(a, b))
    }

    pub fn function_mul(&self, f: &CylinderFunction<A::Element>, g: &CylinderFunction<A::Element>) -> Result<CylinderFunction<A::Element>> {
        self.zip(f, g, |a, b| self.alg.mul(a, b))
    }

    pub fn function_star(&self, f: &CylinderFunction<A::Element>) -> CylinderFunction<A::Element> {
        CylinderFunction { depth: f.depth, values: f.values.iter().map(|a| self.alg.star(a)).collect() }
    }

    /// `σ^d(f)[j] = α^d(f[j - d mod n_k])`.
    pub fn sigma(&self, f: &CylinderFunction<A::Element>, d: i64) -> CylinderFunction<A::Element> {
        let n = f.values.len() as i64;
        let values = (0..n).map(|j| self.alg.alpha_power(&f.values[(j - d).rem_euclid(n) as usize], d)).collect();
        CylinderFunction { depth: f.depth, values }
    }

    /// `f ∘ g` for the digitwise complement `g`, which on indices is `j ↦ n_k - 1 - j`.
    pub fn flip_function(&self, f: &CylinderFunction<A::Element>) -> CylinderFunction<A::Element> {
        CylinderFunction { depth: f.depth, values: f.values.iter().rev().cloned().collect() }
    }

    pub fn sample_function(&self, rng: &mut CaseRng, depth: usize, degree: i64) -> Result<CylinderFunction<A::Element>> {
        let values = (0..self.points(depth)?).map(|_| self.alg.sample(rng, degree)).collect();
        Ok(CylinderFunction { depth, values })
    }

    // Crossed-product elements.

    pub fn zero(&self, depth: usize) -> Result<OdometerElement<A::Element>> {
        self.points(depth)?;
        Ok(OdometerElement { depth, coeffs: BTreeMap::new() })
    }

    pub fn one(&self, depth: usize) -> Result<OdometerElement<A::Element>> {
        self.from_function(self.constant(&self.alg.one(), depth)?)
    }

    /// `f U^d`.
    pub fn monomial(&self, f: CylinderFunction<A::Element>, d: i64) -> OdometerElement<A::Element> {
        let depth = f.depth;
        let mut x = OdometerElement { depth, coeffs: BTreeMap::new() };
        self.add_term(&mut x, d, f);
        x
    }

    pub fn from_function(&self, f: CylinderFunction<A::Element>) -> Result<OdometerElement<A::Element>> {
        Ok(self.monomial(f, 0))
    }

    /// `U^d` as a depth-`k` element.
    pub fn u(&self, d: i64, depth: usize) -> Result<OdometerElement<A::Element>> {
        Ok(self.monomial(self.constant(&self.alg.one(), depth)?, d))
    }

    fn add_term(&self, x: &mut OdometerElement<A::Element>, d: i64, f: CylinderFunction<A::Element>) {
        debug_assert_eq!(x.depth, f.depth);
        if self.function_is_zero(&f) {
            return;
        }
        let sum = match x.coeffs.remove(&d) {
            Some(prev) => CylinderFunction {
                depth: f.depth,
                values: prev.values.iter().zip(&f.values).map(|(a, b)| self.alg.add(a, b)).collect(),
            },
            None => f,
        };
        if !self.function_is_zero(&sum) {
            x.coeffs.insert(d, sum);
        }
    }

    pub fn from_terms(
        &self,
        depth: usize,
        terms: impl IntoIterator<Item = (i64, CylinderFunction<A::Element>)>,
    ) -> Result<OdometerElement<A::Element>> {
        let mut x = self.zero(depth)?;
        for (d, f) in terms {
            let f = self.promote_function(&f, depth)?;
            self.add_term(&mut x, d, f);
        }
        Ok(x)
    }

    pub fn promote(&self, x: &OdometerElement<A::Element>, depth: usize) -> Result<OdometerElement<A::Element>> {
        self.from_terms(depth, x.coeffs.iter().map(|(d, f)| (*d, f.clone())))
    }

    pub fn add(&self, x: &OdometerElement<A::Element>, y: &OdometerElement<A::Element>) -> Result<OdometerElement<A::Element>> {
        let depth = x.depth.max(y.depth);
        let terms = x.coeffs.iter().chain(&y.coeffs).map(|(d, f)| (*d, f.clone()));
        self.from_terms(depth, terms)
    }

    pub fn neg(&self, x: &OdometerElement<A::Element>) -> OdometerElement<A::Element> {
        let coeffs = x
            .coeffs
            .iter()
            .map(|(d, f)| (*d, CylinderFunction { depth: f.depth, values: f.values.iter().map(|a| self.alg.neg(a)).collect() }))
            .collect();
        OdometerElement { depth: x.depth, coeffs }
    }

    pub fn sub(&self, x: &OdometerElement<A::Element>, y: &OdometerElement<A::Element>) -> Result<OdometerElement<A::Element>> {
        self.add(x, &self.neg(y))
    }

    /// `(f U^d)(g U^e) = f σ^d(g) U^{d+e}`.
    pub fn mul(&self, x: &OdometerElement<A::Element>, y: &OdometerElement<A::Element>) -> Result<OdometerElement<A::Element>> {
        let depth = x.depth.max(y.depth);
        let (x, y) = (self.promote(x, depth)?, self.promote(y, depth)?);
        let mut out = self.zero(depth)?;
        for (d, f) in &x.coeffs {
            for (e, g) in &y.coeffs {
                let term = self.function_mul(f, &self.sigma(g, *d))?;
                self.add_term(&mut out, d + e, term);
            }
        }
        Ok(out)
    }

    /// `(f U^d)* = σ^{-d}(f*) U^{-d}`.
    pub fn star(&self, x: &OdometerElement<A::Element>) -> OdometerElement<A::Element> {
        let mut out = OdometerElement { depth: x.depth, coeffs: BTreeMap::new() };
        for (d, f) in &x.coeffs {
            self.add_term(&mut out, -d, self.sigma(&self.function_star(f), -d));
        }
        out
    }

    pub fn equal(&self, x: &OdometerElement<A::Element>, y: &OdometerElement<A::Element>) -> Result<bool> {
        let depth = x.depth.max(y.depth);
        Ok(self.promote(x, depth)? == self.promote(y, depth)?)
    }

    /// The trace `f U^d ↦ δ_{d,0} (1/n_k) Σ_j τ_0(f[j])`.
    pub fn state(&self, x: &OdometerElement<A::Element>) -> Scalar {
        let Some(f) = x.coeffs.get(&0) else { return Scalar::zero() };
        let mut sum = Scalar::zero();
        for v in &f.values {
            sum = &sum + &self.alg.trace0(v);
        }
        sum.scale(&Rational::new(1, f.values.len() as i64))
    }

    pub fn sample(&self, rng: &mut CaseRng, depth: usize, u_degree: i64, degree: i64) -> Result<OdometerElement<A::Element>> {
        let mut x = self.zero(depth)?;
        for d in sparse_range(rng, u_degree) {
            let f = self.sample_function(rng, depth, degree)?;
            self.add_term(&mut x, d, f);
        }
        Ok(x)
    }

    /// `ρ_k(a u^l e_{i,j}) = U^{-i} a δ_0 U^{j + n_k l} = σ^{-i}(a δ_0) U^{j - i + n_k l}`.
    pub fn rho(&self, stage: usize, x: &MatrixElement<A::Element>) -> Result<OdometerElement<A::Element>> {
        let n = self.points(stage)?;
        if x.size() != n {
            return Err(Error::SizeMismatch { left: n, right: x.size() });
        }
        if x.power() != n as u64 {
            return Err(Error::PowerMismatch { left: n as u64, right: x.power() });
        }
        let mut out = self.zero(stage)?;
        for (i, j, entry) in x.nonzero() {
            for (l, a) in entry.terms() {
                let value = self.alg.alpha_power(a, -(i as i64));
                let f = self.point_mass(&value, (n - i) % n, stage)?;
                self.add_term(&mut out, j as i64 - i as i64 + n as i64 * l, f);
            }
        }
        Ok(out)
    }

    /// `Ψ(f U^d) = (f ∘ g) V^{-d}`, landing in [`reversed`](Self::reversed).
    pub fn psi(&self, x: &OdometerElement<A::Element>) -> OdometerElement<A::Element> {
        let coeffs = x.coeffs.iter().map(|(d, f)| (-d, self.flip_function(f))).collect();
        OdometerElement { depth: x.depth, coeffs }
    }

    pub fn function_to_json(&self, f: &CylinderFunction<A::Element>) -> Value {
        json!({ "depth": f.depth, "values": f.values.iter().map(|v| self.alg.element_to_json(v)).collect::<Vec<_>>() })
    }

    pub fn function_from_json(&self, v: &Value) -> Result<CylinderFunction<A::Element>> {
        let depth = v.get("depth").and_then(Value::as_u64).ok_or_else(|| Error::Parse("cylinder function needs \"depth\"".into()))?;
        let values = v
            .get("values")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("cylinder function needs \"values\"".into()))?
            .iter()
            .map(|e| self.alg.element_from_json(e))
            .collect::<Result<Vec<_>>>()?;
        self.function(depth as usize, values)
    }

    pub fn to_json(&self, x: &OdometerElement<A::Element>) -> Value {
        let mut coeffs = Map::new();
        for (d, f) in &x.coeffs {
            coeffs.insert(format!("U:{d}"), self.function_to_json(f));
        }
        json!({ "depth": x.depth, "coeffs": coeffs })
    }

    pub fn from_json(&self, v: &Value) -> Result<OdometerElement<A::Element>> {
        let depth = v.get("depth").and_then(Value::as_u64).ok_or_else(|| Error::Parse("odometer element needs \"depth\"".into()))?;
        let coeffs = v
            .get("coeffs")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Parse("odometer element needs \"coeffs\"".into()))?;
        let mut terms = Vec::new();
        for (key, val) in coeffs {
            let d: i64 = key
                .strip_prefix("U:")
                .and_then(|d| d.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad odometer element key {key:?}")))?;
            let f = self.function_from_json(val)?;
            if f.depth > depth as usize {
                return Err(Error::Parse(format!("coefficient of depth {} in an element of depth {depth}", f.depth)));
            }
            terms.push((d, f));
        }
        self.from_terms(depth as usize, terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{Angle, CircleFunction, CircleRotation, FiniteCyclicShift};
    use crate::crossed::StageAlgebra;
    use crate::random::case_rng;

    fn odo(sizes: &[u64]) -> OdometerAlgebra<CircleRotation> {
        OdometerAlgebra::new(CircleRotation::new(Angle::theta()), StageSequence::new(sizes.to_vec()).unwrap())
    }

    #[test]
    fn odometer_examples() {
        let radii = [2, 3];
        assert_eq!(odometer_step(&radii, &[1, 2], 1).unwrap(), vec![0, 0]);
        assert_eq!(odometer_step(&radii, &[0, 0], 1).unwrap(), vec![1, 0]);
        assert_eq!(odometer_step(&radii, &[0, 0], -1).unwrap(), vec![1, 2]);
        assert!(odometer_step(&radii, &[2, 0], 1).is_err());
        assert!(odometer_step(&radii, &[0, 0], 2).is_err());
        for j in 0..6 {
            let x = index_to_digits(&radii, j);
            assert_eq!(digits_to_index(&radii, &x).unwrap(), j);
            let next = odometer_step(&radii, &x, 1).unwrap();
            assert_eq!(digits_to_index(&radii, &next).unwrap(), (j + 1) % 6);
        }
        assert_eq!(flip(&radii, &[0, 1]).unwrap(), vec![1, 1]);
        assert!(odometer_step(&[], &[], 1).unwrap().is_empty());
    }

    #[test]
    fn step_inverts_on_random_points() {
        use rand::Rng;
        let radii = [2, 3, 5, 2];
        for case in 0..100 {
            let mut rng = case_rng(3, case);
            let x: Vec<u64> = radii.iter().map(|m| rng.gen_range(0..*m)).collect();
            assert_eq!(odometer_step(&radii, &odometer_step(&radii, &x, 1).unwrap(), -1).unwrap(), x);
            assert_eq!(flip(&radii, &flip(&radii, &x).unwrap()).unwrap(), x);
        }
    }

    #[test]
    fn sigma_examples() {
        let o = odo(&[1, 2, 6]);
        let d0 = o.indicator(0, 3).unwrap();
        assert_eq!(o.sigma(&d0, 1), o.indicator(1, 3).unwrap());
        assert_eq!(o.sigma(&d0, 0), d0);
        assert_eq!(o.sigma(&d0, 6), d0);
        let f = o.constant(&CircleFunction::z(), 3).unwrap();
        let expected = o.constant(&o.alg.alpha_power(&CircleFunction::z(), 6), 3).unwrap();
        assert_eq!(o.sigma(&f, 6), expected);
    }

    #[test]
    fn promotion_replicates_along_refinement() {
        let o = odo(&[1, 2, 6]);
        let mut rng = case_rng(1, 0);
        let f = o.sample_function(&mut rng, 2, 1).unwrap();
        let g = o.promote_function(&f, 3).unwrap();
        for j in 0..6 {
            assert_eq!(g.value(j), f.value(j % 2));
        }
        assert_eq!(o.promote_function(&o.sigma(&f, 1), 3).unwrap(), o.sigma(&g, 1));
        assert!(o.promote_function(&g, 2).is_err());
        let x = o.sample(&mut rng, 2, 2, 1).unwrap();
        let y = o.sample(&mut rng, 2, 2, 1).unwrap();
        let lifted = o.mul(&o.promote(&x, 3).unwrap(), &o.promote(&y, 3).unwrap()).unwrap();
        assert_eq!(o.promote(&o.mul(&x, &y).unwrap(), 3).unwrap(), lifted);
        assert_eq!(o.promote(&o.star(&x), 3).unwrap(), o.star(&o.promote(&x, 3).unwrap()));
    }

    #[test]
    fn product_examples() {
        let o = odo(&[1, 2, 6]);
        let d0u = o.monomial(o.indicator(0, 3).unwrap(), 1);
        assert!(o.mul(&d0u, &d0u).unwrap().is_zero());
        let mut rng = case_rng(2, 0);
        let (f, g) = (o.sample_function(&mut rng, 3, 2).unwrap(), o.sample_function(&mut rng, 3, 2).unwrap());
        let fg = o.mul(&o.from_function(f.clone()).unwrap(), &o.from_function(g.clone()).unwrap()).unwrap();
        assert_eq!(fg, o.from_function(o.function_mul(&f, &g).unwrap()).unwrap());
        // U f U* = σ(f)
        let u = o.u(1, 3).unwrap();
        let conj = o.mul(&o.mul(&u, &o.from_function(f.clone()).unwrap()).unwrap(), &o.star(&u)).unwrap();
        assert_eq!(conj, o.from_function(o.sigma(&f, 1)).unwrap());
    }

    #[test]
    fn star_algebra_axioms() {
        let o = odo(&[1, 3, 6]);
        for case in 0..100 {
            let mut rng = case_rng(4, case);
            let depth = 1 + case % 3;
            let x = o.sample(&mut rng, depth, 2, 1).unwrap();
            let y = o.sample(&mut rng, 3, 1, 1).unwrap();
            let z = o.sample(&mut rng, 2, 1, 1).unwrap();
            let xx = o.mul(&x, &o.star(&x)).unwrap();
            assert_eq!(o.star(&xx), xx);
            assert_eq!(o.star(&o.star(&x)), x);
            let xy = o.mul(&x, &y).unwrap();
            assert_eq!(o.star(&xy), o.mul(&o.star(&y), &o.star(&x)).unwrap());
            if case < 30 {
                let left = o.mul(&xy, &z).unwrap();
                let right = o.mul(&x, &o.mul(&y, &z).unwrap()).unwrap();
                assert!(o.equal(&left, &right).unwrap());
                let sum = o.mul(&x, &o.add(&y, &z).unwrap()).unwrap();
                assert!(o.equal(&sum, &o.add(&xy, &o.mul(&x, &z).unwrap()).unwrap()).unwrap());
            }
        }
    }

    #[test]
    fn rho_examples() {
        let o = odo(&[1, 2, 6]);
        let s = StageAlgebra::stage(o.alg.clone(), 6);
        for (i, j) in [(0, 1), (2, 5), (4, 0)] {
            let expected = o.monomial(o.sigma(&o.indicator(0, 3).unwrap(), -(i as i64)), j as i64 - i as i64);
            assert_eq!(o.rho(3, &s.unit(i, j)).unwrap(), expected);
        }
        let s2 = StageAlgebra::stage(o.alg.clone(), 2);
        let ue = s2.embed(s2.crossed.u(1), 0, 0);
        assert_eq!(o.rho(2, &ue).unwrap(), o.monomial(o.indicator(0, 2).unwrap(), 2));
        assert_eq!(o.rho(3, &s.identity()).unwrap(), o.one(3).unwrap());
        assert!(o.rho(2, &s.identity()).is_err());
        let b1 = StageAlgebra::stage(o.alg.clone(), 1);
        let x = b1.sample(&mut case_rng(1, 1), 2, 2, 1.0);
        let rx = o.rho(1, &x).unwrap();
        for (l, a) in x.entry(0, 0).terms() {
            assert_eq!(rx.coeff(l).unwrap().values(), std::slice::from_ref(a));
        }
    }

    #[test]
    fn psi_examples() {
        let o = odo(&[1, 2, 6]);
        let r = o.reversed();
        let one = o.one(3).unwrap();
        assert_eq!(o.psi(&one), r.one(3).unwrap());
        let f = o.indicator(0, 3).unwrap();
        assert_eq!(o.flip_function(&f), o.indicator(5, 3).unwrap());
        assert_eq!(o.psi(&o.u(2, 3).unwrap()), r.u(-2, 3).unwrap());
    }

    #[test]
    fn cyclic_coefficients() {
        let alg = FiniteCyclicShift::new(3).unwrap();
        let o = OdometerAlgebra::new(alg, StageSequence::new(vec![1, 2, 4]).unwrap());
        let mut rng = case_rng(9, 0);
        let x = o.sample(&mut rng, 3, 2, 1).unwrap();
        let y = o.sample(&mut rng, 2, 2, 1).unwrap();
        assert_eq!(o.star(&o.mul(&x, &y).unwrap()), o.mul(&o.star(&y), &o.star(&x)).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let o = odo(&[1, 3, 6]);
        let x = o.sample(&mut case_rng(5, 0), 2, 2, 2).unwrap();
        let v = o.to_json(&x);
        assert_eq!(v["depth"], 2);
        assert_eq!(o.from_json(&v).unwrap(), x);
        let f = o.indicator(1, 2).unwrap();
        assert_eq!(o.function_from_json(&o.function_to_json(&f)).unwrap(), f);
        assert!(o.function_from_json(&json!({ "depth": 2, "values": [] })).is_err());
        assert!(o.from_json(&json!({ "depth": 2, "coeffs": { "u:1": o.function_to_json(&f) } })).is_err());
    }
}
