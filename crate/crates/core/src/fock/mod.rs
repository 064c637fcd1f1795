//! Truncated operators on the Fock module `F = ⊕_k δ_k A`.
//!
//! An operator is a finite matrix of coefficients: `a δ_{i,j}` sends `δ_j b`
//! to `δ_i a b`. Only levels `0..depth` are kept, and each operator carries a
//! trust depth: entries with both indices below it are exact. Composition
//! lowers the trust by the largest level raise of the right factor, so cut-off
//! effects never leak into compared entries.
//!
//! The Fock module of `α^k` is the same structure over [`Powered`] with power `k`.

mod theta;
mod verify;

use std::collections::BTreeMap;

use serde_json::{Map, Value};

pub use theta::{beta_generator_image, shuffle_conjugate, theta_block_map, ToeplitzGenerator};
pub use verify::{
    check_compact_preservation, check_eq_id, check_lemma_algebra_blocks, check_shuffle, verify_compact_preservation,
    verify_eq_id, verify_lemma_algebra_blocks, verify_shuffle,
};

use crate::coeff::{CoefficientAlgebra, Powered};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct FockOperator<E> {
    depth: usize,
    trust: usize,
    entries: BTreeMap<(usize, usize), E>,
}

impl<E> FockOperator<E> {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn trust(&self) -> usize {
        self.trust
    }

    pub fn entry(&self, i: usize, j: usize) -> Option<&E> {
        self.entries.get(&(i, j))
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &E)> {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest `i - j` over the stored entries, floored at 0.
    pub fn raise(&self) -> usize {
        self.entries.keys().map(|(i, j)| i.saturating_sub(*j)).max().unwrap_or(0)
    }

    pub fn with_trust(mut self, trust: usize) -> Self {
        self.trust = trust.min(self.depth);
        self
    }
}

/// Periodic weights `λ_1, λ_2, …` with `λ_{i+k} = λ_i`. Positivity is not required.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightSequence<E> {
    weights: Vec<E>,
}

impl<E> WeightSequence<E> {
    pub fn new(weights: Vec<E>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidInput("a weight sequence needs period ≥ 1".into()));
        }
        Ok(WeightSequence { weights })
    }

    pub fn period(&self) -> usize {
        self.weights.len()
    }

    /// `λ_i` for `i ≥ 1`.
    pub fn weight(&self, i: usize) -> &E {
        assert!(i >= 1, "weights are indexed from 1");
        &self.weights[(i - 1) % self.weights.len()]
    }
}

/// Operators on levels `0..depth` of the Fock module over `alg`.
#[derive(Clone, Debug)]
pub struct FockSpace<A> {
    pub alg: A,
    pub depth: usize,
}

/// A square matrix of Fock operators (the `M_k(T_k)` picture).
#[derive(Clone, Debug, PartialEq)]
pub struct FockMatrix<E> {
    size: usize,
    entries: Vec<FockOperator<E>>,
}

impl<E> FockMatrix<E> {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entry(&self, i: usize, j: usize) -> &FockOperator<E> {
        &self.entries[i * self.size + j]
    }

    pub fn permuted(&self, perm: &[usize]) -> Self
    where
        E: Clone,
    {
        let n = self.size;
        let mut entries = self.entries.clone();
        for r in 0..n {
            for c in 0..n {
                entries[perm[r] * n + perm[c]] = self.entries[r * n + c].clone();
            }
        }
        FockMatrix { size: n, entries }
    }
}

impl<A: CoefficientAlgebra> FockSpace<A> {
    pub fn new(alg: A, depth: usize) -> Self {
        FockSpace { alg, depth }
    }

    pub fn zero(&self) -> FockOperator<A::Element> {
        FockOperator { depth: self.depth, trust: self.depth, entries: BTreeMap::new() }
    }

    fn insert(&self, x: &mut FockOperator<A::Element>, i: usize, j: usize, a: A::Element) {
        if i >= x.depth || j >= x.depth || self.alg.is_zero(&a) {
            return;
        }
        match x.entries.remove(&(i, j)) {
            Some(prev) => {
                let sum = self.alg.add(&prev, &a);
                if !self.alg.is_zero(&sum) {
                    x.entries.insert((i, j), sum);
                }
            }
            None => {
                x.entries.insert((i, j), a);
            }
        }
    }

    /// `a δ_{i,j}`.
    pub fn elementary(&self, a: A::Element, i: usize, j: usize) -> FockOperator<A::Element> {
        let mut x = self.zero();
        self.insert(&mut x, i, j, a);
        x
    }

    pub fn from_entries(
        &self,
        trust: usize,
        entries: impl IntoIterator<Item = ((usize, usize), A::Element)>,
    ) -> FockOperator<A::Element> {
        let mut x = self.zero().with_trust(trust);
        for ((i, j), a) in entries {
            self.insert(&mut x, i, j, a);
        }
        x
    }

    pub fn identity(&self) -> FockOperator<A::Element> {
        self.phi(&self.alg.one())
    }

    /// Left action: `δ_k b ↦ δ_k α^k(a) b`.
    pub fn phi(&self, a: &A::Element) -> FockOperator<A::Element> {
        self.from_entries(self.depth, (0..self.depth).map(|i| ((i, i), self.alg.alpha_power(a, i as i64))))
    }

    /// Weighted creation operator: `δ_k b ↦ δ_{k+1} α^k(λ_{k+1} a) b`.
    pub fn weighted(&self, lambda: &WeightSequence<A::Element>, a: &A::Element) -> FockOperator<A::Element> {
        let entries = (0..self.depth.saturating_sub(1))
            .map(|k| ((k + 1, k), self.alg.alpha_power(&self.alg.mul(lambda.weight(k + 1), a), k as i64)));
        self.from_entries(self.depth, entries)
    }

    /// Unweighted creation operator `T(a)`.
    pub fn creation(&self, a: &A::Element) -> FockOperator<A::Element> {
        let entries = (0..self.depth.saturating_sub(1)).map(|k| ((k + 1, k), self.alg.alpha_power(a, k as i64)));
        self.from_entries(self.depth, entries)
    }

    /// `S = T(1)`.
    pub fn shift(&self) -> FockOperator<A::Element> {
        self.creation(&self.alg.one())
    }

    /// Projection onto level 0.
    pub fn p0(&self) -> FockOperator<A::Element> {
        self.elementary(self.alg.one(), 0, 0)
    }

    fn check_depth(&self, x: &FockOperator<A::Element>, y: &FockOperator<A::Element>) -> Result<()> {
        if x.depth != y.depth {
            return Err(Error::SizeMismatch { left: x.depth, right: y.depth });
        }
        Ok(())
    }

    pub fn add(&self, x: &FockOperator<A::Element>, y: &FockOperator<A::Element>) -> Result<FockOperator<A::Element>> {
        self.check_depth(x, y)?;
        let mut out = x.clone().with_trust(x.trust.min(y.trust));
        for (&(i, j), a) in &y.entries {
            self.insert(&mut out, i, j, a.clone());
        }
        Ok(out)
    }

    pub fn neg(&self, x: &FockOperator<A::Element>) -> FockOperator<A::Element> {
        FockOperator { depth: x.depth, trust: x.trust, entries: x.entries.iter().map(|(k, a)| (*k, self.alg.neg(a))).collect() }
    }

    pub fn sub(&self, x: &FockOperator<A::Element>, y: &FockOperator<A::Element>) -> Result<FockOperator<A::Element>> {
        self.add(x, &self.neg(y))
    }

    /// `X ∘ Y`; trust becomes `min(trust X, trust Y) - raise(Y)`.
    pub fn compose(&self, x: &FockOperator<A::Element>, y: &FockOperator<A::Element>) -> Result<FockOperator<A::Element>> {
        self.check_depth(x, y)?;
        let trust = x.trust.min(y.trust).saturating_sub(y.raise());
        let mut out = FockOperator { depth: x.depth, trust, entries: BTreeMap::new() };
        let mut rows: BTreeMap<usize, Vec<(usize, &A::Element)>> = BTreeMap::new();
        for (&(l, j), b) in &y.entries {
            rows.entry(l).or_default().push((j, b));
        }
        for (&(i, l), a) in &x.entries {
            if let Some(row) = rows.get(&l) {
                for (j, b) in row {
                    self.insert(&mut out, i, *j, self.alg.mul(a, b));
                }
            }
        }
        Ok(out)
    }

    /// `(a δ_{i,j})* = a* δ_{j,i}`.
    pub fn adjoint(&self, x: &FockOperator<A::Element>) -> FockOperator<A::Element> {
        FockOperator {
            depth: x.depth,
            trust: x.trust,
            entries: x.entries.iter().map(|(&(i, j), a)| ((j, i), self.alg.star(a))).collect(),
        }
    }

    /// Window on which `x` and `y` are both exact.
    pub fn joint_trust(x: &FockOperator<A::Element>, y: &FockOperator<A::Element>) -> usize {
        x.trust.min(y.trust)
    }

    /// First trusted position where `x` and `y` differ.
    pub fn first_difference(&self, x: &FockOperator<A::Element>, y: &FockOperator<A::Element>) -> Option<(usize, usize)> {
        let t = Self::joint_trust(x, y);
        let zero = self.alg.zero();
        let keys: std::collections::BTreeSet<_> =
            x.entries.keys().chain(y.entries.keys()).filter(|(i, j)| *i < t && *j < t).copied().collect();
        keys.into_iter()
            .find(|k| x.entries.get(k).unwrap_or(&zero) != y.entries.get(k).unwrap_or(&zero))
    }

    /// Equality on the jointly trusted window.
    pub fn agrees(&self, x: &FockOperator<A::Element>, y: &FockOperator<A::Element>) -> bool {
        self.first_difference(x, y).is_none()
    }

    /// Splits levels by residue mod `k`: entry `(i, j)` goes to block
    /// `(i mod k, j mod k)` at position `(i div k, j div k)`. Row-major `k × k`.
    pub fn block_decompose(&self, x: &FockOperator<A::Element>, k: usize) -> FockMatrix<A::Element> {
        assert!(k >= 1, "block period must be positive");
        let depth = x.depth.div_ceil(k);
        let blank = FockOperator { depth, trust: x.trust / k, entries: BTreeMap::new() };
        let mut entries = vec![blank; k * k];
        for (&(i, j), a) in &x.entries {
            entries[(i % k) * k + j % k].entries.insert((i / k, j / k), a.clone());
        }
        FockMatrix { size: k, entries }
    }

    /// Inverse of [`block_decompose`](Self::block_decompose) for an operator of the given depth and trust.
    pub fn reassemble(&self, blocks: &FockMatrix<A::Element>, depth: usize, trust: usize) -> FockOperator<A::Element> {
        let k = blocks.size;
        let mut out = FockOperator { depth, trust, entries: BTreeMap::new() };
        for r in 0..k {
            for c in 0..k {
                for (&(p, q), a) in &blocks.entry(r, c).entries {
                    self.insert(&mut out, p * k + r, q * k + c, a.clone());
                }
            }
        }
        out
    }

    pub fn matrix_zero(&self, size: usize) -> FockMatrix<A::Element> {
        FockMatrix { size, entries: vec![self.zero(); size * size] }
    }

    /// `x e_{i,j}` in a `size × size` matrix.
    pub fn matrix_embed(&self, x: FockOperator<A::Element>, size: usize, i: usize, j: usize) -> FockMatrix<A::Element> {
        let mut out = self.matrix_zero(size);
        out.entries[i * size + j] = x;
        out
    }

    pub fn matrix_add(&self, x: &FockMatrix<A::Element>, y: &FockMatrix<A::Element>) -> Result<FockMatrix<A::Element>> {
        if x.size != y.size {
            return Err(Error::SizeMismatch { left: x.size, right: y.size });
        }
        let entries = x.entries.iter().zip(&y.entries).map(|(a, b)| self.add(a, b)).collect::<Result<_>>()?;
        Ok(FockMatrix { size: x.size, entries })
    }

    pub fn matrix_sub(&self, x: &FockMatrix<A::Element>, y: &FockMatrix<A::Element>) -> Result<FockMatrix<A::Element>> {
        let neg = FockMatrix { size: y.size, entries: y.entries.iter().map(|a| self.neg(a)).collect() };
        self.matrix_add(x, &neg)
    }

    /// Matrix product; every entry's trust is the minimum over the contributing products.
    pub fn matrix_mul(&self, x: &FockMatrix<A::Element>, y: &FockMatrix<A::Element>) -> Result<FockMatrix<A::Element>> {
        if x.size != y.size {
            return Err(Error::SizeMismatch { left: x.size, right: y.size });
        }
        let n = x.size;
        let mut out = self.matrix_zero(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = self.zero();
                for l in 0..n {
                    let p = self.compose(x.entry(i, l), y.entry(l, j))?;
                    acc = self.add(&acc, &p)?;
                }
                out.entries[i * n + j] = acc;
            }
        }
        Ok(out)
    }

    pub fn matrix_adjoint(&self, x: &FockMatrix<A::Element>) -> FockMatrix<A::Element> {
        let n = x.size;
        FockMatrix { size: n, entries: (0..n * n).map(|k| self.adjoint(x.entry(k % n, k / n))).collect() }
    }

    /// First block `(r, c)` and position where `x` and `y` differ on trusted windows.
    pub fn matrix_first_difference(
        &self,
        x: &FockMatrix<A::Element>,
        y: &FockMatrix<A::Element>,
    ) -> Option<((usize, usize), (usize, usize))> {
        if x.size != y.size {
            return Some(((x.size, y.size), (0, 0)));
        }
        let n = x.size;
        (0..n * n).find_map(|k| self.first_difference(&x.entries[k], &y.entries[k]).map(|p| ((k / n, k % n), p)))
    }

    pub fn matrix_min_trust(x: &FockMatrix<A::Element>) -> usize {
        x.entries.iter().map(|e| e.trust).min().unwrap_or(0)
    }

    pub fn to_json(&self, x: &FockOperator<A::Element>) -> Value {
        let mut entries = Map::new();
        for (&(i, j), a) in &x.entries {
            entries.insert(format!("{i},{j}"), self.alg.element_to_json(a));
        }
        serde_json::json!({ "depth": x.depth, "trust": x.trust, "entries": entries })
    }

    pub fn from_json(&self, v: &Value) -> Result<FockOperator<A::Element>> {
        let field = |k: &str| {
            v.get(k).and_then(Value::as_u64).map(|x| x as usize).ok_or_else(|| Error::Parse(format!("Fock operator needs {k:?}")))
        };
        let (depth, trust) = (field("depth")?, field("trust")?);
        if depth != self.depth {
            return Err(Error::SizeMismatch { left: self.depth, right: depth });
        }
        let entries = v.get("entries").and_then(Value::as_object).ok_or_else(|| Error::Parse("Fock operator needs \"entries\"".into()))?;
        let mut out = self.zero().with_trust(trust);
        for (key, val) in entries {
            let bad = || Error::Parse(format!("bad Fock entry key {key:?}"));
            let (i, j) = key.split_once(',').ok_or_else(bad)?;
            let (i, j): (usize, usize) = (i.parse().map_err(|_| bad())?, j.parse().map_err(|_| bad())?);
            if i >= depth || j >= depth {
                return Err(Error::InvalidInput(format!("entry ({i},{j}) outside depth {depth}")));
            }
            self.insert(&mut out, i, j, self.alg.element_from_json(val)?);
        }
        Ok(out)
    }

    /// The Fock module of `α^k` over the same coefficients.
    pub fn powered(&self, k: i64, depth: usize) -> FockSpace<Powered<A>> {
        FockSpace::new(Powered::new(self.alg.clone(), k), depth)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{Angle, CircleFunction, CircleRotation};
    use crate::random::case_rng;
    use crate::scalar::{Rational, Scalar};

    fn space(depth: usize) -> FockSpace<CircleRotation> {
        FockSpace::new(CircleRotation::new(Angle::theta()), depth)
    }

    #[test]
    fn phi_examples() {
        let f = space(3);
        assert_eq!(f.phi(&f.alg.one()), f.identity());
        let t = |p| Scalar::t_power(Rational::from_integer(p));
        let expected = f.from_entries(3, (0..3).map(|i| ((i, i), CircleFunction::monomial(1, t(-(i as i64))))));
        assert_eq!(f.phi(&CircleFunction::z()), expected);
        assert!(f.phi(&CircleFunction::zero()).is_zero());
    }

    #[test]
    fn weighted_examples() {
        let f = space(5);
        let ones = WeightSequence::new(vec![f.alg.one()]).unwrap();
        assert_eq!(f.weighted(&ones, &f.alg.one()), f.shift());
        let f = space(4);
        let lambda = WeightSequence::new(vec![CircleFunction::zero(), f.alg.one()]).unwrap();
        let w = f.weighted(&lambda, &f.alg.one());
        assert_eq!(w.entries().map(|(k, _)| k).collect::<Vec<_>>(), vec![(2, 1)]);
        assert!(f.weighted(&lambda, &CircleFunction::zero()).is_zero());
    }

    #[test]
    fn composition_examples() {
        let f = space(6);
        let s = f.shift();
        let ss = f.compose(&f.adjoint(&s), &s).unwrap();
        assert_eq!(ss.trust(), 5);
        assert!(f.agrees(&ss, &f.identity()));
        let s_s = f.compose(&s, &f.adjoint(&s)).unwrap();
        assert!(f.agrees(&s_s, &f.sub(&f.identity(), &f.p0()).unwrap()));
        assert!(f.compose(&s, &f.zero()).unwrap().is_zero());
    }

    #[test]
    fn weighted_is_right_linear() {
        let f = space(8);
        for case in 0..20 {
            let mut rng = case_rng(21, case);
            let lambda = WeightSequence::new(vec![f.alg.sample(&mut rng, 1), f.alg.sample(&mut rng, 1)]).unwrap();
            let (a, c) = (f.alg.sample(&mut rng, 2), f.alg.sample(&mut rng, 2));
            let lhs = f.weighted(&lambda, &f.alg.mul(&a, &c));
            let rhs = f.compose(&f.weighted(&lambda, &a), &f.phi(&c)).unwrap();
            assert!(f.agrees(&lhs, &rhs), "case {case}");
        }
    }

    #[test]
    fn adjoint_laws() {
        let f = space(8);
        for case in 0..20 {
            let mut rng = case_rng(22, case);
            let x = f.creation(&f.alg.sample(&mut rng, 1));
            let y = f.compose(&f.phi(&f.alg.sample(&mut rng, 1)), &f.adjoint(&f.shift())).unwrap();
            let xy = f.compose(&x, &y).unwrap();
            let yx = f.compose(&f.adjoint(&y), &f.adjoint(&x)).unwrap();
            assert!(f.agrees(&f.adjoint(&xy), &yx));
            assert!(FockSpace::<CircleRotation>::joint_trust(&xy, &yx) >= 2);
            assert_eq!(f.adjoint(&f.adjoint(&x)), x);
        }
    }

    #[test]
    fn block_decomposition_examples() {
        let f = space(8);
        let z = CircleFunction::z();
        let blocks = f.block_decompose(&f.phi(&z), 2);
        assert!(blocks.entry(0, 1).is_zero() && blocks.entry(1, 0).is_zero());
        let blocks = f.block_decompose(&f.shift(), 2);
        assert!(!blocks.entry(1, 0).is_zero() && !blocks.entry(0, 1).is_zero());
        assert!(blocks.entry(0, 0).is_zero() && blocks.entry(1, 1).is_zero());
        // level 1 → 2 crosses from block column 1 to block row 0, position (1, 0)
        assert!(blocks.entry(0, 1).entry(1, 0).is_some());
        let zero = f.block_decompose(&f.zero(), 3);
        assert!((0..9).all(|k| zero.entry(k / 3, k % 3).is_zero()));
    }

    #[test]
    fn reassembly_inverts_decomposition() {
        let f = space(7);
        for case in 0..20 {
            let mut rng = case_rng(23, case);
            let lambda = WeightSequence::new(vec![f.alg.sample(&mut rng, 1); 3]).unwrap();
            let x = f.add(&f.weighted(&lambda, &f.alg.sample(&mut rng, 1)), &f.phi(&f.alg.sample(&mut rng, 1))).unwrap();
            for k in 1..=3 {
                assert_eq!(f.reassemble(&f.block_decompose(&x, k), x.depth(), x.trust()), x);
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let f = space(4);
        let x = f.compose(&f.creation(&CircleFunction::z()), &f.adjoint(&f.shift())).unwrap();
        assert_eq!(f.from_json(&f.to_json(&x)).unwrap(), x);
        assert!(space(5).from_json(&f.to_json(&x)).is_err());
    }
}
