use serde_json::{json, Value};

use super::{CrossedElement, CrossedProduct};
use crate::coeff::CoefficientAlgebra;
use crate::error::{Error, Result};
use crate::random::CaseRng;
use crate::scalar::{Rational, Scalar};
use rand::Rng;

/// A `size × size` matrix over `A ×_{α^power} Z`, stored densely row-major.
///
/// For the stage algebra `B(n)` both `size` and `power` equal `n`; they are
/// kept separate because the amplification reads `M_p(B(n))` as a size `pn`
/// matrix over the same crossed product.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixElement<E> {
    size: usize,
    power: u64,
    entries: Vec<CrossedElement<E>>,
}

impl<E> MatrixElement<E> {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn power(&self) -> u64 {
        self.power
    }

    pub fn entry(&self, i: usize, j: usize) -> &CrossedElement<E> {
        &self.entries[i * self.size + j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(CrossedElement::is_zero)
    }

    /// Nonzero entries as `(row, column, entry)`.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize, &CrossedElement<E>)> {
        let n = self.size;
        self.entries.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(move |(k, x)| (k / n, k % n, x))
    }

    /// Conjugation by a permutation: entry `(r, c)` moves to `(perm[r], perm[c])`.
    pub fn permuted(&self, perm: &[usize]) -> Self
    where
        E: Clone,
    {
        assert_eq!(perm.len(), self.size, "permutation length must equal the matrix size");
        let n = self.size;
        let mut entries = self.entries.clone();
        for r in 0..n {
            for c in 0..n {
                entries[perm[r] * n + perm[c]] = self.entries[r * n + c].clone();
            }
        }
        MatrixElement { size: n, power: self.power, entries }
    }

    /// The `size × size` block with top-left corner `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, size: usize) -> Self
    where
        E: Clone,
    {
        let entries = (0..size * size).map(|k| self.entry(r0 + k / size, c0 + k % size).clone()).collect();
        MatrixElement { size, power: self.power, entries }
    }

    /// Same entries read over a crossed product of another power.
    pub fn reinterpret(self, power: u64) -> Self {
        MatrixElement {
            size: self.size,
            power,
            entries: self.entries.into_iter().map(|x| x.reinterpret(power)).collect(),
        }
    }
}

/// `M_size(A ×_{α^power} Z)`.
#[derive(Clone, Debug)]
pub struct StageAlgebra<A> {
    pub crossed: CrossedProduct<A>,
    pub size: usize,
}

impl<A: CoefficientAlgebra> StageAlgebra<A> {
    /// The stage algebra `B(n) = M_n(A ×_{α^n} Z)`.
    pub fn stage(alg: A, n: u64) -> Self {
        StageAlgebra { crossed: CrossedProduct::new(alg, n), size: n as usize }
    }

    pub fn new(crossed: CrossedProduct<A>, size: usize) -> Self {
        assert!(size >= 1, "matrix size must be positive");
        StageAlgebra { crossed, size }
    }

    pub fn alg(&self) -> &A {
        &self.crossed.alg
    }

    pub fn power(&self) -> u64 {
        self.crossed.power
    }

    pub fn zero(&self) -> MatrixElement<A::Element> {
        MatrixElement { size: self.size, power: self.power(), entries: vec![self.crossed.zero(); self.size * self.size] }
    }

    pub fn identity(&self) -> MatrixElement<A::Element> {
        let mut x = self.zero();
        for i in 0..self.size {
            x.entries[i * self.size + i] = self.crossed.one();
        }
        x
    }

    /// `x · e_{i,j}`.
    pub fn embed(&self, x: CrossedElement<A::Element>, i: usize, j: usize) -> MatrixElement<A::Element> {
        assert!(i < self.size && j < self.size, "matrix unit ({i},{j}) out of range for size {}", self.size);
        let mut out = self.zero();
        out.entries[i * self.size + j] = x;
        out
    }

    /// The matrix unit `e_{i,j}`.
    pub fn unit(&self, i: usize, j: usize) -> MatrixElement<A::Element> {
        self.embed(self.crossed.one(), i, j)
    }

    /// `a · u^l · e_{i,j}`.
    pub fn monomial(&self, a: A::Element, l: i64, i: usize, j: usize) -> MatrixElement<A::Element> {
        self.embed(self.crossed.monomial(a, l), i, j)
    }

    pub fn from_entries(&self, entries: Vec<Vec<CrossedElement<A::Element>>>) -> Result<MatrixElement<A::Element>> {
        if entries.len() != self.size || entries.iter().any(|r| r.len() != self.size) {
            return Err(Error::SizeMismatch { left: self.size, right: entries.len() });
        }
        let entries: Vec<_> = entries.into_iter().flatten().collect();
        for x in &entries {
            if x.power() != self.power() {
                return Err(Error::PowerMismatch { left: self.power(), right: x.power() });
            }
        }
        Ok(MatrixElement { size: self.size, power: self.power(), entries })
    }

    /// Adds `x` into the `(i, j)` entry.
    pub fn accumulate(&self, m: &mut MatrixElement<A::Element>, i: usize, j: usize, x: &CrossedElement<A::Element>) -> Result<()> {
        let slot = &mut m.entries[i * self.size + j];
        *slot = self.crossed.add(slot, x)?;
        Ok(())
    }

    /// Adds `block` into `m` with its top-left corner at `(r0, c0)`.
    pub fn accumulate_block(
        &self,
        m: &mut MatrixElement<A::Element>,
        r0: usize,
        c0: usize,
        block: &MatrixElement<A::Element>,
    ) -> Result<()> {
        for (i, j, x) in block.nonzero() {
            self.accumulate(m, r0 + i, c0 + j, x)?;
        }
        Ok(())
    }

    fn check(&self, x: &MatrixElement<A::Element>) -> Result<()> {
        if x.size != self.size {
            return Err(Error::SizeMismatch { left: self.size, right: x.size });
        }
        if x.power != self.power() {
            return Err(Error::PowerMismatch { left: self.power(), right: x.power });
        }
        Ok(())
    }

    pub fn add(&self, x: &MatrixElement<A::Element>, y: &MatrixElement<A::Element>) -> Result<MatrixElement<A::Element>> {
        self.check(x)?;
        self.check(y)?;
        let entries = x.entries.iter().zip(&y.entries).map(|(a, b)| self.crossed.add(a, b)).collect::<Result<_>>()?;
        Ok(MatrixElement { size: self.size, power: self.power(), entries })
    }

    pub fn neg(&self, x: &MatrixElement<A::Element>) -> MatrixElement<A::Element> {
        MatrixElement { size: x.size, power: x.power, entries: x.entries.iter().map(|a| self.crossed.neg(a)).collect() }
    }

    pub fn sub(&self, x: &MatrixElement<A::Element>, y: &MatrixElement<A::Element>) -> Result<MatrixElement<A::Element>> {
        self.add(x, &self.neg(y))
    }

    pub fn scale(&self, x: &MatrixElement<A::Element>, s: &Scalar) -> MatrixElement<A::Element> {
        MatrixElement { size: x.size, power: x.power, entries: x.entries.iter().map(|a| self.crossed.scale(a, s)).collect() }
    }

    pub fn mul(&self, x: &MatrixElement<A::Element>, y: &MatrixElement<A::Element>) -> Result<MatrixElement<A::Element>> {
        self.check(x)?;
        self.check(y)?;
        let n = self.size;
        let mut out = self.zero();
        for i in 0..n {
            for k in 0..n {
                let a = &x.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &y.entries[k * n + j];
                    if b.is_zero() {
                        continue;
                    }
                    let p = self.crossed.mul(a, b)?;
                    let slot = &mut out.entries[i * n + j];
                    *slot = self.crossed.add(slot, &p)?;
                }
            }
        }
        Ok(out)
    }

    /// Entrywise star of the transpose.
    pub fn star(&self, x: &MatrixElement<A::Element>) -> MatrixElement<A::Element> {
        let n = x.size;
        let entries = (0..n * n).map(|k| self.crossed.star(&x.entries[(k % n) * n + k / n])).collect();
        MatrixElement { size: n, power: x.power, entries }
    }

    /// `(1/size) Σ_i τ(x_ii)`.
    pub fn matrix_trace(&self, x: &MatrixElement<A::Element>) -> Scalar {
        let sum = (0..x.size).fold(Scalar::zero(), |acc, i| &acc + &self.crossed.stage_trace(x.entry(i, i)));
        sum.scale(&Rational::new(1, x.size as i64))
    }

    /// Random matrix whose entries are each nonzero with probability `density`.
    pub fn sample(&self, rng: &mut CaseRng, u_degree: i64, coeff_degree: i64, density: f64) -> MatrixElement<A::Element> {
        let mut out = self.zero();
        for k in 0..self.size * self.size {
            if rng.gen_bool(density) {
                out.entries[k] = self.crossed.sample(rng, u_degree, coeff_degree);
            }
        }
        out
    }

    pub fn to_json(&self, x: &MatrixElement<A::Element>) -> Value {
        let rows: Vec<Value> = (0..x.size)
            .map(|i| Value::Array((0..x.size).map(|j| self.crossed.to_json(x.entry(i, j))).collect()))
            .collect();
        json!({ "size": x.size, "entries": rows })
    }

    pub fn from_json(&self, v: &Value) -> Result<MatrixElement<A::Element>> {
        let size = v.get("size").and_then(Value::as_u64).ok_or_else(|| Error::Parse("matrix needs \"size\"".into()))? as usize;
        if size != self.size {
            return Err(Error::SizeMismatch { left: self.size, right: size });
        }
        let rows = v.get("entries").and_then(Value::as_array).ok_or_else(|| Error::Parse("matrix needs \"entries\"".into()))?;
        let entries = rows
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| Error::Parse("matrix row must be an array".into()))?
                    .iter()
                    .map(|x| self.crossed.from_json(x))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        self.from_entries(entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{Angle, CircleRotation, FiniteCyclicShift};
    use crate::random::case_rng;

    fn b(n: u64) -> StageAlgebra<CircleRotation> {
        StageAlgebra::stage(CircleRotation::new(Angle::theta()), n)
    }

    #[test]
    fn matrix_unit_examples() {
        let s = b(2);
        assert_eq!(s.mul(&s.unit(0, 1), &s.unit(1, 0)).unwrap(), s.unit(0, 0));
        assert_eq!(s.star(&s.unit(0, 1)), s.unit(1, 0));
        let ue = s.embed(s.crossed.u(1), 0, 0);
        assert_eq!(s.mul(&ue, &s.star(&ue)).unwrap(), s.unit(0, 0));
    }

    #[test]
    fn size_mismatch_is_rejected() {
        assert!(matches!(b(2).mul(&b(2).unit(0, 0), &b(3).unit(0, 0)), Err(Error::SizeMismatch { .. })));
        assert!(b(2).add(&b(3).identity(), &b(3).identity()).is_err());
    }

    #[test]
    fn trace_examples() {
        let s = b(2);
        assert!(s.matrix_trace(&s.identity()).is_one());
        assert_eq!(s.matrix_trace(&s.unit(0, 0)), Scalar::rational(Rational::new(1, 2)));
        assert!(s.matrix_trace(&s.embed(s.crossed.u(1), 0, 0)).is_zero());
    }

    #[test]
    fn trace_is_tracial() {
        for case in 0..200 {
            let mut rng = case_rng(5, case);
            let n = rng.gen_range(1..=4u64);
            let s = b(n);
            let x = s.sample(&mut rng, 3, 3, 0.5);
            let y = s.sample(&mut rng, 3, 3, 0.5);
            assert_eq!(s.matrix_trace(&s.mul(&x, &y).unwrap()), s.matrix_trace(&s.mul(&y, &x).unwrap()), "case {case}");
        }
    }

    #[test]
    fn star_algebra_axioms() {
        let s = StageAlgebra::stage(FiniteCyclicShift::new(2).unwrap(), 2);
        for case in 0..50 {
            let mut rng = case_rng(9, case);
            let x = s.sample(&mut rng, 1, 0, 0.5);
            let y = s.sample(&mut rng, 1, 0, 0.5);
            let z = s.sample(&mut rng, 1, 0, 0.5);
            let xy = s.mul(&x, &y).unwrap();
            assert_eq!(s.mul(&xy, &z).unwrap(), s.mul(&x, &s.mul(&y, &z).unwrap()).unwrap());
            assert_eq!(s.star(&xy), s.mul(&s.star(&y), &s.star(&x)).unwrap());
            assert_eq!(s.mul(&s.identity(), &x).unwrap(), x);
        }
    }

    #[test]
    fn json_round_trip() {
        let s = b(2);
        let mut rng = case_rng(2, 0);
        let x = s.sample(&mut rng, 2, 2, 0.7);
        assert_eq!(s.from_json(&s.to_json(&x)).unwrap(), x);
        assert!(b(3).from_json(&s.to_json(&x)).is_err());
    }
}
