//! Connecting maps `γ_{n,m}: B(n) → B(m)` and the direct limit they define.

mod amplify;
pub(crate) mod verify;

use std::collections::HashMap;

use serde_json::{json, Value};

pub use amplify::{amplification_shuffle, amplify_angle, shuffle_permutation, verify_amplification_intertwining, BlockGamma};
pub use verify::{verify_gamma_composition, verify_gamma_homomorphism, verify_trace_compatibility};

use crate::coeff::CoefficientAlgebra;
use crate::crossed::{CrossedElement, MatrixElement, StageAlgebra};
use crate::error::{Error, Result};

/// Stage sizes `1 = n_1 | n_2 | … | n_K`. Stages are numbered from 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageSequence {
    sizes: Vec<u64>,
}

impl StageSequence {
    pub fn new(sizes: Vec<u64>) -> Result<Self> {
        match sizes.first() {
            None => return Err(Error::InvalidInput("empty stage sequence".into())),
            Some(&n) if n != 1 => {
                return Err(Error::InvalidInput(format!("stage sequences start at n_1 = 1, found {n}")))
            }
            _ => {}
        }
        for w in sizes.windows(2) {
            if w[1] == 0 || w[1] % w[0] != 0 {
                return Err(Error::NotDivisible { n: w[0], m: w[1] });
            }
        }
        Ok(StageSequence { sizes })
    }

    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    /// `n_k` for `1 ≤ k ≤ len`.
    pub fn size(&self, stage: usize) -> Result<u64> {
        if stage == 0 || stage > self.sizes.len() {
            return Err(Error::StageOutOfRange { stage, len: self.sizes.len() });
        }
        Ok(self.sizes[stage - 1])
    }

    /// `m_k = n_{k+1} / n_k`.
    pub fn radii(&self) -> Vec<u64> {
        self.sizes.windows(2).map(|w| w[1] / w[0]).collect()
    }

    /// Stages whose ratio to the next is 1 (allowed, but they add nothing to the limit).
    pub fn trivial_steps(&self) -> Vec<usize> {
        self.radii().iter().enumerate().filter(|(_, m)| **m == 1).map(|(k, _)| k + 1).collect()
    }
}

impl std::str::FromStr for StageSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let sizes = s
            .split(',')
            .map(|t| t.trim().parse::<u64>().map_err(|_| Error::Parse(format!("bad stage size {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        StageSequence::new(sizes)
    }
}

/// The connecting map `γ_{n,m}` for `n | m`.
///
/// Matrix units, coefficients and the generator `u_n e_{0,0}` have explicit
/// images; a general monomial `a u^l e_{i,j}` is factored as
/// `e_{i,0} (a e_{0,0}) (u e_{0,0})^l e_{0,j}` and the images multiplied.
#[derive(Clone, Debug)]
pub struct Gamma<A> {
    pub source: StageAlgebra<A>,
    pub target: StageAlgebra<A>,
    ratio: usize,
}

impl<A: CoefficientAlgebra> Gamma<A> {
    pub fn new(alg: A, n: u64, m: u64) -> Result<Self> {
        if n == 0 || !m.is_multiple_of(n) {
            return Err(Error::NotDivisible { n, m });
        }
        Ok(Gamma {
            source: StageAlgebra::stage(alg.clone(), n),
            target: StageAlgebra::stage(alg, m),
            ratio: (m / n) as usize,
        })
    }

    fn n(&self) -> usize {
        self.source.size
    }

    /// Image of `e_{i,j}`: `Σ_s e_{i+sn, j+sn}`.
    pub fn unit_image(&self, i: usize, j: usize) -> MatrixElement<A::Element> {
        let n = self.n();
        let mut out = self.target.zero();
        for s in 0..self.ratio {
            let one = self.target.crossed.one();
            self.target.accumulate(&mut out, i + s * n, j + s * n, &one).expect("same stage");
        }
        out
    }

    /// Image of `a e_{0,0}`: `Σ_s α^{sn}(a) e_{sn,sn}`.
    pub fn coeff_image(&self, a: &A::Element) -> MatrixElement<A::Element> {
        let n = self.n();
        let alg = self.target.alg();
        let mut out = self.target.zero();
        for s in 0..self.ratio {
            let x = self.target.crossed.from_coeff(alg.alpha_power(a, (s * n) as i64));
            self.target.accumulate(&mut out, s * n, s * n, &x).expect("same stage");
        }
        out
    }

    /// Image of `u_n e_{0,0}`: `u_m e_{(k-1)n,0} + Σ_{s<k-1} e_{sn,(s+1)n}`.
    pub fn u_image(&self) -> MatrixElement<A::Element> {
        let n = self.n();
        let k = self.ratio;
        let mut out = self.target.embed(self.target.crossed.u(1), (k - 1) * n, 0);
        for s in 0..k - 1 {
            let one = self.target.crossed.one();
            self.target.accumulate(&mut out, s * n, (s + 1) * n, &one).expect("same stage");
        }
        out
    }

    pub fn apply(&self, x: &MatrixElement<A::Element>) -> Result<MatrixElement<A::Element>> {
        if x.size() != self.source.size {
            return Err(Error::SizeMismatch { left: self.source.size, right: x.size() });
        }
        if x.power() != self.source.power() {
            return Err(Error::PowerMismatch { left: self.source.power(), right: x.power() });
        }
        if self.ratio == 1 {
            return Ok(x.clone());
        }
        let t = &self.target;
        let u = self.u_image();
        let u_star = t.star(&u);
        let mut powers: HashMap<i64, MatrixElement<A::Element>> = HashMap::new();
        powers.insert(0, t.identity());
        let mut out = t.zero();
        for (i, j, entry) in x.nonzero() {
            let left = self.unit_image(i, 0);
            let right = self.unit_image(0, j);
            for (l, a) in entry.terms() {
                let pow = self.u_power(&mut powers, l, &u, &u_star)?;
                let img = t.mul(&t.mul(&t.mul(&left, &self.coeff_image(a))?, &pow)?, &right)?;
                out = t.add(&out, &img)?;
            }
        }
        Ok(out)
    }

    fn u_power(
        &self,
        powers: &mut HashMap<i64, MatrixElement<A::Element>>,
        l: i64,
        u: &MatrixElement<A::Element>,
        u_star: &MatrixElement<A::Element>,
    ) -> Result<MatrixElement<A::Element>> {
        if let Some(p) = powers.get(&l) {
            return Ok(p.clone());
        }
        let step = l.signum();
        let prev = self.u_power(powers, l - step, u, u_star)?;
        let p = self.target.mul(&prev, if step > 0 { u } else { u_star })?;
        powers.insert(l, p.clone());
        Ok(p)
    }

    /// Recovers `X` from `Y = γ(X)`, or `None` when `Y` is not in the image.
    ///
    /// The first `n` rows of `γ(a u^l e_{i,j})` hold `a u_m^q` at column
    /// `j + r n` where `l = q k + r`, so the preimage is read off there and
    /// then confirmed by mapping it forward again.
    pub fn left_inverse(&self, y: &MatrixElement<A::Element>) -> Result<Option<MatrixElement<A::Element>>> {
        if y.size() != self.target.size {
            return Err(Error::SizeMismatch { left: self.target.size, right: y.size() });
        }
        if y.power() != self.target.power() {
            return Err(Error::PowerMismatch { left: self.target.power(), right: y.power() });
        }
        let n = self.n();
        let k = self.ratio as i64;
        let mut x = self.source.zero();
        for i in 0..n {
            for j in 0..n {
                let mut terms = Vec::new();
                for r in 0..self.ratio {
                    for (q, a) in y.entry(i, j + r * n).terms() {
                        terms.push((q * k + r as i64, a.clone()));
                    }
                }
                let entry: CrossedElement<A::Element> = self.source.crossed.from_terms(terms);
                self.source.accumulate(&mut x, i, j, &entry)?;
            }
        }
        Ok((self.apply(&x)? == *y).then_some(x))
    }
}

/// An element of the direct limit, represented at a finite stage.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitElement<E> {
    pub stage: usize,
    pub value: MatrixElement<E>,
}

/// The direct limit of `B(n_1) → B(n_2) → …` along the `γ`.
#[derive(Clone, Debug)]
pub struct DirectLimit<A> {
    pub alg: A,
    pub sequence: StageSequence,
}

impl<A: CoefficientAlgebra> DirectLimit<A> {
    pub fn new(alg: A, sequence: StageSequence) -> Self {
        DirectLimit { alg, sequence }
    }

    pub fn stage_algebra(&self, stage: usize) -> Result<StageAlgebra<A>> {
        Ok(StageAlgebra::stage(self.alg.clone(), self.sequence.size(stage)?))
    }

    pub fn element(&self, stage: usize, value: MatrixElement<A::Element>) -> Result<LimitElement<A::Element>> {
        let n = self.sequence.size(stage)?;
        if value.size() as u64 != n || value.power() != n {
            return Err(Error::SizeMismatch { left: n as usize, right: value.size() });
        }
        Ok(LimitElement { stage, value })
    }

    /// Maps `e` through `γ_{n_k, n_{k+1}}`, …, up to `target`.
    pub fn promote(&self, e: &LimitElement<A::Element>, target: usize) -> Result<LimitElement<A::Element>> {
        self.sequence.size(target)?;
        if target < e.stage {
            return Err(Error::InvalidInput(format!("cannot promote stage {} down to {target}", e.stage)));
        }
        let mut value = e.value.clone();
        for k in e.stage..target {
            let g = Gamma::new(self.alg.clone(), self.sequence.size(k)?, self.sequence.size(k + 1)?)?;
            value = g.apply(&value)?;
        }
        Ok(LimitElement { stage: target, value })
    }

    fn binary(
        &self,
        x: &LimitElement<A::Element>,
        y: &LimitElement<A::Element>,
        op: impl Fn(&StageAlgebra<A>, &MatrixElement<A::Element>, &MatrixElement<A::Element>) -> Result<MatrixElement<A::Element>>,
    ) -> Result<LimitElement<A::Element>> {
        let stage = x.stage.max(y.stage);
        let (x, y) = (self.promote(x, stage)?, self.promote(y, stage)?);
        let value = op(&self.stage_algebra(stage)?, &x.value, &y.value)?;
        Ok(LimitElement { stage, value })
    }

    pub fn add(&self, x: &LimitElement<A::Element>, y: &LimitElement<A::Element>) -> Result<LimitElement<A::Element>> {
        self.binary(x, y, |s, a, b| s.add(a, b))
    }

    pub fn mul(&self, x: &LimitElement<A::Element>, y: &LimitElement<A::Element>) -> Result<LimitElement<A::Element>> {
        self.binary(x, y, |s, a, b| s.mul(a, b))
    }

    pub fn star(&self, x: &LimitElement<A::Element>) -> Result<LimitElement<A::Element>> {
        Ok(LimitElement { stage: x.stage, value: self.stage_algebra(x.stage)?.star(&x.value) })
    }

    /// Equality in the limit: compare at the larger stage.
    pub fn equal(&self, x: &LimitElement<A::Element>, y: &LimitElement<A::Element>) -> Result<bool> {
        let stage = x.stage.max(y.stage);
        Ok(self.promote(x, stage)?.value == self.promote(y, stage)?.value)
    }

    pub fn to_json(&self, e: &LimitElement<A::Element>) -> Result<Value> {
        Ok(json!({
            "sequence": self.sequence.sizes(),
            "stage": e.stage,
            "value": self.stage_algebra(e.stage)?.to_json(&e.value),
        }))
    }

    pub fn from_json(&self, v: &Value) -> Result<LimitElement<A::Element>> {
        let seq: Vec<u64> = v
            .get("sequence")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("limit element needs \"sequence\"".into()))?
            .iter()
            .map(|n| n.as_u64().ok_or_else(|| Error::Parse("stage sizes must be integers".into())))
            .collect::<Result<_>>()?;
        if seq != self.sequence.sizes() {
            return Err(Error::InvalidInput(format!("sequence {seq:?} does not match {:?}", self.sequence.sizes())));
        }
        let stage = v.get("stage").and_then(Value::as_u64).ok_or_else(|| Error::Parse("limit element needs \"stage\"".into()))?
            as usize;
        let value = self.stage_algebra(stage)?.from_json(v.get("value").unwrap_or(&Value::Null))?;
        self.element(stage, value)
    }
}
