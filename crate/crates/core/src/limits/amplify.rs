//! `M_p` of a stage algebra read as a stage algebra of size `pn` for the
//! angle divided by `p`.

use serde_json::json;

use super::verify::{COEFF_DEGREE, DENSITY, U_DEGREE};
use super::Gamma;
use crate::coeff::{Angle, CircleRotation, CoefficientAlgebra};
use crate::crossed::{CrossedProduct, MatrixElement, StageAlgebra};
use crate::error::{Error, Result};
use crate::exec::{map_cases, Execution};
use crate::random::case_rng;
use crate::report::{CaseLog, VerificationReport};

pub fn amplify_angle(angle: &Angle, p: u64) -> Result<Angle> {
    angle.div_int(p as i64)
}

/// Position of row/column `b·n + i` (block `b`, inner index `i`) after the
/// canonical shuffle: `i·p + b`.
pub fn shuffle_permutation(p: usize, n: usize) -> Vec<usize> {
    (0..p * n).map(|pos| (pos % n) * p + pos / n).collect()
}

/// Reorders a `p × p` array of `n × n` blocks into an `n × n` array of `p × p` blocks.
pub fn amplification_shuffle<E: Clone>(p: usize, n: usize, x: &MatrixElement<E>) -> Result<MatrixElement<E>> {
    if p == 0 || n == 0 || x.size() != p * n {
        return Err(Error::SizeMismatch { left: p * n, right: x.size() });
    }
    Ok(x.permuted(&shuffle_permutation(p, n)))
}

/// `γ_{n,m}` applied to each block of a `p × p` block matrix.
#[derive(Clone, Debug)]
pub struct BlockGamma<A> {
    pub gamma: Gamma<A>,
    pub p: usize,
    pub source: StageAlgebra<A>,
    pub target: StageAlgebra<A>,
}

impl<A: CoefficientAlgebra> BlockGamma<A> {
    pub fn new(alg: A, p: usize, n: u64, m: u64) -> Result<Self> {
        let gamma = Gamma::new(alg.clone(), n, m)?;
        Ok(BlockGamma {
            p,
            source: StageAlgebra::new(CrossedProduct::new(alg.clone(), n), p * n as usize),
            target: StageAlgebra::new(CrossedProduct::new(alg, m), p * m as usize),
            gamma,
        })
    }

    pub fn apply(&self, x: &MatrixElement<A::Element>) -> Result<MatrixElement<A::Element>> {
        let (n, m) = (self.gamma.source.size, self.gamma.target.size);
        let mut out = self.target.zero();
        for b in 0..self.p {
            for c in 0..self.p {
                let block = x.block(b * n, c * n, n);
                if !block.is_zero() {
                    self.target.accumulate_block(&mut out, b * m, c * m, &self.gamma.apply(&block)?)?;
                }
            }
        }
        Ok(out)
    }
}

/// `ψ ∘ (γ_{n,m})_p = γ'_{pn,pm} ∘ ψ`, where the left side lives over the
/// rotation by `angle` and the right side over the rotation by `angle / p`.
///
/// Checked on the generators placed in every block and on `count` random elements.
pub fn verify_amplification_intertwining(
    angle: &Angle,
    p: u64,
    n: u64,
    m: u64,
    seed: u64,
    count: usize,
    exec: Execution,
) -> Result<VerificationReport> {
    let (pu, nu, mu) = (p as usize, n as usize, m as usize);
    let left_alg = CircleRotation::new(angle.clone());
    let right_alg = CircleRotation::new(amplify_angle(angle, p)?);
    let blockwise = BlockGamma::new(left_alg.clone(), pu, n, m)?;
    let right = Gamma::new(right_alg, p * n, p * m)?;
    let src = &blockwise.source;

    let mut generators = Vec::new();
    let a = left_alg.sample(&mut case_rng(seed, usize::MAX), COEFF_DEGREE);
    for b in 0..pu {
        for c in 0..pu {
            generators.push(src.embed(src.crossed.from_coeff(a.clone()), b * nu, c * nu));
            generators.push(src.embed(src.crossed.u(1), b * nu, c * nu));
            for i in 0..nu {
                for j in 0..nu {
                    generators.push(src.unit(b * nu + i, c * nu + j));
                }
            }
        }
    }
    let gen_count = generators.len();
    let mut report = VerificationReport::new(
        "amplification",
        json!({ "angle": angle.to_string(), "p": p, "n": n, "m": m, "seed": seed, "count": count, "generators": gen_count }),
    );
    let results = map_cases(exec, gen_count + count, |case| {
        CaseLog::new(case).run("intertwining", |log| {
            let x = if case < gen_count {
                generators[case].clone()
            } else {
                src.sample(&mut case_rng(seed, case - gen_count), U_DEGREE, COEFF_DEGREE, DENSITY)
            };
            let lhs = amplification_shuffle(pu, mu, &blockwise.apply(&x)?)?.reinterpret(p * m);
            let rhs = right.apply(&amplification_shuffle(pu, nu, &x)?.reinterpret(p * n))?;
            log.check_eq("shuffle(gamma_p(X)) = gamma'(shuffle(X))", &lhs, &rhs, |v| right.target.to_json(v));
            Ok(())
        })
    });
    report.absorb("", results);
    Ok(report)
}
