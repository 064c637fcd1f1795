//! The block maps between Toeplitz algebras of `α^n` and `α^m` for `n | m`.

use super::{FockMatrix, FockSpace};
use crate::coeff::{CoefficientAlgebra, Powered};
use crate::error::{Error, Result};
use crate::limits::shuffle_permutation;

/// Generators of `M_n(T_n)`: `φ^{(n)}(a) e_{0,0}`, `T^{(n)}(b) e_{0,0}` and the matrix units.
#[derive(Clone, Debug, PartialEq)]
pub enum ToeplitzGenerator<E> {
    Phi(E),
    Creation(E),
    Unit(usize, usize),
}

fn ratio(n: u64, m: u64) -> Result<usize> {
    if n == 0 || !m.is_multiple_of(n) {
        return Err(Error::NotDivisible { n, m });
    }
    Ok((m / n) as usize)
}

/// `θ_{n,m}` on a generator of `T_n`, as a `k × k` matrix over `T_m` (`k = m/n`):
///
/// * `φ(a) ↦ Σ_j φ^{(m)}(α^{jn}(a)) e_{j,j}`
/// * `T(b) ↦ T^{(m)}(α^{(k-1)n}(b)) e_{0,k-1} + Σ_{j<k-1} φ^{(m)}(α^{jn}(b)) e_{j+1,j}`
pub fn theta_block_map<A: CoefficientAlgebra>(
    alg: &A,
    n: u64,
    m: u64,
    generator: &ToeplitzGenerator<A::Element>,
    depth: usize,
) -> Result<FockMatrix<A::Element>> {
    let k = ratio(n, m)?;
    let fm = FockSpace::new(Powered::new(alg.clone(), m as i64), depth);
    let nn = n as i64;
    let mut out = fm.matrix_zero(k);
    match generator {
        ToeplitzGenerator::Phi(a) => {
            for j in 0..k {
                let block = fm.matrix_embed(fm.phi(&alg.alpha_power(a, j as i64 * nn)), k, j, j);
                out = fm.matrix_add(&out, &block)?;
            }
        }
        ToeplitzGenerator::Creation(b) => {
            let corner = fm.creation(&alg.alpha_power(b, (k as i64 - 1) * nn));
            out = fm.matrix_embed(corner, k, 0, k - 1);
            for j in 0..k.saturating_sub(1) {
                let block = fm.matrix_embed(fm.phi(&alg.alpha_power(b, j as i64 * nn)), k, j + 1, j);
                out = fm.matrix_add(&out, &block)?;
            }
        }
        ToeplitzGenerator::Unit(..) => {
            return Err(Error::InvalidInput("θ acts on a single Toeplitz entry, not on matrix units".into()))
        }
    }
    Ok(out)
}

/// `β_{n,m}` on the generators of `M_n(T_n)`, as an `m × m` matrix over `T_m`.
pub fn beta_generator_image<A: CoefficientAlgebra>(
    alg: &A,
    n: u64,
    m: u64,
    generator: &ToeplitzGenerator<A::Element>,
    depth: usize,
) -> Result<FockMatrix<A::Element>> {
    let k = ratio(n, m)?;
    let (nu, mu) = (n as usize, m as usize);
    let fm = FockSpace::new(Powered::new(alg.clone(), m as i64), depth);
    let mut out = fm.matrix_zero(mu);
    let mut put = |x, i, j| -> Result<()> {
        out = fm.matrix_add(&out, &fm.matrix_embed(x, mu, i, j))?;
        Ok(())
    };
    let alpha = |x: &A::Element, j: usize| alg.alpha_power(x, (j * nu) as i64);
    match generator {
        ToeplitzGenerator::Phi(a) => {
            for j in 0..k {
                put(fm.phi(&alpha(a, j)), j * nu, j * nu)?;
            }
        }
        ToeplitzGenerator::Creation(b) => {
            for j in 0..k - 1 {
                put(fm.phi(&alpha(b, j)), (j + 1) * nu, j * nu)?;
            }
            put(fm.creation(&alpha(b, k - 1)), 0, (k - 1) * nu)?;
        }
        ToeplitzGenerator::Unit(i, j) => {
            for l in 0..k {
                put(fm.identity(), i + l * nu, j + l * nu)?;
            }
        }
    }
    Ok(out)
}

/// `U* (I_n ⊗ θ_{n,m}) U` on a generator: `θ` is applied inside block `(0,0)`
/// (or `θ(1) = I_k` inside block `(i,j)` for `e_{i,j}`), and the index
/// `i·k + l` of the `nk × nk` result is moved to `i + l·n`.
pub fn shuffle_conjugate<A: CoefficientAlgebra>(
    alg: &A,
    n: u64,
    m: u64,
    generator: &ToeplitzGenerator<A::Element>,
    depth: usize,
) -> Result<FockMatrix<A::Element>> {
    let k = ratio(n, m)?;
    let nu = n as usize;
    let fm = FockSpace::new(Powered::new(alg.clone(), m as i64), depth);
    let (block, bi, bj) = match generator {
        ToeplitzGenerator::Unit(i, j) => (theta_block_map(alg, n, m, &ToeplitzGenerator::Phi(alg.one()), depth)?, *i, *j),
        g => (theta_block_map(alg, n, m, g, depth)?, 0, 0),
    };
    let mut amplified = fm.matrix_zero(nu * k);
    for p in 0..k {
        for q in 0..k {
            let x = block.entry(p, q).clone();
            if !x.is_zero() {
                amplified = fm.matrix_add(&amplified, &fm.matrix_embed(x, nu * k, bi * k + p, bj * k + q))?;
            }
        }
    }
    Ok(amplified.permuted(&shuffle_permutation(nu, k)))
}
