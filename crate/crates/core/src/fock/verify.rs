use serde_json::{json, Value};

use super::theta::{beta_generator_image, shuffle_conjugate, theta_block_map, ToeplitzGenerator};
use super::{FockMatrix, FockOperator, FockSpace, WeightSequence};
use crate::coeff::{CoefficientAlgebra, Powered};
use crate::error::{Error, Result};
use crate::exec::{map_cases, Execution};
use crate::random::case_rng;
use crate::report::{CaseLog, VerificationReport};

/// Coefficient degree of random Fock-suite arguments.
const DEGREE: i64 = 2;
/// Smallest trusted window accepted as evidence.
const MIN_WINDOW: usize = 2;

fn compare_ops<A: CoefficientAlgebra>(
    f: &FockSpace<A>,
    log: &mut CaseLog,
    check: &str,
    lhs: &FockOperator<A::Element>,
    rhs: &FockOperator<A::Element>,
) {
    let window = FockSpace::<A>::joint_trust(lhs, rhs);
    if window < MIN_WINDOW {
        log.fail(check, json!({ "trustedWindow": window }), json!({ "required": MIN_WINDOW }));
    } else if let Some((i, j)) = f.first_difference(lhs, rhs) {
        log.fail(&format!("{check} at ({i},{j})"), f.to_json(lhs), f.to_json(rhs));
    }
}

fn matrix_json<A: CoefficientAlgebra>(f: &FockSpace<A>, x: &FockMatrix<A::Element>) -> Value {
    let n = x.size();
    Value::Array((0..n).map(|i| Value::Array((0..n).map(|j| f.to_json(x.entry(i, j))).collect())).collect())
}

fn compare_matrices<A: CoefficientAlgebra>(
    f: &FockSpace<A>,
    log: &mut CaseLog,
    check: &str,
    lhs: &FockMatrix<A::Element>,
    rhs: &FockMatrix<A::Element>,
) {
    let window = FockSpace::<A>::matrix_min_trust(lhs).min(FockSpace::<A>::matrix_min_trust(rhs));
    if window < MIN_WINDOW {
        log.fail(check, json!({ "trustedWindow": window }), json!({ "required": MIN_WINDOW }));
    } else if let Some((block, pos)) = f.matrix_first_difference(lhs, rhs) {
        log.fail(&format!("{check} at block {block:?} entry {pos:?}"), matrix_json(f, lhs), matrix_json(f, rhs));
    }
}

/// `φ(ac*) - T(α(a)) T(α(c))* = φ(ac*) P_0` on the trusted window.
pub fn check_eq_id<A: CoefficientAlgebra>(f: &FockSpace<A>, a: &A::Element, c: &A::Element, log: &mut CaseLog) -> Result<()> {
    let alg = &f.alg;
    let acs = alg.mul(a, &alg.star(c));
    let ta = f.creation(&alg.alpha_power(a, 1));
    let tc = f.creation(&alg.alpha_power(c, 1));
    let lhs = f.sub(&f.phi(&acs), &f.compose(&ta, &f.adjoint(&tc))?)?;
    let rhs = f.compose(&f.phi(&acs), &f.p0())?;
    compare_ops(f, log, "phi(ac*) - T(a)T(c)* = phi(ac*)P0", &lhs, &rhs);
    Ok(())
}

/// Block form of a periodic weighted shift with period `k`: block `(l+1, l)`
/// is `φ^{(k)}(α^l(λ_{l+1} b))`, block `(0, k-1)` is `T^{(k)}(α^{k-1}(λ_k b))`,
/// all others vanish. Also checks the diagonal form of `φ(b)` and the
/// corner product `T^{(k)}(b) φ^{(k)}(a_{k-1} ⋯ a_1) e_{0,0}`.
pub fn check_lemma_algebra_blocks<A: CoefficientAlgebra>(
    f: &FockSpace<A>,
    lambda: &WeightSequence<A::Element>,
    b: &A::Element,
    factors: &[A::Element],
    log: &mut CaseLog,
) -> Result<()> {
    let k = lambda.period();
    if f.depth < 3 * k {
        return Err(Error::InvalidInput(format!("depth {} is below three periods ({})", f.depth, 3 * k)));
    }
    let alg = &f.alg;
    let fk: FockSpace<Powered<A>> = f.powered(k as i64, f.depth.div_ceil(k));

    let blocks = f.block_decompose(&f.weighted(lambda, b), k);
    let mut expected = fk.matrix_zero(k);
    for l in 0..k - 1 {
        let entry = alg.alpha_power(&alg.mul(lambda.weight(l + 1), b), l as i64);
        expected = fk.matrix_add(&expected, &fk.matrix_embed(fk.phi(&entry), k, l + 1, l))?;
    }
    let corner = alg.alpha_power(&alg.mul(lambda.weight(k), b), k as i64 - 1);
    expected = fk.matrix_add(&expected, &fk.matrix_embed(fk.creation(&corner), k, 0, k - 1))?;
    compare_matrices(&fk, log, "blocks of T_lambda(b)", &blocks, &expected);

    let blocks = f.block_decompose(&f.phi(b), k);
    let mut expected = fk.matrix_zero(k);
    for l in 0..k {
        expected = fk.matrix_add(&expected, &fk.matrix_embed(fk.phi(&alg.alpha_power(b, l as i64)), k, l, l))?;
    }
    compare_matrices(&fk, log, "blocks of phi(b)", &blocks, &expected);

    // Indicator weights place φ^{(k)}(a_{j+1}) at block (j+1, j) and T^{(k)}(b) at (0, k-1).
    let indicator = |j: usize| {
        let w = (0..k).map(|i| if i == j { alg.one() } else { alg.zero() }).collect();
        WeightSequence::new(w).expect("period is positive")
    };
    let mut product = f.weighted(&indicator(k - 1), &alg.alpha_power(b, 1 - k as i64));
    let mut inner = alg.one();
    for j in (0..k - 1).rev() {
        let a = &factors[j];
        product = f.compose(&product, &f.weighted(&indicator(j), &alg.alpha_power(a, -(j as i64))))?;
        inner = alg.mul(&inner, a);
    }
    let corner = fk.compose(&fk.creation(b), &fk.phi(&inner))?;
    let expected = fk.matrix_embed(corner, k, 0, 0);
    compare_matrices(&fk, log, "corner product", &f.block_decompose(&product, k), &expected);
    Ok(())
}

/// `θ_{n,m}(φ(ac*) - T(α^n a) T(α^n c)*) = (φ^{(m)}(ac*) - T^{(m)}(α^m a) T^{(m)}(α^m c)*) e_{0,0}`,
/// with the right side also equal to `φ^{(m)}(ac*) P_0 e_{0,0}`.
pub fn check_compact_preservation<A: CoefficientAlgebra>(
    alg: &A,
    n: u64,
    m: u64,
    a: &A::Element,
    c: &A::Element,
    depth: usize,
    log: &mut CaseLog,
) -> Result<()> {
    let fm = FockSpace::new(Powered::new(alg.clone(), m as i64), depth);
    let k = (m / n) as usize;
    let acs = alg.mul(a, &alg.star(c));
    let theta = |g| theta_block_map(alg, n, m, &g, depth);
    let phi_img = theta(ToeplitzGenerator::Phi(acs.clone()))?;
    let ta = theta(ToeplitzGenerator::Creation(alg.alpha_power(a, n as i64)))?;
    let tc = theta(ToeplitzGenerator::Creation(alg.alpha_power(c, n as i64)))?;
    let lhs = fm.matrix_sub(&phi_img, &fm.matrix_mul(&ta, &fm.matrix_adjoint(&tc))?)?;

    let tma = fm.creation(&alg.alpha_power(a, m as i64));
    let tmc = fm.creation(&alg.alpha_power(c, m as i64));
    let corner = fm.sub(&fm.phi(&acs), &fm.compose(&tma, &fm.adjoint(&tmc))?)?;
    let rhs = fm.matrix_embed(corner.clone(), k, 0, 0);
    compare_matrices(&fm, log, "theta(phi(ac*) - T(a)T(c)*)", &lhs, &rhs);
    compare_ops(&fm, log, "corner is phi(ac*)P0", &corner, &fm.compose(&fm.phi(&acs), &fm.p0())?);
    Ok(())
}

/// `β_{n,m}(g) = U* (I_n ⊗ θ_{n,m})(g) U` for one generator `g`.
pub fn check_shuffle<A: CoefficientAlgebra>(
    alg: &A,
    n: u64,
    m: u64,
    generator: &ToeplitzGenerator<A::Element>,
    depth: usize,
    log: &mut CaseLog,
) -> Result<()> {
    let fm = FockSpace::new(Powered::new(alg.clone(), m as i64), depth);
    let lhs = beta_generator_image(alg, n, m, generator, depth)?;
    let rhs = shuffle_conjugate(alg, n, m, generator, depth)?;
    compare_matrices(&fm, log, "beta = U*(I x theta)U", &lhs, &rhs);
    Ok(())
}

/// The identity for `a = c = 1` and `count` random pairs at `depth`.
pub fn verify_eq_id<A: CoefficientAlgebra>(alg: &A, depth: usize, seed: u64, count: usize, exec: Execution) -> Result<VerificationReport> {
    if depth < 3 {
        return Err(Error::InvalidInput(format!("depth {depth} < 3")));
    }
    let f = FockSpace::new(alg.clone(), depth);
    let mut report = VerificationReport::new("fock-id", json!({ "depth": depth, "seed": seed, "count": count }));
    let results = map_cases(exec, count + 1, |case| {
        CaseLog::new(case).run("eq-id", |log| {
            let (a, c) = if case == 0 {
                (alg.one(), alg.one())
            } else {
                let mut rng = case_rng(seed, case - 1);
                (alg.sample(&mut rng, DEGREE), alg.sample(&mut rng, DEGREE))
            };
            check_eq_id(&f, &a, &c, log)
        })
    });
    report.absorb("", results);
    Ok(report)
}

/// Random weights, arguments and corner factors for one period.
pub fn verify_lemma_algebra_blocks<A: CoefficientAlgebra>(
    alg: &A,
    period: usize,
    depth: usize,
    seed: u64,
    count: usize,
    exec: Execution,
) -> Result<VerificationReport> {
    if period == 0 {
        return Err(Error::InvalidInput("period must be positive".into()));
    }
    let f = FockSpace::new(alg.clone(), depth);
    let mut report =
        VerificationReport::new("fock-blocks", json!({ "period": period, "depth": depth, "seed": seed, "count": count }));
    let results = map_cases(exec, count, |case| {
        CaseLog::new(case).run("blocks", |log| {
            let mut rng = case_rng(seed, case);
            let lambda = WeightSequence::new((0..period).map(|_| alg.sample(&mut rng, 1)).collect())?;
            let b = alg.sample(&mut rng, DEGREE);
            let factors: Vec<_> = (0..period).map(|_| alg.sample(&mut rng, 1)).collect();
            check_lemma_algebra_blocks(&f, &lambda, &b, &factors, log)
        })
    });
    report.absorb("", results);
    Ok(report)
}

/// `a = c = 1` and `count` random pairs.
pub fn verify_compact_preservation<A: CoefficientAlgebra>(
    alg: &A,
    n: u64,
    m: u64,
    depth: usize,
    seed: u64,
    count: usize,
    exec: Execution,
) -> Result<VerificationReport> {
    if n == 0 || !m.is_multiple_of(n) {
        return Err(Error::NotDivisible { n, m });
    }
    let mut report =
        VerificationReport::new("compact-preserve", json!({ "n": n, "m": m, "depth": depth, "seed": seed, "count": count }));
    let results = map_cases(exec, count + 1, |case| {
        CaseLog::new(case).run("compact", |log| {
            let (a, c) = if case == 0 {
                (alg.one(), alg.one())
            } else {
                let mut rng = case_rng(seed, case - 1);
                (alg.sample(&mut rng, DEGREE), alg.sample(&mut rng, DEGREE))
            };
            check_compact_preservation(alg, n, m, &a, &c, depth, log)
        })
    });
    report.absorb("", results);
    Ok(report)
}

/// All matrix units, `φ(1)`, `T(1)`, then `count` random `φ(a)` / `T(b)`.
pub fn verify_shuffle<A: CoefficientAlgebra>(
    alg: &A,
    n: u64,
    m: u64,
    depth: usize,
    seed: u64,
    count: usize,
    exec: Execution,
) -> Result<VerificationReport> {
    if n == 0 || !m.is_multiple_of(n) {
        return Err(Error::NotDivisible { n, m });
    }
    let nu = n as usize;
    let mut generators: Vec<ToeplitzGenerator<A::Element>> =
        (0..nu * nu).map(|k| ToeplitzGenerator::Unit(k / nu, k % nu)).collect();
    generators.push(ToeplitzGenerator::Phi(alg.one()));
    generators.push(ToeplitzGenerator::Creation(alg.one()));
    for case in 0..count {
        let mut rng = case_rng(seed, case);
        let x = alg.sample(&mut rng, DEGREE);
        generators.push(if case % 2 == 0 { ToeplitzGenerator::Phi(x) } else { ToeplitzGenerator::Creation(x) });
    }
    let mut report = VerificationReport::new(
        "shuffle",
        json!({ "n": n, "m": m, "depth": depth, "seed": seed, "count": count, "generators": generators.len() }),
    );
    let results = map_cases(exec, generators.len(), |case| {
        CaseLog::new(case).run("shuffle", |log| check_shuffle(alg, n, m, &generators[case], depth, log))
    });
    report.absorb("", results);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{Angle, CircleFunction, CircleRotation, FiniteCyclicShift};

    fn circle() -> CircleRotation {
        CircleRotation::new(Angle::theta())
    }

    #[test]
    fn eq_id_examples() {
        let f = FockSpace::new(circle(), 8);
        let mut log = CaseLog::new(0);
        check_eq_id(&f, &f.alg.one(), &f.alg.one(), &mut log).unwrap();
        check_eq_id(&f, &CircleFunction::z(), &f.alg.one(), &mut log).unwrap();
        assert!(log.into_failures().is_empty());
        assert!(verify_eq_id(&circle(), 8, 1, 10, Execution::default()).unwrap().passed());
        assert!(verify_eq_id(&circle(), 2, 1, 1, Execution::default()).is_err());
    }

    #[test]
    fn block_examples() {
        for (period, b) in [(1, circle().one()), (2, CircleFunction::z())] {
            let f = FockSpace::new(circle(), 4 * period);
            let lambda = WeightSequence::new(vec![circle().one(); period]).unwrap();
            let mut log = CaseLog::new(0);
            check_lemma_algebra_blocks(&f, &lambda, &b, &vec![CircleFunction::z(); period], &mut log).unwrap();
            assert!(log.into_failures().is_empty(), "period {period}");
        }
        let exec = Execution::default();
        assert!(verify_lemma_algebra_blocks(&circle(), 3, 12, 5, 5, exec).unwrap().passed());
        assert!(verify_lemma_algebra_blocks(&FiniteCyclicShift::new(4).unwrap(), 2, 8, 5, 5, exec).unwrap().passed());
    }

    #[test]
    fn compact_preservation_examples() {
        let mut log = CaseLog::new(0);
        let z2 = CircleFunction::monomial(2, crate::scalar::Scalar::one());
        check_compact_preservation(&circle(), 1, 2, &CircleFunction::z(), &z2, 6, &mut log).unwrap();
        assert!(log.into_failures().is_empty());
        assert!(verify_compact_preservation(&circle(), 2, 4, 6, 2, 5, Execution::default()).unwrap().passed());
    }

    #[test]
    fn printed_exponent_breaks_compact_preservation() {
        // With α^j instead of α^{jn} in the lower diagonal of θ(T(b)), the
        // diagonal terms no longer cancel once n > 1.
        let alg = circle();
        let (n, m, depth) = (2u64, 6u64, 6);
        let fm = FockSpace::new(Powered::new(alg.clone(), m as i64), depth);
        let variant = |b: &CircleFunction| {
            let mut out = fm.matrix_embed(fm.creation(&alg.alpha_power(b, 2 * n as i64)), 3, 0, 2);
            for j in 0..2 {
                out = fm.matrix_add(&out, &fm.matrix_embed(fm.phi(&alg.alpha_power(b, j)), 3, j as usize + 1, j as usize)).unwrap();
            }
            out
        };
        let (a, c) = (CircleFunction::z(), alg.one());
        let acs = alg.mul(&a, &alg.star(&c));
        let phi_img = theta_block_map(&alg, n, m, &ToeplitzGenerator::Phi(acs), depth).unwrap();
        let ta = variant(&alg.alpha_power(&a, n as i64));
        let tc = variant(&alg.alpha_power(&c, n as i64));
        let lhs = fm.matrix_sub(&phi_img, &fm.matrix_mul(&ta, &fm.matrix_adjoint(&tc)).unwrap()).unwrap();
        let mut log = CaseLog::new(0);
        check_compact_preservation(&alg, n, m, &a, &c, depth, &mut log).unwrap();
        assert!(log.into_failures().is_empty());
        assert!(!lhs.entry(2, 2).is_zero());
    }

    #[test]
    fn shuffle_examples() {
        let exec = Execution::default();
        assert!(verify_shuffle(&circle(), 1, 2, 6, 3, 4, exec).unwrap().passed());
        assert!(verify_shuffle(&circle(), 2, 4, 6, 3, 4, exec).unwrap().passed());
    }
}
