use serde_json::json;

use super::Gamma;
use crate::coeff::CoefficientAlgebra;
use crate::crossed::{MatrixElement, StageAlgebra};
use crate::error::Result;
use crate::exec::{map_cases, Execution};
use crate::random::case_rng;
use crate::report::{CaseLog, VerificationReport};

/// Entry density, `u`-degree and coefficient degree of random stage elements.
pub(crate) const DENSITY: f64 = 0.5;
pub(crate) const U_DEGREE: i64 = 2;
pub(crate) const COEFF_DEGREE: i64 = 2;

pub(crate) fn sample<A: CoefficientAlgebra>(s: &StageAlgebra<A>, seed: u64, case: usize) -> (MatrixElement<A::Element>, MatrixElement<A::Element>) {
    let mut rng = case_rng(seed, case);
    let x = s.sample(&mut rng, U_DEGREE, COEFF_DEGREE, DENSITY);
    let y = s.sample(&mut rng, U_DEGREE, COEFF_DEGREE, DENSITY);
    (x, y)
}

/// `γ(XY) = γ(X)γ(Y)`, `γ(X*) = γ(X)*`, and `X` is recovered from `γ(X)`,
/// on `count` random pairs; `γ(1) = 1` is checked once.
pub fn verify_gamma_homomorphism<A: CoefficientAlgebra>(
    alg: &A,
    n: u64,
    m: u64,
    seed: u64,
    count: usize,
    exec: Execution,
) -> Result<VerificationReport> {
    let g = Gamma::new(alg.clone(), n, m)?;
    let mut report = VerificationReport::new("gamma-hom", json!({ "n": n, "m": m, "seed": seed, "count": count }));
    let (s, t) = (&g.source, &g.target);
    let unit = CaseLog::new(0).run("gamma(1)", |log| {
        log.check_eq("gamma(1) = 1", &g.apply(&s.identity())?, &t.identity(), |x| t.to_json(x));
        Ok(())
    });
    let results = map_cases(exec, count, |case| {
        CaseLog::new(case).run("gamma", |log| {
            let (x, y) = sample(s, seed, case);
            let (gx, gy) = (g.apply(&x)?, g.apply(&y)?);
            log.check_eq("gamma(XY) = gamma(X)gamma(Y)", &g.apply(&s.mul(&x, &y)?)?, &t.mul(&gx, &gy)?, |v| t.to_json(v));
            log.check_eq("gamma(X*) = gamma(X)*", &g.apply(&s.star(&x))?, &t.star(&gx), |v| t.to_json(v));
            log.check_eq("left inverse", &g.left_inverse(&gx)?, &Some(x), |v| match v {
                Some(v) => s.to_json(v),
                None => json!(null),
            });
            Ok(())
        })
    });
    report.absorb("", results);
    report.failures.extend(unit);
    Ok(report)
}

/// `γ_{nk,nkl} ∘ γ_{n,nk} = γ_{n,nkl}` on the generators `a e_{0,0}`,
/// `u e_{0,0}`, every `e_{i,j}`, and `count` random elements.
pub fn verify_gamma_composition<A: CoefficientAlgebra>(
    alg: &A,
    n: u64,
    k: u64,
    l: u64,
    seed: u64,
    count: usize,
    exec: Execution,
) -> Result<VerificationReport> {
    let first = Gamma::new(alg.clone(), n, n * k)?;
    let second = Gamma::new(alg.clone(), n * k, n * k * l)?;
    let direct = Gamma::new(alg.clone(), n, n * k * l)?;
    let s = &first.source;
    let mut generators = vec![
        s.embed(s.crossed.from_coeff(alg.sample(&mut case_rng(seed, usize::MAX), COEFF_DEGREE)), 0, 0),
        s.embed(s.crossed.u(1), 0, 0),
    ];
    for i in 0..s.size {
        for j in 0..s.size {
            generators.push(s.unit(i, j));
        }
    }
    let gen_count = generators.len();
    let mut report = VerificationReport::new(
        "gamma-comp",
        json!({ "n": n, "k": k, "l": l, "seed": seed, "count": count, "generators": gen_count }),
    );
    let results = map_cases(exec, gen_count + count, |case| {
        CaseLog::new(case).run("composition", |log| {
            let x = if case < gen_count { generators[case].clone() } else { sample(s, seed, case - gen_count).0 };
            let lhs = second.apply(&first.apply(&x)?)?;
            let rhs = direct.apply(&x)?;
            log.check_eq("composition", &lhs, &rhs, |v| direct.target.to_json(v));
            Ok(())
        })
    });
    report.absorb("", results);
    Ok(report)
}

/// `τ̃_m ∘ γ_{n,m} = τ̃_n` on `count` random elements.
pub fn verify_trace_compatibility<A: CoefficientAlgebra>(
    alg: &A,
    n: u64,
    m: u64,
    seed: u64,
    count: usize,
    exec: Execution,
) -> Result<VerificationReport> {
    let g = Gamma::new(alg.clone(), n, m)?;
    let mut report = VerificationReport::new("trace-compat", json!({ "n": n, "m": m, "seed": seed, "count": count }));
    let results = map_cases(exec, count, |case| {
        CaseLog::new(case).run("trace", |log| {
            let (x, _) = sample(&g.source, seed, case);
            let lhs = g.target.matrix_trace(&g.apply(&x)?);
            let rhs = g.source.matrix_trace(&x);
            log.check_eq("trace(gamma(X)) = trace(X)", &lhs, &rhs, |v| v.to_json());
            Ok(())
        })
    });
    report.absorb("", results);
    Ok(report)
}
