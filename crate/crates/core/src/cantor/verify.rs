use serde_json::json;

use super::{digits_to_index, flip, index_to_digits, odometer_step, OdometerAlgebra, OdometerElement};
use crate::coeff::CoefficientAlgebra;
use crate::crossed::{MatrixElement, StageAlgebra};
use crate::error::Result;
use crate::exec::{map_cases, Execution};
use crate::limits::verify::{sample, COEFF_DEGREE};
use crate::limits::Gamma;
use crate::random::case_rng;
use crate::report::{CaseLog, VerificationReport};

/// Largest truncation checked point by point.
pub const MAX_FLIP_POINTS: u64 = 64;

fn compare<A: CoefficientAlgebra>(
    o: &OdometerAlgebra<A>,
    log: &mut CaseLog,
    check: &str,
    lhs: &OdometerElement<A::Element>,
    rhs: &OdometerElement<A::Element>,
) -> Result<()> {
    if !o.equal(lhs, rhs)? {
        log.fail(check, o.to_json(lhs), o.to_json(rhs));
    }
    Ok(())
}

fn stage_algebra<A: CoefficientAlgebra>(o: &OdometerAlgebra<A>, stage: usize) -> Result<StageAlgebra<A>> {
    Ok(StageAlgebra::stage(o.alg.clone(), o.sequence.size(stage)?))
}

/// `U^p δ_{-p} ρ(X) δ_{-q} U^{-q}` for every `(p, q)`, compared with
/// `Σ_l a_{p,q,l} δ_0 U^{n l}` read off the entry `(p, q)` of `X`.
fn check_extraction<A: CoefficientAlgebra>(
    o: &OdometerAlgebra<A>,
    stage: usize,
    x: &MatrixElement<A::Element>,
    log: &mut CaseLog,
) -> Result<()> {
    let n = o.points(stage)?;
    let rx = o.rho(stage, x)?;
    let corner = |p: usize| -> Result<OdometerElement<A::Element>> {
        o.from_function(o.indicator((n - p) % n, stage)?)
    };
    for p in 0..n {
        let left = o.mul(&o.u(p as i64, stage)?, &corner(p)?)?;
        let left = o.mul(&left, &rx)?;
        for q in 0..n {
            let right = o.mul(&corner(q)?, &o.u(-(q as i64), stage)?)?;
            let lhs = o.mul(&left, &right)?;
            let terms = x
                .entry(p, q)
                .terms()
                .map(|(l, a)| o.point_mass(a, 0, stage).map(|f| (n as i64 * l, f)))
                .collect::<Result<Vec<_>>>()?;
            let rhs = o.from_terms(stage, terms)?;
            compare(o, log, &format!("extraction of entry ({p},{q})"), &lhs, &rhs)?;
        }
    }
    Ok(())
}

/// At stage `k`: `ρ(XY) = ρ(X)ρ(Y)`, `ρ(X*) = ρ(X)*`, recovery of every entry
/// of `X` from `ρ(X)`, and `state(ρ(X)) = matrix_trace(X)` on `count` random
/// pairs; `ρ(1) = 1` once.
pub fn verify_rho_homomorphism<A: CoefficientAlgebra>(
    o: &OdometerAlgebra<A>,
    stage: usize,
    seed: u64,
    count: usize,
    exec: Execution,
) -> Result<VerificationReport> {
    let s = stage_algebra(o, stage)?;
    let mut report = VerificationReport::new(
        "rho-hom",
        json!({ "sizes": o.sequence.sizes(), "stage": stage, "seed": seed, "count": count }),
    );
    let unit = CaseLog::new(0).run("rho(1)", |log| compare(o, log, "rho(1) = 1", &o.rho(stage, &s.identity())?, &o.one(stage)?));
    let results = map_cases(exec, count, |case| {
        CaseLog::new(case).run("rho", |log| {
            let (x, y) = sample(&s, seed, case);
            let (rx, ry) = (o.rho(stage, &x)?, o.rho(stage, &y)?);
            compare(o, log, "rho(XY) = rho(X)rho(Y)", &o.rho(stage, &s.mul(&x, &y)?)?, &o.mul(&rx, &ry)?)?;
            compare(o, log, "rho(X*) = rho(X)*", &o.rho(stage, &s.star(&x))?, &o.star(&rx))?;
            check_extraction(o, stage, &x, log)?;
            log.check_eq("state(rho(X)) = trace(X)", &o.state(&rx), &s.matrix_trace(&x), |v| v.to_json());
            Ok(())
        })
    });
    report.absorb("", results);
    report.failures.extend(unit);
    Ok(report)
}

/// `ρ_k = ρ_{k+1} ∘ γ_{n_k, n_{k+1}}` on `a e_{0,0}`, `u e_{0,0}`, every
/// `e_{i,j}` and `count` random elements, with `ρ_k` promoted to depth `k + 1`.
pub fn verify_rg<A: CoefficientAlgebra>(
    o: &OdometerAlgebra<A>,
    stage: usize,
    seed: u64,
    count: usize,
    exec: Execution,
) -> Result<VerificationReport> {
    let next = stage + 1;
    let gamma = Gamma::new(o.alg.clone(), o.sequence.size(stage)?, o.sequence.size(next)?)?;
    let s = &gamma.source;
    let a = o.alg.sample(&mut case_rng(seed, usize::MAX), COEFF_DEGREE);
    let mut generators = vec![s.embed(s.crossed.from_coeff(a), 0, 0), s.embed(s.crossed.u(1), 0, 0)];
    for i in 0..s.size {
        for j in 0..s.size {
            generators.push(s.unit(i, j));
        }
    }
    let gen_count = generators.len();
    let mut report = VerificationReport::new(
        "rg",
        json!({ "sizes": o.sequence.sizes(), "stage": stage, "seed": seed, "count": count, "generators": gen_count }),
    );
    let results = map_cases(exec, gen_count + count, |case| {
        CaseLog::new(case).run("rg", |log| {
            let x = if case < gen_count { generators[case].clone() } else { sample(s, seed, case - gen_count).0 };
            let lhs = o.promote(&o.rho(stage, &x)?, next)?;
            let rhs = o.rho(next, &gamma.apply(&x)?)?;
            compare(o, log, "rho_k = rho_{k+1} gamma", &lhs, &rhs)
        })
    });
    report.absorb("", results);
    Ok(report)
}

/// Every point of every truncation with at most [`MAX_FLIP_POINTS`] points:
/// `g(σ_0(x)) = σ_0^{-1}(g(x))`, `g(g(x)) = x`, stepping back inverts
/// stepping forward, and forward stepping is `+1 mod n_k` on indices.
pub fn verify_flip_conjugacy<A: CoefficientAlgebra>(o: &OdometerAlgebra<A>, exec: Execution) -> Result<VerificationReport> {
    let stages: Vec<usize> = (1..=o.sequence.len()).filter(|&k| o.sequence.sizes()[k - 1] <= MAX_FLIP_POINTS).collect();
    let mut report = VerificationReport::new(
        "flip",
        json!({ "sizes": o.sequence.sizes(), "stages": stages, "maxPoints": MAX_FLIP_POINTS }),
    );
    for &stage in &stages {
        let radii = o.radii(stage)?;
        let n = o.sequence.size(stage)?;
        let results = map_cases(exec, n as usize, |case| {
            CaseLog::new(case).run("flip", |log| {
                let x = index_to_digits(&radii, case as u64);
                let lhs = flip(&radii, &odometer_step(&radii, &x, 1)?)?;
                let rhs = odometer_step(&radii, &flip(&radii, &x)?, -1)?;
                log.check_eq("g(s(x)) = s^-1(g(x))", &lhs, &rhs, |v| json!(v));
                log.check_eq("g(g(x)) = x", &flip(&radii, &flip(&radii, &x)?)?, &x, |v| json!(v));
                let forward = odometer_step(&radii, &x, 1)?;
                log.check_eq("s^-1(s(x)) = x", &odometer_step(&radii, &forward, -1)?, &x, |v| json!(v));
                log.check_eq("index(s(x)) = index(x) + 1", &digits_to_index(&radii, &forward)?, &((case as u64 + 1) % n), |v| json!(v));
                Ok(())
            })
        });
        report.absorb(&format!("n={n}"), results);
    }
    Ok(report)
}

/// `V* Ψ(f) V = Ψ(σ(f))` in the reversed algebra for `count` random depth-`k`
/// functions, plus `Ψ(xy) = Ψ(x)Ψ(y)` and `Ψ(x*) = Ψ(x)*` on random elements.
pub fn verify_psi_flip<A: CoefficientAlgebra>(
    o: &OdometerAlgebra<A>,
    stage: usize,
    seed: u64,
    count: usize,
    exec: Execution,
) -> Result<VerificationReport> {
    let r = o.reversed();
    let v = r.u(1, stage)?;
    let v_star = r.star(&v);
    let mut report = VerificationReport::new(
        "psi-flip",
        json!({ "sizes": o.sequence.sizes(), "stage": stage, "seed": seed, "count": count }),
    );
    let results = map_cases(exec, count + 1, |case| {
        CaseLog::new(case).run("psi", |log| {
            let mut rng = case_rng(seed, case);
            let f = if case == 0 { o.constant(&o.alg.one(), stage)? } else { o.sample_function(&mut rng, stage, COEFF_DEGREE)? };
            let lhs = r.mul(&r.mul(&v_star, &o.psi(&o.from_function(f.clone())?))?, &v)?;
            let rhs = o.psi(&o.from_function(o.sigma(&f, 1))?);
            compare(&r, log, "V* psi(f) V = psi(sigma(f))", &lhs, &rhs)?;
            let x = o.sample(&mut rng, stage, 2, 1)?;
            let y = o.sample(&mut rng, stage, 2, 1)?;
            compare(&r, log, "psi(xy) = psi(x)psi(y)", &o.psi(&o.mul(&x, &y)?), &r.mul(&o.psi(&x), &o.psi(&y))?)?;
            compare(&r, log, "psi(x*) = psi(x)*", &o.psi(&o.star(&x)), &r.star(&o.psi(&x)))
        })
    });
    report.absorb("", results);
    Ok(report)
}

/// At stage `k`: `U` is rebuilt from `U^{j+1} δ_0 U^{-j}` and
/// `(δ_0 U^{n_k} δ_0)(δ_0 U^{-(n_k-1)})`; `count` random depth-`k` functions
/// equal `Σ_j f[j] U^j δ_0 U^{-j}`; and the generators are images of
/// `ρ_k`: `U^i δ_0 U^{-j} = ρ(u^l e_{-i,-j})` with `l` fixing the `U`-power
/// (`l ≠ 0` only when exactly one of `i, j` is 0), `δ_0 U^{n_k} δ_0 = ρ(u e_{0,0})`,
/// `a = ρ(Σ_j α^j(a) e_{j,j})`.
pub fn verify_gk_generation<A: CoefficientAlgebra>(
    o: &OdometerAlgebra<A>,
    stage: usize,
    seed: u64,
    count: usize,
    exec: Execution,
) -> Result<VerificationReport> {
    let n = o.points(stage)?;
    let s = stage_algebra(o, stage)?;
    let d0 = o.from_function(o.indicator(0, stage)?)?;
    let u = |d: usize, sign: i64| o.u(sign * d as i64, stage);
    let mut report =
        VerificationReport::new("gk-generation", json!({ "sizes": o.sequence.sizes(), "stage": stage, "seed": seed, "count": count }));

    let rebuilt = CaseLog::new(0).run("U", |log| {
        let mut sum = o.zero(stage)?;
        for j in 0..n.saturating_sub(1) {
            sum = o.add(&sum, &o.mul(&o.mul(&u(j + 1, 1)?, &d0)?, &u(j, -1)?)?)?;
        }
        let corner = o.mul(&o.mul(&d0, &u(n, 1)?)?, &d0)?;
        sum = o.add(&sum, &o.mul(&corner, &o.mul(&d0, &u(n - 1, -1)?)?)?)?;
        compare(o, log, "U from generators", &sum, &u(1, 1)?)?;
        let ue = s.embed(s.crossed.u(1), 0, 0);
        compare(o, log, "d0 U^n d0 = rho(u e00)", &corner, &o.rho(stage, &ue)?)?;
        for i in 0..n {
            for j in 0..n {
                let lhs = o.mul(&o.mul(&u(i, 1)?, &d0)?, &u(j, -1)?)?;
                let (p, q) = ((n - i) % n, (n - j) % n);
                let l = (i as i64 - j as i64 + p as i64 - q as i64) / n as i64;
                let rhs = o.rho(stage, &s.monomial(o.alg.one(), l, p, q))?;
                compare(o, log, &format!("U^{i} d0 U^-{j} = rho(e)"), &lhs, &rhs)?;
            }
        }
        Ok(())
    });
    let results = map_cases(exec, count, |case| {
        CaseLog::new(case + 1).run("C_k", |log| {
            let mut rng = case_rng(seed, case);
            let f = o.sample_function(&mut rng, stage, COEFF_DEGREE)?;
            let mut sum = o.zero(stage)?;
            for j in 0..n {
                let term = o.mul(&o.mul(&u(j, 1)?, &d0)?, &u(j, -1)?)?;
                let a = o.from_function(o.constant(f.value(j), stage)?)?;
                sum = o.add(&sum, &o.mul(&a, &term)?)?;
            }
            compare(o, log, "f = sum f[j] U^j d0 U^-j", &sum, &o.from_function(f)?)?;
            let a = o.alg.sample(&mut rng, COEFF_DEGREE);
            let mut diag = s.zero();
            for j in 0..n {
                diag = s.add(&diag, &s.embed(s.crossed.from_coeff(o.alg.alpha_power(&a, j as i64)), j, j))?;
            }
            compare(o, log, "a = rho(sum alpha^j(a) e_jj)", &o.rho(stage, &diag)?, &o.from_function(o.constant(&a, stage)?)?)
        })
    });
    report.failures.extend(rebuilt);
    report.cases = 1;
    report.absorb("", results);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{Angle, CircleRotation, FiniteCyclicShift};
    use crate::limits::StageSequence;

    fn odo(sizes: &[u64]) -> OdometerAlgebra<CircleRotation> {
        OdometerAlgebra::new(CircleRotation::new(Angle::theta()), StageSequence::new(sizes.to_vec()).unwrap())
    }

    #[test]
    fn rho_suite_small() {
        let exec = Execution::default();
        let o = odo(&[1, 2, 6]);
        assert!(verify_rho_homomorphism(&o, 1, 1, 5, exec).unwrap().passed());
        assert!(verify_rho_homomorphism(&o, 2, 1, 10, exec).unwrap().passed());
        assert!(verify_rho_homomorphism(&o, 3, 1, 2, exec).unwrap().passed());
    }

    #[test]
    fn rg_suite_small() {
        let exec = Execution::default();
        let o = odo(&[1, 2, 6]);
        assert!(verify_rg(&o, 1, 2, 5, exec).unwrap().passed());
        assert!(verify_rg(&o, 2, 2, 5, exec).unwrap().passed());
        assert!(verify_rg(&o, 3, 2, 5, exec).is_err());
        let c = OdometerAlgebra::new(FiniteCyclicShift::new(4).unwrap(), StageSequence::new(vec![1, 3, 6]).unwrap());
        assert!(verify_rg(&c, 2, 2, 5, exec).unwrap().passed());
    }

    #[test]
    fn rg_generator_examples() {
        let o = odo(&[1, 3, 6]);
        let g = Gamma::new(o.alg.clone(), 3, 6).unwrap();
        let s = &g.source;
        let a = crate::coeff::CircleFunction::z();
        let x = s.embed(s.crossed.from_coeff(a.clone()), 0, 0);
        let expected = o.from_function(o.point_mass(&a, 0, 2).unwrap()).unwrap();
        assert_eq!(o.rho(2, &x).unwrap(), expected);
        assert!(o.equal(&o.rho(3, &g.apply(&x).unwrap()).unwrap(), &expected).unwrap());
        let ue = s.embed(s.crossed.u(1), 0, 0);
        let expected = o.monomial(o.indicator(0, 2).unwrap(), 3);
        assert!(o.equal(&o.rho(3, &g.apply(&ue).unwrap()).unwrap(), &expected).unwrap());
    }

    #[test]
    fn flip_and_psi_suites() {
        let exec = Execution::default();
        let o = odo(&[1, 2, 6, 12, 60, 120]);
        let report = verify_flip_conjugacy(&o, exec).unwrap();
        assert!(report.passed());
        assert_eq!(report.cases, 1 + 2 + 6 + 12 + 60);
        assert!(verify_psi_flip(&odo(&[1, 2, 6]), 3, 1, 5, exec).unwrap().passed());
        assert!(verify_psi_flip(&odo(&[1, 3]), 1, 1, 3, exec).unwrap().passed());
    }

    #[test]
    fn psi_without_alpha_inverse_fails() {
        // In the algebra built from α itself, V* Ψ(f) V differs from Ψ(σ(f)).
        let o = odo(&[1, 2, 6]);
        let f = o.constant(&crate::coeff::CircleFunction::z(), 3).unwrap();
        let v = o.u(1, 3).unwrap();
        let lhs = o.mul(&o.mul(&o.star(&v), &o.psi(&o.from_function(f.clone()).unwrap())).unwrap(), &v).unwrap();
        assert_ne!(lhs, o.psi(&o.from_function(o.sigma(&f, 1)).unwrap()));
    }

    #[test]
    fn gk_generation_small() {
        let exec = Execution::default();
        let o = odo(&[1, 3, 6]);
        for stage in 1..=3 {
            let report = verify_gk_generation(&o, stage, 4, 3, exec).unwrap();
            assert!(report.passed(), "{:?}", report.failures);
            assert_eq!(report.cases, 4);
        }
        let merged = VerificationReport::over("gk-generation", json!({}), 1..=3, |k| format!("stage {k}"), |k| verify_gk_generation(&o, k, 4, 2, exec)).unwrap();
        assert_eq!(merged.cases, 9);
    }
}
