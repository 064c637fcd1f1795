//! Named verification suites over a stage sequence, as run by the CLI.

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::cantor::{self, OdometerAlgebra};
use crate::coeff::{Angle, CircleRotation, CoefficientAlgebra, FiniteCyclicShift};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::fock;
use crate::limits::{self, StageSequence};
use crate::report::VerificationReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    GammaHom,
    GammaComp,
    TraceCompat,
    FockId,
    FockBlocks,
    CompactPreserve,
    Shuffle,
    RhoHom,
    Rg,
    Flip,
    PsiFlip,
    GkGeneration,
    Amplification,
}

impl Suite {
    pub const ALL: [Suite; 13] = [
        Suite::GammaHom,
        Suite::GammaComp,
        Suite::TraceCompat,
        Suite::FockId,
        Suite::FockBlocks,
        Suite::CompactPreserve,
        Suite::Shuffle,
        Suite::RhoHom,
        Suite::Rg,
        Suite::Flip,
        Suite::PsiFlip,
        Suite::GkGeneration,
        Suite::Amplification,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::GammaHom => "gamma-hom",
            Suite::GammaComp => "gamma-comp",
            Suite::TraceCompat => "trace-compat",
            Suite::FockId => "fock-id",
            Suite::FockBlocks => "fock-blocks",
            Suite::CompactPreserve => "compact-preserve",
            Suite::Shuffle => "shuffle",
            Suite::RhoHom => "rho-hom",
            Suite::Rg => "rg",
            Suite::Flip => "flip",
            Suite::PsiFlip => "psi-flip",
            Suite::GkGeneration => "gk-generation",
            Suite::Amplification => "amplification",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|suite| suite.name() == s).ok_or_else(|| {
            let names: Vec<_> = Suite::ALL.iter().map(|s| s.name()).collect();
            Error::Parse(format!("unknown suite {s:?}; expected one of {}", names.join(", ")))
        })
    }
}

/// Coefficient algebra of a run.
#[derive(Clone, Debug, PartialEq)]
pub enum AlgebraChoice {
    Circle(Angle),
    Cyclic(usize),
}

impl AlgebraChoice {
    pub fn to_json(&self) -> Value {
        match self {
            AlgebraChoice::Circle(a) => json!({ "kind": "circle", "angle": a.to_string() }),
            AlgebraChoice::Cyclic(d) => json!({ "kind": "cyclic", "modulus": d }),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub sequence: StageSequence,
    pub algebra: AlgebraChoice,
    /// Fock truncation depth; each Fock suite has its own default.
    pub depth: Option<usize>,
    pub seed: u64,
    pub count: usize,
    /// Periods for `fock-blocks` (default 1, 2, 3).
    pub periods: Vec<usize>,
    /// Amplification factor for `amplification`.
    pub p: u64,
    pub exec: Execution,
}

impl SuiteConfig {
    pub fn new(sequence: StageSequence, algebra: AlgebraChoice) -> Self {
        SuiteConfig { sequence, algebra, depth: None, seed: 0, count: 20, periods: vec![1, 2, 3], p: 2, exec: Execution::default() }
    }

    fn to_json(&self, suite: Suite) -> Value {
        json!({
            "suite": suite.name(),
            "sizes": self.sequence.sizes(),
            "algebra": self.algebra.to_json(),
            "depth": self.depth,
            "seed": self.seed,
            "count": self.count,
            "periods": self.periods,
            "p": self.p,
        })
    }
}

fn pairs(seq: &StageSequence) -> Vec<(u64, u64)> {
    let s = seq.sizes();
    let mut out = Vec::new();
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            out.push((s[i], s[j]));
        }
    }
    out
}

fn consecutive(seq: &StageSequence) -> Vec<(u64, u64)> {
    seq.sizes().windows(2).map(|w| (w[0], w[1])).collect()
}

fn pair_label((n, m): (u64, u64)) -> String {
    format!("({n},{m})")
}

fn run_generic<A: CoefficientAlgebra>(alg: &A, suite: Suite, c: &SuiteConfig) -> Result<VerificationReport> {
    let (seed, count, exec) = (c.seed, c.count, c.exec);
    let config = c.to_json(suite);
    let name = suite.name();
    let seq = &c.sequence;
    let stages = 1..=seq.len();
    let stage_label = |k: usize| format!("stage {k}");
    match suite {
        Suite::GammaHom => VerificationReport::over(name, config, pairs(seq), pair_label, |(n, m)| {
            limits::verify_gamma_homomorphism(alg, n, m, seed, count, exec)
        }),
        Suite::GammaComp => {
            let s = seq.sizes();
            let mut triples = Vec::new();
            for i in 0..s.len() {
                for j in i + 1..s.len() {
                    for l in j + 1..s.len() {
                        triples.push((s[i], s[j] / s[i], s[l] / s[j]));
                    }
                }
            }
            VerificationReport::over(name, config, triples, |(n, k, l)| format!("({n},{k},{l})"), |(n, k, l)| {
                limits::verify_gamma_composition(alg, n, k, l, seed, count, exec)
            })
        }
        Suite::TraceCompat => VerificationReport::over(name, config, pairs(seq), pair_label, |(n, m)| {
            limits::verify_trace_compatibility(alg, n, m, seed, count, exec)
        }),
        Suite::FockId => {
            let mut report = VerificationReport::new(name, config);
            report.merge("", fock::verify_eq_id(alg, c.depth.unwrap_or(8), seed, count, exec)?);
            Ok(report)
        }
        Suite::FockBlocks => VerificationReport::over(name, config, c.periods.clone(), |k| format!("period {k}"), |k| {
            fock::verify_lemma_algebra_blocks(alg, k, c.depth.unwrap_or(4 * k), seed, count, exec)
        }),
        Suite::CompactPreserve => VerificationReport::over(name, config, consecutive(seq), pair_label, |(n, m)| {
            fock::verify_compact_preservation(alg, n, m, c.depth.unwrap_or(6), seed, count, exec)
        }),
        Suite::Shuffle => VerificationReport::over(name, config, consecutive(seq), pair_label, |(n, m)| {
            fock::verify_shuffle(alg, n, m, c.depth.unwrap_or(6), seed, count, exec)
        }),
        Suite::RhoHom => {
            let o = OdometerAlgebra::new(alg.clone(), seq.clone());
            VerificationReport::over(name, config, stages, stage_label, |k| cantor::verify_rho_homomorphism(&o, k, seed, count, exec))
        }
        Suite::Rg => {
            let o = OdometerAlgebra::new(alg.clone(), seq.clone());
            VerificationReport::over(name, config, 1..seq.len(), stage_label, |k| cantor::verify_rg(&o, k, seed, count, exec))
        }
        Suite::Flip => {
            let o = OdometerAlgebra::new(alg.clone(), seq.clone());
            let mut report = VerificationReport::new(name, config);
            report.merge("", cantor::verify_flip_conjugacy(&o, exec)?);
            Ok(report)
        }
        Suite::PsiFlip => {
            let o = OdometerAlgebra::new(alg.clone(), seq.clone());
            VerificationReport::over(name, config, stages, stage_label, |k| cantor::verify_psi_flip(&o, k, seed, count, exec))
        }
        Suite::GkGeneration => {
            let o = OdometerAlgebra::new(alg.clone(), seq.clone());
            VerificationReport::over(name, config, stages, stage_label, |k| cantor::verify_gk_generation(&o, k, seed, count, exec))
        }
        Suite::Amplification => Err(Error::InvalidInput("the amplification suite needs the circle algebra".into())),
    }
}

/// Runs `suite` on every applicable stage, pair or triple of the sequence.
pub fn run_suite(suite: Suite, c: &SuiteConfig) -> Result<VerificationReport> {
    match &c.algebra {
        AlgebraChoice::Circle(angle) if suite == Suite::Amplification => {
            VerificationReport::over(suite.name(), c.to_json(suite), consecutive(&c.sequence), pair_label, |(n, m)| {
                limits::verify_amplification_intertwining(angle, c.p, n, m, c.seed, c.count, c.exec)
            })
        }
        AlgebraChoice::Circle(angle) => run_generic(&CircleRotation::new(angle.clone()), suite, c),
        AlgebraChoice::Cyclic(d) => run_generic(&FiniteCyclicShift::new(*d)?, suite, c),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(sizes: &str, count: usize) -> SuiteConfig {
        let mut c = SuiteConfig::new(sizes.parse().unwrap(), AlgebraChoice::Circle(Angle::theta()));
        c.count = count;
        c
    }

    #[test]
    fn names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn every_suite_runs_on_a_small_sequence() {
        let mut c = config("1,2,4", 2);
        c.periods = vec![1, 2];
        for s in Suite::ALL {
            let report = run_suite(s, &c).unwrap();
            assert!(report.passed(), "{s}: {:?}", report.failures);
            assert!(report.cases > 0, "{s}");
            assert_eq!(report.suite, s.name());
        }
        c.algebra = AlgebraChoice::Cyclic(3);
        assert!(run_suite(Suite::Rg, &c).unwrap().passed());
        assert!(run_suite(Suite::Amplification, &c).is_err());
    }

    #[test]
    fn zero_count_runs_no_cases() {
        let report = run_suite(Suite::GammaHom, &config("1,3", 0)).unwrap();
        assert_eq!((report.cases, report.passed()), (0, true));
    }

    #[test]
    fn reports_are_deterministic() {
        let c = config("1,2,4", 3);
        let a = run_suite(Suite::TraceCompat, &c).unwrap().to_json().to_string();
        let mut seq = c.clone();
        seq.exec = Execution::Sequential;
        assert_eq!(a, run_suite(Suite::TraceCompat, &seq).unwrap().to_json().to_string());
    }
}
