use serde_json::{json, Value};

use super::supernatural::{q_delta_member, SupernaturalNumber};
use crate::coeff::{cyclic_invariant_ideal_search, shift_orbits, Angle};
use crate::error::{Error, Result};
use crate::limits::StageSequence;
use crate::scalar::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Answer {
    Isomorphic,
    NotIsomorphic,
    /// The data would give an answer, but a finite-evidence invariant cannot certify it.
    Undecided,
}

impl Answer {
    pub fn as_str(self) -> &'static str {
        match self {
            Answer::Isomorphic => "isomorphic",
            Answer::NotIsomorphic => "not isomorphic",
            Answer::Undecided => "undecided",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Decision {
    pub answer: Answer,
    pub finite_evidence: bool,
    pub witness: Value,
}

impl Decision {
    pub fn to_json(&self) -> Value {
        json!({ "answer": self.answer.as_str(), "finiteEvidence": self.finite_evidence, "witness": self.witness })
    }
}

fn require_irrational(angle: &Angle) -> Result<()> {
    if angle.is_rational() {
        return Err(Error::InvalidInput(format!("angle {angle} has no θ component; the classification needs an irrational angle")));
    }
    Ok(())
}

/// Membership of the rational part when the θ-parts cancel in `θ_1 - θ_2` or `θ_1 + θ_2`.
fn membership(a1: &Angle, a2: &Angle, delta: &SupernaturalNumber) -> Option<(&'static str, Rational, bool)> {
    let (r1, r2) = (&a1.theta_part, &a2.theta_part);
    if r1 == r2 {
        let q = &a1.rational_part - &a2.rational_part;
        let ok = q_delta_member(&q, delta);
        Some(("difference", q, ok))
    } else if *r1 == -r2 {
        let q = &a1.rational_part + &a2.rational_part;
        let ok = q_delta_member(&q, delta);
        Some(("sum", q, ok))
    } else {
        None
    }
}

/// `B_{θ_1}` with invariant `δ_1` against `B_{θ_2}` with `δ_2`: isomorphic iff
/// `δ_1 = δ_2` and `θ_1 - θ_2` or `θ_1 + θ_2` lies in `Q(δ)`.
///
/// Angles are `q + rθ` over one formal irrational `θ`, so `θ_1 ± θ_2` can be
/// rational only when the `θ`-parts cancel; otherwise the answer is negative
/// whatever the supernatural numbers are.
pub fn decide_isomorphism(a1: &Angle, d1: &SupernaturalNumber, a2: &Angle, d2: &SupernaturalNumber) -> Result<Decision> {
    require_irrational(a1)?;
    require_irrational(a2)?;
    let finite_evidence = d1.finite_evidence || d2.finite_evidence;
    let Some((case, q, member)) = membership(a1, a2, d1) else {
        return Ok(Decision {
            answer: Answer::NotIsomorphic,
            finite_evidence,
            witness: json!({
                "reason": "theta parts do not cancel",
                "r1": a1.theta_part.to_string(),
                "r2": a2.theta_part.to_string(),
            }),
        });
    };
    let (answer, witness) = if let Some(p) = d1.first_difference(d2) {
        (
            Answer::NotIsomorphic,
            json!({ "reason": "supernatural numbers differ", "prime": p, "delta1": d1.to_json(), "delta2": d2.to_json() }),
        )
    } else {
        let witness = json!({
            "case": case,
            "value": q.to_string(),
            "denominator": q.denom().to_string(),
            "delta": d1.to_json(),
            "member": member,
        });
        (if member { Answer::Isomorphic } else { Answer::NotIsomorphic }, witness)
    };
    if finite_evidence {
        let mut witness = witness;
        witness["tentative"] = json!(answer.as_str());
        return Ok(Decision { answer: Answer::Undecided, finite_evidence, witness });
    }
    Ok(Decision { answer, finite_evidence, witness })
}

/// `M_p(B_θ(δ)) ≅ B_{θ/p}(pδ)`.
pub fn decide_amplification(p: u64, angle: &Angle, delta: &SupernaturalNumber) -> Result<(Angle, SupernaturalNumber)> {
    if p == 0 {
        return Err(Error::InvalidInput("amplification needs p ≥ 1".into()));
    }
    Ok((angle.div_int(p as i64)?, delta.mul_int(p)?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteModelDecision {
    pub holds: bool,
    /// Stage (1-based), its size, and the invariant subset or orbit list that breaks the property.
    pub witness: Option<(usize, u64, Vec<Vec<usize>>)>,
}

impl FiniteModelDecision {
    pub fn to_json(&self) -> Value {
        match &self.witness {
            None => json!({ "answer": self.holds, "witness": null }),
            Some((stage, n, sets)) => json!({ "answer": self.holds, "witness": { "stage": stage, "n": n, "sets": sets } }),
        }
    }
}

/// Simplicity of the limit over `C(Z/d)` with the cyclic shift: no stage
/// admits a proper nonzero `α^{n_k}`-invariant ideal. The witness is the first
/// invariant subset found.
pub fn decide_simplicity_finite_model(d: usize, sequence: &StageSequence) -> Result<FiniteModelDecision> {
    if d == 0 {
        return Err(Error::InvalidInput("modulus must be positive".into()));
    }
    for (k, &n) in sequence.sizes().iter().enumerate() {
        if let Some(subset) = cyclic_invariant_ideal_search(d, n) {
            return Ok(FiniteModelDecision { holds: false, witness: Some((k + 1, n, vec![subset])) });
        }
    }
    Ok(FiniteModelDecision { holds: true, witness: None })
}

/// Uniqueness of the `α^{n_k}`-invariant state on `C(Z/d)` at every stage:
/// invariant states are mixtures of orbit-uniform measures, so uniqueness
/// means one orbit. The witness lists the orbits at the first failing stage.
pub fn decide_trace_uniqueness_finite_model(d: usize, sequence: &StageSequence) -> Result<FiniteModelDecision> {
    if d == 0 {
        return Err(Error::InvalidInput("modulus must be positive".into()));
    }
    for (k, &n) in sequence.sizes().iter().enumerate() {
        let orbits = shift_orbits(d, n);
        if orbits.len() > 1 {
            return Ok(FiniteModelDecision { holds: false, witness: Some((k + 1, n, orbits)) });
        }
    }
    Ok(FiniteModelDecision { holds: true, witness: None })
}

/// For the irrational rotation the invariant trace is unique by unique
/// ergodicity; this is recorded, not computed.
pub fn circle_trace_uniqueness(angle: &Angle) -> Result<Value> {
    require_irrational(angle)?;
    Ok(json!({ "answer": true, "basis": "asserted", "angle": angle.to_string() }))
}
