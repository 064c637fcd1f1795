use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num::bigint::BigInt;
use num::{One, Zero};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::scalar::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Exponent {
    Finite(u32),
    Infinite,
}

impl Exponent {
    fn add(self, other: Exponent) -> Exponent {
        match (self, other) {
            (Exponent::Finite(a), Exponent::Finite(b)) => Exponent::Finite(a + b),
            _ => Exponent::Infinite,
        }
    }

    fn to_json(self) -> Value {
        match self {
            Exponent::Finite(e) => json!(e),
            Exponent::Infinite => json!("inf"),
        }
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) if s == "inf" => Ok(Exponent::Infinite),
            Value::String(s) => s.parse::<Exponent>(),
            Value::Number(n) => n
                .as_u64()
                .and_then(|e| u32::try_from(e).ok())
                .map(Exponent::Finite)
                .ok_or_else(|| Error::Parse(format!("bad exponent {n}"))),
            other => Err(Error::Parse(format!("bad exponent {other}"))),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "∞" => Ok(Exponent::Infinite),
            t => t.parse().map(Exponent::Finite).map_err(|_| Error::Parse(format!("bad exponent {t:?}"))),
        }
    }
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn is_prime(p: u64) -> bool {
    p >= 2 && factorize(p) == [(p, 1)]
}

/// A supernatural number `Π p^{e_p}` with finite support and `e_p ∈ N ∪ {∞}`.
///
/// `finite_evidence` marks values read off a finite prefix of a sequence with
/// no declared tail; such a value is a lower bound, not the invariant itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupernaturalNumber {
    factors: BTreeMap<u64, Exponent>,
    pub finite_evidence: bool,
}

impl SupernaturalNumber {
    pub fn new(factors: impl IntoIterator<Item = (u64, Exponent)>, finite_evidence: bool) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (p, e) in factors {
            if !is_prime(p) {
                return Err(Error::InvalidInput(format!("{p} is not prime")));
            }
            if e == Exponent::Finite(0) {
                continue;
            }
            if map.insert(p, e).is_some() {
                return Err(Error::InvalidInput(format!("prime {p} listed twice")));
            }
        }
        Ok(SupernaturalNumber { factors: map, finite_evidence })
    }

    /// The exponentwise maximum over `sizes`, with each prime of `tail`
    /// raised to `∞`. Without a tail the result is finite evidence only.
    pub fn from_sequence(sizes: &[u64], tail: Option<&[u64]>) -> Result<Self> {
        crate::limits::StageSequence::new(sizes.to_vec())?;
        let mut factors = BTreeMap::new();
        for &n in sizes {
            for (p, e) in factorize(n) {
                let slot = factors.entry(p).or_insert(Exponent::Finite(0));
                *slot = (*slot).max(Exponent::Finite(e));
            }
        }
        for &p in tail.unwrap_or(&[]) {
            if !is_prime(p) {
                return Err(Error::InvalidInput(format!("{p} is not prime")));
            }
            factors.insert(p, Exponent::Infinite);
        }
        Ok(SupernaturalNumber { factors, finite_evidence: tail.is_none() })
    }

    pub fn factors(&self) -> impl Iterator<Item = (u64, Exponent)> + '_ {
        self.factors.iter().map(|(p, e)| (*p, *e))
    }

    pub fn exponent(&self, p: u64) -> Exponent {
        self.factors.get(&p).copied().unwrap_or(Exponent::Finite(0))
    }

    /// Equality of the numbers themselves, ignoring the evidence flag.
    pub fn same_value(&self, other: &Self) -> bool {
        self.factors == other.factors
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.factors.iter().all(|(p, e)| *e <= other.exponent(*p))
    }

    /// Smallest prime whose exponents differ.
    pub fn first_difference(&self, other: &Self) -> Option<u64> {
        self.factors.keys().chain(other.factors.keys()).copied().filter(|p| self.exponent(*p) != other.exponent(*p)).min()
    }

    /// `p · δ`.
    pub fn mul_int(&self, p: u64) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidInput("cannot multiply a supernatural number by 0".into()));
        }
        let mut out = self.clone();
        for (q, e) in factorize(p) {
            let slot = out.factors.entry(q).or_insert(Exponent::Finite(0));
            *slot = slot.add(Exponent::Finite(e));
        }
        Ok(out)
    }

    /// Whether the denominator of `r` (in lowest terms) divides `δ`.
    pub fn admits_denominator(&self, r: &Rational) -> bool {
        let mut d: BigInt = r.denom().clone();
        for (p, e) in &self.factors {
            let p = BigInt::from(*p);
            let mut used = 0u32;
            while (&d % &p).is_zero() && Exponent::Finite(used) < *e {
                d /= &p;
                used += 1;
            }
        }
        d.is_one()
    }

    pub fn to_json(&self) -> Value {
        let mut factors = Map::new();
        for (p, e) in &self.factors {
            factors.insert(p.to_string(), e.to_json());
        }
        json!({ "factors": factors, "finiteEvidence": self.finite_evidence })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let factors = v
            .get("factors")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Parse("supernatural number needs \"factors\"".into()))?;
        let parsed = factors
            .iter()
            .map(|(p, e)| Ok((p.parse::<u64>().map_err(|_| Error::Parse(format!("bad prime {p:?}")))?, Exponent::from_json(e)?)))
            .collect::<Result<Vec<_>>>()?;
        let finite = v.get("finiteEvidence").and_then(Value::as_bool).unwrap_or(false);
        SupernaturalNumber::new(parsed, finite)
    }
}

/// `Q(δ)` membership: every prime power of the denominator of `r` is bounded
/// by its exponent in `δ`.
pub fn q_delta_member(r: &Rational, delta: &SupernaturalNumber) -> bool {
    delta.admits_denominator(r)
}

/// The first stage `k` (1-based) with `denominator(r) | n_k`.
pub fn q_delta_witness(r: &Rational, sizes: &[u64]) -> Option<usize> {
    let d = r.denom();
    sizes.iter().position(|n| (BigInt::from(*n) % d).is_zero()).map(|k| k + 1)
}

/// `2^inf*3^2`, `2^∞·3`, `6`, `1` (the empty product). Composite bases are
/// factored. A trailing `?` marks finite evidence.
impl FromStr for SupernaturalNumber {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (body, finite) = match s.strip_suffix('?') {
            Some(b) => (b.trim(), true),
            None => (s, false),
        };
        if body == "1" || body.is_empty() {
            return SupernaturalNumber::new([], finite);
        }
        let mut factors: BTreeMap<u64, Exponent> = BTreeMap::new();
        for t in body.split(['*', '·']) {
            let (base, e) = t.split_once('^').unwrap_or((t, "1"));
            let base = base.trim().parse::<u64>().map_err(|_| Error::Parse(format!("bad factor {base:?}")))?;
            if base == 0 {
                return Err(Error::Parse("0 is not a factor of a supernatural number".into()));
            }
            let e = e.parse::<Exponent>()?;
            for (p, mult) in factorize(base) {
                let scaled = match e {
                    Exponent::Finite(e) => Exponent::Finite(e * mult),
                    Exponent::Infinite => Exponent::Infinite,
                };
                let slot = factors.entry(p).or_insert(Exponent::Finite(0));
                *slot = slot.add(scaled);
            }
        }
        SupernaturalNumber::new(factors, finite)
    }
}

impl fmt::Display for SupernaturalNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            write!(f, "1")?;
        }
        for (i, (p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            match e {
                Exponent::Finite(1) => write!(f, "{p}")?,
                Exponent::Finite(e) => write!(f, "{p}^{e}")?,
                Exponent::Infinite => write!(f, "{p}^inf")?,
            }
        }
        if self.finite_evidence {
            write!(f, "?")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sn(s: &str) -> SupernaturalNumber {
        s.parse().unwrap()
    }

    #[test]
    fn from_sequence_examples() {
        let d = SupernaturalNumber::from_sequence(&[1, 2, 4, 8], Some(&[2])).unwrap();
        assert!(d.same_value(&sn("2^inf")) && !d.finite_evidence);
        assert_eq!(SupernaturalNumber::from_sequence(&[1, 6], Some(&[])).unwrap(), sn("2*3"));
        let d = SupernaturalNumber::from_sequence(&[1, 2, 4], None).unwrap();
        assert_eq!(d, sn("2^2?"));
        assert!(SupernaturalNumber::from_sequence(&[1, 3, 4], None).is_err());
        assert!(SupernaturalNumber::from_sequence(&[1, 2], Some(&[4])).is_err());
    }

    #[test]
    fn membership_and_division() {
        let two = sn("2^inf");
        assert!(q_delta_member(&Rational::new(3, 8), &two));
        assert!(!q_delta_member(&Rational::new(1, 3), &two));
        assert!(q_delta_member(&Rational::from_integer(-5), &sn("1")));
        assert!(!q_delta_member(&Rational::new(1, 8), &sn("2^2")));
        assert!(sn("2^inf*3").divides(&sn("2^inf*3^2")));
        assert!(!sn("2^inf*3^2").divides(&sn("2^inf*3")));
        assert_eq!(sn("2^inf*3").first_difference(&sn("2^inf*5")), Some(3));
        assert_eq!(q_delta_witness(&Rational::new(1, 4), &[1, 2, 4, 8]), Some(3));
        assert_eq!(q_delta_witness(&Rational::new(1, 3), &[1, 2, 4, 8]), None);
    }

    #[test]
    fn membership_matches_stage_search() {
        // For a certified finite δ = n_K, membership is divisibility of n_K.
        for sizes in [vec![1u64, 2, 4], vec![1, 3, 9], vec![1, 6, 12]] {
            let delta = SupernaturalNumber::from_sequence(&sizes, Some(&[])).unwrap();
            for den in 1..=40 {
                for num in [1i64, 5] {
                    let r = Rational::new(num, den);
                    assert_eq!(q_delta_member(&r, &delta), q_delta_witness(&r, &sizes).is_some(), "{r} in {delta}");
                }
            }
        }
    }

    #[test]
    fn amplification_and_text() {
        assert_eq!(sn("2^inf").mul_int(2).unwrap(), sn("2^inf"));
        assert_eq!(sn("3").mul_int(6).unwrap(), sn("2*3^2"));
        assert_eq!(sn("2^inf*3^2").to_string(), "2^inf*3^2");
        assert_eq!(sn("2·3?").to_string(), "2*3?");
        assert_eq!(sn("4^2*2"), sn("2^5"));
        assert_eq!(sn("6^inf"), sn("2^inf*3^inf"));
        assert!("0".parse::<SupernaturalNumber>().is_err());
        assert!("x".parse::<SupernaturalNumber>().is_err());
        let d = sn("2^inf*3^2?");
        assert_eq!(d.to_json(), json!({ "factors": { "2": "inf", "3": 2 }, "finiteEvidence": true }));
        assert_eq!(SupernaturalNumber::from_json(&d.to_json()).unwrap(), d);
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
    }
}
