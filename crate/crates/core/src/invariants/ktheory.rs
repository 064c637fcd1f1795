use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::limits::StageSequence;
use crate::scalar::Rational;

/// Default number of enclosure refinements before giving up.
pub const DEFAULT_BUDGET: usize = 10_000;

/// `q + mθ ∈ Q(δ) + θZ`, the trace image of a `K_0` class.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct K0Class {
    pub q: Rational,
    pub m: i64,
}

impl K0Class {
    pub fn new(q: Rational, m: i64) -> Self {
        K0Class { q, m }
    }

    /// The class of the unit, with trace 1.
    pub fn order_unit() -> Self {
        K0Class::new(Rational::one(), 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        K0Class::new(&self.q + &other.q, self.m + other.m)
    }

    pub fn neg(&self) -> Self {
        K0Class::new(-&self.q, -self.m)
    }

    pub fn is_zero(&self) -> bool {
        self.q.is_zero() && self.m == 0
    }

    pub fn to_json(&self) -> Value {
        json!({ "q": self.q.to_string(), "m": self.m })
    }
}

/// `(a, b) ∈ Q(δ) ⊕ Z`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct K1Class {
    pub a: Rational,
    pub b: i64,
}

impl K1Class {
    pub fn to_json(&self) -> Value {
        json!({ "a": self.a.to_string(), "b": self.b })
    }
}

/// The stage-`k` group `Z ⊕ Z` read in the limit: `(a, b) ↦ (a / n_k, b)`.
/// Serves both `K_0` (trace `a/n_k + bθ`) and `K_1`.
fn normalize(sequence: &StageSequence, stage: usize, a: i64) -> Result<Rational> {
    let n = sequence.size(stage)?;
    Ok(Rational::new(a, n as i64))
}

pub fn k1_limit_normalize(sequence: &StageSequence, stage: usize, a: i64, b: i64) -> Result<K1Class> {
    Ok(K1Class { a: normalize(sequence, stage, a)?, b })
}

pub fn k0_limit_normalize(sequence: &StageSequence, stage: usize, a: i64, b: i64) -> Result<K0Class> {
    Ok(K0Class::new(normalize(sequence, stage, a)?, b))
}

/// Nested rational intervals around a caller-chosen irrational θ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ThetaEnclosure {
    /// `[a_0; prefix…, period, period, …]`; consecutive convergents bracket θ.
    ContinuedFraction { a0: i64, prefix: Vec<u64>, period: Vec<u64> },
    /// An explicit finite list of intervals.
    Intervals(Vec<(Rational, Rational)>),
}

impl ThetaEnclosure {
    pub fn continued_fraction(a0: i64, prefix: Vec<u64>, period: Vec<u64>) -> Result<Self> {
        if prefix.iter().chain(&period).any(|a| *a == 0) {
            return Err(Error::InvalidInput("continued fraction terms after a_0 must be positive".into()));
        }
        Ok(ThetaEnclosure::ContinuedFraction { a0, prefix, period })
    }

    /// Successive intervals; an interval that fails to nest in its predecessor
    /// or has nonpositive width yields an error.
    pub fn intervals(&self) -> Box<dyn Iterator<Item = Result<(Rational, Rational)>> + '_> {
        let raw: Box<dyn Iterator<Item = (Rational, Rational)> + '_> = match self {
            ThetaEnclosure::Intervals(list) => Box::new(list.iter().cloned()),
            ThetaEnclosure::ContinuedFraction { a0, prefix, period } => {
                let terms = prefix.iter().chain(period.iter().cycle()).copied();
                let (mut p, mut q) = ((Rational::from_integer(*a0), Rational::one()), (Rational::one(), Rational::zero()));
                let mut prev = &p.0 / &p.1;
                Box::new(terms.map(move |a| {
                    let a = Rational::from_integer(a as i64);
                    let next_p = &(&a * &p.0) + &q.0;
                    let next_q = &(&a * &p.1) + &q.1;
                    q = std::mem::replace(&mut p, (next_p, next_q));
                    let cur = &p.0 / &p.1;
                    let out = if prev < cur { (prev.clone(), cur.clone()) } else { (cur.clone(), prev.clone()) };
                    prev = cur;
                    out
                }))
            }
        };
        let mut outer: Option<(Rational, Rational)> = None;
        Box::new(raw.map(move |(lo, hi)| {
            if lo >= hi {
                return Err(Error::InvalidInput(format!("enclosure [{lo}, {hi}] has no interior")));
            }
            if let Some((plo, phi)) = &outer {
                if lo < *plo || hi > *phi {
                    return Err(Error::InvalidInput(format!("enclosure [{lo}, {hi}] is not nested in [{plo}, {phi}]")));
                }
            }
            outer = Some((lo.clone(), hi.clone()));
            Ok((lo, hi))
        }))
    }
}

fn affine(c: &K0Class, lo: &Rational, hi: &Rational) -> (Rational, Rational) {
    let m = Rational::from_integer(c.m);
    let (a, b) = (&c.q + &(&m * lo), &c.q + &(&m * hi));
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// An interval of width below `precision` containing `q + mθ`.
pub fn k0_tau_value(c: &K0Class, theta: &ThetaEnclosure, precision: &Rational, budget: usize) -> Result<(Rational, Rational)> {
    if c.m == 0 {
        return Ok((c.q.clone(), c.q.clone()));
    }
    for interval in theta.intervals().take(budget) {
        let (lo, hi) = interval?;
        let (a, b) = affine(c, &lo, &hi);
        if &(&b - &a) < precision {
            return Ok((a, b));
        }
    }
    Err(Error::BudgetExceeded(budget))
}

/// Whether `q + mθ ≥ 0`. Zero is in the positive cone.
pub fn k0_positive(c: &K0Class, theta: &ThetaEnclosure, budget: usize) -> Result<bool> {
    if c.m == 0 {
        return Ok(!c.q.is_negative());
    }
    for interval in theta.intervals().take(budget) {
        let (lo, hi) = interval?;
        let (a, b) = affine(c, &lo, &hi);
        if !a.is_negative() && !a.is_zero() {
            return Ok(true);
        }
        if b.is_negative() {
            return Ok(false);
        }
    }
    Err(Error::BudgetExceeded(budget))
}

#[cfg(test)]
mod tests {
    use num::bigint::BigInt;
    use rand::Rng;

    use super::*;
    use crate::random::case_rng;

    fn root2_minus_1() -> ThetaEnclosure {
        ThetaEnclosure::continued_fraction(0, vec![], vec![2]).unwrap()
    }

    /// `√2 - 1` truncated to 200 decimal digits, by integer square root.
    fn root2_minus_1_digits() -> Rational {
        let scale = BigInt::from(10).pow(200);
        let s = (BigInt::from(2) * &scale * &scale).sqrt();
        Rational::from_big(s - &scale, scale)
    }

    #[test]
    fn tau_value_examples() {
        let t = root2_minus_1();
        let eps = Rational::new(1, 1000);
        let half = K0Class::new(Rational::new(1, 2), 0);
        assert_eq!(k0_tau_value(&half, &t, &eps, 10).unwrap(), (Rational::new(1, 2), Rational::new(1, 2)));
        let (lo, hi) = k0_tau_value(&K0Class::new(Rational::new(1, 2), -1), &t, &eps, 100).unwrap();
        assert!(Rational::new(8, 100) <= lo && hi <= Rational::new(9, 100));
        assert_eq!(k0_tau_value(&K0Class::new(Rational::zero(), 0), &t, &eps, 1).unwrap(), (Rational::zero(), Rational::zero()));
        assert_eq!(k0_tau_value(&K0Class::new(Rational::zero(), 1), &t, &eps, 2), Err(Error::BudgetExceeded(2)));
    }

    #[test]
    fn positivity_examples() {
        let t = root2_minus_1();
        assert!(k0_positive(&K0Class::new(Rational::new(1, 2), -1), &t, 100).unwrap());
        assert!(k0_positive(&K0Class::new(Rational::zero(), 1), &t, 100).unwrap());
        assert!(!k0_positive(&K0Class::new(Rational::new(2, 5), -1), &t, 100).unwrap());
        assert!(k0_positive(&K0Class::new(Rational::zero(), 0), &t, 0).unwrap());
        assert!(!k0_positive(&K0Class::new(Rational::new(-1, 3), 0), &t, 0).unwrap());
        // 1/2 - θ at rational θ = 1/2 never separates from 0.
        let rational = ThetaEnclosure::Intervals(vec![(Rational::zero(), Rational::one()); 1]);
        assert_eq!(k0_positive(&K0Class::new(Rational::new(1, 2), -1), &rational, 5), Err(Error::BudgetExceeded(5)));
    }

    #[test]
    fn positivity_matches_high_precision() {
        let t = root2_minus_1();
        let approx = root2_minus_1_digits();
        for case in 0..50 {
            let mut rng = case_rng(11, case);
            let c = K0Class::new(Rational::new(rng.gen_range(-40..=40), rng.gen_range(1..=16)), rng.gen_range(-20..=20));
            if c.is_zero() {
                continue;
            }
            let value = &c.q + &(&Rational::from_integer(c.m) * &approx);
            assert_eq!(k0_positive(&c, &t, DEFAULT_BUDGET).unwrap(), !value.is_negative(), "{c:?}");
        }
    }

    #[test]
    fn enclosures_nest_and_shrink() {
        let t = root2_minus_1();
        let first: Vec<_> = t.intervals().take(6).map(Result::unwrap).collect();
        assert_eq!(first[0], (Rational::zero(), Rational::new(1, 2)));
        assert_eq!(first[1], (Rational::new(2, 5), Rational::new(1, 2)));
        let approx = root2_minus_1_digits();
        for (lo, hi) in &first {
            assert!(*lo < approx && approx < *hi);
        }
        let bad = ThetaEnclosure::Intervals(vec![(Rational::zero(), Rational::one()), (Rational::new(1, 2), Rational::new(3, 2))]);
        assert!(bad.intervals().nth(1).unwrap().is_err());
        assert!(ThetaEnclosure::continued_fraction(0, vec![0], vec![1]).is_err());
        let golden = ThetaEnclosure::continued_fraction(1, vec![], vec![1]).unwrap();
        let (lo, hi) = golden.intervals().nth(20).unwrap().unwrap();
        assert!((&hi - &lo).abs() < Rational::new(1, 1_000_000) && lo.to_f64() < 1.6181 && hi.to_f64() > 1.6180);
    }

    #[test]
    fn k1_normalization_is_constant_on_orbits() {
        let seq = StageSequence::new(vec![1, 2, 4, 8]).unwrap();
        assert_eq!(k1_limit_normalize(&seq, 3, 1, 5).unwrap(), K1Class { a: Rational::new(1, 4), b: 5 });
        assert_eq!(k1_limit_normalize(&seq, 2, 0, 7).unwrap().a, Rational::zero());
        assert_eq!(k1_limit_normalize(&seq, 1, 3, 2).unwrap(), K1Class { a: Rational::from_integer(3), b: 2 });
        // Chasing (a, b) through (γ_k)_*: (a, b) ↦ (m_k a, b).
        let radii = seq.radii();
        for k in 1..4 {
            for (a, b) in [(1, 0), (-3, 2), (5, -1)] {
                let here = k1_limit_normalize(&seq, k, a, b).unwrap();
                let there = k1_limit_normalize(&seq, k + 1, radii[k - 1] as i64 * a, b).unwrap();
                assert_eq!(here, there);
            }
        }
        assert!(k1_limit_normalize(&seq, 5, 1, 1).is_err());
        assert_eq!(k0_limit_normalize(&seq, 4, 4, 1).unwrap(), K0Class::new(Rational::new(1, 2), 1));
        assert_eq!(K0Class::order_unit().add(&K0Class::order_unit().neg()), K0Class::new(Rational::zero(), 0));
    }
}
