use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::{conductor_limit, Rational};

/// A rotation angle `q + r·θ` with rational `q`, `r` and formal irrational `θ`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Angle {
    pub rational_part: Rational,
    pub theta_part: Rational,
}

impl Angle {
    pub fn new(rational_part: Rational, theta_part: Rational) -> Result<Self> {
        let limit = conductor_limit();
        match rational_part.denom_u64() {
            Some(d) if d <= limit => Ok(Angle { rational_part, theta_part }),
            d => Err(Error::ConductorTooLarge { denominator: d.unwrap_or(u64::MAX), limit }),
        }
    }

    /// The bare formal angle `θ`.
    pub fn theta() -> Self {
        Angle { rational_part: Rational::zero(), theta_part: Rational::one() }
    }

    pub fn is_rational(&self) -> bool {
        self.theta_part.is_zero()
    }

    pub fn neg(&self) -> Self {
        Angle { rational_part: -&self.rational_part, theta_part: -&self.theta_part }
    }

    pub fn add(&self, other: &Angle) -> Result<Self> {
        Angle::new(&self.rational_part + &other.rational_part, &self.theta_part + &other.theta_part)
    }

    pub fn sub(&self, other: &Angle) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul_int(&self, k: i64) -> Self {
        Angle { rational_part: self.rational_part.mul_int(k), theta_part: self.theta_part.mul_int(k) }
    }

    /// `angle / p`.
    pub fn div_int(&self, p: i64) -> Result<Self> {
        let p = Rational::from_integer(p);
        Angle::new(&self.rational_part / &p, &self.theta_part / &p)
    }

    pub fn to_json(&self) -> Value {
        json!({ "q": self.rational_part.to_string(), "r": self.theta_part.to_string() })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let get = |k: &str| -> Result<Rational> {
            v.get(k)
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Parse(format!("angle field {k:?} missing")))?
                .parse()
        };
        Angle::new(get("q")?, get("r")?)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = &self.rational_part;
        let r = &self.theta_part;
        if r.is_zero() {
            return write!(f, "{q}");
        }
        if !q.is_zero() {
            write!(f, "{q}")?;
            if !r.is_negative() {
                write!(f, "+")?;
            }
        }
        if *r == Rational::one() {
            write!(f, "theta")
        } else if *r == -Rational::one() {
            write!(f, "-theta")
        } else {
            write!(f, "{r}*theta")
        }
    }
}

impl fmt::Debug for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Angle({self})")
    }
}

impl FromStr for Angle {
    type Err = Error;

    /// Accepts sums of rational terms and θ-terms, e.g. `theta`, `-theta+1/8`,
    /// `1/4 + theta`, `theta/2`, `3/2*theta`, `2theta`.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty angle".into()));
        }
        let mut q = Rational::zero();
        let mut r = Rational::zero();
        let mut start = 0;
        let bytes = compact.as_bytes();
        let mut pieces = Vec::new();
        for i in 1..=bytes.len() {
            if i == bytes.len() || ((bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'*' && bytes[i - 1] != b'/') {
                pieces.push(&compact[start..i]);
                start = i;
            }
        }
        for piece in pieces {
            let (sign, body) = match piece.as_bytes()[0] {
                b'+' => (Rational::one(), &piece[1..]),
                b'-' => (-Rational::one(), &piece[1..]),
                _ => (Rational::one(), piece),
            };
            let bad = || Error::Parse(format!("cannot parse angle term {piece:?} in {s:?}"));
            if let Some(pos) = body.find("theta") {
                let before = body[..pos].trim_end_matches('*');
                let after = &body[pos + "theta".len()..];
                let mut coeff = if before.is_empty() { Rational::one() } else { before.parse().map_err(|_| bad())? };
                if let Some(div) = after.strip_prefix('/') {
                    let d: Rational = div.parse().map_err(|_| bad())?;
                    if d.is_zero() {
                        return Err(bad());
                    }
                    coeff = &coeff / &d;
                } else if !after.is_empty() {
                    return Err(bad());
                }
                r = &r + &(&sign * &coeff);
            } else {
                let v: Rational = body.parse().map_err(|_| bad())?;
                q = &q + &(&sign * &v);
            }
        }
        Angle::new(q, r)
    }
}
