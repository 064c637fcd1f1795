//! Exact scalars: rational combinations of `e(r) · t^s`, where `e(r) = e^{2πir}`
//! is a root of unity and `t` is a formal unit standing for `e^{2πiθ}`.
//!
//! For each θ-exponent the root-of-unity part is kept in the power basis of
//! `Q(ζ_N)` with `N` the lcm of its root denominators. Equality is decided by
//! reducing the difference over the joint conductor, so it is exact.

mod cyclotomic;
mod rational;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::complex::Complex64;
use num::ToPrimitive;
use serde_json::{json, Value};

pub use cyclotomic::{conductor_limit, cyclotomic_polynomial, set_conductor_limit};
pub use rational::Rational;

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
struct Term {
    theta: Rational,
    root: Rational,
    coeff: Rational,
}

/// Element of `Q(ζ_∞)[t^{±1/∞}]` restricted to finitely many terms.
#[derive(Clone, Default)]
pub struct Scalar {
    // sorted by (theta, root), no zero coefficients, roots in [0, 1)
    terms: Vec<Term>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::rational(Rational::one())
    }

    pub fn from_integer(n: i64) -> Self {
        Self::rational(Rational::from_integer(n))
    }

    pub fn rational(r: Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Scalar {
            terms: vec![Term { theta: Rational::zero(), root: Rational::zero(), coeff: r }],
        }
    }

    /// `e(root) = e^{2πi·root}`.
    pub fn root_of_unity(root: Rational) -> Result<Self> {
        Self::monomial(Rational::one(), root, Rational::zero())
    }

    /// `t^exponent`.
    pub fn t_power(exponent: Rational) -> Self {
        Scalar {
            terms: vec![Term { theta: exponent, root: Rational::zero(), coeff: Rational::one() }],
        }
    }

    /// `coeff · e(root) · t^theta`.
    pub fn monomial(coeff: Rational, root: Rational, theta: Rational) -> Result<Self> {
        check_denominator(&root)?;
        Ok(Self::from_raw(vec![Term { theta, root, coeff }]))
    }

    fn from_raw(terms: Vec<Term>) -> Self {
        let mut s = Scalar { terms };
        s.normalize_in_place();
        s
    }

    /// Canonical form; idempotent.
    pub fn normalize(&self) -> Self {
        Self::from_raw(self.terms.clone())
    }

    fn normalize_in_place(&mut self) {
        let mut merged: BTreeMap<(Rational, Rational), Rational> = BTreeMap::new();
        for Term { theta, root, coeff } in self.terms.drain(..) {
            if coeff.is_zero() {
                continue;
            }
            let root = if root.is_negative() || root >= Rational::one() { root.fract_unit() } else { root };
            let slot = merged.entry((theta, root)).or_insert_with(Rational::zero);
            *slot += &coeff;
        }
        merged.retain(|_, c| !c.is_zero());

        let mut out = Vec::with_capacity(merged.len());
        let mut iter = merged.into_iter().peekable();
        while let Some(((theta, root), coeff)) = iter.next() {
            let mut group = vec![(root, coeff)];
            while let Some(((next_theta, _), _)) = iter.peek() {
                if *next_theta != theta {
                    break;
                }
                let ((_, r), c) = iter.next().unwrap();
                group.push((r, c));
            }
            reduce_group(&theta, group, &mut out);
        }
        self.terms = out;
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms[0].theta.is_zero()
            && self.terms[0].root.is_zero()
            && self.terms[0].coeff == Rational::one()
    }

    /// The rational value, if this scalar is a rational constant.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [t] if t.theta.is_zero() && t.root.is_zero() => Some(t.coeff.clone()),
            _ => None,
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Scalar {
            terms: self
                .terms
                .iter()
                .map(|t| Term { theta: t.theta.clone(), root: t.root.clone(), coeff: &t.coeff * r })
                .collect(),
        }
    }

    /// Complex conjugation: `e(r) ↦ e(-r)`, `t ↦ t^{-1}`.
    pub fn star(&self) -> Self {
        Self::from_raw(
            self.terms
                .iter()
                .map(|t| Term {
                    theta: -&t.theta,
                    root: (Rational::one() - t.root.clone()).fract_unit(),
                    coeff: t.coeff.clone(),
                })
                .collect(),
        )
    }

    /// Largest root denominator present.
    pub fn conductor(&self) -> u64 {
        self.terms.iter().fold(1u64, |acc, t| {
            num::integer::lcm(acc, t.root.denom_u64().unwrap_or(u64::MAX))
        })
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Rational, &Rational, &Rational)> {
        self.terms.iter().map(|t| (&t.coeff, &t.root, &t.theta))
    }

    /// Numerical value with `t = e^{2πiθ₀}`.
    pub fn evaluate(&self, theta0: f64) -> Complex64 {
        let tau = std::f64::consts::TAU;
        self.terms
            .iter()
            .map(|t| {
                let phase = tau * (t.root.to_f64() + t.theta.to_f64() * theta0);
                Complex64::from_polar(t.coeff.to_f64(), phase)
            })
            .sum()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|t| {
                    json!({
                        "coeff": t.coeff.to_string(),
                        "root": t.root.to_string(),
                        "theta": t.theta.to_string(),
                    })
                })
                .collect(),
        )
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let items = v.as_array().ok_or_else(|| Error::Parse("scalar must be an array".into()))?;
        let mut terms = Vec::with_capacity(items.len());
        for item in items {
            let field = |name: &str| -> Result<Rational> {
                match item.get(name) {
                    None => Ok(Rational::zero()),
                    Some(Value::String(s)) => s.parse(),
                    Some(Value::Number(n)) => n
                        .as_i64()
                        .map(Rational::from_integer)
                        .ok_or_else(|| Error::Parse(format!("bad number in scalar field {name}"))),
                    Some(_) => Err(Error::Parse(format!("bad scalar field {name}"))),
                }
            };
            let coeff = match item.get("coeff") {
                None => return Err(Error::Parse("scalar term without coeff".into())),
                Some(_) => field("coeff")?,
            };
            let root = field("root")?;
            check_denominator(&root)?;
            terms.push(Term { theta: field("theta")?, root, coeff });
        }
        Ok(Self::from_raw(terms))
    }
}

fn check_denominator(root: &Rational) -> Result<()> {
    let limit = conductor_limit();
    match root.denom_u64() {
        Some(d) if d <= limit => Ok(()),
        d => Err(Error::ConductorTooLarge { denominator: d.unwrap_or(u64::MAX), limit }),
    }
}

fn reduce_group(theta: &Rational, group: Vec<(Rational, Rational)>, out: &mut Vec<Term>) {
    let conductor = group.iter().fold(1u64, |acc, (r, _)| {
        num::integer::lcm(acc, r.denom_u64().expect("root denominator overflow"))
    });
    if conductor == 1 {
        out.extend(group.into_iter().map(|(root, coeff)| Term { theta: theta.clone(), root, coeff }));
        return;
    }
    let mut poly = BTreeMap::new();
    for (root, coeff) in group {
        let e = (root.numer() * (conductor / root.denom_u64().unwrap()))
            .to_u64()
            .expect("root exponent out of range");
        poly.insert(e, coeff);
    }
    for (e, coeff) in cyclotomic::reduce(conductor, poly) {
        out.push(Term {
            theta: theta.clone(),
            root: Rational::new(e as i64, conductor as i64),
            coeff,
        });
    }
}

fn merge(a: &[Term], b: &[Term], negate_b: bool) -> Vec<Term> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let order = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) => (&x.theta, &x.root).cmp(&(&y.theta, &y.root)),
            (Some(_), None) => std::cmp::Ordering::Less,
            _ => std::cmp::Ordering::Greater,
        };
        match order {
            std::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                let mut t = b[j].clone();
                if negate_b {
                    t.coeff = -t.coeff;
                }
                out.push(t);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let coeff = if negate_b { &a[i].coeff - &b[j].coeff } else { &a[i].coeff + &b[j].coeff };
                out.push(Term { theta: a[i].theta.clone(), root: a[i].root.clone(), coeff });
                i += 1;
                j += 1;
            }
        }
    }
    out
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        Scalar::from_raw(merge(&self.terms, &rhs.terms, false))
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        if rhs.is_zero() {
            return self.clone();
        }
        Scalar::from_raw(merge(&self.terms, &rhs.terms, true))
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            terms: self
                .terms
                .iter()
                .map(|t| Term { theta: t.theta.clone(), root: t.root.clone(), coeff: -&t.coeff })
                .collect(),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() || rhs.is_zero() {
            return Scalar::zero();
        }
        if self.is_one() {
            return rhs.clone();
        }
        if rhs.is_one() {
            return self.clone();
        }
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for x in &self.terms {
            for y in &rhs.terms {
                terms.push(Term {
                    theta: &x.theta + &y.theta,
                    root: &x.root + &y.root,
                    coeff: &x.coeff * &y.coeff,
                });
            }
        }
        Scalar::from_raw(terms)
    }
}

macro_rules! owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                $trait::$method(&self, &rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        let structural = self.terms.len() == other.terms.len()
            && self.terms.iter().zip(&other.terms).all(|(x, y)| {
                x.theta == y.theta && x.root == y.root && x.coeff == y.coeff
            });
        structural || (self - other).is_zero()
    }
}

impl Eq for Scalar {}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_integer(n)
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::rational(r)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, t) in self.terms.iter().enumerate() {
            let mut factors = Vec::new();
            if !t.root.is_zero() {
                factors.push(format!("e({})", t.root));
            }
            if !t.theta.is_zero() {
                if t.theta == Rational::one() {
                    factors.push("t".to_string());
                } else {
                    factors.push(format!("t^({})", t.theta));
                }
            }
            let coeff = t.coeff.abs();
            let sign = if t.coeff.is_negative() { "-" } else { "+" };
            if idx == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if factors.is_empty() {
                write!(f, "{coeff}")?;
            } else if coeff == Rational::one() {
                write!(f, "{}", factors.join("·"))?;
            } else {
                write!(f, "{coeff}·{}", factors.join("·"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(p: i64, q: i64) -> Scalar {
        Scalar::root_of_unity(Rational::new(p, q)).unwrap()
    }

    fn t(p: i64) -> Scalar {
        Scalar::t_power(Rational::from_integer(p))
    }

    #[test]
    fn add_examples() {
        let s = &(&e(1, 3) + &e(2, 3)) + &Scalar::one();
        assert!(s.is_zero());
        assert_eq!(&t(1) + &Scalar::zero(), t(1));
        let half = Scalar::rational(Rational::new(1, 2));
        let x = &half * &t(2);
        assert_eq!(&x + &x, t(2));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(&e(1, 4) * &e(1, 4), e(1, 2));
        assert_eq!(&t(1) * &t(-1), Scalar::one());
        assert_eq!(&e(1, 2) * &e(1, 2), Scalar::one());
        assert_eq!(e(1, 2), Scalar::from_integer(-1));
    }

    #[test]
    fn star_examples() {
        assert_eq!(t(1).star(), t(-1));
        assert_eq!(e(1, 3).star(), e(2, 3));
        let r = Scalar::rational(Rational::new(3, 5));
        assert_eq!(r.star(), r);
    }

    #[test]
    fn eq_examples() {
        assert_eq!(&e(1, 3) + &e(2, 3), Scalar::from_integer(-1));
        assert_ne!(t(1), e(1, 2));
        assert_eq!(Scalar::from_raw(Vec::new()), Scalar::zero());
    }

    #[test]
    fn equality_over_joint_conductor() {
        // ζ₆ and 1 + ζ₃ are the same number with different stored forms
        let lhs = e(1, 6);
        let rhs = &Scalar::one() + &e(1, 3);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn large_denominators_are_rejected() {
        let r = Rational::new(1, 2_000_003);
        assert!(matches!(Scalar::root_of_unity(r), Err(Error::ConductorTooLarge { .. })));
    }

    #[test]
    fn json_round_trip_and_ordering() {
        let s = &(&t(1) + &e(1, 4)) + &Scalar::rational(Rational::new(-2, 3));
        let v = s.to_json();
        assert_eq!(
            v.to_string(),
            r#"[{"coeff":"-2/3","root":"0","theta":"0"},{"coeff":"1","root":"1/4","theta":"0"},{"coeff":"1","root":"0","theta":"1"}]"#
        );
        assert_eq!(Scalar::from_json(&v).unwrap(), s);
    }

    #[test]
    fn display() {
        let s = &(&t(-1) - &e(1, 4)) + &Scalar::from_integer(2);
        assert_eq!(s.to_string(), "t^(-1) + 2 - e(1/4)");
    }
}
