//! Cyclotomic polynomials and reduction of root-of-unity combinations
//! to the power basis `1, ζ, …, ζ^{φ(N)-1}` of `Q(ζ_N)`.

use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, OnceLock, RwLock};

use super::rational::Rational;

static CONDUCTOR_LIMIT: AtomicU64 = AtomicU64::new(1_000_000);

/// Largest root-of-unity denominator accepted by scalar constructors.
pub fn conductor_limit() -> u64 {
    CONDUCTOR_LIMIT.load(Ordering::Relaxed)
}

pub fn set_conductor_limit(limit: u64) {
    CONDUCTOR_LIMIT.store(limit.max(1), Ordering::Relaxed);
}

fn cache() -> &'static RwLock<HashMap<u64, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn mobius(mut n: u64) -> i32 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Coefficients (lowest degree first) of the `n`-th cyclotomic polynomial,
/// via `Φ_n = Π_{d|n} (x^d - 1)^{μ(n/d)}`.
pub fn cyclotomic_polynomial(n: u64) -> Arc<Vec<i64>> {
    assert!(n >= 1);
    if let Some(p) = cache().read().unwrap().get(&n) {
        return p.clone();
    }
    let mut poly: Vec<i128> = vec![1];
    let divs = divisors(n);
    for &d in &divs {
        if mobius(n / d) == 1 {
            // multiply by x^d - 1
            let d = d as usize;
            let mut next = vec![0i128; poly.len() + d];
            for (i, &c) in poly.iter().enumerate() {
                next[i + d] += c;
                next[i] -= c;
            }
            poly = next;
        }
    }
    for &d in &divs {
        if mobius(n / d) == -1 {
            // exact division by x^d - 1: q_i = q_{i-d} - p_i read from the top
            let d = d as usize;
            let deg = poly.len() - 1;
            let mut quotient = vec![0i128; deg + 1 - d];
            let mut rem = poly.clone();
            for i in (d..=deg).rev() {
                let c = rem[i];
                quotient[i - d] = c;
                rem[i] -= c;
                rem[i - d] += c;
            }
            debug_assert!(rem.iter().all(|&c| c == 0));
            poly = quotient;
        }
    }
    let poly: Vec<i64> = poly
        .into_iter()
        .map(|c| i64::try_from(c).expect("cyclotomic coefficient overflow"))
        .collect();
    let poly = Arc::new(poly);
    cache().write().unwrap().insert(n, poly.clone());
    poly
}

/// Reduce `Σ c_e ζ_N^e` (exponents already in `[0, N)`) modulo `Φ_N`.
pub fn reduce(conductor: u64, mut coeffs: BTreeMap<u64, Rational>) -> BTreeMap<u64, Rational> {
    if conductor == 1 {
        return coeffs;
    }
    let phi = cyclotomic_polynomial(conductor);
    let degree = (phi.len() - 1) as u64;
    while let Some((&top, _)) = coeffs.range(degree..).next_back() {
        let c = coeffs.remove(&top).unwrap();
        let shift = top - degree;
        for (j, &pj) in phi.iter().enumerate().take(degree as usize) {
            if pj == 0 {
                continue;
            }
            let slot = coeffs.entry(shift + j as u64).or_insert_with(Rational::zero);
            *slot = &*slot - &c.mul_int(pj);
        }
        coeffs.retain(|_, c| !c.is_zero());
    }
    coeffs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(*cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(15), vec![1, -1, 0, 1, -1, 1, 0, -1, 1]);
    }

    #[test]
    fn degree_is_euler_phi() {
        for n in 1..200u64 {
            let phi = (1..=n).filter(|k| num::integer::gcd(*k, n) == 1).count();
            assert_eq!(cyclotomic_polynomial(n).len() - 1, phi, "n = {n}");
        }
    }

    #[test]
    fn reduction_kills_the_full_orbit() {
        let coeffs: BTreeMap<u64, Rational> = (0..3).map(|e| (e, Rational::one())).collect();
        assert!(reduce(3, coeffs).is_empty());
    }
}
