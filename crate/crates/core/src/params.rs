//! Input parameters: the cyclic group data `(n, d, a_1..a_d)` and the
//! coefficient prime power `l^nu`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamsError {
    #[error("dimension too small: need d >= 2 and exactly d weights (got d = {d}, {weights} weights)")]
    DimensionTooSmall { d: i64, weights: usize },
    #[error("weight a_{index} = {value} is out of range: need 0 < a_j < n = {n}")]
    WeightOutOfRange { index: usize, value: i64, n: i64 },
    #[error("weight a_{index} = {value} is not coprime to n = {n}: gcd(a_j, n) = {gcd}")]
    WeightNotCoprime { index: usize, value: i64, n: i64, gcd: i64 },
    #[error("weights sum to {sum}, but a_1 + ... + a_d must equal n = {n}")]
    WeightSumMismatch { sum: i64, n: i64 },
    #[error("{0} is not prime")]
    NotPrime(i128),
    #[error("prime {0} is outside the supported range (must be below 2^64)")]
    PrimeOutOfRange(String),
    #[error("exponent nu = {0} must be positive")]
    NonPositiveExponent(i64),
}

/// Validated data of a cyclic quotient singularity.
///
/// Weights keep their input order: equal weights still label distinct
/// parallel arrows of the quiver.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct QuotientParams {
    n: usize,
    d: usize,
    weights: Vec<usize>,
}

#[derive(Deserialize)]
struct RawParams {
    n: i64,
    d: i64,
    weights: Vec<i64>,
}

impl TryFrom<RawParams> for QuotientParams {
    type Error = ParamsError;

    fn try_from(raw: RawParams) -> Result<Self, Self::Error> {
        validate_params(raw.n, raw.d, &raw.weights)
    }
}

impl QuotientParams {
    /// Order of the cyclic group.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Krull dimension, equal to the number of weights.
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn weights(&self) -> &[usize] {
        &self.weights
    }

    /// Number of vertices left after truncation, `n - 1`.
    pub fn vertex_count(&self) -> usize {
        self.n - 1
    }

    /// `n = d` with every weight equal to 1.
    pub fn is_unit_family(&self) -> bool {
        self.n == self.d && self.weights.iter().all(|&a| a == 1)
    }
}

impl fmt::Display for QuotientParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let weights: Vec<String> = self.weights.iter().map(|a| a.to_string()).collect();
        write!(f, "n={} d={} weights=[{}]", self.n, self.d, weights.join(","))
    }
}

/// Checks the conditions on `(n, d, a)`, reporting the first one violated.
pub fn validate_params(n: i64, d: i64, weights: &[i64]) -> Result<QuotientParams, ParamsError> {
    if d < 2 || weights.len() as i64 != d {
        return Err(ParamsError::DimensionTooSmall { d, weights: weights.len() });
    }
    for (idx, &a) in weights.iter().enumerate() {
        if a <= 0 || a >= n {
            return Err(ParamsError::WeightOutOfRange { index: idx + 1, value: a, n });
        }
        let g = a.gcd(&n);
        if g != 1 {
            return Err(ParamsError::WeightNotCoprime { index: idx + 1, value: a, n, gcd: g });
        }
    }
    let sum: i64 = weights.iter().sum();
    if sum != n {
        return Err(ParamsError::WeightSumMismatch { sum, n });
    }
    Ok(QuotientParams {
        n: n as usize,
        d: d as usize,
        weights: weights.iter().map(|&a| a as usize).collect(),
    })
}

/// Every valid ordered weight tuple for the given `n` and `d`, in
/// lexicographic order.
pub fn all_weight_tuples(n: usize, d: usize) -> Vec<QuotientParams> {
    let allowed: Vec<usize> = (1..n).filter(|a| a.gcd(&n) == 1).collect();
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(d);
    fn extend(
        allowed: &[usize],
        remaining: usize,
        slots: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if slots == 0 {
            if remaining == 0 {
                out.push(current.clone());
            }
            return;
        }
        for &a in allowed {
            // each later slot needs at least 1
            if a + (slots - 1) > remaining {
                break;
            }
            current.push(a);
            extend(allowed, remaining - a, slots - 1, current, out);
            current.pop();
        }
    }
    if d >= 2 && n >= 2 {
        extend(&allowed, n, d, &mut current, &mut out);
    }
    out.into_iter().map(|weights| QuotientParams { n, d, weights }).collect()
}

/// Valid tuples with nondecreasing weights; one representative per multiset.
pub fn sorted_weight_tuples(n: usize, d: usize) -> Vec<QuotientParams> {
    all_weight_tuples(n, d)
        .into_iter()
        .filter(|p| p.weights.windows(2).all(|w| w[0] <= w[1]))
        .collect()
}

/// A prime power `q = l^nu`, the order of the coefficient ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawPrimePower")]
pub struct PrimePower {
    l: u64,
    nu: u32,
    #[serde(with = "crate::bigint_serde")]
    q: BigInt,
}

#[derive(Deserialize)]
struct RawPrimePower {
    l: u64,
    nu: u32,
    #[serde(with = "crate::bigint_serde")]
    q: BigInt,
}

impl TryFrom<RawPrimePower> for PrimePower {
    type Error = String;

    fn try_from(raw: RawPrimePower) -> Result<Self, Self::Error> {
        let pp = validate_prime_power(raw.l as i128, raw.nu as i64).map_err(|e| e.to_string())?;
        if pp.q != raw.q {
            return Err(format!("q = {} does not equal {}^{}", raw.q, raw.l, raw.nu));
        }
        Ok(pp)
    }
}

impl PrimePower {
    pub fn l(&self) -> u64 {
        self.l
    }

    pub fn nu(&self) -> u32 {
        self.nu
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.nu == 1 {
            write!(f, "Z/{}", self.l)
        } else {
            write!(f, "Z/{}^{} = Z/{}", self.l, self.nu, self.q)
        }
    }
}

/// Validates `l` prime and `nu >= 1`, and computes `q = l^nu` exactly.
pub fn validate_prime_power(l: i128, nu: i64) -> Result<PrimePower, ParamsError> {
    if l < 0 || l > u64::MAX as i128 {
        if l < 0 {
            return Err(ParamsError::NotPrime(l));
        }
        return Err(ParamsError::PrimeOutOfRange(l.to_string()));
    }
    if !is_prime(l as u64) {
        return Err(ParamsError::NotPrime(l));
    }
    if nu < 1 {
        return Err(ParamsError::NonPositiveExponent(nu));
    }
    let nu = u32::try_from(nu).map_err(|_| ParamsError::NonPositiveExponent(nu))?;
    let q = Pow::pow(BigInt::from(l as u64), nu);
    debug_assert!(q > BigInt::one());
    Ok(PrimePower { l: l as u64, nu, q })
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_valid(n: i64, d: i64, w: &[i64]) -> bool {
        fn gcd(a: i64, b: i64) -> i64 {
            if b == 0 { a.abs() } else { gcd(b, a % b) }
        }
        d >= 2
            && w.len() as i64 == d
            && w.iter().all(|&a| 0 < a && a < n && gcd(a, n) == 1)
            && w.iter().sum::<i64>() == n
    }

    #[test]
    fn paper_low_dim_parameters() {
        let p = validate_params(5, 3, &[1, 2, 2]).unwrap();
        assert_eq!(p.weights(), &[1, 2, 2]);
        assert_eq!(p.vertex_count(), 4);
    }

    #[test]
    fn smallest_case() {
        let p = validate_params(2, 2, &[1, 1]).unwrap();
        assert_eq!(p.vertex_count(), 1);
    }

    #[test]
    fn error_kinds() {
        assert!(matches!(
            validate_params(4, 3, &[1, 1, 2]),
            Err(ParamsError::WeightNotCoprime { index: 3, value: 2, .. })
        ));
        assert!(matches!(validate_params(3, 1, &[3]), Err(ParamsError::DimensionTooSmall { .. })));
        assert!(matches!(validate_params(5, 3, &[1, 2]), Err(ParamsError::DimensionTooSmall { .. })));
        assert!(matches!(validate_params(5, 2, &[0, 5]), Err(ParamsError::WeightOutOfRange { index: 1, .. })));
        assert!(matches!(validate_params(5, 2, &[1, 1]), Err(ParamsError::WeightSumMismatch { sum: 2, n: 5 })));
    }

    #[test]
    fn weights_are_not_reordered() {
        let p = validate_params(5, 3, &[2, 1, 2]).unwrap();
        assert_eq!(p.weights(), &[2, 1, 2]);
    }

    #[test]
    fn exhaustive_agreement_with_brute_predicate() {
        for n in -1..=12i64 {
            for d in 0..=5i64 {
                let len = d.max(0) as u32;
                // weights drawn from -1..=n+1, plus a few wrong-length lists
                let base = (n + 3).max(1) as usize;
                let total = base.pow(len);
                for code in 0..total {
                    let mut c = code;
                    let w: Vec<i64> = (0..len)
                        .map(|_| {
                            let v = (c % base) as i64 - 1;
                            c /= base;
                            v
                        })
                        .collect();
                    assert_eq!(validate_params(n, d, &w).is_ok(), brute_valid(n, d, &w), "{n} {d} {w:?}");
                }
                assert!(validate_params(n, d, &vec![1; len as usize + 1]).is_err());
            }
        }
    }

    #[test]
    fn valid_weights_fit_below_n() {
        for n in 2..=12i64 {
            for a in 1..n {
                if let Ok(p) = validate_params(n, 2, &[a, n - a]) {
                    assert!(p.weights().iter().all(|&w| w <= p.n() - 1));
                }
            }
        }
    }

    #[test]
    fn tuple_enumeration_matches_validation() {
        for n in 2..=10usize {
            for d in 2..=n.min(5) {
                let listed = all_weight_tuples(n, d);
                let mut brute = 0;
                let total = (n as u64).pow(d as u32);
                for code in 0..total {
                    let mut c = code;
                    let w: Vec<i64> = (0..d)
                        .map(|_| {
                            let v = (c % n as u64) as i64;
                            c /= n as u64;
                            v
                        })
                        .collect();
                    if validate_params(n as i64, d as i64, &w).is_ok() {
                        brute += 1;
                    }
                }
                assert_eq!(listed.len(), brute, "n={n} d={d}");
                assert!(listed.windows(2).all(|w| w[0] < w[1]));
            }
        }
        assert_eq!(sorted_weight_tuples(5, 3).len(), 2);
    }

    #[test]
    fn prime_powers() {
        assert_eq!(validate_prime_power(2, 1).unwrap().q(), &BigInt::from(2));
        assert_eq!(validate_prime_power(13, 1).unwrap().q(), &BigInt::from(13));
        assert_eq!(validate_prime_power(3, 4).unwrap().q(), &BigInt::from(81));
        assert_eq!(validate_prime_power(4, 1), Err(ParamsError::NotPrime(4)));
        assert_eq!(validate_prime_power(1, 1), Err(ParamsError::NotPrime(1)));
        assert_eq!(validate_prime_power(2, 0), Err(ParamsError::NonPositiveExponent(0)));
        assert!(matches!(
            validate_prime_power(1i128 << 64, 1),
            Err(ParamsError::PrimeOutOfRange(_))
        ));
        let big = validate_prime_power(2, 100).unwrap();
        assert_eq!(big.q().bits(), 101);
    }

    #[test]
    fn primality_matches_trial_division() {
        let trial = |n: u64| n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| n % k != 0);
        for n in 0..5000 {
            assert_eq!(is_prime(n), trial(n), "{n}");
        }
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(18_446_744_073_709_551_556));
        // strong pseudoprime to several small bases
        assert!(!is_prime(3_215_031_751));
    }

    #[test]
    fn serde_validates() {
        let p: QuotientParams = serde_json::from_str(r#"{"n":5,"d":3,"weights":[1,2,2]}"#).unwrap();
        assert_eq!(p, validate_params(5, 3, &[1, 2, 2]).unwrap());
        assert!(serde_json::from_str::<QuotientParams>(r#"{"n":4,"d":3,"weights":[1,1,2]}"#).is_err());
        let q = validate_prime_power(13, 2).unwrap();
        let s = serde_json::to_string(&q).unwrap();
        assert_eq!(s, r#"{"l":13,"nu":2,"q":"169"}"#);
        assert_eq!(serde_json::from_str::<PrimePower>(&s).unwrap(), q);
    }
}
