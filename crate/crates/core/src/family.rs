//! Closed-form matrices for the family `n = d`, all weights 1.

use num_bigint::BigInt;
use num_traits::One;

use crate::ktheory::KTheoryError;
use crate::linalg::IntMatrix;

/// Number of multisets of size `r` drawn from `d` symbols,
/// `binomial(d + r - 1, r)`.
pub fn multiset_number(d: usize, r: usize) -> BigInt {
    assert!(d >= 1, "need at least one symbol");
    // running product stays integral: prefix k equals binomial(d - 1 + k, k)
    let mut acc = BigInt::one();
    for k in 1..=r {
        acc = acc * BigInt::from(d - 1 + k) / BigInt::from(k);
    }
    acc
}

/// The odd-`d` template evaluated at an arbitrary `d`, 1-based indices.
fn odd_template(d: usize, i: usize, j: usize) -> BigInt {
    let m = |r: usize| multiset_number(d, r);
    if i < j {
        -(0..i).map(|r| m(r) * m(j - i + r)).sum::<BigInt>()
    } else if i == j {
        -(1..i).map(|r| m(r) * m(r)).sum::<BigInt>()
    } else {
        m(i - j) - (1..j).map(|r| m(i - j + r) * m(r)).sum::<BigInt>()
    }
}

/// The even-`d` template: the odd template negated, then shifted by `-2`
/// on the diagonal.
fn even_template(d: usize, i: usize, j: usize) -> BigInt {
    let m = |r: usize| multiset_number(d, r);
    if i < j {
        (0..i).map(|r| m(r) * m(j - i + r)).sum::<BigInt>()
    } else if i == j {
        BigInt::from(-2) + (1..i).map(|r| m(r) * m(r)).sum::<BigInt>()
    } else {
        (1..j).map(|r| m(i - j + r) * m(r)).sum::<BigInt>() - m(i - j)
    }
}

/// The printed closed form of the `(d-1) x (d-1)` matrix for `n = d`.
pub fn family_matrix_closed_form(d: usize) -> Result<IntMatrix, KTheoryError> {
    if d < 3 {
        return Err(KTheoryError::DimensionTooSmall(d));
    }
    let template = if d % 2 == 1 { odd_template } else { even_template };
    Ok(IntMatrix::from_fn(d - 1, d - 1, |i, j| template(d, i + 1, j + 1)))
}
