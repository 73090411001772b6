//! Smith normal form over the integers with unimodular certificates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg::IntMatrix;

/// `U * M * V = D` with `U`, `V` unimodular and `D` diagonal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnfDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    /// Diagonal of `D`: nonnegative, each dividing the next, zeros last.
    #[serde(with = "crate::bigint_serde::vec")]
    pub divisors: Vec<BigInt>,
}

/// Position of a nonzero entry of least absolute value in the block
/// `[t.., t..]`.
fn min_pivot(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let v = &a[(i, j)];
            if v.is_zero() {
                continue;
            }
            match best {
                Some(b) if a[b].abs() <= v.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

/// Reduces `m` by elementary row and column operations, pivoting on the
/// smallest nonzero entry of the remaining block.
pub fn smith_normal_form(m: &IntMatrix) -> SnfDecomposition {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        let Some(_) = min_pivot(&a, t) else { break };
        loop {
            let (pi, pj) = min_pivot(&a, t).expect("block is nonzero");
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in (t + 1)..rows {
                let quot = &a[(i, t)] / &a[(t, t)];
                let neg = -quot;
                a.add_row_multiple(i, t, &neg);
                u.add_row_multiple(i, t, &neg);
                clean &= a[(i, t)].is_zero();
            }
            for j in (t + 1)..cols {
                let quot = &a[(t, j)] / &a[(t, t)];
                let neg = -quot;
                a.add_col_multiple(j, t, &neg);
                v.add_col_multiple(j, t, &neg);
                clean &= a[(t, j)].is_zero();
            }
            if !clean {
                // a nonzero remainder is smaller than the pivot; repivot
                continue;
            }
            // pivot must divide the whole remaining block
            let pivot = a[(t, t)].clone();
            let offender = ((t + 1)..rows).find(|&i| ((t + 1)..cols).any(|j| !a[(i, j)].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let one = BigInt::from(1);
                    a.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
    }

    let divisors = (0..rows.min(cols)).map(|i| a[(i, i)].clone()).collect();
    SnfDecomposition { u, d: a, v, divisors }
}

impl SnfDecomposition {
    /// Checks every certificate property against the source matrix.
    pub fn verify(&self, source: &IntMatrix) -> Result<(), String> {
        if &(&self.u * source) * &self.v != self.d {
            return Err("U * M * V != D".into());
        }
        for (name, w) in [("U", &self.u), ("V", &self.v)] {
            let det = crate::linalg::determinant(w).map_err(|e| e.to_string())?;
            if det.abs() != BigInt::from(1) {
                return Err(format!("|det {name}| = {} is not 1", det.abs()));
            }
        }
        if !self.d.is_diagonal() {
            return Err("D is not diagonal".into());
        }
        if self.divisors.iter().any(Signed::is_negative) {
            return Err("negative divisor".into());
        }
        for w in self.divisors.windows(2) {
            let chained = if w[0].is_zero() { w[1].is_zero() } else { w[1].is_multiple_of(&w[0]) };
            if !chained {
                return Err(format!("divisibility chain broken at {} | {}", w[0], w[1]));
            }
        }
        Ok(())
    }
}
