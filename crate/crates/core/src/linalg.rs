//! Dense matrices over the integers with arbitrary-precision entries.
//!
//! Nothing here ever leaves exact arithmetic: determinants use fraction-free
//! Bareiss elimination and Pfaffians use skew-symmetric elimination over
//! the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::cartan::CartanMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not lower-triangular with unit diagonal")]
    NotUnipotent,
    #[error("matrix is not skew-symmetric")]
    NotSkewSymmetric,
    #[error("Pfaffian needs an even-sized matrix, got size {0}")]
    OddSize(usize),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        IntMatrix { rows, cols, data }
    }

    /// Panics on ragged or empty input.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_fn(rows.len(), cols, |i, j| rows[i][j].clone().into())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn is_lower_unitriangular(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                self[(i, i)].is_one() && ((i + 1)..self.cols).all(|j| self[(i, j)].is_zero())
            })
    }

    pub fn is_skew_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..=i).all(|j| self[(i, j)] == -&self[(j, i)]))
    }

    pub fn scale(&self, factor: &BigInt) -> Self {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * factor).collect() }
    }

    /// Entrywise reduction into `0..q`.
    pub fn reduce_mod(&self, q: &BigInt) -> Self {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| ((x % q) + q) % q).collect(),
        }
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[target] += factor * row[source]
    pub(crate) fn add_row_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let delta = &self.data[source * self.cols + j] * factor;
            self.data[target * self.cols + j] += delta;
        }
    }

    /// col[target] += factor * col[source]
    pub(crate) fn add_col_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let delta = &self.data[i * self.cols + source] * factor;
            self.data[i * self.cols + target] += delta;
        }
    }

    pub(crate) fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = std::mem::take(&mut self.data[i * self.cols + j]);
            self.data[i * self.cols + j] = -v;
        }
    }

    fn require_square(&self) -> Result<(), LinalgError> {
        if self.is_square() {
            Ok(())
        } else {
            Err(LinalgError::NotSquare { rows: self.rows, cols: self.cols })
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * &rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &IntMatrix {
    type Output = IntMatrix;

    fn add(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "dimension mismatch in sum");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        IntMatrix { rows: self.rows, cols: self.cols, data }
    }
}

impl Sub for &IntMatrix {
    type Output = IntMatrix;

    fn sub(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "dimension mismatch in difference");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        IntMatrix { rows: self.rows, cols: self.cols, data }
    }
}

impl Neg for &IntMatrix {
    type Output = IntMatrix;

    fn neg(self) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

impl fmt::Display for IntMatrix {
    /// Right-aligned columns, one bracketed row per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(ToString::to_string).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| format!("{:>width$}", cells[i * self.cols + j]))
                .collect();
            writeln!(f, "[ {} ]", row.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<String>>,
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        MatrixRepr {
            rows: self.rows,
            cols: self.cols,
            entries: self.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(deserializer)?;
        if repr.rows == 0 || repr.cols == 0 {
            return Err(D::Error::custom("matrix dimensions must be positive"));
        }
        if repr.entries.len() != repr.rows || repr.entries.iter().any(|r| r.len() != repr.cols) {
            return Err(D::Error::custom("matrix entries do not match the stated dimensions"));
        }
        let mut data = Vec::with_capacity(repr.rows * repr.cols);
        for s in repr.entries.iter().flatten() {
            data.push(s.parse::<BigInt>().map_err(D::Error::custom)?);
        }
        Ok(IntMatrix { rows: repr.rows, cols: repr.cols, data })
    }
}

/// Exact inverse of a lower-triangular matrix with unit diagonal, by
/// forward substitution. The inverse is again integral and unipotent.
pub fn unipotent_inverse(m: &IntMatrix) -> Result<IntMatrix, LinalgError> {
    if !m.is_lower_unitriangular() {
        return Err(LinalgError::NotUnipotent);
    }
    let size = m.rows();
    let mut inv = IntMatrix::identity(size);
    // column j of the inverse solves m x = e_j
    for j in 0..size {
        for i in (j + 1)..size {
            let mut acc = BigInt::zero();
            for k in j..i {
                acc += &m[(i, k)] * &inv[(k, j)];
            }
            inv[(i, j)] = -acc;
        }
    }
    Ok(inv)
}

/// The matrix `(-1)^(d-1) C (C^-1)^T - Id`.
pub fn theorem_matrix(cartan: &CartanMatrix, d: usize) -> IntMatrix {
    let c = cartan.matrix();
    let inv = unipotent_inverse(c).expect("Cartan matrices are unipotent");
    let product = c * &inv.transpose();
    let signed = if (d - 1) % 2 == 0 { product } else { -&product };
    &signed - &IntMatrix::identity(c.rows())
}

/// Determinant by Bareiss fraction-free elimination.
pub fn determinant(m: &IntMatrix) -> Result<BigInt, LinalgError> {
    m.require_square()?;
    let size = m.rows();
    let mut a = m.clone();
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..size {
        if a[(k, k)].is_zero() {
            match ((k + 1)..size).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => {
                    a.swap_rows(k, i);
                    sign = !sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in (k + 1)..size {
            for j in (k + 1)..size {
                let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                a[(i, j)] = v;
            }
            a[(i, k)] = BigInt::zero();
        }
        prev = a[(k, k)].clone();
    }
    let det = a[(size - 1, size - 1)].clone();
    Ok(if sign { -det } else { det })
}

/// Pfaffian of an even-sized skew-symmetric matrix, normalized so that
/// `Pf([[0, a], [-a, 0]]) = a`.
pub fn pfaffian(m: &IntMatrix) -> Result<BigInt, LinalgError> {
    m.require_square()?;
    if !m.is_skew_symmetric() {
        return Err(LinalgError::NotSkewSymmetric);
    }
    let size = m.rows();
    if size % 2 == 1 {
        return Err(LinalgError::OddSize(size));
    }
    let mut a: Vec<Vec<BigRational>> = m
        .to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(BigRational::from_integer).collect())
        .collect();
    let mut pf = BigRational::one();
    // eliminate two rows/columns at a time, keeping the matrix skew
    for k in (0..size).step_by(2) {
        let Some(p) = ((k + 1)..size).find(|&j| !a[k][j].is_zero()) else {
            return Ok(BigInt::zero());
        };
        if p != k + 1 {
            // simultaneous row/column swap flips the Pfaffian sign
            a.swap(k + 1, p);
            for row in a.iter_mut() {
                row.swap(k + 1, p);
            }
            pf = -pf;
        }
        let pivot = a[k][k + 1].clone();
        pf *= &pivot;
        for i in (k + 2)..size {
            // clear row k and row k+1 entries using congruence transforms
            let f1 = &a[k][i] / &pivot;
            let f2 = &a[k + 1][i] / &pivot;
            if !f1.is_zero() {
                // col_i -= f1 * col_{k+1}; row_i -= f1 * row_{k+1}
                for r in 0..size {
                    let v = &a[r][k + 1] * &f1;
                    a[r][i] -= v;
                }
                for c in 0..size {
                    let v = &a[k + 1][c] * &f1;
                    a[i][c] -= v;
                }
            }
            if !f2.is_zero() {
                // col_i += f2 * col_k; row_i += f2 * row_k
                for r in 0..size {
                    let v = &a[r][k] * &f2;
                    a[r][i] += v;
                }
                for c in 0..size {
                    let v = &a[k][c] * &f2;
                    a[i][c] += v;
                }
            }
        }
    }
    debug_assert!(pf.is_integer());
    Ok(pf.to_integer())
}

/// Whether `value` is the square of an integer.
pub fn is_perfect_square(value: &BigInt) -> bool {
    if value.is_negative() {
        return false;
    }
    let root = value.sqrt();
    &root * &root == *value
}
