//! Exact integer and rational linear algebra.
//!
//! Everything here is arbitrary precision. Matrices are small (rank 14 at
//! most for the built-in instances) so dense row-major storage is fine.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type BigRat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("row {row} has {found} entries, expected {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("matrix is not symmetric: entry ({row}, {col}) differs from its transpose")]
    NotSymmetric { row: usize, col: usize },
    #[error("matrix is singular")]
    Singular,
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntMatrix = Matrix<BigInt>;
pub type RatMatrix = Matrix<BigRat>;

impl<T> Matrix<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, LinalgError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != ncols {
                return Err(LinalgError::Ragged {
                    row: i,
                    expected: ncols,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Self {
            rows: nrows,
            cols: ncols,
            data,
        })
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

    pub fn get(&self, row: usize, col: usize) -> &T {
        &self.data[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[T] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[T]> {
        self.data.chunks(self.cols.max(1)).take(self.rows)
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    fn require_square(&self) -> Result<usize, LinalgError> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }
}

impl<T: Clone> Matrix<T> {
    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).clone());
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }
}

impl<T: Clone + PartialEq> Matrix<T> {
    /// First off-diagonal position `(i, j)` with `m[i][j] != m[j][i]`, if any.
    pub fn asymmetry(&self) -> Option<(usize, usize)> {
        if !self.is_square() {
            return None;
        }
        (0..self.rows)
            .flat_map(|i| (i + 1..self.cols).map(move |j| (i, j)))
            .find(|&(i, j)| self.get(i, j) != self.get(j, i))
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && self.asymmetry().is_none()
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero + One,
{
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero,
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok(self
            .iter_rows()
            .map(|row| row.iter().zip(v).fold(T::zero(), |acc, (a, b)| acc + a * b))
            .collect())
    }

    pub fn mul_mat(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = T::zero();
                for k in 0..self.cols {
                    acc = acc + self.get(r, k) * other.get(k, c);
                }
                data.push(acc);
            }
        }
        Ok(Self {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }
}

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self, LinalgError> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().copied().map(BigInt::from).collect())
                .collect(),
        )
    }

    pub fn to_rational(&self) -> RatMatrix {
        self.map(|x| BigRat::from_integer(x.clone()))
    }
}

/// Exact determinant by Bareiss fraction-free elimination.
///
/// Every intermediate entry is a minor of the input, so the division at
/// each step is exact.
pub fn determinant(m: &IntMatrix) -> Result<BigInt, LinalgError> {
    let n = m.require_square()?;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a: Vec<Vec<BigInt>> = m.iter_rows().map(<[BigInt]>::to_vec).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    Ok(sign * &a[n - 1][n - 1])
}

/// Gauss-Jordan elimination over the rationals on `[m | rhs]`, leaving the
/// solution columns in `rhs`.
fn eliminate(m: &IntMatrix, rhs: &mut [Vec<BigRat>]) -> Result<(), LinalgError> {
    let n = m.require_square()?;
    let mut a: Vec<Vec<BigRat>> = m
        .iter_rows()
        .map(|r| r.iter().cloned().map(BigRat::from_integer).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or(LinalgError::Singular)?;
        a.swap(col, pivot);
        rhs.swap(col, pivot);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        for x in rhs[col].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = a[col].clone();
        let pivot_rhs = rhs[col].clone();
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for (x, p) in a[r][col..].iter_mut().zip(&pivot_row[col..]) {
                *x = &*x - &factor * p;
            }
            for (x, p) in rhs[r].iter_mut().zip(&pivot_rhs) {
                *x = &*x - &factor * p;
            }
        }
    }
    Ok(())
}

/// Unique rational solution `x` of `m · x = rhs`.
pub fn solve(m: &IntMatrix, rhs: &[BigInt]) -> Result<Vec<BigRat>, LinalgError> {
    let n = m.require_square()?;
    if rhs.len() != n {
        return Err(LinalgError::DimensionMismatch {
            expected: n,
            found: rhs.len(),
        });
    }
    let mut cols: Vec<Vec<BigRat>> = rhs
        .iter()
        .map(|b| vec![BigRat::from_integer(b.clone())])
        .collect();
    eliminate(m, &mut cols)?;
    Ok(cols.into_iter().map(|mut r| r.remove(0)).collect())
}

pub fn invert(m: &IntMatrix) -> Result<RatMatrix, LinalgError> {
    let n = m.require_square()?;
    let mut cols: Vec<Vec<BigRat>> = RatMatrix::identity(n)
        .iter_rows()
        .map(<[BigRat]>::to_vec)
        .collect();
    eliminate(m, &mut cols)?;
    RatMatrix::from_rows(cols)
}

/// `(det m, adj m)` with `m · adj m = det m · I`. Fails on singular input,
/// since the adjugate is only used to clear denominators of the inverse.
pub fn adjugate(m: &IntMatrix) -> Result<(BigInt, IntMatrix), LinalgError> {
    let det = determinant(m)?;
    if det.is_zero() {
        return Err(LinalgError::Singular);
    }
    let inv = invert(m)?;
    let scale = BigRat::from_integer(det.clone());
    let adj = inv.map(|x| {
        let y = x * &scale;
        debug_assert!(y.is_integer());
        y.to_integer()
    });
    Ok((det, adj))
}

/// Quadratic form `vᵀ · m · v` with a rational matrix and integer vector.
pub fn rational_quadratic(m: &RatMatrix, v: &[BigInt]) -> Result<BigRat, LinalgError> {
    if !m.is_square() || m.rows() != v.len() {
        return Err(LinalgError::DimensionMismatch {
            expected: m.rows(),
            found: v.len(),
        });
    }
    let rv: Vec<BigRat> = v.iter().cloned().map(BigRat::from_integer).collect();
    let mv = m.mul_vec(&rv)?;
    Ok(rv
        .iter()
        .zip(&mv)
        .fold(BigRat::zero(), |acc, (a, b)| acc + a * b))
}

/// Signs of the diagonal after a symmetric congruence diagonalization over
/// the rationals: `(positive, negative, zero)` counts.
pub fn inertia(m: &IntMatrix) -> Result<(usize, usize, usize), LinalgError> {
    m.require_square()?;
    if let Some((row, col)) = m.asymmetry() {
        return Err(LinalgError::NotSymmetric { row, col });
    }
    let mut a: Vec<Vec<BigRat>> = m
        .iter_rows()
        .map(|r| r.iter().cloned().map(BigRat::from_integer).collect())
        .collect();
    let (mut pos, mut neg) = (0, 0);
    let mut active: Vec<usize> = (0..m.rows()).collect();
    while !active.is_empty() {
        let pivot = match active.iter().copied().find(|&i| !a[i][i].is_zero()) {
            Some(p) => p,
            None => {
                // Every remaining diagonal entry vanishes. Adding row/col j
                // to row/col i turns a[i][i] into 2·a[i][j].
                let Some((i, j)) = active.iter().copied().find_map(|i| {
                    active
                        .iter()
                        .copied()
                        .find(|&j| !a[i][j].is_zero())
                        .map(|j| (i, j))
                }) else {
                    break;
                };
                for &k in &active {
                    a[i][k] = &a[i][k] + &a[j][k];
                }
                for &k in &active {
                    a[k][i] = &a[k][i] + &a[k][j];
                }
                i
            }
        };
        let d = a[pivot][pivot].clone();
        if d.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        active.retain(|&i| i != pivot);
        for &i in &active {
            let factor = &a[i][pivot] / &d;
            if factor.is_zero() {
                continue;
            }
            for &k in &active {
                let delta = &factor * &a[pivot][k];
                a[i][k] = &a[i][k] - delta;
            }
        }
    }
    Ok((pos, neg, active.len()))
}

/// Reduced `p/q` rendering; integers print without a denominator.
pub fn format_rational(x: &BigRat) -> String {
    if x.is_integer() {
        x.to_integer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

// Small helpers shared by the lattice code.
pub(crate) fn dot<T>(a: &[T], b: &[T]) -> T
where
    T: Zero + Clone,
    for<'x> &'x T: Mul<&'x T, Output = T>,
    T: Add<Output = T>,
{
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + x * y)
}

pub(crate) fn sub_vec<T>(a: &[T], b: &[T]) -> Vec<T>
where
    for<'x> &'x T: Sub<&'x T, Output = T>,
{
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn neg_vec<T>(a: &[T]) -> Vec<T>
where
    for<'x> &'x T: Neg<Output = T>,
{
    a.iter().map(|x| -x).collect()
}
