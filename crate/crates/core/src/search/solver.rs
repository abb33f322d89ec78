//! Per-candidate solving of the evaluation system `M · k = rhs`.
//!
//! The inverse is kept as an adjugate/determinant pair so that a candidate
//! is integral exactly when `adj · rhs` is divisible by `det` coordinatewise.
//! When the adjugate is small enough that `adj · rhs` cannot overflow for
//! the right-hand sides a run will use, a fixed-width copy is used instead.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::exact::{self, BigRat, IntMatrix, LinalgError};
use crate::lattice::{ClassVector, RationalClass};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateSolver {
    det: BigInt,
    adjugate: IntMatrix,
}

impl CandidateSolver {
    pub fn new(evaluation_matrix: &IntMatrix) -> Result<Self, LinalgError> {
        let (det, adjugate) = exact::adjugate(evaluation_matrix)?;
        Ok(Self { det, adjugate })
    }

    pub fn determinant(&self) -> &BigInt {
        &self.det
    }

    pub fn adjugate(&self) -> &IntMatrix {
        &self.adjugate
    }

    pub fn rank(&self) -> usize {
        self.adjugate.rows()
    }

    pub fn solve(&self, rhs: &[BigInt]) -> Result<RationalClass, LinalgError> {
        let num = self.adjugate.mul_vec(rhs)?;
        Ok(RationalClass::new(
            num.into_iter()
                .map(|x| BigRat::new(x, self.det.clone()))
                .collect(),
        ))
    }

    /// The solution if it is integral, using only big-integer arithmetic.
    pub fn solve_integral(&self, rhs: &[BigInt]) -> Result<Option<ClassVector>, LinalgError> {
        let num = self.adjugate.mul_vec(rhs)?;
        if num.iter().any(|x| !x.is_multiple_of(&self.det)) {
            return Ok(None);
        }
        Ok(Some(ClassVector::new(
            num.into_iter().map(|x| x / &self.det).collect(),
        )))
    }

    /// Fixed-width solver valid for every `rhs` with `|rhs_j| <= max_abs_rhs`,
    /// or `None` if such inputs could overflow `i128`.
    pub fn narrow(&self, max_abs_rhs: u64) -> Option<NarrowSolver> {
        let limit = BigInt::from(i128::MAX);
        let max_rhs = BigInt::from(max_abs_rhs);
        for row in self.adjugate.iter_rows() {
            let row_norm: BigInt = row.iter().map(Signed::abs).sum();
            if row_norm * &max_rhs > limit {
                return None;
            }
        }
        let adj = self
            .adjugate
            .iter_rows()
            .flatten()
            .map(ToPrimitive::to_i128)
            .collect::<Option<Vec<_>>>()?;
        let det = self.det.to_i128()?;
        (!det.is_zero()).then(|| NarrowSolver {
            n: self.rank(),
            det,
            adj,
            max_abs_rhs,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NarrowSolver {
    n: usize,
    det: i128,
    adj: Vec<i128>,
    max_abs_rhs: u64,
}

impl NarrowSolver {
    pub fn max_abs_rhs(&self) -> u64 {
        self.max_abs_rhs
    }

    /// Writes the solution into `out` and returns `true` if it is integral.
    /// Callers must respect the `max_abs_rhs` bound given at construction.
    pub fn solve_integral(&self, rhs: &[i64], out: &mut [i128]) -> bool {
        debug_assert_eq!(rhs.len(), self.n);
        debug_assert!(rhs.iter().all(|x| x.unsigned_abs() <= self.max_abs_rhs));
        for (i, row) in self.adj.chunks_exact(self.n).enumerate() {
            let num: i128 = row.iter().zip(rhs).map(|(a, &b)| a * b as i128).sum();
            if num % self.det != 0 {
                return false;
            }
            out[i] = num / self.det;
        }
        true
    }
}
