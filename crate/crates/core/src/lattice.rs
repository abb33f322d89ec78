//! Intersection forms and class vectors in the Poincaré-dual basis.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::exact::{self, BigRat, IntMatrix, LinalgError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("gram matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("gram matrix is not symmetric: entry ({row}, {col}) differs from ({col}, {row})")]
    NotSymmetric { row: usize, col: usize },
    #[error("intersection form is degenerate ({nullity} zero eigenvalue(s))")]
    Degenerate { nullity: usize },
    #[error("class has {found} coordinates, form has rank {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("sphere class has square {square}, expected a negative square")]
    NonNegativeSphere { square: BigInt },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Integer coefficient vector in the PD basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassVector(Vec<BigInt>);

impl ClassVector {
    pub fn new(coords: Vec<BigInt>) -> Self {
        Self(coords)
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        Self(coords.iter().copied().map(BigInt::from).collect())
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![BigInt::zero(); n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = BigInt::one();
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.0
    }

    /// `None` if some coordinate does not fit in an `i64`.
    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.0.iter().map(ToPrimitive::to_i64).collect()
    }

    pub fn scale(&self, k: i64) -> Self {
        let k = BigInt::from(k);
        Self(self.0.iter().map(|x| x * &k).collect())
    }
}

impl Neg for &ClassVector {
    type Output = ClassVector;
    fn neg(self) -> ClassVector {
        ClassVector(exact::neg_vec(&self.0))
    }
}

impl Add for &ClassVector {
    type Output = ClassVector;
    fn add(self, rhs: &ClassVector) -> ClassVector {
        assert_eq!(self.len(), rhs.len(), "class length mismatch");
        ClassVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &ClassVector {
    type Output = ClassVector;
    fn sub(self, rhs: &ClassVector) -> ClassVector {
        assert_eq!(self.len(), rhs.len(), "class length mismatch");
        ClassVector(exact::sub_vec(&self.0, &rhs.0))
    }
}

impl fmt::Debug for ClassVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ClassVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Class with rational coordinates, as produced by solving evaluation
/// systems before the integrality filter.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalClass(Vec<BigRat>);

impl RationalClass {
    pub fn new(coords: Vec<BigRat>) -> Self {
        Self(coords)
    }

    pub fn coords(&self) -> &[BigRat] {
        &self.0
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(BigRat::is_integer)
    }

    pub fn to_integral(&self) -> Option<ClassVector> {
        self.is_integral()
            .then(|| ClassVector(self.0.iter().map(BigRat::to_integer).collect()))
    }
}

impl From<&ClassVector> for RationalClass {
    fn from(v: &ClassVector) -> Self {
        Self(v.0.iter().cloned().map(BigRat::from_integer).collect())
    }
}

/// Symmetric nondegenerate integer form with its signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionForm {
    gram: IntMatrix,
    b_plus: usize,
    b_minus: usize,
}

impl IntersectionForm {
    pub fn new(gram: IntMatrix) -> Result<Self, LatticeError> {
        if !gram.is_square() {
            return Err(LatticeError::NotSquare {
                rows: gram.rows(),
                cols: gram.cols(),
            });
        }
        if let Some((row, col)) = gram.asymmetry() {
            return Err(LatticeError::NotSymmetric { row, col });
        }
        let (b_plus, b_minus, nullity) = exact::inertia(&gram)?;
        if nullity > 0 {
            return Err(LatticeError::Degenerate { nullity });
        }
        Ok(Self {
            gram,
            b_plus,
            b_minus,
        })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self, LatticeError> {
        Self::new(IntMatrix::from_i64_rows(rows)?)
    }

    /// `S²×S² # k m̄CP²` in the basis `(A, B, E_1, …, E_k)`.
    pub fn blown_up_s2xs2(k: usize) -> Self {
        let n = k + 2;
        let mut g = vec![vec![0i64; n]; n];
        g[0][1] = 1;
        g[1][0] = 1;
        for (i, row) in g.iter_mut().enumerate().skip(2) {
            row[i] = -1;
        }
        Self::from_i64_rows(&g).expect("hyperbolic plus diagonal form is valid")
    }

    pub fn diagonal(entries: &[i64]) -> Result<Self, LatticeError> {
        let n = entries.len();
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { entries[i] } else { 0 })
                    .collect()
            })
            .collect();
        Self::from_i64_rows(&rows)
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn b_plus(&self) -> usize {
        self.b_plus
    }

    pub fn b_minus(&self) -> usize {
        self.b_minus
    }

    pub fn signature(&self) -> i64 {
        self.b_plus as i64 - self.b_minus as i64
    }

    /// Euler characteristic of a closed simply-connected 4-manifold with
    /// this form.
    pub fn euler_characteristic(&self) -> i64 {
        2 + self.rank() as i64
    }

    fn check(&self, v: &ClassVector) -> Result<(), LatticeError> {
        if v.len() == self.rank() {
            Ok(())
        } else {
            Err(LatticeError::LengthMismatch {
                expected: self.rank(),
                found: v.len(),
            })
        }
    }

    /// `gram · v`: the row of evaluations of `v` against the basis.
    pub fn dual(&self, v: &ClassVector) -> Result<Vec<BigInt>, LatticeError> {
        self.check(v)?;
        Ok(self.gram.mul_vec(v.coords())?)
    }

    pub fn pair(&self, v: &ClassVector, w: &ClassVector) -> Result<BigInt, LatticeError> {
        self.check(w)?;
        let gv = self.dual(v)?;
        Ok(exact::dot(&gv, w.coords()))
    }

    pub fn square(&self, v: &ClassVector) -> Result<BigInt, LatticeError> {
        self.pair(v, v)
    }

    /// `v · b ≡ b · b (mod 2)` for every basis vector `b`. Wrong-length
    /// input is simply not characteristic.
    pub fn is_characteristic(&self, v: &ClassVector) -> bool {
        let Ok(gv) = self.dual(v) else {
            return false;
        };
        gv.iter()
            .enumerate()
            .all(|(i, x)| (x - self.gram.get(i, i)).is_even())
    }

    /// `2χ + 3σ` for the closed simply-connected manifold carrying this form.
    pub fn derived_bound(&self) -> BigInt {
        BigInt::from(2 * self.euler_characteristic() + 3 * self.signature())
    }

    /// Row `i` is `(gram · classes[i])ᵀ`, so the matrix maps a class `k`
    /// to its evaluations `⟨k, classes[i]⟩`.
    pub fn evaluation_matrix(&self, classes: &[ClassVector]) -> Result<IntMatrix, LatticeError> {
        if classes.len() != self.rank() {
            return Err(LatticeError::LengthMismatch {
                expected: self.rank(),
                found: classes.len(),
            });
        }
        let rows = classes
            .iter()
            .map(|c| self.dual(c))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(IntMatrix::from_rows(rows)?)
    }

    pub fn evaluations(
        &self,
        v: &ClassVector,
        classes: &[ClassVector],
    ) -> Result<Vec<BigInt>, LatticeError> {
        let gv = self.dual(v)?;
        classes
            .iter()
            .map(|c| {
                self.check(c)?;
                Ok(exact::dot(&gv, c.coords()))
            })
            .collect()
    }

    /// Gram matrix of `classes` under this form.
    pub fn restricted_gram(&self, classes: &[ClassVector]) -> Result<IntMatrix, LatticeError> {
        let rows = classes
            .iter()
            .map(|c| self.evaluations(c, classes))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(IntMatrix::from_rows(rows)?)
    }
}

/// An embedded sphere class of negative square `-p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphereClass {
    class: ClassVector,
    p: u64,
}

impl SphereClass {
    pub fn new(form: &IntersectionForm, class: ClassVector) -> Result<Self, LatticeError> {
        let square = form.square(&class)?;
        match (-&square).to_u64() {
            Some(p) if p > 0 => Ok(Self { class, p }),
            _ => Err(LatticeError::NonNegativeSphere { square }),
        }
    }

    pub fn class(&self) -> &ClassVector {
        &self.class
    }

    pub fn p(&self) -> u64 {
        self.p
    }
}
