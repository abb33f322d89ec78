//! The `C_p` plumbing configuration removed by a rational blow-down.
//!
//! A chain is `p + 1` classes: one sphere of square `-4 - p` and `p` spheres
//! of square `-2`, plumbed linearly with the `-4 - p` sphere at one end. A
//! characteristic class on the ambient manifold descends to the blow-down
//! when its evaluations on the chain form one of the configuration's
//! extension tuples; the blown-down class lives in the orthogonal
//! complement of the chain, so its square is the ambient square minus the
//! chain part `eᵀ Q⁻¹ e` (with `Q` the chain Gram matrix).
//!
//! Sign convention: `eᵀ Q⁻¹ e = -(p + 1)` for every admissible tuple. The
//! identity is sometimes written `K₀² - p - 1 = 0`, but `Q` is negative
//! definite so the square of the extension is necessarily negative; the
//! negative value is what the checks below enforce.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exact::{self, format_rational, BigRat, IntMatrix, RatMatrix};
use crate::lattice::{ClassVector, IntersectionForm, LatticeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlowdownError {
    #[error("chain for p = {p} needs {} classes, found {found}", p + 1)]
    ClassCount { p: usize, found: usize },
    #[error("chain diagonal {diagonal:?} must be one entry {} and the rest -2", -4 - *p as i64)]
    DiagonalShape { p: usize, diagonal: Vec<i64> },
    #[error("chain gram matrix is not negative definite")]
    NotNegativeDefinite,
    #[error("chain classes are not plumbed as a linear chain starting at R{central}")]
    NotLinearChain { central: usize },
    #[error("extension tuple {index} has {found} entries, expected {expected}")]
    TupleArity {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("extension tuple {index}: entry {value} on R{position} has the wrong parity for a class of square {square}")]
    TupleParity {
        index: usize,
        position: usize,
        value: i64,
        square: i64,
    },
    #[error("extension tuple {index} has chain square {found}, expected {expected}")]
    TupleSquare {
        index: usize,
        found: String,
        expected: i64,
    },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowdownChain {
    p: usize,
    classes: Vec<ClassVector>,
    gram: IntMatrix,
    gram_inverse: RatMatrix,
    chain_order: Vec<usize>,
    extension_tuples: Vec<Vec<i64>>,
}

impl BlowdownChain {
    /// Validates the chain shape. The chain starts with no extension tuples.
    pub fn new(
        form: &IntersectionForm,
        p: usize,
        classes: Vec<ClassVector>,
    ) -> Result<Self, BlowdownError> {
        if classes.len() != p + 1 {
            return Err(BlowdownError::ClassCount {
                p,
                found: classes.len(),
            });
        }
        let gram = form.restricted_gram(&classes)?;
        let diagonal: Vec<i64> = (0..=p)
            .map(|i| i64::try_from(gram.get(i, i)).unwrap_or(i64::MIN))
            .collect();
        let central_square = -4 - p as i64;
        let centrals: Vec<usize> = (0..=p).filter(|&i| diagonal[i] == central_square).collect();
        let others_ok = (0..=p).all(|i| diagonal[i] == central_square || diagonal[i] == -2);
        if centrals.len() != 1 || !others_ok {
            return Err(BlowdownError::DiagonalShape { p, diagonal });
        }
        let central = centrals[0];
        let (_, negative, _) = exact::inertia(&gram).map_err(LatticeError::from)?;
        if negative != p + 1 {
            return Err(BlowdownError::NotNegativeDefinite);
        }
        let chain_order =
            linear_chain_order(&gram, central).ok_or(BlowdownError::NotLinearChain { central })?;
        let gram_inverse = exact::invert(&gram).map_err(LatticeError::from)?;
        Ok(Self {
            p,
            classes,
            gram,
            gram_inverse,
            chain_order,
            extension_tuples: Vec::new(),
        })
    }

    /// Attaches extension tuples after checking each one's parity and
    /// chain square. Tuple entry `i` is the evaluation on `classes[i]`.
    pub fn with_extension_tuples(mut self, tuples: Vec<Vec<i64>>) -> Result<Self, BlowdownError> {
        for (index, e) in tuples.iter().enumerate() {
            self.check_tuple(index, e)?;
        }
        self.extension_tuples = tuples;
        Ok(self)
    }

    fn check_tuple(&self, index: usize, e: &[i64]) -> Result<(), BlowdownError> {
        if e.len() != self.p + 1 {
            return Err(BlowdownError::TupleArity {
                index,
                expected: self.p + 1,
                found: e.len(),
            });
        }
        for (position, &value) in e.iter().enumerate() {
            let square = i64::try_from(self.gram.get(position, position)).unwrap_or_default();
            if (value - square).is_odd() {
                return Err(BlowdownError::TupleParity {
                    index,
                    position,
                    value,
                    square,
                });
            }
        }
        let found = self.k0_square_i64(e);
        let expected = -(self.p as i64 + 1);
        if found != BigRat::from_integer(expected.into()) {
            return Err(BlowdownError::TupleSquare {
                index,
                found: format_rational(&found),
                expected,
            });
        }
        Ok(())
    }

    /// Re-indexes tuples written along the plumbing (central sphere first,
    /// then its neighbour, and so on) into per-class evaluations.
    pub fn tuples_from_chain_order(
        &self,
        rows: &[Vec<i64>],
    ) -> Result<Vec<Vec<i64>>, BlowdownError> {
        rows.iter()
            .enumerate()
            .map(|(index, row)| {
                if row.len() != self.p + 1 {
                    return Err(BlowdownError::TupleArity {
                        index,
                        expected: self.p + 1,
                        found: row.len(),
                    });
                }
                let mut e = vec![0i64; self.p + 1];
                for (k, &value) in row.iter().enumerate() {
                    e[self.chain_order[k]] = value;
                }
                Ok(e)
            })
            .collect()
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn classes(&self) -> &[ClassVector] {
        &self.classes
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn gram_inverse(&self) -> &RatMatrix {
        &self.gram_inverse
    }

    /// Class indices in plumbing order, starting at the `-4 - p` sphere.
    pub fn chain_order(&self) -> &[usize] {
        &self.chain_order
    }

    pub fn central_index(&self) -> usize {
        self.chain_order[0]
    }

    pub fn extension_tuples(&self) -> &[Vec<i64>] {
        &self.extension_tuples
    }

    /// `eᵀ Q⁻¹ e` for an evaluation tuple `e` on the chain.
    pub fn k0_square(&self, e: &[BigInt]) -> Result<BigRat, LatticeError> {
        Ok(exact::rational_quadratic(&self.gram_inverse, e)?)
    }

    fn k0_square_i64(&self, e: &[i64]) -> BigRat {
        let e: Vec<BigInt> = e.iter().copied().map(BigInt::from).collect();
        self.k0_square(&e).expect("tuple arity checked")
    }

    pub fn evaluations(
        &self,
        form: &IntersectionForm,
        v: &ClassVector,
    ) -> Result<Vec<BigInt>, LatticeError> {
        form.evaluations(v, &self.classes)
    }

    /// Square of the class induced on the blown-down manifold.
    pub fn blown_down_square(
        &self,
        form: &IntersectionForm,
        v: &ClassVector,
    ) -> Result<BigRat, LatticeError> {
        let square = BigRat::from_integer(form.square(v)?);
        let e = self.evaluations(form, v)?;
        Ok(square - self.k0_square(&e)?)
    }

    /// `2χ + 3σ` of the blown-down manifold: removing the chain drops
    /// `p + 1` negative classes, so `χ` falls by `p + 1` and `σ` rises by it.
    pub fn blown_down_bound(&self, form: &IntersectionForm) -> BigInt {
        form.derived_bound() + BigInt::from(self.p + 1)
    }

    /// `(K'² - (2χ' + 3σ')) / 4` on the blown-down manifold.
    pub fn formal_dimension(
        &self,
        form: &IntersectionForm,
        v: &ClassVector,
    ) -> Result<BigRat, LatticeError> {
        let bound = BigRat::from_integer(self.blown_down_bound(form));
        Ok((self.blown_down_square(form, v)? - bound) / BigRat::from_integer(4.into()))
    }
}

/// Vertex order of a linear plumbing starting at `start`, if the off-diagonal
/// entries of `gram` are all 0 or 1 and the 1's form a path with `start` at
/// one end.
pub fn linear_chain_order(gram: &IntMatrix, start: usize) -> Option<Vec<usize>> {
    let n = gram.rows();
    let mut neighbours = vec![Vec::new(); n];
    for (i, nb) in neighbours.iter_mut().enumerate() {
        for j in 0..n {
            if i == j {
                continue;
            }
            let x = gram.get(i, j);
            if x.is_one() {
                nb.push(j);
            } else if !x.is_zero() {
                return None;
            }
        }
    }
    if neighbours.iter().any(|nb| nb.len() > 2) || (n > 1 && neighbours[start].len() != 1) {
        return None;
    }
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    while let Some(&next) = neighbours[cur].iter().find(|&&x| x != prev) {
        if order.contains(&next) {
            return None;
        }
        order.push(next);
        prev = cur;
        cur = next;
    }
    (order.len() == n).then_some(order)
}
