//! Even integer lattices and their discriminant forms.
//!
//! Root lattices follow the negative-definite convention (simple roots have
//! self-intersection `-2`), and `U` is the hyperbolic plane `[[0,1],[1,0]]`.

pub mod discriminant;
pub mod expr;
pub mod generated;
pub mod matrix;
pub mod ops;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::json::{int_rows, JsonInt};

pub use discriminant::{discriminant_form, is_type_i, DiscriminantForm, GaussSignature};
pub use expr::{build_lattice, parse_expr, Atom, Elaborated, LatticeExpr, Summand};
pub use generated::GeneratedLattice;
pub use matrix::{IntMatrix, RatMatrix};
pub use ops::{
    adjoin_glue, direct_sum, even_unimodular_admissible, glue, half_class_q_test, is_two_divisible,
    orthogonal_complement, primitive_closure, Closure, GlueData, HalfClassTest, Overlattice,
    Sublattice, TwoDivisibility,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("Gram matrix is not square")]
    NotSquare,
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("lattice is not even: diagonal entry {index} is {value}")]
    NotEven { index: usize, value: BigInt },
    #[error("lattice is degenerate (determinant 0)")]
    Degenerate,
    #[error("malformed lattice expression: {0}")]
    Parse(String),
    #[error("~A1 exponent {0} is not divisible by 4")]
    GlueExponent(u32),
    #[error("vector does not pair integrally with the lattice (not in the dual)")]
    NotInDual,
    #[error("glue vector has odd or non-integral norm {0}; the overlattice would not be even")]
    OddNorm(String),
    #[error("glue vector has order {0}, expected 2")]
    GlueOrder(String),
    #[error("diagonal glue subgroup is not isotropic: {0}")]
    NotIsotropic(String),
    #[error("glue pairing is not an anti-isometry: {0}")]
    NotAntiIsometric(String),
    #[error("span of the given classes is degenerate")]
    DegenerateSpan,
    #[error("classes are linearly dependent")]
    Dependent,
    #[error("class has {got} coordinates but the lattice has rank {rank}")]
    DimensionMismatch { got: usize, rank: usize },
    #[error("class is not an element of the lattice")]
    NotInLattice,
    #[error("orthogonal complement is zero")]
    ZeroComplement,
    #[error("discriminant group of order {0} is too large for exhaustive evaluation")]
    GroupTooLarge(BigInt),
}

/// An even, non-degenerate lattice given by its Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerLattice {
    gram: IntMatrix,
    label: Option<String>,
}

impl IntegerLattice {
    pub fn new(gram: IntMatrix) -> Result<Self, LatticeError> {
        if gram.rows() != gram.cols() || gram.rows() == 0 {
            return Err(LatticeError::NotSquare);
        }
        if !gram.is_symmetric() {
            return Err(LatticeError::NotSymmetric);
        }
        for i in 0..gram.rows() {
            if gram[(i, i)].is_odd() {
                return Err(LatticeError::NotEven {
                    index: i,
                    value: gram[(i, i)].clone(),
                });
            }
        }
        if gram.determinant().is_zero() {
            return Err(LatticeError::Degenerate);
        }
        Ok(IntegerLattice { gram, label: None })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self, LatticeError> {
        Self::new(IntMatrix::from_i64(rows))
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn determinant(&self) -> BigInt {
        self.gram.determinant()
    }

    /// `(positive, negative)` index of inertia.
    pub fn signature(&self) -> (usize, usize) {
        let (p, n, _) = matrix::inertia(&self.gram.to_rational());
        (p, n)
    }

    /// `L(m)`: every pairing multiplied by `m`.
    pub fn scaled(&self, m: i64) -> Result<Self, LatticeError> {
        let mut g = self.gram.clone();
        let m = BigInt::from(m);
        for i in 0..g.rows() {
            for j in 0..g.cols() {
                g[(i, j)] = &g[(i, j)] * &m;
            }
        }
        IntegerLattice::new(g)
    }

    pub fn pair(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        let gy = self.gram.mul_vec(y);
        x.iter().zip(&gy).map(|(a, b)| a * b).sum()
    }

    pub fn class(&self, coords: Vec<BigInt>) -> Result<DivisorClass, LatticeError> {
        if coords.len() != self.rank() {
            return Err(LatticeError::DimensionMismatch {
                got: coords.len(),
                rank: self.rank(),
            });
        }
        let self_int = self.pair(&coords, &coords);
        Ok(DivisorClass { coords, self_int })
    }

    pub fn class_i64(&self, coords: &[i64]) -> Result<DivisorClass, LatticeError> {
        self.class(coords.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn to_json(&self) -> LatticeJson {
        LatticeJson {
            gram: int_rows(&self.gram.to_rows()),
            label: self.label.clone().unwrap_or_default(),
        }
    }
}

/// JSON shape `{"gram": [[...]], "label": "..."}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct LatticeJson {
    pub gram: Vec<Vec<JsonInt>>,
    pub label: String,
}

impl TryFrom<LatticeJson> for IntegerLattice {
    type Error = LatticeError;
    fn try_from(j: LatticeJson) -> Result<Self, LatticeError> {
        if j.gram.iter().any(|r| r.len() != j.gram.len()) {
            return Err(LatticeError::NotSquare);
        }
        let rows: Vec<Vec<BigInt>> = j
            .gram
            .into_iter()
            .map(|r| r.into_iter().map(|x| x.0).collect())
            .collect();
        let l = IntegerLattice::new(IntMatrix::from_rows(&rows))?;
        Ok(if j.label.is_empty() {
            l
        } else {
            l.with_label(j.label)
        })
    }
}

/// A lattice element in the coordinates of its lattice's basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorClass {
    pub coords: Vec<BigInt>,
    pub self_int: BigInt,
}

impl DivisorClass {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}
