//! Lattices spanned by rational vectors inside a rational quadratic space.
//!
//! Divisor classes such as `(F - E_1 - ... - E_4)/2` live naturally in a
//! `Q`-basis; the lattice they span is recovered on an integral basis through
//! the Smith normal form of the scaled generator matrix.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::matrix::{common_denominator, smith_normal_form, IntMatrix, RatMatrix};
use super::{IntegerLattice, LatticeError};

#[derive(Clone, Debug)]
pub struct GeneratedLattice {
    ambient: RatMatrix,
    denom: BigInt,
    left: IntMatrix,
    factors: Vec<BigInt>,
    basis: Vec<Vec<BigRational>>,
}

impl GeneratedLattice {
    /// Lattice spanned by `generators` (ambient coordinates) with pairing
    /// given by the symmetric `ambient` Gram matrix.
    pub fn new(ambient: RatMatrix, generators: &[Vec<BigRational>]) -> Result<Self, LatticeError> {
        let dim = ambient.rows();
        if let Some(g) = generators.iter().find(|g| g.len() != dim) {
            return Err(LatticeError::DimensionMismatch {
                got: g.len(),
                rank: dim,
            });
        }
        let denom = common_denominator(generators.iter().flatten());
        let mut n = IntMatrix::zeros(dim, generators.len());
        for (j, g) in generators.iter().enumerate() {
            for (i, x) in g.iter().enumerate() {
                n[(i, j)] = (x * BigRational::from_integer(denom.clone())).to_integer();
            }
        }
        let snf = smith_normal_form(&n);
        let basis = snf
            .invariant_factors
            .iter()
            .enumerate()
            .map(|(i, d)| {
                (0..dim)
                    .map(|r| BigRational::new(&snf.left_inv[(r, i)] * d, denom.clone()))
                    .collect()
            })
            .collect();
        Ok(GeneratedLattice {
            ambient,
            denom,
            left: snf.left,
            factors: snf.invariant_factors,
            basis,
        })
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<BigRational>] {
        &self.basis
    }

    pub fn pair(&self, x: &[BigRational], y: &[BigRational]) -> BigRational {
        let gy = self.ambient.mul_vec(y);
        x.iter()
            .zip(&gy)
            .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
    }

    /// Gram matrix on the integral basis, if all pairings are integers.
    pub fn gram(&self) -> Option<IntMatrix> {
        let r = self.rank();
        let mut g = IntMatrix::zeros(r, r);
        for i in 0..r {
            for j in 0..r {
                let p = self.pair(&self.basis[i], &self.basis[j]);
                if !p.is_integer() {
                    return None;
                }
                g[(i, j)] = p.to_integer();
            }
        }
        Some(g)
    }

    pub fn lattice(&self) -> Result<IntegerLattice, LatticeError> {
        let g = self.gram().ok_or(LatticeError::NotInDual)?;
        IntegerLattice::new(g)
    }

    /// Coordinates of `v` on the integral basis, or `None` if `v` is not in
    /// the lattice.
    pub fn coordinates(&self, v: &[BigRational]) -> Option<Vec<BigInt>> {
        if v.len() != self.ambient.rows() {
            return None;
        }
        let scaled: Vec<BigRational> = v
            .iter()
            .map(|x| x * BigRational::from_integer(self.denom.clone()))
            .collect();
        if scaled.iter().any(|x| !x.is_integer()) {
            return None;
        }
        let w = self
            .left
            .mul_vec(&scaled.iter().map(|x| x.to_integer()).collect::<Vec<_>>());
        let r = self.rank();
        if w[r..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let mut c = Vec::with_capacity(r);
        for (x, d) in w[..r].iter().zip(&self.factors) {
            let (q, rem) = x.div_rem(d);
            if !rem.is_zero() {
                return None;
            }
            c.push(q);
        }
        Some(c)
    }

    pub fn contains(&self, v: &[BigRational]) -> bool {
        self.coordinates(v).is_some()
    }

    /// `Some(v/2)` when `v/2` lies in the lattice, `None` otherwise.
    /// Errors if `v` itself is not a lattice vector.
    pub fn half(&self, v: &[BigRational]) -> Result<Option<Vec<BigRational>>, LatticeError> {
        let c = self.coordinates(v).ok_or(LatticeError::NotInLattice)?;
        if c.iter().any(|x| x.is_odd()) {
            return Ok(None);
        }
        let two = BigRational::from_integer(2.into());
        Ok(Some(v.iter().map(|x| x / &two).collect()))
    }

    /// `[L' : L]` for a sublattice `L` of equal rank, via Gram determinants.
    pub fn index_over(&self, sub: &GeneratedLattice) -> Option<BigInt> {
        if self.rank() != sub.rank() {
            return None;
        }
        let (a, b) = (self.gram()?.determinant(), sub.gram()?.determinant());
        if a.is_zero() || !b.is_multiple_of(&a) {
            return None;
        }
        let r = (b / a).abs();
        let s = r.sqrt();
        (&s * &s == r).then_some(s)
    }
}
