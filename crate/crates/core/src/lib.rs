//! Exact arithmetic for even lattices, quasi-elliptic fibrations in
//! characteristic 2, rational double points, and the verified catalog of
//! 2-divisible configurations of (-2)-curves on supersingular K3 surfaces.

pub mod catalog;
pub mod field;
pub mod json;
pub mod lattice;
pub mod qe;
pub mod singularity;

pub use lattice::{DiscriminantForm, DivisorClass, IntegerLattice, LatticeError, LatticeExpr};
