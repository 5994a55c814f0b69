//! Quasi-elliptic fibrations on K3 surfaces in characteristic 2: fiber
//! configuration from Weierstrass data, the 2-torsion section and its height,
//! and 2-divisible divisor classes in a model of the Picard lattice.

pub mod height;
pub mod model;
pub mod report;
pub mod weierstrass;

use thiserror::Error;

use crate::field::FieldError;
use crate::lattice::LatticeError;

pub use height::{height_ledger, solve_height_ledger, HeightLedger, LedgerEntry};
pub use model::{
    nonreduced_fiber_divisor, parity_divisibility, xi_class, Certificate, FiberShape,
    NonreducedDivisor, PicardModel, SectionKind, XiClass,
};
pub use report::{
    analyze, ito_sigma, parse_fibers, validate_configuration, ConfigurationVerdict, FibrationReport,
};
pub use weierstrass::{Component, FiberDatum, FiberType, K3Check, Place, SectionP, WeierstrassQE};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QeError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("not a K3 Weierstrass model: {}", .0.join("; "))]
    NotK3(Vec<String>),
    #[error("configuration outside scope: place {place} has v(Delta) = {valuation}; only 1 (III) and 4 (I0*) are handled")]
    OutsideScope { place: String, valuation: u32 },
    #[error("no 2-torsion section (phi vanishes)")]
    NoTorsionSection,
    #[error(
        "deg gcd(phi, psi) = {0} is outside the proved range (at most 1); (P.O) is not determined"
    )]
    GcdOutOfRange(usize),
    #[error("place {place} is not an I0* place (v(Delta) = {valuation})")]
    NotI0Star { place: String, valuation: u32 },
    #[error(
        "torsion section on the cusp at {0} would force l^6 | Delta, contradicting v(Delta) = 4"
    )]
    CuspContradiction(String),
    #[error("inconsistent height ledger: {0}")]
    Inconsistent(String),
    #[error("parameter out of range: {0}")]
    Range(String),
    #[error("invalid fiber configuration: {0}")]
    InvalidConfiguration(String),
}
