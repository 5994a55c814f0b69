//! The verified catalog: Picard lattice decompositions by Artin invariant,
//! quasi-elliptic strata, and the sizes of 2-divisible sets of disjoint
//! (-2)-curves that occur, each backed by a lattice computation.

pub mod basechange;
pub mod impossibility;
pub mod picard_rows;
pub mod realizability;
pub mod strata;
pub mod witness;

use serde::Serialize;
use thiserror::Error;

use crate::lattice::LatticeError;
use crate::qe::QeError;

pub use basechange::{n12_basechange_certificate, BaseChangeCertificate};
pub use impossibility::{
    impossibility_sigma10, sigma_one_filter, ArithmeticFilter, Check, ImpossibilityTrace, Relation,
    TraceStep,
};
pub use picard_rows::{
    apply_criterion, negative_control, picard_row, picard_rows, verify_row, CriterionOutcome,
    PicardTableRow, RowReport,
};
pub use realizability::{
    realizability_cell, realizability_matrix, CellStatus, Evidence, RealizabilityCell,
    RealizabilityMatrix, SIZES,
};
pub use strata::{formula_ledger, strata_rows, FormulaLedger, StratumRow};
pub use witness::{Witness, WitnessSource};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Qe(#[from] QeError),
    #[error("{0}")]
    Range(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogReport {
    pub picard_rows: Vec<RowReport>,
    pub negative_control: RowReport,
    pub strata: Vec<StratumRow>,
    pub formula_ledger: Vec<FormulaLedger>,
    pub basechange: Vec<BaseChangeCertificate>,
    pub matrix: RealizabilityMatrix,
    pub failures: Vec<String>,
    pub passed: bool,
}

/// Run every check of the catalog. Failures are collected, not raised.
pub fn verify_catalog() -> Result<CatalogReport, CatalogError> {
    let mut failures = Vec::new();
    let picard_rows: Vec<RowReport> = picard_rows().iter().map(verify_row).collect();
    for r in &picard_rows {
        failures.extend(r.failures.iter().cloned());
    }
    let negative_control = verify_row(&negative_control());
    if negative_control.passed {
        failures.push("negative control U+~A1^20 at sigma = 10 passed".into());
    }
    let strata = strata_rows();
    for r in &strata {
        if let Err(e) = r.validate() {
            failures.push(e.to_string());
        }
    }
    let formula_ledger = SIZES
        .iter()
        .map(|&n| formula_ledger(n))
        .collect::<Result<Vec<_>, _>>()?;
    let basechange = (1..=9)
        .map(n12_basechange_certificate)
        .collect::<Result<Vec<_>, _>>()?;
    let matrix = realizability_matrix()?;
    if matrix.impossible() != vec![(8, 10), (16, 10), (20, 1)] {
        failures.push(format!("impossible cells {:?}", matrix.impossible()));
    }
    for c in matrix.cells.iter().filter(|c| !c.verified()) {
        failures.push(format!("cell ({}, {}) is not verified", c.n, c.sigma));
    }
    Ok(CatalogReport {
        picard_rows,
        negative_control,
        strata,
        formula_ledger,
        basechange,
        matrix,
        passed: failures.is_empty(),
        failures,
    })
}
