//! Height of the 2-torsion section: `0 = h(P) = 4 + 2 (P.O) - sum contr_v(P)`.
//!
//! Contributions are `0` or `1/2` at III fibers and `0` or `1` at I0*
//! fibers. At I0* fibers the component is decided by the cusp test; the
//! III contributions are solved for so that the total vanishes.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::weierstrass::{FiberDatum, FiberType, WeierstrassQE};
use super::QeError;
use crate::json::frac;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LedgerEntry {
    pub place: String,
    pub fiber_type: FiberType,
    pub geometric_count: usize,
    /// contribution of each geometric fiber at this place
    pub contribution: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightLedger {
    pub po: u32,
    pub entries: Vec<LedgerEntry>,
    pub contributions: BigRational,
    pub total: BigRational,
}

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl HeightLedger {
    /// e.g. `0 = 4 + 6 - 10`
    pub fn display(&self) -> String {
        format!(
            "{} = 4 + {} - {}",
            frac(&self.total),
            2 * self.po,
            frac(&self.contributions)
        )
    }

    pub fn to_json(&self) -> LedgerJson {
        LedgerJson {
            po: self.po,
            entries: self
                .entries
                .iter()
                .map(|e| EntryJson {
                    place: e.place.clone(),
                    fiber_type: e.fiber_type,
                    geometric_count: e.geometric_count,
                    contribution: frac(&e.contribution),
                })
                .collect(),
            contributions: frac(&self.contributions),
            total: frac(&self.total),
            identity: self.display(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryJson {
    pub place: String,
    #[serde(rename = "type")]
    pub fiber_type: FiberType,
    pub geometric_count: usize,
    pub contribution: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct LedgerJson {
    pub po: u32,
    pub entries: Vec<EntryJson>,
    pub contributions: String,
    pub total: String,
    pub identity: String,
}

/// Solve the ledger from `(P.O)` and the fiber list, with contribution 0 at
/// every I0* fiber. The III contributions must all be `1/2`: the count of
/// halves needed, `2 (4 + 2 (P.O))`, has to equal the number of III fibers.
pub fn solve_height_ledger(po: u32, fibers: &[FiberDatum]) -> Result<HeightLedger, QeError> {
    let n_iii: usize = fibers
        .iter()
        .filter(|f| f.fiber_type == FiberType::III)
        .map(|f| f.geometric_count)
        .sum();
    let fixed = 4 + 2 * po as usize;
    let needed = 2 * fixed;
    if needed != n_iii {
        return Err(QeError::Inconsistent(format!(
            "4 + 2(P.O) = {fixed} needs {needed} III contributions of 1/2, but there are {n_iii} III fibers \
             and the section meets the non-identity component at each of them"
        )));
    }
    let entries: Vec<LedgerEntry> = fibers
        .iter()
        .map(|f| LedgerEntry {
            place: f.place.to_string(),
            fiber_type: f.fiber_type,
            geometric_count: f.geometric_count,
            contribution: match f.fiber_type {
                FiberType::III => r(1, 2),
                FiberType::I0Star => BigRational::zero(),
            },
        })
        .collect();
    let contributions = entries.iter().fold(BigRational::zero(), |acc, e| {
        acc + &e.contribution * BigRational::from_integer(e.geometric_count.into())
    });
    let total = BigRational::from_integer(fixed.into()) - &contributions;
    Ok(HeightLedger {
        po,
        entries,
        contributions,
        total,
    })
}

/// Ledger for Weierstrass data, with the I0* components from the cusp test
/// and the III contributions cross-checked against the reduction of the
/// section to the fiber singularity.
pub fn height_ledger(w: &WeierstrassQE) -> Result<HeightLedger, QeError> {
    let fibers = w.valuation_profile()?;
    let po = w.intersection_po()?;
    for f in &fibers {
        match f.fiber_type {
            FiberType::I0Star => {
                w.component_at_i0star(&f.place)?;
            }
            FiberType::III => {
                if !w.section_hits_fiber_singularity(&f.place)? {
                    return Err(QeError::Inconsistent(format!(
                        "section misses the singular point of the III fiber at {}",
                        f.place
                    )));
                }
            }
        }
    }
    solve_height_ledger(po, &fibers)
}
