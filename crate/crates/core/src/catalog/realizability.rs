//! Which sizes `n` of 2-divisible sets of disjoint (-2)-curves occur for
//! which Artin invariant, with a checked witness or proof for every cell.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::basechange::n12_basechange_certificate;
use super::impossibility::{
    impossibility_sigma10, sigma_one_filter, ArithmeticFilter, ImpossibilityTrace,
};
use super::picard_rows::{apply_criterion, picard_row};
use super::witness::{Frame, Witness, WitnessSource};
use super::CatalogError;
use crate::lattice::{parse_expr, Atom};
use crate::qe::{PicardModel, SectionKind};

pub const SIZES: [usize; 4] = [8, 12, 16, 20];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CellStatus {
    #[serde(rename = "realizable")]
    Realizable,
    #[serde(rename = "impossible")]
    Impossible,
    #[serde(rename = "impossible (external)")]
    ImpossibleExternal,
}

impl CellStatus {
    pub fn label(self) -> &'static str {
        match self {
            CellStatus::Realizable => "realizable",
            CellStatus::Impossible => "impossible",
            CellStatus::ImpossibleExternal => "impossible (external)",
        }
    }

    pub fn is_realizable(self) -> bool {
        self == CellStatus::Realizable
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    Witness(Witness),
    Trace(ImpossibilityTrace),
    External {
        filter: ArithmeticFilter,
        citation: String,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct RealizabilityCell {
    pub n: usize,
    pub sigma: u32,
    pub status: CellStatus,
    pub evidence: Evidence,
}

impl RealizabilityCell {
    /// Whether the evidence was checked by this library. The external
    /// citation counts as checked when its arithmetic filter is.
    pub fn verified(&self) -> bool {
        match &self.evidence {
            Evidence::Witness(w) => w.verified,
            Evidence::Trace(t) => t.verified,
            Evidence::External { filter, .. } => filter.verified,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RealizabilityMatrix {
    pub cells: Vec<RealizabilityCell>,
}

impl RealizabilityMatrix {
    pub fn cell(&self, n: usize, sigma: u32) -> Option<&RealizabilityCell> {
        self.cells.iter().find(|c| c.n == n && c.sigma == sigma)
    }

    /// Cells that are not realizable, as `(n, sigma)`.
    pub fn impossible(&self) -> Vec<(usize, u32)> {
        self.cells
            .iter()
            .filter(|c| !c.status.is_realizable())
            .map(|c| (c.n, c.sigma))
            .collect()
    }

    pub fn all_verified(&self) -> bool {
        self.cells.iter().all(RealizabilityCell::verified)
    }
}

fn criterion_witness(n: usize, sigma: u32) -> Result<Option<Witness>, CatalogError> {
    let Some(row) = picard_row(sigma) else {
        return Ok(None);
    };
    for d in &row.decompositions {
        if let Some(w) = apply_criterion(&parse_expr(d)?)?.witness(n) {
            return Ok(Some(w.clone()));
        }
    }
    Ok(None)
}

fn model_witness(
    model: &PicardModel,
    labels: &[String],
    lattice: &str,
    note: String,
    source: WitnessSource,
) -> Result<Witness, CatalogError> {
    let frame = Frame::new(
        model.ambient().clone(),
        model.generated().basis(),
        model.labels.clone(),
    )?;
    let mut comps = Vec::new();
    for l in labels {
        let v = match l.strip_suffix('\'') {
            // C' = F - C
            Some(c) => {
                let mut v = model.basis_vector("F").unwrap();
                for (x, y) in v.iter_mut().zip(model.basis_vector(c).unwrap()) {
                    *x -= y;
                }
                v
            }
            None => model.basis_vector(l).unwrap(),
        };
        comps.push(v);
    }
    frame.witness(source, lattice, labels.to_vec(), &comps, note)
}

fn fibration_witness(sigma: u32) -> Result<Option<Witness>, CatalogError> {
    if (3..=9).contains(&sigma) {
        let model = PicardModel::build(0, 0, SectionKind::Section)?;
        let labels: Vec<String> = (1..=20).map(|j| format!("C{j}")).collect();
        let note = "20 fibers of type III and the 2-torsion section P = O + 5F - 1/2 (C1 + ... + C20); \
                    the relation persists in every overlattice, so in every member of the stratum down to sigma = 3"
            .to_string();
        return model_witness(
            &model,
            &labels,
            "quasi-elliptic model, 20 III",
            note,
            WitnessSource::Fibration,
        )
        .map(Some);
    }
    if sigma == 2 {
        let model = PicardModel::build(1, 1, SectionKind::Section)?;
        let mut labels: Vec<String> = (1..=4).map(|j| format!("E{j}")).collect();
        labels.push("C1'".into());
        labels.extend((2..=16).map(|j| format!("C{j}")));
        let note = "tails of the I0* fiber, the other half C1' = F - C1 of one III fiber and the remaining \
                    III components; valid in every overlattice of the model"
            .to_string();
        return model_witness(
            &model,
            &labels,
            "quasi-elliptic model, 16 III + 1 I0*",
            note,
            WitnessSource::Fibration,
        )
        .map(Some);
    }
    Ok(None)
}

/// The four simple components of `j` fibers of type I0* inside a
/// decomposition `U(l) + D4^j + ...`: the identity component `F - (highest
/// root)` and the three outer nodes of each `D4`.
fn decomposition_tails(n: usize, sigma: u32) -> Result<Option<Witness>, CatalogError> {
    let j = n / 4;
    let Some(row) = picard_row(sigma) else {
        return Ok(None);
    };
    for d in &row.decompositions {
        let e = parse_expr(d)?.elaborate()?;
        let Some(u) = e.blocks.iter().find(|b| b.atom == Atom::U) else {
            continue;
        };
        let d4: Vec<_> = e
            .blocks
            .iter()
            .filter(|b| b.atom == Atom::D(4) && b.twist == 1)
            .take(j)
            .collect();
        if d4.len() < j {
            continue;
        }
        let frame = Frame::of_elaborated(&e)?;
        let dim = frame.dim();
        let unit = |i: usize| super::witness::unit(dim, i);
        let mut comps = Vec::new();
        let mut names = Vec::new();
        for (f, b) in d4.iter().enumerate() {
            let mut theta0 = unit(u.start);
            for (node, mult) in [(0, 1), (1, 2), (2, 1), (3, 1)] {
                theta0[b.start + node] -= BigRational::from_integer(BigInt::from(mult));
            }
            comps.push(theta0);
            names.push(format!("D4#{} N0'", f + 1));
            for node in [0, 2, 3] {
                comps.push(unit(b.start + node));
                names.push(format!("D4#{} N{node}", f + 1));
            }
        }
        let note = format!("simple components of {j} fibers of type I0* with fiber class the isotropic vector of U(l)");
        return frame
            .witness(
                WitnessSource::NonreducedFibers,
                d.clone(),
                names,
                &comps,
                note,
            )
            .map(Some);
    }
    Ok(None)
}

fn stratum_tails(n: usize, sigma: u32) -> Result<Option<Witness>, CatalogError> {
    if sigma > 5 {
        return Ok(None);
    }
    let model = PicardModel::build(5, 5, SectionKind::Section)?;
    let labels: Vec<String> = (1..=n).map(|j| format!("E{j}")).collect();
    let note = format!(
        "tails of {} of the five I0* fibers; members of this stratum have sigma = 5 - r for r = 0..4",
        n / 4
    );
    model_witness(
        &model,
        &labels,
        "quasi-elliptic model, 5 I0*",
        note,
        WitnessSource::NonreducedFibers,
    )
    .map(Some)
}

const SIGMA_ONE_CITATION: &str = "the supersingular K3 surface of Artin invariant 1 carries no 20 disjoint \
    (-2)-curves (Shimada's classification of elliptic and quasi-elliptic fibrations on this surface); not re-derived here";

/// Evidence for one cell, in the order Criterion, fibration, non-reduced
/// fibers, base change.
pub fn realizability_cell(n: usize, sigma: u32) -> Result<RealizabilityCell, CatalogError> {
    if !SIZES.contains(&n) || !(1..=10).contains(&sigma) {
        return Err(CatalogError::Range(format!(
            "cell ({n}, {sigma}) is outside n in {{8,12,16,20}}, sigma in 1..=10"
        )));
    }
    let realizable = |w: Witness| RealizabilityCell {
        n,
        sigma,
        status: CellStatus::Realizable,
        evidence: Evidence::Witness(w),
    };
    if let Some(w) = criterion_witness(n, sigma)? {
        return Ok(realizable(w));
    }
    if n == 20 {
        if let Some(w) = fibration_witness(sigma)? {
            return Ok(realizable(w));
        }
    }
    if n == 8 || n == 16 {
        if let Some(w) = decomposition_tails(n, sigma)?
            .map_or_else(|| stratum_tails(n, sigma), |w| Ok(Some(w)))?
        {
            return Ok(realizable(w));
        }
    }
    if n == 12 && sigma <= 9 {
        return Ok(realizable(n12_basechange_certificate(sigma)?.witness));
    }
    if sigma == 10 && (n == 8 || n == 16) {
        let trace = impossibility_sigma10(n)?;
        return Ok(RealizabilityCell {
            n,
            sigma,
            status: CellStatus::Impossible,
            evidence: Evidence::Trace(trace),
        });
    }
    if (n, sigma) == (20, 1) {
        return Ok(RealizabilityCell {
            n,
            sigma,
            status: CellStatus::ImpossibleExternal,
            evidence: Evidence::External {
                filter: sigma_one_filter(),
                citation: SIGMA_ONE_CITATION.into(),
            },
        });
    }
    Err(CatalogError::Verification(format!(
        "no witness or proof for cell ({n}, {sigma})"
    )))
}

pub fn realizability_matrix() -> Result<RealizabilityMatrix, CatalogError> {
    let mut cells = Vec::with_capacity(40);
    for n in SIZES {
        for sigma in 1..=10 {
            cells.push(realizability_cell(n, sigma)?);
        }
    }
    Ok(RealizabilityMatrix { cells })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pattern() {
        let m = realizability_matrix().unwrap();
        assert_eq!(m.cells.len(), 40);
        assert_eq!(m.impossible(), vec![(8, 10), (16, 10), (20, 1)]);
        assert_eq!(
            m.cell(20, 1).unwrap().status,
            CellStatus::ImpossibleExternal
        );
        assert!(m.all_verified());
    }

    #[test]
    fn sources() {
        let source = |n, s| match &realizability_cell(n, s).unwrap().evidence {
            Evidence::Witness(w) => Some(w.source),
            _ => None,
        };
        assert_eq!(source(20, 10), Some(WitnessSource::Criterion));
        assert_eq!(source(20, 5), Some(WitnessSource::Fibration));
        assert_eq!(source(20, 2), Some(WitnessSource::Fibration));
        assert_eq!(source(16, 6), Some(WitnessSource::NonreducedFibers));
        assert_eq!(source(8, 1), Some(WitnessSource::NonreducedFibers));
        assert_eq!(source(12, 3), Some(WitnessSource::BaseChange));
        assert_eq!(source(12, 10), Some(WitnessSource::Criterion));
        assert_eq!(source(16, 7), Some(WitnessSource::Criterion));
    }
}
