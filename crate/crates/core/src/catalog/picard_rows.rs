//! Orthogonal decompositions of the Picard lattices of supersingular K3
//! surfaces, one row per Artin invariant, and the glued-block criterion.

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::witness::{Frame, Witness, WitnessSource};
use super::CatalogError;
use crate::lattice::matrix::int_to_rat;
use crate::lattice::{discriminant_form, parse_expr, Atom, LatticeExpr};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PicardTableRow {
    pub sigma: u32,
    pub decompositions: Vec<String>,
}

const ROWS: [(u32, &[&str]); 10] = [
    (10, &["U(2)+~A1^20", "U(2)+E8(2)+~A1^12"]),
    (
        9,
        &[
            "U+~A1^20",
            "U+E8(2)+~A1^12",
            "U(2)+D4+~A1^16",
            "U(2)+D4+E8(2)+~A1^8",
        ],
    ),
    (8, &["U(2)+D4+D4+~A1^12", "U+D4+~A1^16", "U+D4+E8(2)+~A1^8"]),
    (7, &["U+D4+D4+~A1^12", "U+D4+~A1^8+~A1^8"]),
    (6, &["U+D8+~A1^12", "U(2)+D4+D8+~A1^8", "U(2)+D4^5"]),
    (5, &["U+E8+~A1^12", "U+D4+D8+~A1^8", "U+D4^5"]),
    (4, &["U+D4+E8+~A1^8"]),
    (3, &["U+D4+D8+D8"]),
    (2, &["U+D4+D8+E8"]),
    (1, &["U+D4+E8^2"]),
];

/// All ten rows, `sigma = 10` first.
pub fn picard_rows() -> Vec<PicardTableRow> {
    ROWS.iter()
        .map(|(sigma, ds)| PicardTableRow {
            sigma: *sigma,
            decompositions: ds.iter().map(|s| s.to_string()).collect(),
        })
        .collect()
}

pub fn picard_row(sigma: u32) -> Option<PicardTableRow> {
    picard_rows().into_iter().find(|r| r.sigma == sigma)
}

/// A deliberately wrong row: `U + ~A1^20` has `sigma = 9`.
pub fn negative_control() -> PicardTableRow {
    PicardTableRow {
        sigma: 10,
        decompositions: vec!["U+~A1^20".into()],
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    pub expr: String,
    pub rank: usize,
    pub signature: (usize, usize),
    pub invariant_factors: Vec<String>,
    pub length: usize,
    pub type_i: Option<bool>,
    pub gauss_signature: Option<u8>,
    /// Gauss signature agrees with `p - q mod 8`.
    pub milgram: bool,
    pub failures: Vec<String>,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RowReport {
    pub sigma: u32,
    pub decompositions: Vec<DecompositionReport>,
    pub gauss_consistent: bool,
    pub failures: Vec<String>,
    pub passed: bool,
}

fn check_decomposition(sigma: u32, text: &str) -> DecompositionReport {
    let mut failures = Vec::new();
    let elaborated = match parse_expr(text).and_then(|e| e.elaborate()) {
        Ok(e) => e,
        Err(e) => {
            return DecompositionReport {
                expr: text.into(),
                rank: 0,
                signature: (0, 0),
                invariant_factors: Vec::new(),
                length: 0,
                type_i: None,
                gauss_signature: None,
                milgram: false,
                failures: vec![format!("{text}: {e}")],
                ok: false,
            }
        }
    };
    let l = &elaborated.lattice;
    let form = discriminant_form(l);
    let (p, q) = l.signature();
    let gauss = form.gauss_signature.map(|g| g.value);
    let milgram = gauss == Some(((p as i64 - q as i64).rem_euclid(8)) as u8);
    if l.rank() != 22 {
        failures.push(format!("{text}: rank {} != 22", l.rank()));
    }
    if (p, q) != (1, 21) {
        failures.push(format!("{text}: signature ({p},{q}) != (1,21)"));
    }
    if !form.is_two_elementary() {
        failures.push(format!("{text}: discriminant group is not 2-elementary"));
    }
    if form.length != 2 * sigma as usize {
        failures.push(format!("{text}: length {} != {}", form.length, 2 * sigma));
    }
    if form.type_i != Some(true) {
        failures.push(format!("{text}: discriminant form is not of type I"));
    }
    if !milgram {
        failures.push(format!(
            "{text}: Gauss signature {gauss:?} does not match p - q mod 8"
        ));
    }
    DecompositionReport {
        expr: text.into(),
        rank: l.rank(),
        signature: (p, q),
        invariant_factors: form
            .invariant_factors
            .iter()
            .map(|d| d.to_string())
            .collect(),
        length: form.length,
        type_i: form.type_i,
        gauss_signature: gauss,
        milgram,
        ok: failures.is_empty(),
        failures,
    }
}

/// Rank 22, signature `(1,21)`, discriminant group `(Z/2)^(2 sigma)` of
/// type I, and one Gauss signature across the row.
pub fn verify_row(row: &PicardTableRow) -> RowReport {
    let decompositions: Vec<DecompositionReport> = row
        .decompositions
        .iter()
        .map(|d| check_decomposition(row.sigma, d))
        .collect();
    let mut failures: Vec<String> = decompositions
        .iter()
        .flat_map(|d| d.failures.clone())
        .collect();
    let first = decompositions.first().and_then(|d| d.gauss_signature);
    let gauss_consistent =
        first.is_some() && decompositions.iter().all(|d| d.gauss_signature == first);
    if !gauss_consistent {
        failures.push(format!(
            "sigma = {}: Gauss signatures differ across the row",
            row.sigma
        ));
    }
    RowReport {
        sigma: row.sigma,
        decompositions,
        gauss_consistent,
        passed: failures.is_empty(),
        failures,
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CriterionOutcome {
    Applicable { witnesses: Vec<Witness> },
    Inapplicable { reason: String },
}

impl CriterionOutcome {
    pub fn witness(&self, n: usize) -> Option<&Witness> {
        match self {
            CriterionOutcome::Applicable { witnesses } => witnesses.iter().find(|w| w.n == n),
            CriterionOutcome::Inapplicable { .. } => None,
        }
    }
}

/// Given `U(l) + ~A1^(4m) + ...`, the roots `e_i` of the glued block are
/// disjoint (-2)-classes with `(e_1 + ... + e_4m)/2 = delta_4m` in the
/// lattice. Several glued blocks may be combined; one witness per `n`.
pub fn apply_criterion(expr: &LatticeExpr) -> Result<CriterionOutcome, CatalogError> {
    let e = expr.elaborate()?;
    if !e.blocks.iter().any(|b| b.atom == Atom::U) {
        return Ok(CriterionOutcome::Inapplicable {
            reason: format!("{expr} has no U(l) summand"),
        });
    }
    let glued: Vec<usize> = (0..e.blocks.len())
        .filter(|&i| matches!(e.blocks[i].atom, Atom::GluedA1(_)) && e.blocks[i].twist == 1)
        .collect();
    if glued.is_empty() {
        return Ok(CriterionOutcome::Inapplicable {
            reason: format!("{expr} has no ~A1^(4m) summand"),
        });
    }
    let frame = Frame::of_elaborated(&e)?;
    let dim = frame.dim();
    let mut witnesses: Vec<Witness> = Vec::new();
    for mask in 1u32..(1 << glued.len()) {
        let chosen: Vec<usize> = glued
            .iter()
            .enumerate()
            .filter(|(j, _)| mask >> j & 1 == 1)
            .map(|(_, &b)| b)
            .collect();
        let mut components = Vec::new();
        let mut names = Vec::new();
        let mut delta = vec![BigRational::zero(); dim];
        for &b in &chosen {
            let block_no = glued.iter().position(|&g| g == b).unwrap() + 1;
            for (i, root) in e.glued_roots(b).unwrap().iter().enumerate() {
                components.push(int_to_rat(root));
                names.push(format!("{}#{block_no} e{}", e.blocks[b].atom, i + 1));
            }
            for (d, g) in delta.iter_mut().zip(int_to_rat(&e.glue_vector(b).unwrap())) {
                *d += g;
            }
        }
        if witnesses.iter().any(|w| w.n == components.len()) {
            continue;
        }
        let note = if chosen.len() == 1 {
            format!(
                "U(l) + {} summand; half the sum is the glue vector delta",
                e.blocks[chosen[0]].atom
            )
        } else {
            format!(
                "{} glued summands; half the sum is the sum of their glue vectors",
                chosen.len()
            )
        };
        let w = frame.witness(
            WitnessSource::Criterion,
            expr.to_string(),
            names,
            &components,
            note,
        )?;
        if w.half != frame.render(&delta) {
            return Err(CatalogError::Verification(format!(
                "half {} differs from the glue vector {}",
                w.half,
                frame.render(&delta)
            )));
        }
        witnesses.push(w);
    }
    witnesses.sort_by_key(|w| w.n);
    Ok(CriterionOutcome::Applicable { witnesses })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_match_the_table() {
        let rows = picard_rows();
        assert_eq!(rows.len(), 10);
        assert_eq!(
            rows[0].decompositions,
            vec!["U(2)+~A1^20", "U(2)+E8(2)+~A1^12"]
        );
        assert_eq!(picard_row(1).unwrap().decompositions, vec!["U+D4+E8^2"]);
        assert_eq!(picard_row(5).unwrap().decompositions.len(), 3);
        for r in &rows {
            for d in &r.decompositions {
                assert_eq!(parse_expr(d).unwrap().rank(), 22, "{d}");
            }
        }
    }

    #[test]
    fn verify_small_rows() {
        for sigma in [1, 2, 3, 9] {
            let rep = verify_row(&picard_row(sigma).unwrap());
            assert!(rep.passed, "{:?}", rep.failures);
        }
        let rep = verify_row(&picard_row(9).unwrap());
        assert!(rep.decompositions.iter().all(|d| d.length == 18));
    }

    #[test]
    fn negative_control_fails() {
        let rep = verify_row(&negative_control());
        assert!(!rep.passed);
        assert_eq!(rep.decompositions[0].length, 18);
        assert!(rep.failures[0].contains("length 18 != 20"));
    }

    #[test]
    fn criterion() {
        let out = apply_criterion(&parse_expr("U(2)+~A1^20").unwrap()).unwrap();
        let w = out.witness(20).unwrap();
        assert!(w.verified);
        assert_eq!(w.components.len(), 20);
        let out = apply_criterion(&parse_expr("U(2)+E8(2)+~A1^12").unwrap()).unwrap();
        assert!(out.witness(12).is_some());
        let out = apply_criterion(&parse_expr("U+D4+E8^2").unwrap()).unwrap();
        assert!(matches!(out, CriterionOutcome::Inapplicable { .. }));
        let out = apply_criterion(&parse_expr("U+D4+~A1^8+~A1^8").unwrap()).unwrap();
        assert!(out.witness(8).is_some() && out.witness(16).is_some());
    }
}
