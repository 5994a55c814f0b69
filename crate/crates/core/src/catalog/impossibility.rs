//! Integer-arithmetic proofs that a cell of the `(n, sigma)` matrix is empty.

use serde::Serialize;

use super::strata::strata_rows;
use super::CatalogError;
use crate::lattice::{build_lattice, discriminant_form, even_unimodular_admissible};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "!=")]
    Ne,
}

/// One integer comparison, evaluated when it is constructed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub statement: String,
    pub lhs: i64,
    pub relation: Relation,
    pub rhs: i64,
    pub holds: bool,
}

impl Check {
    pub fn new(statement: impl Into<String>, lhs: i64, relation: Relation, rhs: i64) -> Self {
        let holds = match relation {
            Relation::Lt => lhs < rhs,
            Relation::Eq => lhs == rhs,
            Relation::Ne => lhs != rhs,
        };
        Check {
            statement: statement.into(),
            lhs,
            relation,
            rhs,
            holds,
        }
    }

    /// Re-evaluate from the stored integers.
    pub fn recheck(&self) -> bool {
        Check::new(self.statement.clone(), self.lhs, self.relation, self.rhs).holds == self.holds
            && self.holds
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceStep {
    pub case: String,
    pub checks: Vec<Check>,
    pub conclusion: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ImpossibilityTrace {
    pub n: usize,
    pub sigma: u32,
    /// Lengths computed from the lattices themselves.
    pub setup: Vec<Check>,
    pub steps: Vec<TraceStep>,
    pub verified: bool,
}

fn length_of(expr: &str) -> Result<i64, CatalogError> {
    Ok(discriminant_form(&build_lattice(expr)?.lattice).length as i64)
}

/// No `~A1^n` (n = 8, 16) embeds into `U(2) + ~A1^20`, the lattice of
/// Artin invariant 10. Three cases: an orthogonal splitting, a primitive
/// embedding with gluing, a non-primitive embedding.
pub fn impossibility_sigma10(n: usize) -> Result<ImpossibilityTrace, CatalogError> {
    if n != 8 && n != 16 {
        return Err(CatalogError::Range(format!(
            "n = {n}: an impossibility trace exists only for n = 8 and n = 16 at sigma = 10"
        )));
    }
    let ni = n as i64;
    let l_len = length_of(&format!("~A1^{n}"))?;
    let pic_len = length_of("U(2)+~A1^20")?;
    let setup = vec![
        Check::new(
            format!("length of the discriminant group of ~A1^{n} is n - 2"),
            l_len,
            Relation::Eq,
            ni - 2,
        ),
        Check::new(
            "length of the discriminant group of U(2)+~A1^20",
            pic_len,
            Relation::Eq,
            20,
        ),
    ];

    // (a) Pic = L + L^perp: L^perp is 2-elementary of full length and type I,
    // so L^perp(1/2) is even unimodular of signature (1, 21 - n).
    let (p, q) = (1usize, 21 - n);
    let admissible = even_unimodular_admissible(p, q);
    let a = TraceStep {
        case: "L + L^perp = Pic".into(),
        checks: vec![
            Check::new(
                format!("length of L^perp equals its rank 22 - n = {}", 22 - n),
                pic_len - l_len,
                Relation::Eq,
                22 - ni,
            ),
            Check::new(
                format!("signature of L^perp(1/2) is (1,{q}): p - q mod 8"),
                (p as i64 - q as i64).rem_euclid(8),
                Relation::Ne,
                0,
            ),
            Check::new(
                format!("even unimodular lattice of signature (1,{q}) exists"),
                admissible as i64,
                Relation::Eq,
                0,
            ),
        ],
        conclusion: format!("no even unimodular lattice of signature (1,{q}): contradiction"),
    };

    // (b) primitive with glue group (Z/2)^m, 0 < m <= min(n - 2, 22 - n).
    let m_max = (ni - 2).min(22 - ni);
    let b = TraceStep {
        case: "L + L^perp strictly inside Pic".into(),
        checks: (1..=m_max)
            .map(|m| {
                let bound = (ni - 2 - m) + (22 - ni);
                Check::new(
                    format!("m = {m}: length <= (n - 2 - m) + (22 - n) = {bound} < 20"),
                    bound,
                    Relation::Lt,
                    20,
                )
            })
            .collect(),
        conclusion: format!("every glue rank 1..={m_max} leaves length below 20: contradiction"),
    };

    // (c) non-primitive: the closure L' has length m < n - 2.
    let c = TraceStep {
        case: "L not primitive".into(),
        checks: (0..ni - 2)
            .map(|m| {
                let bound = m + (22 - ni);
                Check::new(
                    format!("m = {m}: 20 <= m + rank(L^perp) = 22 + (m - n) = {bound} fails"),
                    bound,
                    Relation::Lt,
                    20,
                )
            })
            .collect(),
        conclusion: "22 + (m - n) < 20 for every m < n - 2: contradiction".into(),
    };

    let steps = vec![a, b, c];
    let verified = setup
        .iter()
        .chain(steps.iter().flat_map(|s| &s.checks))
        .all(Check::recheck);
    Ok(ImpossibilityTrace {
        n,
        sigma: 10,
        setup,
        steps,
        verified,
    })
}

/// Why no quasi-elliptic fibration can supply 20 curves at `sigma = 1`:
/// every stratum reaching `sigma = 1` has no fiber of type III.
#[derive(Clone, Debug, Serialize)]
pub struct ArithmeticFilter {
    pub sigma: u32,
    pub checks: Vec<Check>,
    pub conclusion: String,
    pub verified: bool,
}

pub fn sigma_one_filter() -> ArithmeticFilter {
    let mut checks = Vec::new();
    for row in strata_rows() {
        for (sigma, r) in row.members() {
            if sigma != 1 {
                continue;
            }
            checks.push(Check::new(
                format!("l = {}, r = {r}: sigma = 10 - l - r", row.n_i0star),
                10 - row.n_i0star as i64 - r as i64,
                Relation::Eq,
                1,
            ));
            checks.push(Check::new(
                format!("l = {}: r <= 4", row.n_i0star),
                r as i64,
                Relation::Lt,
                5,
            ));
            checks.push(Check::new(
                format!("l = {}: number of III fibers", row.n_i0star),
                row.n_iii as i64,
                Relation::Eq,
                0,
            ));
        }
    }
    let verified = !checks.is_empty() && checks.iter().all(Check::recheck);
    ArithmeticFilter {
        sigma: 1,
        checks,
        conclusion: "only l = 5 reaches sigma = 1, so no III components exist and no fibration certificate for n = 20".into(),
        verified,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_ten_traces() {
        let t = impossibility_sigma10(8).unwrap();
        assert!(t.verified);
        assert!(t.steps[0].checks[2].statement.contains("(1,13)"));
        assert_eq!(t.steps[0].checks[1].lhs, 4);
        assert_eq!(t.steps[1].checks.len(), 6);
        let t = impossibility_sigma10(16).unwrap();
        assert!(t.verified);
        assert!(t.steps[0].checks[2].statement.contains("(1,5)"));
        assert_eq!(t.steps[2].checks.len(), 14);
        assert!(impossibility_sigma10(12).is_err());
    }

    #[test]
    fn filter() {
        let f = sigma_one_filter();
        assert!(f.verified);
        assert_eq!(f.checks.len(), 3);
    }
}
