//! Strata of quasi-elliptic K3 surfaces by reducible fibers, and the
//! numerical invariants attached to a 2-divisible set of `n` curves.

use serde::Serialize;

use super::CatalogError;
use crate::qe::ito_sigma;

/// Fibers `n_iii` III and `n_i0star` I0*; general members have Artin
/// invariant in `sigma_min..=sigma_max` and `r = 10 - l - sigma`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StratumRow {
    pub sigma_min: u32,
    pub sigma_max: u32,
    pub n_iii: usize,
    pub n_i0star: usize,
    pub fibers: String,
    pub r: String,
}

impl StratumRow {
    /// `(sigma, r)` for every member of the row.
    pub fn members(&self) -> Vec<(u32, u32)> {
        (self.sigma_min..=self.sigma_max)
            .map(|s| (s, 10 - self.n_i0star as u32 - s))
            .collect()
    }

    /// `sigma + r + l = 10` with `ito_sigma` for each member.
    pub fn validate(&self) -> Result<(), CatalogError> {
        if self.n_iii + 4 * self.n_i0star != 20 {
            return Err(CatalogError::Verification(format!(
                "{}: degrees do not add to 20",
                self.fibers
            )));
        }
        for (sigma, r) in self.members() {
            if ito_sigma(self.n_i0star as u32, r)? != sigma {
                return Err(CatalogError::Verification(format!(
                    "{}: sigma {sigma} with r = {r}",
                    self.fibers
                )));
            }
        }
        Ok(())
    }
}

fn row(sigma_min: u32, sigma_max: u32, n_iii: usize, n_i0star: usize) -> StratumRow {
    let fibers = match (n_iii, n_i0star) {
        (a, 0) => format!("{a} III"),
        (0, b) => format!("{b} I0*"),
        (a, b) => format!("{a} III + {b} I0*"),
    };
    let r = if sigma_min == sigma_max {
        (10 - n_i0star as u32 - sigma_min).to_string()
    } else {
        format!("{} - sigma", 10 - n_i0star)
    };
    StratumRow {
        sigma_min,
        sigma_max,
        n_iii,
        n_i0star,
        fibers,
        r,
    }
}

pub fn strata_rows() -> Vec<StratumRow> {
    vec![
        row(9, 9, 20, 0),
        row(8, 8, 16, 1),
        row(7, 7, 12, 2),
        row(6, 6, 8, 3),
        row(1, 5, 0, 5),
    ]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormulaLedger {
    pub n: usize,
    /// `chi(O_Y) = 4 - n/4`.
    pub chi: i64,
    /// `deg <eta> = 24 - 2n`, shown when the conductrix can be empty.
    pub eta_iso_degree: Option<i64>,
    /// `A^2 = (n - 12)/2`, shown when the conductrix can be nonzero.
    pub conductrix_selfint: Option<i64>,
    /// `dim H^1(X, L^-1) = n/4 - 2`.
    pub h1: i64,
    pub eta_iso_degree_raw: i64,
    pub conductrix_selfint_raw: i64,
    pub cases: Vec<String>,
    /// `h0 - h1 + h2 = chi` with `h0 = h2 = 1`.
    pub euler_check: bool,
}

impl FormulaLedger {
    /// `(chi, deg eta, A^2, h1)` with `-` for a case that does not occur.
    pub fn row(&self) -> String {
        let show = |x: Option<i64>| x.map_or("-".to_string(), |v| v.to_string());
        format!(
            "({},{},{},{})",
            self.chi,
            show(self.eta_iso_degree),
            show(self.conductrix_selfint),
            self.h1
        )
    }
}

/// The empty-conductrix case needs `deg <eta> >= 0`, which leaves `n = 8,
/// 12`; the table lists the conductrix self-intersection for `n >= 12`.
pub fn formula_ledger(n: usize) -> Result<FormulaLedger, CatalogError> {
    if ![8, 12, 16, 20].contains(&n) {
        return Err(CatalogError::Range(format!(
            "n = {n}: n must be 8, 12, 16 or 20"
        )));
    }
    let ni = n as i64;
    let chi = 4 - ni / 4;
    let h1 = ni / 4 - 2;
    let eta = 24 - 2 * ni;
    let a2 = (ni - 12) / 2;
    let mut cases = Vec::new();
    let eta_iso_degree = (eta >= 0).then(|| {
        cases.push(format!("A = 0: deg <eta> = 24 - 2n = {eta}"));
        eta
    });
    let conductrix_selfint = (a2 >= 0).then(|| {
        cases.push(format!("A != 0: n - 2A^2 = 12 gives A^2 = {a2}"));
        a2
    });
    Ok(FormulaLedger {
        n,
        chi,
        eta_iso_degree,
        conductrix_selfint,
        h1,
        eta_iso_degree_raw: eta,
        conductrix_selfint_raw: a2,
        cases,
        euler_check: 1 - h1 + 1 == chi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strata() {
        let rows = strata_rows();
        assert_eq!(rows.len(), 5);
        for r in &rows {
            r.validate().unwrap();
        }
        assert_eq!(rows[3].fibers, "8 III + 3 I0*");
        assert_eq!(rows[4].r, "5 - sigma");
        assert_eq!(rows[4].members()[0], (1, 4));
    }

    #[test]
    fn ledger() {
        let rows: Vec<String> = [8, 12, 16, 20]
            .iter()
            .map(|&n| formula_ledger(n).unwrap().row())
            .collect();
        assert_eq!(
            rows,
            vec!["(2,8,-,0)", "(1,0,0,1)", "(0,-,2,2)", "(-1,-,4,3)"]
        );
        assert!(formula_ledger(20).unwrap().euler_check);
        let err = formula_ledger(4).unwrap_err().to_string();
        assert!(err.contains("n must be 8, 12, 16 or 20"));
    }
}
