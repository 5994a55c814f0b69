//! Full analysis of Weierstrass data: fibers, the invariants `l`, `r`,
//! `sigma`, the height ledger and the certified 2-divisible divisors.

use serde::Serialize;

use super::height::{height_ledger as height_ledger_of, LedgerJson};
use super::model::{CertificateJson, PicardModel, SectionKind};
use super::weierstrass::{FiberDatum, FiberType, WeierstrassQE};
use super::QeError;

/// `sigma = 10 - l - r`.
pub fn ito_sigma(ell: u32, r: u32) -> Result<u32, QeError> {
    if ell > 5 {
        return Err(QeError::Range(format!("l = {ell} exceeds 5")));
    }
    match 10i64 - ell as i64 - r as i64 {
        s if s >= 1 => Ok(s as u32),
        s => Err(QeError::Range(format!(
            "sigma = 10 - {ell} - {r} = {s} is below 1"
        ))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfigurationVerdict {
    pub valid: bool,
    pub ell: usize,
    pub n_iii: usize,
    /// Size of the 2-divisible configuration the fibers force.
    pub forced_n: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

/// Parse a fiber list such as `"4 I0*, 4 III"` or `"III III I0*"`.
pub fn parse_fibers(text: &str) -> Result<Vec<FiberType>, QeError> {
    let mut out = Vec::new();
    let mut count: Option<usize> = None;
    for tok in text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
    {
        if let Ok(n) = tok.trim_end_matches('x').parse::<usize>() {
            if count.is_some() {
                return Err(QeError::InvalidConfiguration(format!(
                    "two counts in a row near {tok:?}"
                )));
            }
            count = Some(n);
            continue;
        }
        let (n, ty) = match tok.split_once('x') {
            Some((n, ty)) if n.parse::<usize>().is_ok() => (n.parse().ok(), ty),
            _ => (None, tok),
        };
        let fiber = match ty.to_ascii_uppercase().as_str() {
            "III" => FiberType::III,
            "I0*" | "I_0*" | "I0STAR" => FiberType::I0Star,
            _ => {
                return Err(QeError::InvalidConfiguration(format!(
                    "unknown fiber type {ty:?}; expected III or I0*"
                )))
            }
        };
        let n = n.or(count.take()).unwrap_or(1);
        out.extend(std::iter::repeat_n(fiber, n));
    }
    if count.is_some() {
        return Err(QeError::InvalidConfiguration(
            "trailing count without a fiber type".into(),
        ));
    }
    Ok(out)
}

/// Check a multiset of fibers: the discriminant degrees must add to 20,
/// four I0* fibers never occur, and the forced 2-divisible divisor must
/// have 8, 12, 16 or 20 components.
pub fn validate_configuration(fibers: &[FiberType], kind: SectionKind) -> ConfigurationVerdict {
    let ell = fibers.iter().filter(|f| **f == FiberType::I0Star).count();
    let n_iii = fibers.len() - ell;
    let mut verdict = ConfigurationVerdict {
        valid: false,
        ell,
        n_iii,
        forced_n: Vec::new(),
        reason: None,
    };
    let total = n_iii + 4 * ell;
    if total != 20 {
        verdict.reason = Some(format!(
            "valuations add up to {n_iii} + 4*{ell} = {total}, expected 20"
        ));
        return verdict;
    }
    if ell == 4 {
        verdict.reason = Some(
            "4 fibers of type I0* and 4 of type III: the sum of the four III components would be a \
             2-divisible set of 4 disjoint (-2)-curves, and n must be 8, 12, 16 or 20"
                .into(),
        );
        return verdict;
    }
    verdict.forced_n = match ell {
        5 => vec![8, 16],
        1 if kind == SectionKind::Section => vec![16, 20],
        _ => vec![n_iii],
    };
    if let Some(n) = verdict
        .forced_n
        .iter()
        .find(|n| ![8, 12, 16, 20].contains(*n))
    {
        verdict.reason = Some(format!(
            "forced divisor has {n} components, not in {{8, 12, 16, 20}}"
        ));
        return verdict;
    }
    verdict.valid = true;
    verdict
}

#[derive(Clone, Debug, Serialize)]
pub struct FiberJson {
    pub place: String,
    pub degree: usize,
    pub valuation: u32,
    #[serde(rename = "type")]
    pub fiber_type: FiberType,
    pub geometric_count: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SectionJson {
    pub x: String,
    pub y: String,
    pub identity_holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FibrationReport {
    pub field: String,
    pub phi: String,
    pub a: String,
    pub psi: String,
    pub discriminant: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub discriminant_fourth_root: Option<String>,
    pub fibers: Vec<FiberJson>,
    pub ell: usize,
    #[serde(rename = "n_III")]
    pub n_iii: usize,
    pub r: u32,
    /// `false` when only a general member has this `r` (five I0* fibers).
    pub r_exact: bool,
    pub sigma: u32,
    pub po: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub po_note: Option<String>,
    pub torsion_section: Option<SectionJson>,
    pub height_ledger: Option<LedgerJson>,
    pub certificates: Vec<CertificateJson>,
    pub infinity: String,
}

fn frac_poly(num: &crate::field::Poly, den: &crate::field::Poly) -> String {
    if den.is_one() {
        num.to_string()
    } else {
        format!("({num})/({den})")
    }
}

fn fiber_json(f: &FiberDatum) -> FiberJson {
    FiberJson {
        place: f.place.to_string(),
        degree: f.place.degree(),
        valuation: f.valuation,
        fiber_type: f.fiber_type,
        geometric_count: f.geometric_count,
    }
}

/// Everything that can be said about the fibration defined by `w`.
pub fn analyze(w: &WeierstrassQE) -> Result<FibrationReport, QeError> {
    let fibers = w.valuation_profile()?;
    let ell: usize = fibers
        .iter()
        .filter(|f| f.fiber_type == FiberType::I0Star)
        .map(|f| f.geometric_count)
        .sum();
    let n_iii: usize = fibers
        .iter()
        .filter(|f| f.fiber_type == FiberType::III)
        .map(|f| f.geometric_count)
        .sum();
    let total: usize = fibers
        .iter()
        .map(|f| f.geometric_count * f.valuation as usize)
        .sum();
    if total != 20 || n_iii != 20 - 4 * ell.min(5) {
        return Err(QeError::Inconsistent(format!(
            "fiber degrees add up to {total} with l = {ell}, n_III = {n_iii}"
        )));
    }
    let types: Vec<FiberType> = fibers
        .iter()
        .flat_map(|f| std::iter::repeat_n(f.fiber_type, f.geometric_count))
        .collect();
    let verdict = validate_configuration(&types, SectionKind::Section);
    if !verdict.valid {
        return Err(QeError::InvalidConfiguration(
            verdict.reason.unwrap_or_default(),
        ));
    }

    let has_section = !w.phi.is_zero();
    let (r, r_exact) = if has_section { (1, true) } else { (0, false) };
    let sigma = ito_sigma(ell as u32, r)?;

    let mut torsion_section = None;
    let mut po = None;
    let mut po_note = None;
    let mut height_ledger = None;
    if has_section {
        let p = w.torsion_section()?;
        torsion_section = Some(SectionJson {
            x: frac_poly(&p.x_num, &p.x_den),
            y: frac_poly(&p.y_num, &p.y_den),
            identity_holds: p.identity_holds,
        });
        match w.intersection_po() {
            Ok(v) => {
                height_ledger = Some(height_ledger_of(w)?.to_json());
                po = Some(v);
            }
            Err(QeError::GcdOutOfRange(g)) => {
                po_note = Some(format!(
                    "deg gcd(phi, psi) = {g}; (P.O) is not determined, certificates use xi"
                ));
            }
            Err(e) => return Err(e),
        }
    }

    let model = PicardModel::build(ell, ell, SectionKind::Section)?;
    let certificates = model
        .certificates(po)?
        .iter()
        .map(|c| c.to_json())
        .collect();
    let infinity = match w.discriminant().degree() {
        Some(d) if d < 20 => format!(
            "t -> 1/t with weights (3, 4, 5): v_inf(Delta) = 20 - {d} = {}",
            20 - d
        ),
        _ => "deg Delta = 20: no fiber at infinity".into(),
    };

    Ok(FibrationReport {
        field: w.field().to_string(),
        phi: w.phi.to_string(),
        a: w.a.to_string(),
        psi: w.psi.to_string(),
        discriminant: w.discriminant().to_string(),
        discriminant_fourth_root: w.discriminant_fourth_root().map(|p| p.to_string()),
        fibers: fibers.iter().map(fiber_json).collect(),
        ell,
        n_iii,
        r,
        r_exact,
        sigma,
        po,
        po_note,
        torsion_section,
        height_ledger,
        certificates,
        infinity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ito() {
        assert_eq!(ito_sigma(0, 1).unwrap(), 9);
        assert_eq!(ito_sigma(5, 0).unwrap(), 5);
        assert_eq!(ito_sigma(3, 1).unwrap(), 6);
        assert!(ito_sigma(5, 5).is_err());
        assert!(ito_sigma(6, 0).is_err());
    }

    #[test]
    fn configurations() {
        let v =
            validate_configuration(&parse_fibers("4 I0*, 4 III").unwrap(), SectionKind::Section);
        assert!(!v.valid);
        let v = validate_configuration(&parse_fibers("5 I0*").unwrap(), SectionKind::Section);
        assert!(v.valid);
        assert_eq!(v.forced_n, vec![8, 16]);
        let v = validate_configuration(
            &parse_fibers("1 I0*, 16 III").unwrap(),
            SectionKind::Section,
        );
        assert!(v.valid);
        let v =
            validate_configuration(&parse_fibers("3 I0*, 4 III").unwrap(), SectionKind::Section);
        assert!(!v.valid);
        assert_eq!(parse_fibers("III 2x I0*").unwrap().len(), 3);
        assert!(parse_fibers("I1*").is_err());
    }

    #[test]
    fn report_twenty_iii() {
        let w = WeierstrassQE::parse("gf2", "1", "0", "t^5+t^2+1").unwrap();
        let r = analyze(&w).unwrap();
        assert_eq!((r.ell, r.n_iii, r.r, r.sigma, r.po), (0, 20, 1, 9, Some(3)));
        assert_eq!(r.height_ledger.as_ref().unwrap().identity, "0 = 4 + 6 - 10");
        assert_eq!(r.certificates[0].n, 20);
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["height_ledger"]["entries"][0]["contribution"], "1/2");
    }

    #[test]
    fn report_five_i0star() {
        let w = WeierstrassQE::parse("gf2", "0", "t", "t^5+t^2+1").unwrap();
        let r = analyze(&w).unwrap();
        assert_eq!((r.ell, r.n_iii, r.r, r.sigma, r.po), (5, 0, 0, 5, None));
        assert!(r.torsion_section.is_none());
        assert_eq!(r.discriminant_fourth_root.as_deref(), Some("t^5+t^2+1"));
        assert_eq!(
            r.certificates.iter().map(|c| c.n).collect::<Vec<_>>(),
            vec![8, 16]
        );
    }

    #[test]
    fn report_one_i0star() {
        let w = WeierstrassQE::parse("gf2", "t", "0", "t^5+t^4+t").unwrap();
        let r = analyze(&w).unwrap();
        assert_eq!((r.ell, r.sigma, r.po), (1, 8, Some(2)));
        assert_eq!(
            r.certificates.iter().map(|c| c.n).collect::<Vec<_>>(),
            vec![16, 20]
        );
    }
}
