//! Quasi-elliptic Weierstrass data `y^2 = x^3 + (t phi^2 + a^2) x + t psi^2`
//! over `GF(2^k)`.

use std::fmt;

use serde::Serialize;

use super::QeError;
use crate::field::{parse_field, parse_poly, poly_factor, Gf2k, Poly};

/// Weight of `phi`, `a`, `psi` under `t -> 1/t` (so that `c`, `d`, `Delta`
/// have weights 8, 12, 20).
const WEIGHTS: (usize, usize, usize) = (3, 4, 5);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeierstrassQE {
    pub phi: Poly,
    pub a: Poly,
    pub psi: Poly,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Place {
    /// Monic irreducible polynomial.
    Finite(Poly),
    Infinity,
}

impl Place {
    pub fn degree(&self) -> usize {
        match self {
            Place::Finite(p) => p.degree().unwrap(),
            Place::Infinity => 1,
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinity => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FiberType {
    #[serde(rename = "III")]
    III,
    #[serde(rename = "I0*")]
    I0Star,
}

impl fmt::Display for FiberType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberType::III => write!(f, "III"),
            FiberType::I0Star => write!(f, "I0*"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberDatum {
    pub place: Place,
    pub valuation: u32,
    pub fiber_type: FiberType,
    pub geometric_count: usize,
}

/// Outcome of the K3 checks; `reasons` lists every violated condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct K3Check {
    pub ok: bool,
    pub reasons: Vec<String>,
}

/// The 2-torsion section `(X/phi^2, Y/phi^3)` with `X = psi^2`,
/// `Y = psi^3 + a psi phi^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionP {
    pub x_num: Poly,
    pub x_den: Poly,
    pub y_num: Poly,
    pub y_den: Poly,
    /// `Y^2 = X^3 + c X phi^4 + d phi^6` holds identically.
    pub identity_holds: bool,
}

/// Component of an `I0*` fiber met by the torsion section. Meeting the
/// opposite component would put the section on the cusp, forcing
/// `l^3 | psi^2 + a phi^2` and hence `v(Delta) >= 6`, so it is reported as
/// an error instead.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Component {
    SameAsZero,
}

fn floor_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

impl WeierstrassQE {
    pub fn new(phi: Poly, a: Poly, psi: Poly) -> Self {
        WeierstrassQE { phi, a, psi }
    }

    pub fn parse(field: &str, phi: &str, a: &str, psi: &str) -> Result<Self, QeError> {
        let f = parse_field(field)?;
        Self::parse_in(f, phi, a, psi)
    }

    pub fn parse_in(f: Gf2k, phi: &str, a: &str, psi: &str) -> Result<Self, QeError> {
        Ok(WeierstrassQE {
            phi: parse_poly(phi, f)?,
            a: parse_poly(a, f)?,
            psi: parse_poly(psi, f)?,
        })
    }

    pub fn field(&self) -> Gf2k {
        self.phi.field()
    }

    /// `c = t phi^2 + a^2`
    pub fn c(&self) -> Poly {
        self.phi.square().shift(1).add(&self.a.square())
    }

    /// `d = t psi^2`
    pub fn d(&self) -> Poly {
        self.psi.square().shift(1)
    }

    /// `Delta = c phi^4 + psi^4 = t phi^6 + (psi^2 + a phi^2)^2`
    pub fn discriminant(&self) -> Poly {
        self.c().mul(&self.phi.pow(4)).add(&self.psi.pow(4))
    }

    /// `Delta = psi^4` exactly when `phi = 0`; the fourth root if it exists.
    pub fn discriminant_fourth_root(&self) -> Option<Poly> {
        self.discriminant().sqrt()?.sqrt()
    }

    /// `psi^2 + a phi^2`
    pub fn cusp_form(&self) -> Poly {
        self.psi.square().add(&self.a.mul(&self.phi.square()))
    }

    fn bounds_ok(&self) -> bool {
        let (wp, wa, ws) = WEIGHTS;
        self.phi.degree().is_none_or(|d| d <= wp)
            && self.a.degree().is_none_or(|d| d < wa)
            && self.psi.degree().is_none_or(|d| d <= ws)
    }

    /// Data in the coordinate `s = 1/t` at infinity, rescaled by the weights
    /// `(3, 4, 5)`; the same shape of equation in the variable `s`.
    pub fn at_infinity(&self) -> Option<WeierstrassQE> {
        if !self.bounds_ok() {
            return None;
        }
        let (wp, wa, ws) = WEIGHTS;
        Some(WeierstrassQE {
            phi: self.phi.reversed(wp),
            a: self.a.reversed(wa),
            psi: self.psi.reversed(ws),
        })
    }

    /// Equation and uniformizer for a place.
    fn chart(&self, place: &Place) -> Result<(WeierstrassQE, Poly), QeError> {
        match place {
            Place::Finite(p) => Ok((self.clone(), p.clone())),
            Place::Infinity => {
                let w = self
                    .at_infinity()
                    .ok_or_else(|| QeError::NotK3(vec!["degree bounds violated".into()]))?;
                Ok((w, Poly::t(self.field())))
            }
        }
    }

    pub fn is_k3(&self) -> K3Check {
        let mut reasons = Vec::new();
        let (c, d) = (self.c(), self.d());
        if let Some(deg) = self.phi.degree().filter(|&d| d > 3) {
            reasons.push(format!("deg(phi) = {deg} > 3"));
        }
        if let Some(deg) = self.a.degree().filter(|&d| d > 3) {
            reasons.push(format!("deg(a) = {deg} > 3"));
        }
        if let Some(deg) = self.psi.degree().filter(|&d| d > 5) {
            reasons.push(format!("deg(psi) = {deg} > 5"));
        }
        let m = floor_div(c.deg_i(), 4).max(floor_div(d.deg_i(), 6));
        if m != 1 {
            reasons.push(format!(
                "degree condition: max(floor(deg(t phi^2 + a^2)/4), floor(deg(t psi^2)/6)) = {m}, expected 1"
            ));
        }
        let delta = self.discriminant();
        if delta.is_zero() {
            reasons.push("discriminant vanishes identically".into());
        }
        if reasons.is_empty() {
            for place in self.places().expect("nonzero discriminant") {
                let (w, p) = self.chart(&place).unwrap();
                let vc = w.c().valuation(&p).unwrap_or(u32::MAX);
                let vd = w.d().valuation(&p).unwrap_or(u32::MAX);
                if vc >= 4 && vd >= 6 {
                    reasons.push(format!(
                        "not minimal at {place}: v(t phi^2 + a^2) = {} >= 4 and v(t psi^2) = {} >= 6",
                        show_val(vc),
                        show_val(vd)
                    ));
                }
            }
        }
        K3Check {
            ok: reasons.is_empty(),
            reasons,
        }
    }

    /// Finite roots of `Delta` (as irreducible factors), then infinity if
    /// `deg Delta < 20`.
    pub fn places(&self) -> Result<Vec<Place>, QeError> {
        let delta = self.discriminant();
        let mut out: Vec<Place> = poly_factor(&delta)?
            .into_iter()
            .map(|(p, _)| Place::Finite(p))
            .collect();
        if delta.degree().unwrap() < 20 {
            out.push(Place::Infinity);
        }
        Ok(out)
    }

    /// `v(Delta)` at a place.
    pub fn valuation(&self, place: &Place) -> Result<u32, QeError> {
        let delta = self.discriminant();
        if delta.is_zero() {
            return Err(QeError::NotK3(vec![
                "discriminant vanishes identically".into()
            ]));
        }
        match place {
            Place::Finite(p) => Ok(delta.valuation(p).unwrap()),
            Place::Infinity => Ok(20u32.saturating_sub(delta.degree().unwrap() as u32)),
        }
    }

    pub fn valuation_profile(&self) -> Result<Vec<FiberDatum>, QeError> {
        let check = self.is_k3();
        if !check.ok {
            return Err(QeError::NotK3(check.reasons));
        }
        let mut out = Vec::new();
        for place in self.places()? {
            let v = self.valuation(&place)?;
            let fiber_type = match v {
                1 => FiberType::III,
                4 => FiberType::I0Star,
                _ => {
                    return Err(QeError::OutsideScope {
                        place: place.to_string(),
                        valuation: v,
                    })
                }
            };
            out.push(FiberDatum {
                geometric_count: place.degree(),
                place,
                valuation: v,
                fiber_type,
            });
        }
        Ok(out)
    }

    pub fn torsion_section(&self) -> Result<SectionP, QeError> {
        if self.phi.is_zero() {
            return Err(QeError::NoTorsionSection);
        }
        let (x_cap, y_cap) = (
            self.psi.square(),
            self.psi
                .pow(3)
                .add(&self.a.mul(&self.psi).mul(&self.phi.square())),
        );
        let lhs = y_cap.square();
        let rhs = x_cap
            .pow(3)
            .add(&self.c().mul(&x_cap).mul(&self.phi.pow(4)))
            .add(&self.d().mul(&self.phi.pow(6)));
        let (x_num, x_den) = reduce(&x_cap, &self.phi.square());
        let (y_num, y_den) = reduce(&y_cap, &self.phi.pow(3));
        Ok(SectionP {
            x_num,
            x_den,
            y_num,
            y_den,
            identity_holds: lhs == rhs,
        })
    }

    /// Degree of `gcd(phi, psi)` counted with the place at infinity, where
    /// the local orders are those of the weighted reversals.
    pub fn weighted_gcd_degree(&self) -> Result<usize, QeError> {
        if self.phi.is_zero() {
            return Err(QeError::NoTorsionSection);
        }
        let g = self.phi.gcd(&self.psi);
        let inf = self
            .at_infinity()
            .ok_or_else(|| QeError::NotK3(vec!["degree bounds violated".into()]))?;
        let s = Poly::t(self.field());
        let v_inf = inf
            .phi
            .valuation(&s)
            .unwrap()
            .min(inf.psi.valuation(&s).unwrap_or(u32::MAX));
        Ok(g.degree().unwrap() + v_inf as usize)
    }

    /// `(P.O) = 3 - deg gcd(phi, psi)`, only for `deg gcd <= 1`.
    pub fn intersection_po(&self) -> Result<u32, QeError> {
        let g = self.weighted_gcd_degree()?;
        if g >= 2 {
            return Err(QeError::GcdOutOfRange(g));
        }
        Ok(3 - g as u32)
    }

    /// Whether the torsion section meets an `I0*` fiber on the component of
    /// the zero section.
    pub fn component_at_i0star(&self, place: &Place) -> Result<Component, QeError> {
        let v = self.valuation(place)?;
        let (w, p) = self.chart(place)?;
        let cusp_divisible = p.pow(3).divides(&w.cusp_form());
        if v != 4 {
            return Err(QeError::NotI0Star {
                place: place.to_string(),
                valuation: v,
            });
        }
        if w.phi.is_zero() {
            return Err(QeError::NoTorsionSection);
        }
        if cusp_divisible {
            return Err(QeError::CuspContradiction(place.to_string()));
        }
        Ok(Component::SameAsZero)
    }

    /// Whether the torsion section reduces to the singular point
    /// `(sqrt c, sqrt d)` of the fiber at a place, i.e. `psi^4 = c phi^4`
    /// modulo the place with `phi` a unit there.
    pub fn section_hits_fiber_singularity(&self, place: &Place) -> Result<bool, QeError> {
        let (w, p) = self.chart(place)?;
        if w.phi.is_zero() {
            return Err(QeError::NoTorsionSection);
        }
        let phi_unit = !p.divides(&w.phi);
        Ok(phi_unit && p.divides(&w.discriminant()))
    }
}

fn show_val(v: u32) -> String {
    if v == u32::MAX {
        "inf".into()
    } else {
        v.to_string()
    }
}

fn reduce(num: &Poly, den: &Poly) -> (Poly, Poly) {
    let g = num.gcd(den);
    if g.is_zero() {
        return (num.clone(), den.clone());
    }
    let (n, d) = (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap());
    let lc = den.field().inv(d.leading());
    (n.scale(lc), d.scale(lc))
}
