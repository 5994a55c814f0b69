//! Twelve disjoint curves from a 2-torsion section: the lattice
//! `U + A1^(12-r) + A_(2r-1)` of an elliptic fibration with `12 - r` fibers
//! I2 and one I2r, saturated by a section `P` that meets every reducible
//! fiber opposite to the zero section.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::witness::{unit, Frame, Witness, WitnessSource};
use super::CatalogError;
use crate::json::frac;
use crate::lattice::{IntegerLattice, RatMatrix};

#[derive(Clone, Debug, Serialize)]
pub struct BaseChangeCertificate {
    pub r: u32,
    pub rank: usize,
    pub section: String,
    pub section_self_int: String,
    pub section_dot_zero: String,
    pub section_dot_fiber: String,
    pub even_integral: bool,
    pub witness: Witness,
    #[serde(skip)]
    pub lattice: IntegerLattice,
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `P = O + 3F - 1/2 sum C_i - 1/2 sum min(i, 2r - i) Theta_i` and the
/// divisor `sum C_i + Theta_1 + Theta_3 + ... + Theta_(2r-1)`.
pub fn n12_basechange_certificate(r: u32) -> Result<BaseChangeCertificate, CatalogError> {
    if !(1..=9).contains(&r) {
        return Err(CatalogError::Range(format!("r = {r} must lie in 1..=9")));
    }
    let r = r as usize;
    let n_c = 12 - r;
    let n_t = 2 * r - 1;
    let dim = 2 + n_c + n_t;
    let mut labels = vec!["F".to_string(), "O".to_string()];
    labels.extend((1..=n_c).map(|i| format!("C{i}")));
    labels.extend((1..=n_t).map(|i| format!("T{i}")));

    let mut g = RatMatrix::zeros(dim, dim);
    g[(0, 1)] = q(1, 1);
    g[(1, 0)] = q(1, 1);
    for i in 1..dim {
        g[(i, i)] = q(-2, 1);
    }
    let t0 = 2 + n_c;
    for i in 0..n_t.saturating_sub(1) {
        g[(t0 + i, t0 + i + 1)] = q(1, 1);
        g[(t0 + i + 1, t0 + i)] = q(1, 1);
    }

    let mut p = vec![BigRational::zero(); dim];
    p[0] = q(3, 1);
    p[1] = q(1, 1);
    for i in 0..n_c {
        p[2 + i] = q(-1, 2);
    }
    for i in 1..=n_t {
        p[t0 + i - 1] = q(-(i.min(2 * r - i) as i64), 2);
    }

    let mut gens: Vec<Vec<BigRational>> = (0..dim).map(|i| unit(dim, i)).collect();
    gens.push(p.clone());
    let frame = Frame::new(g, &gens, labels.clone())?;
    let lattice = frame.lattice.lattice().map_err(|e| {
        CatalogError::Verification(format!(
            "adjoining {} does not give an even lattice: {e}",
            frame.render(&p)
        ))
    })?;
    let even_integral = true;
    let pp = frame.lattice.pair(&p, &p);
    let po = frame.lattice.pair(&p, &unit(dim, 1));
    let pf = frame.lattice.pair(&p, &unit(dim, 0));
    if pp != q(-2, 1) || po != q(1, 1) || pf != q(1, 1) {
        return Err(CatalogError::Verification(format!(
            "P^2 = {pp}, P.O = {po}, P.F = {pf}"
        )));
    }

    let mut components = Vec::new();
    let mut names = Vec::new();
    for i in 0..n_c {
        components.push(unit(dim, 2 + i));
        names.push(labels[2 + i].clone());
    }
    for j in (1..=n_t).step_by(2) {
        components.push(unit(dim, t0 + j - 1));
        names.push(labels[t0 + j - 1].clone());
    }
    let witness = frame.witness(
        WitnessSource::BaseChange,
        format!("U + A1^{n_c} + A{n_t} + <P>"),
        names,
        &components,
        format!("2-torsion section P = {}", frame.render(&p)),
    )?;
    Ok(BaseChangeCertificate {
        r: r as u32,
        rank: dim,
        section: frame.render(&p),
        section_self_int: frac(&pp),
        section_dot_zero: frac(&po),
        section_dot_fiber: frac(&pf),
        even_integral,
        witness,
        lattice,
    })
}
