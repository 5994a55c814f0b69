//! A model of the Picard lattice of a quasi-elliptic K3 surface with `l`
//! fibers of type I0* and `20 - 4l` of type III.
//!
//! The rational basis is `F, s, E_1, ..., E_{4l}, C_1, ..., C_{20-4l}`:
//! `F` a fiber, `s` the zero section (or a 2-section), `E_{4i-3..4i}` the
//! four simple components of the `i`-th I0* fiber, and `C_j` the component
//! of the `j`-th III fiber missing `s`. The double component of an I0*
//! fiber is `M_i = (F - E_{4i-3} - ... - E_{4i})/2` and the other half of a
//! III fiber is `C_j' = F - C_j`. The lattice is spanned by these classes
//! together with the class `xi` of the curve of cusps.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::QeError;
use crate::json::{frac, fracs};
use crate::lattice::{
    is_two_divisible, GeneratedLattice, IntegerLattice, RatMatrix, TwoDivisibility,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SectionKind {
    Section,
    TwoSection,
}

impl fmt::Display for SectionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SectionKind::Section => write!(f, "section"),
            SectionKind::TwoSection => write!(f, "two_section"),
        }
    }
}

impl FromStr for SectionKind {
    type Err = QeError;
    fn from_str(s: &str) -> Result<Self, QeError> {
        match s.replace('-', "_").as_str() {
            "section" => Ok(SectionKind::Section),
            "two_section" | "2_section" | "bisection" => Ok(SectionKind::TwoSection),
            _ => Err(QeError::Range(format!(
                "unknown section kind {s:?}; expected section or two_section"
            ))),
        }
    }
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn qi(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn check_params(ell: usize, k: usize, kind: SectionKind) -> Result<(), QeError> {
    if ell > 5 {
        return Err(QeError::Range(format!("l = {ell} exceeds 5")));
    }
    match kind {
        SectionKind::Section if k != ell => Err(QeError::Range(format!(
            "for a section k must equal l (got k = {k}, l = {ell})"
        ))),
        SectionKind::TwoSection if k > ell => {
            Err(QeError::Range(format!("k = {k} exceeds l = {ell}")))
        }
        _ => Ok(()),
    }
}

/// Labels and Gram matrix of the rational basis.
fn ambient(ell: usize, k: usize, kind: SectionKind) -> (Vec<String>, RatMatrix) {
    let n_c = 20 - 4 * ell;
    let dim = 2 + 4 * ell + n_c;
    let mut labels = vec![
        "F".to_string(),
        if kind == SectionKind::Section {
            "O"
        } else {
            "s"
        }
        .to_string(),
    ];
    labels.extend((1..=4 * ell).map(|j| format!("E{j}")));
    labels.extend((1..=n_c).map(|j| format!("C{j}")));
    let mut g = RatMatrix::zeros(dim, dim);
    let fs = match kind {
        SectionKind::Section => 1,
        SectionKind::TwoSection => 2,
    };
    g[(0, 1)] = qi(fs);
    g[(1, 0)] = qi(fs);
    g[(1, 1)] = qi(-2);
    for i in 2..dim {
        g[(i, i)] = qi(-2);
    }
    for i in 1..=ell {
        let e = 2 + 4 * (i - 1);
        let se = match kind {
            SectionKind::Section => 1,
            SectionKind::TwoSection if i <= k => 2,
            SectionKind::TwoSection => 0,
        };
        g[(1, e)] = qi(se);
        g[(e, 1)] = qi(se);
    }
    (labels, g)
}

fn xi_vector(ell: usize, k: usize, kind: SectionKind) -> Vec<BigRational> {
    let dim = 22;
    let mut v = vec![BigRational::zero(); dim];
    match kind {
        SectionKind::Section => {
            v[0] = qi(4 - ell as i64);
            v[1] = qi(2);
        }
        SectionKind::TwoSection => {
            v[0] = q(5 - k as i64 - ell as i64, 2);
            v[1] = qi(1);
        }
    }
    for i in 1..=k {
        v[2 + 4 * (i - 1)] = qi(1);
    }
    for x in v.iter_mut().skip(2 + 4 * ell) {
        *x = q(-1, 2);
    }
    v
}

fn pair(g: &RatMatrix, x: &[BigRational], y: &[BigRational]) -> BigRational {
    let gy = g.mul_vec(y);
    x.iter()
        .zip(&gy)
        .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
}

/// Render `sum c_i label_i`, e.g. `5/2 F + s - 1/2 C1`.
pub fn render(labels: &[String], v: &[BigRational]) -> String {
    let mut out = String::new();
    for (c, l) in v.iter().zip(labels) {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        let sign = if c.is_negative() { "-" } else { "+" };
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        if mag.is_one() {
            out.push_str(l);
        } else {
            out.push_str(&format!("{} {l}", frac(&mag)));
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

/// The class `xi` written in the rational basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XiClass {
    pub ell: usize,
    pub k: usize,
    pub kind: SectionKind,
    pub f_coeff: BigRational,
    pub s_coeff: BigRational,
    pub e_coeffs: Vec<BigRational>,
    pub c_coeffs: Vec<BigRational>,
    pub self_intersection: BigRational,
    pub dot_fiber: BigRational,
    pub expression: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct XiJson {
    pub ell: usize,
    pub k: usize,
    pub kind: SectionKind,
    pub f: String,
    pub s: String,
    pub e: Vec<String>,
    pub c: Vec<String>,
    pub self_intersection: String,
    pub dot_fiber: String,
    pub expression: String,
}

impl XiClass {
    pub fn to_json(&self) -> XiJson {
        XiJson {
            ell: self.ell,
            k: self.k,
            kind: self.kind,
            f: frac(&self.f_coeff),
            s: frac(&self.s_coeff),
            e: fracs(&self.e_coeffs),
            c: fracs(&self.c_coeffs),
            self_intersection: frac(&self.self_intersection),
            dot_fiber: frac(&self.dot_fiber),
            expression: self.expression.clone(),
        }
    }
}

/// Coefficients of `xi`, with `xi^2` and `xi.F` evaluated in the rational
/// Gram matrix. For a section `k` must equal `l`.
pub fn xi_class(ell: usize, k: usize, kind: SectionKind) -> Result<XiClass, QeError> {
    check_params(ell, k, kind)?;
    let (labels, g) = ambient(ell, k, kind);
    let v = xi_vector(ell, k, kind);
    let mut f = vec![BigRational::zero(); 22];
    f[0] = qi(1);
    let self_intersection = pair(&g, &v, &v);
    let dot_fiber = pair(&g, &v, &f);
    if self_intersection != qi(-2) || dot_fiber != qi(2) {
        return Err(QeError::Inconsistent(format!(
            "xi^2 = {}, xi.F = {} for l = {ell}, k = {k}, {kind}",
            frac(&self_intersection),
            frac(&dot_fiber)
        )));
    }
    Ok(XiClass {
        ell,
        k,
        kind,
        f_coeff: v[0].clone(),
        s_coeff: v[1].clone(),
        e_coeffs: v[2..2 + 4 * ell].to_vec(),
        c_coeffs: v[2 + 4 * ell..].to_vec(),
        self_intersection,
        dot_fiber,
        expression: render(&labels, &v),
    })
}

/// A 2-divisible divisor in a Picard model together with its half.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    /// Number of disjoint (-2)-curves in the divisor.
    pub n: usize,
    pub name: String,
    pub divisor: Vec<BigRational>,
    pub half: Vec<BigRational>,
    pub expression: String,
    pub half_expression: String,
    /// Relation exhibiting the half, when it comes from a section.
    pub relation: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateJson {
    pub n: usize,
    pub name: String,
    pub divisor: String,
    pub half: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relation: Option<String>,
    pub verified: bool,
}

impl Certificate {
    pub fn to_json(&self) -> CertificateJson {
        CertificateJson {
            n: self.n,
            name: self.name.clone(),
            divisor: self.expression.clone(),
            half: self.half_expression.clone(),
            relation: self.relation.clone(),
            verified: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PicardModel {
    pub ell: usize,
    pub k: usize,
    pub kind: SectionKind,
    pub labels: Vec<String>,
    ambient: RatMatrix,
    lattice: GeneratedLattice,
    integral: IntegerLattice,
}

impl PicardModel {
    /// Model for `l` I0* fibers. Configurations that cannot occur (four
    /// I0* fibers) are rejected.
    pub fn build(ell: usize, k: usize, kind: SectionKind) -> Result<Self, QeError> {
        check_params(ell, k, kind)?;
        if ell == 4 {
            return Err(QeError::InvalidConfiguration(
                "4 fibers of type I0* and 4 of type III do not occur on a quasi-elliptic K3 surface".into(),
            ));
        }
        let (labels, ambient) = ambient(ell, k, kind);
        let dim = labels.len();
        let unit = |i: usize| {
            let mut v = vec![BigRational::zero(); dim];
            v[i] = qi(1);
            v
        };
        let mut gens: Vec<Vec<BigRational>> = (0..dim).map(unit).collect();
        for i in 1..=ell {
            gens.push(m_vector(dim, i));
        }
        gens.push(xi_vector(ell, k, kind));
        let lattice = GeneratedLattice::new(ambient.clone(), &gens)?;
        let integral = lattice
            .lattice()?
            .with_label(format!("picard model l={ell} k={k} {kind}"));
        Ok(PicardModel {
            ell,
            k,
            kind,
            labels,
            ambient,
            lattice,
            integral,
        })
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn lattice(&self) -> &IntegerLattice {
        &self.integral
    }

    pub fn generated(&self) -> &GeneratedLattice {
        &self.lattice
    }

    pub fn ambient(&self) -> &RatMatrix {
        &self.ambient
    }

    pub fn pair(&self, x: &[BigRational], y: &[BigRational]) -> BigRational {
        pair(&self.ambient, x, y)
    }

    pub fn zero(&self) -> Vec<BigRational> {
        vec![BigRational::zero(); self.rank()]
    }

    /// Basis vector by label (`F`, `O`/`s`, `E3`, `C7`).
    pub fn basis_vector(&self, label: &str) -> Option<Vec<BigRational>> {
        let i = self.labels.iter().position(|l| l == label)?;
        let mut v = self.zero();
        v[i] = qi(1);
        Some(v)
    }

    fn f(&self) -> Vec<BigRational> {
        self.basis_vector("F").unwrap()
    }

    fn c_index(&self, j: usize) -> usize {
        2 + 4 * self.ell + j - 1
    }

    fn e_index(&self, j: usize) -> usize {
        2 + j - 1
    }

    pub fn m(&self, i: usize) -> Vec<BigRational> {
        m_vector(self.rank(), i)
    }

    pub fn xi(&self) -> Vec<BigRational> {
        xi_vector(self.ell, self.k, self.kind)
    }

    pub fn render(&self, v: &[BigRational]) -> String {
        render(&self.labels, v)
    }

    /// Decide 2-divisibility of a lattice vector given in the rational basis.
    pub fn two_divisibility(&self, v: &[BigRational]) -> Result<TwoDivisibility, QeError> {
        let coords = self
            .lattice
            .coordinates(v)
            .ok_or(crate::lattice::LatticeError::NotInLattice)?;
        let class = self.integral.class(coords)?;
        Ok(is_two_divisible(&self.integral, &class)?)
    }

    /// Half of `v` in the rational basis if `v` is 2-divisible.
    pub fn half(&self, v: &[BigRational]) -> Result<Option<Vec<BigRational>>, QeError> {
        match self.two_divisibility(v)? {
            TwoDivisibility::Divisible { witness } => {
                let mut h = self.zero();
                for (c, b) in witness.iter().zip(self.lattice.basis()) {
                    for (x, y) in h.iter_mut().zip(b) {
                        *x += BigRational::from_integer(c.clone()) * y;
                    }
                }
                Ok(Some(h))
            }
            TwoDivisibility::NotDivisible { .. } => Ok(None),
        }
    }

    fn certify(
        &self,
        n: usize,
        name: String,
        divisor: Vec<BigRational>,
        relation: Option<String>,
    ) -> Result<Certificate, QeError> {
        let half = self.half(&divisor)?.ok_or_else(|| {
            QeError::Inconsistent(format!(
                "{name} = {} is not 2-divisible in the model",
                self.render(&divisor)
            ))
        })?;
        Ok(Certificate {
            n,
            name,
            expression: self.render(&divisor),
            half_expression: self.render(&half),
            divisor,
            half,
            relation,
        })
    }

    fn sum_c(&self) -> Vec<BigRational> {
        let mut v = self.zero();
        for j in 1..=20 - 4 * self.ell {
            v[self.c_index(j)] = qi(1);
        }
        v
    }

    /// Tails of the first `j` I0* fibers.
    fn tails(&self, j: usize) -> Vec<BigRational> {
        let mut v = self.zero();
        for e in 1..=4 * j {
            v[self.e_index(e)] = qi(1);
        }
        v
    }

    /// Every 2-divisible configuration of disjoint (-2)-curves forced by the
    /// fibration, each checked in the lattice. Only defined for a section.
    pub fn certificates(&self, po: Option<u32>) -> Result<Vec<Certificate>, QeError> {
        if self.kind != SectionKind::Section {
            return Err(QeError::Range(
                "certificates are produced for the zero section model".into(),
            ));
        }
        let n_c = 20 - 4 * self.ell;
        let mut out = Vec::new();
        if n_c > 0 {
            let relation = po.map(|po| format!("P = O + {}F - 1/2 (C1 + ... + C{n_c})", 2 + po));
            out.push(self.certify(n_c, format!("C1 + ... + C{n_c}"), self.sum_c(), relation)?);
        }
        if self.ell == 1 {
            // E1 + ... + E4 + C1' + C2 + ... + C16
            let mut v = self.tails(1);
            v[0] += qi(1);
            v[self.c_index(1)] = qi(-1);
            for j in 2..=n_c {
                v[self.c_index(j)] = qi(1);
            }
            out.push(self.certify(20, "E1 + ... + E4 + C1' + C2 + ... + C16".into(), v, None)?);
        }
        if self.ell == 5 {
            for j in [2usize, 4] {
                out.push(self.certify(
                    4 * j,
                    format!("E1 + ... + E{}", 4 * j),
                    self.tails(j),
                    None,
                )?);
            }
        }
        Ok(out)
    }

    /// The torsion section `P = O + (2 + (P.O)) F - 1/2 sum C_j` as a vector.
    pub fn torsion_section_class(&self, po: u32) -> Vec<BigRational> {
        let mut v = self.sum_c();
        for x in v.iter_mut() {
            *x = -x.clone() / qi(2);
        }
        v[0] = qi(2 + po as i64);
        v[1] = qi(1);
        v
    }

    pub fn to_json(&self) -> ModelJson {
        ModelJson {
            ell: self.ell,
            k: self.k,
            kind: self.kind,
            labels: self.labels.clone(),
            gram: (0..self.rank())
                .map(|i| {
                    (0..self.rank())
                        .map(|j| frac(&self.ambient[(i, j)]))
                        .collect()
                })
                .collect(),
            determinant: self.integral.determinant().to_string(),
        }
    }

    /// `C_1 + ... + C_m` replaced by `C_1' + ... + C_m'` inside `sum C_j`.
    pub fn swapped_sum(&self, m: usize) -> Vec<BigRational> {
        let mut v = self.sum_c();
        for j in 1..=m {
            v[0] += qi(1);
            v[self.c_index(j)] = qi(-1);
        }
        v
    }

    pub fn fiber(&self) -> Vec<BigRational> {
        self.f()
    }
}

fn m_vector(dim: usize, i: usize) -> Vec<BigRational> {
    let mut v = vec![BigRational::zero(); dim];
    v[0] = q(1, 2);
    for e in 4 * (i - 1)..4 * i {
        v[2 + e] = q(-1, 2);
    }
    v
}

#[derive(Clone, Debug, Serialize)]
pub struct ModelJson {
    pub ell: usize,
    pub k: usize,
    pub kind: SectionKind,
    pub labels: Vec<String>,
    pub gram: Vec<Vec<String>>,
    pub determinant: String,
}

/// Divisibility of `sum_{j<=m} C_j' + sum_{j>m} C_j` for twenty III fibers:
/// with a 2-section it is divisible exactly when `m` is odd, with a section
/// exactly when `m` is even.
pub fn parity_divisibility(m: usize, kind: SectionKind) -> Result<bool, QeError> {
    if m > 20 {
        return Err(QeError::Range(format!("m = {m} exceeds 20")));
    }
    Ok(match kind {
        SectionKind::TwoSection => m % 2 == 1,
        SectionKind::Section => m.is_multiple_of(2),
    })
}

/// Shape of a non-reduced fiber of type `I_b*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FiberShape {
    pub b: usize,
}

impl FromStr for FiberShape {
    type Err = QeError;
    fn from_str(s: &str) -> Result<Self, QeError> {
        let t = s.trim();
        let inner = t
            .strip_prefix('I')
            .and_then(|r| r.strip_suffix('*'))
            .ok_or_else(|| QeError::Range(format!("fiber shape {s:?}; expected I<b>*")))?;
        let b = inner
            .parse()
            .map_err(|_| QeError::Range(format!("fiber shape {s:?}; expected I<b>*")))?;
        Ok(FiberShape { b })
    }
}

impl fmt::Display for FiberShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "I{}*", self.b)
    }
}

/// Sum of the `4j` simple components of `j` fibers of type `I_b*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonreducedDivisor {
    pub j: usize,
    pub shape: FiberShape,
    pub n: usize,
    pub expression: String,
    pub divisible: bool,
    pub half: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NonreducedJson {
    pub j: usize,
    pub shape: String,
    pub n: usize,
    pub expression: String,
    pub divisible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub half: Option<String>,
}

impl NonreducedDivisor {
    pub fn to_json(&self) -> NonreducedJson {
        NonreducedJson {
            j: self.j,
            shape: self.shape.to_string(),
            n: self.n,
            expression: self.expression.clone(),
            divisible: self.divisible,
            half: self.half.clone(),
        }
    }
}

/// Work in `U ⊕ D_{b+4}^j` spanned by `F`, `O` and the non-identity
/// components of each fiber. With nodes `0..n` of `D_n` laid out as a chain
/// `0 - 1 - ... - (n-2)` plus node `n-1` on node `n-3`, the identity
/// component is `F - N_0 - 2(N_1 + ... + N_{n-3}) - N_{n-2} - N_{n-1}`, and
/// the four simple components add up to `F - 2(N_1 + ... + N_{n-3})`.
pub fn nonreduced_fiber_divisor(j: usize, shape: FiberShape) -> Result<NonreducedDivisor, QeError> {
    if j == 0 {
        return Err(QeError::Range("need at least one fiber".into()));
    }
    let n = shape.b + 4;
    let dim = 2 + j * n;
    let mut rows = vec![vec![0i64; dim]; dim];
    rows[0][1] = 1;
    rows[1][0] = 1;
    rows[1][1] = -2;
    for f in 0..j {
        let o = 2 + f * n;
        for i in 0..n {
            rows[o + i][o + i] = -2;
        }
        for i in 0..n - 2 {
            rows[o + i][o + i + 1] = 1;
            rows[o + i + 1][o + i] = 1;
        }
        rows[o + n - 1][o + n - 3] = 1;
        rows[o + n - 3][o + n - 1] = 1;
    }
    let lattice = IntegerLattice::from_i64(&rows)?;
    let mut d = vec![BigInt::zero(); dim];
    d[0] = BigInt::from(j);
    for f in 0..j {
        let o = 2 + f * n;
        for i in 1..=n - 3 {
            d[o + i] = BigInt::from(-2);
        }
    }
    let mut labels = vec!["F".to_string(), "O".to_string()];
    for f in 1..=j {
        labels.extend((0..n).map(|i| format!("N{f}_{i}")));
    }
    let rat: Vec<BigRational> = d.iter().cloned().map(BigRational::from_integer).collect();
    let class = lattice.class(d)?;
    let (divisible, half) = match is_two_divisible(&lattice, &class)? {
        TwoDivisibility::Divisible { witness } => {
            let h: Vec<BigRational> = witness.into_iter().map(BigRational::from_integer).collect();
            (true, Some(render(&labels, &h)))
        }
        TwoDivisibility::NotDivisible { .. } => (false, None),
    };
    Ok(NonreducedDivisor {
        j,
        shape,
        n: 4 * j,
        expression: render(&labels, &rat),
        divisible,
        half,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn gram_det_abs(m: &PicardModel) -> u64 {
        m.lattice().determinant().abs().to_u64().unwrap()
    }

    #[test]
    fn xi_examples() {
        let x = xi_class(0, 0, SectionKind::TwoSection).unwrap();
        assert_eq!(x.f_coeff, q(5, 2));
        assert_eq!(x.s_coeff, qi(1));
        assert!(x.c_coeffs.iter().all(|c| *c == q(-1, 2)) && x.c_coeffs.len() == 20);
        let x = xi_class(2, 2, SectionKind::Section).unwrap();
        assert_eq!((x.f_coeff.clone(), x.s_coeff.clone()), (qi(2), qi(2)));
        assert_eq!(x.e_coeffs[0], qi(1));
        assert_eq!(x.e_coeffs[4], qi(1));
        assert_eq!(x.e_coeffs.iter().filter(|c| !c.is_zero()).count(), 2);
        assert!(x.expression.starts_with("2 F + 2 O + E1 + E5 - 1/2 C1"));
    }

    #[test]
    fn xi_is_a_minus_two_class_for_all_parameters() {
        for ell in 0..=5 {
            xi_class(ell, ell, SectionKind::Section).unwrap();
            for k in 0..=ell {
                xi_class(ell, k, SectionKind::TwoSection).unwrap();
            }
        }
        assert!(xi_class(2, 3, SectionKind::TwoSection).is_err());
        assert!(xi_class(2, 1, SectionKind::Section).is_err());
        assert!(xi_class(6, 0, SectionKind::TwoSection).is_err());
    }

    #[test]
    fn determinant_matches_artin_invariant() {
        // |det| = 2^(2 sigma), sigma = 10 - l - r, r = 1 unless l = 5
        for (ell, sigma) in [(0, 9), (1, 8), (2, 7), (3, 6), (5, 5)] {
            let m = PicardModel::build(ell, ell, SectionKind::Section).unwrap();
            assert_eq!(m.rank(), 22);
            assert_eq!(gram_det_abs(&m), 1 << (2 * sigma), "l = {ell}");
            assert_eq!(m.lattice().signature(), (1, 21));
        }
    }

    #[test]
    fn four_i0star_rejected() {
        assert!(matches!(
            PicardModel::build(4, 4, SectionKind::Section),
            Err(QeError::InvalidConfiguration(_))
        ));
    }

    #[test]
    fn certificates_by_case() {
        let m = PicardModel::build(0, 0, SectionKind::Section).unwrap();
        let c = m.certificates(Some(3)).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].n, 20);
        // half of sum C is O + 5F - P
        let p = m.torsion_section_class(3);
        let expect: Vec<BigRational> = m
            .basis_vector("O")
            .unwrap()
            .iter()
            .zip(&m.fiber())
            .zip(&p)
            .map(|((o, f), p)| o + qi(5) * f - p)
            .collect();
        assert_eq!(c[0].half, expect);
        assert!(m.generated().contains(&p));
        assert_eq!(m.pair(&p, &p), qi(-2));

        let m = PicardModel::build(1, 1, SectionKind::Section).unwrap();
        let c = m.certificates(Some(2)).unwrap();
        assert_eq!(c.iter().map(|c| c.n).collect::<Vec<_>>(), vec![16, 20]);

        let m = PicardModel::build(5, 5, SectionKind::Section).unwrap();
        let c = m.certificates(None).unwrap();
        assert_eq!(c.iter().map(|c| c.n).collect::<Vec<_>>(), vec![8, 16]);
        assert_eq!(c[0].half, {
            let mut h = m.fiber();
            for (x, (a, b)) in h.iter_mut().zip(m.m(1).iter().zip(&m.m(2))) {
                *x = x.clone() - a - b;
            }
            h
        });
    }

    #[test]
    fn torsion_section_is_orthogonal_data() {
        // P.P = -2, P.F = 1, and for twenty III fibers P.O = 3
        let m = PicardModel::build(0, 0, SectionKind::Section).unwrap();
        let p = m.torsion_section_class(3);
        let o = m.basis_vector("O").unwrap();
        assert_eq!(m.pair(&p, &m.fiber()), qi(1));
        assert_eq!(m.pair(&p, &o), qi(3));
        let m = PicardModel::build(1, 1, SectionKind::Section).unwrap();
        let p = m.torsion_section_class(2);
        assert_eq!(m.pair(&p, &p), qi(-2));
        assert_eq!(m.pair(&p, &m.basis_vector("O").unwrap()), qi(2));
    }

    #[test]
    fn parity_rule_matches_lattice() {
        for kind in [SectionKind::Section, SectionKind::TwoSection] {
            let model = PicardModel::build(0, 0, kind).unwrap();
            for m in 0..=20 {
                let v = model.swapped_sum(m);
                let got = model.half(&v).unwrap().is_some();
                assert_eq!(
                    got,
                    parity_divisibility(m, kind).unwrap(),
                    "m = {m}, {kind}"
                );
            }
        }
        assert!(parity_divisibility(21, SectionKind::Section).is_err());
    }

    #[test]
    fn fiber_is_not_divisible() {
        let m = PicardModel::build(0, 0, SectionKind::Section).unwrap();
        assert!(m.half(&m.fiber()).unwrap().is_none());
    }

    #[test]
    fn nonreduced_tails() {
        let d = nonreduced_fiber_divisor(2, "I4*".parse().unwrap()).unwrap();
        assert_eq!(d.n, 8);
        assert!(d.divisible);
        let d = nonreduced_fiber_divisor(4, "I0*".parse().unwrap()).unwrap();
        assert_eq!(d.n, 16);
        assert!(d.divisible);
        assert!(
            !nonreduced_fiber_divisor(1, "I0*".parse().unwrap())
                .unwrap()
                .divisible
        );
        assert!(
            !nonreduced_fiber_divisor(3, "I2*".parse().unwrap())
                .unwrap()
                .divisible
        );
    }
}
