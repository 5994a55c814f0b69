//! Double points `z^2 = f(t, s)` in characteristic 2: the Jacobian colength
//! `dim k[[t, s]]/(f_t, f_s)` and the type among `A1, D4^0, D6^0, E7^0,
//! D8^0, E8^0`.

pub mod series;

use std::fmt;

use rand::Rng;
use serde::{Serialize, Serializer};

use crate::field::{poly_factor, Gf2k, Poly};
pub use series::{BiSeries, DEFAULT_PRECISION};

/// Largest colength handled; beyond it the verdict is `>= 9`.
pub const MAX_COLENGTH: usize = 8;

/// `f = f1^2 t + f2^2 s + f3^2 ts + f4^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub f1: BiSeries,
    pub f2: BiSeries,
    pub f3: BiSeries,
    pub f4: BiSeries,
}

impl Decomposition {
    pub fn recompose(&self) -> BiSeries {
        let f = self.f1.field();
        let p = self.f1.precision() * 2 + 2;
        let t = BiSeries::monomial(f, p, 1, 0, 1);
        let s = BiSeries::monomial(f, p, 0, 1, 1);
        let ts = BiSeries::monomial(f, p, 1, 1, 1);
        let sq = |g: &BiSeries| g.with_precision(p).square();
        sq(&self.f1)
            .mul(&t)
            .add(&sq(&self.f2).mul(&s))
            .add(&sq(&self.f3).mul(&ts))
            .add(&sq(&self.f4))
    }
}

/// Split `f` by the parity of its exponents, taking coefficientwise square
/// roots.
pub fn decompose(f: &BiSeries) -> Decomposition {
    let field = f.field();
    let p = f.precision() / 2;
    let mut parts = [(); 4].map(|_| Vec::new());
    for ((a, b), c) in f.terms() {
        let idx = match (a % 2, b % 2) {
            (1, 0) => 0,
            (0, 1) => 1,
            (1, 1) => 2,
            _ => 3,
        };
        parts[idx].push(((a / 2, b / 2), field.sqrt(c)));
    }
    let [f1, f2, f3, f4] = parts.map(|v| BiSeries::from_terms(field, p, v));
    Decomposition { f1, f2, f3, f4 }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Colength {
    Exact(usize),
    AtLeast9,
}

impl Serialize for Colength {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Colength::Exact(n) => s.serialize_u64(*n as u64),
            Colength::AtLeast9 => s.serialize_str("≥9"),
        }
    }
}

impl fmt::Display for Colength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Colength::Exact(n) => write!(f, "{n}"),
            Colength::AtLeast9 => write!(f, "≥9"),
        }
    }
}

/// Row echelon form over `GF(2^k)`, filled one vector at a time.
struct Echelon {
    field: Gf2k,
    /// rows normalized to a leading 1, keyed by pivot column
    rows: Vec<(usize, Vec<u32>)>,
}

impl Echelon {
    fn insert(&mut self, mut v: Vec<u32>) {
        for (p, row) in &self.rows {
            let c = v[*p];
            if c != 0 {
                for (x, y) in v.iter_mut().zip(row) {
                    *x ^= self.field.mul(c, *y);
                }
            }
        }
        if let Some(p) = v.iter().position(|&x| x != 0) {
            let inv = self.field.inv(v[p]);
            for x in v.iter_mut() {
                *x = self.field.mul(*x, inv);
            }
            self.rows.push((p, v));
        }
    }
}

/// `dim k[t, s]/((f_t, f_s) + m^n)`.
fn truncated_colength(ft: &BiSeries, fs: &BiSeries, n: u32) -> usize {
    let monomials: Vec<(u32, u32)> = (0..n)
        .flat_map(|d| (0..=d).map(move |j| (d - j, j)))
        .collect();
    let index = |a: u32, b: u32| -> usize {
        let d = a + b;
        (d * (d + 1) / 2 + b) as usize
    };
    let mut ech = Echelon {
        field: ft.field(),
        rows: Vec::new(),
    };
    for g in [ft, fs] {
        for &(x, y) in &monomials {
            let mut v = vec![0u32; monomials.len()];
            for ((a, b), c) in g.terms() {
                if a + b + x + y < n {
                    v[index(a + x, b + y)] ^= c;
                }
            }
            if v.iter().any(|&c| c != 0) {
                ech.insert(v);
            }
        }
    }
    monomials.len() - ech.rows.len()
}

/// Colength of the Jacobian ideal at the origin. The truncated dimensions
/// `d_n = dim k[t, s]/((f_t, f_s) + m^n)` increase with `n`; once
/// `d_n = d_{n+1}` Nakayama gives `m^n` inside the ideal and the colength
/// is `d_n`.
pub fn jacobian_colength(f: &BiSeries) -> Colength {
    let (ft, fs) = (f.partial_t(), f.partial_s());
    let ceiling = ft.precision().min(48);
    let mut prev = truncated_colength(&ft, &fs, 1);
    for n in 2..=ceiling {
        let d = truncated_colength(&ft, &fs, n);
        if d > MAX_COLENGTH {
            return Colength::AtLeast9;
        }
        if d == prev {
            return Colength::Exact(d);
        }
        prev = d;
    }
    Colength::AtLeast9
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SingularityType {
    A1,
    D4,
    D6,
    E7,
    D8,
    E8,
    Nonsingular,
    Unsupported,
}

impl SingularityType {
    pub fn name(&self) -> &'static str {
        match self {
            SingularityType::A1 => "A1",
            SingularityType::D4 => "D4^0",
            SingularityType::D6 => "D6^0",
            SingularityType::E7 => "E7^0",
            SingularityType::D8 => "D8^0",
            SingularityType::E8 => "E8^0",
            SingularityType::Nonsingular => "nonsingular",
            SingularityType::Unsupported => "unsupported",
        }
    }

    pub fn expected_colength(&self) -> Option<usize> {
        match self {
            SingularityType::A1 => Some(1),
            SingularityType::D4 => Some(4),
            SingularityType::D6 => Some(6),
            SingularityType::E7 => Some(7),
            SingularityType::D8 | SingularityType::E8 => Some(8),
            SingularityType::Nonsingular => Some(0),
            SingularityType::Unsupported => None,
        }
    }
}

impl fmt::Display for SingularityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for SingularityType {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularityVerdict {
    #[serde(rename = "type")]
    pub kind: SingularityType,
    pub colength: Colength,
    pub trace: Vec<String>,
    /// Multiplicities of the lines in the cubic part, when it is consulted.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cubic_lines: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

/// A linear form `u t + v s`.
type Line = (u32, u32);

/// Lines of the binary cubic `a3 t^3 + a2 t^2 s + a1 t s^2 + a0 s^3` over
/// the algebraic closure: multiplicity pattern (descending) and, when every
/// line is defined over the base field, the lines with multiplicities.
fn cubic_lines(field: Gf2k, cubic: &[u32]) -> (Vec<u32>, Option<Vec<(Line, u32)>>) {
    // x = t/s; the root at infinity is the line s = 0
    let p = Poly::new(field, cubic.iter().rev().copied().collect());
    let mut pattern = Vec::new();
    let mut lines = Vec::new();
    let mut rational = true;
    let at_inf = 3 - p.degree().unwrap() as u32;
    if at_inf > 0 {
        pattern.push(at_inf);
        lines.push(((0, 1), at_inf));
    }
    for (g, m) in poly_factor(&p).expect("nonzero cubic") {
        let d = g.degree().unwrap();
        pattern.extend(std::iter::repeat_n(m, d));
        if d == 1 {
            lines.push(((1, g.coeff(0)), m));
        } else {
            rational = false;
        }
    }
    pattern.sort_unstable_by(|a, b| b.cmp(a));
    (pattern, rational.then_some(lines))
}

fn det(field: Gf2k, a: [[u32; 2]; 2]) -> u32 {
    field.mul(a[0][0], a[1][1]) ^ field.mul(a[0][1], a[1][0])
}

fn show_line(field: Gf2k, (u, v): Line) -> String {
    let term = |c: u32, var: &str| match c {
        0 => None,
        1 => Some(var.to_string()),
        _ if field.is_monomial(c) => Some(format!("{}*{var}", field.element_to_string(c))),
        _ => Some(format!("({})*{var}", field.element_to_string(c))),
    };
    [term(u, "t"), term(v, "s")]
        .into_iter()
        .flatten()
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Apply the linear coordinates `(T, S) = rows` and rescale so the cubic
/// part becomes `target`; returns the transformed series and trace lines.
fn linear_normalize(
    g: &BiSeries,
    rows: [Line; 2],
    target: &[u32],
) -> Option<(BiSeries, Vec<String>)> {
    let field = g.field();
    let a = [[rows[0].0, rows[0].1], [rows[1].0, rows[1].1]];
    let d = det(field, a);
    if d == 0 {
        return None;
    }
    let di = field.inv(d);
    // inverse of a 2x2 matrix in characteristic 2
    let b = [
        [field.mul(a[1][1], di), field.mul(a[0][1], di)],
        [field.mul(a[1][0], di), field.mul(a[0][0], di)],
    ];
    let p = g.precision();
    let lin = |x: u32, y: u32| BiSeries::from_terms(field, p, [((1, 0), x), ((0, 1), y)]);
    let h = g.compose(&lin(b[0][0], b[0][1]), &lin(b[1][0], b[1][1]));
    let cubic = h.homogeneous(3);
    let (i, &lead) = target.iter().enumerate().find(|(_, &c)| c != 0)?;
    let scale = field.mul(cubic[i], field.inv(lead));
    if scale == 0 {
        return None;
    }
    let h = h.scale(field.inv(scale));
    if h.homogeneous(3) != target {
        return None;
    }
    let mut trace = vec![format!(
        "T = {}, S = {}",
        show_line(field, rows[0]),
        show_line(field, rows[1])
    )];
    if scale != 1 {
        trace.push(format!(
            "z -> z*sqrt({}) (f scaled by its inverse)",
            field.element_to_string(scale)
        ));
    }
    Some((h, trace))
}

/// Type of the double point at the origin, following the case analysis on
/// `f3` and the lines of the cubic part, and separating the remaining cases
/// by colength.
pub fn classify(f: &BiSeries) -> SingularityVerdict {
    let field = f.field();
    let colength = jacobian_colength(f);
    let parts = decompose(f);
    let mut trace = Vec::new();
    let g = if parts.f4.is_zero() {
        f.clone()
    } else {
        trace.push(format!("z -> z + ({})", parts.f4));
        f.add(&parts.f4.square().with_precision(f.precision()))
    };
    let verdict = |kind, trace, cubic_lines, reason: Option<String>| SingularityVerdict {
        kind,
        colength,
        trace,
        cubic_lines,
        reason,
    };

    if g.coeff(1, 0) != 0 || g.coeff(0, 1) != 0 {
        return verdict(SingularityType::Nonsingular, trace, None, None);
    }
    if g.coeff(1, 1) != 0 {
        trace.push("f3 is a unit: lowest term a*t*s".into());
        let kind = if colength == Colength::Exact(1) {
            SingularityType::A1
        } else {
            SingularityType::Unsupported
        };
        return verdict(kind, trace, None, None);
    }
    if colength == Colength::AtLeast9 {
        return verdict(
            SingularityType::Unsupported,
            trace,
            None,
            Some("Jacobian colength at least 9".into()),
        );
    }
    let cubic = g.homogeneous(3);
    if cubic.iter().all(|&c| c == 0) {
        return verdict(
            SingularityType::Unsupported,
            trace,
            None,
            Some("cubic part vanishes".into()),
        );
    }
    let (pattern, lines) = cubic_lines(field, &cubic);
    let Colength::Exact(mu) = colength else {
        unreachable!()
    };
    let (candidates, target): (&[(usize, SingularityType)], [u32; 4]) = match pattern.as_slice() {
        [1, 1, 1] => (&[(4, SingularityType::D4)], [0, 1, 1, 0]),
        [2, 1] => (
            &[(6, SingularityType::D6), (8, SingularityType::D8)],
            [0, 1, 0, 0],
        ),
        _ => (
            &[(7, SingularityType::E7), (8, SingularityType::E8)],
            [1, 0, 0, 0],
        ),
    };
    let shape = match pattern.as_slice() {
        [1, 1, 1] => "three distinct lines: normal form t*s*(t + s) + ...",
        [2, 1] => "a double and a simple line: normal form t^2*s + ...",
        _ => "a triple line: normal form t^3 + ...",
    };
    trace.push(format!(
        "cubic part {}: {shape}",
        BiSeries::from_terms(field, 3, (0..4).map(|j| ((3 - j, j), cubic[j as usize])))
    ));

    if let Some(lines) = lines {
        let rows = normalizing_rows(field, &lines, &pattern);
        if let Some((h, t)) = rows.and_then(|r| linear_normalize(&g, r, &target)) {
            trace.extend(t);
            let check = jacobian_colength(&h);
            trace.push(format!(
                "after the linear change: {} + O(5), colength {check}",
                truncate(&h, 4)
            ));
            if check != colength {
                return verdict(
                    SingularityType::Unsupported,
                    trace,
                    Some(pattern),
                    Some(format!(
                        "colength changed under coordinates: {colength} vs {check}"
                    )),
                );
            }
        }
    } else {
        trace.push("lines defined over an extension; linear change not applied".into());
    }

    match candidates.iter().find(|(c, _)| *c == mu) {
        Some(&(_, kind)) => {
            if candidates.len() > 1 {
                trace.push(format!("colength {mu} selects {kind}"));
            }
            verdict(kind, trace, Some(pattern), None)
        }
        None => verdict(
            SingularityType::Unsupported,
            trace,
            Some(pattern),
            Some(format!("colength {mu} does not match the cubic shape")),
        ),
    }
}

fn truncate(f: &BiSeries, d: u32) -> BiSeries {
    BiSeries::from_terms(f.field(), d, f.terms())
}

/// Rows `(T, S)` of the linear change for rational lines.
fn normalizing_rows(field: Gf2k, lines: &[(Line, u32)], pattern: &[u32]) -> Option<[Line; 2]> {
    match pattern {
        [1, 1, 1] => {
            let (l1, l2, l3) = (lines[0].0, lines[1].0, lines[2].0);
            // l3 = alpha l1 + beta l2
            let m = [[l1.0, l2.0], [l1.1, l2.1]];
            let d = det(field, m);
            if d == 0 {
                return None;
            }
            let di = field.inv(d);
            let alpha = field.mul(field.mul(l3.0, l2.1) ^ field.mul(l3.1, l2.0), di);
            let beta = field.mul(field.mul(l1.0, l3.1) ^ field.mul(l1.1, l3.0), di);
            Some([
                (field.mul(alpha, l1.0), field.mul(alpha, l1.1)),
                (field.mul(beta, l2.0), field.mul(beta, l2.1)),
            ])
        }
        [2, 1] => {
            let double = lines.iter().find(|(_, m)| *m == 2)?.0;
            let single = lines.iter().find(|(_, m)| *m == 1)?.0;
            Some([double, single])
        }
        _ => {
            let l = lines[0].0;
            let other = if l.0 != 0 { (0, 1) } else { (1, 0) };
            Some([l, other])
        }
    }
}

/// The six normal forms with their types.
pub fn normal_forms() -> [(SingularityType, &'static str); 6] {
    [
        (SingularityType::A1, "t*s"),
        (SingularityType::D4, "t*s*(t+s)"),
        (SingularityType::D6, "t^2*s + t*s^3"),
        (SingularityType::E7, "t^3 + t*s^3"),
        (SingularityType::D8, "t^2*s + t*s^4"),
        (SingularityType::E8, "t^3 + s^5"),
    ]
}

fn random_element<R: Rng>(field: Gf2k, rng: &mut R, nonzero: bool) -> u32 {
    let lo = u32::from(nonzero);
    rng.gen_range(lo..field.order())
}

fn random_higher<R: Rng>(field: Gf2k, p: u32, rng: &mut R, min_degree: u32) -> BiSeries {
    let mut h = BiSeries::zero(field, p);
    for _ in 0..rng.gen_range(0..=2) {
        let d = rng.gen_range(min_degree..=min_degree + 2);
        let a = rng.gen_range(0..=d);
        h = h.add(&BiSeries::monomial(
            field,
            p,
            a,
            d - a,
            random_element(field, rng, true),
        ));
    }
    h
}

/// `f` after a random invertible change of `t, s` (linear part plus higher
/// terms), a shift `z -> z + h` and a rescaling of `z` by a unit constant.
/// None of these change the type or the colength.
pub fn random_variant<R: Rng>(f: &BiSeries, rng: &mut R) -> BiSeries {
    let field = f.field();
    let p = DEFAULT_PRECISION;
    let f = f.with_precision(p);
    let a = loop {
        let a = [[0; 2]; 2].map(|r| r.map(|_: u32| random_element(field, rng, false)));
        if det(field, a) != 0 {
            break a;
        }
    };
    let lin = |x: u32, y: u32| BiSeries::from_terms(field, p, [((1, 0), x), ((0, 1), y)]);
    let t_img = lin(a[0][0], a[0][1]).add(&random_higher(field, p, rng, 2));
    let s_img = lin(a[1][0], a[1][1]).add(&random_higher(field, p, rng, 2));
    let c = random_element(field, rng, true);
    let h = random_higher(field, p, rng, 0);
    f.compose(&t_img, &s_img)
        .scale(field.square(c))
        .add(&h.square())
}
