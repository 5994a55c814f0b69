//! Truncated power series in `t, s` over `GF(2^k)`.

use std::collections::BTreeMap;
use std::fmt;

use crate::field::{parse_sparse, FieldError, Gf2k};

pub const DEFAULT_PRECISION: u32 = 12;

/// Coefficients indexed by `(deg_t, deg_s)`; every stored monomial has total
/// degree at most `precision`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiSeries {
    field: Gf2k,
    precision: u32,
    terms: BTreeMap<(u32, u32), u32>,
}

impl BiSeries {
    pub fn zero(field: Gf2k, precision: u32) -> Self {
        BiSeries {
            field,
            precision,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(
        field: Gf2k,
        precision: u32,
        terms: impl IntoIterator<Item = ((u32, u32), u32)>,
    ) -> Self {
        let mut f = BiSeries::zero(field, precision);
        for ((a, b), c) in terms {
            f.add_term(a, b, c);
        }
        f
    }

    pub fn monomial(field: Gf2k, precision: u32, a: u32, b: u32, c: u32) -> Self {
        BiSeries::from_terms(field, precision, [((a, b), c)])
    }

    /// Parse `t^2*s + t*s^3`; precision is the larger of the default and the
    /// total degree, so polynomials are held exactly.
    pub fn parse(text: &str, field: Gf2k) -> Result<Self, FieldError> {
        let sparse = parse_sparse(text, field, &['t', 's'])?;
        let deg = sparse.keys().map(|e| e[0] + e[1]).max().unwrap_or(0);
        Ok(BiSeries::from_terms(
            field,
            DEFAULT_PRECISION.max(deg),
            sparse.into_iter().map(|(e, c)| ((e[0], e[1]), c)),
        ))
    }

    pub fn field(&self) -> Gf2k {
        self.field
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn with_precision(&self, precision: u32) -> Self {
        BiSeries::from_terms(self.field, precision, self.terms())
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), u32)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn coeff(&self, a: u32, b: u32) -> u32 {
        self.terms.get(&(a, b)).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest total degree of a term, `None` for zero.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|(a, b)| a + b).min()
    }

    /// Total degree, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|(a, b)| a + b).max()
    }

    fn add_term(&mut self, a: u32, b: u32, c: u32) {
        if c == 0 || a + b > self.precision {
            return;
        }
        let e = self.terms.entry((a, b)).or_insert(0);
        *e ^= c;
        if *e == 0 {
            self.terms.remove(&(a, b));
        }
    }

    /// Coefficients `[t^d, t^(d-1) s, ..., s^d]` of the degree `d` part.
    pub fn homogeneous(&self, d: u32) -> Vec<u32> {
        (0..=d).map(|j| self.coeff(d - j, j)).collect()
    }

    pub fn add(&self, other: &BiSeries) -> BiSeries {
        let mut out = BiSeries {
            precision: self.precision.min(other.precision),
            ..self.clone()
        };
        out.terms.retain(|(a, b), _| a + b <= out.precision);
        for ((a, b), c) in other.terms() {
            out.add_term(a, b, c);
        }
        out
    }

    pub fn scale(&self, c: u32) -> BiSeries {
        BiSeries::from_terms(
            self.field,
            self.precision,
            self.terms().map(|(e, x)| (e, self.field.mul(x, c))),
        )
    }

    pub fn mul(&self, other: &BiSeries) -> BiSeries {
        let mut out = BiSeries::zero(self.field, self.precision.min(other.precision));
        for ((a, b), c) in self.terms() {
            for ((x, y), d) in other.terms() {
                out.add_term(a + x, b + y, self.field.mul(c, d));
            }
        }
        out
    }

    /// Frobenius: `(sum c t^a s^b)^2 = sum c^2 t^(2a) s^(2b)`.
    pub fn square(&self) -> BiSeries {
        BiSeries::from_terms(
            self.field,
            self.precision,
            self.terms()
                .map(|((a, b), c)| ((2 * a, 2 * b), self.field.square(c))),
        )
    }

    pub fn pow(&self, e: u32) -> BiSeries {
        let mut acc = BiSeries::monomial(self.field, self.precision, 0, 0, 1);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `d/dt`: only terms with odd `t`-exponent survive.
    pub fn partial_t(&self) -> BiSeries {
        let terms = self
            .terms()
            .filter(|((a, _), _)| a % 2 == 1)
            .map(|((a, b), c)| ((a - 1, b), c));
        BiSeries::from_terms(self.field, self.precision.saturating_sub(1), terms)
    }

    pub fn partial_s(&self) -> BiSeries {
        let terms = self
            .terms()
            .filter(|((_, b), _)| b % 2 == 1)
            .map(|((a, b), c)| ((a, b - 1), c));
        BiSeries::from_terms(self.field, self.precision.saturating_sub(1), terms)
    }

    /// `f(t_img, s_img)`; both images must lie in the maximal ideal.
    pub fn compose(&self, t_img: &BiSeries, s_img: &BiSeries) -> BiSeries {
        assert!(t_img.order().is_none_or(|o| o >= 1) && s_img.order().is_none_or(|o| o >= 1));
        let max_a = self.terms.keys().map(|e| e.0).max().unwrap_or(0);
        let max_b = self.terms.keys().map(|e| e.1).max().unwrap_or(0);
        let powers = |g: &BiSeries, n: u32| {
            let g = g.with_precision(self.precision);
            let mut out = vec![BiSeries::monomial(self.field, self.precision, 0, 0, 1)];
            for i in 1..=n as usize {
                out.push(out[i - 1].mul(&g));
            }
            out
        };
        let (tp, sp) = (powers(t_img, max_a), powers(s_img, max_b));
        let mut out = BiSeries::zero(self.field, self.precision);
        for ((a, b), c) in self.terms() {
            out = out.add(&tp[a as usize].mul(&sp[b as usize]).scale(c));
        }
        out
    }
}

impl fmt::Display for BiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut keys: Vec<_> = self.terms.keys().copied().collect();
        keys.sort_by_key(|&(a, b)| (a + b, std::cmp::Reverse(a)));
        let parts: Vec<String> = keys
            .into_iter()
            .map(|(a, b)| {
                let c = self.coeff(a, b);
                let mut factors = Vec::new();
                if c != 1 || a + b == 0 {
                    let s = self.field.element_to_string(c);
                    factors.push(if self.field.is_monomial(c) {
                        s
                    } else {
                        format!("({s})")
                    });
                }
                for (v, e) in [("t", a), ("s", b)] {
                    match e {
                        0 => {}
                        1 => factors.push(v.to_string()),
                        _ => factors.push(format!("{v}^{e}")),
                    }
                }
                factors.join("*")
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2(s: &str) -> BiSeries {
        BiSeries::parse(s, Gf2k::gf2()).unwrap()
    }

    #[test]
    fn parse_and_display() {
        let f = f2("t^2*s + t*s^3");
        assert_eq!(f.to_string(), "t^2*s + t*s^3");
        assert_eq!(f.order(), Some(3));
        assert_eq!(f2(&f.to_string()), f);
        assert_eq!(f.homogeneous(3), vec![0, 1, 0, 0]);
    }

    #[test]
    fn derivatives_in_characteristic_two() {
        let f = f2("t^3 + s^5 + t^2*s");
        assert_eq!(f.partial_t(), f2("t^2").with_precision(11));
        assert_eq!(f.partial_s(), f2("s^4 + t^2").with_precision(11));
    }

    #[test]
    fn compose_and_truncate() {
        let f = f2("t*s");
        let g = f.compose(&f2("t + s"), &f2("s"));
        assert_eq!(g, f2("t*s + s^2"));
        let h = BiSeries::parse("t", Gf2k::gf2())
            .unwrap()
            .with_precision(3)
            .pow(5);
        assert!(h.is_zero());
    }
}
