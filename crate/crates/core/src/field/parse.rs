//! Text formats for fields and polynomials.
//!
//! Field: `gf2`, `gf(2^k)` (smallest irreducible modulus) or
//! `gf(2^k; modulus=g^4+g+1)`.
//! Polynomial: sums of products such as `t^5+t^2+1`, `(g+1)*t^3 + g`,
//! `t^2*s + t*s^3`. Integers are read mod 2, `-` is the same as `+`, and
//! juxtaposition multiplies.

use std::collections::BTreeMap;

use super::poly::Poly;
use super::{FieldError, Gf2k};

/// Exponent vector (one entry per variable) to coefficient.
pub type Sparse = BTreeMap<Vec<u32>, u32>;

const MAX_EXPONENT: u32 = 4096;

pub fn parse_field(text: &str) -> Result<Gf2k, FieldError> {
    let s: String = text
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect::<String>()
        .to_ascii_lowercase();
    if s == "gf2" || s == "gf(2)" {
        return Ok(Gf2k::gf2());
    }
    // gf4, gf8, ... with the default modulus
    if let Some(q) = s.strip_prefix("gf").and_then(|r| r.parse::<u64>().ok()) {
        if q.is_power_of_two() && q > 1 {
            return Gf2k::with_default_modulus(q.trailing_zeros());
        }
    }
    let inner = s
        .strip_prefix("gf(2^")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| {
            FieldError::Parse(format!(
                "unknown field spec {text:?}; expected gf2, gf4, ..., or gf(2^k; modulus=...)"
            ))
        })?;
    let (k_str, modulus) = match inner.split_once(';') {
        Some((k, m)) => {
            let m = m
                .strip_prefix("modulus=")
                .ok_or_else(|| FieldError::Parse(format!("expected 'modulus=' in {text:?}")))?;
            (k, Some(m))
        }
        None => (inner, None),
    };
    let k: u32 = k_str
        .parse()
        .map_err(|_| FieldError::Parse(format!("bad extension degree {k_str:?}")))?;
    match modulus {
        None => Gf2k::with_default_modulus(k),
        Some(m) => {
            let sparse = parse_sparse(m, Gf2k::gf2(), &['g'])?;
            let mut bits = 0u64;
            for (e, c) in sparse {
                if c == 1 {
                    if e[0] > 32 {
                        return Err(FieldError::BadDegree(e[0]));
                    }
                    bits |= 1 << e[0];
                }
            }
            if bits >> 32 != 0 {
                return Err(FieldError::BadDegree(63 - bits.leading_zeros()));
            }
            Gf2k::new(k, bits as u32)
        }
    }
}

pub fn parse_poly(text: &str, field: Gf2k) -> Result<Poly, FieldError> {
    let sparse = parse_sparse(text, field, &['t'])?;
    let deg = sparse.keys().map(|e| e[0] as usize).max().unwrap_or(0);
    let mut v = vec![0u32; deg + 1];
    for (e, c) in sparse {
        v[e[0] as usize] = c;
    }
    Ok(Poly::new(field, v))
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    field: Gf2k,
    vars: &'a [char],
}

fn mul(field: Gf2k, a: &Sparse, b: &Sparse) -> Sparse {
    let mut out = Sparse::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            let c = field.mul(*ca, *cb);
            let entry = out.entry(e).or_insert(0);
            *entry ^= c;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn add_into(a: &mut Sparse, b: Sparse) {
    for (e, c) in b {
        let entry = a.entry(e).or_insert(0);
        *entry ^= c;
    }
    a.retain(|_, c| *c != 0);
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn err(&self, msg: &str) -> FieldError {
        FieldError::Parse(format!("{msg} at position {}", self.pos))
    }

    fn constant(&self, c: u32) -> Sparse {
        let mut m = Sparse::new();
        if c != 0 {
            m.insert(vec![0; self.vars.len()], c);
        }
        m
    }

    fn number(&mut self) -> Result<u64, FieldError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let digits = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        if digits.is_empty() {
            return Err(self.err("expected a number"));
        }
        digits
            .parse::<u64>()
            .map_err(|_| self.err("number too large"))
    }

    fn expr(&mut self) -> Result<Sparse, FieldError> {
        let mut acc = self.term()?;
        while matches!(self.peek(), Some(b'+' | b'-')) {
            self.pos += 1;
            let t = self.term()?;
            add_into(&mut acc, t);
        }
        Ok(acc)
    }

    fn starts_factor(&self) -> bool {
        match self.peek() {
            Some(c) => c == b'(' || c.is_ascii_digit() || c.is_ascii_alphabetic(),
            None => false,
        }
    }

    fn term(&mut self) -> Result<Sparse, FieldError> {
        let mut acc = self.factor()?;
        loop {
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else if !self.starts_factor() {
                break;
            }
            let f = self.factor()?;
            acc = mul(self.field, &acc, &f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Sparse, FieldError> {
        let base = match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                e
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.number()?;
                self.constant((n & 1) as u32)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                self.pos += 1;
                let ch = c as char;
                if let Some(i) = self.vars.iter().position(|&v| v == ch) {
                    let mut e = vec![0; self.vars.len()];
                    e[i] = 1;
                    let mut m = Sparse::new();
                    m.insert(e, 1);
                    m
                } else if ch == 'g' {
                    if self.field.k() == 1 {
                        return Err(self.err("generator g is not available over gf2"));
                    }
                    self.constant(2)
                } else {
                    return Err(self.err(&format!("unknown symbol '{ch}'")));
                }
            }
            _ => return Err(self.err("expected a term")),
        };
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let e = self.number()?;
        if e > MAX_EXPONENT as u64 {
            return Err(self.err("exponent too large"));
        }
        let mut acc = self.constant(1);
        for _ in 0..e {
            acc = mul(self.field, &acc, &base);
        }
        Ok(acc)
    }
}

/// Parse a polynomial in `vars` over `field`.
pub fn parse_sparse(text: &str, field: Gf2k, vars: &[char]) -> Result<Sparse, FieldError> {
    let cleaned: Vec<u8> = text.bytes().filter(|c| !c.is_ascii_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(FieldError::Parse("empty polynomial".into()));
    }
    let mut p = Parser {
        s: &cleaned,
        pos: 0,
        field,
        vars,
    };
    let v = p.expr()?;
    if p.pos != cleaned.len() {
        return Err(p.err("unexpected character"));
    }
    Ok(v)
}
