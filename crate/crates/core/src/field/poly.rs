//! Dense univariate polynomials over `GF(2^k)` in the variable `t`.

use std::fmt;

use super::Gf2k;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Gf2k,
    /// ascending degree, no trailing zeros
    coeffs: Vec<u32>,
}

impl Poly {
    pub fn new(field: Gf2k, mut coeffs: Vec<u32>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    /// Polynomial over `GF(2)` from `u64` bits.
    pub fn from_bits(field: Gf2k, bits: u64) -> Self {
        Poly::new(field, (0..64).map(|i| (bits >> i & 1) as u32).collect())
    }

    pub fn zero(field: Gf2k) -> Self {
        Poly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: Gf2k) -> Self {
        Poly::constant(field, 1)
    }

    pub fn constant(field: Gf2k, c: u32) -> Self {
        Poly::new(field, vec![c])
    }

    /// `c t^n`
    pub fn monomial(field: Gf2k, c: u32, n: usize) -> Self {
        let mut v = vec![0; n + 1];
        v[n] = c;
        Poly::new(field, v)
    }

    /// The polynomial `t`.
    pub fn t(field: Gf2k) -> Self {
        Poly::monomial(field, 1, 1)
    }

    pub fn field(&self) -> Gf2k {
        self.field
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with `deg 0 = -1`, convenient for the floor formulas.
    pub fn deg_i(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn leading(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    /// Multiplicity of `t` as a factor; `None` for zero.
    pub fn low_order(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(
            self.field,
            (0..n).map(|i| self.coeff(i) ^ other.coeff(i)).collect(),
        )
    }

    pub fn scale(&self, c: u32) -> Poly {
        Poly::new(
            self.field,
            self.coeffs.iter().map(|&a| self.field.mul(a, c)).collect(),
        )
    }

    /// Multiply by `t^n`.
    pub fn shift(&self, n: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![0; n];
        v.extend_from_slice(&self.coeffs);
        Poly::new(self.field, v)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.field);
        }
        let mut v = vec![0u32; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                v[i + j] ^= self.field.mul(a, b);
            }
        }
        Poly::new(self.field, v)
    }

    pub fn square(&self) -> Poly {
        // (sum c_i t^i)^2 = sum c_i^2 t^(2i) in characteristic 2
        let mut v = vec![0u32; 2 * self.coeffs.len()];
        for (i, &c) in self.coeffs.iter().enumerate() {
            v[2 * i] = self.field.square(c);
        }
        Poly::new(self.field, v)
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let inv = self.field.inv(d.leading());
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly::zero(self.field), self.clone());
        }
        let mut q = vec![0u32; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = r[i];
            if c == 0 {
                continue;
            }
            let f = self.field.mul(c, inv);
            q[i - dd] = f;
            for (j, &b) in d.coeffs.iter().enumerate() {
                r[i - dd + j] ^= self.field.mul(f, b);
            }
        }
        r.truncate(dd);
        (Poly::new(self.field, q), Poly::new(self.field, r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).1
    }

    /// Exact division; `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &Poly) -> bool {
        other.rem(self).is_zero()
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.field.inv(self.leading()))
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Formal derivative: only odd-degree terms survive.
    pub fn derivative(&self) -> Poly {
        let v = (1..self.coeffs.len())
            .map(|i| if i % 2 == 1 { self.coeffs[i] } else { 0 })
            .collect();
        Poly::new(self.field, v)
    }

    /// Square root of a polynomial in `t^2`, i.e. with zero derivative.
    pub fn sqrt(&self) -> Option<Poly> {
        if self
            .coeffs
            .iter()
            .enumerate()
            .any(|(i, &c)| i % 2 == 1 && c != 0)
        {
            return None;
        }
        let v = self
            .coeffs
            .iter()
            .step_by(2)
            .map(|&c| self.field.sqrt(c))
            .collect();
        Some(Poly::new(self.field, v))
    }

    pub fn eval(&self, x: u32) -> u32 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| self.field.mul(acc, x) ^ c)
    }

    pub fn mul_mod(&self, other: &Poly, m: &Poly) -> Poly {
        self.mul(other).rem(m)
    }

    /// `self^(2^j) mod m` by repeated squaring.
    pub fn frobenius_mod(&self, j: u32, m: &Poly) -> Poly {
        let mut a = self.rem(m);
        for _ in 0..j {
            a = a.square().rem(m);
        }
        a
    }

    /// `t^w f(1/t)`; requires `deg f <= w`.
    pub fn reversed(&self, w: usize) -> Poly {
        assert!(self.degree().is_none_or(|d| d <= w), "weight below degree");
        let v = (0..=w).map(|i| self.coeff(w - i)).collect();
        Poly::new(self.field, v)
    }

    /// Largest `e` with `p^e | self`; `None` for the zero polynomial.
    pub fn valuation(&self, p: &Poly) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        let mut e = 0;
        let mut f = self.clone();
        while let Some(q) = f.div_exact(p) {
            f = q;
            e += 1;
        }
        Some(e)
    }

    fn coeff_string(&self, c: u32, with_term: bool) -> String {
        let s = self.field.element_to_string(c);
        if c == 1 && with_term {
            String::new()
        } else if with_term {
            if self.field.is_monomial(c) {
                format!("{s}*")
            } else {
                format!("({s})*")
            }
        } else if self.field.is_monomial(c) {
            s
        } else {
            format!("({s})")
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for i in (0..self.coeffs.len()).rev() {
            let c = self.coeffs[i];
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", self.coeff_string(c, false))?,
                1 => write!(f, "{}t", self.coeff_string(c, true))?,
                _ => write!(f, "{}t^{i}", self.coeff_string(c, true))?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf2(bits: u64) -> Poly {
        Poly::from_bits(Gf2k::gf2(), bits)
    }

    #[test]
    fn division_identity() {
        let f = gf2(0b1_0000_0000_0001_0000_0011); // t^20+t^8+t+1
        let d = gf2(0b100101);
        let (q, r) = f.div_rem(&d);
        assert_eq!(q.mul(&d).add(&r), f);
        assert!(r.degree().unwrap_or(0) < 5);
    }

    #[test]
    fn derivative_and_sqrt() {
        let f = gf2(0b100101); // t^5+t^2+1
        assert_eq!(f.derivative(), gf2(0b10000)); // t^4
        assert_eq!(f.square().sqrt(), Some(f.clone()));
        assert_eq!(f.sqrt(), None);
        assert_eq!(f.pow(4), gf2(1 << 20 | 1 << 8 | 1));
    }

    #[test]
    fn gcd_and_valuation() {
        let a = gf2(0b111); // t^2+t+1
        let b = gf2(0b11); // t+1
        let f = a.pow(3).mul(&b);
        assert_eq!(f.gcd(&a.mul(&gf2(0b10))), a);
        assert_eq!(f.valuation(&a), Some(3));
        assert_eq!(f.valuation(&b), Some(1));
        assert_eq!(f.valuation(&gf2(0b10)), Some(0));
    }

    #[test]
    fn reversal() {
        let f = gf2(0b1011); // t^3+t+1
        assert_eq!(f.reversed(5), gf2(0b110100)); // t^5+t^4+t^2
    }

    #[test]
    fn display_with_extension_coefficients() {
        let f = Gf2k::new(2, 0b111).unwrap();
        let p = Poly::new(f, vec![3, 0, 2, 1]);
        assert_eq!(p.to_string(), "t^3+g*t^2+(g+1)");
        assert_eq!(gf2(0b100101).to_string(), "t^5+t^2+1");
        assert_eq!(Poly::zero(f).to_string(), "0");
    }
}
