//! Finite fields `GF(2^k)`, `k <= 16`, and polynomials over them.
//!
//! Field elements are `u32` bit vectors in the polynomial basis
//! `1, g, g^2, ...` where `g` is a root of the modulus.

pub mod factor;
pub mod parse;
pub mod poly;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use factor::{is_irreducible, poly_factor, squarefree_decomposition};
pub use parse::{parse_field, parse_poly, parse_sparse};
pub use poly::Poly;

pub const MAX_DEGREE: u32 = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("extension degree {0} is outside 1..=16")]
    BadDegree(u32),
    #[error("modulus {0} is not irreducible over GF(2)")]
    NotIrreducible(String),
    #[error("modulus {modulus} has degree {got}, expected {want}")]
    ModulusDegree {
        modulus: String,
        got: u32,
        want: u32,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("zero polynomial")]
    ZeroPolynomial,
}

/// `GF(2^k)` given by an irreducible modulus over `GF(2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Gf2k {
    k: u32,
    /// bit `i` is the coefficient of `g^i`, including the leading bit `k`
    modulus: u32,
}

/// Carry-less product of two bit polynomials.
pub fn clmul(a: u64, b: u64) -> u64 {
    let mut r = 0;
    let mut b = b;
    let mut i = 0;
    while b != 0 {
        if b & 1 == 1 {
            r ^= a << i;
        }
        b >>= 1;
        i += 1;
    }
    r
}

fn bit_degree(a: u64) -> i32 {
    63 - a.leading_zeros() as i32
}

fn bit_rem(mut a: u64, m: u64) -> u64 {
    let dm = bit_degree(m);
    while a != 0 && bit_degree(a) >= dm {
        a ^= m << (bit_degree(a) - dm);
    }
    a
}

fn bit_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = bit_rem(a, b);
        a = b;
        b = r;
    }
    a
}

fn bit_mulmod(a: u64, b: u64, m: u64) -> u64 {
    bit_rem(clmul(a, b), m)
}

/// Irreducibility over `GF(2)`: no common factor with `x^(2^d) - x` for
/// `d <= deg/2`.
pub fn is_irreducible_gf2(m: u64) -> bool {
    let n = bit_degree(m);
    if n < 1 {
        return false;
    }
    let mut h = 0b10u64; // x
    for _ in 1..=n / 2 {
        h = bit_mulmod(h, h, m);
        if bit_gcd(m, h ^ 0b10) != 1 {
            return false;
        }
    }
    true
}

fn bits_to_string(m: u64, var: char) -> String {
    if m == 0 {
        return "0".into();
    }
    let mut terms = Vec::new();
    for i in (0..64).rev() {
        if m >> i & 1 == 1 {
            terms.push(match i {
                0 => "1".to_string(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            });
        }
    }
    terms.join("+")
}

impl Gf2k {
    pub fn gf2() -> Self {
        Gf2k {
            k: 1,
            modulus: 0b11,
        }
    }

    pub fn new(k: u32, modulus: u32) -> Result<Self, FieldError> {
        if !(1..=MAX_DEGREE).contains(&k) {
            return Err(FieldError::BadDegree(k));
        }
        let got = bit_degree(modulus as u64).max(0) as u32;
        if got != k {
            return Err(FieldError::ModulusDegree {
                modulus: bits_to_string(modulus as u64, 'g'),
                got,
                want: k,
            });
        }
        if !is_irreducible_gf2(modulus as u64) {
            return Err(FieldError::NotIrreducible(bits_to_string(
                modulus as u64,
                'g',
            )));
        }
        Ok(Gf2k { k, modulus })
    }

    /// `GF(2^k)` with the numerically smallest irreducible modulus.
    pub fn with_default_modulus(k: u32) -> Result<Self, FieldError> {
        if !(1..=MAX_DEGREE).contains(&k) {
            return Err(FieldError::BadDegree(k));
        }
        let m = (1u32 << k..1u32 << (k + 1))
            .find(|&m| is_irreducible_gf2(m as u64))
            .unwrap();
        Gf2k::new(k, m)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn order(&self) -> u32 {
        1 << self.k
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.order()
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        a ^ b
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            return a & b;
        }
        bit_rem(clmul(a as u64, b as u64), self.modulus as u64) as u32
    }

    pub fn square(&self, a: u32) -> u32 {
        self.mul(a, a)
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `inv(0)` is 0.
    pub fn inv(&self, a: u32) -> u32 {
        self.pow(a, (self.order() - 2) as u64)
    }

    /// Inverse Frobenius: the unique `b` with `b^2 = a`.
    pub fn sqrt(&self, a: u32) -> u32 {
        let mut b = a;
        for _ in 1..self.k {
            b = self.square(b);
        }
        b
    }

    pub fn element_to_string(&self, a: u32) -> String {
        bits_to_string(a as u64, 'g')
    }

    /// Whether the element is a single term (`1`, `g`, `g^i`).
    pub fn is_monomial(&self, a: u32) -> bool {
        a.count_ones() == 1
    }
}

impl fmt::Display for Gf2k {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            write!(f, "gf2")
        } else {
            write!(
                f,
                "gf(2^{}; modulus={})",
                self.k,
                bits_to_string(self.modulus as u64, 'g')
            )
        }
    }
}

impl FromStr for Gf2k {
    type Err = FieldError;
    fn from_str(s: &str) -> Result<Self, FieldError> {
        parse_field(s)
    }
}
