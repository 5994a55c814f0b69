//! Discriminant group `A_L = L*/L` with its quadratic form `q_L` and
//! bilinear form `b_L`, computed from the Smith normal form of the Gram
//! matrix.
//!
//! The Gauss-sum signature is evaluated by enumerating the group. Generators
//! are first split into blocks that are mutually orthogonal under `b_L`; the
//! sum factors over blocks, so only each block has to be enumerated.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::matrix::{smith_normal_form, RatMatrix};
use super::{IntegerLattice, LatticeError};
use crate::json::{fracs, ints, JsonInt};

/// Blocks larger than this are not enumerated.
pub const ENUMERATION_LIMIT: u64 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SignatureMethod {
    /// Sum evaluated in `Z[exp(i pi / 4)]`.
    Exact,
    /// Direction picked from a floating-point evaluation, with the modulus and
    /// angle checked against the eight admissible values.
    Numeric,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GaussSignature {
    pub value: u8,
    pub method: SignatureMethod,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscriminantForm {
    /// Nontrivial invariant factors `d_1 | d_2 | ...`.
    pub invariant_factors: Vec<BigInt>,
    /// Generator `g_i` of order `d_i`, in lattice-basis coordinates.
    pub generators: Vec<Vec<BigRational>>,
    /// `q(g_i)` reduced into `[0, 2)`.
    pub q_values: Vec<BigRational>,
    /// `b(g_i, g_j)` reduced into `[0, 1)`.
    pub b_matrix: Vec<Vec<BigRational>>,
    pub length: usize,
    pub order: BigInt,
    /// `None` when the group is too large to decide and not 2-elementary.
    pub type_i: Option<bool>,
    pub gauss_signature: Option<GaussSignature>,
}

pub fn mod2(x: &BigRational) -> BigRational {
    let two = BigRational::from_integer(2.into());
    x - &two * (x / &two).floor()
}

pub fn mod1(x: &BigRational) -> BigRational {
    x - x.floor()
}

fn pair_rat(gram: &RatMatrix, x: &[BigRational], y: &[BigRational]) -> BigRational {
    let gy = gram.mul_vec(y);
    x.iter()
        .zip(&gy)
        .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
}

/// Discriminant form of a non-degenerate even lattice.
pub fn discriminant_form(l: &IntegerLattice) -> DiscriminantForm {
    let snf = smith_normal_form(l.gram());
    let gram = l.gram().to_rational();
    let n = l.rank();

    let mut factors = Vec::new();
    let mut generators = Vec::new();
    for (i, d) in snf.invariant_factors.iter().enumerate() {
        debug_assert!(!d.is_zero());
        if d.is_one() {
            continue;
        }
        let g: Vec<BigRational> = (0..n)
            .map(|r| BigRational::new(snf.right[(r, i)].clone(), d.clone()))
            .collect();
        factors.push(d.clone());
        generators.push(g);
    }

    let q_values: Vec<BigRational> = generators
        .iter()
        .map(|g| mod2(&pair_rat(&gram, g, g)))
        .collect();
    let b_matrix: Vec<Vec<BigRational>> = generators
        .iter()
        .map(|x| {
            generators
                .iter()
                .map(|y| mod1(&pair_rat(&gram, x, y)))
                .collect()
        })
        .collect();
    let order = factors.iter().fold(BigInt::one(), |a, d| a * d);

    let mut form = DiscriminantForm {
        length: factors.len(),
        invariant_factors: factors,
        generators,
        q_values,
        b_matrix,
        order,
        type_i: None,
        gauss_signature: None,
    };
    let analysis = form.analyse_blocks();
    form.type_i = analysis.type_i;
    form.gauss_signature = analysis.signature;
    form
}

/// Whether `q` takes only integral values (mod 2) on the whole group.
pub fn is_type_i(form: &DiscriminantForm) -> Result<bool, LatticeError> {
    form.type_i
        .ok_or_else(|| LatticeError::GroupTooLarge(form.order.clone()))
}

struct Analysis {
    type_i: Option<bool>,
    signature: Option<GaussSignature>,
}

impl DiscriminantForm {
    pub fn is_two_elementary(&self) -> bool {
        self.invariant_factors.iter().all(|d| *d == BigInt::from(2))
    }

    /// `q(sum c_i g_i)` in `[0, 2)`.
    pub fn q_of(&self, coeffs: &[BigInt]) -> BigRational {
        let mut acc = BigRational::zero();
        for (i, ci) in coeffs.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            let c = BigRational::from_integer(ci.clone());
            acc += &c * &c * &self.q_values[i];
            for (j, cj) in coeffs.iter().enumerate().skip(i + 1) {
                let cj = BigRational::from_integer(cj.clone());
                acc += BigRational::from_integer(2.into()) * &c * &cj * &self.b_matrix[i][j];
            }
        }
        mod2(&acc)
    }

    /// Invariants deciding isometry of 2-elementary forms.
    pub fn two_elementary_invariants(&self) -> Option<(usize, bool, u8)> {
        if !self.is_two_elementary() {
            return None;
        }
        Some((self.length, self.type_i?, self.gauss_signature?.value))
    }

    fn analyse_blocks(&self) -> Analysis {
        let r = self.length;
        if r == 0 {
            return Analysis {
                type_i: Some(true),
                signature: Some(GaussSignature {
                    value: 0,
                    method: SignatureMethod::Exact,
                }),
            };
        }
        let denom = self
            .q_values
            .iter()
            .chain(self.b_matrix.iter().flatten())
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let Some(m) = denom.to_i64().filter(|&m| m < (1 << 40)) else {
            return Analysis {
                type_i: None,
                signature: None,
            };
        };
        let scaled = |x: &BigRational| {
            (x * BigRational::from_integer(m.into()))
                .to_integer()
                .to_i64()
                .unwrap()
        };
        let q: Vec<i64> = self.q_values.iter().map(scaled).collect();
        let b: Vec<Vec<i64>> = self
            .b_matrix
            .iter()
            .map(|row| row.iter().map(scaled).collect())
            .collect();
        let orders: Vec<Option<u64>> = self.invariant_factors.iter().map(|d| d.to_u64()).collect();

        let mut type_i = Some(true);
        let mut sig: Option<(u8, SignatureMethod)> = Some((0, SignatureMethod::Exact));
        for block in orthogonal_blocks(&b) {
            let two_elem = block.iter().all(|&i| orders[i] == Some(2));
            let size = block.iter().try_fold(1u64, |acc, &i| {
                orders[i]
                    .and_then(|d| acc.checked_mul(d))
                    .filter(|&s| s <= ENUMERATION_LIMIT)
            });
            match size {
                Some(size) => {
                    let ds: Vec<u64> = block.iter().map(|&i| orders[i].unwrap()).collect();
                    let qs: Vec<i64> = block.iter().map(|&i| q[i]).collect();
                    let bs: Vec<Vec<i64>> = block
                        .iter()
                        .map(|&i| block.iter().map(|&j| b[i][j]).collect())
                        .collect();
                    let e = enumerate_block(&ds, &qs, &bs, m, size);
                    if !e.integral {
                        type_i = type_i.map(|_| false);
                    }
                    sig = match (sig, block_signature(&e.counts, m, size)) {
                        (Some((s, m1)), Some((t, m2))) => Some((
                            (s + t) % 8,
                            if m1 == SignatureMethod::Exact && m2 == SignatureMethod::Exact {
                                SignatureMethod::Exact
                            } else {
                                SignatureMethod::Numeric
                            },
                        )),
                        _ => None,
                    };
                }
                None => {
                    sig = None;
                    if two_elem {
                        if block.iter().any(|&i| q[i] % m != 0) {
                            type_i = type_i.map(|_| false);
                        }
                    } else if type_i == Some(true) {
                        type_i = None;
                    }
                }
            }
        }
        Analysis {
            type_i,
            signature: sig.map(|(value, method)| GaussSignature { value, method }),
        }
    }

    pub fn to_json(&self) -> DiscriminantJson {
        DiscriminantJson {
            invariant_factors: ints(&self.invariant_factors),
            order: JsonInt(self.order.clone()),
            length: self.length,
            generators: self.generators.iter().map(|g| fracs(g)).collect(),
            q_values: fracs(&self.q_values),
            b_matrix: self.b_matrix.iter().map(|r| fracs(r)).collect(),
            type_i: self.type_i,
            gauss_signature_mod8: self.gauss_signature.map(|g| g.value),
            gauss_method: self.gauss_signature.map(|g| g.method),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DiscriminantJson {
    pub invariant_factors: Vec<JsonInt>,
    pub order: JsonInt,
    pub length: usize,
    pub generators: Vec<Vec<String>>,
    pub q_values: Vec<String>,
    pub b_matrix: Vec<Vec<String>>,
    #[serde(rename = "type_I")]
    pub type_i: Option<bool>,
    pub gauss_signature_mod8: Option<u8>,
    pub gauss_method: Option<SignatureMethod>,
}

/// Connected components of the graph joining generators with `b != 0`.
fn orthogonal_blocks(b: &[Vec<i64>]) -> Vec<Vec<usize>> {
    let r = b.len();
    let mut seen = vec![false; r];
    let mut blocks = Vec::new();
    for start in 0..r {
        if seen[start] {
            continue;
        }
        let mut stack = vec![start];
        let mut comp = Vec::new();
        seen[start] = true;
        while let Some(i) = stack.pop() {
            comp.push(i);
            for j in 0..r {
                if !seen[j] && b[i][j] != 0 {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        comp.sort_unstable();
        blocks.push(comp);
    }
    blocks
}

struct BlockEnumeration {
    /// `counts[k]` = number of elements with `q = k / m (mod 2)`.
    counts: Vec<u64>,
    integral: bool,
}

/// Walks every element of the block by odometer steps, each step a sequence
/// of generator additions `q(x + g) = q(x) + q(g) + 2 b(x, g)`.
fn enumerate_block(
    orders: &[u64],
    q: &[i64],
    b: &[Vec<i64>],
    m: i64,
    size: u64,
) -> BlockEnumeration {
    let r = orders.len();
    let two_m = 2 * m;
    let mut counts = vec![0u64; two_m as usize];
    let mut digits = vec![0u64; r];
    let mut w = vec![0i64; r]; // w[k] = b(x, g_k) * m  mod m
    let mut cur = 0i64;
    let mut integral = true;
    let add = |i: usize, cur: &mut i64, w: &mut [i64]| {
        *cur = (*cur + q[i] + 2 * w[i]).rem_euclid(two_m);
        for k in 0..r {
            w[k] = (w[k] + b[i][k]).rem_euclid(m);
        }
    };
    for _ in 0..size {
        counts[cur as usize] += 1;
        if cur % m != 0 {
            integral = false;
        }
        let mut i = 0;
        while i < r {
            add(i, &mut cur, &mut w);
            digits[i] += 1;
            if digits[i] < orders[i] {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
    BlockEnumeration { counts, integral }
}

/// Signature `s` with `sum exp(i pi q) = sqrt(|A|) exp(i pi s / 4)`.
fn block_signature(counts: &[u64], m: i64, size: u64) -> Option<(u8, SignatureMethod)> {
    let two_m = 2 * m as usize;
    if 8 % two_m == 0 {
        // element of Z[z], z = exp(i pi/4), z^4 = -1
        let step = 8 / two_m;
        let mut g = [0i64; 4];
        for (k, &c) in counts.iter().enumerate() {
            let e = k * step;
            let sign = if e >= 4 { -1 } else { 1 };
            g[e % 4] += sign * c as i64;
        }
        for s in 0..8u8 {
            let h = rotate(g, 8 - s as usize);
            // real elements are c0 + c1 sqrt2 with sqrt2 = z - z^3
            if h[2] != 0 || h[1] != -h[3] {
                continue;
            }
            let (c0, c1) = (h[0], h[1]);
            if c0 * c1 != 0 || c0 < 0 || c1 < 0 {
                continue;
            }
            if (c0 * c0 + 2 * c1 * c1) as u64 == size {
                return Some((s, SignatureMethod::Exact));
            }
        }
        return None;
    }
    let (mut re, mut im) = (0f64, 0f64);
    for (k, &c) in counts.iter().enumerate() {
        let angle = PI * k as f64 / m as f64;
        re += c as f64 * angle.cos();
        im += c as f64 * angle.sin();
    }
    let modulus = (re * re + im * im).sqrt();
    let expected = (size as f64).sqrt();
    if (modulus - expected).abs() > 1e-6 * expected {
        return None;
    }
    let theta = im.atan2(re);
    let s = (theta / (PI / 4.0)).round();
    if (theta - s * PI / 4.0).abs() > 1e-6 {
        return None;
    }
    Some(((s as i64).rem_euclid(8) as u8, SignatureMethod::Numeric))
}

/// Multiply by `z^k`.
fn rotate(g: [i64; 4], k: usize) -> [i64; 4] {
    let mut out = g;
    for _ in 0..k % 8 {
        out = [-out[3], out[0], out[1], out[2]];
    }
    out
}
