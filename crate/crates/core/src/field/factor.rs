//! Factorization over `GF(2^k)`: squarefree decomposition, distinct-degree
//! splitting, then equal-degree splitting by the trace map.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::poly::Poly;
use super::FieldError;

/// `f = prod g_i^i` with each `g_i` squarefree and pairwise coprime.
/// Returns `(g, multiplicity)` for nonconstant `g`, input made monic.
pub fn squarefree_decomposition(f: &Poly) -> Result<Vec<(Poly, u32)>, FieldError> {
    if f.is_zero() {
        return Err(FieldError::ZeroPolynomial);
    }
    let mut out = Vec::new();
    sqf(&f.monic(), 1, &mut out);
    Ok(out)
}

fn sqf(f: &Poly, scale: u32, out: &mut Vec<(Poly, u32)>) {
    if f.degree() == Some(0) {
        return;
    }
    let mut c = f.gcd(&f.derivative());
    let mut w = f.div_exact(&c).unwrap();
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.div_exact(&y).unwrap();
        if !fac.is_one() {
            out.push((fac, i * scale));
        }
        w = y;
        c = c.div_exact(&w).unwrap();
        i += 1;
    }
    if !c.is_one() {
        // what remains is a polynomial in t^2
        let root = c.sqrt().expect("remaining factor has zero derivative");
        sqf(&root, 2 * scale, out);
    }
}

/// Pairs `(g, d)` where `g` is the product of all irreducible factors of
/// degree `d` of the squarefree monic `f`.
fn distinct_degree(f: &Poly) -> Vec<(Poly, usize)> {
    let field = f.field();
    let t = Poly::t(field);
    let mut rest = f.clone();
    let mut h = t.clone();
    let mut out = Vec::new();
    let mut d = 1;
    while rest.degree().unwrap_or(0) >= 2 * d {
        h = h.frobenius_mod(field.k(), &rest);
        let g = rest.gcd(&h.add(&t));
        if !g.is_one() {
            rest = rest.div_exact(&g).unwrap();
            h = h.rem(&rest);
            out.push((g, d));
        }
        d += 1;
    }
    if rest.degree().unwrap_or(0) > 0 {
        let d = rest.degree().unwrap();
        out.push((rest, d));
    }
    out
}

/// Splits a product of distinct irreducibles of degree `d`.
fn equal_degree(f: &Poly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Poly>) {
    let n = f.degree().unwrap();
    if n == d {
        out.push(f.clone());
        return;
    }
    let field = f.field();
    let bits = field.k() as usize * d;
    loop {
        let a = Poly::new(
            field,
            (0..n).map(|_| rng.gen_range(0..field.order())).collect(),
        );
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        // trace of GF(q^d) over GF(2): a + a^2 + ... + a^(2^(kd-1))
        let mut tr = a.rem(f);
        let mut p = tr.clone();
        for _ in 1..bits {
            p = p.square().rem(f);
            tr = tr.add(&p);
        }
        let g = f.gcd(&tr);
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < n {
            equal_degree(&g, d, rng, out);
            equal_degree(&f.div_exact(&g).unwrap(), d, rng, out);
            return;
        }
    }
}

/// Monic irreducible factors with multiplicities, sorted by degree then
/// coefficients.
pub fn poly_factor(f: &Poly) -> Result<Vec<(Poly, u32)>, FieldError> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6b33);
    let mut out = Vec::new();
    for (g, mult) in squarefree_decomposition(f)? {
        for (h, d) in distinct_degree(&g) {
            let mut irr = Vec::new();
            equal_degree(&h, d, &mut rng, &mut irr);
            out.extend(irr.into_iter().map(|p| (p, mult)));
        }
    }
    out.sort_by(|(a, _), (b, _)| {
        a.degree()
            .cmp(&b.degree())
            .then_with(|| a.coeffs().iter().rev().cmp(b.coeffs().iter().rev()))
    });
    Ok(out)
}

/// No factor of degree `<= deg/2`: `gcd(f, t^(q^i) - t) = 1` for those `i`.
pub fn is_irreducible(f: &Poly) -> bool {
    let Some(n) = f.degree() else { return false };
    if n == 0 {
        return false;
    }
    let field = f.field();
    let t = Poly::t(field);
    let mut h = t.clone();
    for _ in 1..=n / 2 {
        h = h.frobenius_mod(field.k(), f);
        if !f.gcd(&h.add(&t)).is_one() {
            return false;
        }
    }
    true
}
