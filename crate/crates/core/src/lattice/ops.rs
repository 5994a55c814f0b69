//! Orthogonal sums, overlattices, complements and 2-divisibility.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::discriminant::{mod1, mod2};
use super::generated::GeneratedLattice;
use super::matrix::{smith_normal_form, IntMatrix};
use super::{DivisorClass, IntegerLattice, LatticeError};
use crate::json::frac;

/// An overlattice together with its basis in the coordinates of the
/// original lattice and its index over it.
#[derive(Clone, Debug)]
pub struct Overlattice {
    pub lattice: IntegerLattice,
    pub basis: Vec<Vec<BigRational>>,
    pub index: BigInt,
}

/// A sublattice given by integer basis vectors of the ambient lattice.
#[derive(Clone, Debug)]
pub struct Sublattice {
    pub lattice: IntegerLattice,
    pub basis: Vec<Vec<BigInt>>,
}

/// Primitive closure of a span. The induced Gram matrix may be degenerate,
/// so it is kept as a bare matrix.
#[derive(Clone, Debug)]
pub struct Closure {
    pub basis: Vec<Vec<BigInt>>,
    pub gram: IntMatrix,
    /// `[closure : span(S)]`
    pub index: BigInt,
}

impl Closure {
    pub fn lattice(&self) -> Result<IntegerLattice, LatticeError> {
        IntegerLattice::new(self.gram.clone())
    }
}

/// Glue generators: `pairs[i] = (x_i, y_i)` with `x_i` in `L*` and `y_i` in
/// `M*`, each in its own lattice's basis coordinates.
#[derive(Clone, Debug)]
pub struct GlueData {
    pub pairs: Vec<(Vec<BigRational>, Vec<BigRational>)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TwoDivisibility {
    Divisible {
        witness: Vec<BigInt>,
    },
    /// `D mod 2L`, nonzero.
    NotDivisible {
        residue: Vec<u8>,
    },
}

impl TwoDivisibility {
    pub fn is_divisible(&self) -> bool {
        matches!(self, TwoDivisibility::Divisible { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfClassTest {
    pub in_dual: bool,
    /// `q(D/2) = D^2/4 mod 2`, reported only when `D/2` is in the dual.
    pub q_value: Option<BigRational>,
}

pub fn direct_sum(l: &IntegerLattice, m: &IntegerLattice) -> IntegerLattice {
    let (a, b) = (l.rank(), m.rank());
    let mut g = IntMatrix::zeros(a + b, a + b);
    for i in 0..a {
        for j in 0..a {
            g[(i, j)] = l.gram()[(i, j)].clone();
        }
    }
    for i in 0..b {
        for j in 0..b {
            g[(a + i, a + j)] = m.gram()[(i, j)].clone();
        }
    }
    let label = match (l.label(), m.label()) {
        (Some(x), Some(y)) => Some(format!("{x}+{y}")),
        _ => None,
    };
    let sum = IntegerLattice::new(g).expect("orthogonal sum of non-degenerate even lattices");
    match label {
        Some(s) => sum.with_label(s),
        None => sum,
    }
}

fn rat_pair(l: &IntegerLattice, x: &[BigRational], y: &[BigRational]) -> BigRational {
    let g = l.gram().to_rational();
    let gy = g.mul_vec(y);
    x.iter()
        .zip(&gy)
        .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
}

fn in_dual(l: &IntegerLattice, v: &[BigRational]) -> bool {
    l.gram()
        .to_rational()
        .mul_vec(v)
        .iter()
        .all(|x| x.is_integer())
}

fn unit_vectors(n: usize) -> Vec<Vec<BigRational>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| BigRational::from_integer(((i == j) as i64).into()))
                .collect()
        })
        .collect()
}

fn overlattice(
    l: &IntegerLattice,
    extra: &[Vec<BigRational>],
) -> Result<Overlattice, LatticeError> {
    let mut gens = unit_vectors(l.rank());
    gens.extend(extra.iter().cloned());
    let over = GeneratedLattice::new(l.gram().to_rational(), &gens)?;
    let lattice = over.lattice()?;
    let ratio = (l.determinant() / lattice.determinant()).abs();
    let index = ratio.sqrt();
    Ok(Overlattice {
        lattice,
        basis: over.basis().to_vec(),
        index,
    })
}

/// Lattice generated by `L` and an order-2 glue vector `v`.
pub fn adjoin_glue(l: &IntegerLattice, v: &[BigRational]) -> Result<Overlattice, LatticeError> {
    if v.len() != l.rank() {
        return Err(LatticeError::DimensionMismatch {
            got: v.len(),
            rank: l.rank(),
        });
    }
    if !in_dual(l, v) {
        return Err(LatticeError::NotInDual);
    }
    let norm = rat_pair(l, v, v);
    if !norm.is_integer() || norm.to_integer().is_odd() {
        return Err(LatticeError::OddNorm(frac(&norm)));
    }
    let two = BigRational::from_integer(2.into());
    if v.iter().any(|x| !(x * &two).is_integer()) {
        return Err(LatticeError::GlueOrder(
            v.iter().map(frac).collect::<Vec<_>>().join(","),
        ));
    }
    overlattice(l, &[v.to_vec()])
}

/// Overlattice of `L + M` along the graph of the glue pairing.
pub fn glue(
    l: &IntegerLattice,
    m: &IntegerLattice,
    g: &GlueData,
) -> Result<Overlattice, LatticeError> {
    for (x, y) in &g.pairs {
        if x.len() != l.rank() {
            return Err(LatticeError::DimensionMismatch {
                got: x.len(),
                rank: l.rank(),
            });
        }
        if y.len() != m.rank() {
            return Err(LatticeError::DimensionMismatch {
                got: y.len(),
                rank: m.rank(),
            });
        }
        if !in_dual(l, x) || !in_dual(m, y) {
            return Err(LatticeError::NotInDual);
        }
    }
    for (i, (xi, yi)) in g.pairs.iter().enumerate() {
        let q = rat_pair(l, xi, xi) + rat_pair(m, yi, yi);
        if !mod2(&q).is_zero() {
            return Err(LatticeError::NotIsotropic(format!(
                "generator {i} has q = {}",
                frac(&mod2(&q))
            )));
        }
        for (j, (xj, yj)) in g.pairs.iter().enumerate().skip(i + 1) {
            let b = rat_pair(l, xi, xj) + rat_pair(m, yi, yj);
            if !mod1(&b).is_zero() {
                return Err(LatticeError::NotIsotropic(format!(
                    "generators {i},{j} pair to {}",
                    frac(&mod1(&b))
                )));
            }
        }
    }
    for (i, (x, y)) in g.pairs.iter().enumerate() {
        let (qx, qy) = (mod2(&rat_pair(l, x, x)), mod2(&rat_pair(m, y, y)));
        if mod2(&(&qx + &qy)) != BigRational::zero() {
            return Err(LatticeError::NotAntiIsometric(format!(
                "generator {i}: q_L = {}, q_M = {}",
                frac(&qx),
                frac(&qy)
            )));
        }
    }
    let sum = direct_sum(l, m);
    let extra: Vec<Vec<BigRational>> = g
        .pairs
        .iter()
        .map(|(x, y)| x.iter().chain(y).cloned().collect())
        .collect();
    overlattice(&sum, &extra)
}

fn class_matrix(l: &IntegerLattice, s: &[DivisorClass]) -> Result<IntMatrix, LatticeError> {
    let n = l.rank();
    let mut a = IntMatrix::zeros(n, s.len());
    for (j, c) in s.iter().enumerate() {
        if c.coords.len() != n {
            return Err(LatticeError::DimensionMismatch {
                got: c.coords.len(),
                rank: n,
            });
        }
        for i in 0..n {
            a[(i, j)] = c.coords[i].clone();
        }
    }
    Ok(a)
}

/// `{x in L : x.s = 0 for s in S}` on an integral basis.
pub fn orthogonal_complement(
    l: &IntegerLattice,
    s: &[DivisorClass],
) -> Result<Sublattice, LatticeError> {
    let a = class_matrix(l, s)?;
    let gram_s = a.transpose().mul(l.gram()).mul(&a);
    if s.is_empty() {
        return Err(LatticeError::DegenerateSpan);
    }
    if gram_s.determinant().is_zero() {
        return Err(LatticeError::DegenerateSpan);
    }
    // kernel of x -> (s_j . x)
    let pairing = a.transpose().mul(l.gram());
    let snf = smith_normal_form(&pairing);
    let basis: Vec<Vec<BigInt>> = (snf.rank()..l.rank()).map(|j| snf.right.col(j)).collect();
    if basis.is_empty() {
        return Err(LatticeError::ZeroComplement);
    }
    let gram = induced_gram(l, &basis);
    Ok(Sublattice {
        lattice: IntegerLattice::new(gram)?,
        basis,
    })
}

fn induced_gram(l: &IntegerLattice, basis: &[Vec<BigInt>]) -> IntMatrix {
    let k = basis.len();
    let mut g = IntMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            g[(i, j)] = l.pair(&basis[i], &basis[j]);
        }
    }
    g
}

/// `(span(S) (x) Q) /\ L` on an integral basis.
pub fn primitive_closure(l: &IntegerLattice, s: &[DivisorClass]) -> Result<Closure, LatticeError> {
    let a = class_matrix(l, s)?;
    let snf = smith_normal_form(&a);
    if snf.rank() < s.len() {
        return Err(LatticeError::Dependent);
    }
    let basis: Vec<Vec<BigInt>> = (0..s.len()).map(|j| snf.left_inv.col(j)).collect();
    let index = snf
        .invariant_factors
        .iter()
        .fold(BigInt::one(), |acc, d| acc * d);
    let gram = induced_gram(l, &basis);
    Ok(Closure { basis, gram, index })
}

/// Decide whether `D = 2x` for some `x` in `L`.
pub fn is_two_divisible(
    l: &IntegerLattice,
    d: &DivisorClass,
) -> Result<TwoDivisibility, LatticeError> {
    if d.coords.len() != l.rank() {
        return Err(LatticeError::DimensionMismatch {
            got: d.coords.len(),
            rank: l.rank(),
        });
    }
    if d.coords.iter().all(|c| c.is_even()) {
        let two = BigInt::from(2);
        return Ok(TwoDivisibility::Divisible {
            witness: d.coords.iter().map(|c| c / &two).collect(),
        });
    }
    let residue = d
        .coords
        .iter()
        .map(|c| c.mod_floor(&BigInt::from(2)) == BigInt::one())
        .map(u8::from)
        .collect();
    Ok(TwoDivisibility::NotDivisible { residue })
}

/// Necessary condition for `D/2` to be a lattice vector: `D/2` in `L*` and
/// `q(D/2)` integral when the form is of type I.
pub fn half_class_q_test(
    l: &IntegerLattice,
    d: &DivisorClass,
) -> Result<HalfClassTest, LatticeError> {
    if d.coords.len() != l.rank() {
        return Err(LatticeError::DimensionMismatch {
            got: d.coords.len(),
            rank: l.rank(),
        });
    }
    let in_dual = l.gram().mul_vec(&d.coords).iter().all(|x| x.is_even());
    let q_value = in_dual.then(|| mod2(&BigRational::new(d.self_int.clone(), BigInt::from(4))));
    Ok(HalfClassTest { in_dual, q_value })
}

/// Whether an even unimodular lattice of signature `(p, q)` exists. The
/// condition `p - q = 0 mod 8` is necessary in all cases and sufficient for
/// indefinite signatures and for definite ones (sums of `E8`).
pub fn even_unimodular_admissible(p: usize, q: usize) -> bool {
    (p as i64 - q as i64).rem_euclid(8) == 0 && p + q > 0
}

/// Express rational ambient coordinates as exact integers if possible.
pub fn integral(v: &[BigRational]) -> Option<Vec<BigInt>> {
    v.iter()
        .map(|x| x.is_integer().then(|| x.to_integer()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::discriminant::discriminant_form;
    use crate::lattice::expr::build_lattice;
    use crate::lattice::matrix::rat;

    fn lat(spec: &str) -> IntegerLattice {
        build_lattice(spec).unwrap().lattice
    }

    fn class(l: &IntegerLattice, c: &[i64]) -> DivisorClass {
        l.class_i64(c).unwrap()
    }

    #[test]
    fn sums() {
        let uu = direct_sum(&lat("U"), &lat("U"));
        assert_eq!((uu.rank(), uu.determinant()), (4, BigInt::one()));
        let a = direct_sum(&lat("A1"), &lat("A1"));
        assert_eq!(a.gram(), &IntMatrix::from_i64(&[vec![-2, 0], vec![0, -2]]));
        let s1 = direct_sum(&direct_sum(&lat("U"), &lat("D4")), &lat("E8^2"));
        assert_eq!((s1.rank(), s1.determinant().abs()), (22, BigInt::from(4)));
    }

    #[test]
    fn adjoin_half_sum() {
        let a8 = lat("A1^8");
        let over = adjoin_glue(&a8, &vec![rat(1, 2); 8]).unwrap();
        assert_eq!(over.lattice.determinant(), BigInt::from(64));
        assert_eq!(over.index, BigInt::from(2));
        let a4 = lat("A1^4");
        let d = adjoin_glue(&a4, &vec![rat(1, 2); 4]).unwrap();
        assert_eq!(d.lattice.determinant(), BigInt::from(4));
        // isometric to D4: same discriminant invariants
        let (f, g) = (discriminant_form(&d.lattice), discriminant_form(&lat("D4")));
        assert_eq!(f.two_elementary_invariants(), g.two_elementary_invariants());
        assert!(adjoin_glue(&lat("U"), &[rat(1, 2), rat(0, 1)]).is_err());
        assert!(matches!(
            adjoin_glue(&lat("A1^2"), &[rat(1, 2), rat(1, 2)]),
            Err(LatticeError::OddNorm(_))
        ));
    }

    #[test]
    fn glue_checks_isotropy() {
        let a1 = lat("A1");
        let h = GlueData {
            pairs: vec![(vec![rat(1, 2)], vec![rat(1, 2)])],
        };
        assert!(matches!(
            glue(&a1, &a1, &h),
            Err(LatticeError::NotIsotropic(_))
        ));

        let u2 = lat("U(2)");
        let h = GlueData {
            pairs: vec![(vec![rat(1, 2), rat(0, 1)], vec![rat(1, 2), rat(0, 1)])],
        };
        let over = glue(&u2, &u2, &h).unwrap();
        assert_eq!(over.index, BigInt::from(2));
        assert_eq!(over.lattice.determinant().abs(), BigInt::from(4));
    }

    #[test]
    fn glue_rejects_non_anti_isometry() {
        // q = 0 + 1 is not isotropic; a pair q_L = 1, q_M = 1 is anti-isometric
        let u2 = lat("U(2)");
        let d4 = lat("D4");
        let x = vec![rat(1, 2), rat(1, 2)];
        let f = discriminant_form(&d4);
        let y = f.generators[0].clone();
        let over = glue(
            &u2,
            &d4,
            &GlueData {
                pairs: vec![(x.clone(), y)],
            },
        )
        .unwrap();
        assert_eq!(over.index, BigInt::from(2));
        let bad = GlueData {
            pairs: vec![(vec![rat(1, 2), rat(0, 1)], f.generators[0].clone())],
        };
        assert!(glue(&u2, &d4, &bad).is_err());
    }

    #[test]
    fn complements() {
        let u = lat("U");
        assert_eq!(
            orthogonal_complement(&u, &[class(&u, &[1, 0])]).unwrap_err(),
            LatticeError::DegenerateSpan
        );
        let ua = lat("U+A1");
        let c = orthogonal_complement(&ua, &[class(&ua, &[0, 0, 1])]).unwrap();
        assert_eq!(c.lattice.rank(), 2);
        assert_eq!(c.lattice.determinant(), BigInt::from(-1));
        assert_eq!(c.lattice.signature(), (1, 1));
    }

    #[test]
    fn complement_in_glued_a1_power() {
        // in the explicit basis e_1..e_7, delta: e_1 - e_2 = (1,-1,0,...)
        let l = lat("~A1^8");
        let s = class(&l, &[1, -1, 0, 0, 0, 0, 0, 0]);
        let c = orthogonal_complement(&l, std::slice::from_ref(&s)).unwrap();
        assert_eq!(c.lattice.rank(), 7);
        // oracle: brute-force kernel over a box and compare determinants
        let det = c.lattice.determinant().abs();
        let expected = brute_force_complement_det(&l, &s);
        assert_eq!(det, expected);
    }

    /// `|det S| |det S^perp| = |det L| [L : Zs + s^perp]^2`, where the index is
    /// `|s.s| / g` for `g` the gcd of the pairings of `s` with a basis.
    fn brute_force_complement_det(l: &IntegerLattice, s: &DivisorClass) -> BigInt {
        let w = l.gram().mul_vec(&s.coords);
        let g = w.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        let ss = s.self_int.abs();
        let index = &ss / &g;
        l.determinant().abs() * &index * &index / ss
    }

    #[test]
    fn closures() {
        let l = lat("~A1^8");
        let e: Vec<DivisorClass> = (0..8)
            .map(|i| {
                let mut c = vec![0i64; 8];
                if i < 7 {
                    c[i] = 1;
                } else {
                    // e_8 = 2 delta - e_1 - ... - e_7
                    c = vec![-1, -1, -1, -1, -1, -1, -1, 2];
                }
                class(&l, &c)
            })
            .collect();
        let c = primitive_closure(&l, &e).unwrap();
        assert_eq!(c.index, BigInt::from(2));
        assert_eq!(c.lattice().unwrap().determinant(), BigInt::from(64));

        let u = lat("U");
        let c = primitive_closure(&u, &[class(&u, &[2, 0])]).unwrap();
        assert_eq!(c.index, BigInt::from(2));
        assert_eq!(c.gram, IntMatrix::from_i64(&[vec![0]]));
        assert_eq!(
            c.basis[0].iter().map(|x| x.abs()).collect::<Vec<_>>(),
            vec![BigInt::one(), BigInt::zero()]
        );

        let ua = lat("U+A1");
        let c = primitive_closure(&ua, &[class(&ua, &[0, 0, 1])]).unwrap();
        assert_eq!(c.index, BigInt::one());
    }

    #[test]
    fn two_divisibility() {
        let l = lat("~A1^8");
        let sum = class(&l, &[0, 0, 0, 0, 0, 0, 0, 2]);
        assert_eq!(
            is_two_divisible(&l, &sum).unwrap(),
            TwoDivisibility::Divisible {
                witness: [0, 0, 0, 0, 0, 0, 0, 1].map(BigInt::from).to_vec()
            }
        );
        let a = lat("A1^8");
        assert_eq!(
            is_two_divisible(&a, &class(&a, &[1; 8])).unwrap(),
            TwoDivisibility::NotDivisible {
                residue: vec![1; 8]
            }
        );
        let u = lat("U");
        assert!(is_two_divisible(&u, &class(&u, &[2, 2]))
            .unwrap()
            .is_divisible());
    }

    #[test]
    fn half_class_filter() {
        let a2 = lat("A2");
        assert!(
            !half_class_q_test(&a2, &class(&a2, &[1, 0]))
                .unwrap()
                .in_dual
        );
        // e/2 is in the dual of A1 but has q = -1/2, failing the type I filter
        let a1 = lat("A1");
        let t = half_class_q_test(&a1, &class(&a1, &[1])).unwrap();
        assert_eq!(t.q_value, Some(rat(3, 2)));
        let a4 = lat("A1^4");
        let t = half_class_q_test(&a4, &class(&a4, &[1, 1, 1, 1])).unwrap();
        assert!(t.in_dual);
        assert_eq!(t.q_value, Some(BigRational::zero()));
        // a class with D^2 = -24 and D/2 in the dual
        let a12 = lat("A1^12");
        let t = half_class_q_test(&a12, &class(&a12, &[1; 12])).unwrap();
        assert!(t.in_dual);
        assert_eq!(t.q_value, Some(BigRational::zero()));
    }

    #[test]
    fn unimodular_signatures() {
        assert!(!even_unimodular_admissible(1, 13));
        assert!(!even_unimodular_admissible(1, 5));
        assert!(even_unimodular_admissible(1, 9));
        assert!(even_unimodular_admissible(0, 8));
    }
}
