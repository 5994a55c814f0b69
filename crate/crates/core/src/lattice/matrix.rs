//! Dense exact matrices over `BigInt` and `BigRational`.
//!
//! Smith normal form keeps the left transform, its inverse, and the right
//! transform, since discriminant-group generators, lattice bases and kernels
//! are all read off from them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<BigInt>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix");
            data.extend(row.iter().cloned());
        }
        IntMatrix {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let rows: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn to_rational(&self) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect(),
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(p) => {
                        a.swap_rows(k, p);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += c * row[src]
    fn add_row(&mut self, dst: usize, src: usize, c: &BigInt) {
        for j in 0..self.cols {
            let v = &self[(src, j)] * c;
            self[(dst, j)] += v;
        }
    }

    /// col[dst] += c * col[src]
    fn add_col(&mut self, dst: usize, src: usize, c: &BigInt) {
        for i in 0..self.rows {
            let v = &self[(i, src)] * c;
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// Row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigRational::one();
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<BigRational>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn col(&self, j: usize) -> Vec<BigRational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = RatMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).fold(BigRational::zero(), |acc, j| acc + &self[(i, j)] * &v[j]))
            .collect()
    }

    /// Returns the integer matrix if every entry is integral.
    pub fn to_integer(&self) -> Option<IntMatrix> {
        if self.data.iter().all(|x| x.is_integer()) {
            Some(IntMatrix {
                rows: self.rows,
                cols: self.cols,
                data: self.data.iter().map(|x| x.to_integer()).collect(),
            })
        } else {
            None
        }
    }

    /// Gauss-Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<RatMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RatMatrix::identity(n);
        for c in 0..n {
            let p = (c..n).find(|&r| !a[(r, c)].is_zero())?;
            if p != c {
                for j in 0..n {
                    a.data.swap(p * n + j, c * n + j);
                    inv.data.swap(p * n + j, c * n + j);
                }
            }
            let piv = a[(c, c)].clone();
            for j in 0..n {
                a[(c, j)] = &a[(c, j)] / &piv;
                inv[(c, j)] = &inv[(c, j)] / &piv;
            }
            for r in 0..n {
                if r == c || a[(r, c)].is_zero() {
                    continue;
                }
                let f = a[(r, c)].clone();
                for j in 0..n {
                    let da = &f * &a[(c, j)];
                    a[(r, j)] -= da;
                    let di = &f * &inv[(c, j)];
                    inv[(r, j)] -= di;
                }
            }
        }
        Some(inv)
    }

    /// Rank over Q.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| !a[(r, c)].is_zero()) else {
                continue;
            };
            for j in 0..self.cols {
                a.data.swap(p * self.cols + j, rank * self.cols + j);
            }
            for r in rank + 1..self.rows {
                if a[(r, c)].is_zero() {
                    continue;
                }
                let f = &a[(r, c)] / &a[(rank, c)];
                for j in c..self.cols {
                    let d = &f * &a[(rank, j)];
                    a[(r, j)] -= d;
                }
            }
            rank += 1;
        }
        rank
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = BigRational;
    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRational {
        &mut self.data[i * self.cols + j]
    }
}

/// `left * a * right = diag(invariant_factors, 0, ...)` with unimodular
/// `left`, `right`; `left_inv` is the inverse of `left`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub invariant_factors: Vec<BigInt>,
    pub left: IntMatrix,
    pub left_inv: IntMatrix,
    pub right: IntMatrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }
}

/// Smith normal form by elementary row/column operations, pivoting on the
/// entry of least absolute value in the active block.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut left = IntMatrix::identity(m);
    let mut left_inv = IntMatrix::identity(m);
    let mut right = IntMatrix::identity(n);
    let mut factors = Vec::new();

    for k in 0..m.min(n) {
        loop {
            // smallest nonzero entry of the active block
            let mut best: Option<(usize, usize)> = None;
            for i in k..m {
                for j in k..n {
                    let x = &d[(i, j)];
                    if x.is_zero() {
                        continue;
                    }
                    match best {
                        Some((bi, bj)) if d[(bi, bj)].abs() <= x.abs() => {}
                        _ => best = Some((i, j)),
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(factors, left, left_inv, right);
            };
            d.swap_rows(k, pi);
            left.swap_rows(k, pi);
            left_inv.swap_cols(k, pi);
            d.swap_cols(k, pj);
            right.swap_cols(k, pj);

            let mut dirty = false;
            for i in k + 1..m {
                if d[(i, k)].is_zero() {
                    continue;
                }
                let q = -d[(i, k)].div_floor(&d[(k, k)]);
                d.add_row(i, k, &q);
                left.add_row(i, k, &q);
                left_inv.add_col(k, i, &-&q);
                dirty |= !d[(i, k)].is_zero();
            }
            for j in k + 1..n {
                if d[(k, j)].is_zero() {
                    continue;
                }
                let q = -d[(k, j)].div_floor(&d[(k, k)]);
                d.add_col(j, k, &q);
                right.add_col(j, k, &q);
                dirty |= !d[(k, j)].is_zero();
            }
            if dirty {
                continue;
            }
            // pivot must divide the rest of the block
            let piv = d[(k, k)].clone();
            let bad = (k + 1..m)
                .flat_map(|i| (k + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !d[(i, j)].is_multiple_of(&piv));
            match bad {
                Some((i, _)) => {
                    let one = BigInt::one();
                    d.add_row(k, i, &one);
                    left.add_row(k, i, &one);
                    left_inv.add_col(i, k, &-one);
                }
                None => break,
            }
        }
        if d[(k, k)].is_negative() {
            d.negate_row(k);
            left.negate_row(k);
            left_inv.negate_col(k);
        }
        factors.push(d[(k, k)].clone());
    }
    finish(factors, left, left_inv, right)
}

fn finish(
    factors: Vec<BigInt>,
    left: IntMatrix,
    left_inv: IntMatrix,
    right: IntMatrix,
) -> SmithForm {
    SmithForm {
        invariant_factors: factors,
        left,
        left_inv,
        right,
    }
}

/// Signature `(positive, negative, zero)` of a symmetric rational matrix,
/// by congruence diagonalization.
pub fn inertia(gram: &RatMatrix) -> (usize, usize, usize) {
    let n = gram.rows;
    let mut a = gram.clone();
    let (mut pos, mut neg, mut zero) = (0, 0, 0);
    let mut k = 0;
    while k < n {
        if a[(k, k)].is_zero() {
            if let Some(p) = (k + 1..n).find(|&i| !a[(i, i)].is_zero()) {
                sym_swap(&mut a, k, p);
            } else if let Some(p) = (k + 1..n).find(|&i| !a[(k, i)].is_zero()) {
                // e_k <- e_k + e_p makes the diagonal 2 a_kp (a_pp = 0)
                sym_add(&mut a, k, p, &BigRational::one());
            } else {
                zero += 1;
                k += 1;
                continue;
            }
        }
        let piv = a[(k, k)].clone();
        for i in k + 1..n {
            if a[(k, i)].is_zero() {
                continue;
            }
            let f = -(&a[(k, i)] / &piv);
            sym_add(&mut a, i, k, &f);
        }
        if piv.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        k += 1;
    }
    (pos, neg, zero)
}

fn sym_swap(a: &mut RatMatrix, i: usize, j: usize) {
    let n = a.rows;
    for c in 0..n {
        a.data.swap(i * n + c, j * n + c);
    }
    for r in 0..n {
        a.data.swap(r * n + i, r * n + j);
    }
}

/// basis change e_i <- e_i + f e_j applied as a congruence
fn sym_add(a: &mut RatMatrix, i: usize, j: usize, f: &BigRational) {
    let n = a.rows;
    for c in 0..n {
        let v = f * &a[(j, c)];
        a[(i, c)] += v;
    }
    for r in 0..n {
        let v = f * &a[(r, j)];
        a[(r, i)] += v;
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int_to_rat(v: &[BigInt]) -> Vec<BigRational> {
    v.iter()
        .map(|x| BigRational::from_integer(x.clone()))
        .collect()
}

/// Common denominator of a collection of rationals.
pub fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_smith(a: &IntMatrix) {
        let s = smith_normal_form(a);
        let d = s.left.mul(a).mul(&s.right);
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                let want = if i == j && i < s.rank() {
                    s.invariant_factors[i].clone()
                } else {
                    BigInt::zero()
                };
                assert_eq!(d[(i, j)], want, "entry ({i},{j})");
            }
        }
        for w in s.invariant_factors.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        assert_eq!(s.left.mul(&s.left_inv), IntMatrix::identity(a.rows()));
    }

    #[test]
    fn smith_of_small_matrices() {
        check_smith(&IntMatrix::from_i64(&[
            vec![2, 4, 4],
            vec![-6, 6, 12],
            vec![10, -4, -16],
        ]));
        check_smith(&IntMatrix::from_i64(&[vec![0, 1], vec![1, 0]]));
        check_smith(&IntMatrix::from_i64(&[vec![4, 6], vec![6, 9], vec![2, 3]]));
        check_smith(&IntMatrix::from_i64(&[
            vec![2, -1, 0, 0],
            vec![-1, 2, -1, -1],
            vec![0, -1, 2, 0],
            vec![0, -1, 0, 2],
        ]));
        let s = smith_normal_form(&IntMatrix::from_i64(&[
            vec![2, 4, 4],
            vec![-6, 6, 12],
            vec![10, -4, -16],
        ]));
        assert_eq!(
            s.invariant_factors,
            vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]
        );
    }

    #[test]
    fn determinant_and_inertia() {
        let u = IntMatrix::from_i64(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(u.determinant(), BigInt::from(-1));
        assert_eq!(inertia(&u.to_rational()), (1, 1, 0));
        let a2 = IntMatrix::from_i64(&[vec![-2, 1], vec![1, -2]]);
        assert_eq!(a2.determinant(), BigInt::from(3));
        assert_eq!(inertia(&a2.to_rational()), (0, 2, 0));
        let deg = IntMatrix::from_i64(&[vec![0, 0], vec![0, 0]]);
        assert_eq!(inertia(&deg.to_rational()), (0, 0, 2));
    }

    #[test]
    fn inverse_roundtrip() {
        let a = IntMatrix::from_i64(&[vec![2, 1], vec![1, 1]]).to_rational();
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), RatMatrix::identity(2));
        assert!(IntMatrix::from_i64(&[vec![1, 2], vec![2, 4]])
            .to_rational()
            .inverse()
            .is_none());
    }
}
