//! Dense matrices over an arbitrary commutative ring, plus exact linear
//! solving. Entries are stored row-major. Inversion requires field entries;
//! rational linear systems are solved fraction-free (denominators cleared per
//! row, Bareiss elimination over integers, back-substitution over rationals)
//! so intermediate entries stay at determinant-minor size.

use crate::ring::{Field, Ring};
use crate::scalar::Rat;
use num_bigint::BigInt;
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Ring> Mat<T> {
    // ---- Construction ----

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    /// Build from row vectors; all rows must share a length.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn diag(entries: Vec<T>) -> Self {
        let n = entries.len();
        let mut m = Mat::zeros(n, n);
        for (i, e) in entries.into_iter().enumerate() {
            *m.at_mut(i, i) = e;
        }
        m
    }

    /// Block-diagonal assembly of square blocks.
    pub fn block_diag(blocks: &[Mat<T>]) -> Self {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut m = Mat::zeros(n, n);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.rows, b.cols, "block_diag needs square blocks");
            for i in 0..b.rows {
                for j in 0..b.cols {
                    *m.at_mut(off + i, off + j) = b.at(i, j).clone();
                }
            }
            off += b.rows;
        }
        m
    }

    // ---- Access ----

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.data[i * self.cols + j]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Mat::identity(self.rows)
    }

    /// Contiguous square block with corner `(i0, j0)` and side `n`.
    pub fn block(&self, i0: usize, j0: usize, n: usize) -> Mat<T> {
        Mat::from_fn(n, n, |i, j| self.at(i0 + i, j0 + j).clone())
    }

    /// Entries outside the listed diagonal blocks are all zero.
    pub fn is_block_diag(&self, sizes: &[usize]) -> bool {
        let mut owner = Vec::with_capacity(self.rows);
        for (c, &s) in sizes.iter().enumerate() {
            owner.extend(std::iter::repeat(c).take(s));
        }
        if owner.len() != self.rows || self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                if owner[i] != owner[j] && !self.at(i, j).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    // ---- Arithmetic ----

    pub fn add(&self, other: &Mat<T>) -> Mat<T> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat::from_fn(self.rows, self.cols, |i, j| self.at(i, j).add(other.at(i, j)))
    }

    pub fn sub(&self, other: &Mat<T>) -> Mat<T> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat::from_fn(self.rows, self.cols, |i, j| self.at(i, j).sub(other.at(i, j)))
    }

    pub fn neg(&self) -> Mat<T> {
        Mat::from_fn(self.rows, self.cols, |i, j| self.at(i, j).neg())
    }

    pub fn mul(&self, other: &Mat<T>) -> Mat<T> {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        Mat::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = T::zero();
            for k in 0..self.cols {
                acc = acc.add(&self.at(i, k).mul(other.at(k, j)));
            }
            acc
        })
    }

    pub fn scale(&self, c: &T) -> Mat<T> {
        Mat::from_fn(self.rows, self.cols, |i, j| self.at(i, j).mul(c))
    }

    pub fn transpose(&self) -> Mat<T> {
        Mat::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    // ---- Determinant and adjugate (ring entries, small sizes) ----

    /// Laplace expansion along the first row. Intended for the small square
    /// matrices that arise as eigenvalue images (size ≤ a handful).
    pub fn det(&self) -> T {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        match self.rows {
            0 => T::one(),
            1 => self.at(0, 0).clone(),
            n => {
                let mut acc = T::zero();
                for j in 0..n {
                    if self.at(0, j).is_zero() {
                        continue;
                    }
                    let term = self.at(0, j).mul(&self.minor(0, j).det());
                    acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
                }
                acc
            }
        }
    }

    /// Delete row `i` and column `j`.
    pub fn minor(&self, i: usize, j: usize) -> Mat<T> {
        Mat::from_fn(self.rows - 1, self.cols - 1, |r, c| {
            self.at(r + (r >= i) as usize, c + (c >= j) as usize).clone()
        })
    }

    /// Transposed cofactor matrix, satisfying `M · adj(M) = det(M) · I`.
    pub fn adjugate(&self) -> Mat<T> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return Mat::zeros(0, 0);
        }
        if n == 1 {
            return Mat::identity(1);
        }
        Mat::from_fn(n, n, |i, j| {
            let c = self.minor(j, i).det();
            if (i + j) % 2 == 0 {
                c
            } else {
                c.neg()
            }
        })
    }
}

impl<T: Field> Mat<T> {
    /// Gauss–Jordan inverse. `None` when singular.
    pub fn inverse(&self) -> Option<Mat<T>> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Mat::<T>::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.at(r, col).is_zero())?;
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                    inv.data.swap(pivot * n + j, col * n + j);
                }
            }
            let p_inv = a.at(col, col).inv()?;
            for j in 0..n {
                *a.at_mut(col, j) = a.at(col, j).mul(&p_inv);
                *inv.at_mut(col, j) = inv.at(col, j).mul(&p_inv);
            }
            for r in 0..n {
                if r == col || a.at(r, col).is_zero() {
                    continue;
                }
                let f = a.at(r, col).clone();
                for j in 0..n {
                    *a.at_mut(r, j) = a.at(r, j).sub(&f.mul(a.at(col, j)));
                    *inv.at_mut(r, j) = inv.at(r, j).sub(&f.mul(inv.at(col, j)));
                }
            }
        }
        Some(inv)
    }
}

// ---- Exact rational solving (fraction-free core) ----

/// Solve `A · X = B` exactly for rational `A` (square) and `B`.
/// `None` when `A` is singular.
pub fn solve_exact(a: &Mat<Rat>, b: &Mat<Rat>) -> Option<Mat<Rat>> {
    assert_eq!(a.rows(), a.cols(), "solve needs a square system");
    assert_eq!(a.rows(), b.rows(), "right-hand side height mismatch");
    let n = a.rows();
    let m = b.cols();
    if n == 0 {
        return Some(Mat::zeros(0, m));
    }

    // Clear denominators row by row: row i of [A|B] times the lcm of its
    // denominators leaves the solution unchanged.
    let total = n + m;
    let mut w: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut lcm = BigInt::one();
        let row_entry = |j: usize| -> &Rat {
            if j < n {
                a.at(i, j)
            } else {
                b.at(i, j - n)
            }
        };
        for j in 0..total {
            lcm = num_integer::lcm(lcm, row_entry(j).denom().clone());
        }
        let mut row = Vec::with_capacity(total);
        for j in 0..total {
            let e = row_entry(j);
            row.push(e.numer() * (&lcm / e.denom()));
        }
        w.push(row);
    }

    // Bareiss elimination: every intermediate entry is a minor determinant,
    // and each division below is exact.
    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot = (k..n).find(|&r| !w[r][k].is_zero())?;
        if pivot != k {
            w.swap(pivot, k);
            prev = -prev;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..total {
                let num = &w[k][k] * &w[i][j] - &w[i][k] * &w[k][j];
                w[i][j] = num / &prev;
            }
            w[i][k] = BigInt::zero();
        }
        prev = w[k][k].clone();
    }

    // Back-substitute over the rationals.
    let mut x = Mat::zeros(n, m);
    for c in 0..m {
        for i in (0..n).rev() {
            let mut acc = Rat::from_integer(w[i][n + c].clone());
            for j in (i + 1)..n {
                acc -= Rat::from_integer(w[i][j].clone()) * x.at(j, c);
            }
            *x.at_mut(i, c) = acc / Rat::from_integer(w[i][i].clone());
        }
    }
    Some(x)
}

/// Solve `A·X = B` for a stacked (possibly overdetermined) system: `A` is
/// m×n with m ≥ n. Returns the unique solution when `A` has full column rank
/// and the system is consistent; `None` otherwise. Sizes here are small
/// (stacked per-unit-class blocks), so plain rational elimination suffices.
pub fn solve_tall_exact(a: &Mat<Rat>, b: &Mat<Rat>) -> Option<Mat<Rat>> {
    assert!(a.rows() >= a.cols(), "system has fewer equations than unknowns");
    assert_eq!(a.rows(), b.rows(), "right-hand side height mismatch");
    let (m, n, w) = (a.rows(), a.cols(), b.cols());
    if n == 0 {
        // zero unknowns: consistent iff B = 0
        return b.is_zero().then(|| Mat::zeros(0, w));
    }
    let total = n + w;
    let mut rows: Vec<Vec<Rat>> = (0..m)
        .map(|i| {
            (0..total)
                .map(|j| {
                    if j < n {
                        a.at(i, j).clone()
                    } else {
                        b.at(i, j - n).clone()
                    }
                })
                .collect()
        })
        .collect();
    for k in 0..n {
        let pivot = (k..m).find(|&r| !Ring::is_zero(&rows[r][k]))?;
        rows.swap(pivot, k);
        let inv = rows[k][k].inv()?;
        for j in k..total {
            let v = &rows[k][j] * &inv;
            rows[k][j] = v;
        }
        for i in 0..m {
            if i == k || Ring::is_zero(&rows[i][k]) {
                continue;
            }
            let f = rows[i][k].clone();
            for j in k..total {
                let v = &rows[i][j] - &f * &rows[k][j];
                rows[i][j] = v;
            }
        }
    }
    // rows below the unknown count must have vanished entirely
    for row in rows.iter().skip(n) {
        if row.iter().skip(n).any(|e| !Ring::is_zero(e)) {
            return None;
        }
    }
    Some(Mat::from_fn(n, w, |i, j| rows[i][n + j].clone()))
}

/// Entry-wise maximum denominator-free display helper is deliberately absent:
/// matrices render through their entry type's own formatter.
pub fn fmt_rat_mat(m: &Mat<Rat>) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| {
            let cells: Vec<String> = (0..m.cols()).map(|j| m.at(i, j).to_string()).collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};
    use proptest::prelude::*;

    fn m2(a: i64, b: i64, c: i64, d: i64) -> Mat<Rat> {
        Mat::from_rows(vec![
            vec![rat_int(a), rat_int(b)],
            vec![rat_int(c), rat_int(d)],
        ])
    }

    #[test]
    fn product_and_transpose() {
        let a = m2(1, 2, 3, 4);
        let b = m2(0, 1, 1, 0);
        assert_eq!(a.mul(&b), m2(2, 1, 4, 3));
        assert_eq!(a.transpose(), m2(1, 3, 2, 4));
        assert!(Mat::<Rat>::identity(3).is_identity());
    }

    #[test]
    fn inverse_round_trip() {
        let a = m2(2, 1, 1, 1);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        assert_eq!(m2(1, 2, 2, 4).inverse(), None);
    }

    #[test]
    fn adjugate_identity() {
        let a = Mat::from_rows(vec![
            vec![rat_int(1), rat_int(2), rat_int(0)],
            vec![rat_int(0), rat_int(1), rat_int(3)],
            vec![rat_int(4), rat_int(0), rat_int(1)],
        ]);
        let d = a.det();
        assert_eq!(a.mul(&a.adjugate()), Mat::identity(3).scale(&d));
        assert_eq!(a.adjugate().mul(&a), Mat::identity(3).scale(&d));
    }

    #[test]
    fn solver_agrees_with_inverse() {
        let a = Mat::from_rows(vec![
            vec![rat(1, 2), rat(1, 3)],
            vec![rat(1, 5), rat(2, 7)],
        ]);
        let b = Mat::from_rows(vec![vec![rat_int(1)], vec![rat_int(2)]]);
        let x = solve_exact(&a, &b).unwrap();
        assert_eq!(a.mul(&x), b);
        assert_eq!(x, a.inverse().unwrap().mul(&b));
        let sing = m2(1, 2, 2, 4);
        assert_eq!(solve_exact(&sing, &b), None);
    }

    #[test]
    fn tall_solver_handles_consistency() {
        // duplicated consistent equations
        let a = Mat::from_rows(vec![
            vec![rat_int(1), rat_int(2)],
            vec![rat_int(3), rat(1, 2)],
            vec![rat_int(2), rat_int(4)],
        ]);
        let b = Mat::from_rows(vec![vec![rat_int(5)], vec![rat_int(4)], vec![rat_int(10)]]);
        let x = solve_tall_exact(&a, &b).unwrap();
        assert_eq!(a.mul(&x), b);
        // inconsistent copy
        let bad = Mat::from_rows(vec![vec![rat_int(5)], vec![rat_int(4)], vec![rat_int(11)]]);
        assert_eq!(solve_tall_exact(&a, &bad), None);
        // rank-deficient
        let flat = Mat::from_rows(vec![
            vec![rat_int(1), rat_int(2)],
            vec![rat_int(2), rat_int(4)],
            vec![rat_int(3), rat_int(6)],
        ]);
        let rhs = Mat::from_rows(vec![vec![rat_int(1)], vec![rat_int(2)], vec![rat_int(3)]]);
        assert_eq!(solve_tall_exact(&flat, &rhs), None);
        // square case agrees with the fraction-free solver
        let sq = Mat::from_rows(vec![vec![rat(1, 2), rat_int(1)], vec![rat_int(1), rat_int(3)]]);
        let rhs2 = Mat::from_rows(vec![vec![rat_int(2)], vec![rat(7, 3)]]);
        assert_eq!(
            solve_tall_exact(&sq, &rhs2),
            solve_exact(&sq, &rhs2)
        );
    }

    #[test]
    fn block_structure() {
        let m = Mat::block_diag(&[m2(1, 2, 3, 4), Mat::identity(1)]);
        assert!(m.is_block_diag(&[2, 1]));
        assert!(!m2(1, 2, 3, 4).is_block_diag(&[1, 1]));
        assert_eq!(m.block(0, 0, 2), m2(1, 2, 3, 4));
    }

    fn arb_mat3() -> impl Strategy<Value = Mat<Rat>> {
        prop::collection::vec((-5i64..=5, 1i64..=3), 9).prop_map(|v| {
            Mat::from_fn(3, 3, |i, j| {
                let (p, q) = v[i * 3 + j];
                rat(p, q)
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn solve_reconstructs(a in arb_mat3(), b in arb_mat3()) {
            if let Some(x) = solve_exact(&a, &b) {
                prop_assert_eq!(a.mul(&x), b);
            } else {
                prop_assert!(crate::ring::Ring::is_zero(&a.det()));
            }
        }

        #[test]
        fn adjugate_is_det_times_identity(a in arb_mat3()) {
            let d = a.det();
            prop_assert_eq!(a.mul(&a.adjugate()), Mat::identity(3).scale(&d));
        }
    }
}
