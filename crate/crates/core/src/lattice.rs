//! Dense integer matrices, Smith normal form and finite abelian groups.
//!
//! Everything here is exact. Entries are `i64`; the Smith reduction runs in
//! `i128` and panics only if an intermediate value leaves that range, which
//! does not happen for the desk-scale matrices this crate handles.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// Row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.row_vecs()).finish()
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn scalar(n: usize, c: i64) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c;
        }
        m
    }

    /// Builds a matrix from its rows. All rows must have the same length.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        IntMatrix { rows: rows.len(), cols, data: rows.concat() }
    }

    /// Builds a matrix whose columns are the given vectors, with `rows` rows
    /// (needed when there are no columns).
    pub fn from_cols(rows: usize, cols: &[Vec<i64>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &x) in c.iter().enumerate() {
                m[(i, j)] = x;
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

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: i64) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.rows)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> i64 {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return 1;
        }
        let mut a: Vec<Vec<i128>> =
            (0..n).map(|i| self.row(i).iter().map(|&x| x as i128).collect()).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n {
            if a[k][k] == 0 {
                match (k + 1..n).find(|&i| a[i][k] != 0) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
            }
            prev = a[k][k];
        }
        i64::try_from(sign * a[n - 1][n - 1]).expect("determinant overflow")
    }

    /// Inverse of a unimodular matrix, `None` if `|det| != 1`.
    pub fn unimodular_inverse(&self) -> Option<IntMatrix> {
        if !self.is_square() || self.det().abs() != 1 {
            return None;
        }
        let (u, d, v) = smith_normal_form(self);
        // U M V = I, so M^{-1} = V U.
        debug_assert!(d.is_identity());
        Some(v.mul(&u))
    }

    /// Multiplicative order if it is at most `bound`.
    pub fn finite_order(&self, bound: usize) -> Option<usize> {
        assert!(self.is_square());
        let id = Self::identity(self.rows);
        let mut p = self.clone();
        for k in 1..=bound {
            if p == id {
                return Some(k);
            }
            p = p.mul(self);
        }
        None
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let mut a: Vec<Vec<i128>> =
            (0..self.rows).map(|i| self.row(i).iter().map(|&x| x as i128).collect()).collect();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&i| a[i][c] != 0) else { continue };
            a.swap(rank, p);
            for i in rank + 1..self.rows {
                if a[i][c] != 0 {
                    let (x, y) = (a[rank][c], a[i][c]);
                    let g = x.gcd(&y);
                    for j in c..self.cols {
                        a[i][j] = a[i][j] * (x / g) - a[rank][j] * (y / g);
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

struct Work {
    rows: usize,
    cols: usize,
    a: Vec<Vec<i128>>,
    u: Vec<Vec<i128>>,
    v: Vec<Vec<i128>>,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for r in &mut self.a {
            r.swap(i, j);
        }
        for r in &mut self.v {
            r.swap(i, j);
        }
    }

    /// row_i -= c * row_j
    fn row_op(&mut self, i: usize, j: usize, c: i128) {
        for k in 0..self.cols {
            let t = self.a[j][k];
            self.a[i][k] -= c * t;
        }
        for k in 0..self.rows {
            let t = self.u[j][k];
            self.u[i][k] -= c * t;
        }
    }

    /// col_i -= c * col_j
    fn col_op(&mut self, i: usize, j: usize, c: i128) {
        for r in &mut self.a {
            let t = r[j];
            r[i] -= c * t;
        }
        for r in &mut self.v {
            let t = r[j];
            r[i] -= c * t;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.a[i] {
            *x = -*x;
        }
        for x in &mut self.u[i] {
            *x = -*x;
        }
    }

    /// Position of the smallest nonzero |entry| in the trailing block, first in
    /// row-major order on ties.
    fn pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(i128, usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let x = self.a[i][j].abs();
                if x != 0 && best.is_none_or(|(b, _, _)| x < b) {
                    best = Some((x, i, j));
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }
}

fn to_matrix(rows: usize, cols: usize, a: &[Vec<i128>]) -> IntMatrix {
    let mut m = IntMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = i64::try_from(a[i][j]).expect("Smith normal form entry overflow");
        }
    }
    m
}

/// Smith normal form: returns `(U, D, V)` with `U * m * V = D`, `U` and `V`
/// unimodular and `D` diagonal with `d_1 | d_2 | ...`, all `d_i >= 0`.
///
/// Pivoting always picks the smallest nonzero absolute value in the remaining
/// block (first in row-major order on ties), so the transforms are
/// deterministic.
pub fn smith_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let (rows, cols) = (m.rows(), m.cols());
    let ident = |n: usize| -> Vec<Vec<i128>> {
        (0..n).map(|i| (0..n).map(|j| (i == j) as i128).collect()).collect()
    };
    let mut w = Work {
        rows,
        cols,
        a: (0..rows).map(|i| m.row(i).iter().map(|&x| x as i128).collect()).collect(),
        u: ident(rows),
        v: ident(cols),
    };
    let diag = rows.min(cols);
    let mut t = 0;
    while t < diag {
        let Some((pi, pj)) = w.pivot(t) else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        let p = w.a[t][t];
        let mut dirty = false;
        for i in t + 1..rows {
            let q = w.a[i][t].div_euclid(p);
            if q != 0 {
                w.row_op(i, t, q);
            }
            dirty |= w.a[i][t] != 0;
        }
        for j in t + 1..cols {
            let q = w.a[t][j].div_euclid(p);
            if q != 0 {
                w.col_op(j, t, q);
            }
            dirty |= w.a[t][j] != 0;
        }
        if dirty {
            // a smaller remainder exists; re-pivot on this block
            continue;
        }
        // pivot must divide the whole trailing block
        let bad = (t + 1..rows)
            .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
            .find(|&(i, j)| w.a[i][j] % p != 0);
        if let Some((i, _)) = bad {
            w.row_op(t, i, -1);
            continue;
        }
        if p < 0 {
            w.negate_row(t);
        }
        t += 1;
    }
    (to_matrix(rows, rows, &w.u), to_matrix(rows, cols, &w.a), to_matrix(cols, cols, &w.v))
}

/// Diagonal entries of the Smith normal form (length `min(rows, cols)`).
pub fn invariant_factors(m: &IntMatrix) -> Vec<i64> {
    let (_, d, _) = smith_normal_form(m);
    (0..m.rows().min(m.cols())).map(|i| d[(i, i)]).collect()
}

/// A finitely generated abelian group `Z^free_rank ⊕ ⊕ Z/d_i` presented as the
/// cokernel of an integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteAbelianGroup {
    /// Nontrivial invariant factors `d_1 | d_2 | ...`, each `> 1`.
    pub invariant_factors: Vec<u64>,
    /// Rank of the free part; zero for a finite group.
    #[serde(default, skip_serializing_if = "is_zero")]
    pub free_rank: usize,
    /// `U` from `U M V = D`: maps lattice coordinates to normal-form
    /// coordinates (the `k`-th coordinate is read modulo the `k`-th diagonal
    /// entry).
    #[serde(skip)]
    pub basis_change: Option<IntMatrix>,
}

fn is_zero(x: &usize) -> bool {
    *x == 0
}

impl FiniteAbelianGroup {
    pub fn trivial() -> Self {
        FiniteAbelianGroup { invariant_factors: vec![], free_rank: 0, basis_change: None }
    }

    /// Group with the given (not necessarily normalized) cyclic factors.
    pub fn from_cyclic_orders(orders: &[u64]) -> Self {
        let diag: Vec<Vec<i64>> = (0..orders.len())
            .map(|i| (0..orders.len()).map(|j| if i == j { orders[i] as i64 } else { 0 }).collect())
            .collect();
        let mut g = Self::cokernel(&IntMatrix::from_rows(&diag));
        g.basis_change = None;
        g
    }

    /// `Z^rows / image(m)`.
    pub fn cokernel(m: &IntMatrix) -> Self {
        let (u, d, _) = smith_normal_form(m);
        let k = m.rows().min(m.cols());
        let diag: Vec<i64> = (0..k).map(|i| d[(i, i)]).collect();
        let zeros = diag.iter().filter(|&&x| x == 0).count() + (m.rows() - k);
        FiniteAbelianGroup {
            invariant_factors: diag.iter().filter(|&&x| x > 1).map(|&x| x as u64).collect(),
            free_rank: zeros,
            basis_change: Some(u),
        }
    }

    /// Torsion subgroup.
    pub fn torsion(&self) -> Self {
        FiniteAbelianGroup { invariant_factors: self.invariant_factors.clone(), free_rank: 0, basis_change: None }
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Order of the torsion part (equal to the order when finite).
    pub fn order(&self) -> u64 {
        self.invariant_factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty() && self.free_rank == 0
    }

    /// Invariant factors and free rank agree.
    pub fn isomorphic(&self, other: &Self) -> bool {
        self.invariant_factors == other.invariant_factors && self.free_rank == other.free_rank
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.invariant_factors.iter().map(|d| format!("Z/{d}")).collect();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 { "Z".into() } else { format!("Z^{}", self.free_rank) });
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

/// Least common multiple of a list of positive integers (1 for empty input).
pub fn lcm_all<I: IntoIterator<Item = u64>>(xs: I) -> u64 {
    xs.into_iter().fold(1, |acc, x| acc.lcm(&x))
}

/// Modular inverse of `a` modulo `m` (`m >= 1`), if it exists.
pub fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    if m == 1 {
        return Some(0);
    }
    let e = (a.rem_euclid(m)).extended_gcd(&m);
    (e.gcd == 1).then(|| e.x.rem_euclid(m))
}

/// Trial-division primality, enough for the prime powers used as `q`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// `Some((p, k))` when `n = p^k` with `p` prime and `k >= 1`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|d| n % d == 0)?;
    let (mut m, mut k) = (n, 0);
    while m % p == 0 {
        m /= p;
        k += 1;
    }
    (m == 1 && is_prime(p)).then_some((p, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check_snf(m: &IntMatrix) {
        let (u, d, v) = smith_normal_form(m);
        assert_eq!(u.mul(m).mul(&v), d, "U M V != D for {m:?}");
        assert_eq!(u.det().abs(), 1);
        assert_eq!(v.det().abs(), 1);
        let k = m.rows().min(m.cols());
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                if i != j {
                    assert_eq!(d[(i, j)], 0);
                }
            }
        }
        for i in 0..k {
            assert!(d[(i, i)] >= 0);
            if i + 1 < k && d[(i, i)] != 0 {
                assert_eq!(d[(i + 1, i + 1)] % d[(i, i)], 0, "divisibility chain broken: {d:?}");
            }
            if i + 1 < k && d[(i, i)] == 0 {
                assert_eq!(d[(i + 1, i + 1)], 0);
            }
        }
    }

    #[test]
    fn snf_of_twice_identity() {
        let m = IntMatrix::scalar(2, 2);
        assert_eq!(invariant_factors(&m), vec![2, 2]);
        check_snf(&m);
    }

    #[test]
    fn snf_of_coxeter_torus_matrix() {
        let m = IntMatrix::from_rows(&[vec![-1, 3], vec![3, -1]]);
        assert_eq!(invariant_factors(&m), vec![1, 8]);
        check_snf(&m);
    }

    #[test]
    fn snf_of_unit_rank_one() {
        assert_eq!(invariant_factors(&IntMatrix::from_rows(&[vec![1]])), vec![1]);
        assert_eq!(invariant_factors(&IntMatrix::from_rows(&[vec![-7]])), vec![7]);
    }

    #[test]
    fn snf_rectangular_and_degenerate() {
        let m = IntMatrix::from_rows(&[vec![1], vec![-1]]);
        check_snf(&m);
        let g = FiniteAbelianGroup::cokernel(&m);
        assert!(g.invariant_factors.is_empty());
        assert_eq!(g.free_rank, 1);
        let z = IntMatrix::zeros(2, 3);
        check_snf(&z);
        assert_eq!(FiniteAbelianGroup::cokernel(&z).free_rank, 2);
        let e = IntMatrix::zeros(3, 0);
        assert_eq!(FiniteAbelianGroup::cokernel(&e).free_rank, 3);
    }

    #[test]
    fn needs_divisibility_fixup() {
        // diag(2, 3) is not in normal form; SNF is diag(1, 6).
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(invariant_factors(&m), vec![1, 6]);
        check_snf(&m);
        assert_eq!(FiniteAbelianGroup::from_cyclic_orders(&[2, 3]).invariant_factors, vec![6]);
        assert_eq!(FiniteAbelianGroup::from_cyclic_orders(&[2, 4, 1]).invariant_factors, vec![2, 4]);
    }

    #[test]
    fn determinant_and_inverse() {
        let m = IntMatrix::from_rows(&[vec![2, 1, 0], vec![1, 1, 0], vec![0, 0, -1]]);
        assert_eq!(m.det(), -1);
        let inv = m.unimodular_inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        assert!(IntMatrix::scalar(2, 2).unimodular_inverse().is_none());
        assert_eq!(IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).det(), -1);
    }

    #[test]
    fn rational_rank() {
        assert_eq!(IntMatrix::from_rows(&[vec![1, 2], vec![2, 4]]).rank(), 1);
        assert_eq!(IntMatrix::from_rows(&[vec![1, -1, 0], vec![0, 1, -1], vec![1, 0, -1]]).rank(), 2);
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(2), Some((2, 1)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
        assert_eq!(mod_inverse(2, 3), Some(2));
        assert_eq!(mod_inverse(2, 4), None);
    }

    proptest! {
        #[test]
        fn snf_invariants_hold(rows in 1usize..5, cols in 1usize..5, seed in proptest::collection::vec(-9i64..10, 25)) {
            let data: Vec<Vec<i64>> = (0..rows).map(|i| (0..cols).map(|j| seed[i * 5 + j]).collect()).collect();
            let m = IntMatrix::from_rows(&data);
            check_snf(&m);
            if rows == cols {
                let d: i64 = invariant_factors(&m).iter().product();
                prop_assert_eq!(d, m.det().abs());
            }
        }
    }
}
