//! Dense big-integer matrices with column Hermite and Smith normal forms.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.rows).map(|i| self.row(i).to_vec())).finish()
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged integer matrix");
        Self { rows: r, cols: c, data: rows.iter().flatten().map(|&x| BigInt::from(x)).collect() }
    }

    /// Build from column vectors of common length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, x) in col.iter().enumerate() {
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

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * &rhs[(k, j)];
                }
            }
        }
        out
    }

    /// Keep only the listed columns.
    pub fn select_columns(&self, cols: impl IntoIterator<Item = usize>) -> IntMatrix {
        let cols: Vec<Vec<BigInt>> = cols.into_iter().map(|j| self.column(j)).collect();
        IntMatrix::from_columns(self.rows, &cols)
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m[(i, k)].is_zero()) else {
                    return BigInt::zero();
                };
                m.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)];
                    m[(i, j)] = v / &prev;
                }
            }
            prev = m[(k, k)].clone();
        }
        sign * m[(n - 1, n - 1)].clone()
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

    /// col_dst += k * col_src
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let v = &self[(i, src)] * k;
            self[(i, dst)] += v;
        }
    }

    /// row_dst += k * row_src
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let v = &self[(src, j)] * k;
            self[(dst, j)] += v;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -self[(i, j)].clone();
            self[(i, j)] = v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self[(i, j)].clone();
            self[(i, j)] = v;
        }
    }

    /// Replace columns (a, b) by (x·a + y·b, u·a + v·b).
    fn combine_cols(&mut self, a: usize, b: usize, x: &BigInt, y: &BigInt, u: &BigInt, v: &BigInt) {
        for i in 0..self.rows {
            let ca = self[(i, a)].clone();
            let cb = self[(i, b)].clone();
            self[(i, a)] = x * &ca + y * &cb;
            self[(i, b)] = u * &ca + v * &cb;
        }
    }

    fn combine_rows(&mut self, a: usize, b: usize, x: &BigInt, y: &BigInt, u: &BigInt, v: &BigInt) {
        for j in 0..self.cols {
            let ra = self[(a, j)].clone();
            let rb = self[(b, j)].clone();
            self[(a, j)] = x * &ra + y * &rb;
            self[(b, j)] = u * &ra + v * &rb;
        }
    }
}

impl core::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// Column Hermite normal form `H = A·U` with `U` unimodular.
#[derive(Clone, Debug)]
pub struct Hermite {
    pub hnf: IntMatrix,
    pub transform: IntMatrix,
    /// Row index of the pivot of each leading nonzero column.
    pub pivot_rows: Vec<usize>,
}

impl Hermite {
    pub fn rank(&self) -> usize {
        self.pivot_rows.len()
    }

    /// The nonzero leading columns: a basis of the column lattice.
    pub fn basis(&self) -> IntMatrix {
        self.hnf.select_columns(0..self.rank())
    }

    /// Columns of `U` mapped to zero: a basis of the integer kernel of `A`.
    pub fn kernel(&self) -> IntMatrix {
        self.transform.select_columns(self.rank()..self.transform.cols())
    }
}

/// Column-style HNF: echelon with positive pivots, entries left of each pivot
/// reduced into `[0, pivot)`.
pub fn hermite_normal_form(a: &IntMatrix) -> Hermite {
    let mut h = a.clone();
    let k = h.cols();
    let mut u = IntMatrix::identity(k);
    let mut pivot_rows = Vec::new();
    let mut c = 0;
    for i in 0..h.rows() {
        if c == k {
            break;
        }
        for j in c + 1..k {
            if h[(i, j)].is_zero() {
                continue;
            }
            if h[(i, c)].is_zero() {
                h.swap_cols(c, j);
                u.swap_cols(c, j);
                continue;
            }
            let a_ic = h[(i, c)].clone();
            let b_ij = h[(i, j)].clone();
            let e = a_ic.extended_gcd(&b_ij);
            let (g, x, y) = (e.gcd, e.x, e.y);
            let u_c = -(&b_ij / &g);
            let v_c = &a_ic / &g;
            h.combine_cols(c, j, &x, &y, &u_c, &v_c);
            u.combine_cols(c, j, &x, &y, &u_c, &v_c);
        }
        if h[(i, c)].is_zero() {
            continue;
        }
        if h[(i, c)].is_negative() {
            h.negate_col(c);
            u.negate_col(c);
        }
        let pivot = h[(i, c)].clone();
        for j in 0..c {
            let q = h[(i, j)].div_floor(&pivot);
            if !q.is_zero() {
                let neg = -q;
                h.add_col_multiple(j, c, &neg);
                u.add_col_multiple(j, c, &neg);
            }
        }
        pivot_rows.push(i);
        c += 1;
    }
    Hermite { hnf: h, transform: u, pivot_rows }
}

/// Smith normal form `D = P·A·Q` with `P`, `Q` unimodular.
#[derive(Clone, Debug)]
pub struct Smith {
    pub diagonal: IntMatrix,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

impl Smith {
    /// Nonzero diagonal entries, each dividing the next.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let n = self.diagonal.rows().min(self.diagonal.cols());
        (0..n).map(|i| self.diagonal[(i, i)].clone()).filter(|d| !d.is_zero()).collect()
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> Smith {
    let mut d = a.clone();
    let (m, n) = (d.rows(), d.cols());
    let mut p = IntMatrix::identity(m);
    let mut q = IntMatrix::identity(n);
    let size = m.min(n);
    let mut t = 0;
    while t < size {
        // Smallest nonzero entry of the trailing block becomes the pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !d[(i, j)].is_zero()
                    && best.is_none_or(|(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        d.swap_rows(t, bi);
        p.swap_rows(t, bi);
        d.swap_cols(t, bj);
        q.swap_cols(t, bj);

        loop {
            let mut changed = false;
            for i in t + 1..m {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let (a, b) = (d[(t, t)].clone(), d[(i, t)].clone());
                if (&b % &a).is_zero() {
                    // Plain elimination keeps row t intact.
                    let k = -(&b / &a);
                    d.add_row_multiple(i, t, &k);
                    p.add_row_multiple(i, t, &k);
                    continue;
                }
                let e = a.extended_gcd(&b);
                let (g, x, y) = (e.gcd, e.x, e.y);
                let (u, v) = (-(&b / &g), &a / &g);
                d.combine_rows(t, i, &x, &y, &u, &v);
                p.combine_rows(t, i, &x, &y, &u, &v);
                changed = true;
            }
            for j in t + 1..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let (a, b) = (d[(t, t)].clone(), d[(t, j)].clone());
                if (&b % &a).is_zero() {
                    let k = -(&b / &a);
                    d.add_col_multiple(j, t, &k);
                    q.add_col_multiple(j, t, &k);
                    continue;
                }
                let e = a.extended_gcd(&b);
                let (g, x, y) = (e.gcd, e.x, e.y);
                let (u, v) = (-(&b / &g), &a / &g);
                d.combine_cols(t, j, &x, &y, &u, &v);
                q.combine_cols(t, j, &x, &y, &u, &v);
                changed = true;
            }
            if changed {
                continue;
            }
            // Row and column cleared; enforce divisibility of the remainder.
            let pivot = d[(t, t)].clone();
            let offender = (t + 1..m)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !(&d[(i, j)] % &pivot).is_zero());
            match offender {
                Some((i, _)) => {
                    let one = BigInt::one();
                    d.add_row_multiple(t, i, &one);
                    p.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            p.negate_row(t);
        }
        t += 1;
    }
    Smith { diagonal: d, left: p, right: q }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn smith_of_two_three_is_one_six() {
        let a = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.invariant_factors(), vec![big(1), big(6)]);
        assert_eq!(s.left.mul(&a).mul(&s.right), s.diagonal);
    }

    #[test]
    fn identity_and_zero_are_fixed() {
        let id = IntMatrix::identity(3);
        assert_eq!(hermite_normal_form(&id).hnf, id);
        assert_eq!(smith_normal_form(&id).diagonal, id);
        let z = IntMatrix::zeros(2, 3);
        let h = hermite_normal_form(&z);
        assert!(h.hnf.is_zero());
        assert_eq!(h.rank(), 0);
        assert!(smith_normal_form(&z).diagonal.is_zero());
    }

    #[test]
    fn hnf_shape_and_kernel() {
        let a = IntMatrix::from_rows(&[vec![4, 6, 2], vec![1, 3, 5]]);
        let h = hermite_normal_form(&a);
        assert_eq!(a.mul(&h.transform), h.hnf);
        assert_eq!(h.transform.determinant().abs(), big(1));
        assert_eq!(h.rank(), 2);
        // Echelon: row 0 has a single nonzero entry.
        assert!(h.hnf[(0, 1)].is_zero() && h.hnf[(0, 2)].is_zero());
        assert!(a.mul(&h.kernel()).is_zero());
        // Reduced entries left of the pivot.
        let piv = &h.hnf[(1, 1)];
        assert!(!h.hnf[(1, 0)].is_negative() && &h.hnf[(1, 0)] < piv);
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let a = IntMatrix::from_rows(&[vec![2, -1, 0], vec![1, 3, 4], vec![0, 5, -2]]);
        // 2(−6−20) + 1(−2−0) = −54
        assert_eq!(a.determinant(), big(-54));
    }
}
