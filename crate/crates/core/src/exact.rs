//! Gaussian elimination over an exact field (`ℚ` or `ℚ(α)`).
//!
//! Matrices are row-major `Vec<Vec<F>>`; routines that may see zero rows take
//! the column count explicitly.

use alloc::vec::Vec;

use crate::scalar::Field;

/// Reduced row echelon form; returns the pivot column of each nonzero row.
pub fn rref<F: Field>(rows: &[Vec<F>], cols: usize) -> (Vec<Vec<F>>, Vec<usize>) {
    let mut m: Vec<Vec<F>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv();
        for x in m[r].iter_mut() {
            *x = x.mul(&inv);
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                for j in 0..cols {
                    let delta = factor.mul(&m[r][j]);
                    m[i][j] = m[i][j].sub(&delta);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank<F: Field>(rows: &[Vec<F>], cols: usize) -> usize {
    rref(rows, cols).1.len()
}

/// Basis of `{x : M x = 0}`. `unit` supplies zero/one of the field.
pub fn kernel<F: Field>(rows: &[Vec<F>], cols: usize, unit: &F) -> Vec<Vec<F>> {
    let (red, pivots) = rref(rows, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = alloc::vec![unit.zero_like(); cols];
            v[f] = unit.one_like();
            for (row, &p) in red.iter().zip(&pivots) {
                v[p] = row[f].zero_like().sub(&row[f]);
            }
            v
        })
        .collect()
}

/// A particular solution of `M x = b`, or `None` when inconsistent.
pub fn solve<F: Field>(rows: &[Vec<F>], cols: usize, rhs: &[F], unit: &F) -> Option<Vec<F>> {
    let augmented: Vec<Vec<F>> = rows
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let (red, pivots) = rref(&augmented, cols + 1);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = alloc::vec![unit.zero_like(); cols];
    for (row, &p) in red.iter().zip(&pivots) {
        x[p] = row[cols].clone();
    }
    Some(x)
}

pub fn transpose<F: Clone>(rows: &[Vec<F>], cols: usize) -> Vec<Vec<F>> {
    (0..cols).map(|c| rows.iter().map(|r| r[c].clone()).collect()).collect()
}

pub fn mat_vec<F: Field>(rows: &[Vec<F>], x: &[F], unit: &F) -> Vec<F> {
    rows.iter()
        .map(|row| row.iter().zip(x).fold(unit.zero_like(), |acc, (a, b)| acc.add(&a.mul(b))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rational, QuadraticField};
    use num_rational::BigRational;

    fn q(rows: &[&[i64]]) -> Vec<Vec<BigRational>> {
        rows.iter().map(|r| r.iter().map(|&x| rational(x, 1)).collect()).collect()
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let m = q(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let one = rational(1, 1);
        let k = kernel(&m, 3, &one);
        assert_eq!(k.len(), 1);
        for v in &k {
            assert!(mat_vec(&m, v, &one).iter().all(Field::is_zero));
        }
        assert_eq!(rank(&m, 3), 2);
    }

    #[test]
    fn rank_over_quadratic_field_sees_irrational_dependence() {
        let f = QuadraticField::sqrt2();
        // (1, α) and (α, 2) are ℚ(α)-dependent: second = α·first.
        let m = alloc::vec![
            alloc::vec![f.one(), f.alpha()],
            alloc::vec![f.alpha(), f.int(2)],
        ];
        assert_eq!(rank(&m, 2), 1);
    }

    #[test]
    fn solve_detects_inconsistency() {
        let one = rational(1, 1);
        let m = q(&[&[1, 1], &[2, 2]]);
        assert!(solve(&m, 2, &[rational(1, 1), rational(3, 1)], &one).is_none());
        let x = solve(&m, 2, &[rational(1, 1), rational(2, 1)], &one).unwrap();
        assert_eq!(mat_vec(&m, &x, &one), alloc::vec![rational(1, 1), rational(2, 1)]);
    }
}
