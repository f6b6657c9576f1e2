mod common;

use common::field;
use momenta_core::closure::{is_closed, GeneratedSubgroup};
use momenta_core::intmat::{hermite_normal_form, smith_normal_form, IntMatrix};
use momenta_core::lattice::{kernel_lattice, quotient_invariants, LatticeSubgroup};
use momenta_core::momentum::CocycleTheta;
use momenta_core::scalar::ExactScalar;
use momenta_core::scenario::torus_gamma0;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

/// Laplace expansion; fine for the tiny matrices used here.
fn det_oracle(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut total = BigInt::zero();
    for j in 0..n {
        let minor: Vec<Vec<BigInt>> =
            m[1..].iter().map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect()).collect();
        let term = &m[0][j] * det_oracle(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn to_rows(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

fn unimodular(m: &IntMatrix) -> bool {
    det_oracle(&to_rows(m)).abs().is_one()
}

fn matrix_strategy() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-12i64..=12, c), r)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn hermite_round_trip(rows in matrix_strategy()) {
        let a = IntMatrix::from_rows(&rows);
        let h = hermite_normal_form(&a);
        prop_assert_eq!(a.mul(&h.transform), h.hnf.clone());
        prop_assert!(unimodular(&h.transform));
        // Echelon shape: each basis column starts strictly below the previous one.
        for (k, &p) in h.pivot_rows.iter().enumerate() {
            prop_assert!(h.hnf[(p, k)].is_positive());
            for i in 0..p {
                prop_assert!(h.hnf[(i, k)].is_zero());
            }
            if k > 0 {
                prop_assert!(p > h.pivot_rows[k - 1]);
            }
        }
        for j in h.rank()..h.hnf.cols() {
            prop_assert!(h.hnf.column(j).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn smith_round_trip(rows in matrix_strategy()) {
        let a = IntMatrix::from_rows(&rows);
        let s = smith_normal_form(&a);
        prop_assert_eq!(s.left.mul(&a).mul(&s.right), s.diagonal.clone());
        prop_assert!(unimodular(&s.left) && unimodular(&s.right));
        for i in 0..s.diagonal.rows() {
            for j in 0..s.diagonal.cols() {
                if i != j {
                    prop_assert!(s.diagonal[(i, j)].is_zero());
                }
            }
        }
        let f = s.invariant_factors();
        for w in f.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero(), "{:?}", f);
        }
    }

    #[test]
    fn quotient_order_matches_determinant(cols in (1usize..=3).prop_flat_map(|d| prop::collection::vec(prop::collection::vec(-7i64..=7, d), d))) {
        let d = cols.len();
        let small = LatticeSubgroup::from_columns(d, &cols);
        let det = det_oracle(&cols.iter().map(|c| c.iter().map(|&x| BigInt::from(x)).collect()).collect::<Vec<_>>()).abs();
        let q = quotient_invariants(&LatticeSubgroup::full(d), &small).unwrap();
        if det.is_zero() {
            prop_assert!(q.free_rank > 0);
        } else {
            prop_assert_eq!(q.order(), Some(det));
        }
    }
}

fn int_theta(rows: &[Vec<i64>]) -> CocycleTheta {
    let f = field();
    let m = rows.iter().map(|r| r.iter().map(|&x| f.int(x)).collect()).collect();
    CocycleTheta::new(&f, m).unwrap()
}

fn box_vectors(d: usize, radius: i64) -> Vec<Vec<i64>> {
    let side = (2 * radius + 1) as usize;
    (0..side.pow(d as u32))
        .map(|mut code| {
            (0..d)
                .map(|_| {
                    let v = (code % side) as i64 - radius;
                    code /= side;
                    v
                })
                .collect()
        })
        .collect()
}

fn kills(rows: &[Vec<i64>], k: &[i64]) -> bool {
    rows.iter().all(|r| r.iter().zip(k).map(|(a, b)| a * b).sum::<i64>() == 0)
}

#[test]
fn kernel_lattice_small_box() {
    let cases: Vec<Vec<Vec<i64>>> = vec![
        vec![vec![0, 1, -1], vec![-1, 0, 1], vec![1, -1, 0]],
        vec![vec![0, 2, 4], vec![-2, 0, 6], vec![-4, -6, 0]],
        vec![vec![0, 1], vec![-1, 0]],
        vec![vec![0, 0], vec![0, 0]],
        vec![vec![0, 3, 0], vec![-3, 0, 0], vec![0, 0, 0]],
    ];
    for rows in cases {
        let d = rows.len();
        let gamma0 = torus_gamma0(&int_theta(&rows));
        for col in gamma0.basis_columns_i64() {
            assert!(kills(&rows, &col), "basis column {col:?} not in the kernel of {rows:?}");
        }
        let mut found = 0;
        for k in box_vectors(d, 5) {
            if kills(&rows, &k) {
                found += 1;
                let big: Vec<BigInt> = k.iter().map(|&x| BigInt::from(x)).collect();
                assert!(gamma0.contains(&big), "{k:?} missing from Γ₀ of {rows:?}");
            }
        }
        assert!(found >= 1);
    }
}

#[test]
fn kernel_lattice_uses_both_field_components() {
    let f = field();
    // h₁ = 1, h₂ = α: no integer relation, although each part alone has one.
    let rows = vec![vec![f.int(1), f.alpha()]];
    assert_eq!(kernel_lattice(&rows, 2).rank(), 0);
    let rows = vec![vec![f.int(2), &f.int(-1) + &f.alpha(), f.alpha()]];
    let k = kernel_lattice(&rows, 3);
    assert_eq!(k.rank(), 1);
    assert!(k.contains(&[BigInt::from(1), BigInt::from(2), BigInt::from(-2)]));
}

/// Search all combinations with coefficients in `[-n, n]` for a nonzero
/// element shorter than `1/n`.
fn short_vector(gens: &[Vec<f64>], n: i64) -> Option<Vec<i64>> {
    let k = gens.len();
    let dim = gens[0].len();
    for coeffs in box_vectors(k, n) {
        let v: Vec<f64> = (0..dim).map(|i| coeffs.iter().zip(gens).map(|(c, g)| *c as f64 * g[i]).sum()).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 && norm < 1.0 / n as f64 {
            return Some(coeffs);
        }
    }
    None
}

fn decide(gens: &[Vec<ExactScalar>]) -> bool {
    let h = GeneratedSubgroup::new(gens[0].len(), field(), gens.to_vec()).unwrap();
    is_closed(&h).closed
}

fn numeric(gens: &[Vec<ExactScalar>]) -> Vec<Vec<f64>> {
    gens.iter().map(|g| g.iter().map(ExactScalar::to_f64).collect()).collect()
}

#[test]
fn closedness_agrees_with_brute_force() {
    let f = field();
    let s = |t: &str| f.scalar(t).unwrap();
    let cases: Vec<Vec<Vec<ExactScalar>>> = vec![
        vec![vec![s("1")], vec![s("1*al")]],
        vec![vec![s("1")], vec![s("1/2")]],
        vec![vec![s("2/3")], vec![s("1/5")]],
        vec![vec![s("1*al")], vec![s("3*al")]],
        vec![vec![s("1"), s("0")], vec![s("0"), s("1")], vec![s("1*al"), s("0")]],
        vec![vec![s("1"), s("0")], vec![s("0"), s("1")], vec![s("1/2"), s("1/2")]],
        vec![vec![s("1/10"), s("1/10*al")], vec![s("1/10*al"), s("1/5")]],
        vec![vec![s("1"), s("1*al")], vec![s("0"), s("1")]],
    ];
    for gens in cases {
        let dense = short_vector(&numeric(&gens), 50).is_some();
        assert_eq!(decide(&gens), !dense, "{:?}", numeric(&gens));
    }
}
