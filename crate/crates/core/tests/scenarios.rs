mod common;

use common::*;
use momenta_core::lie::DualVector;
use num_bigint::BigInt;

fn strings(v: &[Vec<momenta_core::scalar::ExactScalar>]) -> Vec<Vec<String>> {
    v.iter().map(|g| g.iter().map(ToString::to_string).collect()).collect()
}

#[test]
fn invertible_torus_has_only_the_universal_cover() {
    let s = torus_invertible();
    assert!(s.gamma0().is_zero());
    let h = s.holonomy();
    assert_eq!((h.rational_rank(), h.real_rank()), (2, 2));
    assert!(s.closure().closed);
    let c = s.cover_description();
    assert_eq!(c.name, "ℝ²");
    assert_eq!(c.descriptor, "T^0 × ℝ^2");
}

#[test]
fn partial_kernel_torus_is_a_cylinder() {
    let s = torus_partial_kernel();
    let g0 = s.gamma0();
    assert_eq!(g0.rank(), 1);
    let ones = [1, 1, 1].map(BigInt::from);
    assert!(g0.contains(&ones));
    let c = s.cover_description();
    assert_eq!(c.name, "T¹ × ℝ²");
    assert_eq!(c.descriptor, "T^1 × ℝ^2");
}

#[test]
fn dense_torus_holonomy_is_not_closed() {
    let s = torus_dense();
    let h = s.holonomy();
    assert_eq!((h.rational_rank(), h.real_rank()), (3, 2));
    let closure = s.closure();
    assert!(!closure.closed);
    assert_eq!(closure.subspace_basis.len(), 1);
    // Oracle: a short combination 29·h₃ − 41·h₂ = (29√2 − 41, 0, 0).
    let gens: Vec<Vec<f64>> = h
        .generators()
        .iter()
        .map(|g| g.iter().map(|x| x.to_f64()).collect())
        .collect();
    let v: Vec<f64> = (0..3).map(|i| 29.0 * gens[2][i] - 41.0 * gens[1][i]).collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    assert!(norm > 0.0 && norm < 0.02);
}

#[test]
fn heisenberg_holonomy_is_the_central_lattice() {
    let s = heisenberg(1, 0);
    assert_eq!(strings(&s.holonomy_generators()), vec![vec!["0", "-1", "0"]]);
    assert!(s.closure().closed);
    assert!(s.gamma0().is_zero());
    assert_eq!(s.cover_description().name, "H");
    let numeric = s.holonomy_generators_numeric().unwrap();
    assert!(max_diff(&numeric[0], &[0.0, -1.0, 0.0]) <= 1e-12);
    let deck = s.deck_group(&DualVector::zeros(3), &s.gamma0()).unwrap();
    assert!(deck.symplectomorphism);
}

#[test]
fn zero_sigma_heisenberg_has_trivial_holonomy() {
    let s = heisenberg(0, 0);
    assert_eq!(s.holonomy().rational_rank(), 0);
    assert_eq!(s.gamma0().rank(), 1);
    assert_eq!(s.cover_description().name, "S¹ × ℝ²");
}
