#![allow(dead_code)]

use momenta_core::lie::{AlgebraVector, DualVector, GroupModel, GroupPath, Segment};
use momenta_core::momentum::{CocycleTheta, PhasePath};
use momenta_core::scalar::QuadraticField;
use momenta_core::scenario::Scenario;
use proptest::prelude::*;

pub fn field() -> QuadraticField {
    QuadraticField::sqrt2()
}

pub fn torus(rows: &[&[&str]]) -> Scenario {
    Scenario::torus(CocycleTheta::from_strings(&field(), rows).unwrap()).unwrap()
}

pub fn torus_invertible() -> Scenario {
    torus(&[&["0", "1"], &["-1", "0"]])
}

pub fn torus_zero() -> Scenario {
    torus(&[&["0", "0"], &["0", "0"]])
}

pub fn torus_partial_kernel() -> Scenario {
    torus(&[&["0", "1", "-1"], &["-1", "0", "1"], &["1", "-1", "0"]])
}

pub fn torus_dense() -> Scenario {
    torus(&[&["0", "1", "1*al"], &["-1", "0", "0"], &["-1*al", "0", "0"]])
}

pub fn heisenberg(s1: i64, s2: i64) -> Scenario {
    let f = field();
    Scenario::central_extension(&f, [f.int(s1), f.int(s2)]).unwrap()
}

pub fn all_scenarios() -> Vec<(&'static str, Scenario)> {
    vec![
        ("torus θ=0", torus_zero()),
        ("torus invertible", torus_invertible()),
        ("torus partial kernel", torus_partial_kernel()),
        ("heisenberg", heisenberg(1, 0)),
    ]
}

pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Strategy: a path from the identity through up to three segments with
/// durations proportional to the drawn weights.
pub fn path_strategy(model: GroupModel) -> impl Strategy<Value = GroupPath> {
    let n = model.dim();
    prop::collection::vec((prop::collection::vec(-1.5f64..1.5, n), 0.2f64..1.0), 1..=3).prop_map(
        move |parts| {
            let total: f64 = parts.iter().map(|p| p.1).sum();
            let mut segments: Vec<Segment> = parts
                .into_iter()
                .map(|(d, w)| Segment { direction: AlgebraVector(d), duration: w / total })
                .collect();
            let head: f64 = segments[..segments.len() - 1].iter().map(|s| s.duration).sum();
            segments.last_mut().unwrap().duration = 1.0 - head;
            GroupPath::new(model, model.identity(), segments).unwrap()
        },
    )
}

pub fn phase_path_strategy(model: GroupModel) -> impl Strategy<Value = PhasePath> {
    let n = model.dim();
    (path_strategy(model), prop::collection::vec(-1.5f64..1.5, n))
        .prop_map(|(p, mu)| PhasePath::linear(p, &DualVector(mu)).unwrap())
}
