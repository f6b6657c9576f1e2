//! Eight-point Gauss–Legendre quadrature with adaptive panel doubling.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Positive nodes of the 8-point rule on `[-1, 1]` and their weights.
const NODES: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329_0,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const WEIGHTS: [f64; 4] = [
    0.362_683_783_378_362_0,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// Successive estimates must agree to this absolute (or relative, for large
/// values) tolerance.
pub const TOLERANCE: f64 = 1e-10;
pub const MAX_DOUBLINGS: u32 = 12;

pub fn nodes_and_weights() -> ([f64; 8], [f64; 8]) {
    let mut x = [0.0; 8];
    let mut w = [0.0; 8];
    for i in 0..4 {
        x[i] = -NODES[3 - i];
        w[i] = WEIGHTS[3 - i];
        x[7 - i] = NODES[3 - i];
        w[7 - i] = WEIGHTS[3 - i];
    }
    (x, w)
}

/// One application of the 8-point rule on `[a, b]`, accumulated into `acc`.
fn panel<F>(f: &F, a: f64, b: f64, acc: &mut [f64])
where
    F: Fn(f64) -> Vec<f64>,
{
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    for (x, w) in NODES.iter().zip(WEIGHTS) {
        for t in [mid - half * x, mid + half * x] {
            let y = f(t);
            for (s, v) in acc.iter_mut().zip(&y) {
                *s += w * half * v;
            }
        }
    }
}

/// Vector-valued `∫_a^b f`, halving panels until successive estimates agree.
pub fn integrate<F>(f: F, a: f64, b: f64, dim: usize) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Vec<f64>,
{
    if a == b {
        return Ok(vec![0.0; dim]);
    }
    let mut prev = vec![0.0; dim];
    panel(&f, a, b, &mut prev);
    let mut worst = (0usize, f64::INFINITY);
    for doubling in 1..=MAX_DOUBLINGS {
        let panels = 1usize << doubling;
        let h = (b - a) / panels as f64;
        let mut next = vec![0.0; dim];
        for p in 0..panels {
            let lo = a + h * p as f64;
            let hi = if p + 1 == panels { b } else { lo + h };
            panel(&f, lo, hi, &mut next);
        }
        worst = prev
            .iter()
            .zip(&next)
            .enumerate()
            .map(|(i, (x, y))| (i, (x - y).abs() / y.abs().max(1.0)))
            .fold((0, 0.0), |m, c| if c.1 > m.1 { c } else { m });
        if worst.1 < TOLERANCE {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::Quadrature { component: worst.0, delta: worst.1, doublings: MAX_DOUBLINGS })
}
