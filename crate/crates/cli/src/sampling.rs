//! Seeded random inputs. Every sample gets its own ChaCha stream keyed by the
//! check name and the sample index, so results do not depend on scheduling.

use momenta_core::lie::{AlgebraVector, DualVector, GroupElement, GroupModel, GroupPath, Segment};
use momenta_core::momentum::PhasePath;
use momenta_core::symplectic::{PhasePoint, PhaseTangent};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type SampleRng = ChaCha8Rng;

fn fnv1a(text: &str) -> u64 {
    text.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

pub fn rng_for(seed: u64, check: &str, index: usize) -> SampleRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ fnv1a(check));
    rng.set_stream(index as u64);
    rng
}

pub fn uniform(rng: &mut SampleRng, n: usize, scale: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-scale..scale)).collect()
}

pub fn algebra(rng: &mut SampleRng, n: usize, scale: f64) -> AlgebraVector {
    AlgebraVector(uniform(rng, n, scale))
}

pub fn dual(rng: &mut SampleRng, n: usize, scale: f64) -> DualVector {
    DualVector(uniform(rng, n, scale))
}

pub fn element(rng: &mut SampleRng, model: GroupModel, scale: f64) -> GroupElement {
    model.normalize(&GroupElement(uniform(rng, model.dim(), scale)))
}

/// A path from the identity with one to three exponential segments.
pub fn path(rng: &mut SampleRng, model: GroupModel) -> GroupPath {
    let k = rng.gen_range(1..=3);
    let weights: Vec<f64> = (0..k).map(|_| rng.gen_range(0.2..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let mut durations: Vec<f64> = weights.iter().map(|w| w / total).collect();
    let head: f64 = durations[..k - 1].iter().sum();
    durations[k - 1] = 1.0 - head;
    let segments = durations
        .into_iter()
        .map(|duration| Segment { direction: algebra(rng, model.dim(), 1.5), duration })
        .collect();
    GroupPath::new(model, model.identity(), segments).expect("durations sum to one")
}

/// A phase path from `z₀` with momentum growing linearly to a random value.
pub fn phase_path(rng: &mut SampleRng, model: GroupModel) -> PhasePath {
    let base = path(rng, model);
    let mu = dual(rng, model.dim(), 1.5);
    PhasePath::linear(base, &mu).expect("linear momentum curve is valid")
}

pub fn phase_point(rng: &mut SampleRng, model: GroupModel) -> PhasePoint {
    PhasePoint::new(GroupElement(uniform(rng, model.dim(), 1.5)), dual(rng, model.dim(), 1.5))
}

pub fn tangent(rng: &mut SampleRng, n: usize) -> PhaseTangent {
    PhaseTangent::new(algebra(rng, n, 1.0), dual(rng, n, 1.0))
}

pub fn loop_index(rng: &mut SampleRng, rank: usize) -> Vec<i64> {
    (0..rank).map(|_| rng.gen_range(-3..=3)).collect()
}
