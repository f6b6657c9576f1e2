//! The cylinder `C = 𝔤*/H̄`, the cylinder-valued momentum map `K`, the affine
//! actions on `𝔤*` and `C`, orbit descriptions and the Noether check.

use alloc::vec;
use alloc::vec::Vec;

use crate::closure::ClosedSubgroupDecomp;
use crate::error::{input, Error, Result};
use crate::lattice::{quotient_invariants, AbelianInvariants, LatticeSubgroup};
use crate::lie::{DualVector, GroupPath};
use crate::linalg::{self, Mat};
use crate::momentum::{momentum_of_path, momentum_profile, sigma_j, PhasePath};
use crate::symplectic::{MagneticCotangent, PhasePoint};

/// Tolerance for equality of canonical representatives.
pub const CYLINDER_EQUALITY: f64 = 1e-9;

/// A point of `𝔤*/H̄`, stored by its canonical representative.
#[derive(Clone, Debug, PartialEq)]
pub struct CylinderPoint {
    pub representative: DualVector,
}

/// `𝔤*/(V ⊕ ℤΛ)` with numeric data for canonicalization.
#[derive(Clone, Debug, PartialEq)]
pub struct Cylinder {
    dim: usize,
    closed: bool,
    /// Orthonormal basis of `V`.
    subspace: Vec<Vec<f64>>,
    /// `Λ` projected onto `V^⊥`.
    lattice: Vec<Vec<f64>>,
    gram: Mat,
}

fn frac(x: f64) -> f64 {
    let r = x - libm::floor(x);
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

fn centered(x: f64) -> f64 {
    x - libm::round(x)
}

impl Cylinder {
    pub fn new(decomp: &ClosedSubgroupDecomp) -> Self {
        let dim = decomp.dim();
        let subspace = linalg::orthonormalize(&decomp.subspace_f64(), 1e-12);
        let strip = |v: &[f64]| {
            subspace.iter().fold(v.to_vec(), |w, b| linalg::axpy(-linalg::dot(&w, b), b, &w))
        };
        let lattice: Vec<Vec<f64>> = decomp.lattice_f64().iter().map(|v| strip(v)).collect();
        let r = lattice.len();
        let mut gram = Mat::zeros(r, r);
        for i in 0..r {
            for j in 0..r {
                gram[(i, j)] = linalg::dot(&lattice[i], &lattice[j]);
            }
        }
        Self { dim, closed: decomp.closed, subspace, lattice, gram }
    }

    /// `𝔤*` itself (trivial holonomy).
    pub fn trivial(dim: usize) -> Self {
        Self { dim, closed: true, subspace: Vec::new(), lattice: Vec::new(), gram: Mat::zeros(0, 0) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Whether the holonomy group was already closed.
    pub fn holonomy_closed(&self) -> bool {
        self.closed
    }

    /// `a` in `ℝ^a × T^b`.
    pub fn line_rank(&self) -> usize {
        self.dim - self.subspace.len() - self.lattice.len()
    }

    pub fn torus_rank(&self) -> usize {
        self.lattice.len()
    }

    /// `T_μ π_C`: remove the `V` component.
    pub fn tangent_projection(&self, v: &[f64]) -> Vec<f64> {
        self.subspace.iter().fold(v.to_vec(), |w, b| linalg::axpy(-linalg::dot(&w, b), b, &w))
    }

    /// Split `v` (after removing `V`) as `Σ c_i λ_i + r` with `r ⟂ Λ`.
    fn split(&self, v: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let w = self.tangent_projection(v);
        if self.lattice.is_empty() {
            return (Vec::new(), w);
        }
        let rhs: Vec<f64> = self.lattice.iter().map(|l| linalg::dot(l, &w)).collect();
        let c = self.gram.solve(&rhs).expect("lattice basis is independent");
        let rest = self.lattice.iter().zip(&c).fold(w, |acc, (l, ci)| linalg::axpy(-ci, l, &acc));
        (c, rest)
    }

    fn rebuild(&self, coords: &[f64], rest: Vec<f64>) -> Vec<f64> {
        self.lattice.iter().zip(coords).fold(rest, |acc, (l, ci)| linalg::axpy(*ci, l, &acc))
    }

    /// `π_C(μ)`.
    pub fn project(&self, mu: &[f64]) -> CylinderPoint {
        let (c, rest) = self.split(mu);
        let c: Vec<f64> = c.into_iter().map(frac).collect();
        CylinderPoint { representative: DualVector(self.rebuild(&c, rest)) }
    }

    pub fn add(&self, p: &CylinderPoint, q: &CylinderPoint) -> CylinderPoint {
        self.project(&linalg::add(&p.representative, &q.representative))
    }

    /// Length of the shortest representative of `p − q`.
    pub fn distance(&self, p: &CylinderPoint, q: &CylinderPoint) -> f64 {
        let (c, rest) = self.split(&linalg::sub(&p.representative, &q.representative));
        let c: Vec<f64> = c.into_iter().map(centered).collect();
        linalg::norm(&self.rebuild(&c, rest))
    }

    pub fn zero(&self) -> CylinderPoint {
        CylinderPoint { representative: DualVector::zeros(self.dim) }
    }
}

/// `K(z) = π_C(J(z̃))` for a path `x` from `z₀` to `z`.
pub fn cylinder_momentum(
    model: &MagneticCotangent,
    cylinder: &Cylinder,
    x: &PhasePath,
) -> Result<CylinderPoint> {
    Ok(cylinder.project(&momentum_of_path(model, x)?))
}

/// `g̃·μ = Ad*_{g^{-1}} μ + σ_J(g̃)`.
pub fn affine_action(model: &MagneticCotangent, g: &GroupPath, mu: &DualVector) -> Result<DualVector> {
    if mu.len() != model.dim() {
        return Err(input("affine action: momentum has the wrong dimension"));
    }
    let s = sigma_j(model, g)?;
    Ok(g.model().coadjoint_inverse(g.endpoint(), mu).plus(&s))
}

/// `σ_K(g) = π_C(σ_J(g̃))` for a lift `g̃` of `g`.
pub fn sigma_k(model: &MagneticCotangent, cylinder: &Cylinder, lift: &GroupPath) -> Result<CylinderPoint> {
    Ok(cylinder.project(&sigma_j(model, lift)?))
}

/// `Φ(g, [μ]) = [Ad*_{g^{-1}} μ] + σ_K(g)`.
pub fn affine_cylinder_action(
    model: &MagneticCotangent,
    cylinder: &Cylinder,
    lift: &GroupPath,
    point: &CylinderPoint,
) -> Result<CylinderPoint> {
    Ok(cylinder.project(&affine_action(model, lift, &point.representative)?))
}

/// Deck group `Γ_μ/(Γ_N + Γ′)` of the reduced-space cover.
pub fn deck_group_from_lattices(
    gamma_mu: &LatticeSubgroup,
    gamma_prime: &LatticeSubgroup,
    gamma_n: &LatticeSubgroup,
) -> Result<AbelianInvariants> {
    let denominator = gamma_n.sum(gamma_prime)?;
    quotient_invariants(gamma_mu, &denominator)
}

/// `f(ψ, ν) = ½ψ² − ⟨ω^{-1}σ, ν⟩`, where `v = ω^{-1}σ = (σ₂, −σ₁)` solves
/// `ι_v ω = σ`.
pub fn heisenberg_casimir(sigma: [f64; 2], psi: f64, nu: [f64; 2]) -> f64 {
    0.5 * psi * psi - (sigma[1] * nu[0] - sigma[0] * nu[1])
}

/// Analytic description of an orbit of the affine action.
#[derive(Clone, Debug, PartialEq)]
pub enum OrbitDescriptor {
    /// `base + span(directions)`, directions orthonormal.
    AffineSubspace { base: DualVector, directions: Vec<Vec<f64>> },
    /// `{(ψ, ν) : f(ψ, ν) = value}`.
    CasimirLevelSet { sigma: [f64; 2], value: f64 },
    SampledCloud { points: Vec<DualVector> },
}

impl OrbitDescriptor {
    pub fn kind(&self) -> &'static str {
        match self {
            OrbitDescriptor::AffineSubspace { .. } => "affineSubspace",
            OrbitDescriptor::CasimirLevelSet { .. } => "casimirLevelSet",
            OrbitDescriptor::SampledCloud { .. } => "sampledCloud",
        }
    }

    /// Distance-like defect of `p` from the described set.
    pub fn membership_error(&self, p: &[f64]) -> f64 {
        match self {
            OrbitDescriptor::AffineSubspace { base, directions } => {
                let w = linalg::sub(p, base);
                let r = directions
                    .iter()
                    .fold(w, |acc, d| linalg::axpy(-linalg::dot(&acc, d), d, &acc));
                linalg::norm(&r)
            }
            OrbitDescriptor::CasimirLevelSet { sigma, value } => {
                (heisenberg_casimir(*sigma, p[0], [p[1], p[2]]) - value).abs()
            }
            OrbitDescriptor::SampledCloud { points } => points
                .iter()
                .map(|q| linalg::norm(&linalg::sub(p, q)))
                .fold(f64::INFINITY, f64::min),
        }
    }
}

/// Largest membership defect of `g̃·μ` over the given group elements.
pub fn validate_orbit(
    model: &MagneticCotangent,
    descriptor: &OrbitDescriptor,
    mu: &DualVector,
    samples: &[GroupPath],
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for g in samples {
        worst = worst.max(descriptor.membership_error(&affine_action(model, g, mu)?));
    }
    Ok(worst)
}

pub const NOETHER_STEP: f64 = 1e-3;
pub const NOETHER_HALVING_TOLERANCE: f64 = 1e-8;

/// `X_h` for the kinetic Hamiltonian `h(g, μ) = ½|μ|²`; returns the chart
/// velocity of `g` and `μ̇`.
fn kinetic_field(model: &MagneticCotangent, state: &PhasePoint) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = model.dim();
    let mut dh = vec![0.0; 2 * n];
    dh[n..].copy_from_slice(&state.mu);
    let x = model.hamiltonian_vector(state, &dh)?;
    Ok((model.cover().chart_velocity(&state.g, &x.xi), x.nu.0))
}

fn rk4_kinetic(model: &MagneticCotangent, z: &PhasePoint, h: f64) -> Result<PhasePoint> {
    let shift = |p: &PhasePoint, k: &(Vec<f64>, Vec<f64>), s: f64| PhasePoint {
        g: linalg::axpy(s, &k.0, &p.g).into(),
        mu: linalg::axpy(s, &k.1, &p.mu).into(),
    };
    let k1 = kinetic_field(model, z)?;
    let k2 = kinetic_field(model, &shift(z, &k1, 0.5 * h))?;
    let k3 = kinetic_field(model, &shift(z, &k2, 0.5 * h))?;
    let k4 = kinetic_field(model, &shift(z, &k3, h))?;
    let combine = |a: &[f64], b: &[f64], c: &[f64], d: &[f64], y: &[f64]| -> Vec<f64> {
        (0..y.len()).map(|i| y[i] + h / 6.0 * (a[i] + 2.0 * b[i] + 2.0 * c[i] + d[i])).collect()
    };
    Ok(PhasePoint {
        g: combine(&k1.0, &k2.0, &k3.0, &k4.0, &z.g).into(),
        mu: combine(&k1.1, &k2.1, &k3.1, &k4.1, &z.mu).into(),
    })
}

fn kinetic_trajectory(model: &MagneticCotangent, z: &PhasePoint, t_final: f64, steps: usize) -> Result<Vec<PhasePoint>> {
    let h = t_final / steps as f64;
    let mut out = vec![z.clone()];
    for _ in 0..steps {
        let next = rk4_kinetic(model, out.last().unwrap(), h)?;
        out.push(next);
    }
    Ok(out)
}

/// Follow the flow of `h = ½|μ|²` for time `t_final` from the endpoint of
/// `start`, and return the largest cylinder distance of `K` along the flow
/// from its initial value.
pub fn noether_check(
    model: &MagneticCotangent,
    cylinder: &Cylinder,
    start: &PhasePath,
    t_final: f64,
    step: f64,
) -> Result<f64> {
    if !(t_final >= 0.0) || !(step > 0.0) {
        return Err(input("noether_check: need t_final ≥ 0 and a positive step"));
    }
    if t_final == 0.0 {
        return Ok(0.0);
    }
    let steps = libm::ceil(t_final / step) as usize;
    let z = start.endpoint();
    let coarse = kinetic_trajectory(model, &z, t_final, steps)?;
    let fine = kinetic_trajectory(model, &z, t_final, 2 * steps)?;
    let (a, b) = (coarse.last().unwrap(), fine.last().unwrap());
    let discrepancy = linalg::max_abs(&linalg::sub(&a.g, &b.g)).max(linalg::max_abs(&linalg::sub(&a.mu, &b.mu)));
    if discrepancy > NOETHER_HALVING_TOLERANCE {
        return Err(Error::Integration {
            what: "kinetic flow",
            discrepancy,
            tolerance: NOETHER_HALVING_TOLERANCE,
        });
    }
    let times: Vec<f64> = (0..=steps).map(|i| i as f64 / steps as f64).collect();
    let (flow, mismatch) = PhasePath::from_samples(model.cover(), &times, &coarse)?;
    if mismatch > 1e-9 {
        return Err(Error::Refinement { mismatch, doublings: 0 });
    }
    let whole = start.concat(&flow)?;
    let profile = momentum_profile(model, &whole)?;
    let offset = start.base().segments().len();
    let k0 = cylinder.project(&profile[offset]);
    Ok(profile[offset..]
        .iter()
        .map(|j| cylinder.distance(&cylinder.project(j), &k0))
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::{is_closed, GeneratedSubgroup};
    use crate::lie::{AlgebraVector, GroupModel};
    use crate::momentum::CocycleTheta;
    use crate::scalar::QuadraticField;

    fn heis_cylinder() -> Cylinder {
        let f = QuadraticField::sqrt2();
        let h = GeneratedSubgroup::new(3, f.clone(), vec![vec![f.int(0), f.int(1), f.int(0)]]).unwrap();
        Cylinder::new(&is_closed(&h))
    }

    #[test]
    fn projection_examples() {
        let c = heis_cylinder();
        let p = c.project(&[2.0, 1.7, 0.3]);
        assert!(linalg::max_abs(&linalg::sub(&p.representative, &[2.0, 0.7, 0.3])) < 1e-12);
        assert!(c.distance(&c.project(&[0.0, 3.0, 0.0]), &c.zero()) < 1e-12);
        let t = Cylinder::trivial(2);
        assert_eq!(t.project(&[1.5, -2.0]).representative.0, vec![1.5, -2.0]);
    }

    #[test]
    fn distance_wraps_lattice_coordinates() {
        let c = heis_cylinder();
        let a = c.project(&[0.0, 0.999_999_999_99, 0.0]);
        assert!(c.distance(&a, &c.zero()) < 1e-10);
    }

    #[test]
    fn dense_direction_is_removed() {
        let f = QuadraticField::sqrt2();
        let h = GeneratedSubgroup::new(1, f.clone(), vec![vec![f.int(1)], vec![f.alpha()]]).unwrap();
        let c = Cylinder::new(&is_closed(&h));
        assert_eq!(c.line_rank(), 0);
        assert!(c.project(&[3.7]).representative.max_abs() < 1e-15);
    }

    #[test]
    fn casimir_examples() {
        assert_eq!(heisenberg_casimir([1.0, 0.0], 0.0, [0.0, 0.0]), 0.0);
        // v = (0, −1), so ⟨v, ν⟩ = 1 for ν = (0, −1)
        assert_eq!(heisenberg_casimir([1.0, 0.0], 2.0, [0.0, -1.0]), 1.0);
    }

    #[test]
    fn synthetic_deck_group_is_z2() {
        let gamma_mu = LatticeSubgroup::full(2);
        let gamma_prime = LatticeSubgroup::from_columns(2, &[vec![2, 0], vec![0, 1]]);
        let d = deck_group_from_lattices(&gamma_mu, &gamma_prime, &LatticeSubgroup::zero(2)).unwrap();
        assert_eq!(alloc::format!("{d}"), "ℤ/2");
    }

    #[test]
    fn noether_zero_time_and_torus_drift() {
        let f = QuadraticField::sqrt2();
        let theta = CocycleTheta::from_strings(&f, &[&["0", "1"], &["-1", "0"]]).unwrap();
        let m = MagneticCotangent::new(GroupModel::torus(2), theta).unwrap();
        let h = GeneratedSubgroup::new(2, f.clone(), vec![vec![f.int(0), f.int(-1)], vec![f.int(1), f.int(0)]]).unwrap();
        let cyl = Cylinder::new(&is_closed(&h));
        let start = PhasePath::linear(
            GroupPath::straight(m.cover(), &AlgebraVector(vec![0.3, 0.8])),
            &DualVector(vec![1.0, -0.5]),
        )
        .unwrap();
        assert_eq!(noether_check(&m, &cyl, &start, 0.0, NOETHER_STEP).unwrap(), 0.0);
        let drift = noether_check(&m, &cyl, &start, 1.0, NOETHER_STEP).unwrap();
        assert!(drift <= 1e-6, "drift {drift}");
    }
}
