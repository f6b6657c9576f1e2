//! The cocycle integral `Θ`, the momentum map `J` on the universal cover of
//! the phase space, and the non-equivariance cocycle `σ_J`.
//!
//! Everything here is evaluated on piecewise-exponential paths starting at
//! `z₀ = (e, 0)`. On each segment the integrands are polynomial in `t` for the
//! supported groups, so Gauss–Legendre quadrature converges immediately.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{input, Error, Result};
use crate::lie::{self, AlgebraVector, DualVector, GroupElement, GroupKind, GroupModel, GroupPath, Segment};
use crate::linalg::{self, Mat};
use crate::quadrature::integrate;
use crate::scalar::{ExactScalar, Field, QuadraticField};
use crate::symplectic::{MagneticCotangent, PhasePoint, PhaseTangent};

/// Skew map `θ: 𝔤 → 𝔤*` with entries in `ℚ(α)`; `(θξ)_i = Σ_j θ_ij ξ_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct CocycleTheta {
    field: QuadraticField,
    matrix: Vec<Vec<ExactScalar>>,
    approx: Mat,
}

impl CocycleTheta {
    pub fn new(field: &QuadraticField, matrix: Vec<Vec<ExactScalar>>) -> Result<Self> {
        let n = matrix.len();
        if matrix.iter().any(|r| r.len() != n) {
            return Err(input("theta must be a square matrix"));
        }
        for i in 0..n {
            for j in 0..n {
                if matrix[i][j].field() != *field {
                    return Err(input("theta entries live in different fields"));
                }
                if !(&matrix[i][j] + &matrix[j][i]).is_zero() {
                    return Err(input("theta not antisymmetric"));
                }
            }
        }
        let approx = Mat::from_rows(
            &matrix.iter().map(|r| r.iter().map(ExactScalar::to_f64).collect()).collect::<Vec<_>>(),
        );
        Ok(Self { field: field.clone(), matrix, approx })
    }

    /// Parse every entry with the `a/b+c/d*al` syntax.
    pub fn from_strings(field: &QuadraticField, rows: &[&[&str]]) -> Result<Self> {
        let matrix = rows
            .iter()
            .map(|r| r.iter().map(|s| field.scalar(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(field, matrix)
    }

    pub fn zero(field: &QuadraticField, n: usize) -> Self {
        Self::new(field, vec![vec![field.zero(); n]; n]).expect("zero is skew")
    }

    /// `[[0, σ], [−σᵀ, 0]]` on `𝔥 = ℝ e_c ⊕ ℝ²`.
    pub fn heisenberg(field: &QuadraticField, sigma: [ExactScalar; 2]) -> Self {
        let z = field.zero();
        let [s1, s2] = sigma;
        let matrix = vec![
            vec![z.clone(), s1.clone(), s2.clone()],
            vec![-&s1, z.clone(), z.clone()],
            vec![-&s2, z.clone(), z],
        ];
        Self::new(field, matrix).expect("heisenberg theta is skew")
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn field(&self) -> &QuadraticField {
        &self.field
    }

    pub fn entries(&self) -> &[Vec<ExactScalar>] {
        &self.matrix
    }

    pub fn matrix_f64(&self) -> &Mat {
        &self.approx
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(Field::is_zero)
    }

    pub fn apply(&self, xi: &[f64]) -> DualVector {
        DualVector(self.approx.apply(xi))
    }

    /// `θ(e_j)`, the `j`-th column, exactly.
    pub fn column(&self, j: usize) -> Vec<ExactScalar> {
        self.matrix.iter().map(|r| r[j].clone()).collect()
    }

    /// `θ k` for an integer vector `k`, exactly.
    pub fn apply_integer(&self, k: &[i64]) -> Vec<ExactScalar> {
        self.matrix
            .iter()
            .map(|r| {
                r.iter()
                    .zip(k)
                    .fold(self.field.zero(), |acc, (x, &c)| &acc + &(x * &self.field.int(c)))
            })
            .collect()
    }

    /// `σ` when `θ` has the Heisenberg shape.
    pub fn heisenberg_sigma(&self) -> Option<[ExactScalar; 2]> {
        if self.dim() != 3 || !self.matrix[1][2].is_zero() {
            return None;
        }
        Some([self.matrix[0][1].clone(), self.matrix[0][2].clone()])
    }

    pub fn heisenberg_sigma_f64(&self) -> Option<[f64; 2]> {
        self.heisenberg_sigma().map(|[a, b]| [a.to_f64(), b.to_f64()])
    }

    /// Checks the cocycle identity `⟨θ[ξ,η], ζ⟩ + cyclic = 0` exactly on basis
    /// triples, and the block shape required for the Heisenberg family.
    pub fn validate_for(&self, group: GroupModel) -> Result<()> {
        if self.dim() != group.dim() {
            return Err(input("theta dimension does not match the group"));
        }
        if !group.is_abelian() && self.heisenberg_sigma().is_none() {
            return Err(input("theta for the Heisenberg family must have the form [[0, σ], [−σᵀ, 0]]"));
        }
        if !self.cocycle_identity_holds(group) {
            return Err(input("theta fails the cocycle identity"));
        }
        Ok(())
    }

    pub fn cocycle_identity_holds(&self, group: GroupModel) -> bool {
        let c = group.structure_constants();
        let n = self.dim();
        let f = &self.field;
        // ⟨θ[e_i,e_j], e_k⟩ = Σ_l c_ij^l θ_kl
        let term = |i: usize, j: usize, k: usize| {
            (0..n).fold(f.zero(), |acc, l| &acc + &(&f.rational(c[i][j][l].clone()) * &self.matrix[k][l]))
        };
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let s = &(&term(i, j, k) + &term(j, k, i)) + &term(k, i, j);
                    if !s.is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// A phase-space path `x(t) = (g(t), μ(t))` with `μ` piecewise linear on the
/// breakpoints of `g`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhasePath {
    base: GroupPath,
    momenta: Vec<DualVector>,
}

impl PhasePath {
    pub fn new(base: GroupPath, momenta: Vec<DualVector>) -> Result<Self> {
        if momenta.len() != base.segments().len() + 1 {
            return Err(input("momentum curve needs one value per breakpoint"));
        }
        let n = base.model().dim();
        if momenta.iter().any(|m| m.len() != n) {
            return Err(input("momentum curve has the wrong dimension"));
        }
        Ok(Self { base, momenta })
    }

    /// Momentum constant in body coordinates.
    pub fn constant(base: GroupPath, mu: &DualVector) -> Result<Self> {
        let k = base.segments().len() + 1;
        Self::new(base, vec![mu.clone(); k])
    }

    /// Momentum `t μ` along `base`.
    pub fn linear(base: GroupPath, mu: &DualVector) -> Result<Self> {
        let momenta = base.breakpoints().iter().map(|&t| mu.scaled(t)).collect();
        Self::new(base, momenta)
    }

    /// The trivial path at `z₀`.
    pub fn trivial(model: GroupModel) -> Self {
        Self::constant(GroupPath::trivial(model), &DualVector::zeros(model.dim()))
            .expect("trivial path is valid")
    }

    /// Sample `(g, μ)` at increasing times (first `0`, last `1`) and join the
    /// samples by exponential segments with linear momentum.
    pub fn from_samples(
        model: GroupModel,
        times: &[f64],
        points: &[PhasePoint],
    ) -> Result<(Self, f64)> {
        if times.len() != points.len() || times.len() < 2 {
            return Err(input("need at least two matching samples"));
        }
        let values: Vec<GroupElement> = points.iter().map(|p| p.g.clone()).collect();
        let (base, mismatch) = lie::interpolate(model, times, &values)?;
        let momenta = points.iter().map(|p| p.mu.clone()).collect();
        Ok((Self::new(base, momenta)?, mismatch))
    }

    pub fn base(&self) -> &GroupPath {
        &self.base
    }

    pub fn momenta(&self) -> &[DualVector] {
        &self.momenta
    }

    pub fn model(&self) -> GroupModel {
        self.base.model()
    }

    pub fn starts_at_base_point(&self) -> bool {
        self.base.is_based_at_identity() && self.momenta[0].max_abs() == 0.0
    }

    /// `μ` on segment `k` at time `t`.
    pub fn momentum_in(&self, k: usize, t: f64) -> DualVector {
        let t0 = self.base.breakpoints()[k];
        self.momenta[k].plus(&self.rate(k).scaled(t - t0))
    }

    pub fn momentum_at(&self, t: f64) -> Result<DualVector> {
        let k = self.base.segment_index(t)?;
        Ok(self.momentum_in(k, t))
    }

    /// `μ̇` on segment `k`.
    pub fn rate(&self, k: usize) -> DualVector {
        let dt = self.base.segments()[k].duration;
        self.momenta[k + 1].minus(&self.momenta[k]).scaled(1.0 / dt)
    }

    /// Left-trivialized velocity on segment `k`.
    pub fn velocity(&self, k: usize) -> PhaseTangent {
        PhaseTangent::new(self.base.segments()[k].direction.clone(), self.rate(k))
    }

    pub fn point_at(&self, t: f64) -> Result<PhasePoint> {
        let k = self.base.segment_index(t)?;
        Ok(PhasePoint::new(self.base.evaluate_in(k, t), self.momentum_in(k, t)))
    }

    pub fn endpoint(&self) -> PhasePoint {
        PhasePoint::new(self.base.endpoint().clone(), self.momenta.last().unwrap().clone())
    }

    /// Follow `self`, then `other` left-translated by the endpoint of `self`.
    /// Momentum is unchanged by left translation, so it must be continuous.
    pub fn concat(&self, other: &PhasePath) -> Result<PhasePath> {
        let gap = self.momenta.last().unwrap().minus(&other.momenta[0]).max_abs();
        if gap > 1e-12 {
            return Err(input(format!("momentum curves do not join (gap {gap:e})")));
        }
        let base = self.base.concat(&other.base)?;
        let momenta = self.momenta.iter().chain(&other.momenta[1..]).cloned().collect();
        PhasePath::new(base, momenta)
    }
}

fn require_identity_start(p: &GroupPath, what: &str) -> Result<()> {
    if !p.is_based_at_identity() {
        return Err(input(format!("{what}: path must start at the identity")));
    }
    Ok(())
}

fn check_cover(model: &MagneticCotangent, p: &GroupPath) -> Result<()> {
    if p.model() != model.cover() {
        return Err(input("path does not live in the universal cover of the phase space group"));
    }
    Ok(())
}

/// Integrate a per-segment integrand over every segment, returning the
/// cumulative values at the breakpoints.
fn integrate_segments<F>(p: &GroupPath, dim: usize, f: F) -> Result<Vec<DualVector>>
where
    F: Fn(usize, f64) -> Vec<f64>,
{
    let mut acc = DualVector::zeros(dim);
    let mut out = vec![acc.clone()];
    let bp = p.breakpoints();
    for k in 0..p.segments().len() {
        let part = integrate(|t| f(k, t), bp[k], bp[k + 1], dim)?;
        acc = acc.plus(&DualVector(part));
        out.push(acc.clone());
    }
    Ok(out)
}

/// `Θ(g̃) = ∫₀¹ Ad*_{g(t)^{-1}} θ(g(t)^{-1} ġ(t)) dt`.
pub fn theta_integral(theta: &CocycleTheta, p: &GroupPath) -> Result<DualVector> {
    require_identity_start(p, "theta_integral")?;
    let model = p.model();
    if theta.dim() != model.dim() {
        return Err(input("theta dimension does not match the path"));
    }
    let n = model.dim();
    let profile = integrate_segments(p, n, |k, t| {
        let g = p.evaluate_in(k, t);
        let th = theta.apply(&p.segments()[k].direction);
        model.coadjoint_inverse(&g, &th).0
    })?;
    Ok(profile.last().unwrap().clone())
}

/// `Θ(α, u) = (σ(u), −ασ − ½σ(u) ι_uω)` on the Heisenberg group.
pub fn theta_closed_form_heisenberg(
    model: GroupModel,
    sigma: [f64; 2],
    endpoint: &GroupElement,
) -> Result<DualVector> {
    if !matches!(model.kind(), GroupKind::Heisenberg | GroupKind::CentralExtension) {
        return Err(input("closed-form Θ is only available for the Heisenberg family"));
    }
    if endpoint.len() != 3 {
        return Err(input("Heisenberg elements have three coordinates"));
    }
    let (a, u) = (endpoint[0], [endpoint[1], endpoint[2]]);
    let su = sigma[0] * u[0] + sigma[1] * u[1];
    let iu = lie::iota_omega(u);
    Ok(DualVector(vec![
        su,
        -a * sigma[0] - 0.5 * su * iu[0],
        -a * sigma[1] - 0.5 * su * iu[1],
    ]))
}

/// `⟨ω(ξ_M, ẋ), e_i⟩` for every basis vector, on segment `k` at time `t`.
fn momentum_integrand(model: &MagneticCotangent, x: &PhasePath, k: usize, t: f64) -> Vec<f64> {
    let group = x.model();
    let g = x.base().evaluate_in(k, t);
    let mu = x.momentum_in(k, t);
    let v = x.velocity(k);
    let n = group.dim();
    let ad_inv = group.adjoint(&group.inverse(&g));
    let zero = DualVector::zeros(n);
    (0..n)
        .map(|i| {
            let gen = PhaseTangent::new(
                AlgebraVector((0..n).map(|r| ad_inv[(r, i)]).collect()),
                zero.clone(),
            );
            model.omega_unchecked(&mu, &gen, &v)
        })
        .collect()
}

/// `J` at the breakpoints of `x`, accumulated from `J(z₀) = 0`.
pub fn momentum_profile(model: &MagneticCotangent, x: &PhasePath) -> Result<Vec<DualVector>> {
    check_cover(model, x.base())?;
    if !x.starts_at_base_point() {
        return Err(input("momentum_of_path: path must start at z₀ = (e, 0)"));
    }
    integrate_segments(x.base(), model.dim(), |k, t| momentum_integrand(model, x, k, t))
}

/// `⟨J(x̃), ξ⟩ = ∫ x*(i_{ξ_M} ω)`, by quadrature.
pub fn momentum_of_path(model: &MagneticCotangent, x: &PhasePath) -> Result<DualVector> {
    Ok(momentum_profile(model, x)?.pop().unwrap())
}

/// `J(g̃, μ) = Ad*_{g^{-1}} μ + Θ(g̃)`.
pub fn momentum_closed_form(
    model: &MagneticCotangent,
    g: &GroupPath,
    mu: &DualVector,
) -> Result<DualVector> {
    check_cover(model, g)?;
    if mu.len() != model.dim() {
        return Err(input("momentum has the wrong dimension"));
    }
    let theta = theta_integral(model.theta(), g)?;
    Ok(g.model().coadjoint_inverse(g.endpoint(), mu).plus(&theta))
}

pub const TRANSPORT_STEPS_PER_UNIT: usize = 1024;
pub const TRANSPORT_TOLERANCE: f64 = 1e-7;

fn rk4_time_only<F>(f: &F, a: f64, b: f64, steps: usize, dim: usize) -> Vec<f64>
where
    F: Fn(f64) -> Vec<f64>,
{
    let h = (b - a) / steps as f64;
    let mut y = vec![0.0; dim];
    for s in 0..steps {
        let t = a + h * s as f64;
        let t1 = if s + 1 == steps { b } else { t + h };
        // The stages of RK4 for y' = f(t) collapse to these three samples.
        let k1 = f(t);
        let k2 = f(0.5 * (t + t1));
        let k4 = f(t1);
        for i in 0..dim {
            y[i] += (t1 - t) / 6.0 * (k1[i] + 4.0 * k2[i] + k4[i]);
        }
    }
    y
}

/// Transport along the flat connection: integrate the horizontality
/// condition `⟨μ̇, e_i⟩ = ω(ξ_{e_i,M}, ẋ)` from `0` with classical RK4.
pub fn horizontal_transport(model: &MagneticCotangent, x: &PhasePath) -> Result<DualVector> {
    check_cover(model, x.base())?;
    if !x.starts_at_base_point() {
        return Err(input("horizontal_transport: path must start at z₀ = (e, 0)"));
    }
    let n = model.dim();
    let bp = x.base().breakpoints();
    let mut coarse = vec![0.0; n];
    let mut fine = vec![0.0; n];
    for k in 0..x.base().segments().len() {
        let f = |t: f64| momentum_integrand(model, x, k, t);
        let steps = libm::ceil((bp[k + 1] - bp[k]) * TRANSPORT_STEPS_PER_UNIT as f64).max(1.0) as usize;
        coarse = linalg::add(&coarse, &rk4_time_only(&f, bp[k], bp[k + 1], steps, n));
        fine = linalg::add(&fine, &rk4_time_only(&f, bp[k], bp[k + 1], 2 * steps, n));
    }
    let discrepancy = linalg::max_abs(&linalg::sub(&coarse, &fine));
    if discrepancy > TRANSPORT_TOLERANCE {
        return Err(Error::Integration {
            what: "horizontal transport",
            discrepancy,
            tolerance: TRANSPORT_TOLERANCE,
        });
    }
    Ok(DualVector(fine))
}

/// `⟨σ_J(g̃), ξ⟩ = ∫₀¹ Ψ(z₀)(Ad_{g(t)^{-1}} ξ, g(t)^{-1} ġ(t)) dt`.
pub fn sigma_j(model: &MagneticCotangent, g: &GroupPath) -> Result<DualVector> {
    check_cover(model, g)?;
    require_identity_start(g, "sigma_J")?;
    let group = g.model();
    let n = group.dim();
    let chu = model.chu_map(&PhasePoint::base(group));
    let profile = integrate_segments(g, n, |k, t| {
        let ad_inv = group.adjoint(&group.inverse(&g.evaluate_in(k, t)));
        let w = chu.apply(&g.segments()[k].direction);
        ad_inv.transpose().apply(&w)
    })?;
    Ok(profile.last().unwrap().clone())
}

/// `t ↦ g(t)·x(t)`: the base is multiplied pointwise, body momentum is kept.
pub fn lifted_action_on_path(g: &GroupPath, x: &PhasePath) -> Result<PhasePath> {
    if g.model() != x.model() {
        return Err(input("lifted action: paths live in different groups"));
    }
    require_identity_start(g, "lifted action")?;
    require_identity_start(x.base(), "lifted action")?;
    let model = g.model();
    let (base, nodes) = lie::resample(model, g.breakpoints(), x.base().breakpoints(), |t| {
        Ok(model.compose(&g.evaluate(t)?, &x.base().evaluate(t)?))
    })?;
    let momenta = nodes.iter().map(|&t| x.momentum_at(t)).collect::<Result<Vec<_>>>()?;
    PhasePath::new(base, momenta)
}

pub const MOMENTUM_CONDITION_STEP: f64 = 1e-4;
pub const RELATIVE_ERROR_FLOOR: f64 = 1e-8;

/// Path from the identity to `g` followed by one more segment `ζ`.
fn trunk_with_tail(model: GroupModel, g: &GroupElement, tail: &AlgebraVector) -> Result<GroupPath> {
    GroupPath::new(
        model,
        model.identity(),
        vec![
            Segment { direction: model.log(g).scaled(2.0), duration: 0.5 },
            Segment { direction: tail.scaled(2.0), duration: 0.5 },
        ],
    )
}

/// Largest relative deviation between the central finite differences of
/// `z ↦ ⟨J(z), ξ⟩` along the `2n` coordinate directions at `z` and
/// `ω_z(ξ_M(z), ·)`. `z.g` is read in the universal cover.
pub fn verify_momentum_condition(
    model: &MagneticCotangent,
    z: &PhasePoint,
    xi: &AlgebraVector,
) -> Result<f64> {
    let n = model.dim();
    let cover = model.cover();
    if z.g.len() != n || z.mu.len() != n || xi.len() != n {
        return Err(input("momentum condition: dimension mismatch"));
    }
    let h = MOMENTUM_CONDITION_STEP;
    let gen = model.generator(xi, z);
    let mut fd = Vec::with_capacity(2 * n);
    let mut exact = Vec::with_capacity(2 * n);
    for k in 0..2 * n {
        let dir = PhaseTangent::basis(n, k);
        let value = |s: f64| -> Result<f64> {
            let path = trunk_with_tail(cover, &z.g, &dir.xi.scaled(s))?;
            let mu = z.mu.plus(&dir.nu.scaled(s));
            Ok(momentum_closed_form(model, &path, &mu)?.pair(xi))
        };
        fd.push((value(h)? - value(-h)?) / (2.0 * h));
        exact.push(model.omega_unchecked(&z.mu, &gen, &dir));
    }
    let scale = linalg::max_abs(&exact).max(RELATIVE_ERROR_FLOOR);
    Ok(linalg::max_abs(&linalg::sub(&fd, &exact)) / scale)
}
