//! The verification suite. Each check draws its own seeded samples and
//! reports the largest observed error against a fixed tolerance.

use momenta_core::closure::is_closed;
use momenta_core::cylinder::{
    affine_action, affine_cylinder_action, cylinder_momentum, heisenberg_casimir, noether_check,
    sigma_k, Cylinder, NOETHER_STEP,
};
use momenta_core::intmat::{hermite_normal_form, smith_normal_form, IntMatrix};
use momenta_core::lattice::{quotient_invariants, LatticeSubgroup};
use momenta_core::lie::{path_product, DualVector, GroupPath};
use momenta_core::linalg;
use momenta_core::momentum::{
    horizontal_transport, lifted_action_on_path, momentum_closed_form, momentum_of_path, sigma_j,
    theta_closed_form_heisenberg, theta_integral, verify_momentum_condition, PhasePath,
};
use momenta_core::scalar::{ExactScalar, Field};
use momenta_core::scenario::{Scenario, ScenarioKind};
use momenta_core::symplectic::{MagneticCotangent, PhasePoint};
use num_bigint::BigInt;
use num_traits::{One, Signed};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{Loaded, VerifySettings};
use crate::sampling::{self, SampleRng};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckReport {
    pub check_name: String,
    /// `None` when a sample could not be evaluated.
    pub max_error: Option<f64>,
    pub tolerance: f64,
    pub passed: bool,
    pub sample_count: usize,
    pub notes: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SkippedCheck {
    pub check_name: String,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteOutcome {
    pub checks: Vec<CheckReport>,
    pub skipped: Vec<SkippedCheck>,
}

impl SuiteOutcome {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&CheckReport> {
        self.checks.iter().find(|c| c.check_name == name)
    }
}

type Sampled = fn(&Ctx, &mut SampleRng) -> Result<f64, String>;
type Exact = fn(&Ctx) -> Result<(f64, String), String>;

#[derive(Clone, Copy)]
enum Tolerance {
    Fixed(f64),
    /// The `verify.tolerance` setting.
    Configured,
}

#[derive(Clone, Copy)]
enum Body {
    Sampled { base_samples: usize, run: Sampled },
    Exact(Exact),
}

struct Check {
    name: &'static str,
    tolerance: Tolerance,
    body: Body,
}

/// Everything a check may read.
pub struct Ctx<'a> {
    pub scenario: &'a Scenario,
    pub mu_list: &'a [DualVector],
    pub gamma_n: Option<&'a LatticeSubgroup>,
    cylinder: Cylinder,
}

impl<'a> Ctx<'a> {
    fn phase(&self) -> &MagneticCotangent {
        self.scenario.phase()
    }

    fn n(&self) -> usize {
        self.scenario.dim()
    }

    fn path(&self, rng: &mut SampleRng) -> GroupPath {
        sampling::path(rng, self.scenario.cover())
    }

    fn phase_path(&self, rng: &mut SampleRng) -> PhasePath {
        sampling::phase_path(rng, self.scenario.cover())
    }

    /// A configured momentum if any, else a random one.
    fn momentum(&self, rng: &mut SampleRng) -> DualVector {
        if self.mu_list.is_empty() {
            sampling::dual(rng, self.n(), 1.5)
        } else {
            self.mu_list[rng.gen_range(0..self.mu_list.len())].clone()
        }
    }
}

fn err<E: ToString>(e: E) -> String {
    e.to_string()
}

fn diff(a: &[f64], b: &[f64]) -> f64 {
    linalg::max_abs(&linalg::sub(a, b))
}

fn relative(a: &[f64], exact: &[f64]) -> f64 {
    diff(a, exact) / linalg::max_abs(exact).max(1e-8)
}

fn is_heisenberg_family(ctx: &Ctx) -> bool {
    matches!(ctx.scenario.kind(), ScenarioKind::CentralExtension)
}

// ---- Lie groups ----

fn associativity(ctx: &Ctx, rng: &mut SampleRng) -> Result<f64, String> {
    let m = ctx.scenario.group();
    let [g, h, k] = [0; 3].map(|_| sampling::element(rng, m, 2.0));
    let left = m.multiply(&m.multiply(&g, &h).map_err(err)?, &k).map_err(err)?;
    let right = m.multiply(&g, &m.multiply(&h, &k).map_err(err)?).map_err(err)?;
    Ok(m.distance(&left, &right))
}

fn adjoint_homomorphism(ctx: &Ctx, rng: &mut SampleRng) -> Result<f64, String> {
    let m = ctx.scenario.group();
    let g = sampling::element(rng, m, 2.0);
    let h = sampling::element(rng, m, 2.0);
    let gh = m.multiply(&g, &h).map_err(err)?;
    Ok(m.adjoint(&gh).max_abs_diff(&m.adjoint(&g).mul(&m.adjoint(&h))))
}

fn adjoint_finite_difference(ctx: &Ctx, rng: &mut SampleRng) -> Result<f64, String> {
    let m = ctx.scenario.cover();
    let g = sampling::element(rng, m, 2.0);
    let zeta = sampling::algebra(rng, m.dim(), 1.0);
    let step = 1e-5;
    let conj = |t: f64| -> Result<Vec<f64>, String> {
        let c = m.multiply(&m.multiply(&g, &m.exp(&zeta, t)).map_err(err)?, &m.inverse(&g)).map_err(err)?;
        Ok(m.log(&c).0)
    };
    let fd: Vec<f64> = linalg::sub(&conj(step)?, &conj(-step)?).iter().map(|x| x / (2.0 * step)).collect();
    Ok(relative(&fd, &m.adjoint(&g).apply(&zeta)))
}

fn jacobi(ctx: &Ctx) -> Result<(f64, String), String> {
    let ok = ctx.scenario.cover().structure_is_lie();
    Ok((if ok { 0.0 } else { 1.0 }, "structure constants in exact rational arithmetic".into()))
}

fn exponential_one_parameter(ctx: &Ctx, rng: &mut SampleRng) -> Result<f64, String> {
    let m = ctx.scenario.group();
    let xi = sampling::algebra(rng, m.dim(), 1.5);
    let (s, t) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let prod = m.multiply(&m.exp(&xi, s), &m.exp(&xi, t)).map_err(err)?;
    Ok(m.distance(&m.exp(&xi, s + t), &prod))
}

// ---- Symplectic form ----

fn antisymmetry_bilinearity(ctx: &Ctx, rng: &mut SampleRng) -> Result<f64, String> {
    let model = ctx.phase();
    let n = ctx.n();
    let z = sampling::phase_point(rng, model.cover());
    let [v1, v2, v3] = [0; 3].map(|_| sampling::tangent(rng, n));
    let (a, b) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
    let om = |x: &_, y: &_| model.omega(&z, x, y).map_err(err);
    let w12 = om(&v1, &v2)?;
    let anti = (w12 + om(&v2, &v1)?).abs();
    let combo = momenta_core::symplectic::PhaseTangent::new(
        v1.xi.scaled(a).plus(&v3.xi.scaled(b)),
        v1.nu.scaled(a).plus(&v3.nu.scaled(b)),
    );
    let w32 = om(&v3, &v2)?;
    let lin = (om(&combo, &v2)? - a * w12 - b * w32).abs();
    Ok(anti.max(lin) / w12.abs().max(w32.abs()).max(1.0))
}

/// Reported as `1 / |det|`, so the tolerance is the reciprocal of the bound.
fn nondegeneracy(ctx: &Ctx, rng: &mut SampleRng) -> Result<f64, String> {
    let z = sampling::phase_point(rng, ctx.phase().cover());
    let det = ctx.phase().omega_matrix(&z).determinant().abs();
    Ok(if det == 0.0 { f64::INFINITY } else { 1.0 / det })
}

fn closedness(ctx: &Ctx, rng: &mut SampleRng) -> Result<f64, String> {
    let n = ctx.n();
    let z = sampling::phase_point(rng, ctx.phase().cover());
    let [x, y, w] = [0; 3].map(|_| sampling::tangent(rng, n));
    Ok(ctx.phase().exterior_derivative(&z, [&x, &y, &w], 1e-4).abs())
}

fn left_invariance(ctx: &Ctx, rng: &mut SampleRng) -> Result<f64, String> {
    let model = ctx.phase();
    let cover = model.cover();
    let z = sampling::phase_point(rng, cover);
    let g0 = sampling::element(rng, cover, 2.0);
    let moved = PhasePoint::new(cover.multiply(&g0, &z.g).map_err(err)?, z.mu.clone());
    let v1 = sampling::tangent(rng, ctx.n());
    let v2 = sampling::tangent(rng, ctx.n());
    let a = model.omega(&z, &v1, &v2).map_err(err)?;
    let b = model.omega(&moved, &v1, &v2).map_err(err)?;
    Ok((a - b).abs())
}

fn theta_cocycle(ctx: &Ctx) -> Result<(f64, String), String> {
    let ok = ctx.phase().theta().cocycle_identity_holds(ctx.scenario.group());
    Ok((if ok { 0.0 } else { 1.0 }, "θ([ξ,η],ζ) + cyclic = 0 over ℚ(α)".into()))
}

// ---- Momentum map ----

fn homotopy_invariance(ctx: &Ctx, rng: &mut SampleRng) -> Result<f64, String> {
    let cover = ctx.scenario.cover();
    let x = ctx.phase_path(rng);
    let end = x.endpoint();
    let straight = GroupPath::straight(cover, &cover.log(&end.g));
    let y = PhasePath::linear(straight.subdivided(3), &end.mu).map_err(err)?;
    let a = momentum_of_path(ctx.phase(), &x).map_err(err)?;
    let b = momentum_of_path(ctx.phase(), &y).map_err(err)?;
    Ok(diff(&a, &b))
}

fn closed_form(ctx: &Ctx, rng: &mut SampleRng) -> Result<f64, String> {
    let x = ctx.phase_path(rng);
    let a = momentum_of_path(ctx.phase(), &x).map_err(err)?;
    let b = momentum_closed_form(ctx.phase(), x.base(), &x.endpoint().mu).map_err(err)?;
    Ok(diff(&a, &b))
}

fn dual_oracle(ctx: &Ctx, rng: &mut SampleRng) -> Result<f64, String> {
    let x = ctx.phase_path(rng);
    let a = momentum_of_path(ctx.phase(), &x).map_err(err)?;
    let b = horizontal_transport(ctx.phase(), &x).map_err(err)?;
    Ok(diff(&a, &b))
}

fn sigma_j_equals_theta(ctx: &Ctx, rng: &mut SampleRng) -> Result<f64, String> {
    let g = ctx.path(rng);
    let s = sigma_j(ctx.phase(), &g).map_err(err)?;
    let th = theta_integral(ctx.phase().theta(), &g).map_err(err)?;
    let mut e = diff(&s, &th);
    if let (true, Some(sigma)) = (is_heisenberg_family(ctx), ctx.scenario.sigma()) {
        let closed = theta_closed_form_heisenberg(g.model(), sigma, g.endpoint()).map_err(err)?;
        e = e.max(diff(&s, &closed));
    }
    Ok(e)
}

fn isotropic_zero(ctx: &Ctx, rng: &mut SampleRng) -> Result<f64, String> {
    let g = ctx.path(rng);
    Ok(sigma_j(ctx.phase(), &g).map_err(err)?.max_abs())
}

fn sigma_j_cocycle(ctx: &Ctx, rng: &mut SampleRng) -> Result<f64, String> {
    let model = ctx.phase();
    let g1 = ctx.path(rng);
    let g2 = ctx.path(rng);
    let prod = path_product(&g1, &g2).map_err(err)?;
    let lhs = sigma_j(model, &prod).map_err(err)?;
    let s2 = sigma_j(model, &g2).map_err(err)?;
    let rhs = sigma_j(model, &g1).map_err(err)?.plus(&g1.model().coadjoint_inverse(g1.endpoint(), &s2));
    Ok(diff(&lhs, &rhs))
}

fn additivity(ctx: &Ctx, rng: &mut SampleRng) -> Result<f64, String> {
    let k = sampling::loop_index(rng, ctx.scenario.fundamental_rank());
    let gamma = ctx.scenario.deck_phase_loop(&k).map_err(err)?;
    let x = ctx.phase_path(rng);
    let moved = gamma.concat(&x).map_err(err)?;
    let lhs = momentum_of_path(ctx.phase(), &moved).map_err(err)?;
    let rhs = momentum_of_path(ctx.phase(), &gamma)
        .map_err(err)?
        .plus(&momentum_of_path(ctx.phase(), &x).map_err(err)?);
    Ok(diff(&lhs, &rhs))
}

fn momentum_equivariance(ctx: &Ctx, rng: &mut SampleRng) -> Result<f64, String> {
    let model = ctx.phase();
    let g = ctx.path(rng);
    let x = ctx.phase_path(rng);
    let moved = lifted_action_on_path(&g, &x).map_err(err)?;
    let lhs = momentum_of_path(model, &moved).map_err(err)?;
    let jx = momentum_of_path(model, &x).map_err(err)?;
    let rhs = affine_action(model, &g, &jx).map_err(err)?;
    Ok(diff(&lhs, &rhs))
}

/// For loops `δμ = 0`, so `g̃·μ − μ = σ_J(g̃)`, which is the exact holonomy.
fn loop_delta_mu(ctx: &Ctx, rng: &mut SampleRng) -> Result<f64, String> {
    let k = sampling::loop_index(rng, ctx.scenario.fundamental_rank());
    let gamma = ctx.scenario.deck_loop(&k).map_err(err)?;
    let mu = ctx.momentum(rng);
    let moved = affine_action(ctx.phase(), &gamma, &mu).map_err(err)?;
    let exact: Vec<f64> =
        ctx.scenario.holonomy_element(&k).map_err(err)?.iter().map(ExactScalar::to_f64).collect();
    let s = sigma_j(ctx.phase(), &gamma).map_err(err)?;
    Ok(diff(&moved.minus(&mu), &s).max(diff(&s, &exact)))
}

fn momentum_condition(ctx: &Ctx, rng: &mut SampleRng) -> Result<f64, String> {
    let z = sampling::phase_point(rng, ctx.scenario.cover());
    let xi = sampling::algebra(rng, ctx.n(), 1.0);
    verify_momentum_condition(ctx.phase(), &z, &xi).map_err(err)
}

fn holonomy_numeric(ctx: &Ctx) -> Result<(f64, String), String> {
    let numeric = ctx.scenario.holonomy_generators_numeric().map_err(err)?;
    let worst = numeric
        .iter()
        .zip(ctx.scenario.holonomy_generators())
        .map(|(a, b)| diff(a, &b.iter().map(ExactScalar::to_f64).collect::<Vec<_>>()))
        .fold(0.0, f64::max);
    Ok((worst, format!("{} deck loops integrated", numeric.len())))
}

// ---- Cylinder ----

fn projection_homomorphism(ctx: &Ctx, rng: &mut SampleRng) -> Result<f64, String> {
    let c = &ctx.cylinder;
    let a = sampling::uniform(rng, ctx.n(), 5.0);
    let b = sampling::uniform(rng, ctx.n(), 5.0);
    let (pa, pb) = (c.project(&a), c.project(&b));
    let hom = c.distance(&c.project(&linalg::add(&a, &b)), &c.add(&pa, &pb));
    let idem = diff(&c.project(&pa.representative).representative, &pa.representative);
    Ok(hom.max(idem))
}

fn path_independence(ctx: &Ctx, rng: &mut SampleRng) -> Result<f64, String> {
    let model = ctx.phase();
    let x = ctx.phase_path(rng);
    let k = sampling::loop_index(rng, ctx.scenario.fundamental_rank());
    let end = x.endpoint();
    // Same point of M reached through a loop and a straight segment.
    let cover = ctx.scenario.cover();
    let straight = PhasePath::linear(GroupPath::straight(cover, &cover.log(&end.g)), &end.mu).map_err(err)?;
    let y = ctx.scenario.deck_phase_loop(&k).map_err(err)?.concat(&straight).map_err(err)?;
    let a = cylinder_momentum(model, &ctx.cylinder, &x).map_err(err)?;
    let b = cylinder_momentum(model, &ctx.cylinder, &y).map_err(err)?;
    Ok(ctx.cylinder.distance(&a, &b))
}

fn cylinder_equivariance(ctx: &Ctx, rng: &mut SampleRng) -> Result<f64, String> {
    let model = ctx.phase();
    let c = &ctx.cylinder;
    let g = ctx.path(rng);
    let x = ctx.phase_path(rng);
    let moved = lifted_action_on_path(&g, &x).map_err(err)?;
    let lhs = cylinder_momentum(model, c, &moved).map_err(err)?;
    let kz = cylinder_momentum(model, c, &x).map_err(err)?;
    let rhs = affine_cylinder_action(model, c, &g, &kz).map_err(err)?;
    Ok(c.distance(&lhs, &rhs))
}

fn sigma_k_lift_independence(ctx: &Ctx, rng: &mut SampleRng) -> Result<f64, String> {
    let g = ctx.path(rng);
    let k = sampling::loop_index(rng, ctx.scenario.fundamental_rank());
    let other = ctx.scenario.deck_loop(&k).map_err(err)?.concat(&g).map_err(err)?;
    let a = sigma_k(ctx.phase(), &ctx.cylinder, &g).map_err(err)?;
    let b = sigma_k(ctx.phase(), &ctx.cylinder, &other).map_err(err)?;
    Ok(ctx.cylinder.distance(&a, &b))
}

fn sigma_k_cocycle(ctx: &Ctx, rng: &mut SampleRng) -> Result<f64, String> {
    let (model, c) = (ctx.phase(), &ctx.cylinder);
    let g = ctx.path(rng);
    let h = ctx.path(rng);
    let gh = path_product(&g, &h).map_err(err)?;
    let lhs = sigma_k(model, c, &gh).map_err(err)?;
    let sh = sigma_k(model, c, &h).map_err(err)?;
    let moved = c.project(&g.model().coadjoint_inverse(g.endpoint(), &sh.representative));
    let rhs = c.add(&sigma_k(model, c, &g).map_err(err)?, &moved);
    Ok(c.distance(&lhs, &rhs))
}

/// `d/dt Φ(exp tξ, [μ])` at `0` against `−T π_C(Ψ(z)(ξ, ·))` with `μ = J(z)`.
fn infinitesimal_generator(ctx: &Ctx, rng: &mut SampleRng) -> Result<f64, String> {
    let (model, c) = (ctx.phase(), &ctx.cylinder);
    let cover = ctx.scenario.cover();
    let x = ctx.phase_path(rng);
    let mu = momentum_of_path(model, &x).map_err(err)?;
    let xi = sampling::algebra(rng, ctx.n(), 1.0);
    let h = 1e-4;
    let at = |t: f64| affine_action(model, &GroupPath::straight(cover, &xi.scaled(t)), &mu).map_err(err);
    let fd: Vec<f64> = linalg::sub(&at(h)?, &at(-h)?).iter().map(|v| v / (2.0 * h)).collect();
    let psi = model.chu_map(&x.endpoint()).transpose().apply(&xi);
    let expected: Vec<f64> = c.tangent_projection(&psi).iter().map(|v| -v).collect();
    Ok(relative(&c.tangent_projection(&fd), &expected))
}

fn casimir(ctx: &Ctx, rng: &mut SampleRng) -> Result<f64, String> {
    let sigma = ctx.scenario.sigma().ok_or("no σ for this scenario")?;
    let mu = ctx.momentum(rng);
    let g = ctx.path(rng);
    let moved = affine_action(ctx.phase(), &g, &mu).map_err(err)?;
    let f = |p: &DualVector| heisenberg_casimir(sigma, p[0], [p[1], p[2]]);
    Ok((f(&moved) - f(&mu)).abs())
}

fn orbit_membership(ctx: &Ctx, rng: &mut SampleRng) -> Result<f64, String> {
    let mu = ctx.momentum(rng);
    let descriptor = ctx.scenario.orbit_descriptor(&mu).map_err(err)?;
    let g = ctx.path(rng);
    let moved = affine_action(ctx.phase(), &g, &mu).map_err(err)?;
    Ok(descriptor.membership_error(&moved))
}

fn noether(ctx: &Ctx, rng: &mut SampleRng) -> Result<f64, String> {
    let start = ctx.phase_path(rng);
    noether_check(ctx.phase(), &ctx.cylinder, &start, 1.0, NOETHER_STEP).map_err(err)
}

// ---- Reduction ----

fn reduction_momenta(ctx: &Ctx) -> Vec<DualVector> {
    if ctx.mu_list.is_empty() {
        vec![DualVector::zeros(ctx.n())]
    } else {
        ctx.mu_list.to_vec()
    }
}

fn deck_group_trivial(ctx: &Ctx) -> Result<(f64, String), String> {
    let rank = ctx.scenario.fundamental_rank();
    let mut candidates = vec![LatticeSubgroup::zero(rank), ctx.scenario.gamma0()];
    candidates.extend(ctx.gamma_n.cloned());
    let mut nontrivial = 0usize;
    let mut seen = Vec::new();
    for mu in reduction_momenta(ctx) {
        for gn in &candidates {
            let deck = ctx.scenario.deck_group(&mu, gn).map_err(err)?;
            if !deck.symplectomorphism {
                nontrivial += 1;
            }
            seen.push(deck.invariants.to_string());
        }
    }
    Ok((nontrivial as f64, format!("deck groups: {}", seen.join(", "))))
}

fn reduction_fiber(ctx: &Ctx, rng: &mut SampleRng) -> Result<f64, String> {
    let mu = ctx.momentum(rng);
    let rank = ctx.scenario.fundamental_rank();
    let sample = (ctx.path(rng), sampling::loop_index(rng, rank), sampling::loop_index(rng, rank));
    let check = ctx.scenario.reduction_fiber_check(&mu, &[sample]).map_err(err)?;
    if !check.exact_membership {
        return Ok(f64::INFINITY);
    }
    Ok(check.max_error)
}

// ---- Exact lattice algebra ----

fn box_vectors(d: usize, radius: i64) -> impl Iterator<Item = Vec<i64>> {
    let side = (2 * radius + 1) as usize;
    (0..side.pow(d as u32)).map(move |mut code| {
        (0..d)
            .map(|_| {
                let digit = (code % side) as i64 - radius;
                code /= side;
                digit
            })
            .collect()
    })
}

fn kernel_small_box(ctx: &Ctx) -> Result<(f64, String), String> {
    let d = ctx.scenario.fundamental_rank();
    if d > 4 {
        return Ok((0.0, format!("box enumeration skipped for rank {d}")));
    }
    let gamma0 = ctx.scenario.gamma0();
    let mut failures = 0usize;
    for col in gamma0.basis_columns_i64() {
        if ctx.scenario.holonomy_element(&col).map_err(err)?.iter().any(|s| !Field::is_zero(s)) {
            failures += 1;
        }
    }
    let mut in_kernel = 0usize;
    for k in box_vectors(d, 5) {
        let h = ctx.scenario.holonomy_element(&k).map_err(err)?;
        if h.iter().all(Field::is_zero) {
            in_kernel += 1;
            let big: Vec<BigInt> = k.iter().map(|&x| BigInt::from(x)).collect();
            if !gamma0.contains(&big) {
                failures += 1;
            }
        }
    }
    Ok((failures as f64, format!("{in_kernel} kernel vectors in [-5,5]^{d}")))
}

fn random_int_matrix(rng: &mut SampleRng) -> IntMatrix {
    let rows = rng.gen_range(1..=4);
    let cols = rng.gen_range(1..=4);
    let data: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-9..=9)).collect()).collect();
    IntMatrix::from_rows(&data)
}

fn is_unimodular(m: &IntMatrix) -> bool {
    m.determinant().abs().is_one()
}

fn normal_forms(_ctx: &Ctx, rng: &mut SampleRng) -> Result<f64, String> {
    let a = random_int_matrix(rng);
    let h = hermite_normal_form(&a);
    let s = smith_normal_form(&a);
    let ok = a.mul(&h.transform) == h.hnf
        && is_unimodular(&h.transform)
        && s.left.mul(&a).mul(&s.right) == s.diagonal
        && is_unimodular(&s.left)
        && is_unimodular(&s.right);
    Ok(if ok { 0.0 } else { 1.0 })
}

fn quotient_order(_ctx: &Ctx, rng: &mut SampleRng) -> Result<f64, String> {
    let d = rng.gen_range(1..=3);
    let cols: Vec<Vec<i64>> = (0..d).map(|_| (0..d).map(|_| rng.gen_range(-6..=6)).collect()).collect();
    let small = LatticeSubgroup::from_columns(d, &cols);
    if small.rank() < d {
        return Ok(0.0);
    }
    let det = IntMatrix::from_rows(&cols).determinant().abs();
    let q = quotient_invariants(&LatticeSubgroup::full(d), &small).map_err(err)?;
    Ok(if q.order() == Some(det) { 0.0 } else { 1.0 })
}

fn closure_consistency(ctx: &Ctx) -> Result<(f64, String), String> {
    let h = ctx.scenario.holonomy();
    let decomp = is_closed(&h);
    let mut failures = 0usize;
    if decomp.closed != (h.rational_rank() == h.real_rank()) {
        failures += 1;
    }
    failures += h.generators().iter().filter(|g| !decomp.contains(g)).count();
    Ok((
        failures as f64,
        format!("ℚ-rank {}, ℝ-rank {}", h.rational_rank(), h.real_rank()),
    ))
}

// ---- Registry ----

fn sampled(name: &'static str, tolerance: Tolerance, base_samples: usize, run: Sampled) -> Check {
    Check { name, tolerance, body: Body::Sampled { base_samples, run } }
}

fn exact(name: &'static str, run: Exact) -> Check {
    Check { name, tolerance: Tolerance::Fixed(0.0), body: Body::Exact(run) }
}

pub const MOMENTUM_CONDITION: &str = "momentum.condition";

fn applicable_checks(ctx: &Ctx) -> (Vec<Check>, Vec<SkippedCheck>) {
    use Tolerance::{Configured, Fixed};
    let mut checks = vec![
        sampled("lie.associativity", Fixed(1e-12), 1000, associativity),
        sampled("lie.adjointHomomorphism", Fixed(1e-10), 100, adjoint_homomorphism),
        sampled("lie.adjointFiniteDifference", Fixed(1e-6), 100, adjoint_finite_difference),
        exact("lie.jacobi", jacobi),
        sampled("lie.exponentialOneParameter", Fixed(1e-12), 100, exponential_one_parameter),
        sampled("symplectic.antisymmetryBilinearity", Fixed(1e-12), 100, antisymmetry_bilinearity),
        sampled("symplectic.nondegeneracy", Fixed(1e8), 100, nondegeneracy),
        sampled("symplectic.closedness", Fixed(1e-5), 20, closedness),
        sampled("symplectic.leftInvariance", Fixed(1e-10), 100, left_invariance),
        exact("symplectic.thetaCocycle", theta_cocycle),
        sampled("momentum.homotopyInvariance", Fixed(1e-9), 50, homotopy_invariance),
        sampled("momentum.closedForm", Fixed(1e-9), 50, closed_form),
        sampled("momentum.dualOracle", Fixed(1e-7), 50, dual_oracle),
        sampled("momentum.sigmaJEqualsTheta", Fixed(1e-9), 50, sigma_j_equals_theta),
        sampled("momentum.sigmaJCocycle", Fixed(1e-9), 50, sigma_j_cocycle),
        sampled("momentum.additivity", Fixed(1e-9), 50, additivity),
        sampled("momentum.equivariance", Fixed(1e-9), 50, momentum_equivariance),
        sampled("momentum.loopDeltaMu", Fixed(1e-9), 20, loop_delta_mu),
        sampled(MOMENTUM_CONDITION, Fixed(1e-5), 50, momentum_condition),
        Check { name: "holonomy.numericVsExact", tolerance: Fixed(1e-9), body: Body::Exact(holonomy_numeric) },
        sampled("cylinder.projectionHomomorphism", Fixed(1e-10), 1000, projection_homomorphism),
        sampled("cylinder.pathIndependence", Configured, 50, path_independence),
        sampled("cylinder.equivariance", Configured, 100, cylinder_equivariance),
        sampled("cylinder.sigmaKLiftIndependence", Configured, 50, sigma_k_lift_independence),
        sampled("cylinder.sigmaKCocycle", Configured, 50, sigma_k_cocycle),
        sampled("cylinder.infinitesimalGenerator", Fixed(1e-5), 50, infinitesimal_generator),
        sampled("cylinder.orbitMembership", Configured, 200, orbit_membership),
        sampled("cylinder.noether", Fixed(1e-6), 5, noether),
        exact("exact.kernelSmallBox", kernel_small_box),
        sampled("exact.normalForms", Fixed(0.0), 50, normal_forms),
        sampled("exact.quotientOrder", Fixed(0.0), 50, quotient_order),
        exact("exact.closureConsistency", closure_consistency),
    ];
    let mut skipped = Vec::new();
    let mut skip = |name: &str, reason: &str| {
        skipped.push(SkippedCheck { check_name: name.into(), reason: reason.into() });
    };
    if ctx.phase().theta().is_zero() {
        checks.push(sampled("momentum.isotropicZero", Fixed(1e-9), 50, isotropic_zero));
    } else {
        skip("momentum.isotropicZero", "θ is not zero");
    }
    if is_heisenberg_family(ctx) && ctx.scenario.sigma() != Some([0.0, 0.0]) {
        checks.push(sampled("cylinder.casimir", Configured, 100, casimir));
    } else {
        skip("cylinder.casimir", "no Casimir for this scenario");
    }
    if ctx.cylinder.holonomy_closed() {
        checks.push(exact("reduction.deckGroup", deck_group_trivial));
        checks.push(sampled("reduction.fiber", Configured, 20, reduction_fiber));
    } else {
        let reason = "holonomy is not closed";
        skip("reduction.deckGroup", reason);
        skip("reduction.fiber", reason);
    }
    (checks, skipped)
}

fn scaled_samples(base: usize, settings: &VerifySettings) -> usize {
    (base * settings.sample_count).div_ceil(100).max(1)
}

fn run_check(check: &Check, ctx: &Ctx, settings: &VerifySettings) -> CheckReport {
    let tolerance = match check.tolerance {
        Tolerance::Fixed(t) => t,
        Tolerance::Configured => settings.tolerance,
    };
    let (outcome, samples): (Result<(f64, String), String>, usize) = match check.body {
        Body::Exact(run) => (run(ctx), 1),
        Body::Sampled { base_samples, run } => {
            let count = scaled_samples(base_samples, settings);
            let results: Vec<Result<f64, String>> = (0..count)
                .into_par_iter()
                .map(|i| {
                    let mut rng = sampling::rng_for(settings.seed, check.name, i);
                    run(ctx, &mut rng)
                })
                .collect();
            let mut worst: f64 = 0.0;
            let mut failure = None;
            for (i, r) in results.into_iter().enumerate() {
                match r {
                    Ok(e) if e.is_nan() => {
                        failure.get_or_insert(format!("sample {i}: result is not a number"));
                    }
                    Ok(e) => worst = worst.max(e),
                    Err(msg) => {
                        failure.get_or_insert(format!("sample {i}: {msg}"));
                    }
                }
            }
            (failure.map_or(Ok((worst, String::new())), Err), count)
        }
    };
    let (max_error, notes) = match outcome {
        Ok((e, notes)) => (Some(e), notes),
        Err(msg) => (None, msg),
    };
    let passed = max_error.is_some_and(|e| e <= tolerance);
    log::debug!("{}: {:?} (tolerance {tolerance})", check.name, max_error);
    CheckReport {
        check_name: check.name.into(),
        max_error: max_error.filter(|e| e.is_finite()),
        tolerance,
        passed,
        sample_count: samples,
        notes,
    }
}

/// Run every applicable check, in parallel, for `scenario`.
pub fn run_suite(loaded: &Loaded, scenario: &Scenario, settings: &VerifySettings) -> SuiteOutcome {
    let ctx = Ctx {
        scenario,
        mu_list: &loaded.mu_list,
        gamma_n: loaded.gamma_n.as_ref(),
        cylinder: scenario.cylinder(),
    };
    let (checks, skipped) = applicable_checks(&ctx);
    let checks = checks.par_iter().map(|c| run_check(c, &ctx, settings)).collect();
    SuiteOutcome { checks, skipped }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_enumeration_covers_the_cube() {
        let all: Vec<Vec<i64>> = box_vectors(2, 1).collect();
        assert_eq!(all.len(), 9);
        assert!(all.contains(&vec![-1, 1]));
        assert!(all.contains(&vec![0, 0]));
    }

    #[test]
    fn sample_scaling_rounds_up() {
        let mut s = VerifySettings::default();
        assert_eq!(scaled_samples(50, &s), 50);
        s.sample_count = 10;
        assert_eq!(scaled_samples(50, &s), 5);
        s.sample_count = 1;
        assert_eq!(scaled_samples(5, &s), 1);
    }

    #[test]
    fn unimodularity() {
        assert!(is_unimodular(&IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]])));
        assert!(!is_unimodular(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 1]])));
    }
}
