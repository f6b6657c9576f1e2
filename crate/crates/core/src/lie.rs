//! Concrete Lie groups and piecewise-exponential paths.
//!
//! Four groups are supported: the torus `T^d`, its universal cover `ℝ^d`, the
//! Heisenberg group `H = ℝ × ℝ²` with product
//! `(a, u)(b, v) = (a + b + ½ω(u, v), u + v)`, and the central extension
//! `G = S¹ × ℝ²` of `ℝ²` carrying the same rule modulo 1. Here
//! `ω(u, v) = u₁v₂ − u₂v₁`, and the Lie algebra basis of the Heisenberg family
//! is `(e_central, e₁, e₂)` with `[e₁, e₂] = e_central`.
//!
//! Paths always live in a simply connected model (`ℝ^d` or `H`), where a
//! homotopy class with fixed endpoints is determined by its endpoint.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Deref, DerefMut};

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{input, Error, Result};
use crate::linalg::{self, Mat};
use crate::scalar::rational;

macro_rules! coords_newtype {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Debug, PartialEq)]
        pub struct $name(pub Vec<f64>);

        impl $name {
            pub fn zeros(n: usize) -> Self {
                Self(vec![0.0; n])
            }

            pub fn unit(n: usize, i: usize) -> Self {
                let mut v = vec![0.0; n];
                v[i] = 1.0;
                Self(v)
            }

            pub fn scaled(&self, k: f64) -> Self {
                Self(self.0.iter().map(|x| x * k).collect())
            }

            pub fn plus(&self, other: &Self) -> Self {
                Self(linalg::add(&self.0, &other.0))
            }

            pub fn minus(&self, other: &Self) -> Self {
                Self(linalg::sub(&self.0, &other.0))
            }

            pub fn max_abs(&self) -> f64 {
                linalg::max_abs(&self.0)
            }
        }

        impl Deref for $name {
            type Target = [f64];
            fn deref(&self) -> &[f64] {
                &self.0
            }
        }

        impl DerefMut for $name {
            fn deref_mut(&mut self) -> &mut [f64] {
                &mut self.0
            }
        }

        impl From<Vec<f64>> for $name {
            fn from(v: Vec<f64>) -> Self {
                Self(v)
            }
        }
    };
}

coords_newtype!(
    /// Coordinates of a Lie algebra element in the fixed basis.
    AlgebraVector
);
coords_newtype!(
    /// Coordinates of an element of the dual of the Lie algebra.
    DualVector
);
coords_newtype!(
    /// Chart coordinates of a group element.
    GroupElement
);

impl DualVector {
    /// The pairing `⟨μ, ξ⟩`.
    pub fn pair(&self, xi: &AlgebraVector) -> f64 {
        linalg::dot(&self.0, &xi.0)
    }
}

/// `ω(u, v) = u₁v₂ − u₂v₁` on `ℝ²`.
pub fn omega2(u: [f64; 2], v: [f64; 2]) -> f64 {
    u[0] * v[1] - u[1] * v[0]
}

/// The covector `ι_uω = ω(u, ·) = (−u₂, u₁)`.
pub fn iota_omega(u: [f64; 2]) -> [f64; 2] {
    [-u[1], u[0]]
}

fn wrap_unit(x: f64) -> f64 {
    let r = x - libm::floor(x);
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Representative of `x mod 1` in `[-½, ½)`.
fn wrap_centered(x: f64) -> f64 {
    let r = wrap_unit(x + 0.5) - 0.5;
    if r < -0.5 {
        r + 1.0
    } else {
        r
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupKind {
    Torus { dim: usize },
    UniversalTorus { dim: usize },
    Heisenberg,
    CentralExtension,
}

/// A concrete Lie group with its chart, product and adjoint representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupModel {
    kind: GroupKind,
}

impl GroupModel {
    pub fn torus(dim: usize) -> Self {
        Self { kind: GroupKind::Torus { dim } }
    }

    pub fn universal_torus(dim: usize) -> Self {
        Self { kind: GroupKind::UniversalTorus { dim } }
    }

    pub fn heisenberg() -> Self {
        Self { kind: GroupKind::Heisenberg }
    }

    pub fn central_extension() -> Self {
        Self { kind: GroupKind::CentralExtension }
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        match self.kind {
            GroupKind::Torus { dim } | GroupKind::UniversalTorus { dim } => dim,
            GroupKind::Heisenberg | GroupKind::CentralExtension => 3,
        }
    }

    pub fn is_abelian(&self) -> bool {
        matches!(self.kind, GroupKind::Torus { .. } | GroupKind::UniversalTorus { .. })
    }

    pub fn is_simply_connected(&self) -> bool {
        matches!(self.kind, GroupKind::UniversalTorus { .. } | GroupKind::Heisenberg)
    }

    /// The universal cover, in which paths are evaluated.
    pub fn cover(&self) -> GroupModel {
        match self.kind {
            GroupKind::Torus { dim } => GroupModel::universal_torus(dim),
            GroupKind::CentralExtension => GroupModel::heisenberg(),
            _ => *self,
        }
    }

    /// Which chart coordinates are periodic with period 1.
    fn periodic(&self, i: usize) -> bool {
        match self.kind {
            GroupKind::Torus { .. } => true,
            GroupKind::CentralExtension => i == 0,
            _ => false,
        }
    }

    /// Structure constants `c[i][j][k]`: coefficient of `e_k` in `[e_i, e_j]`.
    pub fn structure_constants(&self) -> Vec<Vec<Vec<BigRational>>> {
        let n = self.dim();
        let mut c = vec![vec![vec![BigRational::zero(); n]; n]; n];
        if !self.is_abelian() {
            c[1][2][0] = rational(1, 1);
            c[2][1][0] = rational(-1, 1);
        }
        c
    }

    /// Antisymmetry and the Jacobi identity, checked in exact arithmetic.
    pub fn structure_is_lie(&self) -> bool {
        let c = self.structure_constants();
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if c[i][j][k] != -c[j][i][k].clone() {
                        return false;
                    }
                }
            }
        }
        // Σ_l c_ij^l c_lk^m + c_jk^l c_li^m + c_ki^l c_lj^m = 0
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for m in 0..n {
                        let s = (0..n).fold(BigRational::zero(), |acc, l| {
                            acc + &c[i][j][l] * &c[l][k][m]
                                + &c[j][k][l] * &c[l][i][m]
                                + &c[k][i][l] * &c[l][j][m]
                        });
                        if !s.is_zero() {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::zeros(self.dim())
    }

    fn check(&self, v: &[f64], what: &str) -> Result<()> {
        if v.len() != self.dim() {
            return Err(input(alloc::format!(
                "{what} has length {} but the group has dimension {}",
                v.len(),
                self.dim()
            )));
        }
        Ok(())
    }

    /// Bring periodic coordinates into `[0, 1)`. Idempotent.
    pub fn normalize(&self, g: &GroupElement) -> GroupElement {
        GroupElement(
            g.iter()
                .enumerate()
                .map(|(i, &x)| if self.periodic(i) { wrap_unit(x) } else { x })
                .collect(),
        )
    }

    /// Chart distance with periodic coordinates compared on the circle.
    pub fn distance(&self, g: &GroupElement, h: &GroupElement) -> f64 {
        let s: f64 = g
            .iter()
            .zip(h.iter())
            .enumerate()
            .map(|(i, (a, b))| {
                let d = if self.periodic(i) { wrap_centered(a - b) } else { a - b };
                d * d
            })
            .sum();
        libm::sqrt(s)
    }

    pub fn multiply(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        self.check(g, "left factor")?;
        self.check(h, "right factor")?;
        Ok(self.compose(g, h))
    }

    pub(crate) fn compose(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        let raw = match self.kind {
            GroupKind::Torus { .. } | GroupKind::UniversalTorus { .. } => linalg::add(g, h),
            GroupKind::Heisenberg | GroupKind::CentralExtension => vec![
                g[0] + h[0] + 0.5 * omega2([g[1], g[2]], [h[1], h[2]]),
                g[1] + h[1],
                g[2] + h[2],
            ],
        };
        self.normalize(&GroupElement(raw))
    }

    pub fn inverse(&self, g: &GroupElement) -> GroupElement {
        // (a, u)^{-1} = (−a, −u) since ω(u, u) = 0.
        self.normalize(&GroupElement(g.iter().map(|x| -x).collect()))
    }

    /// `exp(t ξ)`; for this family the exponential is linear in the chart.
    pub fn exp(&self, xi: &AlgebraVector, t: f64) -> GroupElement {
        self.normalize(&GroupElement(xi.iter().map(|x| t * x).collect()))
    }

    /// Inverse of `exp` near the identity (global on the simply connected models).
    pub fn log(&self, g: &GroupElement) -> AlgebraVector {
        AlgebraVector(
            g.iter()
                .enumerate()
                .map(|(i, &x)| if self.periodic(i) { wrap_centered(x) } else { x })
                .collect(),
        )
    }

    pub fn bracket(&self, xi: &AlgebraVector, eta: &AlgebraVector) -> AlgebraVector {
        if self.is_abelian() {
            return AlgebraVector::zeros(self.dim());
        }
        AlgebraVector(vec![omega2([xi[1], xi[2]], [eta[1], eta[2]]), 0.0, 0.0])
    }

    /// Matrix of `Ad_g` on algebra coordinates.
    pub fn adjoint(&self, g: &GroupElement) -> Mat {
        let mut m = Mat::identity(self.dim());
        if !self.is_abelian() {
            // Ad_(a,u)(β, ξ) = (β + ω(u, ξ), ξ)
            m[(0, 1)] = -g[2];
            m[(0, 2)] = g[1];
        }
        m
    }

    /// `Ad_{g^{-1}} ξ`.
    pub fn adjoint_inverse_apply(&self, g: &GroupElement, xi: &AlgebraVector) -> AlgebraVector {
        AlgebraVector(self.adjoint(&self.inverse(g)).apply(xi))
    }

    /// `Ad*_{g^{-1}} μ`, defined by `⟨Ad*_{g^{-1}}μ, ξ⟩ = ⟨μ, Ad_{g^{-1}}ξ⟩`.
    pub fn coadjoint_inverse(&self, g: &GroupElement, mu: &DualVector) -> DualVector {
        DualVector(self.adjoint(&self.inverse(g)).transpose().apply(mu))
    }

    /// `Ad*_g μ`, the inverse of [`coadjoint_inverse`](Self::coadjoint_inverse).
    pub fn coadjoint(&self, g: &GroupElement, mu: &DualVector) -> DualVector {
        DualVector(self.adjoint(g).transpose().apply(mu))
    }

    /// Chart velocity `d/ds (g · exp(sξ))` at `s = 0`.
    pub fn chart_velocity(&self, g: &GroupElement, xi: &AlgebraVector) -> Vec<f64> {
        match self.kind {
            GroupKind::Torus { .. } | GroupKind::UniversalTorus { .. } => xi.0.clone(),
            GroupKind::Heisenberg | GroupKind::CentralExtension => vec![
                xi[0] + 0.5 * omega2([g[1], g[2]], [xi[1], xi[2]]),
                xi[1],
                xi[2],
            ],
        }
    }

    /// Image of a cover element in this group (chart normalization).
    pub fn project(&self, g: &GroupElement) -> GroupElement {
        self.normalize(g)
    }
}

/// One exponential piece of a path: constant left-trivialized velocity.
#[derive(Clone, Debug, PartialEq)]
pub struct Segment {
    pub direction: AlgebraVector,
    pub duration: f64,
}

/// Piecewise-exponential path `t ↦ g(t_k)·exp((t − t_k) ξ_k)` on `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupPath {
    model: GroupModel,
    base: GroupElement,
    segments: Vec<Segment>,
    starts: Vec<f64>,
    knots: Vec<GroupElement>,
}

/// Durations must sum to one within this tolerance.
pub const DURATION_TOLERANCE: f64 = 1e-12;
/// Endpoint tolerance when resampling products of paths.
pub const RESAMPLE_TOLERANCE: f64 = 1e-10;
pub const MIN_RESAMPLE_INTERVALS: usize = 32;
pub const MAX_RESAMPLE_DOUBLINGS: u32 = 4;

impl GroupPath {
    pub fn new(model: GroupModel, base: GroupElement, segments: Vec<Segment>) -> Result<Self> {
        if !model.is_simply_connected() {
            return Err(input("paths are represented in a simply connected model"));
        }
        model.check(&base, "base point")?;
        if segments.is_empty() {
            return Err(input("a path needs at least one segment"));
        }
        for s in &segments {
            model.check(&s.direction, "segment direction")?;
            if !(s.duration > 0.0) {
                return Err(input("segment durations must be positive"));
            }
        }
        let total: f64 = segments.iter().map(|s| s.duration).sum();
        if (total - 1.0).abs() > DURATION_TOLERANCE {
            return Err(input(alloc::format!("segment durations sum to {total}, not 1")));
        }
        let mut starts = Vec::with_capacity(segments.len() + 1);
        let mut knots = Vec::with_capacity(segments.len() + 1);
        let mut t = 0.0;
        let mut g = base.clone();
        starts.push(t);
        knots.push(g.clone());
        for s in &segments {
            t += s.duration;
            g = model.compose(&g, &model.exp(&s.direction, s.duration));
            starts.push(t);
            knots.push(g.clone());
        }
        *starts.last_mut().unwrap() = 1.0;
        Ok(Self { model, base, segments, starts, knots })
    }

    /// The constant path at the identity.
    pub fn trivial(model: GroupModel) -> Self {
        Self::straight(model, &AlgebraVector::zeros(model.dim()))
    }

    /// `t ↦ exp(t ξ)` for `t ∈ [0, 1]`.
    pub fn straight(model: GroupModel, xi: &AlgebraVector) -> Self {
        Self::new(
            model,
            model.identity(),
            vec![Segment { direction: xi.clone(), duration: 1.0 }],
        )
        .expect("single unit segment is valid")
    }

    /// Path from the identity through the given directions, equal durations.
    pub fn through(model: GroupModel, directions: &[AlgebraVector]) -> Result<Self> {
        let d = 1.0 / directions.len() as f64;
        let segments = directions
            .iter()
            .map(|xi| Segment { direction: xi.scaled(1.0), duration: d })
            .collect();
        Self::new(model, model.identity(), segments)
    }

    pub fn model(&self) -> GroupModel {
        self.model
    }

    pub fn base(&self) -> &GroupElement {
        &self.base
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Breakpoints `0 = t_0 < … < t_m = 1`.
    pub fn breakpoints(&self) -> &[f64] {
        &self.starts
    }

    /// `g(t_k)` at every breakpoint.
    pub fn knots(&self) -> &[GroupElement] {
        &self.knots
    }

    pub fn endpoint(&self) -> &GroupElement {
        self.knots.last().unwrap()
    }

    pub fn is_based_at_identity(&self) -> bool {
        self.base.iter().all(|x| *x == 0.0)
    }

    /// Index of the segment containing `t` (the later one at breakpoints).
    pub fn segment_index(&self, t: f64) -> Result<usize> {
        if !(-DURATION_TOLERANCE..=1.0 + DURATION_TOLERANCE).contains(&t) {
            return Err(input(alloc::format!("path parameter {t} outside [0, 1]")));
        }
        let k = self.starts[1..].partition_point(|&s| s <= t);
        Ok(k.min(self.segments.len() - 1))
    }

    pub fn evaluate(&self, t: f64) -> Result<GroupElement> {
        let k = self.segment_index(t)?;
        Ok(self.evaluate_in(k, t))
    }

    /// `g(t)` using segment `k`, for `t` in (or at the ends of) that segment.
    pub fn evaluate_in(&self, k: usize, t: f64) -> GroupElement {
        let s = &self.segments[k];
        self.model.compose(&self.knots[k], &self.model.exp(&s.direction, t - self.starts[k]))
    }

    /// `g(t)^{-1} ġ(t)`.
    pub fn left_velocity(&self, t: f64) -> Result<AlgebraVector> {
        let k = self.segment_index(t)?;
        Ok(self.segments[k].direction.clone())
    }

    /// Whether the projection to `base` closes up.
    pub fn is_loop_in(&self, base: &GroupModel) -> bool {
        base.distance(&base.project(self.endpoint()), &base.project(&self.base)) <= 1e-10
    }

    /// Follow `self` on `[0, ½]`, then `other` left-translated by the endpoint
    /// of `self` on `[½, 1]`.
    pub fn concat(&self, other: &GroupPath) -> Result<GroupPath> {
        if self.model != other.model {
            return Err(input("cannot concatenate paths in different groups"));
        }
        let segments = self
            .segments
            .iter()
            .chain(&other.segments)
            .map(|s| Segment { direction: s.direction.scaled(2.0), duration: 0.5 * s.duration })
            .collect();
        GroupPath::new(self.model, self.base.clone(), segments)
    }

    /// Same class, with every segment split into `parts` equal pieces.
    pub fn subdivided(&self, parts: usize) -> GroupPath {
        let segments = self
            .segments
            .iter()
            .flat_map(|s| {
                core::iter::repeat_n(
                    Segment { direction: s.direction.clone(), duration: s.duration / parts as f64 },
                    parts,
                )
            })
            .collect();
        GroupPath::new(self.model, self.base.clone(), segments).expect("subdivision stays valid")
    }
}

/// Union of breakpoints refined to at least `min_intervals` sub-intervals.
pub(crate) fn refined_nodes(a: &[f64], b: &[f64], min_intervals: usize) -> Vec<f64> {
    let mut all: Vec<f64> = a.iter().chain(b).copied().collect();
    all.sort_by(f64::total_cmp);
    all.dedup_by(|x, y| (*x - *y).abs() <= 1e-14);
    let mut nodes = vec![0.0];
    for w in all.windows(2) {
        let len = w[1] - w[0];
        let pieces = libm::ceil(len * min_intervals as f64).max(1.0) as usize;
        for p in 1..=pieces {
            nodes.push(if p == pieces { w[1] } else { w[0] + len * p as f64 / pieces as f64 });
        }
    }
    *nodes.last_mut().unwrap() = 1.0;
    nodes
}

/// Piecewise-exponential interpolation of `values` at `nodes`, with the
/// endpoint checked against the last value.
pub(crate) fn interpolate(
    model: GroupModel,
    nodes: &[f64],
    values: &[GroupElement],
) -> Result<(GroupPath, f64)> {
    let segments = nodes
        .windows(2)
        .zip(values.windows(2))
        .map(|(t, w)| {
            let step = model.compose(&model.inverse(&w[0]), &w[1]);
            let dt = t[1] - t[0];
            Segment { direction: model.log(&step).scaled(1.0 / dt), duration: dt }
        })
        .collect();
    let path = GroupPath::new(model, values[0].clone(), segments)?;
    let mismatch = model.distance(path.endpoint(), values.last().unwrap());
    Ok((path, mismatch))
}

/// Resample `t ↦ f(t)` on a refinement of the given breakpoints, doubling the
/// resolution until the endpoint matches.
pub(crate) fn resample<F>(model: GroupModel, a: &[f64], b: &[f64], f: F) -> Result<(GroupPath, Vec<f64>)>
where
    F: Fn(f64) -> Result<GroupElement>,
{
    let mut intervals = MIN_RESAMPLE_INTERVALS;
    let mut mismatch = f64::INFINITY;
    for _ in 0..=MAX_RESAMPLE_DOUBLINGS {
        let nodes = refined_nodes(a, b, intervals);
        let values = nodes.iter().map(|&t| f(t)).collect::<Result<Vec<_>>>()?;
        let (path, m) = interpolate(model, &nodes, &values)?;
        if m <= RESAMPLE_TOLERANCE {
            return Ok((path, nodes));
        }
        mismatch = m;
        intervals *= 2;
    }
    Err(Error::Refinement { mismatch, doublings: MAX_RESAMPLE_DOUBLINGS })
}

/// A path in the class of the pointwise product `t ↦ p(t) q(t)`.
pub fn path_product(p: &GroupPath, q: &GroupPath) -> Result<GroupPath> {
    if p.model != q.model {
        return Err(input("path_product: paths live in different groups"));
    }
    if !p.is_based_at_identity() || !q.is_based_at_identity() {
        return Err(input("path_product: both paths must start at the identity"));
    }
    let model = p.model;
    let (path, _) = resample(model, p.breakpoints(), q.breakpoints(), |t| {
        Ok(model.compose(&p.evaluate(t)?, &q.evaluate(t)?))
    })?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(a: f64, u1: f64, u2: f64) -> GroupElement {
        GroupElement(vec![a, u1, u2])
    }

    #[test]
    fn heisenberg_product_example() {
        let m = GroupModel::heisenberg();
        let p = m.multiply(&h(0.0, 1.0, 0.0), &h(0.0, 0.0, 1.0)).unwrap();
        assert_eq!(p, h(0.5, 1.0, 1.0));
    }

    #[test]
    fn torus_product_wraps() {
        let m = GroupModel::torus(2);
        let p = m.multiply(&GroupElement(vec![0.7, 0.8]), &GroupElement(vec![0.5, 0.5])).unwrap();
        assert!(m.distance(&p, &GroupElement(vec![0.2, 0.3])) < 1e-12);
        assert!(p.iter().all(|x| (0.0..1.0).contains(x)));
    }

    #[test]
    fn identity_is_neutral_and_dimensions_are_checked() {
        for m in [GroupModel::torus(3), GroupModel::heisenberg(), GroupModel::central_extension()] {
            let g = m.normalize(&GroupElement(vec![0.3, -1.2, 2.5]));
            assert_eq!(m.multiply(&m.identity(), &g).unwrap(), g);
        }
        assert!(GroupModel::torus(2).multiply(&GroupElement(vec![0.0]), &GroupElement(vec![0.0, 0.0])).is_err());
    }

    #[test]
    fn exp_examples() {
        let m = GroupModel::heisenberg();
        assert_eq!(m.exp(&AlgebraVector::zeros(3), 0.7), m.identity());
        assert_eq!(m.exp(&AlgebraVector(vec![1.0, 0.0, 0.0]), 1.0), h(1.0, 0.0, 0.0));
        let xi = AlgebraVector(vec![0.0, 1.0, 1.0]);
        let half = m.exp(&xi, 0.5);
        assert!(m.distance(&m.compose(&half, &half), &m.exp(&xi, 1.0)) < 1e-15);
    }

    #[test]
    fn heisenberg_adjoint_example() {
        let m = GroupModel::heisenberg();
        let g = h(0.4, 2.0, -1.0);
        let ad = m.adjoint(&g);
        let xi = [0.5, 3.0, 7.0];
        let got = ad.apply(&xi);
        // (β + ω(u, ξ), ξ) with ω(u, ξ) = 2·7 − (−1)·3 = 17
        assert_eq!(got, vec![17.5, 3.0, 7.0]);
        assert_eq!(m.adjoint(&m.identity()), Mat::identity(3));
        assert_eq!(GroupModel::torus(2).adjoint(&GroupElement(vec![0.3, 0.1])), Mat::identity(2));
    }

    #[test]
    fn structure_constants_form_lie_algebras() {
        for m in [GroupModel::torus(4), GroupModel::heisenberg(), GroupModel::central_extension()] {
            assert!(m.structure_is_lie());
        }
    }

    #[test]
    fn path_evaluation_and_velocity() {
        let m = GroupModel::heisenberg();
        let xi = AlgebraVector(vec![0.0, 1.0, 0.0]);
        let p = GroupPath::straight(m, &xi);
        assert_eq!(p.evaluate(0.0).unwrap(), m.identity());
        assert_eq!(p.evaluate(1.0).unwrap(), h(0.0, 1.0, 0.0));
        for t in [0.0, 0.3, 1.0] {
            assert_eq!(p.left_velocity(t).unwrap(), xi);
        }
        assert!(p.evaluate(1.5).is_err());
        assert!(p.left_velocity(-0.1).is_err());
    }

    #[test]
    fn durations_must_sum_to_one() {
        let m = GroupModel::universal_torus(1);
        let seg = |d| Segment { direction: AlgebraVector(vec![1.0]), duration: d };
        assert!(GroupPath::new(m, m.identity(), vec![seg(0.5), seg(0.4)]).is_err());
        assert!(GroupPath::new(m, m.identity(), vec![seg(0.5), seg(0.5)]).is_ok());
        assert!(GroupPath::new(GroupModel::torus(1), GroupElement(vec![0.0]), vec![seg(1.0)]).is_err());
    }

    #[test]
    fn central_loops_multiply_to_double_loop() {
        let m = GroupModel::heisenberg();
        let loop1 = GroupPath::straight(m, &AlgebraVector(vec![1.0, 0.0, 0.0]));
        let sq = path_product(&loop1, &loop1).unwrap();
        assert!(m.distance(sq.endpoint(), &h(2.0, 0.0, 0.0)) < 1e-12);
        assert!(loop1.is_loop_in(&GroupModel::central_extension()));
        assert!(!loop1.is_loop_in(&GroupModel::heisenberg()));
    }

    #[test]
    fn product_with_trivial_path_keeps_endpoint() {
        let m = GroupModel::heisenberg();
        let p = GroupPath::through(
            m,
            &[AlgebraVector(vec![0.2, 1.0, -0.5]), AlgebraVector(vec![-1.0, 0.3, 2.0])],
        )
        .unwrap();
        let q = path_product(&p, &GroupPath::trivial(m)).unwrap();
        assert!(m.distance(q.endpoint(), p.endpoint()) < 1e-12);
        assert!(q.segments().len() >= MIN_RESAMPLE_INTERVALS);
    }
}
