//! The magnetic cotangent bundle `T*G ≅ G × 𝔤*` in left trivialization.
//!
//! At `z = (g, μ)` and tangent vectors `v_i = (ξ_i, ν_i)`,
//!
//! ```text
//! ω_z(v_1, v_2) = ⟨ν_2, ξ_1⟩ − ⟨ν_1, ξ_2⟩ + ⟨μ, [ξ_1, ξ_2]⟩ − Σ(ξ_1, ξ_2)
//! ```
//!
//! with `Σ(ξ, η) = ⟨θξ, η⟩`. The lifted left action fixes body momentum, so
//! the generator of `ξ ∈ 𝔤` at `(g, μ)` is `(Ad_{g^{-1}} ξ, 0)`.

use alloc::vec::Vec;

use crate::error::{input, Result};
use crate::lie::{AlgebraVector, DualVector, GroupElement, GroupModel};
use crate::linalg::{self, Mat};
use crate::momentum::CocycleTheta;

#[derive(Clone, Debug, PartialEq)]
pub struct PhasePoint {
    pub g: GroupElement,
    pub mu: DualVector,
}

impl PhasePoint {
    pub fn new(g: GroupElement, mu: DualVector) -> Self {
        Self { g, mu }
    }

    /// `z₀ = (e, 0)`.
    pub fn base(model: GroupModel) -> Self {
        Self { g: model.identity(), mu: DualVector::zeros(model.dim()) }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhaseTangent {
    pub xi: AlgebraVector,
    pub nu: DualVector,
}

impl PhaseTangent {
    pub fn new(xi: AlgebraVector, nu: DualVector) -> Self {
        Self { xi, nu }
    }

    /// Basis vector `k` of `𝔤 × 𝔤*`: `k < n` picks `e_k` in `𝔤`, otherwise
    /// `e_{k−n}` in `𝔤*`.
    pub fn basis(n: usize, k: usize) -> Self {
        if k < n {
            Self { xi: AlgebraVector::unit(n, k), nu: DualVector::zeros(n) }
        } else {
            Self { xi: AlgebraVector::zeros(n), nu: DualVector::unit(n, k - n) }
        }
    }
}

/// `(T*G, Ω_canon − π*B_θ)` for one of the supported groups.
#[derive(Clone, Debug, PartialEq)]
pub struct MagneticCotangent {
    group: GroupModel,
    theta: CocycleTheta,
    sigma: Mat,
    canonical_sign: f64,
}

impl MagneticCotangent {
    pub fn new(group: GroupModel, theta: CocycleTheta) -> Result<Self> {
        if theta.dim() != group.dim() {
            return Err(input("theta dimension does not match the group"));
        }
        theta.validate_for(group)?;
        let sigma = theta.matrix_f64().transpose();
        Ok(Self { group, theta, sigma, canonical_sign: 1.0 })
    }

    /// Copy with the sign of the canonical part reversed. Only meant for
    /// mutation tests of the verification suite.
    #[doc(hidden)]
    pub fn with_flipped_canonical_sign(&self) -> Self {
        Self { canonical_sign: -self.canonical_sign, ..self.clone() }
    }

    pub fn group(&self) -> GroupModel {
        self.group
    }

    /// The simply connected model in which phase paths live.
    pub fn cover(&self) -> GroupModel {
        self.group.cover()
    }

    pub fn theta(&self) -> &CocycleTheta {
        &self.theta
    }

    pub fn dim(&self) -> usize {
        self.group.dim()
    }

    /// `Σ` as a matrix: `Σ(ξ, η) = ξᵀ Σ η`.
    pub fn sigma_matrix(&self) -> &Mat {
        &self.sigma
    }

    pub fn sigma(&self, xi: &[f64], eta: &[f64]) -> f64 {
        linalg::dot(xi, &self.sigma.apply(eta))
    }

    fn check_point(&self, z: &PhasePoint) -> Result<()> {
        let n = self.dim();
        if z.g.len() != n || z.mu.len() != n {
            return Err(input("phase point has the wrong dimension"));
        }
        Ok(())
    }

    fn check_tangent(&self, v: &PhaseTangent) -> Result<()> {
        let n = self.dim();
        if v.xi.len() != n || v.nu.len() != n {
            return Err(input("phase tangent has the wrong dimension"));
        }
        Ok(())
    }

    pub fn omega(&self, z: &PhasePoint, v1: &PhaseTangent, v2: &PhaseTangent) -> Result<f64> {
        self.check_point(z)?;
        self.check_tangent(v1)?;
        self.check_tangent(v2)?;
        Ok(self.omega_unchecked(&z.mu, v1, v2))
    }

    pub(crate) fn omega_unchecked(&self, mu: &[f64], v1: &PhaseTangent, v2: &PhaseTangent) -> f64 {
        let bracket = self.group.bracket(&v1.xi, &v2.xi);
        let canonical = linalg::dot(&v2.nu, &v1.xi) - linalg::dot(&v1.nu, &v2.xi)
            + linalg::dot(mu, &bracket);
        self.canonical_sign * canonical - self.sigma(&v1.xi, &v2.xi)
    }

    /// Infinitesimal generator `ξ_M(z) = (Ad_{g^{-1}} ξ, 0)`.
    pub fn generator(&self, xi: &AlgebraVector, z: &PhasePoint) -> PhaseTangent {
        PhaseTangent {
            xi: self.group.adjoint_inverse_apply(&z.g, xi),
            nu: DualVector::zeros(self.dim()),
        }
    }

    /// `Ψ(z)_{ij} = ω_z((e_i)_M, (e_j)_M)`.
    pub fn chu_map(&self, z: &PhasePoint) -> Mat {
        let n = self.dim();
        let gens: Vec<PhaseTangent> =
            (0..n).map(|i| self.generator(&AlgebraVector::unit(n, i), z)).collect();
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = self.omega_unchecked(&z.mu, &gens[i], &gens[j]);
            }
        }
        m
    }

    /// Matrix of `ω_z` in the basis of [`PhaseTangent::basis`].
    pub fn omega_matrix(&self, z: &PhasePoint) -> Mat {
        let n2 = 2 * self.dim();
        let basis: Vec<PhaseTangent> =
            (0..n2).map(|k| PhaseTangent::basis(self.dim(), k)).collect();
        let mut m = Mat::zeros(n2, n2);
        for a in 0..n2 {
            for b in 0..n2 {
                m[(a, b)] = self.omega_unchecked(&z.mu, &basis[a], &basis[b]);
            }
        }
        m
    }

    /// The vector `X` with `ω_z(X, ·) = dh` for a covector `dh` on `𝔤 × 𝔤*`.
    pub fn hamiltonian_vector(&self, z: &PhasePoint, dh: &[f64]) -> Result<PhaseTangent> {
        let n = self.dim();
        let x = self
            .omega_matrix(z)
            .transpose()
            .solve(dh)
            .ok_or_else(|| input("symplectic form is degenerate at this point"))?;
        Ok(PhaseTangent { xi: AlgebraVector(x[..n].to_vec()), nu: DualVector(x[n..].to_vec()) })
    }

    /// Move `z` by `s` along the left-invariant field `v`:
    /// `(g·exp(s ξ), μ + s ν)`.
    pub fn flow_invariant_field(&self, z: &PhasePoint, v: &PhaseTangent, s: f64) -> PhasePoint {
        let cover = self.cover();
        PhasePoint {
            g: cover.compose(&z.g, &cover.exp(&v.xi, s)),
            mu: z.mu.plus(&v.nu.scaled(s)),
        }
    }

    /// `dω(X, Y, Z)` at `z` for left-invariant fields `X, Y, Z`, with the
    /// directional derivatives taken by central differences of step `h`.
    pub fn exterior_derivative(
        &self,
        z: &PhasePoint,
        fields: [&PhaseTangent; 3],
        h: f64,
    ) -> f64 {
        let [x, y, w] = fields;
        let deriv = |dir: &PhaseTangent, a: &PhaseTangent, b: &PhaseTangent| {
            let plus = self.flow_invariant_field(z, dir, h);
            let minus = self.flow_invariant_field(z, dir, -h);
            (self.omega_unchecked(&plus.mu, a, b) - self.omega_unchecked(&minus.mu, a, b))
                / (2.0 * h)
        };
        let bracket = |a: &PhaseTangent, b: &PhaseTangent| PhaseTangent {
            xi: self.group.bracket(&a.xi, &b.xi),
            nu: DualVector::zeros(self.dim()),
        };
        let om = |a: &PhaseTangent, b: &PhaseTangent| self.omega_unchecked(&z.mu, a, b);
        deriv(x, y, w) - deriv(y, x, w) + deriv(w, x, y) - om(&bracket(x, y), w)
            + om(&bracket(x, w), y)
            - om(&bracket(y, w), x)
    }
}

/// Pack a tangent vector as a `2n` vector `(ξ, ν)`.
pub fn tangent_to_vec(v: &PhaseTangent) -> Vec<f64> {
    let mut out = v.xi.0.clone();
    out.extend_from_slice(&v.nu);
    out
}

pub fn vec_to_tangent(v: &[f64]) -> PhaseTangent {
    let n = v.len() / 2;
    PhaseTangent { xi: AlgebraVector(v[..n].to_vec()), nu: DualVector(v[n..].to_vec()) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::QuadraticField;
    use alloc::vec;

    fn heis() -> MagneticCotangent {
        let f = QuadraticField::sqrt2();
        MagneticCotangent::new(
            GroupModel::central_extension(),
            CocycleTheta::heisenberg(&f, [f.int(1), f.int(0)]),
        )
        .unwrap()
    }

    fn torus() -> MagneticCotangent {
        let f = QuadraticField::sqrt2();
        let theta = CocycleTheta::from_strings(&f, &[&["0", "1"], &["-1", "0"]]).unwrap();
        MagneticCotangent::new(GroupModel::torus(2), theta).unwrap()
    }

    fn t(xi: &[f64], nu: &[f64]) -> PhaseTangent {
        PhaseTangent::new(AlgebraVector(xi.to_vec()), DualVector(nu.to_vec()))
    }

    #[test]
    fn omega_examples() {
        let m = torus();
        let z = PhasePoint::new(GroupElement(vec![0.3, 0.9]), DualVector(vec![1.5, -2.0]));
        let v = t(&[0.2, 0.7], &[1.0, 4.0]);
        assert_eq!(m.omega(&z, &v, &v).unwrap(), 0.0);
        let (a, b) = ([1.0, 0.0], [0.0, 1.0]);
        let w = m.omega(&z, &t(&a, &[0.0, 0.0]), &t(&b, &[0.0, 0.0])).unwrap();
        assert_eq!(w, -m.sigma(&a, &b));
        assert_eq!(m.omega(&z, &t(&[0.0; 2], &[1.0, 2.0]), &t(&[0.0; 2], &[3.0, -1.0])).unwrap(), 0.0);
        assert!(m.omega(&z, &t(&[0.0; 3], &[0.0; 2]), &v).is_err());
    }

    #[test]
    fn generator_examples() {
        let m = heis();
        let xi = AlgebraVector(vec![0.5, 2.0, -1.0]);
        let at_e = PhasePoint::new(GroupElement(vec![0.0; 3]), DualVector(vec![1.0, 2.0, 3.0]));
        assert_eq!(m.generator(&xi, &at_e).xi, xi);
        let u = [0.3, 0.7];
        let z = PhasePoint::new(GroupElement(vec![0.0, u[0], u[1]]), DualVector::zeros(3));
        let got = m.generator(&xi, &z);
        let expected = 0.5 - crate::lie::omega2(u, [2.0, -1.0]);
        assert!((got.xi[0] - expected).abs() < 1e-15);
        assert_eq!(&got.xi[1..], &[2.0, -1.0]);
        assert_eq!(got.nu.max_abs(), 0.0);
    }

    #[test]
    fn chu_map_at_base_point_is_minus_sigma() {
        for m in [heis(), torus()] {
            let z0 = PhasePoint::base(m.group());
            let psi = m.chu_map(&z0);
            assert_eq!(psi.max_abs_diff(&m.sigma_matrix().scale(-1.0)), 0.0);
        }
    }

    #[test]
    fn heisenberg_form_is_closed() {
        let m = heis();
        let z = PhasePoint::new(GroupElement(vec![0.2, -0.4, 1.1]), DualVector(vec![0.3, 2.0, -0.7]));
        let fields = [
            t(&[0.3, 1.0, -0.2], &[0.5, 0.0, 1.0]),
            t(&[-1.0, 0.4, 0.9], &[0.0, 2.0, 0.1]),
            t(&[0.0, -0.6, 0.5], &[1.5, -0.2, 0.3]),
        ];
        let d = m.exterior_derivative(&z, [&fields[0], &fields[1], &fields[2]], 1e-4);
        assert!(d.abs() < 1e-8, "dω = {d}");
    }

    #[test]
    fn hamiltonian_vector_inverts_omega() {
        let m = heis();
        let z = PhasePoint::new(GroupElement(vec![0.1, 0.5, -0.5]), DualVector(vec![1.0, 0.2, 0.3]));
        let dh = [0.0, 0.0, 0.0, 1.0, 0.2, 0.3];
        let x = m.hamiltonian_vector(&z, &dh).unwrap();
        for k in 0..6 {
            let got = m.omega(&z, &x, &PhaseTangent::basis(3, k)).unwrap();
            assert!((got - dh[k]).abs() < 1e-12);
        }
    }
}
