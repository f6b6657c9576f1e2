//! The two phase-space families with non-trivial topology: `T*T^d` with a
//! magnetic term `θ`, and `T*G` for the circle extension `G = S¹ × ℝ²` of `ℝ²`
//! with `θ` built from `σ`.
//!
//! In both, `π₁(M, z₀) = π₁(G, e)` is free abelian (`ℤ^d` resp. `ℤ`), the
//! deck loops are straight lines in the universal cover and the holonomy
//! `H = J(Γ)` has exact generators: `θ e_i` for the torus and `(0, −σ)` for
//! the extension.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::ToPrimitive;

use crate::closure::{is_closed, ClosedSubgroupDecomp, GeneratedSubgroup};
use crate::cylinder::{deck_group_from_lattices, Cylinder, OrbitDescriptor};
use crate::error::{input, Error, Result};
use crate::exact::{rref, solve, transpose};
use crate::lattice::{classify_cover, integer_preimage, kernel_lattice, AbelianInvariants, LatticeSubgroup};
use crate::lie::{AlgebraVector, DualVector, GroupKind, GroupModel, GroupPath};
use crate::linalg;
use crate::momentum::{momentum_of_path, theta_integral, CocycleTheta, PhasePath};
use crate::scalar::{ExactScalar, QuadraticField};
use crate::symplectic::MagneticCotangent;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScenarioKind {
    Torus { dim: usize },
    CentralExtension,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    kind: ScenarioKind,
    phase: MagneticCotangent,
}

/// Names of `Ĝ = G̃/Γ₀`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverDescription {
    /// `T^r × ℝ^l` with zero exponents kept (torus), or the group name.
    pub descriptor: String,
    /// Compact name, e.g. `ℝ²`, `T¹ × ℝ²`, `H`.
    pub name: String,
    pub gamma0: LatticeSubgroup,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeckGroup {
    pub invariants: AbelianInvariants,
    /// The reduced-space cover is a symplectomorphism.
    pub symplectomorphism: bool,
}

/// Outcome of [`Scenario::reduction_fiber_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct FiberCheck {
    pub max_error: f64,
    pub exact_membership: bool,
    pub samples: usize,
}

impl Scenario {
    pub fn torus(theta: CocycleTheta) -> Result<Self> {
        let dim = theta.dim();
        Self::new(MagneticCotangent::new(GroupModel::torus(dim), theta)?)
    }

    pub fn central_extension(field: &QuadraticField, sigma: [ExactScalar; 2]) -> Result<Self> {
        let theta = CocycleTheta::heisenberg(field, sigma);
        Self::new(MagneticCotangent::new(GroupModel::central_extension(), theta)?)
    }

    pub fn new(phase: MagneticCotangent) -> Result<Self> {
        let kind = match phase.group().kind() {
            GroupKind::Torus { dim } => ScenarioKind::Torus { dim },
            GroupKind::CentralExtension => ScenarioKind::CentralExtension,
            _ => {
                return Err(Error::Capability(
                    "scenarios need a group with non-trivial fundamental group".into(),
                ))
            }
        };
        Ok(Self { kind, phase })
    }

    pub fn kind(&self) -> ScenarioKind {
        self.kind
    }

    pub fn phase(&self) -> &MagneticCotangent {
        &self.phase
    }

    #[doc(hidden)]
    pub fn with_flipped_canonical_sign(&self) -> Self {
        Self { kind: self.kind, phase: self.phase.with_flipped_canonical_sign() }
    }

    pub fn field(&self) -> &QuadraticField {
        self.phase.theta().field()
    }

    pub fn group(&self) -> GroupModel {
        self.phase.group()
    }

    pub fn cover(&self) -> GroupModel {
        self.phase.cover()
    }

    pub fn dim(&self) -> usize {
        self.phase.dim()
    }

    /// Rank of `Γ = π₁(G, e)`.
    pub fn fundamental_rank(&self) -> usize {
        match self.kind {
            ScenarioKind::Torus { dim } => dim,
            ScenarioKind::CentralExtension => 1,
        }
    }

    pub fn sigma(&self) -> Option<[f64; 2]> {
        self.phase.theta().heisenberg_sigma_f64()
    }

    fn check_loop(&self, k: &[i64]) -> Result<()> {
        if k.len() != self.fundamental_rank() {
            return Err(input("deck loop index has the wrong length"));
        }
        Ok(())
    }

    /// Straight representative of the loop class `k ∈ Γ`.
    pub fn deck_loop(&self, k: &[i64]) -> Result<GroupPath> {
        self.check_loop(k)?;
        let dir = match self.kind {
            ScenarioKind::Torus { .. } => k.iter().map(|&x| x as f64).collect(),
            ScenarioKind::CentralExtension => vec![k[0] as f64, 0.0, 0.0],
        };
        Ok(GroupPath::straight(self.cover(), &AlgebraVector(dir)))
    }

    /// The loop at `z₀` with zero momentum.
    pub fn deck_phase_loop(&self, k: &[i64]) -> Result<PhasePath> {
        PhasePath::constant(self.deck_loop(k)?, &DualVector::zeros(self.dim()))
    }

    /// `J(γ_k)`, exactly.
    pub fn holonomy_element(&self, k: &[i64]) -> Result<Vec<ExactScalar>> {
        self.check_loop(k)?;
        Ok(match self.kind {
            ScenarioKind::Torus { .. } => self.phase.theta().apply_integer(k),
            ScenarioKind::CentralExtension => {
                let f = self.field();
                let [s1, s2] = self.phase.theta().heisenberg_sigma().expect("validated shape");
                let c = f.int(-k[0]);
                vec![f.zero(), &c * &s1, &c * &s2]
            }
        })
    }

    fn unit(&self, i: usize) -> Vec<i64> {
        let mut k = vec![0; self.fundamental_rank()];
        k[i] = 1;
        k
    }

    /// `J(γ_i)` for the standard generators of `Γ`.
    pub fn holonomy_generators(&self) -> Vec<Vec<ExactScalar>> {
        (0..self.fundamental_rank())
            .map(|i| self.holonomy_element(&self.unit(i)).expect("unit index is valid"))
            .collect()
    }

    /// The same generators by quadrature along the deck loops.
    pub fn holonomy_generators_numeric(&self) -> Result<Vec<DualVector>> {
        (0..self.fundamental_rank())
            .map(|i| momentum_of_path(&self.phase, &self.deck_phase_loop(&self.unit(i))?))
            .collect()
    }

    pub fn holonomy(&self) -> GeneratedSubgroup {
        GeneratedSubgroup::new(self.dim(), self.field().clone(), self.holonomy_generators())
            .expect("generators have the phase space dimension")
    }

    pub fn closure(&self) -> ClosedSubgroupDecomp {
        is_closed(&self.holonomy())
    }

    pub fn cylinder(&self) -> Cylinder {
        Cylinder::new(&self.closure())
    }

    /// `n × rank Γ` matrix whose columns are the holonomy generators.
    fn generator_rows(&self) -> Vec<Vec<ExactScalar>> {
        transpose(&self.holonomy_generators(), self.dim())
    }

    /// `Γ₀ = {k ∈ Γ : J(γ_k) = 0}`.
    pub fn gamma0(&self) -> LatticeSubgroup {
        kernel_lattice(&self.generator_rows(), self.fundamental_rank())
    }

    pub fn cover_description(&self) -> CoverDescription {
        let gamma0 = self.gamma0();
        match self.kind {
            ScenarioKind::Torus { dim } => {
                let c = classify_cover(&gamma0, dim);
                CoverDescription { descriptor: c.descriptor(), name: c.name(), gamma0 }
            }
            ScenarioKind::CentralExtension => {
                let name: String = if gamma0.is_zero() { "H".into() } else { "S¹ × ℝ²".into() };
                CoverDescription { descriptor: name.clone(), name, gamma0 }
            }
        }
    }

    /// `Γ′ = image(a_{z₀})`, all of `Γ` for cotangent bundles.
    pub fn gamma_prime(&self) -> LatticeSubgroup {
        LatticeSubgroup::full(self.fundamental_rank())
    }

    /// `Γ_μ = Γ ∩ J^{-1}(σ_μ(G̃))`.
    pub fn gamma_mu(&self, mu: &DualVector) -> Result<LatticeSubgroup> {
        if mu.len() != self.dim() {
            return Err(input("gamma_mu: momentum has the wrong dimension"));
        }
        match self.kind {
            ScenarioKind::Torus { dim } => {
                // σ_μ(G̃) = image_ℝ θ; keep the generators whose holonomy lies in it.
                let theta = self.phase.theta().entries();
                let unit = self.field().one();
                let cols: Vec<Vec<i64>> = (0..dim)
                    .map(|i| self.unit(i))
                    .filter(|k| {
                        let target = self.phase.theta().apply_integer(k);
                        solve(theta, dim, &target, &unit).is_some()
                    })
                    .collect();
                Ok(LatticeSubgroup::from_columns(dim, &cols))
            }
            ScenarioKind::CentralExtension => Ok(LatticeSubgroup::full(1)),
        }
    }

    /// Deck group `Γ_μ/(Γ_N Γ′)` of `M_μ^N → M_μ`.
    pub fn deck_group(&self, mu: &DualVector, gamma_n: &LatticeSubgroup) -> Result<DeckGroup> {
        if gamma_n.ambient() != self.fundamental_rank() {
            return Err(input("Γ_N has the wrong ambient rank"));
        }
        if !gamma_n.is_subgroup_of(&self.gamma0()) {
            return Err(input("not a Hamiltonian cover: Γ_N is not contained in Γ₀"));
        }
        let invariants = deck_group_from_lattices(&self.gamma_mu(mu)?, &self.gamma_prime(), gamma_n)?;
        Ok(DeckGroup { symplectomorphism: invariants.is_trivial(), invariants })
    }

    pub fn orbit_descriptor(&self, mu: &DualVector) -> Result<OrbitDescriptor> {
        if mu.len() != self.dim() {
            return Err(input("orbit: momentum has the wrong dimension"));
        }
        match self.kind {
            ScenarioKind::Torus { dim } => {
                let theta_t = transpose(self.phase.theta().entries(), dim);
                let (rows, pivots) = rref(&theta_t, dim);
                let span: Vec<Vec<f64>> = rows[..pivots.len()]
                    .iter()
                    .map(|r| r.iter().map(ExactScalar::to_f64).collect())
                    .collect();
                Ok(OrbitDescriptor::AffineSubspace {
                    base: mu.clone(),
                    directions: linalg::orthonormalize(&span, 1e-12),
                })
            }
            ScenarioKind::CentralExtension => {
                let sigma = self.sigma().expect("validated shape");
                if sigma != [0.0, 0.0] {
                    let value = crate::cylinder::heisenberg_casimir(sigma, mu[0], [mu[1], mu[2]]);
                    return Ok(OrbitDescriptor::CasimirLevelSet { sigma, value });
                }
                // Coadjoint orbits: planes ψ = const, or points when ψ = 0.
                let directions = if mu[0] == 0.0 {
                    Vec::new()
                } else {
                    vec![vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]
                };
                Ok(OrbitDescriptor::AffineSubspace { base: mu.clone(), directions })
            }
        }
    }

    /// A phase path along `g̃` whose momentum map value is `target`:
    /// the body momentum ends at `Ad*_g(target − Θ(g̃))`.
    pub fn path_with_momentum(&self, g: &GroupPath, target: &DualVector) -> Result<PhasePath> {
        let theta = theta_integral(self.phase.theta(), g)?;
        let end = g.model().coadjoint(g.endpoint(), &target.minus(&theta));
        PhasePath::linear(g.clone(), &end)
    }

    /// Checks `q_M^{-1}(q_M(J^{-1}(μ))) = J^{-1}(μ + H)` on samples
    /// `(g̃, k, k′)`: for `x̃` over `g̃` with `J(x̃) = μ`, the deck loop `k`
    /// shifts `J` by an element of `H`, and the holonomy element of `k′` is
    /// recovered from `H` alone as a deck loop fixing the base point.
    pub fn reduction_fiber_check(
        &self,
        mu: &DualVector,
        samples: &[(GroupPath, Vec<i64>, Vec<i64>)],
    ) -> Result<FiberCheck> {
        let closure = self.closure();
        let rows = self.generator_rows();
        let group = self.group();
        let mut max_error: f64 = 0.0;
        let mut exact_membership = true;
        for (g, k, k2) in samples {
            let x = self.path_with_momentum(g, mu)?;
            let jx = momentum_of_path(&self.phase, &x)?;
            max_error = max_error.max(linalg::max_abs(&jx.minus(mu)));

            let moved = self.deck_phase_loop(k)?.concat(&x)?;
            let shift = momentum_of_path(&self.phase, &moved)?.minus(&jx);
            let h = self.holonomy_element(k)?;
            exact_membership &= closure.contains(&h);
            let h_f: Vec<f64> = h.iter().map(ExactScalar::to_f64).collect();
            max_error = max_error.max(linalg::max_abs(&linalg::sub(&shift, &h_f)));

            let target = self.holonomy_element(k2)?;
            let Some(pre) = integer_preimage(&rows, self.fundamental_rank(), &target) else {
                exact_membership = false;
                continue;
            };
            let pre: Vec<i64> = pre.iter().map(|c| c.to_i64().expect("small deck index")).collect();
            let other = self.deck_phase_loop(&pre)?.concat(&x)?;
            let shift2 = momentum_of_path(&self.phase, &other)?.minus(&jx);
            let t_f: Vec<f64> = target.iter().map(ExactScalar::to_f64).collect();
            max_error = max_error.max(linalg::max_abs(&linalg::sub(&shift2, &t_f)));
            let same_base = group.distance(
                &group.project(other.base().endpoint()),
                &group.project(x.base().endpoint()),
            );
            max_error = max_error.max(same_base);
        }
        Ok(FiberCheck { max_error, exact_membership, samples: samples.len() })
    }
}

/// `Γ₀` of a magnetic torus directly from `θ`: `ker θ ∩ ℤ^d`.
pub fn torus_gamma0(theta: &CocycleTheta) -> LatticeSubgroup {
    kernel_lattice(theta.entries(), theta.dim())
}
