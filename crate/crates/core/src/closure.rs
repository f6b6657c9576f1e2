//! Closedness of finitely generated subgroups of `ℝ^n` with entries in
//! `ℚ(α)`, and the decomposition of their closure as `V ⊕ ℤΛ`.
//!
//! A subgroup generated by `h_1..h_k` is discrete iff its rank over `ℚ` equals
//! the dimension of its real span. For the closure, write `G` for the matrix
//! with columns `h_j`. The rational vectors orthogonal to `ker G` span a
//! rational subspace `R ⊂ ℚ^k`; then `V = G(R^⊥)` and the lattice part is
//! `G` applied to the orthogonal projection of `ℤ^k` onto `R`.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{input, Result};
use crate::exact::{kernel, rank, rref, solve, transpose};
use crate::intmat::{hermite_normal_form, IntMatrix};
use crate::scalar::{ExactScalar, Field, QuadraticField};

/// Subgroup of `ℚ(α)^n` generated by finitely many vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratedSubgroup {
    dim: usize,
    field: QuadraticField,
    generators: Vec<Vec<ExactScalar>>,
}

impl GeneratedSubgroup {
    pub fn new(
        dim: usize,
        field: QuadraticField,
        generators: Vec<Vec<ExactScalar>>,
    ) -> Result<Self> {
        if generators.iter().any(|g| g.len() != dim) {
            return Err(input("generated subgroup: generator length differs from dimension"));
        }
        let generators = generators.into_iter().filter(|g| !g.iter().all(Field::is_zero)).collect();
        Ok(Self { dim, field, generators })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> &QuadraticField {
        &self.field
    }

    pub fn generators(&self) -> &[Vec<ExactScalar>] {
        &self.generators
    }

    /// Rows of the `n × k` matrix whose columns are the generators.
    fn matrix(&self) -> Vec<Vec<ExactScalar>> {
        transpose(&self.generators, self.dim)
    }

    /// Rank of the generators over `ℚ` (equivalently over `ℤ`).
    pub fn rational_rank(&self) -> usize {
        let k = self.generators.len();
        let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(2 * self.dim);
        for i in 0..self.dim {
            rows.push(self.generators.iter().map(|g| g[i].a().clone()).collect());
            rows.push(self.generators.iter().map(|g| g[i].b().clone()).collect());
        }
        rank(&rows, k)
    }

    /// Dimension of the real span.
    pub fn real_rank(&self) -> usize {
        rank(&self.matrix(), self.generators.len())
    }
}

/// Closed subgroup `V ⊕ ℤΛ` of `ℝ^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedSubgroupDecomp {
    dim: usize,
    field: QuadraticField,
    pub subspace_basis: Vec<Vec<ExactScalar>>,
    pub lattice_basis: Vec<Vec<ExactScalar>>,
    /// Whether the generating subgroup was already closed (`V = 0`).
    pub closed: bool,
    pub rational_rank: usize,
    pub real_rank: usize,
}

impl ClosedSubgroupDecomp {
    /// The trivial subgroup `{0}`.
    pub fn trivial(dim: usize, field: QuadraticField) -> Self {
        Self {
            dim,
            field,
            subspace_basis: Vec::new(),
            lattice_basis: Vec::new(),
            closed: true,
            rational_rank: 0,
            real_rank: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn subspace_f64(&self) -> Vec<Vec<f64>> {
        to_f64(&self.subspace_basis)
    }

    pub fn lattice_f64(&self) -> Vec<Vec<f64>> {
        to_f64(&self.lattice_basis)
    }

    /// Exact membership `v ∈ V ⊕ ℤΛ`.
    pub fn contains(&self, v: &[ExactScalar]) -> bool {
        let cols: Vec<Vec<ExactScalar>> =
            self.subspace_basis.iter().chain(&self.lattice_basis).cloned().collect();
        let unit = self.field.one();
        if cols.is_empty() {
            return v.iter().all(Field::is_zero);
        }
        let rows = transpose(&cols, self.dim);
        let Some(x) = solve(&rows, cols.len(), v, &unit) else {
            return false;
        };
        x[self.subspace_basis.len()..]
            .iter()
            .all(|c| c.is_rational() && c.a().is_integer())
    }
}

fn to_f64(vs: &[Vec<ExactScalar>]) -> Vec<Vec<f64>> {
    vs.iter().map(|v| v.iter().map(ExactScalar::to_f64).collect()).collect()
}

fn rational_part(
    rows: &[Vec<ExactScalar>],
    part: impl Fn(&ExactScalar) -> &BigRational,
) -> Vec<Vec<BigRational>> {
    rows.iter().map(|r| r.iter().map(|s| part(s).clone()).collect()).collect()
}

/// Flip each vector so its first non-negligible entry is positive.
fn orient(v: &mut [ExactScalar]) {
    if let Some(first) = v.iter().find(|s| !s.is_zero()) {
        if first.to_f64() < 0.0 {
            for s in v.iter_mut() {
                *s = -&*s;
            }
        }
    }
}

/// Decide closedness and compute the closure decomposition.
pub fn is_closed(h: &GeneratedSubgroup) -> ClosedSubgroupDecomp {
    let n = h.dim;
    let k = h.generators.len();
    let field = h.field.clone();
    if k == 0 {
        return ClosedSubgroupDecomp::trivial(n, field);
    }
    let unit = field.one();
    let q_one = BigRational::one();
    let g = h.matrix();
    let rational_rank = h.rational_rank();
    let real_rank = h.real_rank();

    // Relations among the generators over ℚ(α), split into rational equations.
    let relations = kernel(&g, k, &unit);
    let mut split: Vec<Vec<BigRational>> = rational_part(&relations, ExactScalar::a);
    split.extend(rational_part(&relations, ExactScalar::b));
    let r_basis: Vec<Vec<BigRational>> = if split.is_empty() {
        (0..k)
            .map(|i| (0..k).map(|j| if i == j { q_one.clone() } else { BigRational::zero() }).collect())
            .collect()
    } else {
        kernel(&split, k, &q_one)
    };
    let r_perp: Vec<Vec<BigRational>> = if r_basis.is_empty() {
        kernel(&Vec::<Vec<BigRational>>::new(), k, &q_one)
    } else {
        kernel(&r_basis, k, &q_one)
    };

    let apply = |c: &[BigRational]| -> Vec<ExactScalar> {
        g.iter()
            .map(|row| {
                row.iter()
                    .zip(c)
                    .fold(field.zero(), |acc, (x, q)| acc.add(&x.mul(&field.rational(q.clone()))))
            })
            .collect()
    };

    // Dense part V = G(R^⊥), reduced to a basis.
    let v_vectors: Vec<Vec<ExactScalar>> = r_perp.iter().map(|c| apply(c)).collect();
    let subspace_basis = if v_vectors.is_empty() {
        Vec::new()
    } else {
        let (mut red, _) = rref(&v_vectors, n);
        red.iter_mut().for_each(|v| orient(v));
        red
    };

    // Lattice part: G applied to the projection of ℤ^k onto R.
    let s = r_basis.len();
    let lattice_basis = if s == 0 {
        Vec::new()
    } else {
        // Coordinates of P_R e_i in the R basis: (RᵀR)^{-1} Rᵀ e_i.
        let gram: Vec<Vec<BigRational>> = (0..s)
            .map(|a| {
                (0..s)
                    .map(|b| {
                        r_basis[a].iter().zip(&r_basis[b]).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
                    })
                    .collect()
            })
            .collect();
        let coords: Vec<Vec<BigRational>> = (0..k)
            .map(|i| {
                let rhs: Vec<BigRational> = (0..s).map(|a| r_basis[a][i].clone()).collect();
                solve(&gram, s, &rhs, &q_one).expect("Gram matrix of a basis is invertible")
            })
            .collect();
        let denom = coords
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let int_cols: Vec<Vec<BigInt>> = coords
            .iter()
            .map(|c| c.iter().map(|q| (q * BigRational::from_integer(denom.clone())).to_integer()).collect())
            .collect();
        let hermite = hermite_normal_form(&IntMatrix::from_columns(s, &int_cols));
        let basis = hermite.basis();
        basis
            .columns()
            .iter()
            .map(|b| {
                let in_r: Vec<BigRational> = (0..k)
                    .map(|i| {
                        (0..s).fold(BigRational::zero(), |acc, a| {
                            acc + &r_basis[a][i] * BigRational::from_integer(b[a].clone())
                        }) / BigRational::from_integer(denom.clone())
                    })
                    .collect();
                let mut v = apply(&in_r);
                orient(&mut v);
                v
            })
            .collect()
    };

    ClosedSubgroupDecomp {
        dim: n,
        field,
        subspace_basis,
        lattice_basis,
        closed: rational_rank == real_rank,
        rational_rank,
        real_rank,
    }
}
