//! Subgroups of `ℤ^d`: kernel lattices, membership, cover classification and
//! quotient invariants.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{input, Result};
use crate::intmat::{hermite_normal_form, smith_normal_form, IntMatrix};
use crate::scalar::ExactScalar;

/// A subgroup of `ℤ^d` stored as its column Hermite basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeSubgroup {
    ambient: usize,
    basis: IntMatrix,
}

impl LatticeSubgroup {
    /// Subgroup generated by the columns of `generators`.
    pub fn from_generators(generators: &IntMatrix) -> Self {
        let h = hermite_normal_form(generators);
        Self { ambient: generators.rows(), basis: h.basis() }
    }

    pub fn from_columns(ambient: usize, columns: &[Vec<i64>]) -> Self {
        let cols: Vec<Vec<BigInt>> =
            columns.iter().map(|c| c.iter().map(|&x| BigInt::from(x)).collect()).collect();
        Self::from_generators(&IntMatrix::from_columns(ambient, &cols))
    }

    pub fn zero(ambient: usize) -> Self {
        Self { ambient, basis: IntMatrix::zeros(ambient, 0) }
    }

    pub fn full(ambient: usize) -> Self {
        Self { ambient, basis: IntMatrix::identity(ambient) }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.rank() == 0
    }

    /// Integer coordinates of `v` in the Hermite basis, if `v` lies in the span.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.ambient, "ambient dimension mismatch");
        let mut residual: Vec<BigInt> = v.to_vec();
        let mut coords = Vec::with_capacity(self.rank());
        for j in 0..self.rank() {
            let p = (0..self.ambient).find(|&i| !self.basis[(i, j)].is_zero())?;
            let (c, rem) = residual[p].div_rem(&self.basis[(p, j)]);
            if !rem.is_zero() {
                return None;
            }
            for (i, r) in residual.iter_mut().enumerate() {
                *r -= &c * &self.basis[(i, j)];
            }
            coords.push(c);
        }
        residual.iter().all(Zero::is_zero).then_some(coords)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn is_subgroup_of(&self, other: &LatticeSubgroup) -> bool {
        self.ambient == other.ambient
            && self.basis.columns().iter().all(|c| other.contains(c))
    }

    /// The subgroup generated by both.
    pub fn sum(&self, other: &LatticeSubgroup) -> Result<LatticeSubgroup> {
        if self.ambient != other.ambient {
            return Err(input("lattice sum with mismatched ambient dimensions"));
        }
        let mut cols = self.basis.columns();
        cols.extend(other.basis.columns());
        Ok(Self::from_generators(&IntMatrix::from_columns(self.ambient, &cols)))
    }

    pub fn basis_columns_i64(&self) -> Vec<Vec<i64>> {
        use num_traits::ToPrimitive;
        self.basis
            .columns()
            .iter()
            .map(|c| c.iter().map(|x| x.to_i64().expect("lattice entry exceeds i64")).collect())
            .collect()
    }
}

/// Finitely generated abelian group `ℤ^free ⊕ ⊕ ℤ/t_i` with `t_i | t_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianInvariants {
    pub fn trivial() -> Self {
        Self { free_rank: 0, torsion: Vec::new() }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Group order when finite.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.torsion.iter().fold(BigInt::one(), |acc, t| acc * t))
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return f.write_str("0");
        }
        let mut parts: Vec<String> = Vec::new();
        if self.free_rank == 1 {
            parts.push("ℤ".into());
        } else if self.free_rank > 1 {
            parts.push(format!("ℤ^{}", self.free_rank));
        }
        parts.extend(self.torsion.iter().map(|t| format!("ℤ/{t}")));
        f.write_str(&parts.join(" × "))
    }
}

/// `big / small` as an abelian group.
pub fn quotient_invariants(
    big: &LatticeSubgroup,
    small: &LatticeSubgroup,
) -> Result<AbelianInvariants> {
    if !small.is_subgroup_of(big) {
        return Err(input("quotient_invariants: small lattice is not contained in big lattice"));
    }
    let coords: Vec<Vec<BigInt>> = small
        .basis
        .columns()
        .iter()
        .map(|c| big.coordinates(c).expect("membership checked above"))
        .collect();
    let inclusion = IntMatrix::from_columns(big.rank(), &coords);
    let factors = smith_normal_form(&inclusion).invariant_factors();
    let free_rank = big.rank() - factors.len();
    let torsion = factors.into_iter().filter(|t| !t.is_one()).collect();
    Ok(AbelianInvariants { free_rank, torsion })
}

/// `Γ_N < Γ₀`: the cover defined by `Γ_N` carries a momentum map.
pub fn subgroup_is_hamiltonian(gamma_n: &LatticeSubgroup, gamma0: &LatticeSubgroup) -> bool {
    gamma_n.is_subgroup_of(gamma0)
}

fn lcm_of_denominators<'a>(qs: impl Iterator<Item = &'a BigRational>) -> BigInt {
    qs.fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// Integer kernel `{k ∈ ℤ^d : Σ k_j h_j = 0}` for columns `h_j ∈ ℚ(α)^n`.
///
/// `rows` is the `n × d` matrix with the `h_j` as columns. Each equation is
/// split into its rational and `α` parts, which is exact because `1, α` are
/// independent over `ℚ`.
pub fn kernel_lattice(rows: &[Vec<ExactScalar>], d: usize) -> LatticeSubgroup {
    let mut int_rows: Vec<Vec<BigInt>> = Vec::new();
    for row in rows {
        assert_eq!(row.len(), d, "kernel_lattice: row length mismatch");
        for part in [0usize, 1] {
            let comps: Vec<&BigRational> =
                row.iter().map(|s| if part == 0 { s.a() } else { s.b() }).collect();
            if comps.iter().all(|q| q.is_zero()) {
                continue;
            }
            let l = lcm_of_denominators(comps.iter().copied());
            int_rows.push(comps.iter().map(|q| (*q * &l).to_integer()).collect());
        }
    }
    if int_rows.is_empty() {
        return LatticeSubgroup::full(d);
    }
    let mut m = IntMatrix::zeros(int_rows.len(), d);
    for (i, r) in int_rows.iter().enumerate() {
        for (j, x) in r.iter().enumerate() {
            m[(i, j)] = x.clone();
        }
    }
    let h = hermite_normal_form(&m);
    LatticeSubgroup::from_generators(&h.kernel())
}

/// An integer `k` with `Σ k_j h_j = target`, or `None` if there is none.
/// `rows` is laid out as in [`kernel_lattice`].
pub fn integer_preimage(
    rows: &[Vec<ExactScalar>],
    d: usize,
    target: &[ExactScalar],
) -> Option<Vec<BigInt>> {
    assert_eq!(rows.len(), target.len(), "integer_preimage: target length mismatch");
    let mut int_rows: Vec<Vec<BigInt>> = Vec::new();
    let mut rhs: Vec<BigInt> = Vec::new();
    for (row, t) in rows.iter().zip(target) {
        assert_eq!(row.len(), d, "integer_preimage: row length mismatch");
        for part in [0usize, 1] {
            let pick = |s: &'_ ExactScalar| if part == 0 { s.a().clone() } else { s.b().clone() };
            let comps: Vec<BigRational> = row.iter().map(pick).collect();
            let goal = pick(t);
            let l = lcm_of_denominators(comps.iter().chain(core::iter::once(&goal)));
            int_rows.push(comps.iter().map(|q| (q * &l).to_integer()).collect());
            rhs.push((goal * &l).to_integer());
        }
    }
    let mut m = IntMatrix::zeros(int_rows.len(), d);
    for (i, r) in int_rows.iter().enumerate() {
        for (j, x) in r.iter().enumerate() {
            m[(i, j)] = x.clone();
        }
    }
    let h = hermite_normal_form(&m);
    let image = LatticeSubgroup { ambient: m.rows(), basis: h.basis() };
    let y = image.coordinates(&rhs)?;
    Some(
        (0..d)
            .map(|i| y.iter().enumerate().fold(BigInt::zero(), |acc, (j, c)| acc + c * &h.transform[(i, j)]))
            .collect(),
    )
}

/// Shape of `ℝ^d / Γ₀`: `T^r × ℝ^{d−r}` with `r = rank Γ₀`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverClass {
    pub torus_rank: usize,
    pub line_rank: usize,
    pub basis: LatticeSubgroup,
}

fn superscript(n: usize) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    format!("{n}").chars().map(|c| DIGITS[c.to_digit(10).unwrap() as usize]).collect()
}

impl CoverClass {
    /// Full form, e.g. `T^1 × ℝ^2`, zero exponents included.
    pub fn descriptor(&self) -> String {
        format!("T^{} × ℝ^{}", self.torus_rank, self.line_rank)
    }

    /// Compact form with trivial factors dropped, e.g. `ℝ²` or `T¹ × ℝ²`.
    pub fn name(&self) -> String {
        match (self.torus_rank, self.line_rank) {
            (0, 0) => "point".into(),
            (0, l) => format!("ℝ{}", superscript(l)),
            (t, 0) => format!("T{}", superscript(t)),
            (t, l) => format!("T{} × ℝ{}", superscript(t), superscript(l)),
        }
    }
}

pub fn classify_cover(gamma0: &LatticeSubgroup, d: usize) -> CoverClass {
    let r = gamma0.rank();
    CoverClass { torus_rank: r, line_rank: d - r, basis: gamma0.clone() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::QuadraticField;
    use alloc::vec;

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn quotient_examples() {
        let z2 = LatticeSubgroup::full(2);
        let small = LatticeSubgroup::from_columns(2, &[vec![2, 0], vec![0, 3]]);
        let q = quotient_invariants(&z2, &small).unwrap();
        assert_eq!(q, AbelianInvariants { free_rank: 0, torsion: vec![big(6)] });
        assert_eq!(q.order(), Some(big(6)));
        assert!(quotient_invariants(&z2, &z2).unwrap().is_trivial());
        let free = quotient_invariants(&z2, &LatticeSubgroup::zero(2)).unwrap();
        assert_eq!(free.free_rank, 2);
        assert!(quotient_invariants(&small, &z2).is_err());
    }

    #[test]
    fn hamiltonian_subgroup_examples() {
        let zero = LatticeSubgroup::zero(2);
        let g0 = LatticeSubgroup::from_columns(2, &[vec![1, 0]]);
        assert!(subgroup_is_hamiltonian(&zero, &g0));
        assert!(subgroup_is_hamiltonian(&g0, &g0));
        assert!(!subgroup_is_hamiltonian(&g0, &zero));
    }

    #[test]
    fn kernel_of_invertible_and_zero_theta() {
        let f = QuadraticField::sqrt2();
        let theta = vec![vec![f.int(0), f.int(1)], vec![f.int(-1), f.int(0)]];
        assert!(kernel_lattice(&theta, 2).is_zero());
        let zero = vec![vec![f.int(0), f.int(0)], vec![f.int(0), f.int(0)]];
        assert_eq!(kernel_lattice(&zero, 2), LatticeSubgroup::full(2));
    }

    #[test]
    fn irrational_real_kernel_has_no_lattice_points() {
        // ker_ℝ θ = span{(0, −α, 1)}
        let f = QuadraticField::sqrt2();
        let a = f.alpha();
        let theta = vec![
            vec![f.int(0), f.int(1), a.clone()],
            vec![f.int(-1), f.int(0), f.int(0)],
            vec![-a, f.int(0), f.int(0)],
        ];
        assert!(kernel_lattice(&theta, 3).is_zero());
    }

    #[test]
    fn cover_names() {
        assert_eq!(classify_cover(&LatticeSubgroup::zero(2), 2).name(), "ℝ²");
        assert_eq!(classify_cover(&LatticeSubgroup::zero(2), 2).descriptor(), "T^0 × ℝ^2");
        assert_eq!(classify_cover(&LatticeSubgroup::full(3), 3).descriptor(), "T^3 × ℝ^0");
        let g0 = LatticeSubgroup::from_columns(2, &[vec![1, 0]]);
        assert_eq!(classify_cover(&g0, 2).descriptor(), "T^1 × ℝ^1");
        assert_eq!(classify_cover(&g0, 2).name(), "T¹ × ℝ¹");
    }

    #[test]
    fn coordinates_reject_non_members() {
        let l = LatticeSubgroup::from_columns(2, &[vec![2, 1], vec![0, 3]]);
        assert!(l.contains(&[big(2), big(4)]));
        assert!(!l.contains(&[big(1), big(0)]));
        assert!(!l.contains(&[big(0), big(1)]));
    }

    #[test]
    fn integer_preimage_finds_or_refuses() {
        let f = QuadraticField::sqrt2();
        // columns h_1 = (1, α), h_2 = (2, 0)
        let rows = vec![vec![f.int(1), f.int(2)], vec![f.alpha(), f.int(0)]];
        let target = vec![f.int(7), &f.alpha() * &f.int(3)];
        let k = integer_preimage(&rows, 2, &target).unwrap();
        assert_eq!(k, vec![big(3), big(2)]);
        let odd = vec![f.int(1), f.int(0)];
        assert!(integer_preimage(&rows, 2, &odd).is_none());
        let irrational = vec![f.alpha(), f.int(0)];
        assert!(integer_preimage(&rows, 2, &irrational).is_none());
    }
}
