//! Graver complexity through the Graver basis of the Graver basis, lower
//! bounds on Gröbner complexity, and primitive partition identities.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::ab::b_matrix_c;
use crate::error::{Error, Result};
use crate::fiber::ugb_member;
use crate::graver::{graver_with, GraverBasis, GraverOptions};
use crate::lawrence::{relation_minimal, Minimality, Relation};
use crate::limits::Limits;
use crate::linalg::{kernel_lattice_basis, lattice_equal, IntMatrix, LatticeVector};

#[derive(Debug, Clone)]
pub struct ComplexityReport {
    pub matrix: IntMatrix,
    /// Number of `±` pairs in `G(A)`.
    pub graver_size: usize,
    /// Columns are the canonical representatives of `G(A)`.
    pub derived_matrix: IntMatrix,
    pub derived_graver_size: usize,
    pub g_value: BigInt,
    /// An element of `G(derived)` of maximal 1-norm.
    pub witness: LatticeVector,
}

/// `g(A)`: the maximal 1-norm in the Graver basis of the matrix whose
/// columns are the Graver basis elements of `A`, one per `±` pair.
pub fn graver_complexity(a: &IntMatrix, opts: &GraverOptions) -> Result<ComplexityReport> {
    let g = graver_with(a, opts)?;
    complexity_of_columns(a, &g, g.elements(), opts)
}

/// The same pipeline with an arbitrary sign chosen for each column.
pub fn graver_complexity_with_columns(a: &IntMatrix, columns: &[LatticeVector], opts: &GraverOptions) -> Result<ComplexityReport> {
    let g = graver_with(a, opts)?;
    if columns.len() != g.len() || columns.iter().any(|c| !g.contains(c)) {
        return Err(Error::pre("columns must be one representative of each Graver pair"));
    }
    complexity_of_columns(a, &g, columns, opts)
}

fn complexity_of_columns(a: &IntMatrix, g: &GraverBasis, columns: &[LatticeVector], opts: &GraverOptions) -> Result<ComplexityReport> {
    if g.is_empty() {
        return Err(Error::pre("the kernel is trivial, there is no derived matrix"));
    }
    let derived = IntMatrix::from_columns(columns)?;
    let gg = graver_with(&derived, opts)?;
    // The lexicographically least element of maximal norm.
    let witness = gg
        .elements()
        .iter()
        .filter(|e| e.norm1() == gg.max_norm())
        .min()
        .cloned()
        .ok_or_else(|| Error::pre("the derived matrix has a trivial kernel"))?;
    Ok(ComplexityReport {
        matrix: a.clone(),
        graver_size: g.len(),
        derived_matrix: derived,
        derived_graver_size: gg.len(),
        g_value: witness.norm1(),
        witness,
    })
}

/// Largest `‖λ‖₁` over the relations, after checking that every generator
/// in use lies in `U(A)` and every relation is minimal.
pub fn groebner_complexity_lower_bound(a: &IntMatrix, relations: &[Relation], limits: &Limits) -> Result<u64> {
    let mut best = 0;
    for (r, rel) in relations.iter().enumerate() {
        for (g, &l) in rel.generators().iter().zip(rel.lambda()) {
            if l > 0 && ugb_member(a, g, limits)?.is_none() {
                return Err(Error::Verification(format!("relation {r}: generator {g} is not in U(A)")));
            }
        }
        if let Minimality::Decomposable(mu) = relation_minimal(rel)? {
            return Err(Error::Verification(format!("relation {r} is not minimal, sub-relation {mu:?}")));
        }
        best = best.max(rel.total());
    }
    Ok(best)
}

/// `A_n = (1 1 … 1 0; 1 2 … n 1)`.
pub fn partition_matrix(n: usize) -> Result<IntMatrix> {
    if n == 0 {
        return Err(Error::pre("n must be positive"));
    }
    let top: Vec<i64> = (0..n).map(|_| 1).chain([0]).collect();
    let bottom: Vec<i64> = (1..=n as i64).chain([1]).collect();
    IntMatrix::from_rows(&[top, bottom])
}

/// `a₁ + … + a_k + l·1 = b₁ + … + b_k` with parts in `1..=n`, both sides
/// sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionIdentity {
    pub left: Vec<u64>,
    pub ones: u64,
    pub right: Vec<u64>,
    pub primitive: bool,
}

impl PartitionIdentity {
    pub fn k(&self) -> usize {
        self.left.len()
    }

    /// `δᵢ = aᵢ − bᵢ` on the sorted sides.
    pub fn deltas(&self) -> Vec<i64> {
        self.left.iter().zip(&self.right).map(|(&a, &b)| a as i64 - b as i64).collect()
    }

    /// `(Δ₊, Δ₋)`. The `l` ones are parts of the left side of the derived
    /// identity, so they count toward `Δ₊` as the value 1.
    pub fn delta_extremes(&self) -> (i64, i64) {
        let d = self.deltas();
        let ones = if self.ones > 0 { 1 } else { 0 };
        let plus = d.iter().copied().filter(|&x| x > 0).max().unwrap_or(0).max(ones);
        let minus = d.iter().copied().filter(|&x| x < 0).map(|x| -x).max().unwrap_or(0);
        (plus, minus)
    }
}

impl std::fmt::Display for PartitionIdentity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut lhs: Vec<String> = self.left.iter().map(u64::to_string).collect();
        lhs.extend((0..self.ones).map(|_| "1".to_string()));
        let rhs: Vec<String> = self.right.iter().map(u64::to_string).collect();
        let side = |v: &[String]| if v.is_empty() { "0".to_string() } else { v.join(" + ") };
        write!(f, "{} = {}", side(&lhs), side(&rhs))
    }
}

/// Whether some `y ⊑ x` other than `0` and `x` lies in `ker(A)`.
fn has_proper_kernel_part(a: &IntMatrix, x: &LatticeVector) -> bool {
    let bounds: Vec<i64> = x.coords().iter().map(|c| c.to_i64().unwrap_or(0)).collect();
    let mut y = vec![0i64; bounds.len()];
    loop {
        let mut k = 0;
        while k < y.len() {
            if y[k] != bounds[k] {
                y[k] += bounds[k].signum();
                break;
            }
            y[k] = 0;
            k += 1;
        }
        if k == y.len() {
            return false;
        }
        if y != bounds && a.annihilates(&LatticeVector::from_i64(&y)) {
            return true;
        }
    }
}

/// Reads `x ∈ ker(A_n)` with `x_{n+1} ≥ 0` as a partition identity: `x_t`
/// counts left parts equal to `t` minus right parts equal to `t`, and
/// `l = x_{n+1}`.
pub fn ppi_from_kernel(x: &LatticeVector, n: usize) -> Result<PartitionIdentity> {
    let a = partition_matrix(n)?;
    if x.len() != n + 1 {
        return Err(Error::dim(format!("vector has length {}, expected {}", x.len(), n + 1)));
    }
    if !a.annihilates(x) {
        return Err(Error::pre("vector is not in the kernel of A_n"));
    }
    if x[n].is_negative() {
        return Err(Error::pre("the last coordinate must be nonnegative"));
    }
    let count = |v: &BigInt| v.abs().to_u64().ok_or_else(|| Error::pre("part count too large"));
    let (mut left, mut right) = (Vec::new(), Vec::new());
    for t in 0..n {
        let c = count(&x[t])?;
        let side = if x[t].is_positive() { &mut left } else { &mut right };
        side.extend(std::iter::repeat_n(t as u64 + 1, c as usize));
    }
    let ones = count(&x[n])?;
    let primitive = !x.is_zero() && !has_proper_kernel_part(&a, x);
    Ok(PartitionIdentity { left, ones, right, primitive })
}

/// Inverse of [`ppi_from_kernel`].
pub fn ppi_to_kernel(p: &PartitionIdentity, n: usize) -> LatticeVector {
    let mut x = vec![BigInt::zero(); n + 1];
    for &t in &p.left {
        x[t as usize - 1] += 1;
    }
    for &t in &p.right {
        x[t as usize - 1] -= 1;
    }
    x[n] = BigInt::from(p.ones);
    LatticeVector::new(x)
}

#[derive(Debug, Clone)]
pub struct PpiReport {
    pub n: usize,
    pub max_norm: BigInt,
    /// `e₁ − (n−1)e_{n−1} + (n−2)e_n`.
    pub tight_witness: LatticeVector,
    pub tight_present: bool,
    /// Identities with `x_{n+1} ≥ 0`, one per Graver pair, with their norms.
    pub identities: Vec<(PartitionIdentity, BigInt)>,
    /// Every identity is primitive, has `‖x‖₁ = 2k + l` and `k + l ≤ Δ₊ + Δ₋`.
    pub identity_checks_hold: bool,
    /// Identities with `Δ₊ + Δ₋ > n − 1`. These are exactly the ones without
    /// a positive `δ`, `1 + l·1 = l + 1`, where the case split on the
    /// positions of `Δ₊` and `Δ₋` has nothing to split on.
    pub delta_exceptions: Vec<PartitionIdentity>,
}

impl PpiReport {
    pub fn norm_bound_holds(&self) -> bool {
        self.max_norm == BigInt::from(2 * (self.n as i64 - 1))
    }

    pub fn delta_bound_holds(&self) -> bool {
        self.delta_exceptions.is_empty()
    }
}

pub fn ppi_verify_bound(n: usize, opts: &GraverOptions) -> Result<PpiReport> {
    if n < 2 {
        return Err(Error::pre("n must be at least 2"));
    }
    let a = partition_matrix(n)?;
    let g = graver_with(&a, opts)?;
    let mut tight = vec![0i64; n + 1];
    tight[0] += 1;
    tight[n - 2] -= n as i64 - 1;
    tight[n - 1] += n as i64 - 2;
    let tight_witness = LatticeVector::from_i64(&tight);
    let tight_present = !tight_witness.is_zero() && g.contains(&tight_witness);
    let mut identities = Vec::with_capacity(g.len());
    let mut identity_checks_hold = true;
    let mut delta_exceptions = Vec::new();
    for e in g.elements() {
        let x = if e[n].is_negative() { e.neg() } else { e.clone() };
        let p = ppi_from_kernel(&x, n)?;
        let norm = x.norm1();
        let (plus, minus) = p.delta_extremes();
        let (k, l) = (p.k() as i64, p.ones as i64);
        identity_checks_hold &= p.primitive && norm == BigInt::from(2 * k + l) && k + l <= plus + minus;
        if plus + minus > n as i64 - 1 {
            delta_exceptions.push(p.clone());
        }
        identities.push((p, norm));
    }
    Ok(PpiReport {
        n,
        max_norm: g.max_norm(),
        tight_witness,
        tight_present,
        identities,
        identity_checks_hold,
        delta_exceptions,
    })
}

#[derive(Debug, Clone)]
pub struct TwoCReport {
    pub c: usize,
    pub max_norm: BigInt,
    /// `ker(1 … 1 0; 0 1 … c 1) = ker(1 … 1 0; 1 2 … c+1 1)`.
    pub kernels_equal: bool,
}

impl TwoCReport {
    pub fn holds(&self) -> bool {
        self.kernels_equal && self.max_norm == BigInt::from(2 * self.c as i64)
    }
}

pub fn verify_2c(c: usize, opts: &GraverOptions) -> Result<TwoCReport> {
    if c == 0 {
        return Err(Error::pre("c must be positive"));
    }
    let m = b_matrix_c(c);
    let shifted = partition_matrix(c + 1)?;
    let kernels_equal = lattice_equal(&kernel_lattice_basis(&m), &kernel_lattice_basis(&shifted))?;
    let max_norm = graver_with(&m, opts)?.max_norm();
    Ok(TwoCReport { c, max_norm, kernels_equal })
}
