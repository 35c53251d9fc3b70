//! Term orders and reduced Gröbner bases of toric ideals in vector form.
//!
//! An oriented kernel vector `u` stands for the binomial `x^{u⁺} − x^{u⁻}`
//! with leading term `x^{u⁺}`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::fiber::{evaluate, is_pointed};
use crate::graver::{graver_with, GraverOptions};
use crate::limits::Limits;
use crate::linalg::{IntMatrix, LatticeVector};

/// Tie-break order applied when costs agree. The permutation lists
/// variables from most to least significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tiebreak {
    /// Larger exponent at the first differing variable wins.
    Lex(Vec<usize>),
    /// Higher total degree wins; otherwise the last differing variable
    /// decides and the smaller exponent there wins.
    DegRevLex(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermOrder {
    cost: Vec<BigRational>,
    tiebreak: Tiebreak,
}

fn is_permutation(p: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    p.len() == n && p.iter().all(|&i| i < n && !std::mem::replace(&mut seen[i], true))
}

impl TermOrder {
    /// Cost vector plus tie-break. Negative costs are allowed: on a pointed
    /// matrix only monomials of one fiber are ever compared, and adding a
    /// positive multiple of a fiber-constant weight makes any cost positive
    /// without changing such comparisons.
    pub fn new(cost: Vec<BigRational>, tiebreak: Tiebreak) -> Result<Self> {
        let n = cost.len();
        let perm = match &tiebreak {
            Tiebreak::Lex(p) | Tiebreak::DegRevLex(p) => p,
        };
        if !is_permutation(perm, n) {
            return Err(Error::dim(format!("tie-break is not a permutation of {n} variables")));
        }
        Ok(TermOrder { cost, tiebreak })
    }

    pub fn from_costs(cost: &[i64], tiebreak: Tiebreak) -> Result<Self> {
        TermOrder::new(cost.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect(), tiebreak)
    }

    pub fn lex(n: usize) -> Self {
        TermOrder { cost: vec![BigRational::zero(); n], tiebreak: Tiebreak::Lex((0..n).collect()) }
    }

    pub fn degrevlex(n: usize) -> Self {
        TermOrder { cost: vec![BigRational::zero(); n], tiebreak: Tiebreak::DegRevLex((0..n).collect()) }
    }

    /// Random integer costs in `[0, 100]^n` refined by degrevlex.
    pub fn random_generic<R: Rng>(n: usize, rng: &mut R) -> Self {
        let cost: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=100)).collect();
        TermOrder::from_costs(&cost, Tiebreak::DegRevLex((0..n).collect())).expect("identity permutation")
    }

    pub fn len(&self) -> usize {
        self.cost.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cost.is_empty()
    }

    pub fn cost(&self) -> &[BigRational] {
        &self.cost
    }

    pub fn tiebreak(&self) -> &Tiebreak {
        &self.tiebreak
    }

    /// Compares the monomials `x^u` and `x^v`.
    pub fn compare(&self, u: &LatticeVector, v: &LatticeVector) -> Ordering {
        let diff = u.sub(v);
        let by_cost = evaluate(&self.cost, &diff);
        if !by_cost.is_zero() {
            return if by_cost.is_positive() { Ordering::Greater } else { Ordering::Less };
        }
        match &self.tiebreak {
            Tiebreak::Lex(p) => p.iter().map(|&i| u[i].cmp(&v[i])).find(|o| o.is_ne()).unwrap_or(Ordering::Equal),
            Tiebreak::DegRevLex(p) => {
                let deg: BigInt = diff.coords().iter().sum();
                if !deg.is_zero() {
                    return if deg.is_positive() { Ordering::Greater } else { Ordering::Less };
                }
                p.iter().rev().map(|&i| v[i].cmp(&u[i])).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
            }
        }
    }
}

/// Returns `z` or `−z`, whichever has the larger positive-part monomial.
pub fn orient(z: &LatticeVector, ord: &TermOrder) -> Result<LatticeVector> {
    if z.is_zero() {
        return Err(Error::pre("cannot orient the zero vector"));
    }
    if z.len() != ord.len() {
        return Err(Error::dim(format!("vector has length {}, order has {} variables", z.len(), ord.len())));
    }
    Ok(match ord.compare(&z.positive_part(), &z.negative_part()) {
        Ordering::Less => z.neg(),
        _ => z.clone(),
    })
}

/// Reduced Gröbner basis of the toric ideal of a matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerBasis {
    matrix: IntMatrix,
    order: TermOrder,
    elements: Vec<LatticeVector>,
    reduced: bool,
    minimal: bool,
}

impl GroebnerBasis {
    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn order(&self) -> &TermOrder {
        &self.order
    }

    /// Oriented elements sorted by 1-norm, then lexicographically.
    pub fn elements(&self) -> &[LatticeVector] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn is_minimal(&self) -> bool {
        self.minimal
    }
}

fn divides(g: &LatticeVector, m: &LatticeVector) -> bool {
    g.coords().iter().zip(m.coords()).all(|(a, b)| !a.is_positive() || a <= b)
}

/// Normal form of the monomial `m` modulo the oriented set `basis`.
fn reduce_monomial(m: &LatticeVector, basis: &[LatticeVector]) -> LatticeVector {
    let mut m = m.clone();
    while let Some(g) = basis.iter().find(|g| divides(g, &m)) {
        m = m.sub(g);
    }
    m
}

/// `{m − NF(m)}` over the minimal leading terms of an oriented Gröbner basis:
/// the unique reduced basis of the same ideal.
fn interreduce(basis: &[LatticeVector], ord: &TermOrder) -> Vec<LatticeVector> {
    let mut leads: Vec<LatticeVector> = basis.iter().map(LatticeVector::positive_part).collect();
    leads.sort();
    leads.dedup();
    let minimal: Vec<&LatticeVector> =
        leads.iter().filter(|m| !leads.iter().any(|o| o != *m && divides(o, m))).collect();
    let mut out: Vec<LatticeVector> = minimal.into_iter().map(|m| m.sub(&reduce_monomial(m, basis))).collect();
    debug_assert!(out.iter().all(|g| orient(g, ord).as_ref() == Ok(g)));
    out.sort_by(|a, b| a.norm_lex_cmp(b));
    out
}

/// Nonzero S-vector remainders of the oriented set, skipping pairs whose
/// leading terms are coprime.
fn s_remainders(basis: &[LatticeVector], ord: &TermOrder) -> Result<Vec<LatticeVector>> {
    let leads: Vec<LatticeVector> = basis.iter().map(LatticeVector::positive_part).collect();
    let mut extra = Vec::new();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let coprime = leads[i].coords().iter().zip(leads[j].coords()).all(|(a, b)| a.is_zero() || b.is_zero());
            if coprime {
                continue;
            }
            let lcm = LatticeVector::new(
                leads[i].coords().iter().zip(leads[j].coords()).map(|(a, b)| a.max(b).clone()).collect(),
            );
            let p = reduce_monomial(&lcm.sub(&basis[i]), basis);
            let q = reduce_monomial(&lcm.sub(&basis[j]), basis);
            if p != q {
                extra.push(orient(&p.sub(&q), ord)?);
            }
        }
    }
    Ok(extra)
}

/// Completes oriented generators of a toric ideal by Buchberger's
/// algorithm and returns the reduced basis.
fn complete(mut basis: Vec<LatticeVector>, ord: &TermOrder, limits: &Limits) -> Result<Vec<LatticeVector>> {
    loop {
        basis = interreduce(&basis, ord);
        let extra = s_remainders(&basis, ord)?;
        if extra.is_empty() {
            return Ok(basis);
        }
        basis.extend(extra);
        if basis.len() > limits.max_elements {
            return Err(Error::CapExceeded { cap: "max-elements", limit: limits.max_elements as u64 });
        }
    }
}

/// The reduced Gröbner basis of `I_A` under `ord`, started from the Graver
/// basis, which generates `I_A` and contains every reduced basis.
pub fn groebner(a: &IntMatrix, ord: &TermOrder, limits: &Limits) -> Result<GroebnerBasis> {
    if ord.len() != a.cols() {
        return Err(Error::dim(format!("order has {} variables, matrix has {} columns", ord.len(), a.cols())));
    }
    if !is_pointed(a) {
        return Err(Error::NotPointed);
    }
    let g = graver_with(a, &GraverOptions { limits: *limits, ..Default::default() })?;
    let start = g.elements().iter().map(|e| orient(e, ord)).collect::<Result<Vec<_>>>()?;
    let elements = complete(start, ord, limits)?;
    Ok(GroebnerBasis { matrix: a.clone(), order: ord.clone(), elements, reduced: true, minimal: true })
}

/// Normal form of the point `z ≥ 0`: the `ord`-minimal point of its fiber.
pub fn normal_form(z: &LatticeVector, gb: &GroebnerBasis) -> Result<LatticeVector> {
    if z.len() != gb.matrix.cols() {
        return Err(Error::dim(format!("point has length {}, matrix has {} columns", z.len(), gb.matrix.cols())));
    }
    if !z.is_nonnegative() {
        return Err(Error::pre("normal form needs a nonnegative point"));
    }
    Ok(reduce_monomial(z, &gb.elements))
}
