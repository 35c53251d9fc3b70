//! Higher Lawrence liftings `A^(N)`, layered vectors, minimal relations and
//! the witnesses built from them.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fiber::{fiber_enumerate, EdgeCertificate};
use crate::limits::Limits;
use crate::linalg::{IntMatrix, LatticeVector};

/// `A^(N)`: `N` copies of `I_n` side by side over `N` diagonal copies of
/// `A`, shape `(n + dN) × nN`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawrenceLift {
    base: IntMatrix,
    copies: usize,
    matrix: IntMatrix,
}

impl LawrenceLift {
    pub fn base(&self) -> &IntMatrix {
        &self.base
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// `A^(N) x = 0` holds iff the layers sum to zero and each lies in
    /// `ker(A)`.
    pub fn annihilates(&self, x: &LayeredVector) -> bool {
        x.width() == self.base.cols()
            && x.len() == self.copies
            && x.layers.iter().all(|l| self.base.annihilates(l))
            && x.layer_sum().is_zero()
    }
}

pub fn lawrence_lift(a: &IntMatrix, copies: usize) -> Result<LawrenceLift> {
    if copies == 0 {
        return Err(Error::pre("a Lawrence lifting needs at least one copy"));
    }
    let (d, n) = (a.rows(), a.cols());
    let mut m = IntMatrix::zeros(n + d * copies, n * copies)?;
    for k in 0..copies {
        for j in 0..n {
            m.set(j, k * n + j, BigInt::one());
        }
        for i in 0..d {
            for j in 0..n {
                m.set(n + k * d + i, k * n + j, a.get(i, j).clone());
            }
        }
    }
    Ok(LawrenceLift { base: a.clone(), copies, matrix: m })
}

/// A vector of `Z^{nN}` seen as `N` layers of width `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LayeredVector {
    width: usize,
    layers: Vec<LatticeVector>,
}

impl LayeredVector {
    pub fn new(width: usize, layers: Vec<LatticeVector>) -> Result<Self> {
        if let Some(l) = layers.iter().find(|l| l.len() != width) {
            return Err(Error::dim(format!("layer of length {} in a width-{width} vector", l.len())));
        }
        Ok(LayeredVector { width, layers })
    }

    pub fn from_flat(v: &LatticeVector, width: usize) -> Result<Self> {
        if width == 0 || !v.len().is_multiple_of(width) {
            return Err(Error::dim(format!("length {} is not a multiple of {width}", v.len())));
        }
        let layers = v.coords().chunks(width).map(|c| LatticeVector::new(c.to_vec())).collect();
        Ok(LayeredVector { width, layers })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    pub fn layers(&self) -> &[LatticeVector] {
        &self.layers
    }

    /// Number of nonzero layers.
    pub fn type_of(&self) -> usize {
        self.layers.iter().filter(|l| !l.is_zero()).count()
    }

    pub fn layer_sum(&self) -> LatticeVector {
        self.layers.iter().fold(LatticeVector::zero(self.width), |acc, l| acc.add(l))
    }

    pub fn flatten(&self) -> LatticeVector {
        LatticeVector::new(self.layers.iter().flat_map(|l| l.coords().iter().cloned()).collect())
    }

    /// The same vector padded with zero layers up to `copies` layers.
    pub fn padded(&self, copies: usize) -> LayeredVector {
        let mut layers = self.layers.clone();
        layers.resize(copies.max(layers.len()), LatticeVector::zero(self.width));
        LayeredVector { width: self.width, layers }
    }

    pub fn positive_part(&self) -> LayeredVector {
        LayeredVector { width: self.width, layers: self.layers.iter().map(LatticeVector::positive_part).collect() }
    }

    pub fn negative_part(&self) -> LayeredVector {
        LayeredVector { width: self.width, layers: self.layers.iter().map(LatticeVector::negative_part).collect() }
    }
}

/// Nonnegative integer relation `Σ λᵢ gᵢ = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    generators: Vec<LatticeVector>,
    lambda: Vec<u64>,
}

impl Relation {
    pub fn new(generators: Vec<LatticeVector>, lambda: Vec<u64>) -> Result<Self> {
        if generators.len() != lambda.len() {
            return Err(Error::dim(format!("{} generators but {} multiplicities", generators.len(), lambda.len())));
        }
        let n = generators.first().map_or(0, LatticeVector::len);
        if generators.iter().any(|g| g.len() != n) {
            return Err(Error::dim("generators of different lengths"));
        }
        let rel = Relation { generators, lambda };
        if !rel.sum().is_zero() {
            return Err(Error::Verification(format!("relation does not sum to zero: {}", rel.sum())));
        }
        Ok(rel)
    }

    pub fn generators(&self) -> &[LatticeVector] {
        &self.generators
    }

    pub fn lambda(&self) -> &[u64] {
        &self.lambda
    }

    fn sum(&self) -> LatticeVector {
        combination(&self.generators, &self.lambda)
    }

    /// `‖λ‖₁`, the number of layers of the witness.
    pub fn total(&self) -> u64 {
        self.lambda.iter().sum()
    }

    /// `|supp(λ)|`.
    pub fn support_size(&self) -> usize {
        self.lambda.iter().filter(|&&l| l > 0).count()
    }

    /// `Π(λᵢ + 1)`, the size of the box searched for a sub-relation.
    pub fn search_space(&self) -> u128 {
        self.lambda.iter().map(|&l| u128::from(l) + 1).product()
    }
}

fn combination(generators: &[LatticeVector], mu: &[u64]) -> LatticeVector {
    let n = generators.first().map_or(0, LatticeVector::len);
    generators
        .iter()
        .zip(mu)
        .filter(|(_, &m)| m > 0)
        .fold(LatticeVector::zero(n), |acc, (g, &m)| acc.add(&g.scale(&BigInt::from(m))))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Minimality {
    Minimal,
    /// A proper sub-relation `0 ≠ μ ≤ λ`, `μ ≠ λ`, with `Σ μᵢ gᵢ = 0`.
    Decomposable(Vec<u64>),
}

impl Minimality {
    pub fn is_minimal(&self) -> bool {
        matches!(self, Minimality::Minimal)
    }
}

struct SubRelationSearch<'a> {
    gens: Vec<Vec<i128>>,
    lambda: &'a [u64],
    /// Per coordinate, the range the generators from index `k` on can add.
    lo: Vec<Vec<i128>>,
    hi: Vec<Vec<i128>>,
    mu: Vec<u64>,
}

impl SubRelationSearch<'_> {
    fn dfs(&mut self, k: usize, partial: &mut [i128]) -> bool {
        let reachable = partial.iter().enumerate().all(|(j, &p)| p + self.lo[k][j] <= 0 && 0 <= p + self.hi[k][j]);
        if !reachable {
            return false;
        }
        if k == self.gens.len() {
            let trivial = self.mu.iter().all(|&m| m == 0) || self.mu.as_slice() == self.lambda;
            return !trivial;
        }
        for m in 0..=self.lambda[k] {
            self.mu[k] = m;
            let step = m as i128;
            for (p, g) in partial.iter_mut().zip(&self.gens[k]) {
                *p += step * g;
            }
            let found = self.dfs(k + 1, partial);
            for (p, g) in partial.iter_mut().zip(&self.gens[k]) {
                *p -= step * g;
            }
            if found {
                return true;
            }
        }
        self.mu[k] = 0;
        false
    }
}

/// Decides minimality by searching the box `0 ≤ μ ≤ λ` depth first, cutting
/// branches whose partial sum can no longer return to zero.
pub fn relation_minimal(rel: &Relation) -> Result<Minimality> {
    let small = |x: &BigInt| x.to_i64().map(i128::from).ok_or_else(|| Error::pre("relation entries must fit in 64 bits"));
    let gens = rel
        .generators
        .iter()
        .map(|g| g.coords().iter().map(small).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let k = gens.len();
    let n = gens.first().map_or(0, Vec::len);
    let mut lo = vec![vec![0i128; n]; k + 1];
    let mut hi = vec![vec![0i128; n]; k + 1];
    for i in (0..k).rev() {
        for j in 0..n {
            let v = gens[i][j] * rel.lambda[i] as i128;
            lo[i][j] = lo[i + 1][j] + v.min(0);
            hi[i][j] = hi[i + 1][j] + v.max(0);
        }
    }
    let mut search = SubRelationSearch { gens, lambda: &rel.lambda, lo, hi, mu: vec![0; k] };
    let mut partial = vec![0i128; n];
    Ok(if search.dfs(0, &mut partial) { Minimality::Decomposable(search.mu) } else { Minimality::Minimal })
}

/// Generators in input order, each repeated by its multiplicity. The
/// witness has `‖λ‖₁` layers.
pub fn build_witness(rel: &Relation) -> Result<LayeredVector> {
    if let Minimality::Decomposable(mu) = relation_minimal(rel)? {
        return Err(Error::pre(format!("relation is not minimal, sub-relation {mu:?}")));
    }
    let width = rel.generators.first().map_or(0, LatticeVector::len);
    let layers = rel
        .generators
        .iter()
        .zip(&rel.lambda)
        .flat_map(|(g, &l)| std::iter::repeat_n(g.clone(), l as usize))
        .collect();
    LayeredVector::new(width, layers)
}

/// Concatenates `λᵢ` copies of each generator's edge functional, in the
/// witness arrangement. Returns the functional and its value on the witness.
pub fn lemma_certificate(rel: &Relation, certs: &[Option<EdgeCertificate>]) -> Result<(Vec<BigRational>, BigRational)> {
    if certs.len() != rel.generators.len() {
        return Err(Error::dim(format!("{} certificates for {} generators", certs.len(), rel.generators.len())));
    }
    let mut c = Vec::new();
    let mut value = BigRational::zero();
    for (i, &l) in rel.lambda.iter().enumerate() {
        if l == 0 {
            continue;
        }
        let cert = certs[i].as_ref().ok_or_else(|| Error::pre(format!("generator {i} has no edge certificate")))?;
        for _ in 0..l {
            c.extend(cert.functional.iter().cloned());
        }
        value += &cert.value * BigRational::from_integer(BigInt::from(l));
    }
    Ok((c, value))
}

/// Minimum of a functional over a lifted fiber.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceMinimizers {
    pub value: BigRational,
    pub count: BigUint,
    /// At most the requested number of minimizers, in deterministic order.
    pub minimizers: Vec<LayeredVector>,
}

struct State {
    cost: i128,
    count: BigUint,
    /// Predecessor state and layer point attaining the minimum, at most
    /// `cap` of them: each extends to at least one minimizer.
    preds: Vec<(u32, u32)>,
}

fn scale_to_integers(c: &[BigRational]) -> Result<(Vec<i128>, BigInt)> {
    let denom = c.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let ints = c
        .iter()
        .map(|v| (v * BigRational::from_integer(denom.clone())).to_integer().to_i64().map(i128::from))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::pre("scaled functional exceeds 64-bit range"))?;
    Ok((ints, denom))
}

/// Exact minimum of `c` over `{z ≥ 0 : A^(N) z = b}`, the number of
/// minimizers and up to `cap` of them.
///
/// Layers are folded one at a time. The state after `k` layers is the
/// partial layer sum, kept only while the remaining layers can still make
/// up the difference to the total coordinate by coordinate.
pub fn lifted_face_minimizers(
    lift: &LawrenceLift,
    b: &LatticeVector,
    c: &[BigRational],
    cap: usize,
    limits: &Limits,
) -> Result<FaceMinimizers> {
    let (a, n, copies) = (&lift.base, lift.base.cols(), lift.copies);
    let d = a.rows();
    if b.len() != n + d * copies || c.len() != n * copies {
        return Err(Error::dim("right-hand side or functional does not match the lifting"));
    }
    let to_i64 = |x: &BigInt| x.to_i64().ok_or_else(|| Error::pre("fiber data must fit in 64 bits"));
    let total: Vec<i64> = b.coords()[..n].iter().map(to_i64).collect::<Result<_>>()?;
    let (costs, denom) = scale_to_integers(c)?;

    let mut fibers: Vec<Vec<Vec<i64>>> = Vec::with_capacity(copies);
    for k in 0..copies {
        let bk = LatticeVector::new(b.coords()[n + k * d..n + (k + 1) * d].to_vec());
        let f = fiber_enumerate(a, &bk, limits)?;
        let pts = f
            .points()
            .iter()
            .map(|p| p.coords().iter().map(to_i64).collect::<Result<Vec<_>>>())
            .filter(|p| p.as_ref().map_or(true, |p| p.iter().zip(&total).all(|(x, t)| x <= t)))
            .collect::<Result<Vec<_>>>()?;
        fibers.push(pts);
    }
    // Componentwise range the layers after `k` can add.
    let mut rest_lo = vec![vec![0i64; n]; copies + 1];
    let mut rest_hi = vec![vec![0i64; n]; copies + 1];
    for k in (0..copies).rev() {
        for j in 0..n {
            let col = fibers[k].iter().map(|p| p[j]);
            rest_lo[k][j] = rest_lo[k + 1][j] + col.clone().min().unwrap_or(0);
            rest_hi[k][j] = rest_hi[k + 1][j] + col.max().unwrap_or(0);
        }
    }
    let empty = FaceMinimizers { value: BigRational::zero(), count: BigUint::zero(), minimizers: Vec::new() };
    if fibers.iter().any(Vec::is_empty) {
        return Ok(empty);
    }

    let mut keys: Vec<Vec<Vec<i64>>> = vec![vec![vec![0; n]]];
    let mut states: Vec<Vec<State>> = vec![vec![State { cost: 0, count: BigUint::one(), preds: Vec::new() }]];
    for k in 0..copies {
        let layer_cost: Vec<i128> = fibers[k]
            .iter()
            .map(|p| p.iter().zip(&costs[k * n..(k + 1) * n]).map(|(&x, &ci)| i128::from(x) * ci).sum())
            .collect();
        let (lo, hi) = (&rest_lo[k + 1], &rest_hi[k + 1]);
        let prev_keys = &keys[k];
        let prev = &states[k];
        let moves: Vec<Vec<(Vec<i64>, i128, u32)>> = prev_keys
            .par_iter()
            .enumerate()
            .map(|(s, key)| {
                fibers[k]
                    .iter()
                    .enumerate()
                    .filter_map(|(pi, p)| {
                        let next: Vec<i64> = key.iter().zip(p).map(|(x, y)| x + y).collect();
                        let ok = (0..n).all(|j| next[j] + lo[j] <= total[j] && total[j] <= next[j] + hi[j]);
                        ok.then(|| (next, prev[s].cost + layer_cost[pi], pi as u32))
                    })
                    .collect()
            })
            .collect();
        let mut index: HashMap<Vec<i64>, u32> = HashMap::new();
        let mut next_keys = Vec::new();
        let mut next_states: Vec<State> = Vec::new();
        for (s, list) in moves.into_iter().enumerate() {
            for (key, cost, pi) in list {
                let pred = (s as u32, pi);
                match index.get(&key) {
                    Some(&id) => {
                        let st = &mut next_states[id as usize];
                        if cost < st.cost {
                            st.cost = cost;
                            st.count = prev[s].count.clone();
                            st.preds = vec![pred];
                        } else if cost == st.cost {
                            st.count += &prev[s].count;
                            if st.preds.len() < cap {
                                st.preds.push(pred);
                            }
                        }
                    }
                    None => {
                        if next_states.len() >= limits.max_states {
                            return Err(Error::CapExceeded { cap: "max-states", limit: limits.max_states as u64 });
                        }
                        index.insert(key.clone(), next_states.len() as u32);
                        next_keys.push(key);
                        let preds = if cap > 0 { vec![pred] } else { Vec::new() };
                        next_states.push(State { cost, count: prev[s].count.clone(), preds });
                    }
                }
            }
        }
        keys.push(next_keys);
        states.push(next_states);
    }
    let Some(end) = keys[copies].iter().position(|k| *k == total) else {
        return Ok(empty);
    };
    let last = &states[copies][end];
    let value = BigRational::new(BigInt::from(last.cost), denom);

    let mut minimizers = Vec::new();
    let mut path: Vec<u32> = Vec::with_capacity(copies);
    collect_paths(&states, &fibers, copies, end as u32, &mut path, cap, &mut minimizers);
    let minimizers = minimizers
        .into_iter()
        .map(|layers| LayeredVector {
            width: n,
            layers: layers.iter().map(|p| LatticeVector::from_i64(p)).collect(),
        })
        .collect();
    Ok(FaceMinimizers { value, count: last.count.clone(), minimizers })
}

fn collect_paths(
    states: &[Vec<State>],
    fibers: &[Vec<Vec<i64>>],
    k: usize,
    s: u32,
    path: &mut Vec<u32>,
    cap: usize,
    out: &mut Vec<Vec<Vec<i64>>>,
) {
    if out.len() >= cap {
        return;
    }
    if k == 0 {
        out.push(path.iter().rev().enumerate().map(|(layer, &pi)| fibers[layer][pi as usize].clone()).collect());
        return;
    }
    for &(prev, pi) in &states[k][s as usize].preds {
        path.push(pi);
        collect_paths(states, fibers, k - 1, prev, path, cap, out);
        path.pop();
    }
}

/// Right-hand side `A^(N) x⁺` of the fiber through a layered vector.
pub fn lifted_rhs(lift: &LawrenceLift, x: &LayeredVector) -> Result<LatticeVector> {
    Ok(LatticeVector::new(lift.matrix.mul_vec(x.positive_part().flatten().coords())?))
}
