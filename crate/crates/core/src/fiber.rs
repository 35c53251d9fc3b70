//! Lattice-point fibers `{y ∈ Z^n_{≥0} : Ay = b}`, edge tests on their convex
//! hulls, and with them membership in the universal Gröbner basis.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::linalg::{IntMatrix, LatticeVector};
use crate::lp::{self, LpOutcome};

/// A complete, sorted, duplicate-free list of the points of one fiber.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fiber {
    matrix: IntMatrix,
    rhs: LatticeVector,
    points: Vec<LatticeVector>,
}

impl Fiber {
    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn rhs(&self) -> &LatticeVector {
        &self.rhs
    }

    /// Points in lexicographic order.
    pub fn points(&self) -> &[LatticeVector] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, y: &LatticeVector) -> bool {
        self.points.binary_search(y).is_ok()
    }

    /// Minimum of `c` over the fiber and the points attaining it.
    pub fn minimizers(&self, c: &[BigRational]) -> Option<(BigRational, Vec<LatticeVector>)> {
        let mut best: Option<(BigRational, Vec<LatticeVector>)> = None;
        for y in &self.points {
            let v = evaluate(c, y);
            match &mut best {
                Some((b, pts)) if v == *b => pts.push(y.clone()),
                Some((b, _)) if v > *b => {}
                _ => best = Some((v, vec![y.clone()])),
            }
        }
        best
    }

    /// The points whose coordinates in `zero` all vanish.
    pub fn restrict_to_zero(&self, zero: &[usize]) -> Vec<LatticeVector> {
        self.points.iter().filter(|y| zero.iter().all(|&j| y[j].is_zero())).cloned().collect()
    }
}

/// Proof that `conv{u, w}` is an edge: `c·y ≥ value` on the fiber with
/// equality exactly on `tight_set`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeCertificate {
    pub functional: Vec<BigRational>,
    pub value: BigRational,
    pub tight_set: Vec<LatticeVector>,
}

pub fn evaluate(c: &[BigRational], y: &LatticeVector) -> BigRational {
    c.iter()
        .zip(y.coords())
        .filter(|(_, x)| !x.is_zero())
        .map(|(ci, x)| ci * BigRational::from_integer(x.clone()))
        .sum()
}

/// An integer row combination `Y` with `YᵀA ≥ 1` componentwise, if any.
///
/// Such a `Y` exists exactly when `ker(A) ∩ R^n_{≥0} = {0}`, and then
/// `(YᵀA)·y = Y·b` bounds every fiber coordinate.
pub fn pointed_weight(a: &IntMatrix) -> Option<Vec<BigInt>> {
    let (d, n) = (a.rows(), a.cols());
    // Columns: Y⁺ (d), Y⁻ (d), surplus (n). Row j: (Y⁺ − Y⁻)·A_j − s_j = 1.
    let rows: Vec<Vec<BigRational>> = (0..n)
        .map(|j| {
            let mut row = vec![BigRational::zero(); 2 * d + n];
            for i in 0..d {
                let v = BigRational::from_integer(a.get(i, j).clone());
                row[d + i] = -v.clone();
                row[i] = v;
            }
            row[2 * d + j] = -BigRational::one();
            row
        })
        .collect();
    let rhs = vec![BigRational::one(); n];
    let LpOutcome::Optimal { x, .. } = lp::solve(&rows, &rhs, &vec![BigRational::zero(); 2 * d + n]) else {
        return None;
    };
    let y: Vec<BigRational> = (0..d).map(|i| &x[i] - &x[d + i]).collect();
    let denom = y.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    Some(y.iter().map(|v| (v * BigRational::from_integer(denom.clone())).to_integer()).collect())
}

pub fn is_pointed(a: &IntMatrix) -> bool {
    pointed_weight(a).is_some()
}

fn small(x: &BigInt) -> Result<i128> {
    x.to_i64()
        .map(i128::from)
        .ok_or_else(|| Error::pre("fiber data must fit in 64-bit integers"))
}

fn overflow() -> Error {
    Error::pre("fiber search overflowed 128-bit arithmetic")
}

struct Search {
    /// Columns in search order.
    cols: Vec<Vec<i128>>,
    weight: Vec<i128>,
    order: Vec<usize>,
    m: usize,
    cap: usize,
    z: Vec<i128>,
    out: Vec<LatticeVector>,
}

impl Search {
    fn record(&mut self) -> Result<()> {
        if self.out.len() >= self.cap {
            return Err(Error::CapExceeded { cap: "max-fiber", limit: self.cap as u64 });
        }
        let mut y = vec![BigInt::zero(); self.order.len()];
        for (k, &j) in self.order.iter().enumerate() {
            y[j] = BigInt::from(self.z[k]);
        }
        self.out.push(LatticeVector::new(y));
        Ok(())
    }

    /// Whether each residual lies in the range the remaining variables can
    /// still produce.
    fn feasible(&self, depth: usize, resid: &[i128], budget: i128) -> bool {
        (0..self.m).all(|i| {
            let (mut lo, mut hi) = (0i128, 0i128);
            for k in depth..self.cols.len() {
                let a = self.cols[k][i];
                let reach = a.saturating_mul(budget / self.weight[k]);
                if a > 0 {
                    hi = hi.saturating_add(reach);
                } else {
                    lo = lo.saturating_add(reach);
                }
            }
            lo <= resid[i] && resid[i] <= hi
        })
    }

    fn dfs(&mut self, depth: usize, resid: &mut [i128], budget: i128) -> Result<()> {
        if !self.feasible(depth, resid, budget) {
            return Ok(());
        }
        let col = self.cols[depth].clone();
        let bound = budget / self.weight[depth];
        if depth + 1 == self.cols.len() {
            // The last value is forced by any row with a nonzero entry.
            let i = col.iter().position(|&a| a != 0).expect("pointed matrices have no zero column");
            if resid[i] % col[i] != 0 {
                return Ok(());
            }
            let v = resid[i] / col[i];
            if v < 0 || v > bound || (0..self.m).any(|r| col[r] * v != resid[r]) {
                return Ok(());
            }
            self.z[depth] = v;
            return self.record();
        }
        for v in 0..=bound {
            self.z[depth] = v;
            for i in 0..self.m {
                resid[i] = resid[i].checked_sub(col[i] * v).ok_or_else(overflow)?;
            }
            let r = self.dfs(depth + 1, resid, budget - self.weight[depth] * v);
            for i in 0..self.m {
                resid[i] += col[i] * v;
            }
            r?;
        }
        Ok(())
    }
}

/// Enumerates `{y ≥ 0 : Ay = b}` by depth-first search.
///
/// Variables are visited in order of descending column 1-norm. Each level
/// bounds the remaining variables through the positive weight `YᵀA` and
/// prunes when some row residual leaves the reachable interval.
pub fn fiber_enumerate(a: &IntMatrix, b: &LatticeVector, limits: &Limits) -> Result<Fiber> {
    if b.len() != a.rows() {
        return Err(Error::dim(format!("right-hand side has length {}, matrix has {} rows", b.len(), a.rows())));
    }
    let y = pointed_weight(a).ok_or(Error::NotPointed)?;
    let weight: Vec<BigInt> =
        (0..a.cols()).map(|j| (0..a.rows()).map(|i| &y[i] * a.get(i, j)).sum()).collect();
    let total: BigInt = y.iter().zip(b.coords()).map(|(p, q)| p * q).sum();
    let mut fiber = Fiber { matrix: a.clone(), rhs: b.clone(), points: Vec::new() };
    if total.is_negative() {
        return Ok(fiber);
    }
    let mut order: Vec<usize> = (0..a.cols()).collect();
    let norms: Vec<BigInt> = (0..a.cols()).map(|j| a.column(j).norm1()).collect();
    order.sort_by(|&p, &q| norms[q].cmp(&norms[p]).then(p.cmp(&q)));
    let cols = order
        .iter()
        .map(|&j| (0..a.rows()).map(|i| small(a.get(i, j))).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let weight = order.iter().map(|&j| small(&weight[j])).collect::<Result<Vec<_>>>()?;
    let mut resid = b.coords().iter().map(small).collect::<Result<Vec<_>>>()?;
    let mut search = Search {
        cols,
        weight,
        z: vec![0; order.len()],
        order,
        m: a.rows(),
        cap: limits.max_fiber,
        out: Vec::new(),
    };
    search.dfs(0, &mut resid, small(&total)?)?;
    search.out.sort();
    fiber.points = search.out;
    Ok(fiber)
}

/// Decides whether `conv{z⁺, z⁻}` is an edge of the fiber's convex hull.
///
/// Solves, exactly, for `c ≥ 0` minimizing `Σc` with `c·z = 0` and
/// `c·(y − z⁺) ≥ 1` for every other fiber point `y`. Nonnegativity loses
/// nothing: adding a multiple of the positive weight `YᵀA`, which is constant
/// on the fiber, makes any solution nonnegative. Constraints are generated
/// lazily from the violated points, so tableaux stay small on large fibers.
pub fn edge_test(fiber: &Fiber, z: &LatticeVector) -> Result<Option<EdgeCertificate>> {
    if z.is_zero() {
        return Err(Error::pre("edge test of the zero vector: z⁺ = z⁻ is a single point"));
    }
    let (u, w) = (z.positive_part(), z.negative_part());
    if !fiber.contains(&u) || !fiber.contains(&w) {
        return Err(Error::pre("z⁺ and z⁻ must both be points of the fiber"));
    }
    let n = z.len();
    let mut tight = vec![u.clone(), w.clone()];
    tight.sort();
    let others: Vec<LatticeVector> =
        fiber.points.iter().filter(|y| **y != u && **y != w).map(|y| y.sub(&u)).collect();
    if others.is_empty() {
        return Ok(Some(EdgeCertificate {
            functional: vec![BigRational::zero(); n],
            value: BigRational::zero(),
            tight_set: tight,
        }));
    }
    let batch = (2 * n).max(8);
    let mut by_distance: Vec<usize> = (0..others.len()).collect();
    by_distance.sort_by_key(|&k| others[k].norm1());
    let mut active: Vec<usize> = by_distance.into_iter().take(batch).collect();
    let ints = |v: &LatticeVector| -> Vec<BigRational> {
        v.coords().iter().map(|x| BigRational::from_integer(x.clone())).collect()
    };
    loop {
        let k = active.len();
        let mut rows = Vec::with_capacity(k + 1);
        let mut first = ints(z);
        first.extend(std::iter::repeat_n(BigRational::zero(), k));
        rows.push(first);
        for (r, &idx) in active.iter().enumerate() {
            let mut row = ints(&others[idx]);
            row.extend((0..k).map(|s| if s == r { -BigRational::one() } else { BigRational::zero() }));
            rows.push(row);
        }
        let mut rhs = vec![BigRational::one(); k + 1];
        rhs[0] = BigRational::zero();
        let mut cost = vec![BigRational::one(); n];
        cost.extend(std::iter::repeat_n(BigRational::zero(), k));
        let c = match lp::solve(&rows, &rhs, &cost) {
            LpOutcome::Optimal { mut x, .. } => {
                x.truncate(n);
                x
            }
            LpOutcome::Infeasible => return Ok(None),
            LpOutcome::Unbounded => unreachable!("objective is bounded below by zero"),
        };
        let mut violated: Vec<(BigRational, usize)> = (0..others.len())
            .filter_map(|idx| {
                let v = evaluate(&c, &others[idx]);
                (v < BigRational::one()).then_some((v, idx))
            })
            .collect();
        if violated.is_empty() {
            let value = evaluate(&c, &u);
            return Ok(Some(EdgeCertificate { functional: c, value, tight_set: tight }));
        }
        violated.sort();
        active.extend(violated.into_iter().take(batch).map(|(_, idx)| idx));
    }
}

/// Membership of `z` in the universal Gröbner basis of `A`, decided by the
/// edge test on the fiber through `z⁺`. Returns the certificate when `z` is
/// a member.
pub fn ugb_member(a: &IntMatrix, z: &LatticeVector, limits: &Limits) -> Result<Option<EdgeCertificate>> {
    if z.len() != a.cols() {
        return Err(Error::dim(format!("vector has length {}, matrix has {} columns", z.len(), a.cols())));
    }
    if z.is_zero() {
        return Err(Error::pre("the zero vector has a single-point fiber and no edge"));
    }
    if !a.annihilates(z) {
        return Err(Error::pre("vector is not in the kernel"));
    }
    let b = LatticeVector::new(a.mul_vec(z.positive_part().coords())?);
    let fiber = fiber_enumerate(a, &b, limits)?;
    edge_test(&fiber, z)
}

/// Whether `c·y ≥ c·expected[0]` on the fiber with equality exactly on the
/// two expected points.
pub fn verify_inequality_certificate(fiber: &Fiber, c: &[BigRational], expected: &[LatticeVector; 2]) -> bool {
    if expected[0] == expected[1] || !fiber.contains(&expected[0]) || !fiber.contains(&expected[1]) {
        return false;
    }
    let gamma = evaluate(c, &expected[0]);
    fiber.points.iter().all(|y| {
        let v = evaluate(c, y);
        if expected.contains(y) {
            v == gamma
        } else {
            v > gamma
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graver::graver;

    fn lv(x: &[i64]) -> LatticeVector {
        LatticeVector::from_i64(x)
    }

    fn q(x: &[i64]) -> Vec<BigRational> {
        x.iter().map(|&v| lp::rational(v)).collect()
    }

    fn a12() -> IntMatrix {
        IntMatrix::from_rows(&[[1, 1, 1, 1], [0, 1, 2, 3]]).unwrap()
    }

    /// Box enumeration of a fiber, bounded by the first row when it is
    /// positive.
    fn brute_fiber(a: &IntMatrix, b: &[i64], bound: i64) -> Vec<LatticeVector> {
        let n = a.cols();
        let mut out = Vec::new();
        let mut y = vec![0i64; n];
        'outer: loop {
            let v = lv(&y);
            if a.mul_vec(v.coords()).unwrap() == lv(b).into_coords() {
                out.push(v);
            }
            for k in 0..n {
                if y[k] < bound {
                    y[k] += 1;
                    continue 'outer;
                }
                y[k] = 0;
            }
            break;
        }
        out.sort();
        out
    }

    #[test]
    fn twisted_cubic_fiber() {
        let f = fiber_enumerate(&a12(), &lv(&[3, 3]), &Limits::default()).unwrap();
        assert_eq!(f.points(), &[lv(&[0, 3, 0, 0]), lv(&[1, 1, 1, 0]), lv(&[2, 0, 0, 1])]);
        assert_eq!(f.restrict_to_zero(&[2]), vec![lv(&[0, 3, 0, 0]), lv(&[2, 0, 0, 1])]);
    }

    #[test]
    fn two_point_fiber() {
        let a = IntMatrix::from_rows(&[[1, 1]]).unwrap();
        let f = fiber_enumerate(&a, &lv(&[1]), &Limits::default()).unwrap();
        assert_eq!(f.points(), &[lv(&[0, 1]), lv(&[1, 0])]);
    }

    #[test]
    fn matches_brute_force() {
        let a = IntMatrix::from_rows(&[[1, 2, 1, 0], [0, 1, 3, 2]]).unwrap();
        for b in [[4, 5], [6, 9], [3, 7], [0, 0], [2, 11]] {
            let f = fiber_enumerate(&a, &lv(&b), &Limits::default()).unwrap();
            assert_eq!(f.points(), brute_fiber(&a, &b, 12).as_slice(), "b = {b:?}");
        }
        // Mixed signs, pointed through the second row.
        let a = IntMatrix::from_rows(&[[1, -1, 2], [1, 1, 1]]).unwrap();
        for b in [[0, 4], [3, 5], [-2, 6]] {
            let f = fiber_enumerate(&a, &lv(&b), &Limits::default()).unwrap();
            assert_eq!(f.points(), brute_fiber(&a, &b, 8).as_slice(), "b = {b:?}");
        }
    }

    #[test]
    fn infinite_fiber_is_rejected() {
        let a = IntMatrix::from_rows(&[[1, -1]]).unwrap();
        assert!(!is_pointed(&a));
        assert_eq!(fiber_enumerate(&a, &lv(&[0]), &Limits::default()), Err(Error::NotPointed));
    }

    #[test]
    fn fiber_cap() {
        let a = IntMatrix::from_rows(&[[1, 1, 1]]).unwrap();
        let limits = Limits { max_fiber: 5, ..Default::default() };
        assert!(matches!(fiber_enumerate(&a, &lv(&[3]), &limits), Err(Error::CapExceeded { cap: "max-fiber", .. })));
    }

    #[test]
    fn edge_certificates_on_twisted_cubic() {
        let z = lv(&[-2, 3, 0, -1]);
        let cert = ugb_member(&a12(), &z, &Limits::default()).unwrap().unwrap();
        assert_eq!(cert.functional, q(&[0, 0, 1, 0]));
        assert_eq!(cert.value, lp::rational(0));
        assert_eq!(cert.tight_set, vec![lv(&[0, 3, 0, 0]), lv(&[2, 0, 0, 1])]);
        let f = fiber_enumerate(&a12(), &lv(&[3, 3]), &Limits::default()).unwrap();
        let pair = [z.negative_part(), z.positive_part()];
        assert!(verify_inequality_certificate(&f, &cert.functional, &pair));
        assert!(verify_inequality_certificate(&f, &q(&[0, 0, 1, 0]), &pair));
        assert!(!verify_inequality_certificate(&f, &q(&[1, 0, 0, 0]), &pair));
        assert!(!verify_inequality_certificate(&f, &q(&[0, 0, 0, 0]), &pair));
        // Rescaling the functional keeps the verdict.
        assert!(verify_inequality_certificate(&f, &q(&[0, 0, 7, 0]), &pair));
        assert!(ugb_member(&a12(), &lv(&[1, -2, 1, 0]), &Limits::default()).unwrap().is_some());
    }

    #[test]
    fn triangle_edge_and_non_edge() {
        let a = IntMatrix::from_rows(&[[1, 1, 1]]).unwrap();
        assert!(ugb_member(&a, &lv(&[1, -1, 0]), &Limits::default()).unwrap().is_some());
        // The segment through the middle of a 1-dimensional fiber is no edge.
        let a = IntMatrix::from_rows(&[[1, 1]]).unwrap();
        let f = fiber_enumerate(&a, &lv(&[2]), &Limits::default()).unwrap();
        assert_eq!(edge_test(&f, &lv(&[2, -2])).unwrap(), None);
    }

    #[test]
    fn degenerate_and_foreign_vectors() {
        let a = a12();
        assert!(matches!(ugb_member(&a, &lv(&[0, 0, 0, 0]), &Limits::default()), Err(Error::Precondition(_))));
        assert!(matches!(ugb_member(&a, &lv(&[1, 0, 0, 0]), &Limits::default()), Err(Error::Precondition(_))));
        let f = fiber_enumerate(&a, &lv(&[3, 3]), &Limits::default()).unwrap();
        assert!(matches!(edge_test(&f, &lv(&[1, -2, 1, 0])), Err(Error::Precondition(_))));
    }

    #[test]
    fn members_are_graver_elements() {
        let a = IntMatrix::from_rows(&[[1, 1, 1, 1], [0, 1, 3, 4]]).unwrap();
        let g = graver(&a).unwrap();
        for e in g.elements() {
            if let Some(cert) = ugb_member(&a, e, &Limits::default()).unwrap() {
                let f = fiber_enumerate(&a, &LatticeVector::new(a.mul_vec(e.positive_part().coords()).unwrap()), &Limits::default()).unwrap();
                assert!(verify_inequality_certificate(&f, &cert.functional, &[e.positive_part(), e.negative_part()]));
            }
        }
        // A non-primitive kernel vector is never an edge direction.
        let twice = g.elements()[0].scale(&BigInt::from(2));
        assert_eq!(ugb_member(&a, &twice, &Limits::default()).unwrap(), None);
    }
}
