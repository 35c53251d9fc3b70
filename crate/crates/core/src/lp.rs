//! Dense two-phase simplex over exact rationals with Bland's rule.
//!
//! Solves `min c·x` subject to `A x = b`, `x ≥ 0`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { x: Vec<BigRational>, value: BigRational },
    Infeasible,
    Unbounded,
}

pub fn rational(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

struct Tableau {
    rows: Vec<Vec<BigRational>>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v = &*v / &p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = &*v - &f * pv;
                }
            }
        }
        self.basis[r] = c;
    }

    fn reduced_costs(&self, cost: &[BigRational], cols: usize) -> Vec<BigRational> {
        (0..cols)
            .map(|j| {
                let mut r = cost[j].clone();
                for (i, row) in self.rows.iter().enumerate() {
                    let cb = &cost[self.basis[i]];
                    if !cb.is_zero() && !row[j].is_zero() {
                        r -= cb * &row[j];
                    }
                }
                r
            })
            .collect()
    }

    /// Runs simplex iterations on the first `cols` columns. Returns false if
    /// the objective is unbounded below.
    fn optimize(&mut self, cost: &[BigRational], cols: usize) -> bool {
        let rhs = self.width - 1;
        loop {
            let reduced = self.reduced_costs(cost, cols);
            // Bland: lowest-index improving column.
            let Some(enter) = (0..cols).find(|&j| reduced[j].is_negative()) else {
                return true;
            };
            let mut leave: Option<(usize, BigRational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[enter].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((l, best)) => ratio < *best || (ratio == *best && self.basis[i] < self.basis[*l]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, _)) = leave else {
                return false;
            };
            self.pivot(r, enter);
        }
    }
}

/// Minimizes `c·x` over `{x ≥ 0 : A x = b}`.
pub fn solve(a: &[Vec<BigRational>], b: &[BigRational], c: &[BigRational]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    let width = n + m + 1;
    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    for (i, ai) in a.iter().enumerate() {
        let flip = b[i].is_negative();
        let mut row: Vec<BigRational> = ai.iter().map(|v| if flip { -v } else { v.clone() }).collect();
        row.extend((0..m).map(|k| if k == i { BigRational::one() } else { BigRational::zero() }));
        row.push(if flip { -&b[i] } else { b[i].clone() });
        rows.push(row);
    }
    let mut t = Tableau { rows, basis: (n..n + m).collect(), width };

    let mut phase1 = vec![BigRational::zero(); n + m];
    for v in &mut phase1[n..] {
        *v = BigRational::one();
    }
    t.optimize(&phase1, n + m);
    let infeasibility: BigRational = (0..m).filter(|&i| t.basis[i] >= n).map(|i| t.rows[i][width - 1].clone()).sum();
    if infeasibility.is_positive() {
        return LpOutcome::Infeasible;
    }
    // Drive remaining artificials out of the basis; drop redundant rows.
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            match (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => t.pivot(i, j),
                None => {
                    t.rows.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }
    for row in t.rows.iter_mut() {
        row.drain(n..n + m);
    }
    t.width = n + 1;

    if !t.optimize(c, n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![BigRational::zero(); n];
    for (i, &j) in t.basis.iter().enumerate() {
        x[j] = t.rows[i][n].clone();
    }
    let value = x.iter().zip(c).map(|(xi, ci)| xi * ci).sum();
    LpOutcome::Optimal { x, value }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(rows: &[&[i64]]) -> Vec<Vec<BigRational>> {
        rows.iter().map(|r| r.iter().map(|&v| rational(v)).collect()).collect()
    }

    fn v(xs: &[i64]) -> Vec<BigRational> {
        xs.iter().map(|&x| rational(x)).collect()
    }

    #[test]
    fn small_optimum() {
        // min -x - y s.t. x + 2y + s1 = 4, 3x + y + s2 = 6.
        let a = q(&[&[1, 2, 1, 0], &[3, 1, 0, 1]]);
        match solve(&a, &v(&[4, 6]), &v(&[-1, -1, 0, 0])) {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(value, -BigRational::new(14.into(), 5.into()));
                assert_eq!(x[0], BigRational::new(8.into(), 5.into()));
                assert_eq!(x[1], BigRational::new(6.into(), 5.into()));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let a = q(&[&[1, 1]]);
        assert_eq!(solve(&a, &v(&[-1]), &v(&[0, 0])), LpOutcome::Infeasible);
        let a = q(&[&[1, -1]]);
        assert_eq!(solve(&a, &v(&[1]), &v(&[-1, 0])), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_rows_are_dropped() {
        let a = q(&[&[1, 1], &[2, 2]]);
        match solve(&a, &v(&[1, 2]), &v(&[1, 2])) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, rational(1)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn degenerate_problem_terminates() {
        // Classic cycling example for Dantzig's rule (Beale).
        let a = vec![
            vec![BigRational::new(1.into(), 4.into()), rational(-8), rational(-1), rational(9), rational(1), rational(0), rational(0)],
            vec![BigRational::new(1.into(), 2.into()), rational(-12), BigRational::new((-1).into(), 2.into()), rational(3), rational(0), rational(1), rational(0)],
            vec![rational(0), rational(0), rational(1), rational(0), rational(0), rational(0), rational(1)],
        ];
        let c = vec![BigRational::new((-3).into(), 4.into()), rational(20), BigRational::new((-1).into(), 2.into()), rational(6), rational(0), rational(0), rational(0)];
        match solve(&a, &v(&[0, 0, 1]), &c) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, BigRational::new((-5).into(), 4.into())),
            other => panic!("{other:?}"),
        }
    }
}
