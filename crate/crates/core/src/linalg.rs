//! Arbitrary-precision integer matrices, lattice vectors and lattice kernels.
//!
//! Lattices are compared through the row Hermite normal form of a generator
//! matrix: pivots positive, entries above each pivot reduced into
//! `[0, pivot)`, zero rows dropped. Two generating sets span the same lattice
//! exactly when their normal forms are identical.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::dim(format!("matrix must be at least 1x1, got {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(Error::dim(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Self::new(rows, cols, vec![BigInt::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        Ok(m)
    }

    /// Builds a matrix from machine-integer rows.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::dim(format!("row {i} has {} entries, expected {cols}", r.len())));
            }
            data.extend(r.iter().map(|&x| BigInt::from(x)));
        }
        Self::new(rows.len(), cols, data)
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[LatticeVector]) -> Result<Self> {
        let rows = columns.first().map(|c| c.len()).unwrap_or(0);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::dim("columns of differing length"));
        }
        let mut m = Self::zeros(rows, columns.len())?;
        for (j, c) in columns.iter().enumerate() {
            for i in 0..rows {
                m.set(i, j, c[i].clone());
            }
        }
        Ok(m)
    }

    /// Builds a matrix whose rows are the given vectors.
    pub fn from_vectors(rows: &[LatticeVector]) -> Result<Self> {
        let cols = rows.first().map(|c| c.len()).unwrap_or(0);
        if rows.iter().any(|c| c.len() != cols) {
            return Err(Error::dim("rows of differing length"));
        }
        let data = rows.iter().flat_map(|r| r.coords().iter().cloned()).collect();
        Self::new(rows.len(), cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vector(&self, i: usize) -> LatticeVector {
        LatticeVector::new(self.row(i).to_vec())
    }

    pub fn column(&self, j: usize) -> LatticeVector {
        LatticeVector::new((0..self.rows).map(|i| self.get(i, j).clone()).collect())
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        IntMatrix { rows: self.cols, cols: self.rows, data }
    }

    /// Matrix-vector product `A z`.
    pub fn mul_vec(&self, z: &[BigInt]) -> Result<Vec<BigInt>> {
        if z.len() != self.cols {
            return Err(Error::dim(format!(
                "vector of length {} against matrix with {} columns",
                z.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(z).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::dim(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols)?;
        for i in 0..self.rows {
            for j in 0..other.cols {
                let s: BigInt = (0..self.cols).map(|k| self.get(i, k) * other.get(k, j)).sum();
                out.set(i, j, s);
            }
        }
        Ok(out)
    }

    pub fn annihilates(&self, z: &LatticeVector) -> bool {
        self.mul_vec(z.coords()).map(|r| r.iter().all(Zero::is_zero)).unwrap_or(false)
    }

    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<BigInt>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        echelon_rank(rows, self.cols)
    }

    /// Copy with every entry of column `j` negated.
    pub fn with_negated_column(&self, j: usize) -> IntMatrix {
        let mut m = self.clone();
        for i in 0..self.rows {
            let v = -m.get(i, j).clone();
            m.set(i, j, v);
        }
        m
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Element of `Z^n`.
///
/// Ordering is lexicographic on the coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector(Vec<BigInt>);

impl LatticeVector {
    pub fn new(coords: Vec<BigInt>) -> Self {
        LatticeVector(coords)
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        LatticeVector(coords.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero(n: usize) -> Self {
        LatticeVector(vec![BigInt::zero(); n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zero(n);
        v.0[i] = BigInt::one();
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// `z⁺`, the componentwise maximum of `z` and `0`.
    pub fn positive_part(&self) -> LatticeVector {
        LatticeVector(self.0.iter().map(|x| if x.is_positive() { x.clone() } else { BigInt::zero() }).collect())
    }

    /// `z⁻`, so that `z = z⁺ − z⁻`.
    pub fn negative_part(&self) -> LatticeVector {
        LatticeVector(self.0.iter().map(|x| if x.is_negative() { -x } else { BigInt::zero() }).collect())
    }

    pub fn support(&self) -> Vec<usize> {
        self.0.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, _)| i).collect()
    }

    pub fn norm1(&self) -> BigInt {
        self.0.iter().map(|x| x.abs()).sum()
    }

    pub fn norm_inf(&self) -> BigInt {
        self.0.iter().map(|x| x.abs()).max().unwrap_or_default()
    }

    pub fn dot(&self, other: &[BigInt]) -> BigInt {
        self.0.iter().zip(other).map(|(a, b)| a * b).sum()
    }

    pub fn add(&self, other: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: &BigInt) -> LatticeVector {
        LatticeVector(self.0.iter().map(|a| a * k).collect())
    }

    pub fn neg(&self) -> LatticeVector {
        LatticeVector(self.0.iter().map(|a| -a).collect())
    }

    /// The representative of `±z` whose first nonzero coordinate is positive.
    pub fn canonical(&self) -> LatticeVector {
        match self.0.iter().find(|x| !x.is_zero()) {
            Some(x) if x.is_negative() => self.neg(),
            _ => self.clone(),
        }
    }

    pub fn is_canonical(&self) -> bool {
        !matches!(self.0.iter().find(|x| !x.is_zero()), Some(x) if x.is_negative())
    }

    /// Sign-compatible partial order: `self ⊑ other` iff every nonzero
    /// coordinate of `self` has the sign of `other` there and no larger
    /// absolute value.
    pub fn conformal_le(&self, other: &LatticeVector) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| {
            if a.is_zero() {
                true
            } else if a.is_positive() {
                b >= a
            } else {
                b <= a
            }
        })
    }

    /// No coordinate where the two vectors have strictly opposite signs.
    pub fn sign_compatible(&self, other: &LatticeVector) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| (a * b).sign() != num_bigint::Sign::Minus)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|x| !x.is_negative())
    }

    /// Canonical sort key: 1-norm first, then lexicographic coordinates.
    pub fn norm_lex_cmp(&self, other: &LatticeVector) -> Ordering {
        self.norm1().cmp(&other.norm1()).then_with(|| self.0.cmp(&other.0))
    }

    pub fn to_i64(&self) -> Option<Vec<i64>> {
        use num_traits::ToPrimitive;
        self.0.iter().map(|x| x.to_i64()).collect()
    }
}

impl std::ops::Index<usize> for LatticeVector {
    type Output = BigInt;
    fn index(&self, i: usize) -> &BigInt {
        &self.0[i]
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl From<Vec<BigInt>> for LatticeVector {
    fn from(v: Vec<BigInt>) -> Self {
        LatticeVector(v)
    }
}

fn echelon_rank(mut rows: Vec<Vec<BigInt>>, cols: usize) -> usize {
    // Fraction-free elimination; only the zero pattern matters for the rank.
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][c].clone();
        for r in rank + 1..rows.len() {
            if rows[r][c].is_zero() {
                continue;
            }
            let f = rows[r][c].clone();
            for k in c..cols {
                let v = &rows[r][k] * &pivot - &rows[rank][k] * &f;
                rows[r][k] = v;
            }
            let g = rows[r].iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            if !g.is_zero() && !g.is_one() {
                for x in rows[r].iter_mut() {
                    *x = &*x / &g;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Row Hermite normal form of the lattice generated by `rows`.
///
/// Returns the nonzero rows only; the result depends on the generated lattice
/// alone.
pub fn hermite_normal_form(rows: &[Vec<BigInt>], cols: usize) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    hnf_in_place(&mut m, cols, cols);
    m.retain(|r| r.iter().any(|x| !x.is_zero()));
    m
}

/// Brings the leading `pivot_cols` columns of `m` into Hermite form using
/// unimodular row operations applied to whole rows. Returns the number of
/// pivots found.
fn hnf_in_place(m: &mut [Vec<BigInt>], pivot_cols: usize, width: usize) -> usize {
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == m.len() {
            break;
        }
        loop {
            // Smallest nonzero |entry| in column c at or below row r.
            let best = (r..m.len())
                .filter(|&i| !m[i][c].is_zero())
                .min_by(|&i, &j| m[i][c].abs().cmp(&m[j][c].abs()).then(i.cmp(&j)));
            let Some(p) = best else { break };
            m.swap(r, p);
            let mut done = true;
            for i in r + 1..m.len() {
                if m[i][c].is_zero() {
                    continue;
                }
                let q = m[i][c].div_floor(&m[r][c]);
                for k in c..width {
                    let v = &m[i][k] - &q * &m[r][k];
                    m[i][k] = v;
                }
                if !m[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if m[r][c].is_zero() {
            continue;
        }
        if m[r][c].is_negative() {
            for k in 0..width {
                m[r][k] = -&m[r][k];
            }
        }
        for i in 0..r {
            let q = m[i][c].div_floor(&m[r][c]);
            if q.is_zero() {
                continue;
            }
            for k in c..width {
                let v = &m[i][k] - &q * &m[r][k];
                m[i][k] = v;
            }
        }
        r += 1;
    }
    r
}

/// A basis of `ker_Z(A) = {z ∈ Z^n : Az = 0}` in Hermite normal form.
///
/// Equal lattices give identical output. A matrix with full column rank
/// returns the empty list.
pub fn kernel_lattice_basis(a: &IntMatrix) -> Vec<LatticeVector> {
    let n = a.cols();
    let d = a.rows();
    // Row-reduce [Aᵀ | I_n]; rows whose Aᵀ part vanishes span the kernel.
    let mut m: Vec<Vec<BigInt>> = (0..n)
        .map(|j| {
            let mut row: Vec<BigInt> = (0..d).map(|i| a.get(i, j).clone()).collect();
            row.extend((0..n).map(|k| if k == j { BigInt::one() } else { BigInt::zero() }));
            row
        })
        .collect();
    let pivots = hnf_in_place(&mut m, d, d + n);
    let kernel: Vec<Vec<BigInt>> = m[pivots..].iter().map(|row| row[d..].to_vec()).collect();
    hermite_normal_form(&kernel, n).into_iter().map(LatticeVector::new).collect()
}

/// Canonical form of the lattice generated by `basis`.
pub fn canonical_lattice(basis: &[LatticeVector], n: usize) -> Result<Vec<LatticeVector>> {
    if let Some(v) = basis.iter().find(|v| v.len() != n) {
        return Err(Error::dim(format!("vector of length {} in a lattice of Z^{n}", v.len())));
    }
    let rows: Vec<Vec<BigInt>> = basis.iter().map(|v| v.coords().to_vec()).collect();
    Ok(hermite_normal_form(&rows, n).into_iter().map(LatticeVector::new).collect())
}

/// True iff the two generating sets span the same sublattice of `Z^n`.
pub fn lattice_equal(b1: &[LatticeVector], b2: &[LatticeVector]) -> Result<bool> {
    let n = b1.first().or(b2.first()).map(|v| v.len()).unwrap_or(0);
    Ok(canonical_lattice(b1, n)? == canonical_lattice(b2, n)?)
}

/// Determinant by Bareiss fraction-free elimination.
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn for_each_subset(n: usize, k: usize, f: &mut dyn FnMut(&[usize]) -> bool) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == k {
            return f(cur);
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            if !rec(i + 1, n, k, cur, f) {
                return false;
            }
            cur.pop();
        }
        true
    }
    rec(0, n, k, &mut Vec::with_capacity(k), f);
}

/// A rank-`r` matrix is unimodular when all of its nonzero `r x r` minors
/// share one absolute value.
pub fn is_unimodular(a: &IntMatrix) -> bool {
    let r = a.rank();
    if r == 0 {
        return false;
    }
    let mut common: Option<BigInt> = None;
    let mut ok = true;
    for_each_subset(a.rows(), r, &mut |rows| {
        for_each_subset(a.cols(), r, &mut |cols| {
            let sub: Vec<Vec<BigInt>> =
                rows.iter().map(|&i| cols.iter().map(|&j| a.get(i, j).clone()).collect()).collect();
            let d = determinant(&sub).abs();
            if d.is_zero() {
                return true;
            }
            match &common {
                None => common = Some(d),
                Some(c) if *c == d => {}
                Some(_) => ok = false,
            }
            ok
        });
        ok
    });
    ok
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(x: &[i64]) -> LatticeVector {
        LatticeVector::from_i64(x)
    }

    fn a12() -> IntMatrix {
        IntMatrix::from_rows(&[[1, 1, 1, 1], [0, 1, 2, 3]]).unwrap()
    }

    #[test]
    fn kernel_of_identity_is_trivial() {
        assert!(kernel_lattice_basis(&IntMatrix::identity(2).unwrap()).is_empty());
    }

    #[test]
    fn kernel_of_twisted_cubic() {
        let a = a12();
        let basis = kernel_lattice_basis(&a);
        assert_eq!(basis.len(), 2);
        assert!(basis.iter().all(|z| a.annihilates(z)));
        assert!(lattice_equal(&basis, &[lv(&[-2, 3, 0, -1]), lv(&[1, -1, -1, 1])]).unwrap());
    }

    #[test]
    fn kernel_of_zero_row_is_everything() {
        let a = IntMatrix::zeros(1, 3).unwrap();
        let basis = kernel_lattice_basis(&a);
        assert_eq!(basis.len(), 3);
        assert!(lattice_equal(&basis, &[lv(&[1, 0, 0]), lv(&[0, 1, 0]), lv(&[0, 0, 1])]).unwrap());
    }

    #[test]
    fn lattice_equality_examples() {
        assert!(lattice_equal(&[lv(&[1, -1])], &[lv(&[-1, 1])]).unwrap());
        assert!(!lattice_equal(&[lv(&[2, 0])], &[lv(&[1, 0])]).unwrap());
        assert!(lattice_equal(&[lv(&[1, 2])], &[lv(&[1, 2, 3])]).is_err());
    }

    #[test]
    fn unimodularity_examples() {
        assert!(!is_unimodular(&a12()));
        assert!(is_unimodular(&IntMatrix::from_rows(&[[1]]).unwrap()));
        assert!(is_unimodular(&IntMatrix::from_rows(&[[1, 1, 0], [0, 1, 1]]).unwrap()));
    }

    #[test]
    fn determinant_small() {
        let m = vec![
            vec![BigInt::from(2), BigInt::from(1), BigInt::from(0)],
            vec![BigInt::from(0), BigInt::from(0), BigInt::from(3)],
            vec![BigInt::from(1), BigInt::from(5), BigInt::from(1)],
        ];
        // 2*(0-15) - 1*(0-3) = -27
        assert_eq!(determinant(&m), BigInt::from(-27));
    }

    #[test]
    fn rank_counts_dependent_rows_once() {
        let a = IntMatrix::from_rows(&[[1, 2, 3], [2, 4, 6], [0, 1, 1]]).unwrap();
        assert_eq!(a.rank(), 2);
    }

    #[test]
    fn conformal_order() {
        assert!(lv(&[1, 0, -1]).conformal_le(&lv(&[2, 0, -1])));
        assert!(!lv(&[1, 0, -1]).conformal_le(&lv(&[2, 0, 1])));
        assert!(!lv(&[1, 1, 0]).conformal_le(&lv(&[2, 0, 0])));
        assert_eq!(lv(&[0, -2, 1]).canonical(), lv(&[0, 2, -1]));
    }

    #[test]
    fn matrix_shape_is_validated() {
        assert!(IntMatrix::new(0, 3, vec![]).is_err());
        assert!(IntMatrix::new(2, 2, vec![BigInt::zero(); 3]).is_err());
    }
}
