//! The family `A_{a,b} = (1 1 1 1; 0 a b a+b)`: closed-form Graver basis,
//! three universal Gröbner basis members and the relation among them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::fiber::{fiber_enumerate, ugb_member, verify_inequality_certificate, EdgeCertificate, Fiber};
use crate::graver::GraverBasis;
use crate::lawrence::Relation;
use crate::limits::Limits;
use crate::linalg::{kernel_lattice_basis, lattice_equal, IntMatrix, LatticeVector};

/// `A_{a,b}` with `1 ≤ a < b`; `a'`, `b'` are `a`, `b` divided by their gcd,
/// which leaves the integer kernel unchanged.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ABInstance {
    pub a: u64,
    pub b: u64,
    pub gcd: u64,
    pub a_norm: u64,
    pub b_norm: u64,
}

fn int(x: i64) -> BigInt {
    BigInt::from(x)
}

impl ABInstance {
    pub fn new(a: u64, b: u64) -> Result<Self> {
        if a == 0 || a >= b {
            return Err(Error::pre(format!("need 1 ≤ a < b, got a = {a}, b = {b}")));
        }
        if b > i64::MAX as u64 / 4 {
            return Err(Error::pre("parameters too large"));
        }
        let gcd = a.gcd(&b);
        Ok(ABInstance { a, b, gcd, a_norm: a / gcd, b_norm: b / gcd })
    }

    /// `A_{a,b}` with the raw parameters.
    pub fn matrix(&self) -> IntMatrix {
        ab_matrix(self.a as i64, self.b as i64)
    }

    pub fn normalized_matrix(&self) -> IntMatrix {
        ab_matrix(self.a_norm as i64, self.b_norm as i64)
    }

    fn ab(&self) -> (i64, i64) {
        (self.a_norm as i64, self.b_norm as i64)
    }

    /// `v = (−b', a'+b', 0, −a')`.
    pub fn v(&self) -> LatticeVector {
        let (a, b) = self.ab();
        LatticeVector::from_i64(&[-b, a + b, 0, -a])
    }

    /// `h = (1, −1, −1, 1)`.
    pub fn h(&self) -> LatticeVector {
        LatticeVector::from_i64(&[1, -1, -1, 1])
    }

    /// `v, v+h, …, v+(a'+b')h, h`, the closed-form order.
    pub fn closed_form_list(&self) -> Vec<LatticeVector> {
        let (a, b) = self.ab();
        let (v, h) = (self.v(), self.h());
        let mut out: Vec<LatticeVector> = (0..=a + b).map(|t| v.add(&h.scale(&int(t)))).collect();
        out.push(h);
        out
    }
}

fn ab_matrix(a: i64, b: i64) -> IntMatrix {
    IntMatrix::from_rows(&[[1, 1, 1, 1], [0, a, b, a + b]]).expect("2x4 shape")
}

/// `G(A_{a,b}) = ±{v, v+h, …, v+(a'+b')h, h}`.
pub fn ab_graver_closed_form(inst: &ABInstance) -> GraverBasis {
    GraverBasis::from_representatives(inst.matrix(), inst.closed_form_list())
}

/// One of the three members with its stated certificate and an LP
/// certificate computed independently.
#[derive(Debug, Clone)]
pub struct UgbMember {
    pub vector: LatticeVector,
    /// The inequality `c·y ≥ c·z⁺` from the closed-form argument.
    pub stated: Vec<BigRational>,
    pub stated_holds: bool,
    pub lp: EdgeCertificate,
    pub fiber: Fiber,
}

fn q(x: &[i64]) -> Vec<BigRational> {
    x.iter().map(|&v| BigRational::from_integer(int(v))).collect()
}

/// `(b'−1, −a'−b'+1, 1, a'−1)`, `(−b', a'+b', 0, −a')`, `(a', 0, −a'−b', b')`
/// with the inequalities `(a'−1)y₃ − y₄ ≥ 0`, `y₃ ≥ 0` and `y₂ ≥ 0`. Fails
/// with a verification error if any certificate does not cut out
/// `conv{z⁺, z⁻}`.
pub fn ab_ugb_triple(inst: &ABInstance, limits: &Limits) -> Result<Vec<UgbMember>> {
    let (a, b) = inst.ab();
    let m = inst.matrix();
    let cases = [
        (LatticeVector::from_i64(&[b - 1, -a - b + 1, 1, a - 1]), q(&[0, 0, a - 1, -1])),
        (LatticeVector::from_i64(&[-b, a + b, 0, -a]), q(&[0, 0, 1, 0])),
        (LatticeVector::from_i64(&[a, 0, -a - b, b]), q(&[0, 1, 0, 0])),
    ];
    let mut out = Vec::with_capacity(3);
    for (z, stated) in cases {
        let rhs = LatticeVector::new(m.mul_vec(z.positive_part().coords())?);
        let fiber = fiber_enumerate(&m, &rhs, limits)?;
        let stated_holds = verify_inequality_certificate(&fiber, &stated, &[z.positive_part(), z.negative_part()]);
        let lp = ugb_member(&m, &z, limits)?
            .ok_or_else(|| Error::Verification(format!("{z} is not an edge direction of its fiber")))?;
        if !stated_holds {
            return Err(Error::Verification(format!("stated inequality for {z} does not define the edge")));
        }
        out.push(UgbMember { vector: z, stated, stated_holds, lp, fiber });
    }
    Ok(out)
}

/// `(a'+b')·g₁ + (a'+b'−1)·g₂ + 1·g₃ = 0` over the three members.
pub fn ab_relation(inst: &ABInstance) -> Result<Relation> {
    let (a, b) = inst.ab();
    let gens = vec![
        LatticeVector::from_i64(&[b - 1, -a - b + 1, 1, a - 1]),
        LatticeVector::from_i64(&[-b, a + b, 0, -a]),
        LatticeVector::from_i64(&[a, 0, -a - b, b]),
    ];
    let s = (a + b) as u64;
    Relation::new(gens, vec![s, s - 1, 1])
}

#[derive(Debug, Clone)]
pub struct BMatrixReport {
    /// Columns `v, v+h, …, v+(a'+b')h, h`.
    pub g_matrix: IntMatrix,
    /// `B_{a'+b'} = (1 1 … 1 0; 0 1 … a'+b' 1)`.
    pub b_matrix: IntMatrix,
    pub kernels_equal: bool,
    /// `G_{a,b} = (v h) · B_{a'+b'}`.
    pub factorization_holds: bool,
}

pub fn b_matrix_c(c: usize) -> IntMatrix {
    let top: Vec<i64> = (0..=c).map(|_| 1).chain([0]).collect();
    let bottom: Vec<i64> = (0..=c as i64).chain([1]).collect();
    IntMatrix::from_rows(&[top, bottom]).expect("2-row shape")
}

pub fn b_matrix(inst: &ABInstance) -> Result<BMatrixReport> {
    let g_matrix = IntMatrix::from_columns(&inst.closed_form_list())?;
    let b_matrix = b_matrix_c((inst.a_norm + inst.b_norm) as usize);
    let kernels_equal = lattice_equal(&kernel_lattice_basis(&g_matrix), &kernel_lattice_basis(&b_matrix))?;
    let vh = IntMatrix::from_columns(&[inst.v(), inst.h()])?;
    let factorization_holds = vh.mul(&b_matrix)? == g_matrix;
    Ok(BMatrixReport { g_matrix, b_matrix, kernels_equal, factorization_holds })
}
