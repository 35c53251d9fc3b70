//! Graver bases: the `⊑`-minimal nonzero elements of `ker_Z(A)`.

mod certificate;
pub(crate) mod engine;
mod oracle;

pub use certificate::{graver_certificate_check, CertificateFailure, Criterion};
pub use oracle::orthant_hilbert_oracle;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::linalg::{kernel_lattice_basis, IntMatrix, LatticeVector};
use engine::{Coeff, EngineError, EngineResult};

/// How the completion is driven.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Complete `±basis` with every coordinate active.
    #[default]
    Plain,
    /// Complete on a coordinate projection that is injective on the lattice,
    /// then lift one coordinate at a time.
    ProjectAndLift,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct GraverOptions {
    pub limits: Limits,
    pub strategy: Strategy,
}

/// Graver basis of a matrix, one canonical representative per `±` pair,
/// sorted by 1-norm and then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraverBasis {
    matrix: IntMatrix,
    elements: Vec<LatticeVector>,
}

impl GraverBasis {
    /// Wraps representatives, normalizing sign and order.
    pub fn from_representatives(matrix: IntMatrix, elements: Vec<LatticeVector>) -> Self {
        let mut elements: Vec<LatticeVector> = elements.iter().map(LatticeVector::canonical).collect();
        elements.sort_by(|a, b| a.norm_lex_cmp(b));
        elements.dedup();
        GraverBasis { matrix, elements }
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// One representative per `±` pair.
    pub fn elements(&self) -> &[LatticeVector] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Both signs of every element.
    pub fn symmetric(&self) -> Vec<LatticeVector> {
        let mut out: Vec<LatticeVector> = self.elements.iter().flat_map(|e| [e.clone(), e.neg()]).collect();
        out.sort_by(|a, b| a.norm_lex_cmp(b));
        out
    }

    pub fn contains(&self, z: &LatticeVector) -> bool {
        let c = z.canonical();
        self.elements.binary_search_by(|e| e.norm_lex_cmp(&c)).is_ok()
    }

    pub fn max_norm(&self) -> BigInt {
        self.elements.iter().map(|e| e.norm1()).max().unwrap_or_default()
    }
}

pub(crate) fn cap_error(e: EngineError) -> Error {
    match e {
        EngineError::Cap { cap, limit } => Error::CapExceeded { cap, limit },
        EngineError::Overflow => unreachable!("arbitrary precision run cannot overflow"),
    }
}

fn run<T: Coeff>(basis: &[Vec<BigInt>], n: usize, opts: &GraverOptions) -> EngineResult<Vec<Vec<T>>> {
    match opts.strategy {
        Strategy::Plain => engine::plain_completion::<T>(basis, n, opts.limits),
        Strategy::ProjectAndLift => engine::project_and_lift::<T>(basis, n, opts.limits),
    }
}

/// Graver basis with default options.
pub fn graver(a: &IntMatrix) -> Result<GraverBasis> {
    graver_with(a, &GraverOptions::default())
}

pub fn graver_with(a: &IntMatrix, opts: &GraverOptions) -> Result<GraverBasis> {
    let basis: Vec<Vec<BigInt>> = kernel_lattice_basis(a).into_iter().map(LatticeVector::into_coords).collect();
    let n = a.cols();
    if basis.is_empty() {
        return Ok(GraverBasis { matrix: a.clone(), elements: Vec::new() });
    }
    let vectors: Vec<LatticeVector> = match run::<i64>(&basis, n, opts) {
        Ok(vs) => vs.iter().map(|v| LatticeVector::new(v.iter().map(Coeff::to_big).collect())).collect(),
        Err(EngineError::Overflow) => run::<BigInt>(&basis, n, opts)
            .map_err(cap_error)?
            .into_iter()
            .map(LatticeVector::new)
            .collect(),
        Err(e) => return Err(cap_error(e)),
    };
    Ok(GraverBasis::from_representatives(a.clone(), vectors))
}
