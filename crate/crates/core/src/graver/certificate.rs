use std::collections::{BTreeSet, HashSet};
use std::fmt;

use num_traits::Zero;

use crate::linalg::{kernel_lattice_basis, lattice_equal, IntMatrix, LatticeVector};

/// The criterion a claimed Graver basis failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    /// The set is not closed under negation.
    Symmetry,
    /// An element is zero or outside `ker(A)`.
    Membership,
    /// The set does not generate `ker_Z(A)`.
    Generation,
    /// Some `g₁ + g₂` has no sign-compatible representation.
    Representability,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Criterion::Symmetry => "symmetry",
            Criterion::Membership => "membership",
            Criterion::Generation => "generation",
            Criterion::Representability => "representability",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateFailure {
    pub criterion: Criterion,
    /// The offending element or pair.
    pub witness: Vec<LatticeVector>,
}

/// Checks that `candidate` is a Graver basis of `A`: symmetric, inside the
/// kernel, generating `ker_Z(A)`, and every pairwise sum is a sign-compatible
/// nonnegative integer combination of candidate elements.
pub fn graver_certificate_check(a: &IntMatrix, candidate: &[LatticeVector]) -> Result<(), CertificateFailure> {
    let set: BTreeSet<&LatticeVector> = candidate.iter().collect();
    for g in candidate {
        if !set.contains(&g.neg()) {
            return Err(CertificateFailure { criterion: Criterion::Symmetry, witness: vec![g.clone()] });
        }
    }
    for g in candidate {
        if g.len() != a.cols() || g.is_zero() || !a.annihilates(g) {
            return Err(CertificateFailure { criterion: Criterion::Membership, witness: vec![g.clone()] });
        }
    }
    let kernel = kernel_lattice_basis(a);
    if !lattice_equal(candidate, &kernel).unwrap_or(false) {
        return Err(CertificateFailure { criterion: Criterion::Generation, witness: kernel });
    }
    let elements: Vec<&LatticeVector> = set.into_iter().collect();
    let mut failed = HashSet::new();
    for (i, g1) in elements.iter().enumerate() {
        for g2 in &elements[i..] {
            let s = g1.add(g2);
            if !representable(&s, &elements, &mut failed) {
                return Err(CertificateFailure {
                    criterion: Criterion::Representability,
                    witness: vec![(*g1).clone(), (*g2).clone()],
                });
            }
        }
    }
    Ok(())
}

/// Exhaustive search for `s = Σ gᵢ` with every `gᵢ ⊑ s`.
///
/// In such a sum some term carries the first nonzero coordinate of `s`, so
/// only those terms are branched on. Every step strictly lowers `‖s‖₁`.
fn representable(s: &LatticeVector, elements: &[&LatticeVector], failed: &mut HashSet<LatticeVector>) -> bool {
    let Some(first) = s.support().first().copied() else {
        return true;
    };
    if failed.contains(s) {
        return false;
    }
    for g in elements {
        if g[first].is_zero() || !g.conformal_le(s) {
            continue;
        }
        if representable(&s.sub(g), elements, failed) {
            return true;
        }
    }
    failed.insert(s.clone());
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graver::graver;

    fn lv(x: &[i64]) -> LatticeVector {
        LatticeVector::from_i64(x)
    }

    fn closed_form(a: i64, b: i64) -> Vec<LatticeVector> {
        let v = lv(&[-b, a + b, 0, -a]);
        let h = lv(&[1, -1, -1, 1]);
        let mut out = vec![h.clone(), h.neg()];
        let mut cur = v;
        for _ in 0..=(a + b) {
            out.push(cur.clone());
            out.push(cur.neg());
            cur = cur.add(&h);
        }
        out
    }

    #[test]
    fn closed_form_two_three_passes() {
        let a = IntMatrix::from_rows(&[[1, 1, 1, 1], [0, 2, 3, 5]]).unwrap();
        assert_eq!(graver_certificate_check(&a, &closed_form(2, 3)), Ok(()));
    }

    #[test]
    fn removing_h_breaks_representability() {
        let a = IntMatrix::from_rows(&[[1, 1, 1, 1], [0, 1, 2, 3]]).unwrap();
        let h = lv(&[1, -1, -1, 1]);
        let mutilated: Vec<LatticeVector> =
            closed_form(1, 2).into_iter().filter(|g| *g != h && *g != h.neg()).collect();
        let err = graver_certificate_check(&a, &mutilated).unwrap_err();
        assert_eq!(err.criterion, Criterion::Representability);
        assert_eq!(err.witness.len(), 2);
        let sum = err.witness[0].add(&err.witness[1]);
        let refs: Vec<&LatticeVector> = mutilated.iter().collect();
        assert!(!representable(&sum, &refs, &mut HashSet::new()));
    }

    #[test]
    fn asymmetric_candidate_fails_symmetry() {
        let a = IntMatrix::from_rows(&[[1, 1]]).unwrap();
        let err = graver_certificate_check(&a, &[lv(&[1, -1])]).unwrap_err();
        assert_eq!(err.criterion, Criterion::Symmetry);
    }

    #[test]
    fn index_two_sublattice_fails_generation() {
        let a = IntMatrix::from_rows(&[[1, 1]]).unwrap();
        let err = graver_certificate_check(&a, &[lv(&[2, -2]), lv(&[-2, 2])]).unwrap_err();
        assert_eq!(err.criterion, Criterion::Generation);
    }

    #[test]
    fn computed_basis_passes() {
        let a = IntMatrix::from_rows(&[[1, 2, 1, 0], [0, 1, 3, 2]]).unwrap();
        let g = graver(&a).unwrap();
        assert_eq!(graver_certificate_check(&a, &g.symmetric()), Ok(()));
    }
}
