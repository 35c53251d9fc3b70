use num_bigint::BigInt;
use num_traits::Zero;

use crate::linalg::{IntMatrix, LatticeVector};

/// Brute-force Graver oracle on the box `‖z‖_∞ ≤ box_bound`.
///
/// Enumerates every lattice point of the box, keeps the kernel elements and
/// returns the `⊑`-minimal nonzero ones (both signs). Since anything below a
/// box element in `⊑` lies in the box as well, the result is exactly the
/// part of the Graver basis inside the box.
pub fn orthant_hilbert_oracle(a: &IntMatrix, box_bound: u32) -> Vec<LatticeVector> {
    let n = a.cols();
    let bound = box_bound as i64;
    let mut z = vec![-bound; n];
    let mut kernel = Vec::new();
    'outer: loop {
        let v: Vec<BigInt> = z.iter().map(|&x| BigInt::from(x)).collect();
        let zero = v.iter().all(Zero::is_zero);
        if !zero && (0..a.rows()).all(|i| a.row(i).iter().zip(&v).map(|(p, q)| p * q).sum::<BigInt>().is_zero()) {
            kernel.push(LatticeVector::new(v));
        }
        for k in 0..n {
            if z[k] < bound {
                z[k] += 1;
                continue 'outer;
            }
            z[k] = -bound;
        }
        break;
    }
    let mut out: Vec<LatticeVector> = kernel
        .iter()
        .filter(|z| !kernel.iter().any(|w| w != *z && w.conformal_le(z)))
        .cloned()
        .collect();
    out.sort_by(|a, b| a.norm_lex_cmp(b));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(x: &[i64]) -> LatticeVector {
        LatticeVector::from_i64(x)
    }

    #[test]
    fn single_pair() {
        let a = IntMatrix::from_rows(&[[1, 1]]).unwrap();
        assert_eq!(orthant_hilbert_oracle(&a, 3), vec![lv(&[-1, 1]), lv(&[1, -1])]);
    }

    #[test]
    fn box_truncation() {
        // 2x - 3y = 0 on the 7x7 box around 0 holds only (±3, ±2).
        let a = IntMatrix::from_rows(&[[2, -3]]).unwrap();
        assert!(orthant_hilbert_oracle(&a, 1).is_empty());
        assert_eq!(orthant_hilbert_oracle(&a, 3), vec![lv(&[-3, -2]), lv(&[3, 2])]);
    }

    #[test]
    fn twisted_cubic_box_four() {
        let a = IntMatrix::from_rows(&[[1, 1, 1, 1], [0, 1, 2, 3]]).unwrap();
        let got = orthant_hilbert_oracle(&a, 4);
        assert_eq!(got.len(), 10);
        for v in [[-2, 3, 0, -1], [-1, 2, -1, 0], [0, 1, -2, 1], [1, 0, -3, 2], [1, -1, -1, 1]] {
            assert!(got.contains(&lv(&v)) && got.contains(&lv(&v).neg()));
        }
    }
}
