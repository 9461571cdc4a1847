//! Shared helpers for integration tests, kept independent of the library's
//! SVD path.

use line_spectra::linalg::CMatrix;
use num_complex::Complex64;

/// Eigenvalues of a Hermitian matrix by classical two-sided Jacobi with
/// complex rotations, sorted descending.
///
/// This is the oracle the SVD is checked against, so it shares no code with
/// the one-sided iteration in the library: it zeroes off-diagonal entries of
/// the matrix itself rather than orthogonalizing columns.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Vec<f64> {
    assert_eq!(a.rows(), a.cols());
    let n = a.rows();
    let mut g = a.clone();
    let scale: f64 = g.frobenius_norm().max(f64::MIN_POSITIVE);
    for _sweep in 0..300 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let gpq = g[(p, q)];
                let off = gpq.norm();
                if off <= 1e-15 * scale {
                    continue;
                }
                rotated = true;
                let app = g[(p, p)].re;
                let aqq = g[(q, q)].re;
                let phase = gpq / off;
                // Phase-rotate index q so the 2x2 block becomes real
                // symmetric, then apply the classical rotation.
                let tau = (aqq - app) / (2.0 * off);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Column transform: (col_p, col_q) <- (c col_p - s e^{-i phi} col_q,
                //                                      s col_p + c e^{-i phi} col_q)
                let e_min = phase.conj();
                for i in 0..n {
                    let gip = g[(i, p)];
                    let giq = g[(i, q)];
                    g[(i, p)] = c * gip - s * e_min * giq;
                    g[(i, q)] = s * gip + c * e_min * giq;
                }
                // Row transform with the conjugate transpose.
                let e_plus = phase;
                for j in 0..n {
                    let gpj = g[(p, j)];
                    let gqj = g[(q, j)];
                    g[(p, j)] = c * gpj - s * e_plus * gqj;
                    g[(q, j)] = s * gpj + c * e_plus * gqj;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut eigs: Vec<f64> = (0..n).map(|i| g[(i, i)].re).collect();
    eigs.sort_by(|a, b| b.partial_cmp(a).unwrap());
    eigs
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[cfg(test)]
mod oracle_sanity {
    use super::*;

    #[test]
    fn diagonal_matrix_is_fixed_point() {
        let mut a = CMatrix::zeros(3, 3);
        a[(0, 0)] = c(3.0, 0.0);
        a[(1, 1)] = c(-1.0, 0.0);
        a[(2, 2)] = c(0.5, 0.0);
        let eigs = hermitian_eigenvalues(&a);
        assert_eq!(eigs, vec![3.0, 0.5, -1.0]);
    }

    #[test]
    fn two_by_two_closed_form() {
        // Hermitian [[a, g],[conj(g), b]]: eigenvalues
        // (a+b)/2 +- sqrt(((a-b)/2)^2 + |g|^2).
        let (a, b) = (2.0, -1.0);
        let g = c(0.6, -0.8);
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 0)] = c(a, 0.0);
        m[(1, 1)] = c(b, 0.0);
        m[(0, 1)] = g;
        m[(1, 0)] = g.conj();
        let eigs = hermitian_eigenvalues(&m);
        let mid = (a + b) / 2.0;
        let rad = (((a - b) / 2.0).powi(2) + g.norm_sqr()).sqrt();
        assert!((eigs[0] - (mid + rad)).abs() < 1e-14);
        assert!((eigs[1] - (mid - rad)).abs() < 1e-14);
    }

    #[test]
    fn trace_is_preserved() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let n = 6;
        let b = CMatrix::from_fn(n, n, |_, _| {
            c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        let h = b.adjoint().mul(&b);
        let trace: f64 = (0..n).map(|i| h[(i, i)].re).sum();
        let eigs = hermitian_eigenvalues(&h);
        let sum: f64 = eigs.iter().sum();
        assert!((trace - sum).abs() <= 1e-12 * trace.abs());
        assert!(eigs.iter().all(|&e| e >= -1e-12));
    }
}
