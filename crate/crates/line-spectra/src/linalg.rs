//! Small dense complex linear algebra.
//!
//! Everything in this crate works on matrices of single- to low-double-digit
//! dimension, so the implementations favor simplicity and accuracy over
//! asymptotics: partial-pivot LU for solves and determinants, modified
//! Gram–Schmidt for projections, and a one-sided unitary Jacobi iteration for
//! the SVD. Jacobi is the method of record here because it delivers high
//! relative accuracy on the tiny Hankel matrices the detector thresholds.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from column vectors, which must all share one length.
    pub fn from_columns(columns: &[Vec<Complex64>]) -> Self {
        assert!(!columns.is_empty());
        let rows = columns[0].len();
        Self::from_fn(rows, columns.len(), |i, j| columns[j][i])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// Plain transpose, no conjugation.
    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self[(i, k)];
                if aik == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += aik * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, x.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * x[j]).sum())
            .collect()
    }

    /// Gram matrix `A* A`.
    pub fn gram(&self) -> Self {
        self.adjoint().mul(self)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)] - rhs[(i, j)])
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// LU factorization with partial pivoting, kept in packed form.
struct Lu {
    lu: CMatrix,
    pivots: Vec<usize>,
    swaps: usize,
}

fn lu_factor(a: &CMatrix) -> Result<Lu> {
    assert_eq!(a.rows, a.cols, "LU requires a square matrix");
    let n = a.rows;
    let mut lu = a.clone();
    let mut pivots = vec![0usize; n];
    let mut swaps = 0usize;
    for k in 0..n {
        let (mut p, mut best) = (k, lu[(k, k)].norm());
        for i in k + 1..n {
            let v = lu[(i, k)].norm();
            if v > best {
                best = v;
                p = i;
            }
        }
        if best == 0.0 {
            return Err(Error::SingularMatrix);
        }
        pivots[k] = p;
        if p != k {
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(p, j)];
                lu[(p, j)] = tmp;
            }
            swaps += 1;
        }
        let pivot = lu[(k, k)];
        for i in k + 1..n {
            let factor = lu[(i, k)] / pivot;
            lu[(i, k)] = factor;
            for j in k + 1..n {
                let sub = factor * lu[(k, j)];
                lu[(i, j)] -= sub;
            }
        }
    }
    Ok(Lu { lu, pivots, swaps })
}

impl Lu {
    fn solve_vec(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.lu.rows;
        let mut x = b.to_vec();
        // Apply the full row permutation before any elimination; the stored
        // multipliers belong to the fully pivoted ordering.
        for k in 0..n {
            x.swap(k, self.pivots[k]);
        }
        for i in 0..n {
            for j in 0..i {
                let sub = self.lu[(i, j)] * x[j];
                x[i] -= sub;
            }
        }
        for k in (0..n).rev() {
            for j in k + 1..n {
                let sub = self.lu[(k, j)] * x[j];
                x[k] -= sub;
            }
            x[k] /= self.lu[(k, k)];
        }
        x
    }
}

/// Solves the square system `A x = b` by partial-pivot LU.
pub fn lu_solve(a: &CMatrix, b: &[Complex64]) -> Result<Vec<Complex64>> {
    assert_eq!(a.rows, b.len());
    Ok(lu_factor(a)?.solve_vec(b))
}

/// `A^{-1}` by solving against the identity, column by column.
pub fn lu_inverse(a: &CMatrix) -> Result<CMatrix> {
    let n = a.rows;
    let lu = lu_factor(a)?;
    let mut inv = CMatrix::zeros(n, n);
    for j in 0..n {
        let mut e = vec![Complex64::new(0.0, 0.0); n];
        e[j] = Complex64::new(1.0, 0.0);
        let col = lu.solve_vec(&e);
        for i in 0..n {
            inv[(i, j)] = col[i];
        }
    }
    Ok(inv)
}

/// Natural log of `|det A|`, or `-inf` when a pivot vanishes exactly.
pub fn log_abs_det(a: &CMatrix) -> f64 {
    match lu_factor(a) {
        Ok(lu) => {
            let _ = lu.swaps;
            (0..a.rows).map(|k| lu.lu[(k, k)].norm().ln()).sum()
        }
        Err(_) => f64::NEG_INFINITY,
    }
}

/// 2-norm of the component of `v` orthogonal to the column span of `a`,
/// computed by modified Gram–Schmidt with one reorthogonalization pass.
pub fn orthogonal_residual(a: &CMatrix, v: &[Complex64]) -> Result<f64> {
    assert_eq!(a.rows, v.len());
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(a.cols);
    for j in 0..a.cols {
        let mut q = a.column(j);
        let original = vec_norm(&q);
        for _ in 0..2 {
            for b in &basis {
                let coeff = inner(b, &q);
                for (qi, bi) in q.iter_mut().zip(b) {
                    *qi -= coeff * bi;
                }
            }
        }
        let norm = vec_norm(&q);
        if norm <= 1e-13 * original.max(f64::MIN_POSITIVE) {
            return Err(Error::RankDeficient(format!(
                "column {j} is numerically dependent on earlier columns"
            )));
        }
        for qi in &mut q {
            *qi /= norm;
        }
        basis.push(q);
    }
    let mut r = v.to_vec();
    for _ in 0..2 {
        for b in &basis {
            let coeff = inner(b, &r);
            for (ri, bi) in r.iter_mut().zip(b) {
                *ri -= coeff * bi;
            }
        }
    }
    Ok(vec_norm(&r))
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn vec_inf_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Full singular value decomposition `A = U diag(sigma) V*`.
#[derive(Debug, Clone)]
pub struct Svd {
    /// `rows x cols`, orthonormal columns.
    pub u: CMatrix,
    /// Descending, nonnegative.
    pub singular_values: Vec<f64>,
    /// `cols x cols`, unitary.
    pub v: CMatrix,
}

const JACOBI_MAX_SWEEPS: usize = 100;

/// One-sided unitary Jacobi SVD for `rows >= cols`.
///
/// Columns are pairwise rotated until every off-diagonal Gram entry `g_pq`
/// satisfies `|g_pq| <= 1e-14 * ||A_p|| ||A_q||`. The pairwise-relative
/// criterion keeps the normalized singular vectors orthonormal even when the
/// singular values span many orders of magnitude.
pub fn jacobi_svd(a: &CMatrix) -> Result<Svd> {
    if a.rows < a.cols {
        return Err(Error::DomainError(format!(
            "jacobi_svd requires rows >= cols, got {}x{}",
            a.rows, a.cols
        )));
    }
    let (m, n) = (a.rows, a.cols);
    let mut work = a.clone();
    let mut v = CMatrix::identity(n);
    let fro_sq = a.data.iter().map(|z| z.norm_sqr()).sum::<f64>();
    const PAIR_TOL: f64 = 1e-14;
    // Columns this far below the matrix scale are numerically zero; rotating
    // against their rounding debris never converges.
    let zero_floor = 1e-30 * fro_sq;

    if fro_sq > 0.0 {
        let mut converged = false;
        for _sweep in 0..JACOBI_MAX_SWEEPS {
            let mut rotated = false;
            for p in 0..n {
                for q in p + 1..n {
                    let mut alpha = 0.0;
                    let mut beta = 0.0;
                    let mut gamma = Complex64::new(0.0, 0.0);
                    for i in 0..m {
                        let ap = work[(i, p)];
                        let aq = work[(i, q)];
                        alpha += ap.norm_sqr();
                        beta += aq.norm_sqr();
                        gamma += ap.conj() * aq;
                    }
                    let g = gamma.norm();
                    if alpha <= zero_floor || beta <= zero_floor {
                        continue;
                    }
                    if g <= PAIR_TOL * (alpha * beta).sqrt() {
                        continue;
                    }
                    rotated = true;
                    let phase = gamma / g;
                    let zeta = (beta - alpha) / (2.0 * g);
                    let t = if zeta >= 0.0 {
                        -1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                    } else {
                        1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = c * t;
                    let sp = s * phase.conj();
                    let sq = s * phase;
                    for i in 0..m {
                        let ap = work[(i, p)];
                        let aq = work[(i, q)];
                        work[(i, p)] = c * ap + sp * aq;
                        work[(i, q)] = -sq * ap + c * aq;
                    }
                    for i in 0..n {
                        let vp = v[(i, p)];
                        let vq = v[(i, q)];
                        v[(i, p)] = c * vp + sp * vq;
                        v[(i, q)] = -sq * vp + c * vq;
                    }
                }
            }
            if !rotated {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::ConvergenceFailure);
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = (0..n).map(|j| vec_norm(&work.column(j))).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap());

    let singular_values: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let sigma_max = singular_values.first().copied().unwrap_or(0.0);
    let v_sorted = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);

    let mut u_cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for (rank, &j) in order.iter().enumerate() {
        let sv = norms[j];
        // Numerically-zero columns hold rounding debris with no usable
        // direction; replace them by an orthonormal completion.
        if sv > sigma_max * 1e-14 {
            let col = work.column(j).iter().map(|z| z / sv).collect();
            u_cols.push(col);
        } else {
            u_cols.push(orthonormal_completion(m, &u_cols[..rank]));
        }
    }
    let u = CMatrix::from_columns(&u_cols);

    Ok(Svd {
        u,
        singular_values,
        v: v_sorted,
    })
}

/// Picks a unit vector orthogonal to `existing` by orthogonalizing the best
/// standard basis vector.
fn orthonormal_completion(m: usize, existing: &[Vec<Complex64>]) -> Vec<Complex64> {
    let mut best: Option<(f64, Vec<Complex64>)> = None;
    for k in 0..m {
        let mut e = vec![Complex64::new(0.0, 0.0); m];
        e[k] = Complex64::new(1.0, 0.0);
        for _ in 0..2 {
            for b in existing {
                let coeff = inner(b, &e);
                for (ei, bi) in e.iter_mut().zip(b) {
                    *ei -= coeff * bi;
                }
            }
        }
        let norm = vec_norm(&e);
        if best.as_ref().is_none_or(|(n, _)| norm > *n) {
            best = Some((norm, e));
        }
        if norm > 0.5 {
            break;
        }
    }
    let (norm, mut e) = best.expect("matrix has at least one row");
    assert!(norm > 0.0, "cannot complete an orthonormal basis");
    for ei in &mut e {
        *ei /= norm;
    }
    e
}
