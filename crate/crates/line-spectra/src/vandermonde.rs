//! Complex Vandermonde vectors and matrices, the combinatorial constants
//! `zeta`, `xi`, `lambda`, and the distance-product vectors that the
//! approximation bounds are phrased in.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

/// Exact factorial for `n <= 34` (fits in `u128`), rounded to the nearest
/// `f64`; larger arguments go through the log-domain evaluation.
pub fn factorial(n: u64) -> f64 {
    if n <= 34 {
        let mut acc: u128 = 1;
        for i in 2..=n as u128 {
            acc *= i;
        }
        acc as f64
    } else {
        ln_factorial(n).exp()
    }
}

/// `ln(n!)`: exact integer path for small `n`, Stirling series beyond.
pub fn ln_factorial(n: u64) -> f64 {
    if n <= 20 {
        let mut acc: u128 = 1;
        for i in 2..=n as u128 {
            acc *= i;
        }
        (acc as f64).ln()
    } else {
        let x = (n + 1) as f64;
        // ln Gamma(x) by the Stirling series; for x >= 21 the truncation
        // error is below 1e-15.
        let inv = 1.0 / x;
        let inv2 = inv * inv;
        (x - 0.5) * x.ln() - x
            + 0.5 * (2.0 * std::f64::consts::PI).ln()
            + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)))
    }
}

fn require_min(name: &str, k: u64, min: u64) -> Result<()> {
    if k < min {
        Err(Error::DomainError(format!("{name} requires k >= {min}, got {k}")))
    } else {
        Ok(())
    }
}

/// Parity-split factorial product: `((k-1)/2)!^2` for odd `k`,
/// `(k/2)! ((k-2)/2)!` for even `k`.
pub fn zeta(k: u64) -> Result<f64> {
    require_min("zeta", k, 1)?;
    Ok(if k % 2 == 1 {
        let h = (k - 1) / 2;
        factorial(h) * factorial(h)
    } else {
        factorial(k / 2) * factorial((k - 2) / 2)
    })
}

pub fn ln_zeta(k: u64) -> Result<f64> {
    require_min("zeta", k, 1)?;
    Ok(if k % 2 == 1 {
        2.0 * ln_factorial((k - 1) / 2)
    } else {
        ln_factorial(k / 2) + ln_factorial((k - 2) / 2)
    })
}

/// Companion constant to [`zeta`]: `1/2` at `k = 1`, then quarter-scaled
/// factorial products split by parity.
pub fn xi(k: u64) -> Result<f64> {
    require_min("xi", k, 1)?;
    Ok(match k {
        1 => 0.5,
        k if k % 2 == 1 => factorial((k - 1) / 2) * factorial((k - 3) / 2) / 4.0,
        k => {
            let h = factorial((k - 2) / 2);
            h * h / 4.0
        }
    })
}

pub fn ln_xi(k: u64) -> Result<f64> {
    require_min("xi", k, 1)?;
    Ok(match k {
        1 => 0.5f64.ln(),
        k if k % 2 == 1 => ln_factorial((k - 1) / 2) + ln_factorial((k - 3) / 2) - 4.0f64.ln(),
        k => 2.0 * ln_factorial((k - 2) / 2) - 4.0f64.ln(),
    })
}

/// `1` at `k = 2`, `xi(k - 2)` beyond.
pub fn lambda_const(k: u64) -> Result<f64> {
    require_min("lambda", k, 2)?;
    if k == 2 {
        Ok(1.0)
    } else {
        xi(k - 2)
    }
}

pub fn ln_lambda_const(k: u64) -> Result<f64> {
    require_min("lambda", k, 2)?;
    if k == 2 {
        Ok(0.0)
    } else {
        ln_xi(k - 2)
    }
}

/// The moment vector `(1, z, ..., z^s)` at a single node.
#[derive(Debug, Clone, PartialEq)]
pub struct VandermondeVector {
    degree: usize,
    node: Complex64,
}

impl VandermondeVector {
    pub fn new(degree: usize, node: Complex64) -> Self {
        Self { degree, node }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn node(&self) -> Complex64 {
        self.node
    }

    /// Entries by repeated multiplication, so `entry[k] = z * entry[k-1]`
    /// holds exactly.
    pub fn entries(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.degree + 1);
        let mut p = Complex64::new(1.0, 0.0);
        out.push(p);
        for _ in 0..self.degree {
            p *= self.node;
            out.push(p);
        }
        out
    }
}

/// Matrix whose columns are [`VandermondeVector`]s of a common degree.
#[derive(Debug, Clone, PartialEq)]
pub struct VandermondeMatrix {
    degree: usize,
    nodes: Vec<Complex64>,
}

impl VandermondeMatrix {
    pub fn new(degree: usize, nodes: Vec<Complex64>) -> Self {
        Self { degree, nodes }
    }

    /// Nodes `e^{i theta_j}` on the unit circle.
    pub fn from_unit_circle(degree: usize, thetas: &[f64]) -> Self {
        Self::new(degree, thetas.iter().map(|&t| Complex64::cis(t)).collect())
    }

    pub fn from_real_nodes(degree: usize, ts: &[f64]) -> Self {
        Self::new(degree, ts.iter().map(|&t| Complex64::new(t, 0.0)).collect())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn nodes(&self) -> &[Complex64] {
        &self.nodes
    }

    pub fn num_rows(&self) -> usize {
        self.degree + 1
    }

    pub fn num_cols(&self) -> usize {
        self.nodes.len()
    }

    pub fn to_matrix(&self) -> CMatrix {
        let cols: Vec<Vec<Complex64>> = self
            .nodes
            .iter()
            .map(|&z| VandermondeVector::new(self.degree, z).entries())
            .collect();
        CMatrix::from_columns(&cols)
    }
}

/// Vector of per-node distance products; all entries are nonnegative.
#[derive(Debug, Clone, PartialEq)]
pub struct EtaVector(Vec<f64>);

impl EtaVector {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn inf_norm(&self) -> f64 {
        self.0.iter().copied().fold(0.0, f64::max)
    }
}

/// Entry `j` is the product of distances from `z[j]` to every `zhat`.
pub fn eta(z: &[Complex64], zhat: &[Complex64]) -> EtaVector {
    EtaVector(
        z.iter()
            .map(|&zj| zhat.iter().map(|&w| (zj - w).norm()).product())
            .collect(),
    )
}

/// Convenience for real arguments.
pub fn eta_real(t: &[f64], that: &[f64]) -> EtaVector {
    EtaVector(
        t.iter()
            .map(|&tj| that.iter().map(|&w| (tj - w).abs()).product())
            .collect(),
    )
}

const GRAM_RANK_TOLERANCE: f64 = 1e-12;

/// Least-squares residual `min_a ||A a - v||_2`, which equals
/// `sqrt(det(D* D) / det(A* A))` with `D = (A, v)`.
///
/// Rank deficiency is detected on the Gram determinant: `A* A` is rejected
/// when `|det|` drops below `1e-12 * (max Gram diagonal)^k`. The returned
/// value follows the orthogonal-projection evaluation, which stays accurate
/// down to residuals near machine precision; the determinant-ratio evaluation
/// is available as [`projection_residual_det_ratio`] and the two must agree
/// to 1e-9 relative wherever the ratio is numerically meaningful.
pub fn projection_residual(a: &VandermondeMatrix, v: &[Complex64]) -> Result<f64> {
    let mat = a.to_matrix();
    projection_residual_matrix(&mat, v)
}

pub(crate) fn check_projection_shape(mat: &CMatrix, v: &[Complex64]) -> Result<()> {
    if mat.rows() <= mat.cols() {
        return Err(Error::DomainError(format!(
            "projection requires more rows than columns, got {}x{}",
            mat.rows(),
            mat.cols()
        )));
    }
    if v.len() != mat.rows() {
        return Err(Error::DomainError(format!(
            "vector length {} does not match row count {}",
            v.len(),
            mat.rows()
        )));
    }
    Ok(())
}

/// Log-magnitude Gram determinant with the scale-relative rank test.
fn checked_log_det_gram(mat: &CMatrix) -> Result<f64> {
    let k = mat.cols();
    let gram = mat.gram();
    let max_diag = (0..k).map(|i| gram[(i, i)].re).fold(0.0f64, f64::max);
    if max_diag <= 0.0 {
        return Err(Error::RankDeficient("zero matrix".into()));
    }
    let log_det = linalg::log_abs_det(&gram);
    let threshold = GRAM_RANK_TOLERANCE.ln() + k as f64 * max_diag.ln();
    if log_det <= threshold {
        return Err(Error::RankDeficient(format!(
            "log|det(A*A)| = {log_det:.3} <= {threshold:.3}"
        )));
    }
    Ok(log_det)
}

pub(crate) fn projection_residual_matrix(mat: &CMatrix, v: &[Complex64]) -> Result<f64> {
    check_projection_shape(mat, v)?;
    checked_log_det_gram(mat)?;
    linalg::orthogonal_residual(mat, v)
}

/// The determinant-ratio evaluation of the same residual: both Gram
/// determinants from pivoted triangular factorizations, combined in the
/// log-magnitude domain.
pub fn projection_residual_det_ratio(a: &VandermondeMatrix, v: &[Complex64]) -> Result<f64> {
    let mat = a.to_matrix();
    check_projection_shape(&mat, v)?;
    let log_det_a = checked_log_det_gram(&mat)?;
    let mut cols: Vec<Vec<Complex64>> = (0..mat.cols()).map(|j| mat.column(j)).collect();
    cols.push(v.to_vec());
    let d = CMatrix::from_columns(&cols);
    let log_det_d = linalg::log_abs_det(&d.gram());
    Ok((0.5 * (log_det_d - log_det_a)).exp())
}

/// Exact inverse infinity-norm of a square Vandermonde matrix next to its
/// product upper bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseInfNorm {
    /// `||V^{-1}||_inf` from solving the k linear systems.
    pub exact: f64,
    /// `max_j prod_{p != j} (1 + |z_p|) / |z_j - z_p|`; always >= `exact`.
    pub upper_bound: f64,
}

const DUPLICATE_NODE_TOLERANCE: f64 = 1e-14;

/// Computes both sides of the inverse-norm estimate for the square
/// Vandermonde matrix on the given nodes (degree `k - 1`).
pub fn vandermonde_inverse_inf_norm(nodes: &[Complex64]) -> Result<InverseInfNorm> {
    let k = nodes.len();
    if k < 2 {
        return Err(Error::DomainError("need at least 2 nodes".into()));
    }
    let scale = nodes.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    for i in 0..k {
        for j in i + 1..k {
            if (nodes[i] - nodes[j]).norm() <= DUPLICATE_NODE_TOLERANCE * scale {
                return Err(Error::SingularMatrix);
            }
        }
    }
    let v = VandermondeMatrix::new(k - 1, nodes.to_vec()).to_matrix();
    let inv = linalg::lu_inverse(&v)?;
    let mut exact = 0.0f64;
    for i in 0..k {
        let row_sum: f64 = (0..k).map(|j| inv[(i, j)].norm()).sum();
        exact = exact.max(row_sum);
    }
    let mut upper_bound = 0.0f64;
    for j in 0..k {
        let prod: f64 = (0..k)
            .filter(|&p| p != j)
            .map(|p| (1.0 + nodes[p].norm()) / (nodes[j] - nodes[p]).norm())
            .product();
        upper_bound = upper_bound.max(prod);
    }
    Ok(InverseInfNorm { exact, upper_bound })
}

/// Action of the inverse real Vandermonde matrix on a moment vector: entry
/// `j` is the Lagrange basis polynomial for node `j` evaluated at `t`.
pub fn lagrange_inverse_action(t_nodes: &[f64], t: f64) -> Result<Vec<f64>> {
    let k = t_nodes.len();
    if k == 0 {
        return Err(Error::DomainError("need at least one node".into()));
    }
    let scale = t_nodes.iter().map(|x| x.abs()).fold(0.0f64, f64::max).max(1.0);
    for i in 0..k {
        for j in i + 1..k {
            if (t_nodes[i] - t_nodes[j]).abs() <= DUPLICATE_NODE_TOLERANCE * scale {
                return Err(Error::DuplicateNodes);
            }
        }
    }
    Ok((0..k)
        .map(|j| {
            (0..k)
                .filter(|&q| q != j)
                .map(|q| (t - t_nodes[q]) / (t_nodes[j] - t_nodes[q]))
                .product()
        })
        .collect())
}
