//! Constructive worst-case instances: pairs of distinct measures whose
//! sampled Fourier data differ by less than `sigma` everywhere on
//! `[-Omega, Omega]`.
//!
//! Both constructions place equispaced nodes a critical distance `tau` apart
//! and split a Vandermonde null vector into two measures. The combined
//! measure `gamma` then has all low-order moments equal to zero, so its
//! transform is a Taylor tail of order `tau^{2n-2}` (number case) or
//! `tau^{2n-1}` (support case), and the explicit choice of `tau` pushes that
//! tail below `sigma`. The number-case pair has `n` versus `n - 1` supports,
//! so no method can tell the counts apart at noise level `sigma`; the
//! support-case pair has `n` supports each but disjoint support sets.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::measure::{
    fourier_samples, fourier_transform_at, is_sigma_admissible, DiscreteMeasure, Measurement,
    SamplingGrid,
};
use crate::vandermonde::VandermondeVector;

use std::f64::consts::{E, PI};

/// Which lower-bound construction produced a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AdversarialKind {
    Number,
    Support,
}

/// Evidence recorded while verifying a constructed pair.
#[derive(Debug, Clone, Serialize)]
pub struct PairVerification {
    /// `max |F(gamma)(x)|` over the dense frequency grid (including both
    /// endpoints).
    pub sup_dense_grid: f64,
    /// Closed-form Taylor-tail bound on the same supremum.
    pub taylor_tail_bound: f64,
    /// Points in the dense verification grid.
    pub grid_points: usize,
    /// The short measure is sigma-admissible for the long measure's
    /// noiseless data on a 200-sample grid.
    pub admissible_on_sample_grid: bool,
}

/// A verified pair `(mu, mu_hat)` with `||[mu_hat] - [mu]||_inf < sigma`.
#[derive(Debug, Clone, Serialize)]
pub struct AdversarialPair {
    pub kind: AdversarialKind,
    pub mu: DiscreteMeasure,
    pub mu_hat: DiscreteMeasure,
    pub tau: f64,
    pub sigma: f64,
    pub m_min: f64,
    pub verification: PairVerification,
}

const NULL_ENTRY_TOLERANCE: f64 = 1e-12;
const NULL_RESIDUAL_TOLERANCE: f64 = 1e-10;
const MAX_CONSTRUCTION_N: usize = 8;

/// Real null vector of the underdetermined Vandermonde system
/// `A a = 0`, `A = (phi_d(t_1), ..., phi_d(t_p))` with `d = p - 2`.
///
/// The vector is taken from the smallest right singular vector (the null
/// space is invariant under a common scaling of the nodes, so the nodes are
/// normalized first), every entry is required to be nonzero, and the result
/// is scaled to `min_j |a_j| = 1` with a positive first entry.
pub fn vandermonde_null_vector(t_nodes: &[f64], degree: usize) -> Result<Vec<f64>> {
    let p = t_nodes.len();
    if p < 2 {
        return Err(Error::DomainError("need at least two nodes".into()));
    }
    if degree + 2 != p {
        return Err(Error::DomainError(format!(
            "degree must be p - 2 = {}, got {degree}",
            p - 2
        )));
    }
    let scale = t_nodes.iter().map(|t| t.abs()).fold(0.0f64, f64::max);
    if scale == 0.0 {
        return Err(Error::DegenerateNodes);
    }
    for i in 0..p {
        for j in i + 1..p {
            if (t_nodes[i] - t_nodes[j]).abs() <= 1e-14 * scale {
                return Err(Error::DegenerateNodes);
            }
        }
    }
    let normalized: Vec<f64> = t_nodes.iter().map(|t| t / scale).collect();
    // Pad with a zero row so the one-sided SVD sees a square system; the
    // right singular vectors are unchanged.
    let mat = CMatrix::from_fn(p, p, |i, j| {
        if i <= degree {
            Complex64::new(normalized[j].powi(i as i32), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let svd = linalg::jacobi_svd(&mat)?;
    let raw = svd.v.column(p - 1);

    // Cancel the arbitrary global phase, then the entries must be real.
    let leader = raw
        .iter()
        .cloned()
        .max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap())
        .unwrap();
    let phase = leader / leader.norm();
    let mut entries = Vec::with_capacity(p);
    for z in &raw {
        let aligned = z / phase;
        if aligned.im.abs() > 1e-10 {
            return Err(Error::VerificationFailed(format!(
                "null vector has non-real entry {aligned}"
            )));
        }
        entries.push(aligned.re);
    }
    let min_abs = entries.iter().map(|a| a.abs()).fold(f64::INFINITY, f64::min);
    if min_abs < NULL_ENTRY_TOLERANCE {
        return Err(Error::DegenerateNodes);
    }
    let orient = if entries[0] < 0.0 { -1.0 } else { 1.0 };
    for a in &mut entries {
        // Divide by the minimum magnitude itself so the smallest entry
        // normalizes to exactly +-1.
        *a = *a / min_abs * orient;
    }

    // Residual against the original, unscaled system.
    let mut residual = 0.0f64;
    let mut column_scale = 0.0f64;
    for k in 0..=degree {
        let row_sum: f64 = entries
            .iter()
            .zip(t_nodes)
            .map(|(a, t)| a * t.powi(k as i32))
            .sum();
        residual = residual.max(row_sum.abs());
    }
    for &t in t_nodes {
        let phi = VandermondeVector::new(degree, Complex64::new(t, 0.0)).entries();
        column_scale = column_scale.max(phi.iter().map(|z| z.norm()).fold(0.0, f64::max));
    }
    let amplitude_scale = entries.iter().map(|a| a.abs()).fold(0.0f64, f64::max);
    if residual > NULL_RESIDUAL_TOLERANCE * column_scale * amplitude_scale {
        return Err(Error::VerificationFailed(format!(
            "null-vector residual {residual:.3e} exceeds tolerance"
        )));
    }
    Ok(entries)
}

fn validate_construction(n: usize, omega: f64, sigma: f64, m_min: f64) -> Result<()> {
    if n < 2 {
        return Err(Error::DomainError("construction needs n >= 2".into()));
    }
    if n > MAX_CONSTRUCTION_N {
        return Err(Error::BudgetExceeded(format!(
            "construction capped at n = {MAX_CONSTRUCTION_N}; the null system degrades beyond"
        )));
    }
    if !(omega > 0.0) {
        return Err(Error::DomainError("cutoff must be positive".into()));
    }
    if !(sigma > 0.0 && sigma < m_min) {
        return Err(Error::DomainError(format!(
            "need 0 < sigma < m_min, got sigma = {sigma}, m_min = {m_min}"
        )));
    }
    Ok(())
}

/// Dense verification of `sup |F(gamma)(x)|` over `[-omega, omega]` plus the
/// admissibility check on a 200-sample grid, where `gamma = mu - mu_hat` as
/// measures (the full null-vector combination).
fn verify_pair(
    mu: &DiscreteMeasure,
    mu_hat: &DiscreteMeasure,
    omega: f64,
    sigma: f64,
    tau: f64,
    taylor_tail_bound: f64,
) -> Result<PairVerification> {
    let n = mu.len();
    let gamma = DiscreteMeasure::new(
        mu.supports().iter().chain(mu_hat.supports()).copied().collect(),
        mu.amplitudes()
            .iter()
            .copied()
            .chain(mu_hat.amplitudes().iter().map(|a| -a))
            .collect(),
    )?;
    let grid_points = 10 * (omega * (n as f64 - 1.0) * tau).ceil().max(1.0) as usize + 1000;
    let mut sup = 0.0f64;
    for q in 0..grid_points {
        let x = -omega + 2.0 * omega * q as f64 / (grid_points - 1) as f64;
        sup = sup.max(fourier_transform_at(&gamma, x).norm());
    }
    if !(sup < sigma) {
        return Err(Error::VerificationFailed(format!(
            "sup |F(gamma)| = {sup:.6e} is not below sigma = {sigma:.6e}"
        )));
    }

    let grid = SamplingGrid::new(omega, 200)?;
    let data = Measurement::new(fourier_samples(mu, &grid), grid, sigma, None)?;
    let admissible = is_sigma_admissible(mu_hat, &data);
    if !admissible {
        return Err(Error::VerificationFailed(
            "short measure is not sigma-admissible for the long measure's data".into(),
        ));
    }
    Ok(PairVerification {
        sup_dense_grid: sup,
        taylor_tail_bound,
        grid_points,
        admissible_on_sample_grid: admissible,
    })
}

/// Number-detection lower-bound pair: `mu` with `n` supports and `mu_hat`
/// with `n - 1`, separated by
/// `tau = 0.81 e^{-3/2} / Omega * (sigma / m_min)^{1/(2n-2)}`, with
/// `||[mu_hat] - [mu]||_inf < sigma`.
pub fn construct_number_instance(
    n: usize,
    omega: f64,
    sigma: f64,
    m_min: f64,
) -> Result<AdversarialPair> {
    validate_construction(n, omega, sigma, m_min)?;
    let nf = n as f64;
    let tau = 0.81 * E.powf(-1.5) / omega * (sigma / m_min).powf(1.0 / (2.0 * nf - 2.0));

    let p = 2 * n - 1;
    let nodes: Vec<f64> = (0..p).map(|j| (j as f64 - (nf - 1.0)) * tau).collect();
    let mut amps = vandermonde_null_vector(&nodes, p - 2)?;
    for a in &mut amps {
        *a *= m_min;
    }

    let min_first = amps[..n].iter().map(|a| a.abs()).fold(f64::INFINITY, f64::min);
    let min_all = amps.iter().map(|a| a.abs()).fold(f64::INFINITY, f64::min);
    // Keep the block whose smallest amplitude attains the global minimum.
    let (mu_range, hat_range) = if min_first <= min_all * (1.0 + 1e-12) {
        (0..n, n..p)
    } else {
        (n - 1..p, 0..n - 1)
    };
    let mu = DiscreteMeasure::new(
        mu_range.clone().map(|j| nodes[j]).collect(),
        mu_range.map(|j| Complex64::new(amps[j], 0.0)).collect(),
    )?;
    let mu_hat = DiscreteMeasure::new(
        hat_range.clone().map(|j| nodes[j]).collect(),
        hat_range.map(|j| Complex64::new(-amps[j], 0.0)).collect(),
    )?;

    let tail = (2.0 * nf - 1.0) * (nf - 1.0).sqrt() * m_min / (2.0 * PI.sqrt())
        * (E * tau * omega).powi(2 * n as i32 - 2)
        * E.powf(nf - 1.0);
    let verification =
        verify_pair(&mu, &mu_hat, omega, sigma, tau, tail)?;
    Ok(AdversarialPair {
        kind: AdversarialKind::Number,
        mu,
        mu_hat,
        tau,
        sigma,
        m_min,
        verification,
    })
}

/// Support-recovery lower-bound pair: `mu` on `{-n tau, ..., -tau}` and
/// `mu_hat` on `{0, ..., (n-1) tau}`, both with `n` supports, separated by
/// `tau = 0.49 e^{-3/2} / Omega * (sigma / m_min)^{1/(2n-1)}`, with
/// `||[mu_hat] - [mu]||_inf < sigma`.
pub fn construct_support_instance(
    n: usize,
    omega: f64,
    sigma: f64,
    m_min: f64,
) -> Result<AdversarialPair> {
    validate_construction(n, omega, sigma, m_min)?;
    let nf = n as f64;
    let tau = 0.49 * E.powf(-1.5) / omega * (sigma / m_min).powf(1.0 / (2.0 * nf - 1.0));

    let p = 2 * n;
    let nodes: Vec<f64> = (0..p).map(|j| (j as f64 - nf) * tau).collect();
    let mut amps = vandermonde_null_vector(&nodes, p - 2)?;
    for a in &mut amps {
        *a *= m_min;
    }

    let mu = DiscreteMeasure::new(
        nodes[..n].to_vec(),
        amps[..n].iter().map(|&a| Complex64::new(a, 0.0)).collect(),
    )?;
    let mu_hat = DiscreteMeasure::new(
        nodes[n..].to_vec(),
        amps[n..].iter().map(|&a| Complex64::new(-a, 0.0)).collect(),
    )?;

    let tail = m_min * nf * nf * E.powf(3.0 * nf) * (tau * omega).powi(2 * n as i32 - 1)
        / (PI * (nf - 0.5)).sqrt();
    let verification =
        verify_pair(&mu, &mu_hat, omega, sigma, tau, tail)?;
    Ok(AdversarialPair {
        kind: AdversarialKind::Support,
        mu,
        mu_hat,
        tau,
        sigma,
        m_min,
        verification,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::sup_residual;

    fn binomial(n: u64, k: u64) -> f64 {
        let mut acc = 1.0f64;
        for i in 0..k {
            acc = acc * (n - i) as f64 / (i + 1) as f64;
        }
        acc
    }

    #[test]
    fn null_vector_second_difference() {
        let tau = 0.37;
        let nodes = [-tau, 0.0, tau];
        let a = vandermonde_null_vector(&nodes, 1).unwrap();
        let expect = [1.0, -2.0, 1.0];
        for (ai, ei) in a.iter().zip(&expect) {
            assert!((ai - ei).abs() < 1e-10, "{a:?}");
        }
    }

    #[test]
    fn null_vector_equispaced_binomial_pattern() {
        // p equispaced nodes: alternating binomial coefficients, smallest 1.
        for p in [4usize, 5, 7] {
            let tau = 0.01;
            let nodes: Vec<f64> = (0..p).map(|j| (j as f64 - 1.4) * tau).collect();
            let a = vandermonde_null_vector(&nodes, p - 2).unwrap();
            for (j, aj) in a.iter().enumerate() {
                let expect = binomial(p as u64 - 1, j as u64) * if j % 2 == 0 { 1.0 } else { -1.0 };
                assert!(
                    (aj - expect).abs() <= 1e-8 * expect.abs(),
                    "p = {p}: {a:?}"
                );
            }
        }
    }

    #[test]
    fn null_vector_moment_annihilation() {
        let nodes = [-0.8, -0.15, 0.3, 0.55, 1.1];
        let a = vandermonde_null_vector(&nodes, 3).unwrap();
        let amp_sum: f64 = a.iter().map(|x| x.abs()).sum();
        for k in 0..=3 {
            let q: f64 = a.iter().zip(&nodes).map(|(ai, t)| ai * t.powi(k)).sum();
            let scale = amp_sum * nodes.iter().map(|t| t.abs()).fold(0.0f64, f64::max).powi(k);
            assert!(q.abs() <= 1e-9 * scale, "k = {k}: {q}");
        }
    }

    #[test]
    fn null_vector_rejects_coincident_nodes() {
        assert!(matches!(
            vandermonde_null_vector(&[0.1, 0.1, 0.5], 1),
            Err(Error::DegenerateNodes)
        ));
    }

    #[test]
    fn number_instance_n2_matches_closed_form() {
        let (omega, sigma, m) = (1.0, 1e-4, 1.0);
        let pair = construct_number_instance(2, omega, sigma, m).unwrap();
        let tau_expect = 0.81 * E.powf(-1.5) * 1e-2;
        assert!((pair.tau - tau_expect).abs() <= 1e-15);
        // mu = m delta_{-tau} - 2m delta_0, mu_hat = -m delta_tau.
        assert_eq!(pair.mu.len(), 2);
        assert_eq!(pair.mu_hat.len(), 1);
        assert!((pair.mu.supports()[0] + pair.tau).abs() < 1e-18);
        assert_eq!(pair.mu.supports()[1], 0.0);
        assert!((pair.mu_hat.supports()[0] - pair.tau).abs() < 1e-18);
        // F(gamma)(x) = 2 m (cos(tau x) - 1), sup <= m tau^2 Omega^2.
        let expected_sup = 2.0 * m * (1.0 - (pair.tau * omega).cos());
        assert!((pair.verification.sup_dense_grid - expected_sup).abs() <= 1e-12);
        assert!(pair.verification.sup_dense_grid < sigma);
    }

    #[test]
    fn number_instance_properties_across_n() {
        for n in 2..=6 {
            let pair = construct_number_instance(n, 1.0, 1e-4, 1.0).unwrap();
            assert_eq!(pair.mu.len(), n);
            assert_eq!(pair.mu_hat.len(), n - 1);
            // Minimum separation is exactly tau.
            let d = pair.mu.d_min().unwrap();
            assert!((d - pair.tau).abs() <= 1e-12 * pair.tau);
            // min |a_j| = m_min exactly on the combined amplitude set.
            let min_amp = pair
                .mu
                .amplitudes()
                .iter()
                .chain(pair.mu_hat.amplitudes())
                .map(|a| a.norm())
                .fold(f64::INFINITY, f64::min);
            assert_eq!(min_amp, 1.0);
            // Amplitude sum bound.
            let total: f64 = pair
                .mu
                .amplitudes()
                .iter()
                .chain(pair.mu_hat.amplitudes())
                .map(|a| a.norm())
                .sum();
            let nf = n as f64;
            assert!(total <= (2.0 * nf - 1.0) * (nf - 1.0) * 4.0f64.powf(nf - 1.0) + 1e-9);
            // Dense sup below both sigma and the analytic tail bound.
            assert!(pair.verification.sup_dense_grid < pair.sigma);
            assert!(pair.verification.sup_dense_grid <= pair.verification.taylor_tail_bound);
            assert!(pair.verification.taylor_tail_bound < pair.sigma);
        }
    }

    #[test]
    fn support_instance_n2_layout() {
        let (omega, sigma, m) = (1.0, 1e-4, 1.0);
        let pair = construct_support_instance(2, omega, sigma, m).unwrap();
        let tau_expect = 0.49 * E.powf(-1.5) * (1e-4f64).powf(1.0 / 3.0);
        assert!((pair.tau - tau_expect).abs() <= 1e-15);
        assert_eq!(pair.mu.len(), 2);
        assert_eq!(pair.mu_hat.len(), 2);
        // Supports {-2 tau, -tau} and {0, tau}.
        assert!((pair.mu.supports()[0] + 2.0 * pair.tau).abs() < 1e-18);
        assert!((pair.mu.supports()[1] + pair.tau).abs() < 1e-18);
        assert_eq!(pair.mu_hat.supports()[0], 0.0);
        assert!((pair.mu_hat.supports()[1] - pair.tau).abs() < 1e-18);
        // Null vector pattern (1, -3, 3, -1) scaled by m.
        let all_amps: Vec<f64> = pair
            .mu
            .amplitudes()
            .iter()
            .map(|a| a.re)
            .chain(pair.mu_hat.amplitudes().iter().map(|a| -a.re))
            .collect();
        let expect = [1.0, -3.0, 3.0, -1.0];
        for (a, e) in all_amps.iter().zip(&expect) {
            assert!((a - e).abs() <= 1e-8 * e.abs());
        }
    }

    #[test]
    fn support_instance_properties_across_n() {
        for n in 2..=6 {
            let pair = construct_support_instance(n, 1.0, 1e-4, 1.0).unwrap();
            assert_eq!(pair.mu.len(), n);
            assert_eq!(pair.mu_hat.len(), n);
            let min_amp = pair
                .mu
                .amplitudes()
                .iter()
                .chain(pair.mu_hat.amplitudes())
                .map(|a| a.norm())
                .fold(f64::INFINITY, f64::min);
            assert_eq!(min_amp, 1.0);
            let total: f64 = pair
                .mu
                .amplitudes()
                .iter()
                .chain(pair.mu_hat.amplitudes())
                .map(|a| a.norm())
                .sum();
            let nf = n as f64;
            assert!(total <= nf * nf * 4.0f64.powf(nf) + 1e-9);
            assert!(pair.verification.sup_dense_grid < pair.sigma);
            assert!(pair.verification.sup_dense_grid <= pair.verification.taylor_tail_bound);
        }
    }

    #[test]
    fn residual_below_sigma_on_sampling_grids() {
        for n in [2usize, 4] {
            let pair = construct_number_instance(n, 2.0, 1e-5, 1.0).unwrap();
            for m in [50usize, 200] {
                let grid = SamplingGrid::new(2.0, m).unwrap();
                let data =
                    Measurement::new(fourier_samples(&pair.mu, &grid), grid, pair.sigma, None)
                        .unwrap();
                assert!(sup_residual(&pair.mu_hat, &data) < pair.sigma);
            }
        }
    }

    #[test]
    fn scaling_law_preserves_geometry() {
        let base = construct_number_instance(3, 1.0, 1e-5, 1.0).unwrap();
        let scaled = construct_number_instance(3, 1.0, 1e-2, 1e3).unwrap();
        assert!((base.tau - scaled.tau).abs() <= 1e-15 * base.tau.abs());
        assert_eq!(base.mu.supports(), scaled.mu.supports());
        for (a, b) in base.mu.amplitudes().iter().zip(scaled.mu.amplitudes()) {
            assert!((a * 1e3 - b).norm() <= 1e-9 * b.norm());
        }
    }

    #[test]
    fn construction_validates_inputs() {
        assert!(construct_number_instance(1, 1.0, 1e-4, 1.0).is_err());
        assert!(construct_number_instance(9, 1.0, 1e-4, 1.0).is_err());
        assert!(construct_number_instance(3, 1.0, 2.0, 1.0).is_err());
        assert!(construct_number_instance(3, 0.0, 1e-4, 1.0).is_err());
        assert!(construct_support_instance(3, 1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn moment_annihilation_for_constructed_pairs() {
        for n in 2..=5usize {
            let pair = construct_number_instance(n, 1.0, 1e-5, 1.0).unwrap();
            // gamma = mu - (-mu_hat) = mu + negated mu_hat amplitudes.
            let nodes: Vec<f64> = pair
                .mu
                .supports()
                .iter()
                .chain(pair.mu_hat.supports())
                .copied()
                .collect();
            let amps: Vec<f64> = pair
                .mu
                .amplitudes()
                .iter()
                .map(|a| a.re)
                .chain(pair.mu_hat.amplitudes().iter().map(|a| -a.re))
                .collect();
            let amp_sum: f64 = amps.iter().map(|a| a.abs()).sum();
            let node_scale = nodes.iter().map(|t| t.abs()).fold(0.0f64, f64::max);
            for k in 0..=(2 * n - 3) {
                let q: f64 = amps.iter().zip(&nodes).map(|(a, t)| a * t.powi(k as i32)).sum();
                assert!(
                    q.abs() <= 1e-9 * amp_sum * node_scale.powi(k as i32),
                    "n = {n}, k = {k}"
                );
            }
        }
    }
}
