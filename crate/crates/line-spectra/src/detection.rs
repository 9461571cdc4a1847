//! Number detection by singular-value thresholding of a decimated Hankel
//! matrix.
//!
//! From `2s + 1` decimated samples the detector forms the `(s+1) x (s+1)`
//! Hankel matrix, takes its SVD, and counts singular values strictly above
//! `(s + 1) * sigma`. Noise bounded by `sigma` entrywise perturbs every
//! singular value by at most the Frobenius norm of the noise block, which is
//! below `(s + 1) * sigma`, so the count never exceeds the true number of
//! spectra and reaches it once the separation is large enough. The sweeping
//! variant runs every admissible `s` and keeps the maximum count.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::measure::{DiscreteMeasure, IntervalSpec, Measurement};
use crate::vandermonde::zeta;

/// Decimated-sample Hankel matrix `H[i][j] = Y(z_{i+j+1})`.
#[derive(Debug, Clone)]
pub struct HankelMatrix {
    s: usize,
    stride: usize,
    entries: CMatrix,
    /// 0-based indices of the `2s + 1` decimated samples in the measurement.
    source_indices: Vec<usize>,
}

impl HankelMatrix {
    pub fn s(&self) -> usize {
        self.s
    }

    pub fn stride(&self) -> usize {
        self.stride
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn source_indices(&self) -> &[usize] {
        &self.source_indices
    }
}

/// Decimation stride `r = floor((M - 1) / (2s))`, which keeps every index
/// `t r` for `t = 0..2s` inside the measurement.
pub fn decimation_stride(m: usize, s: usize) -> Result<usize> {
    if s < 1 {
        return Err(Error::DomainError("matrix size parameter s must be >= 1".into()));
    }
    let needed = 2 * s + 1;
    if m < needed {
        return Err(Error::TooFewSamples { m, needed });
    }
    Ok((m - 1) / (2 * s))
}

/// Builds the `(s+1) x (s+1)` Hankel matrix from the decimated samples.
pub fn build_hankel(y: &Measurement, s: usize) -> Result<HankelMatrix> {
    let r = decimation_stride(y.grid.len(), s)?;
    let source_indices: Vec<usize> = (0..=2 * s).map(|t| t * r).collect();
    let entries = CMatrix::from_fn(s + 1, s + 1, |i, j| y.values[(i + j) * r]);
    Ok(HankelMatrix { s, stride: r, entries, source_indices })
}

/// Descending singular values together with the threshold that was applied
/// to them (zero until a detector sets one).
#[derive(Debug, Clone, Serialize)]
pub struct SingularSpectrum {
    #[serde(rename = "singular_values")]
    values: Vec<f64>,
    pub threshold: f64,
}

impl SingularSpectrum {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of values strictly above the stored threshold.
    pub fn count_above_threshold(&self) -> usize {
        self.values.iter().filter(|&&v| v > self.threshold).count()
    }
}

/// Singular values of the Hankel matrix, descending.
pub fn singular_spectrum(h: &HankelMatrix) -> Result<SingularSpectrum> {
    let svd = linalg::jacobi_svd(&h.entries)?;
    Ok(SingularSpectrum { values: svd.singular_values, threshold: 0.0 })
}

/// One thresholding pass at a fixed `s`.
#[derive(Debug, Clone, Serialize)]
pub struct PerSDetection {
    pub s: usize,
    #[serde(flatten)]
    pub spectrum: SingularSpectrum,
    pub n: usize,
    /// Every singular value cleared the threshold; the declared noise level
    /// is then too small to bound anything and the count `s + 1` is a floor
    /// on the truth rather than an estimate.
    pub saturated: bool,
}

/// Detected number at a fixed `s`: the largest `n` with
/// `sigma_hat_n > (s+1) sigma` strictly.
///
/// A declared noise level of zero falls back to the numerical rank at
/// `1e-10 * sigma_hat_1`.
pub fn detect_count_at_s(y: &Measurement, s: usize) -> Result<usize> {
    Ok(detect_at_s_detailed(y, s)?.n)
}

/// Like [`detect_count_at_s`] but keeps the spectrum and threshold.
pub fn detect_at_s_detailed(y: &Measurement, s: usize) -> Result<PerSDetection> {
    let h = build_hankel(y, s)?;
    let mut spectrum = singular_spectrum(&h)?;
    let sigma_max = spectrum.values.first().copied().unwrap_or(0.0);
    spectrum.threshold = if y.sigma > 0.0 {
        (s as f64 + 1.0) * y.sigma
    } else {
        1e-10 * sigma_max
    };
    let n = spectrum.count_above_threshold();
    Ok(PerSDetection { s, spectrum, n, saturated: n == s + 1 })
}

/// Result of the sweeping detector.
#[derive(Debug, Clone, Serialize)]
pub struct DetectionResult {
    pub n_detected: usize,
    pub per_s: Vec<PerSDetection>,
    /// Inclusive range of `s` values swept.
    pub s_range_used: (usize, usize),
    /// Some pass saturated; see [`PerSDetection::saturated`].
    pub saturated: bool,
}

/// Runs [`detect_count_at_s`] for every `s` in `1..=floor((M-1)/2)` and
/// returns the maximum count with the full per-`s` trace.
pub fn detect_count_sweep(y: &Measurement) -> Result<DetectionResult> {
    let m = y.grid.len();
    if m < 3 {
        return Err(Error::TooFewSamples { m, needed: 3 });
    }
    let s_max = (m - 1) / 2;
    let per_s: Vec<PerSDetection> = (1..=s_max)
        .map(|s| detect_at_s_detailed(y, s))
        .collect::<Result<_>>()?;
    let n_detected = per_s.iter().map(|p| p.n).max().unwrap_or(0);
    let saturated = per_s.iter().any(|p| p.saturated);
    Ok(DetectionResult { n_detected, per_s, s_range_used: (1, s_max), saturated })
}

/// Lower bound on the smallest nonzero singular value of the noiseless
/// Hankel matrix:
/// `m_min zeta(n)^2 theta_min(Omega, s)^{2n-2} / (n pi^{2n-2})` with
/// `theta_min(Omega, s) = (Omega / s) d_min`.
pub fn min_singular_lower_bound(mu: &DiscreteMeasure, omega: f64, s: usize) -> Result<f64> {
    let n = mu.len();
    let d_min = mu
        .d_min()
        .ok_or_else(|| Error::DegenerateInstance("bound needs at least two supports".into()))?;
    if s < n {
        return Err(Error::DomainError(format!("bound needs s >= n, got s = {s}, n = {n}")));
    }
    let interval = IntervalSpec::new(n, omega)?;
    for &y in mu.supports() {
        if !interval.contains(y) {
            return Err(Error::SupportsOutsideInterval {
                support: y,
                half_width: interval.half_width(),
            });
        }
    }
    let theta_min = omega / s as f64 * d_min;
    let nf = n as f64;
    let z = zeta(n as u64)?;
    Ok(mu.m_min() * z * z * theta_min.powi(2 * n as i32 - 2)
        / (nf * std::f64::consts::PI.powi(2 * n as i32 - 2)))
}
