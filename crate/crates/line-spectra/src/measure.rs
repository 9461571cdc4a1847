//! Discrete measures, the sampled Fourier measurement model with bounded
//! deterministic noise, and the admissibility / neighborhood predicates.
//!
//! A measure is a finite list of spikes `sum_j a_j delta_{y_j}` with distinct
//! real supports and nonzero complex amplitudes. Its data is the Fourier
//! transform sampled at `M` equispaced frequencies spanning `[-Omega, Omega]`,
//! contaminated by noise bounded in magnitude by `sigma` at every sample.
//!
//! The model does not enforce the aliasing guard `h <= pi / max|y_j|`; with a
//! coarse grid the spectra are only identifiable modulo `2 pi / h` shifts, and
//! callers who need uniqueness must pick `M` accordingly.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{disk_sample, seeded_rng};

/// A discrete measure: spikes at distinct supports with nonzero complex
/// amplitudes, stored sorted by support.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MeasureJson", into = "MeasureJson")]
pub struct DiscreteMeasure {
    supports: Vec<f64>,
    amplitudes: Vec<Complex64>,
}

impl DiscreteMeasure {
    /// Validates and normalizes (sorts spikes by support).
    pub fn new(supports: Vec<f64>, amplitudes: Vec<Complex64>) -> Result<Self> {
        if supports.is_empty() {
            return Err(Error::InvalidMeasure("a measure needs at least one spike".into()));
        }
        if supports.len() != amplitudes.len() {
            return Err(Error::InvalidMeasure(format!(
                "{} supports but {} amplitudes",
                supports.len(),
                amplitudes.len()
            )));
        }
        if supports.iter().any(|y| !y.is_finite()) {
            return Err(Error::InvalidMeasure("non-finite support".into()));
        }
        for (j, a) in amplitudes.iter().enumerate() {
            if !a.re.is_finite() || !a.im.is_finite() || a.norm() == 0.0 {
                return Err(Error::InvalidMeasure(format!("amplitude {j} is zero or non-finite")));
            }
        }
        let mut spikes: Vec<(f64, Complex64)> =
            supports.into_iter().zip(amplitudes).collect();
        spikes.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        if spikes.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidMeasure("supports must be pairwise distinct".into()));
        }
        let (supports, amplitudes) = spikes.into_iter().unzip();
        Ok(Self { supports, amplitudes })
    }

    /// Single spike `a * delta_y`.
    pub fn spike(y: f64, a: Complex64) -> Result<Self> {
        Self::new(vec![y], vec![a])
    }

    pub fn len(&self) -> usize {
        self.supports.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn supports(&self) -> &[f64] {
        &self.supports
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Smallest amplitude modulus; positive by construction.
    pub fn m_min(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm()).fold(f64::INFINITY, f64::min)
    }

    /// Minimum support separation; `None` for a single spike.
    pub fn d_min(&self) -> Option<f64> {
        if self.supports.len() < 2 {
            return None;
        }
        Some(
            self.supports
                .windows(2)
                .map(|w| w[1] - w[0])
                .fold(f64::INFINITY, f64::min),
        )
    }

    /// All supports shifted by `c`.
    pub fn translated(&self, c: f64) -> Self {
        Self {
            supports: self.supports.iter().map(|y| y + c).collect(),
            amplitudes: self.amplitudes.clone(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct MeasureJson {
    supports: Vec<f64>,
    amplitudes_re: Vec<f64>,
    amplitudes_im: Vec<f64>,
}

impl TryFrom<MeasureJson> for DiscreteMeasure {
    type Error = Error;
    fn try_from(j: MeasureJson) -> Result<Self> {
        if j.amplitudes_re.len() != j.amplitudes_im.len() {
            return Err(Error::InvalidMeasure(
                "amplitudes_re and amplitudes_im lengths differ".into(),
            ));
        }
        let amplitudes = j
            .amplitudes_re
            .into_iter()
            .zip(j.amplitudes_im)
            .map(|(re, im)| Complex64::new(re, im))
            .collect();
        DiscreteMeasure::new(j.supports, amplitudes)
    }
}

impl From<DiscreteMeasure> for MeasureJson {
    fn from(m: DiscreteMeasure) -> Self {
        Self {
            supports: m.supports,
            amplitudes_re: m.amplitudes.iter().map(|a| a.re).collect(),
            amplitudes_im: m.amplitudes.iter().map(|a| a.im).collect(),
        }
    }
}

/// `M` equispaced sample frequencies spanning `[-Omega, Omega]` exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingGrid {
    omega: f64,
    m: usize,
}

impl SamplingGrid {
    pub fn new(omega: f64, m: usize) -> Result<Self> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::InvalidGrid(format!("cutoff must be positive, got {omega}")));
        }
        if m < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 samples, got {m}")));
        }
        Ok(Self { omega, m })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Sample spacing `2 Omega / (M - 1)`.
    pub fn spacing(&self) -> f64 {
        2.0 * self.omega / (self.m - 1) as f64
    }

    /// Frequency of 0-based sample `q`; the endpoints evaluate to
    /// `-Omega` and `Omega` exactly.
    pub fn frequency(&self, q: usize) -> f64 {
        debug_assert!(q < self.m);
        self.omega * (2.0 * q as f64 / (self.m - 1) as f64 - 1.0)
    }

    pub fn frequencies(&self) -> Vec<f64> {
        (0..self.m).map(|q| self.frequency(q)).collect()
    }
}

/// Sampled (possibly noisy) Fourier data together with its grid and declared
/// noise level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MeasurementJson", into = "MeasurementJson")]
pub struct Measurement {
    pub values: Vec<Complex64>,
    pub grid: SamplingGrid,
    pub sigma: f64,
    pub noise_seed: Option<u64>,
}

impl Measurement {
    pub fn new(
        values: Vec<Complex64>,
        grid: SamplingGrid,
        sigma: f64,
        noise_seed: Option<u64>,
    ) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "{} values but grid has {} samples",
                values.len(),
                grid.len()
            )));
        }
        if !(sigma >= 0.0) {
            return Err(Error::InvalidGrid(format!("noise level must be >= 0, got {sigma}")));
        }
        Ok(Self { values, grid, sigma, noise_seed })
    }
}

#[derive(Serialize, Deserialize)]
struct MeasurementJson {
    omega: f64,
    m: usize,
    sigma: f64,
    seed: Option<u64>,
    values_re: Vec<f64>,
    values_im: Vec<f64>,
}

impl TryFrom<MeasurementJson> for Measurement {
    type Error = Error;
    fn try_from(j: MeasurementJson) -> Result<Self> {
        if j.values_re.len() != j.values_im.len() {
            return Err(Error::InvalidGrid("values_re and values_im lengths differ".into()));
        }
        let values = j
            .values_re
            .into_iter()
            .zip(j.values_im)
            .map(|(re, im)| Complex64::new(re, im))
            .collect();
        Measurement::new(values, SamplingGrid::new(j.omega, j.m)?, j.sigma, j.seed)
    }
}

impl From<Measurement> for MeasurementJson {
    fn from(m: Measurement) -> Self {
        Self {
            omega: m.grid.omega(),
            m: m.grid.len(),
            sigma: m.sigma,
            seed: m.noise_seed,
            values_re: m.values.iter().map(|v| v.re).collect(),
            values_im: m.values.iter().map(|v| v.im).collect(),
        }
    }
}

/// The cluster interval `[-(n-1) pi / (2 Omega), (n-1) pi / (2 Omega)]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalSpec {
    pub n: usize,
    pub omega: f64,
}

impl IntervalSpec {
    pub fn new(n: usize, omega: f64) -> Result<Self> {
        if !(omega > 0.0) {
            return Err(Error::DomainError(format!("cutoff must be positive, got {omega}")));
        }
        if n == 0 {
            return Err(Error::DomainError("interval needs n >= 1".into()));
        }
        Ok(Self { n, omega })
    }

    pub fn half_width(&self) -> f64 {
        (self.n as f64 - 1.0) * std::f64::consts::PI / (2.0 * self.omega)
    }

    pub fn contains(&self, y: f64) -> bool {
        y.abs() <= self.half_width()
    }
}

/// Fourier transform of `mu` at a single frequency, summed in support order.
pub fn fourier_transform_at(mu: &DiscreteMeasure, x: f64) -> Complex64 {
    mu.supports()
        .iter()
        .zip(mu.amplitudes())
        .fold(Complex64::new(0.0, 0.0), |acc, (&y, &a)| acc + a * Complex64::cis(y * x))
}

/// Noiseless samples `sum_j a_j e^{i y_j omega_q}` over the whole grid.
pub fn fourier_samples(mu: &DiscreteMeasure, grid: &SamplingGrid) -> Vec<Complex64> {
    (0..grid.len())
        .map(|q| fourier_transform_at(mu, grid.frequency(q)))
        .collect()
}

/// Noiseless samples plus seeded disk noise of level `sigma`; the result is
/// bit-identical for equal inputs and satisfies `max_q |W| < sigma` strictly.
pub fn synthesize_measurement(
    mu: &DiscreteMeasure,
    grid: &SamplingGrid,
    sigma: f64,
    seed: u64,
) -> Result<Measurement> {
    if !(sigma >= 0.0) {
        return Err(Error::DomainError(format!("noise level must be >= 0, got {sigma}")));
    }
    let mut rng = seeded_rng(seed);
    let values = fourier_samples(mu, grid)
        .into_iter()
        .map(|v| v + disk_sample(&mut rng, sigma))
        .collect();
    Measurement::new(values, *grid, sigma, Some(seed))
}

/// Sup-norm residual between a candidate's noiseless data and a measurement.
pub fn sup_residual(candidate: &DiscreteMeasure, y: &Measurement) -> f64 {
    fourier_samples(candidate, &y.grid)
        .iter()
        .zip(&y.values)
        .map(|(c, v)| (c - v).norm())
        .fold(0.0, f64::max)
}

/// Is the candidate's data within `sigma` of the measurement in sup norm,
/// with strict inequality? Ties at exactly `sigma` are inadmissible.
pub fn is_sigma_admissible(candidate: &DiscreteMeasure, y: &Measurement) -> bool {
    sup_residual(candidate, y) < y.sigma
}

/// Does every candidate support lie in exactly one of the intervals
/// `(y_k - delta, y_k + delta)` around the truth's supports, one candidate
/// per interval?
pub fn is_within_delta_neighborhood(
    candidate: &DiscreteMeasure,
    truth: &DiscreteMeasure,
    delta: f64,
) -> Result<bool> {
    if candidate.len() != truth.len() {
        return Err(Error::DomainError(format!(
            "candidate has {} supports, truth has {}",
            candidate.len(),
            truth.len()
        )));
    }
    if !(delta > 0.0) {
        return Err(Error::DomainError(format!("delta must be positive, got {delta}")));
    }
    if let Some(d_min) = truth.d_min() {
        if 2.0 * delta >= d_min {
            return Err(Error::OverlappingIntervals { two_delta: 2.0 * delta, d_min });
        }
    }
    // Intervals are pairwise disjoint and ordered, so the only possible
    // perfect matching pairs the k-th candidate with the k-th interval.
    let mut used = vec![false; truth.len()];
    for &c in candidate.supports() {
        let mut hit = None;
        for (k, &y) in truth.supports().iter().enumerate() {
            if (c - y).abs() < delta {
                hit = Some(k);
                break;
            }
        }
        match hit {
            Some(k) if !used[k] => used[k] = true,
            _ => return Ok(false),
        }
    }
    Ok(used.iter().all(|&u| u))
}

/// `(SRF, SNR) = (pi / (Omega d_min), m_min / sigma)`.
pub fn srf_snr(mu: &DiscreteMeasure, grid: &SamplingGrid, sigma: f64) -> Result<(f64, f64)> {
    let d_min = mu
        .d_min()
        .ok_or_else(|| Error::DegenerateInstance("SRF needs at least two supports".into()))?;
    if !(sigma > 0.0) {
        return Err(Error::DegenerateInstance("SNR needs a positive noise level".into()));
    }
    Ok((std::f64::consts::PI / (grid.omega() * d_min), mu.m_min() / sigma))
}
