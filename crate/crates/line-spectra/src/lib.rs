//! Line spectral estimation toolkit.
//!
//! Implements the measurement model for a cluster of point spectra sampled in
//! the Fourier domain under bounded deterministic noise, the sweeping
//! singular-value-thresholding detector for the number of spectra, dual
//! worst-case instance constructors that realize the resolution-limit lower
//! bounds, brute-force certifiers for the Vandermonde-space approximation
//! inequalities the theory rests on, and a seeded Monte-Carlo harness that
//! exposes the phase transition of number detection in the
//! (log SRF, log SNR) plane.
//!
//! Start from the runnable programs in `examples/`; the `line-spectra` binary
//! wraps the same capabilities behind a small JSON/CSV command-line surface.

// Validation uses `!(x > 0.0)` style comparisons on purpose: they reject NaN
// along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cli;
pub mod detection;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod measure;
pub mod rng;
pub mod vandermonde;
pub mod worst_case;

pub use error::{Error, Result};
pub use measure::{
    fourier_samples, is_sigma_admissible, is_within_delta_neighborhood, srf_snr,
    synthesize_measurement, DiscreteMeasure, IntervalSpec, Measurement, SamplingGrid,
};
