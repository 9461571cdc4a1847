//! Seeded randomness: one generator family for the whole crate so that every
//! experiment and randomized sweep is reproducible from a single integer.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

/// The crate-wide deterministic generator.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Stable per-stream seed derivation (splitmix64 finalizer over the pair), so
/// parallel trials can each own an independent generator.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform sample from the open complex disk of the given radius.
///
/// The radius is contracted by one part in 1e12 so the magnitude stays
/// strictly below `radius` even after the polar-to-cartesian roundings.
pub fn disk_sample(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    let u: f64 = rng.random();
    let phi: f64 = rng.random::<f64>() * std::f64::consts::TAU;
    let r = radius * u.sqrt() * (1.0 - 1e-12);
    Complex64::from_polar(r, phi)
}
