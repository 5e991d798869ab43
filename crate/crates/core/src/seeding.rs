//! Deterministic seed derivation.
//!
//! Every stochastic component draws from a ChaCha stream seeded through this
//! mixer, so nested experiments (sweep point, repetition, optimizer
//! iteration, estimator index) get decorrelated streams while staying fully
//! reproducible from one master seed.

/// SplitMix64 finalizer; bijective on u64.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a child seed for stream `stream` of `master`.
pub fn derive(master: u64, stream: u64) -> u64 {
    splitmix64(master ^ splitmix64(stream))
}

/// Two-level derivation, for (purpose, index)-shaped streams.
pub fn derive2(master: u64, a: u64, b: u64) -> u64 {
    derive(derive(master, a), b)
}
