//! Shared inputs for the engine benchmarks.

use num_complex::Complex64 as C64;
use wavetm_core::{fixtures, PotentialSpec};

/// The potentials exercised by the benchmarks: a discontinuous barrier, the
/// smooth multimode optical profile, and an infinite-range envelope.
pub fn bench_set() -> Vec<(&'static str, PotentialSpec)> {
    vec![
        ("barrier", fixtures::barrier(C64::new(1.0, 0.5), 1.0)),
        ("multimode", fixtures::multimode()),
        ("gaussian", fixtures::gaussian_derivative()),
    ]
}
