//! Named potential fixtures shared by the validation suite, the tests and the
//! shipped JSON spec files.

use crate::potential::{Coupling, Family, PotentialSpec, Support};
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

/// Real unit barrier on [0, 1].
pub fn barrier_real() -> PotentialSpec {
    barrier(C64::ONE, 1.0)
}

/// Complex barrier, z = 1 + 0.5i on [0, 2].
pub fn barrier_complex() -> PotentialSpec {
    barrier(C64::new(1.0, 0.5), 2.0)
}

pub fn barrier(z: C64, length: f64) -> PotentialSpec {
    PotentialSpec::new(
        Family::RectangularBarrier { z },
        Support::Interval(0.0, length),
    )
}

pub fn barrier_on(z: C64, x0: f64, x1: f64) -> PotentialSpec {
    PotentialSpec::new(Family::RectangularBarrier { z }, Support::Interval(x0, x1))
}

/// Two unit deltas at x = 0 and x = 1.
pub fn delta_pair_unit() -> PotentialSpec {
    delta_pair(C64::ONE, C64::ONE, 0.0, 1.0)
}

pub fn delta_pair(z1: C64, z2: C64, a1: f64, a2: f64) -> PotentialSpec {
    // pad the support so coincident positions still form a valid interval
    PotentialSpec::new(
        Family::DeltaPair { z1, z2, a1, a2 },
        Support::Interval(a1.min(a2) - 0.5, a1.max(a2) + 0.5),
    )
}

/// `z e^{iKx}` on [0, 1] at the second-order unidirectional point:
/// K = 4π (m = 1), z = 0.01.
pub fn exponential_invisible() -> PotentialSpec {
    exponential(C64::new(0.01, 0.0), 4.0 * PI, 1.0)
}

pub fn exponential(z: C64, k_mode: f64, length: f64) -> PotentialSpec {
    PotentialSpec::new(
        Family::TruncatedExponential { z, k_mode },
        Support::Interval(0.0, length),
    )
}

/// The multimode profile `f = e^{-2iKx} + (2/3)e^{4iKx} + (2/5)e^{-6iKx}`
/// with K = 1, KL = 4π and the optical coupling `z = 10^{-3} k²`:
/// unidirectionally invisible from the left at k = 2K and from the right at
/// k = K and 3K.
pub fn multimode() -> PotentialSpec {
    PotentialSpec::new(
        Family::LocallyPeriodicFourier {
            z: C64::ONE,
            k_mode: 1.0,
            modes: vec![
                (-2, C64::ONE),
                (4, C64::new(2.0 / 3.0, 0.0)),
                (-6, C64::new(2.0 / 5.0, 0.0)),
            ],
        },
        Support::Interval(0.0, 4.0 * PI),
    )
    .with_coupling(Coupling::KSquaredScaled(1e-3))
}

/// Same modes as [`multimode`] but with a plain constant coupling, for scaling
/// studies where z must halve exactly.
pub fn multimode_constant(z: C64) -> PotentialSpec {
    PotentialSpec::new(
        Family::LocallyPeriodicFourier {
            z,
            k_mode: 1.0,
            modes: vec![
                (-2, C64::ONE),
                (4, C64::new(2.0 / 3.0, 0.0)),
                (-6, C64::new(2.0 / 5.0, 0.0)),
            ],
        },
        Support::Interval(0.0, 4.0 * PI),
    )
}

/// Real cosine profile; its coefficient pattern is conjugate symmetric, so no
/// unidirectional mode exists.
pub fn cosine_real() -> PotentialSpec {
    PotentialSpec::new(
        Family::LocallyPeriodicFourier {
            z: C64::new(0.5, 0.0),
            k_mode: PI,
            modes: vec![(1, C64::new(0.5, 0.0)), (-1, C64::new(0.5, 0.0))],
        },
        Support::Interval(0.0, 4.0),
    )
}

/// Geometric ladder with a = 1/2, b = 1/3, K = 2π/L, L = 1: invisible from
/// the left at every k = nK and from the right at half-integer multiples.
pub fn geometric() -> PotentialSpec {
    PotentialSpec::new(
        Family::GeometricSeriesPeriodic {
            z: C64::new(1e-3, 0.0),
            k_mode: 2.0 * PI,
            a: C64::new(0.5, 0.0),
            b: C64::new(1.0 / 3.0, 0.0),
        },
        Support::Interval(0.0, 1.0),
    )
}

/// Odd Gaussian-derivative profile; its off-diagonal first-Born entry is the
/// plain Gaussian `z e^{-(Lk)²}`.
pub fn gaussian_derivative() -> PotentialSpec {
    PotentialSpec::new(
        Family::GaussianDerivative {
            z: C64::ONE,
            width: 1.0,
        },
        Support::Infinite,
    )
}

pub fn gaussian_plain() -> PotentialSpec {
    PotentialSpec::new(
        Family::GaussianPlain {
            z: C64::ONE,
            width: 1.0,
        },
        Support::Infinite,
    )
}

/// Infinite-range profile that is perturbatively invisible from the left near
/// k = K.
pub fn infinite_range() -> PotentialSpec {
    PotentialSpec::new(
        Family::InfiniteRangeAnalytic {
            z: C64::ONE,
            k_mode: 2.0,
            width: 1.0,
        },
        Support::Infinite,
    )
}

/// The fixture set exercised by the unit-determinant check.
pub fn determinant_set() -> Vec<(&'static str, PotentialSpec)> {
    vec![
        ("barrier_real", barrier_real()),
        ("barrier_complex", barrier_complex()),
        ("delta_pair", delta_pair_unit()),
        ("exponential", exponential_invisible()),
        ("multimode", multimode()),
        ("gaussian_derivative", gaussian_derivative()),
    ]
}

/// Every named fixture with the file stem it is shipped under.
pub fn all_named() -> Vec<(&'static str, PotentialSpec)> {
    vec![
        ("barrier", barrier_real()),
        ("barrier_complex", barrier_complex()),
        ("delta_pair", delta_pair_unit()),
        ("exponential", exponential_invisible()),
        ("multimode", multimode()),
        ("cosine", cosine_real()),
        ("geometric", geometric()),
        ("gaussian_derivative", gaussian_derivative()),
        ("gaussian_plain", gaussian_plain()),
        ("infinite_range", infinite_range()),
    ]
}
