//! Spectral scans and the unidirectional-invisibility classifier for locally
//! periodic potentials.
//!
//! For `v = z·f` on `[0, L]` with `f` periodic of period `ℓ` and potential
//! coefficients `a_n = ∫_0^ℓ e^{-2πinx/ℓ} v dx`, a one-sided zero of the
//! coefficient pair at `±j` makes the potential perturbatively
//! unidirectionally reflectionless at the wavelength `λ = 2ℓ/j` (wavenumber
//! `k = πj/ℓ`): at that `k` every non-resonant mode of `f` integrates to zero
//! over the full support, so the first-order reflection from one side is
//! carried by `a_{-j}` alone and from the other by `a_j` alone. If `a_0 = 0`
//! as well, the first-order transmission correction also vanishes and the
//! potential is perturbatively invisible from that side.
//!
//! Because nothing is exactly zero at finite coupling, "suppressed" is
//! operationalized as a coupling-scaling exponent: the suppressed quantity
//! must scale at least quadratically under `z → z/2` while the opposite-side
//! reflection stays first order.

use crate::born;
use crate::error::{Error, Result};
use crate::potential::{PotentialSpec, Support};
use crate::transfer::{self, EngineOptions};
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanMethod {
    Exact,
    Born1,
    Born2,
}

impl std::fmt::Display for ScanMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ScanMethod::Exact => write!(f, "exact"),
            ScanMethod::Born1 => write!(f, "born1"),
            ScanMethod::Born2 => write!(f, "born2"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanRow {
    pub k: f64,
    pub abs_r_left: f64,
    pub abs_r_right: f64,
    pub abs_t_minus_1: f64,
    /// Empty on clean rows; "spectral_singularity" or an error note otherwise.
    pub flags: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralScan {
    pub method: ScanMethod,
    pub rows: Vec<ScanRow>,
}

/// Uniform grid of `n` points on `(k_min, k_max]`, open at the lower end.
pub fn k_grid(k_min: f64, k_max: f64, n: usize) -> Vec<f64> {
    let step = (k_max - k_min) / n as f64;
    (1..=n).map(|i| k_min + step * i as f64).collect()
}

/// Per-row amplitudes over a wavenumber grid. Rows never fail the whole scan:
/// spectral singularities and engine errors are flagged in place.
pub fn scan(spec: &PotentialSpec, ks: &[f64], method: ScanMethod) -> SpectralScan {
    scan_with(spec, ks, method, &EngineOptions::default())
}

pub fn scan_with(
    spec: &PotentialSpec,
    ks: &[f64],
    method: ScanMethod,
    opts: &EngineOptions,
) -> SpectralScan {
    let rows: Vec<ScanRow> = ks
        .par_iter()
        .map(|&k| match row_amplitudes(spec, k, method, opts) {
            Ok((rl, rr, t)) => ScanRow {
                k,
                abs_r_left: rl.norm(),
                abs_r_right: rr.norm(),
                abs_t_minus_1: (t - C64::ONE).norm(),
                flags: String::new(),
            },
            Err(Error::SpectralSingularity { .. }) => ScanRow {
                k,
                abs_r_left: f64::NAN,
                abs_r_right: f64::NAN,
                abs_t_minus_1: f64::INFINITY,
                flags: "spectral_singularity".into(),
            },
            Err(e) => ScanRow {
                k,
                abs_r_left: f64::NAN,
                abs_r_right: f64::NAN,
                abs_t_minus_1: f64::NAN,
                flags: e.to_string(),
            },
        })
        .collect();
    SpectralScan { method, rows }
}

fn row_amplitudes(
    spec: &PotentialSpec,
    k: f64,
    method: ScanMethod,
    opts: &EngineOptions,
) -> Result<(C64, C64, C64)> {
    let amps = match method {
        ScanMethod::Exact => {
            let tm = transfer::transfer_matrix_ode_with(spec, k, opts)?;
            transfer::amplitudes_from_transfer(&tm)?
        }
        ScanMethod::Born1 => born::amplitudes_first_order(spec, k)?,
        ScanMethod::Born2 => born::amplitudes_second_order(spec, k)?,
    };
    Ok((amps.r_left, amps.r_right, amps.t))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Grade {
    Reflectionless,
    Invisible,
}

/// Which coefficient conditions fired, and on which lattice.
#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    /// Fundamental lattice wavenumber of the profile (declared `K` times the
    /// index gcd).
    pub k_fundamental: f64,
    /// Support length in fundamental periods, `N = L/ℓ`.
    pub periods: u32,
    /// Whether `L = 2mℓ` held with integer `m` (the stored `m` is `N/2`).
    /// Odd multiples still suppress one side: all non-resonant modes
    /// integrate out as long as `L` is a whole number of periods.
    pub half_period_hypothesis: bool,
    pub abs_a_plus: f64,
    pub abs_a_minus: f64,
    pub abs_a_zero: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvisibilityPrediction {
    /// Wavenumber of the mode, `k = πj/ℓ = j·K_fund/2`.
    pub k: f64,
    pub wavelength: f64,
    pub direction: Direction,
    pub grade: Grade,
    /// Mode index on the fundamental lattice.
    pub j: u32,
    /// `m = N/2` when the support is an even number of periods.
    pub m: Option<u32>,
    pub provenance: Provenance,
}

#[derive(Clone, Copy, Debug)]
pub struct ClassifierOptions {
    /// Largest fundamental mode index to examine.
    pub j_max: u32,
    /// Relative threshold for treating a coefficient as zero.
    pub eps_rel: f64,
}

impl Default for ClassifierOptions {
    fn default() -> Self {
        Self {
            j_max: 12,
            eps_rel: 1e-12,
        }
    }
}

/// One-sided-coefficient classifier for locally periodic potentials.
///
/// Emits a prediction for every fundamental mode index `j <= j_max` with
/// `a_{-j} = 0 != a_j` (left) or `a_j = 0 != a_{-j}` (right), at wavenumber
/// `k = j·K_fund/2`; the grade is upgraded to invisible when `a_0 = 0`.
/// Coefficient magnitudes are judged against the largest examined
/// coefficient with the relative threshold `eps_rel`.
pub fn classify(
    spec: &PotentialSpec,
    opts: &ClassifierOptions,
) -> Result<Vec<InvisibilityPrediction>> {
    let profile = spec.periodic_profile()?;
    let length = match spec.support {
        Support::Interval(a, b) => b - a,
        Support::Infinite => return Err(Error::NotPeriodic),
    };

    let Some(gcd) = profile.index_gcd() else {
        return Ok(Vec::new()); // constant profile: nothing one-sided
    };
    let k_fund = profile.k_lattice * gcd as f64;
    let ell = 2.0 * PI / k_fund;
    let ratio = length / ell;
    let periods = ratio.round();
    if (ratio - periods).abs() > 1e-9 * ratio.max(1.0) || periods < 1.0 {
        return Err(Error::PeriodMismatch {
            support: length,
            period: ell,
        });
    }
    let periods = periods as u32;
    let half_period_hypothesis = periods % 2 == 0;

    // coefficient on the fundamental lattice, via the declared one
    let coeff = |j: i32| profile.coefficient(j * gcd as i32);

    let mut scale = coeff(0).norm();
    for j in 1..=opts.j_max as i32 {
        scale = scale.max(coeff(j).norm()).max(coeff(-j).norm());
    }
    if scale == 0.0 {
        return Ok(Vec::new());
    }
    let is_zero = |c: C64| c.norm() <= opts.eps_rel * scale;

    let a0 = coeff(0);
    let mut out = Vec::new();
    for j in 1..=opts.j_max {
        let plus = coeff(j as i32);
        let minus = coeff(-(j as i32));
        let direction = match (is_zero(plus), is_zero(minus)) {
            (false, true) => Direction::Left,
            (true, false) => Direction::Right,
            _ => continue,
        };
        let grade = if is_zero(a0) {
            Grade::Invisible
        } else {
            Grade::Reflectionless
        };
        let k = 0.5 * (j as f64) * k_fund;
        out.push(InvisibilityPrediction {
            k,
            wavelength: 2.0 * ell / j as f64,
            direction,
            grade,
            j,
            m: half_period_hypothesis.then_some(periods / 2),
            provenance: Provenance {
                k_fundamental: k_fund,
                periods,
                half_period_hypothesis,
                abs_a_plus: plus.norm(),
                abs_a_minus: minus.norm(),
                abs_a_zero: a0.norm(),
            },
        });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug)]
pub struct VerificationThresholds {
    /// Minimum coupling-scaling exponent of each suppressed quantity.
    pub suppressed_min: f64,
    /// Acceptable band for the opposite-side (unsuppressed) exponent.
    pub opposite_band: (f64, f64),
    /// Quantities with magnitude below this floor at both couplings count as
    /// suppressed outright.
    pub floor: f64,
}

impl Default for VerificationThresholds {
    fn default() -> Self {
        Self {
            suppressed_min: 1.9,
            opposite_band: (0.8, 1.2),
            floor: 1e-14,
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct MeasuredExponents {
    pub r_left: f64,
    pub r_right: f64,
    pub t_minus_1: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub k: f64,
    pub direction: Direction,
    pub grade: Grade,
    pub exponents: MeasuredExponents,
    pub pass: bool,
    pub detail: String,
}

/// Measure coupling-scaling exponents at the predicted wavenumber and check
/// them against the thresholds. Exponents come from a two-point log ratio at
/// `z` and `z/2`; `three_point` adds `z/4` and fits the slope by least
/// squares, which damps noise near the quadrature floor.
pub fn verify_prediction(
    spec: &PotentialSpec,
    prediction: &InvisibilityPrediction,
    engine: ScanMethod,
    thresholds: &VerificationThresholds,
    three_point: bool,
) -> Result<VerificationReport> {
    verify_at(
        spec,
        prediction.k,
        prediction.direction,
        prediction.grade,
        engine,
        thresholds,
        three_point,
    )
}

#[allow(clippy::too_many_arguments)]
pub fn verify_at(
    spec: &PotentialSpec,
    k: f64,
    direction: Direction,
    grade: Grade,
    engine: ScanMethod,
    thresholds: &VerificationThresholds,
    three_point: bool,
) -> Result<VerificationReport> {
    let opts = EngineOptions::default();
    let couplings: Vec<f64> = if three_point {
        vec![1.0, 0.5, 0.25]
    } else {
        vec![1.0, 0.5]
    };
    let mut samples = Vec::with_capacity(couplings.len());
    for &f in &couplings {
        let scaled = spec.scale_coupling(f);
        samples.push(row_amplitudes(&scaled, k, engine, &opts)?);
    }

    let exponent = |pick: &dyn Fn(&(C64, C64, C64)) -> f64| -> f64 {
        let values: Vec<f64> = samples.iter().map(pick).collect();
        if values.iter().all(|v| *v < thresholds.floor) {
            return f64::INFINITY;
        }
        // slope of log2|q| against log2 of the coupling factor
        if values.len() == 2 {
            (values[0] / values[1]).log2()
        } else {
            let n = values.len() as f64;
            let xs: Vec<f64> = couplings.iter().map(|c| c.log2()).collect();
            let ys: Vec<f64> = values.iter().map(|v| v.log2()).collect();
            let xm = xs.iter().sum::<f64>() / n;
            let ym = ys.iter().sum::<f64>() / n;
            let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
            let den: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
            num / den
        }
    };

    let exponents = MeasuredExponents {
        r_left: exponent(&|s| s.0.norm()),
        r_right: exponent(&|s| s.1.norm()),
        t_minus_1: exponent(&|s| (s.2 - C64::ONE).norm()),
    };

    let (suppressed, opposite) = match direction {
        Direction::Left => (exponents.r_left, exponents.r_right),
        Direction::Right => (exponents.r_right, exponents.r_left),
    };
    let mut pass = suppressed >= thresholds.suppressed_min;
    let mut detail = format!(
        "suppressed side exponent {suppressed:.3} (needs >= {:.2})",
        thresholds.suppressed_min
    );
    if opposite.is_finite() {
        let (lo, hi) = thresholds.opposite_band;
        if opposite < lo || opposite > hi {
            pass = false;
        }
        detail.push_str(&format!(", opposite {opposite:.3} in [{lo:.2}, {hi:.2}]"));
    }
    if grade == Grade::Invisible {
        if exponents.t_minus_1 < thresholds.suppressed_min {
            pass = false;
        }
        detail.push_str(&format!(", |T-1| exponent {:.3}", exponents.t_minus_1));
    }
    Ok(VerificationReport {
        k,
        direction,
        grade,
        exponents,
        pass,
        detail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::potential::{Family, PotentialSpec, Support};

    #[test]
    fn zero_potential_scan_is_flat() {
        let spec = fixtures::barrier(C64::ZERO, 1.0);
        let ks = k_grid(0.5, 2.0, 7);
        let scan = scan(&spec, &ks, ScanMethod::Exact);
        assert_eq!(scan.rows.len(), 7);
        for row in &scan.rows {
            assert!(row.abs_r_left < 1e-12);
            assert!(row.abs_r_right < 1e-12);
            assert!(row.abs_t_minus_1 < 1e-12);
            assert!(row.flags.is_empty());
        }
    }

    #[test]
    fn scan_rows_are_sorted_and_methods_agree_for_weak_coupling() {
        let spec = fixtures::multimode_constant(C64::new(1e-4, 0.0));
        let ks = k_grid(0.4, 2.4, 9);
        let exact = scan(&spec, &ks, ScanMethod::Exact);
        let b2 = scan(&spec, &ks, ScanMethod::Born2);
        for (e, b) in exact.rows.iter().zip(&b2.rows) {
            assert!(e.k == b.k);
            assert!((e.abs_r_left - b.abs_r_left).abs() < 1e-8);
            assert!((e.abs_r_right - b.abs_r_right).abs() < 1e-8);
        }
        assert!(exact.rows.windows(2).all(|w| w[0].k < w[1].k));
    }

    #[test]
    fn multimode_profile_classification() {
        // left-invisible at k = 2K, right-invisible at k = K and 3K
        let spec = fixtures::multimode();
        let predictions = classify(&spec, &ClassifierOptions::default()).unwrap();
        assert_eq!(predictions.len(), 3);
        let find = |k: f64| {
            predictions
                .iter()
                .find(|p| (p.k - k).abs() < 1e-12)
                .unwrap_or_else(|| panic!("no prediction at k = {k}"))
        };
        assert_eq!(find(2.0).direction, Direction::Left);
        assert_eq!(find(1.0).direction, Direction::Right);
        assert_eq!(find(3.0).direction, Direction::Right);
        for p in &predictions {
            assert_eq!(p.grade, Grade::Invisible);
            // λ = 2ℓ/j = L/(m·j) with the stored integers
            let ell = 2.0 * PI / p.provenance.k_fundamental;
            assert!((p.wavelength - 2.0 * ell / p.j as f64).abs() < 1e-12);
            let m = p.m.expect("support is an even number of periods") as f64;
            let length = 4.0 * PI;
            assert!((p.wavelength - length / (m * p.j as f64)).abs() < 1e-12);
        }
    }

    #[test]
    fn real_profiles_produce_no_predictions() {
        let cosine = fixtures::cosine_real();
        assert!(classify(&cosine, &ClassifierOptions::default())
            .unwrap()
            .is_empty());
        let barrier = fixtures::barrier_real();
        assert!(classify(&barrier, &ClassifierOptions::default())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn geometric_ladder_alternates_directions() {
        let spec = fixtures::geometric();
        let opts = ClassifierOptions {
            j_max: 11,
            ..ClassifierOptions::default()
        };
        let predictions = classify(&spec, &opts).unwrap();
        let k_unit = 2.0 * PI; // K = 2π/L with L = 1
        for n in 1..=5u32 {
            let left = predictions
                .iter()
                .find(|p| (p.k - n as f64 * k_unit).abs() < 1e-9)
                .expect("integer rung");
            assert_eq!(left.direction, Direction::Left);
            assert_eq!(left.grade, Grade::Invisible);
            let right = predictions
                .iter()
                .find(|p| (p.k - (n as f64 + 0.5) * k_unit).abs() < 1e-9)
                .expect("half-integer rung");
            assert_eq!(right.direction, Direction::Right);
        }
        // parity rule: every left rung sits at an integer multiple, every
        // right rung at a half-integer one
        for p in &predictions {
            let ratio = p.k / k_unit;
            match p.direction {
                Direction::Left => assert!((ratio - ratio.round()).abs() < 1e-9),
                Direction::Right => {
                    assert!((ratio - ratio.floor() - 0.5).abs() < 1e-9)
                }
            }
        }
    }

    #[test]
    fn classification_is_invariant_under_coupling_rescale() {
        let spec = fixtures::multimode();
        let scaled = spec.scale_coupling(17.0);
        let a = classify(&spec, &ClassifierOptions::default()).unwrap();
        let b = classify(&scaled, &ClassifierOptions::default()).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.direction, y.direction);
            assert!((x.k - y.k).abs() < 1e-12);
        }
    }

    #[test]
    fn mirrored_profile_swaps_directions() {
        // x -> L - x maps mode j to -j (the phases e^{ijKL} are 1 here)
        let spec = fixtures::multimode();
        let mirrored = PotentialSpec::new(
            Family::LocallyPeriodicFourier {
                z: C64::ONE,
                k_mode: 1.0,
                modes: vec![
                    (2, C64::ONE),
                    (-4, C64::new(2.0 / 3.0, 0.0)),
                    (6, C64::new(2.0 / 5.0, 0.0)),
                ],
            },
            Support::Interval(0.0, 4.0 * PI),
        );
        let a = classify(&spec, &ClassifierOptions::default()).unwrap();
        let b = classify(&mirrored, &ClassifierOptions::default()).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert!((x.k - y.k).abs() < 1e-12);
            assert_ne!(x.direction, y.direction);
        }
    }

    #[test]
    fn period_mismatch_is_reported() {
        let spec = PotentialSpec::new(
            Family::TruncatedExponential {
                z: C64::new(1e-3, 0.0),
                k_mode: 2.0 * PI,
            },
            Support::Interval(0.0, 1.37),
        );
        assert!(matches!(
            classify(&spec, &ClassifierOptions::default()),
            Err(Error::PeriodMismatch { .. })
        ));
    }

    #[test]
    fn exponential_mode_verifies_with_cubic_left_suppression() {
        // at k = K/2 = 2πm/L the left reflection is third order
        let spec = fixtures::exponential_invisible();
        let report = verify_at(
            &spec,
            2.0 * PI,
            Direction::Left,
            Grade::Reflectionless,
            ScanMethod::Exact,
            &VerificationThresholds {
                suppressed_min: 2.9,
                ..VerificationThresholds::default()
            },
            false,
        )
        .unwrap();
        assert!(report.pass, "{}", report.detail);
        assert!(report.exponents.r_left >= 2.9, "{:?}", report.exponents);
        assert!((report.exponents.r_right - 1.0).abs() < 0.1);
    }

    #[test]
    fn multimode_left_mode_has_second_order_suppression() {
        // exact-engine exponents at the k = 2K mode: the left reflection
        // scales at least quadratically, the right stays first order
        let spec = fixtures::multimode();
        let predictions = classify(&spec, &ClassifierOptions::default()).unwrap();
        let left = predictions
            .iter()
            .find(|p| p.direction == Direction::Left)
            .unwrap();
        let report = verify_prediction(
            &spec,
            left,
            ScanMethod::Exact,
            &VerificationThresholds::default(),
            false,
        )
        .unwrap();
        assert!(report.pass, "{}", report.detail);
        // the exponent approaches 2 from below at finite coupling
        assert!(report.exponents.r_left >= 1.95, "{:?}", report.exponents);
        assert!((report.exponents.r_right - 1.0).abs() < 0.2);
    }

    #[test]
    fn born2_scan_converges_cubically_to_exact() {
        // max row discrepancy between the exact and second-order scans
        // shrinks by at least 8x when the coupling halves
        let ks = k_grid(0.6, 2.2, 7);
        let diff = |z: f64| {
            let spec = fixtures::multimode_constant(C64::new(z, 0.0));
            let exact = scan(&spec, &ks, ScanMethod::Exact);
            let b2 = scan(&spec, &ks, ScanMethod::Born2);
            exact
                .rows
                .iter()
                .zip(&b2.rows)
                .map(|(e, b)| {
                    (e.abs_r_left - b.abs_r_left)
                        .abs()
                        .max((e.abs_r_right - b.abs_r_right).abs())
                        .max((e.abs_t_minus_1 - b.abs_t_minus_1).abs())
                })
                .fold(0.0, f64::max)
        };
        let ratio = diff(4e-3) / diff(2e-3);
        assert!(ratio >= 7.0, "expected >= ~8x shrink, got {ratio:.2}");
    }

    #[test]
    fn resonant_but_wrong_parity_is_bidirectional() {
        // K·L = 2πm and (2k+K)·L = 2πn with n != 2m: both first-order
        // reflections and the transmission correction vanish, so the
        // invisibility is not one-sided. Here K = 2π, L = 1, k = 3π
        // (m = 1, n = 4).
        let k = 3.0 * PI;
        let spec = fixtures::exponential(C64::new(1e-2, 0.0), 2.0 * PI, 1.0);
        let amps = crate::born::amplitudes_first_order(&spec, k).unwrap();
        assert!(amps.r_left.norm() < 1e-15);
        assert!(amps.r_right.norm() < 1e-15);
        assert!((amps.t - C64::ONE).norm() < 1e-15);

        // a one-sided claim fails verification: the opposite side is
        // suppressed as well instead of staying first order
        let report = verify_at(
            &spec,
            k,
            Direction::Left,
            Grade::Invisible,
            ScanMethod::Exact,
            &VerificationThresholds::default(),
            false,
        )
        .unwrap();
        assert!(!report.pass, "{}", report.detail);
        assert!(report.exponents.r_right > 1.5, "{:?}", report.exponents);
    }

    #[test]
    fn zero_potential_verifies_trivially() {
        let spec = fixtures::barrier(C64::ZERO, 1.0);
        let report = verify_at(
            &spec,
            1.0,
            Direction::Left,
            Grade::Invisible,
            ScanMethod::Exact,
            &VerificationThresholds::default(),
            false,
        )
        .unwrap();
        assert!(report.pass);
        assert!(report.exponents.r_left.is_infinite());
    }
}
