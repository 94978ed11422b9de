//! Exact transfer matrices.
//!
//! The transfer matrix relates the plane-wave coefficients on the two sides
//! of the potential, `(A+, B+) = M (A-, B-)`, and equals the τ → ±∞
//! interaction-picture propagator of the two-level system. The engine here
//! integrates `i dU/dτ = ℋ(τ) U` with an embedded Runge–Kutta pair; in the
//! interaction picture the free evolution is the identity, so the asymptotic
//! limits are plain endpoint values and the oscillatory free part never
//! enters the integrand. `ℋ` is traceless, hence `det M = 1` up to
//! integration error.
//!
//! Delta potentials are handled by exact impulsive jump matrices
//! `J = I - (iz/2k)·[[1, e^{-2ika}], [-e^{2ika}, -1]]`; the off-diagonal
//! factor is nilpotent, so a single jump truncates at first order and a pair
//! of deltas is exact at second order.

use crate::error::{Error, Result};
use crate::mat2::Mat2;
use crate::ode::{self, OdeOptions};
use crate::potential::{Family, PotentialSpec, Support};
use crate::two_level::interaction_matrix;
use num_complex::Complex64 as C64;
use std::f64::consts::FRAC_PI_2;

/// Relative threshold on |M22| below which the transmission amplitude is
/// treated as divergent (spectral singularity).
pub const SPECTRAL_SINGULARITY_TOL: f64 = 1e-12;

/// Relative tail threshold for truncated infinite-range windows.
pub const TAIL_THRESHOLD: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Ode,
    Analytic,
    Born(u32),
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Method::Ode => write!(f, "ode"),
            Method::Analytic => write!(f, "analytic"),
            Method::Born(n) => write!(f, "born{n}"),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct TransferMatrix {
    pub m: Mat2,
    pub k: f64,
    pub method: Method,
    /// `|det M - 1|` at construction.
    pub det_residual: f64,
}

impl TransferMatrix {
    pub fn new(m: Mat2, k: f64, method: Method) -> Self {
        let det_residual = (m.det() - C64::ONE).norm();
        Self {
            m,
            k,
            method,
            det_residual,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AmplitudeOrder {
    Exact,
    Born1,
    Born2,
    BornN(u32),
}

impl std::fmt::Display for AmplitudeOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AmplitudeOrder::Exact => write!(f, "exact"),
            AmplitudeOrder::Born1 => write!(f, "born1"),
            AmplitudeOrder::Born2 => write!(f, "born2"),
            AmplitudeOrder::BornN(n) => write!(f, "born{n}"),
        }
    }
}

/// Left/right reflection and transmission amplitudes at one wavenumber.
#[derive(Clone, Copy, Debug)]
pub struct ScatteringAmplitudes {
    pub r_left: C64,
    pub r_right: C64,
    pub t: C64,
    pub k: f64,
    pub order: AmplitudeOrder,
}

impl ScatteringAmplitudes {
    /// Rebuild the transfer matrix: `M22 = 1/T`, `M12 = Rʳ/T`,
    /// `M21 = -Rˡ/T`, `M11 = T - RˡRʳ/T`.
    pub fn to_transfer(&self, method: Method) -> TransferMatrix {
        let t = self.t;
        let m = Mat2::new(
            t - self.r_left * self.r_right / t,
            self.r_right / t,
            -self.r_left / t,
            C64::ONE / t,
        );
        TransferMatrix::new(m, self.k, method)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct EngineOptions {
    /// Local error tolerance of the embedded pair (absolute and relative).
    pub tol: f64,
    /// Hard cap on the τ step; the interaction picture carries `e^{2iτ}`
    /// features of period π.
    pub max_step: f64,
    /// Truncation radius for infinite supports, in envelope widths.
    pub truncation_factor: f64,
    /// Relative tail size above which the window is rejected.
    pub tail_threshold: f64,
}

impl Default for EngineOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_step: 0.1 * FRAC_PI_2,
            truncation_factor: crate::potential::DEFAULT_TRUNCATION_FACTOR,
            tail_threshold: TAIL_THRESHOLD,
        }
    }
}

impl EngineOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }
}

/// Exact transfer matrix by integration of the interaction-picture evolution
/// (impulsive jumps for delta families).
pub fn transfer_matrix_ode(spec: &PotentialSpec, k: f64, tol: f64) -> Result<TransferMatrix> {
    transfer_matrix_ode_with(spec, k, &EngineOptions::with_tol(tol))
}

pub fn transfer_matrix_ode_with(
    spec: &PotentialSpec,
    k: f64,
    opts: &EngineOptions,
) -> Result<TransferMatrix> {
    if k <= 0.0 {
        return Err(Error::InvalidWavenumber(k));
    }
    if let Family::DeltaPair { z1, z2, a1, a2 } = &spec.family {
        let m = delta_pair_matrix(*z1, *z2, *a1, *a2, k);
        return Ok(TransferMatrix::new(m, k, Method::Ode));
    }

    let (lo, hi) = spec.window_with_factor(opts.truncation_factor);
    check_tail(spec, k, lo, hi, opts.tail_threshold)?;

    // Integrate each smooth piece separately so jumps of v never sit inside a
    // Runge-Kutta step.
    let mut cuts: Vec<f64> = spec
        .discontinuities()
        .into_iter()
        .filter(|x| *x > lo && *x < hi)
        .collect();
    cuts.sort_by(f64::total_cmp);
    let mut bounds = Vec::with_capacity(cuts.len() + 2);
    bounds.push(lo);
    bounds.extend(cuts);
    bounds.push(hi);

    let ode_opts = OdeOptions {
        abs_tol: opts.tol,
        rel_tol: opts.tol,
        max_step: opts.max_step,
        ..OdeOptions::default()
    };

    let mut u = [C64::ONE, C64::ZERO, C64::ZERO, C64::ONE];
    for pair in bounds.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if b <= a {
            continue;
        }
        let rhs = |tau: f64, y: &[C64], dy: &mut [C64]| {
            let v = spec.evaluate(tau / k, k).unwrap_or(C64::ZERO);
            let w = v / (2.0 * k * k);
            let h = interaction_matrix(w, tau);
            let mi = -C64::i();
            dy[0] = mi * (h.m11 * y[0] + h.m12 * y[2]);
            dy[1] = mi * (h.m11 * y[1] + h.m12 * y[3]);
            dy[2] = mi * (h.m21 * y[0] + h.m22 * y[2]);
            dy[3] = mi * (h.m21 * y[1] + h.m22 * y[3]);
        };
        ode::propagate(rhs, k * a, k * b, &mut u, &ode_opts)?;
    }

    let m = Mat2::new(u[0], u[1], u[2], u[3]);
    Ok(TransferMatrix::new(m, k, Method::Ode))
}

fn check_tail(spec: &PotentialSpec, k: f64, lo: f64, hi: f64, threshold: f64) -> Result<()> {
    if spec.support != Support::Infinite {
        return Ok(());
    }
    let mut peak = 0.0f64;
    for i in 0..=100 {
        let x = lo + (hi - lo) * i as f64 / 100.0;
        peak = peak.max(spec.evaluate(x, k).map(|v| v.norm()).unwrap_or(0.0));
    }
    let tail = spec
        .evaluate(lo, k)?
        .norm()
        .max(spec.evaluate(hi, k)?.norm());
    if peak > 0.0 && tail > threshold * peak {
        return Err(Error::Truncation {
            tail: tail / peak,
            threshold,
        });
    }
    Ok(())
}

/// Impulsive transfer matrix of a single delta of strength `z` at `a`.
pub fn delta_jump_matrix(z: C64, a: f64, k: f64) -> Mat2 {
    let f = Mat2::new(
        C64::ONE,
        (-C64::i() * 2.0 * k * a).exp(),
        -(C64::i() * 2.0 * k * a).exp(),
        -C64::ONE,
    );
    Mat2::identity() + f.scale(-C64::i() * z / (2.0 * k))
}

fn delta_pair_matrix(z1: C64, z2: C64, a1: f64, a2: f64, k: f64) -> Mat2 {
    if a1 == a2 {
        // coincident deltas merge; the jump generator is nilpotent
        return delta_jump_matrix(z1 + z2, a1, k);
    }
    let (first, second) = if a1 < a2 {
        ((z1, a1), (z2, a2))
    } else {
        ((z2, a2), (z1, a1))
    };
    delta_jump_matrix(second.0, second.1, k) * delta_jump_matrix(first.0, first.1, k)
}

/// Extract `(Rˡ, Rʳ, T)` from a transfer matrix: `T = 1/M22`,
/// `Rʳ = M12/M22`, `Rˡ = -M21/M22`.
pub fn amplitudes_from_transfer(tm: &TransferMatrix) -> Result<ScatteringAmplitudes> {
    let m = &tm.m;
    let scale = m.norm_frobenius();
    if m.m22.norm() < SPECTRAL_SINGULARITY_TOL * scale {
        return Err(Error::SpectralSingularity {
            m22_abs: m.m22.norm(),
            threshold: SPECTRAL_SINGULARITY_TOL * scale,
        });
    }
    let t = C64::ONE / m.m22;
    let r_right = m.m12 / m.m22;
    let r_left = -m.m21 / m.m22;
    // M11 = T - Rˡ Rʳ / T is the unit-determinant identity; enforce it for
    // the exact engines, where det M = 1 is a contract. Born partial sums
    // drift by O(z^{N+1}) legitimately.
    if matches!(tm.method, Method::Ode | Method::Analytic) {
        let residual = (m.m11 - (t - r_left * r_right / t)).norm();
        if residual > 1e-9 * scale.max(1.0) {
            return Err(Error::UnitDeterminant(residual));
        }
    }
    Ok(ScatteringAmplitudes {
        r_left,
        r_right,
        t,
        k: tm.k,
        order: match tm.method {
            Method::Born(1) => AmplitudeOrder::Born1,
            Method::Born(2) => AmplitudeOrder::Born2,
            Method::Born(n) => AmplitudeOrder::BornN(n),
            _ => AmplitudeOrder::Exact,
        },
    })
}

/// Composition `M = M_right · M_left` for adjacent supports (left factor's
/// support to the left of the right factor's; adjacency is the caller's
/// contract).
pub fn compose(m_right: &TransferMatrix, m_left: &TransferMatrix) -> Result<TransferMatrix> {
    if m_right.k != m_left.k {
        return Err(Error::WavenumberMismatch {
            left: m_left.k,
            right: m_right.k,
        });
    }
    Ok(TransferMatrix::new(
        m_right.m * m_left.m,
        m_left.k,
        m_left.method,
    ))
}

/// Closed-form transfer matrix for the rectangular barrier and the delta
/// pair. Negative `k` is allowed here so the `M(k) ↔ M(-k)` symmetry can be
/// probed directly.
pub fn analytic_transfer(spec: &PotentialSpec, k: f64) -> Result<TransferMatrix> {
    if k == 0.0 {
        return Err(Error::InvalidWavenumber(k));
    }
    match (&spec.family, spec.support) {
        (Family::DeltaPair { z1, z2, a1, a2 }, _) => {
            let m = delta_pair_matrix(*z1, *z2, *a1, *a2, k);
            Ok(TransferMatrix::new(m, k, Method::Analytic))
        }
        (Family::RectangularBarrier { .. }, Support::Interval(a, b)) => {
            let z = spec.coupling_at(k.abs());
            let m0 = barrier_matrix(z, b - a, k);
            let m = shift_conjugate(m0, a, k);
            Ok(TransferMatrix::new(m, k, Method::Analytic))
        }
        _ => Err(Error::UnsupportedFamily(spec.family.name())),
    }
}

/// `sin(z)/z`, stable near the origin.
fn sinc_c(z: C64) -> C64 {
    if z.norm() < 1e-4 {
        let z2 = z * z;
        C64::ONE - z2 / 6.0 + z2 * z2 / 120.0
    } else {
        z.sin() / z
    }
}

/// Barrier of strength `z` on [0, L]:
/// `M11 = [cos(nkL) + i(n²+1) sin(nkL)/(2n)]·e^{-ikL}`,
/// `M12 = i(n²-1) sin(nkL)/(2n)·e^{-ikL}`, and `M21/M22` by `k → -k`;
/// `n = sqrt(1 - z/k²)`.
fn barrier_matrix(z: C64, l: f64, k: f64) -> Mat2 {
    let n2 = C64::ONE - z / (k * k);
    let n = n2.sqrt();
    let entry = |k: f64| {
        let arg = n * k * l;
        let cos = arg.cos();
        // sin(nkL)/n = kL·sinc(nkL), finite through the turning point n = 0
        let sin_over_n = k * l * sinc_c(arg);
        let phase = (-C64::i() * k * l).exp();
        let m11 = (cos + C64::i() * (n2 + 1.0) * sin_over_n / 2.0) * phase;
        let m12 = C64::i() * (n2 - 1.0) * sin_over_n / 2.0 * phase;
        (m11, m12)
    };
    let (m11, m12) = entry(k);
    let (m22, m21) = entry(-k);
    Mat2::new(m11, m12, m21, m22)
}

/// Transfer matrix of `v(x - s)` from the matrix of `v`:
/// conjugation by `diag(e^{-iks}, e^{iks})`.
fn shift_conjugate(m: Mat2, s: f64, k: f64) -> Mat2 {
    if s == 0.0 {
        return m;
    }
    let p = (-C64::i() * k * s).exp();
    Mat2::new(m.m11, m.m12 * p * p, m.m21 / (p * p), m.m22)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    const ODE_TOL: f64 = 1e-10;

    #[test]
    fn zero_potential_gives_identity() {
        let spec = fixtures::barrier(C64::ZERO, 2.0);
        let tm = transfer_matrix_ode(&spec, 1.3, ODE_TOL).unwrap();
        assert!(tm.m.max_abs_diff(&Mat2::identity()) < 1e-12);
        let amps = amplitudes_from_transfer(&tm).unwrap();
        assert!(amps.r_left.norm() < 1e-12);
        assert!(amps.r_right.norm() < 1e-12);
        assert!((amps.t - C64::ONE).norm() < 1e-12);
    }

    #[test]
    fn ode_matches_analytic_barrier() {
        for &z in &[C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(1.0, 1.0)] {
            for &k in &[0.5, 1.0, 2.0] {
                let spec = fixtures::barrier(z, 1.0);
                let ode = transfer_matrix_ode(&spec, k, ODE_TOL).unwrap();
                let closed = analytic_transfer(&spec, k).unwrap();
                let diff = ode.m.max_abs_diff(&closed.m);
                assert!(diff < 1e-8, "z = {z}, k = {k}: diff = {diff:.3e}");
                assert!(ode.det_residual < 1e-9);
            }
        }
    }

    #[test]
    fn analytic_barrier_limits() {
        // z -> 0 gives the identity
        let spec = fixtures::barrier(C64::new(1e-300, 0.0), 1.0);
        let tm = analytic_transfer(&spec, 1.0).unwrap();
        assert!(tm.m.max_abs_diff(&Mat2::identity()) < 1e-12);

        // z = k² (turning point): n = 0 handled by the sinc series
        let spec = fixtures::barrier(C64::new(4.0, 0.0), 1.0);
        let tm = analytic_transfer(&spec, 2.0).unwrap();
        assert!(tm.m.norm_max().is_finite());
        assert!(tm.det_residual < 1e-12);
        // cross-check against the ODE engine through the exceptional point
        let ode = transfer_matrix_ode(&spec, 2.0, ODE_TOL).unwrap();
        assert!(tm.m.max_abs_diff(&ode.m) < 1e-8);
    }

    #[test]
    fn delta_pair_matches_narrow_rectangle_limit() {
        let spec = fixtures::delta_pair_unit();
        let k = 1.0;
        let impulsive = transfer_matrix_ode(&spec, k, ODE_TOL).unwrap();

        // narrow-rectangle oracle: width-1e-4 barriers of unit area
        let width = 1e-4;
        let height = C64::ONE / width;
        let left = fixtures::barrier_on(height, -width / 2.0, width / 2.0);
        let right = fixtures::barrier_on(height, 1.0 - width / 2.0, 1.0 + width / 2.0);
        let ml = transfer_matrix_ode(&left, k, 1e-12).unwrap();
        let mr = transfer_matrix_ode(&right, k, 1e-12).unwrap();
        let oracle = compose(&mr, &ml).unwrap();

        assert!(impulsive.m.max_abs_diff(&oracle.m) < 1e-4);
        assert!(impulsive.det_residual < 1e-12);
    }

    #[test]
    fn composition_reassembles_split_barrier() {
        let z = C64::new(1.0, 0.7);
        let k = 1.7;
        let whole = analytic_transfer(&fixtures::barrier(z, 1.0), k).unwrap();

        let left = transfer_matrix_ode(&fixtures::barrier_on(z, 0.0, 0.5), k, ODE_TOL).unwrap();
        let right = transfer_matrix_ode(&fixtures::barrier_on(z, 0.5, 1.0), k, ODE_TOL).unwrap();
        let put_together = compose(&right, &left).unwrap();
        assert!(put_together.m.max_abs_diff(&whole.m) < 1e-8);

        // compose(I, M) = M
        let identity = TransferMatrix::new(Mat2::identity(), k, Method::Analytic);
        let same = compose(&identity, &whole).unwrap();
        assert!(same.m.max_abs_diff(&whole.m) < 1e-15);
    }

    #[test]
    fn double_delta_equals_composition_of_jumps() {
        let (z1, z2) = (C64::new(1.0, 0.0), C64::new(0.0, 2.0));
        let (a1, a2) = (-0.3, 0.9);
        let k = 1.4;
        let pair = analytic_transfer(&fixtures::delta_pair(z1, z2, a1, a2), k).unwrap();
        let j1 = TransferMatrix::new(delta_jump_matrix(z1, a1, k), k, Method::Analytic);
        let j2 = TransferMatrix::new(delta_jump_matrix(z2, a2, k), k, Method::Analytic);
        let composed = compose(&j2, &j1).unwrap();
        assert!(pair.m.max_abs_diff(&composed.m) < 1e-14);
    }

    #[test]
    fn amplitude_round_trip_is_identity() {
        // build a unit-determinant matrix from amplitudes, extract, rebuild
        let amps = ScatteringAmplitudes {
            r_left: C64::new(0.3, -0.2),
            r_right: C64::new(-0.1, 0.45),
            t: C64::new(0.8, 0.25),
            k: 1.0,
            order: AmplitudeOrder::Exact,
        };
        let tm = amps.to_transfer(Method::Analytic);
        assert!(tm.det_residual < 1e-14);
        let back = amplitudes_from_transfer(&tm).unwrap();
        assert!((back.r_left - amps.r_left).norm() < 1e-12);
        assert!((back.r_right - amps.r_right).norm() < 1e-12);
        assert!((back.t - amps.t).norm() < 1e-12);
    }

    #[test]
    fn barrier_amplitudes_satisfy_m11_identity() {
        let spec = fixtures::barrier_complex();
        let tm = analytic_transfer(&spec, 1.1).unwrap();
        let amps = amplitudes_from_transfer(&tm).unwrap();
        let residual = (tm.m.m11 - (amps.t - amps.r_left * amps.r_right / amps.t)).norm();
        assert!(residual < 1e-10);
    }

    #[test]
    fn spectral_singularity_is_reported() {
        let m = Mat2::new(C64::ONE, C64::ONE, C64::ONE, C64::ZERO);
        let tm = TransferMatrix::new(m, 1.0, Method::Analytic);
        assert!(matches!(
            amplitudes_from_transfer(&tm),
            Err(Error::SpectralSingularity { .. })
        ));
    }

    #[test]
    fn wavenumber_mismatch_is_rejected() {
        let a = TransferMatrix::new(Mat2::identity(), 1.0, Method::Analytic);
        let b = TransferMatrix::new(Mat2::identity(), 2.0, Method::Analytic);
        assert!(matches!(
            compose(&a, &b),
            Err(Error::WavenumberMismatch { .. })
        ));
    }

    #[test]
    fn transfer_symmetry_under_k_negation() {
        // M11(k) = M22(-k) and M12(k) = M21(-k) for barrier and delta pair
        for spec in [
            fixtures::barrier_complex(),
            fixtures::delta_pair(C64::new(1.0, 0.3), C64::new(2.0, 0.0), 0.0, 1.0),
        ] {
            for &k in &[0.7, 1.0, 2.3] {
                let plus = analytic_transfer(&spec, k).unwrap().m;
                let minus = analytic_transfer(&spec, -k).unwrap().m;
                assert!((plus.m11 - minus.m22).norm() < 1e-12);
                assert!((plus.m12 - minus.m21).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn coincident_deltas_merge() {
        let k = 1.2;
        let merged = analytic_transfer(
            &fixtures::delta_pair(C64::ONE, C64::new(2.0, 0.5), 0.7, 0.7),
            k,
        )
        .unwrap();
        let single = delta_jump_matrix(C64::new(3.0, 0.5), 0.7, k);
        assert!(merged.m.max_abs_diff(&single) < 1e-15);
    }

    #[test]
    fn undersized_window_reports_truncation() {
        let spec = fixtures::gaussian_derivative();
        let opts = EngineOptions {
            truncation_factor: 1.0,
            ..EngineOptions::default()
        };
        assert!(matches!(
            transfer_matrix_ode_with(&spec, 1.0, &opts),
            Err(Error::Truncation { .. })
        ));
    }
}
