//! Embedded Dormand–Prince 5(4) propagator for small complex ODE systems.
//!
//! The state is a flat slice of `Complex64`; the transfer-matrix engine packs
//! a 2x2 propagator into four entries, the Born recursion stacks one matrix
//! per order. FSAL is exploited, buffers are reused across steps.

use crate::error::{Error, Result};
use num_complex::Complex64 as C64;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Difference between the 5th- and 4th-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

#[derive(Clone, Copy, Debug)]
pub struct OdeOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_step: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_step: f64::INFINITY,
            max_steps: 10_000_000,
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct OdeStats {
    pub steps: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

fn combine(out: &mut [C64], y: &[C64], h: f64, terms: &[(f64, &[C64])]) {
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = C64::ZERO;
        for (c, k) in terms {
            acc += *c * k[i];
        }
        *o = y[i] + h * acc;
    }
}

/// Integrate `dy/dt = rhs(t, y)` from `t0` to `t1` (with `t1 >= t0`),
/// advancing `y` in place.
pub fn propagate<F>(rhs: F, t0: f64, t1: f64, y: &mut [C64], opts: &OdeOptions) -> Result<OdeStats>
where
    F: Fn(f64, &[C64], &mut [C64]),
{
    let n = y.len();
    let mut stats = OdeStats::default();
    if t1 == t0 || n == 0 {
        return Ok(stats);
    }
    debug_assert!(t1 > t0);

    let mut k1 = vec![C64::ZERO; n];
    let mut k2 = vec![C64::ZERO; n];
    let mut k3 = vec![C64::ZERO; n];
    let mut k4 = vec![C64::ZERO; n];
    let mut k5 = vec![C64::ZERO; n];
    let mut k6 = vec![C64::ZERO; n];
    let mut k7 = vec![C64::ZERO; n];
    let mut stage = vec![C64::ZERO; n];
    let mut y_new = vec![C64::ZERO; n];

    let span = t1 - t0;
    let mut t = t0;
    let mut h = opts.max_step.min(span / 8.0).min(span);
    let mut first = true;

    rhs(t, y, &mut k1);
    stats.evaluations += 1;

    loop {
        if t >= t1 {
            return Ok(stats);
        }
        if stats.steps >= opts.max_steps {
            return Err(Error::IntegrationFailure { tau: t, step: h });
        }
        h = h.min(t1 - t);
        if h <= f64::EPSILON * t.abs().max(1.0) {
            return Err(Error::IntegrationFailure { tau: t, step: h });
        }

        combine(&mut stage, y, h, &[(A21, &k1)]);
        rhs(t + C2 * h, &stage, &mut k2);
        combine(&mut stage, y, h, &[(A31, &k1), (A32, &k2)]);
        rhs(t + C3 * h, &stage, &mut k3);
        combine(&mut stage, y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]);
        rhs(t + C4 * h, &stage, &mut k4);
        combine(
            &mut stage,
            y,
            h,
            &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)],
        );
        rhs(t + C5 * h, &stage, &mut k5);
        combine(
            &mut stage,
            y,
            h,
            &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
        );
        rhs(t + h, &stage, &mut k6);
        combine(
            &mut y_new,
            y,
            h,
            &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)],
        );
        rhs(t + h, &y_new, &mut k7);
        stats.evaluations += 6;

        let mut err_norm = 0.0f64;
        for i in 0..n {
            let err = E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i];
            let scale = opts.abs_tol + opts.rel_tol * y[i].norm().max(y_new[i].norm());
            err_norm = err_norm.max(h.abs() * err.norm() / scale);
        }

        if err_norm <= 1.0 {
            t += h;
            y.copy_from_slice(&y_new);
            std::mem::swap(&mut k1, &mut k7); // FSAL
            stats.steps += 1;
            first = false;
        } else {
            stats.rejected += 1;
        }

        let factor = if err_norm > 0.0 {
            0.9 * err_norm.powf(-0.2)
        } else {
            5.0
        };
        let factor = factor.clamp(0.2, if first { 1.0 } else { 5.0 });
        h = (h * factor).min(opts.max_step);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_rotation_matches_closed_form() {
        // dy/dtau = -i w y  =>  y(T) = e^{-i w T} y(0)
        let w = C64::new(0.7, 0.15);
        let mut y = vec![C64::new(1.0, 0.0)];
        let opts = OdeOptions::default();
        propagate(
            |_t, y, dy| dy[0] = -C64::i() * w * y[0],
            0.0,
            10.0,
            &mut y,
            &opts,
        )
        .unwrap();
        let expect = (-C64::i() * w * 10.0).exp();
        assert!((y[0] - expect).norm() < 1e-9);
    }

    #[test]
    fn oscillatory_system_keeps_unit_determinant() {
        // dU/dtau = -i H(tau) U with traceless H: det U stays 1.
        let mut u = vec![C64::ONE, C64::ZERO, C64::ZERO, C64::ONE];
        let opts = OdeOptions {
            abs_tol: 1e-11,
            rel_tol: 1e-11,
            max_step: 0.05,
            ..OdeOptions::default()
        };
        propagate(
            |t, u, du| {
                let w = C64::new(0.3 * (1.5 * t).cos(), 0.1);
                let p = (C64::i() * 2.0 * t).exp();
                let mi = -C64::i();
                du[0] = mi * w * (u[0] + u[2] / p);
                du[1] = mi * w * (u[1] + u[3] / p);
                du[2] = mi * (-w) * (p * u[0] + u[2]);
                du[3] = mi * (-w) * (p * u[1] + u[3]);
            },
            0.0,
            20.0,
            &mut u,
            &opts,
        )
        .unwrap();
        let det = u[0] * u[3] - u[1] * u[2];
        assert!((det - C64::ONE).norm() < 1e-9);
    }
}
