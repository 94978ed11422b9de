//! Born/Dyson expansion of the transfer matrix.
//!
//! The interaction-picture generator is proportional to the potential, so the
//! time-ordered exponential expands in powers of the coupling,
//! `M = I + Σ_ℓ M⁽ℓ⁾`. Instead of ℓ-dimensional simplex quadrature, the
//! ℓ-th term is computed by the equivalent ODE hierarchy
//!
//! ```text
//! A₀ ≡ I,   i dA_ℓ/dτ = ℋ(τ)·A_{ℓ-1}(τ),   A_ℓ(τ₋) = 0,   M⁽ℓ⁾ = A_ℓ(τ₊),
//! ```
//!
//! whose cost is linear in ℓ. The first two orders also have closed forms in
//! the potential's Fourier data,
//!
//! ```text
//! M⁽¹⁾ = (-i/2k)·[[ṽ(0), ṽ(2k)], [-ṽ(-2k), -ṽ(0)]]
//! M⁽²⁾ = (-1/4k²)·[[ṽ(0,0) - ṽ(-2k,2k),  ṽ(2k,0) - ṽ(0,2k)],
//!                  [ṽ(-2k,0) - ṽ(0,-2k), ṽ(0,0) - ṽ(2k,-2k)]]
//! ```
//!
//! which the tests hold against the recursion. Delta pairs use the closed
//! forms directly and terminate exactly at second order.

use crate::error::{Error, Result};
use crate::fourier::FourierData;
use crate::mat2::Mat2;
use crate::ode::{self, OdeOptions};
use crate::potential::{Family, PotentialSpec};
use crate::transfer::{
    AmplitudeOrder, EngineOptions, Method, ScatteringAmplitudes, TransferMatrix,
};
use crate::two_level::interaction_matrix;
use num_complex::Complex64 as C64;

#[derive(Clone, Copy, Debug)]
pub struct BornTerm {
    pub order: u32,
    pub matrix: Mat2,
    pub k: f64,
}

/// All terms `M⁽¹⁾ … M⁽ᴺ⁾` in one integration pass.
pub fn born_terms(spec: &PotentialSpec, k: f64, max_order: u32) -> Result<Vec<BornTerm>> {
    born_terms_with(spec, k, max_order, &EngineOptions::default())
}

pub fn born_terms_with(
    spec: &PotentialSpec,
    k: f64,
    max_order: u32,
    opts: &EngineOptions,
) -> Result<Vec<BornTerm>> {
    if k <= 0.0 {
        return Err(Error::InvalidWavenumber(k));
    }
    if max_order == 0 {
        return Ok(Vec::new());
    }

    if matches!(spec.family, Family::DeltaPair { .. }) {
        let mut terms = vec![BornTerm {
            order: 1,
            matrix: first_order_closed(spec, k)?,
            k,
        }];
        if max_order >= 2 {
            terms.push(BornTerm {
                order: 2,
                matrix: second_order_closed(spec, k)?,
                k,
            });
        }
        // a pair of nilpotent jumps has no third- or higher-order content
        for order in 3..=max_order {
            terms.push(BornTerm {
                order,
                matrix: Mat2::zero(),
                k,
            });
        }
        return Ok(terms);
    }

    let n = max_order as usize;
    let (lo, hi) = spec.window_with_factor(opts.truncation_factor);
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

    // state = [A1; A2; ...; AN], row-major 2x2 blocks
    let mut state = vec![C64::ZERO; 4 * n];
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
            // A1 is driven by the identity
            dy[0] = mi * h.m11;
            dy[1] = mi * h.m12;
            dy[2] = mi * h.m21;
            dy[3] = mi * h.m22;
            for l in 1..n {
                let (prev, cur) = (4 * (l - 1), 4 * l);
                dy[cur] = mi * (h.m11 * y[prev] + h.m12 * y[prev + 2]);
                dy[cur + 1] = mi * (h.m11 * y[prev + 1] + h.m12 * y[prev + 3]);
                dy[cur + 2] = mi * (h.m21 * y[prev] + h.m22 * y[prev + 2]);
                dy[cur + 3] = mi * (h.m21 * y[prev + 1] + h.m22 * y[prev + 3]);
            }
        };
        ode::propagate(rhs, k * a, k * b, &mut state, &ode_opts)?;
    }

    Ok((0..n)
        .map(|l| BornTerm {
            order: (l + 1) as u32,
            matrix: Mat2::new(
                state[4 * l],
                state[4 * l + 1],
                state[4 * l + 2],
                state[4 * l + 3],
            ),
            k,
        })
        .collect())
}

pub fn born_term(spec: &PotentialSpec, k: f64, order: u32) -> Result<BornTerm> {
    if order == 0 {
        return Ok(BornTerm {
            order: 0,
            matrix: Mat2::identity(),
            k,
        });
    }
    Ok(born_terms(spec, k, order)?
        .pop()
        .expect("max_order >= 1 yields terms"))
}

/// Partial sum `I + Σ_{ℓ<=N} M⁽ℓ⁾` with a geometric residual estimate.
#[derive(Clone, Debug)]
pub struct BornSum {
    pub transfer: TransferMatrix,
    /// `‖M⁽ᴺ⁾‖·ρ/(1-ρ)` with `ρ = ‖M⁽ᴺ⁾‖/‖M⁽ᴺ⁻¹⁾‖`, when ρ < 1.
    pub residual_estimate: Option<f64>,
    /// False when the last ratio does not contract; the partial sum is still
    /// returned (it remains useful as an asymptotic series).
    pub convergent: bool,
}

pub fn born_sum(spec: &PotentialSpec, k: f64, max_order: u32) -> Result<BornSum> {
    born_sum_with(spec, k, max_order, &EngineOptions::default())
}

pub fn born_sum_with(
    spec: &PotentialSpec,
    k: f64,
    max_order: u32,
    opts: &EngineOptions,
) -> Result<BornSum> {
    let terms = born_terms_with(spec, k, max_order, opts)?;
    let mut m = Mat2::identity();
    for t in &terms {
        m = m + t.matrix;
    }
    let (residual_estimate, convergent) = match terms.len() {
        0 | 1 => (None, true),
        n => {
            let last = terms[n - 1].matrix.norm_frobenius();
            let prev = terms[n - 2].matrix.norm_frobenius();
            if last == 0.0 {
                (Some(0.0), true)
            } else if prev > 0.0 && last < prev {
                let rho = last / prev;
                (Some(last * rho / (1.0 - rho)), true)
            } else {
                (None, false)
            }
        }
    };
    Ok(BornSum {
        transfer: TransferMatrix::new(m, k, Method::Born(max_order)),
        residual_estimate,
        convergent,
    })
}

/// Closed first-order term from the single Fourier transform.
pub fn first_order_closed(spec: &PotentialSpec, k: f64) -> Result<Mat2> {
    let data = FourierData::new(spec, k)?;
    let v0 = data.single(0.0)?;
    let vp = data.single(2.0 * k)?;
    let vm = data.single(-2.0 * k)?;
    Ok(Mat2::new(v0, vp, -vm, -v0).scale(-C64::i() / (2.0 * k)))
}

/// Closed second-order term from the ordered double transform.
pub fn second_order_closed(spec: &PotentialSpec, k: f64) -> Result<Mat2> {
    let data = FourierData::new(spec, k)?;
    let q = 2.0 * k;
    let v00 = data.double(0.0, 0.0)?;
    let m11 = v00 - data.double(-q, q)?;
    let m12 = data.double(q, 0.0)? - data.double(0.0, q)?;
    let m21 = data.double(-q, 0.0)? - data.double(0.0, -q)?;
    let m22 = v00 - data.double(q, -q)?;
    Ok(Mat2::new(m11, m12, m21, m22).scale(C64::new(-1.0 / (4.0 * k * k), 0.0)))
}

fn first_order_denominator(spec: &PotentialSpec, k: f64) -> Result<(FourierData<'_>, C64)> {
    let data = FourierData::new(spec, k)?;
    let v0 = data.single(0.0)?;
    let den = C64::i() * 2.0 * k - v0;
    if den.norm() < 1e-10 * (k + v0.norm()) {
        return Err(Error::DegenerateDenominator(den.norm()));
    }
    Ok((data, den))
}

/// First Born approximation of the amplitudes:
/// `Rˡ = ṽ(-2k)/(2ik - ṽ(0))`, `Rʳ = ṽ(2k)/(2ik - ṽ(0))`,
/// `T = 2ik/(2ik - ṽ(0))`.
pub fn amplitudes_first_order(spec: &PotentialSpec, k: f64) -> Result<ScatteringAmplitudes> {
    let (data, den) = first_order_denominator(spec, k)?;
    Ok(ScatteringAmplitudes {
        r_left: data.single(-2.0 * k)? / den,
        r_right: data.single(2.0 * k)? / den,
        t: C64::i() * 2.0 * k / den,
        k,
        order: AmplitudeOrder::Born1,
    })
}

/// Second-order perturbative amplitudes.
pub fn amplitudes_second_order(spec: &PotentialSpec, k: f64) -> Result<ScatteringAmplitudes> {
    let data = FourierData::new(spec, k)?;
    let q = 2.0 * k;
    let v0 = data.single(0.0)?;
    let vp = data.single(q)?;
    let vm = data.single(-q)?;
    let den = C64::new(4.0 * k * k, 0.0) + C64::i() * 2.0 * v0 * k + data.double(q, -q)?
        - data.double(0.0, 0.0)?;
    if den.norm() < 1e-10 * (4.0 * k * k + v0.norm()) {
        return Err(Error::DegenerateDenominator(den.norm()));
    }
    let r_left = (-C64::i() * 2.0 * k * vm + data.double(-q, 0.0)? - data.double(0.0, -q)?) / den;
    let r_right = (-C64::i() * 2.0 * k * vp - data.double(q, 0.0)? + data.double(0.0, q)?) / den;
    let t = 4.0 * k * k / den;
    Ok(ScatteringAmplitudes {
        r_left,
        r_right,
        t,
        k,
        order: AmplitudeOrder::Born2,
    })
}
