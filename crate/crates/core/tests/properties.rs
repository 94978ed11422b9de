//! Randomized invariants across modules.

use proptest::prelude::*;
use wavetm_core::fourier::{self, phase_integral};
use wavetm_core::transfer::{
    amplitudes_from_transfer, AmplitudeOrder, Method, ScatteringAmplitudes,
};
use wavetm_core::two_level;
use wavetm_core::{fixtures, Complex64 as C64, PotentialSpec};

fn finite(range: std::ops::Range<f64>) -> impl Strategy<Value = f64> {
    range.prop_filter("finite", |x| x.is_finite())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Real potentials have Hermitian-symmetric transforms.
    #[test]
    fn real_spec_transform_symmetry(
        z in finite(0.05..3.0),
        l in finite(0.2..4.0),
        q in finite(-12.0..12.0),
    ) {
        let spec = fixtures::barrier(C64::new(z, 0.0), l);
        let plus = fourier::fourier1(&spec, q, 1.0).unwrap();
        let minus = fourier::fourier1(&spec, -q, 1.0).unwrap();
        prop_assert!((minus - plus.conj()).norm() < 1e-12 * (1.0 + plus.norm()));
    }

    /// Amplitudes -> transfer matrix -> amplitudes is the identity for any
    /// unit-determinant matrix with |T| bounded away from zero.
    #[test]
    fn amplitude_round_trip(
        rl_re in finite(-0.6..0.6), rl_im in finite(-0.6..0.6),
        rr_re in finite(-0.6..0.6), rr_im in finite(-0.6..0.6),
        t_re in finite(0.2..1.0), t_im in finite(-0.5..0.5),
    ) {
        let amps = ScatteringAmplitudes {
            r_left: C64::new(rl_re, rl_im),
            r_right: C64::new(rr_re, rr_im),
            t: C64::new(t_re, t_im),
            k: 1.0,
            order: AmplitudeOrder::Exact,
        };
        let tm = amps.to_transfer(Method::Analytic);
        prop_assert!(tm.det_residual < 1e-12);
        let back = amplitudes_from_transfer(&tm).unwrap();
        prop_assert!((back.r_left - amps.r_left).norm() < 1e-12);
        prop_assert!((back.r_right - amps.r_right).norm() < 1e-12);
        prop_assert!((back.t - amps.t).norm() < 1e-12);
    }

    /// For real v the two-level generator is sigma3-pseudo-Hermitian
    /// pointwise, with real or conjugate-paired eigenvalues.
    #[test]
    fn real_potential_spectral_structure(
        v in finite(0.05..4.0),
        k in finite(0.3..3.0),
        tau_frac in finite(0.0..1.0),
    ) {
        let spec = fixtures::barrier(C64::new(v, 0.0), 1.0);
        let tau = k * tau_frac; // stays inside the support
        let d = two_level::spectral_diagnostic(&spec, k, tau).unwrap();
        prop_assert_eq!(d.pseudo_hermitian_residual, 0.0);
        if v < k * k {
            prop_assert!(d.e_plus.im.abs() < 1e-14);
            prop_assert!(d.e_minus.im.abs() < 1e-14);
        } else if v > k * k {
            prop_assert!(d.e_plus.re.abs() < 1e-14);
            prop_assert!((d.e_plus.im + d.e_minus.im).abs() < 1e-14);
        }
    }

    /// The phase integral is continuous across its series/direct switch.
    #[test]
    fn phase_integral_consistency(
        theta in finite(-0.02..0.02),
        w in finite(0.1..4.0),
    ) {
        // midpoint-rule oracle at high resolution
        let n = 4000;
        let h = w / n as f64;
        let oracle: C64 = (0..n)
            .map(|i| (C64::i() * theta * ((i as f64 + 0.5) * h)).exp())
            .sum::<C64>() * h;
        let got = phase_integral(theta, w);
        prop_assert!((got - oracle).norm() < 1e-8 * w.max(1.0));
    }

    /// Potential specs survive a JSON round trip bit-exactly.
    #[test]
    fn spec_json_round_trip(
        z_re in finite(-3.0..3.0), z_im in finite(-3.0..3.0),
        l in finite(0.1..5.0),
    ) {
        let spec = fixtures::barrier(C64::new(z_re, z_im), l);
        let text = spec.to_json();
        let back = PotentialSpec::from_json(&text).unwrap();
        prop_assert_eq!(spec, back);
    }

    /// The triangle halves of the ordered double transform reassemble the
    /// product of single transforms.
    #[test]
    fn triangle_decomposition(
        z_re in finite(-1.5..1.5), z_im in finite(-1.5..1.5),
        l in finite(0.3..2.5),
        q1 in finite(-5.0..5.0), q2 in finite(-5.0..5.0),
    ) {
        let spec = fixtures::barrier(C64::new(z_re, z_im), l);
        let lhs = fourier::fourier2(&spec, q1, q2, 1.0).unwrap()
            + fourier::fourier2(&spec, q2, q1, 1.0).unwrap();
        let rhs = fourier::fourier1(&spec, q1, 1.0).unwrap()
            * fourier::fourier1(&spec, q2, 1.0).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-8 * (1.0 + rhs.norm()));
    }
}
