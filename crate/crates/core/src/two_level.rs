//! The two-level non-Hermitian system equivalent to the scattering problem.
//!
//! With `τ = kx` and `w(τ) = v(τ/k)/(2k²)`, the stationary equation
//! `-ψ'' + vψ = k²ψ` becomes `i dΨ/dτ = H(τ)Ψ` for the two-component state
//! `Ψ = ½(φ - iφ̇, φ + iφ̇)` with
//!
//! ```text
//! H(τ) = -σ₃ + w(τ)·N,      N = iσ₂ + σ₃ = [[1, 1], [-1, -1]].
//! ```
//!
//! `H` is traceless with eigenvalues `±n(τ)`, `n = sqrt(1 - 2w)`; for real
//! `v` it is σ₃-pseudo-Hermitian, and classical turning points `v(x) = k²`
//! are exactly its exceptional points. The interaction picture removes the
//! free part: `ℋ(τ) = w(τ)·[[1, e^{-2iτ}], [-e^{2iτ}, -1]]`.

use crate::error::{Error, Result};
use crate::mat2::Mat2;
use crate::potential::PotentialSpec;
use num_complex::Complex64 as C64;

/// Default tolerance on `|1 - v/k²|` below which the eigenvalues are treated
/// as coalesced.
pub const COALESCENCE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Picture {
    Schroedinger,
    Interaction,
}

#[derive(Clone, Copy, Debug)]
pub struct TwoLevelHamiltonian {
    pub matrix: Mat2,
    pub tau: f64,
    pub w: C64,
    pub picture: Picture,
}

/// Interaction-picture generator for a given `w(τ)`; shared with the ODE
/// engines.
pub(crate) fn interaction_matrix(w: C64, tau: f64) -> Mat2 {
    let phase = (C64::i() * 2.0 * tau).exp();
    Mat2::new(w, w / phase, -w * phase, -w)
}

pub(crate) fn schroedinger_matrix(w: C64) -> Mat2 {
    Mat2::new(w - 1.0, w, -w, -w + 1.0)
}

/// Build `H(τ)` or `ℋ(τ)` for the potential at wavenumber `k`.
pub fn hamiltonian_at(
    spec: &PotentialSpec,
    k: f64,
    tau: f64,
    picture: Picture,
) -> Result<TwoLevelHamiltonian> {
    if k <= 0.0 {
        return Err(Error::InvalidWavenumber(k));
    }
    let v = spec.evaluate(tau / k, k)?;
    let w = v / (2.0 * k * k);
    let matrix = match picture {
        Picture::Schroedinger => schroedinger_matrix(w),
        Picture::Interaction => interaction_matrix(w, tau),
    };
    Ok(TwoLevelHamiltonian {
        matrix,
        tau,
        w,
        picture,
    })
}

/// Spectral data of `H(τ)` at one point.
#[derive(Clone, Copy, Debug)]
pub struct SpectralDiagnostic {
    pub e_plus: C64,
    pub e_minus: C64,
    /// `n(τ) = sqrt(1 - 2w)`, the local refractive index.
    pub n_of_tau: C64,
    pub exceptional: bool,
    /// `‖H† - σ₃ H σ₃⁻¹‖`, zero exactly when `v` is real there.
    pub pseudo_hermitian_residual: f64,
}

pub fn spectral_diagnostic(spec: &PotentialSpec, k: f64, tau: f64) -> Result<SpectralDiagnostic> {
    spectral_diagnostic_with_tol(spec, k, tau, COALESCENCE_TOL)
}

pub fn spectral_diagnostic_with_tol(
    spec: &PotentialSpec,
    k: f64,
    tau: f64,
    coalescence_tol: f64,
) -> Result<SpectralDiagnostic> {
    let h = hamiltonian_at(spec, k, tau, Picture::Schroedinger)?;
    let one_minus_2w = C64::ONE - 2.0 * h.w;
    let n_of_tau = one_minus_2w.sqrt();
    let sigma3 = Mat2::new(C64::ONE, C64::ZERO, C64::ZERO, -C64::ONE);
    let residual = (h.matrix.dagger() - sigma3 * h.matrix * sigma3).norm_max();
    Ok(SpectralDiagnostic {
        e_plus: n_of_tau,
        e_minus: -n_of_tau,
        n_of_tau,
        exceptional: one_minus_2w.norm() <= coalescence_tol,
        pseudo_hermitian_residual: residual,
    })
}

/// Condition number of the eigenvector matrix of `H(τ)` (Frobenius estimate).
/// Diverges as the exceptional point is approached, where `H` loses
/// diagonalizability.
pub fn eigenvector_condition(spec: &PotentialSpec, k: f64, tau: f64) -> Result<f64> {
    let h = hamiltonian_at(spec, k, tau, Picture::Schroedinger)?;
    let n = (C64::ONE - 2.0 * h.w).sqrt();
    // eigenvector for E: (w, E + 1 - w), normalized
    let column = |e: C64| {
        let v = (h.w, e + C64::ONE - h.w);
        let norm = (v.0.norm_sqr() + v.1.norm_sqr()).sqrt();
        (v.0 / norm, v.1 / norm)
    };
    let p = column(n);
    let m = column(-n);
    let vmat = Mat2::new(p.0, m.0, p.1, m.1);
    let det = vmat.det();
    if det.norm() == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(vmat.norm_frobenius() * vmat.inverse().norm_frobenius())
}

/// Two-component state `Ψ = ½(φ - iφ̇, φ + iφ̇)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateVector {
    pub components: [C64; 2],
}

impl StateVector {
    pub fn from_wave(phi: C64, phi_dot: C64) -> Self {
        let i = C64::i();
        Self {
            components: [0.5 * (phi - i * phi_dot), 0.5 * (phi + i * phi_dot)],
        }
    }

    pub fn phi(&self) -> C64 {
        self.components[0] + self.components[1]
    }

    pub fn phi_dot(&self) -> C64 {
        C64::i() * (self.components[0] - self.components[1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::potential::{Family, PotentialSpec, Support};

    #[test]
    fn free_hamiltonian_is_minus_sigma3() {
        let spec = fixtures::barrier(C64::ZERO, 1.0);
        let h = hamiltonian_at(&spec, 1.0, 0.5, Picture::Schroedinger).unwrap();
        let expect = Mat2::new(-C64::ONE, C64::ZERO, C64::ZERO, C64::ONE);
        assert!(h.matrix.max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn barrier_interior_matrix_matches_definition() {
        let z = C64::new(0.8, 0.3);
        let k = 2.0;
        let spec = fixtures::barrier(z, 2.0);
        let h = hamiltonian_at(&spec, k, k * 1.0, Picture::Schroedinger).unwrap();
        let w = z / (2.0 * k * k);
        let expect = Mat2::new(w - 1.0, w, -w, -w + 1.0);
        assert!(h.matrix.max_abs_diff(&expect) < 1e-15);
        assert!(h.matrix.trace().norm() < 1e-15);
        // det = -(1 - 2w)
        let det = h.matrix.det();
        assert!((det + (C64::ONE - 2.0 * w)).norm() < 1e-15);
    }

    #[test]
    fn interaction_matrix_at_origin() {
        let z = C64::new(0.8, 0.3);
        let k = 2.0;
        let spec = fixtures::barrier_on(z, -1.0, 1.0);
        let h = hamiltonian_at(&spec, k, 0.0, Picture::Interaction).unwrap();
        let w = z / (2.0 * k * k);
        let expect = Mat2::new(w, w, -w, -w);
        assert!(h.matrix.max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn spectral_examples() {
        // v = 0: E± = ±1, not exceptional, zero residual
        let spec = fixtures::barrier(C64::ZERO, 1.0);
        let d = spectral_diagnostic(&spec, 1.0, 0.5).unwrap();
        assert!((d.e_plus - C64::ONE).norm() < 1e-15);
        assert!((d.e_minus + C64::ONE).norm() < 1e-15);
        assert!(!d.exceptional);
        assert_eq!(d.pseudo_hermitian_residual, 0.0);

        // v = k²: coalescence at zero
        let spec = fixtures::barrier(C64::new(4.0, 0.0), 1.0);
        let d = spectral_diagnostic(&spec, 2.0, 1.0).unwrap();
        assert!(d.exceptional);
        assert!(d.e_plus.norm() < 1e-12);

        // v = 2k²: E± = ±i on the principal branch
        let spec = fixtures::barrier(C64::new(2.0, 0.0), 1.0);
        let d = spectral_diagnostic(&spec, 1.0, 0.5).unwrap();
        assert!((d.e_plus - C64::i()).norm() < 1e-14);
        assert!((d.e_minus + C64::i()).norm() < 1e-14);
    }

    #[test]
    fn real_potential_eigenvalues_real_or_conjugate() {
        // v < k²: both real
        let spec = fixtures::barrier(C64::new(0.5, 0.0), 1.0);
        let d = spectral_diagnostic(&spec, 1.0, 0.5).unwrap();
        assert!(d.e_plus.im.abs() < 1e-15 && d.e_minus.im.abs() < 1e-15);
        // v > k²: conjugate pair on the imaginary axis
        let spec = fixtures::barrier(C64::new(3.0, 0.0), 1.0);
        let d = spectral_diagnostic(&spec, 1.0, 0.5).unwrap();
        assert!(d.e_plus.re.abs() < 1e-15 && d.e_minus.re.abs() < 1e-15);
        assert!((d.e_plus.im + d.e_minus.im).abs() < 1e-15);
    }

    #[test]
    fn complex_potential_breaks_pseudo_hermiticity() {
        let spec = fixtures::barrier_complex();
        let d = spectral_diagnostic(&spec, 1.0, 0.5).unwrap();
        assert!(d.pseudo_hermitian_residual > 0.0);
    }

    #[test]
    fn eigenvector_condition_diverges_at_turning_point() {
        let k = 1.0;
        let make = |v: f64| fixtures::barrier(C64::new(v, 0.0), 1.0);
        let far = eigenvector_condition(&make(0.5), k, 0.5).unwrap();
        let near = eigenvector_condition(&make(1.0 - 1e-12), k, 0.5).unwrap();
        assert!(far < 1e2);
        assert!(near > 1e5, "near-coalescent condition number: {near}");
    }

    #[test]
    fn state_vector_reconstructs_wave() {
        let phi = C64::new(0.3, -1.1);
        let phi_dot = C64::new(-0.2, 0.9);
        let psi = StateVector::from_wave(phi, phi_dot);
        assert!((psi.phi() - phi).norm() < 1e-15);
        assert!((psi.phi_dot() - phi_dot).norm() < 1e-15);
    }

    #[test]
    fn delta_families_are_rejected() {
        let spec = PotentialSpec::new(
            Family::DeltaPair {
                z1: C64::ONE,
                z2: C64::ONE,
                a1: 0.0,
                a2: 1.0,
            },
            Support::Interval(0.0, 1.0),
        );
        assert!(hamiltonian_at(&spec, 1.0, 0.0, Picture::Schroedinger).is_err());
    }
}
