use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Error type shared by every module of the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("delta-type potential is distributional; pointwise evaluation is undefined")]
    DistributionalPotential,

    #[error("wavenumber must be positive, got {0}")]
    InvalidWavenumber(f64),

    #[error("quadrature did not converge: residual estimate {residual:.3e} after {panels} panels")]
    QuadratureFailure { residual: f64, panels: usize },

    #[error("family does not define Fourier coefficients of a periodic profile")]
    NotPeriodic,

    #[error("support length {support} is not an integer multiple of the period {period}")]
    PeriodMismatch { support: f64, period: f64 },

    #[error("step size underflow at tau = {tau:.6e} (h = {step:.3e})")]
    IntegrationFailure { tau: f64, step: f64 },

    #[error(
        "truncation window too small: tail magnitude {tail:.3e} exceeds {threshold:.3e} of peak"
    )]
    Truncation { tail: f64, threshold: f64 },

    #[error("spectral singularity: |M22| = {m22_abs:.3e} below {threshold:.3e}")]
    SpectralSingularity { m22_abs: f64, threshold: f64 },

    #[error("transfer matrices computed at different wavenumbers: {left} vs {right}")]
    WavenumberMismatch { left: f64, right: f64 },

    #[error("no closed-form transfer matrix for family `{0}`")]
    UnsupportedFamily(&'static str),

    #[error("degenerate denominator in perturbative amplitude: magnitude {0:.3e}")]
    DegenerateDenominator(f64),

    #[error("unit-determinant contract violated: |det M - 1| = {0:.3e}")]
    UnitDeterminant(f64),

    #[error("derivative noise {noise:.3e} exceeds bound {bound:.3e}; smooth or tabulate the data more densely")]
    NonSmoothData { noise: f64, bound: f64 },

    #[error("denominator 1 + integral of the reflection profile is {0:.3e}, too close to zero")]
    DegenerateAlphaDenominator(f64),

    #[error("tail averages of the reflection profile did not converge (spread {0:.3e})")]
    TailNonconvergence(f64),

    #[error("invalid potential spec: {0}")]
    InvalidSpec(String),

    #[error("invalid first-Born data: {0}")]
    InvalidData(String),
}
