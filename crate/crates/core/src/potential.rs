//! Declarative descriptions of the scattering potentials `v(x; k)`.
//!
//! A [`PotentialSpec`] is family + parameters + support + coupling law, so the
//! CLI, the fixtures and the tests all share the same JSON representation:
//!
//! ```json
//! {"family": "rectangular_barrier", "params": {"z": [1.0, 0.5]},
//!  "support": [0.0, 2.0], "coupling": "constant"}
//! ```
//!
//! Complex numbers are `[re, im]` pairs. `"coupling": {"k_squared": c}`
//! replaces the overall coupling constant by `c·k²`, which models an
//! optically active medium with refractive index `n = sqrt(1 - v/k²)`
//! independent of `k`.

use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Truncation radius for infinite-range envelopes, in units of the envelope
/// width: `e^{-(r/L)^2}` falls below 1e-14 of its peak for `r >= 6L` already,
/// 8L keeps polynomial prefactors harmless too.
pub const DEFAULT_TRUNCATION_FACTOR: f64 = 8.0;

mod serde_c64 {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(c: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
        [c.re, c.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

mod serde_modes {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(
        modes: &[(i32, Complex64)],
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let raw: Vec<(i32, [f64; 2])> = modes.iter().map(|(j, c)| (*j, [c.re, c.im])).collect();
        raw.serialize(s)
    }

    #[allow(clippy::type_complexity)]
    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<(i32, Complex64)>, D::Error> {
        let raw = Vec::<(i32, [f64; 2])>::deserialize(d)?;
        Ok(raw
            .into_iter()
            .map(|(j, [re, im])| (j, Complex64::new(re, im)))
            .collect())
    }
}

mod serde_c64_vec {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
        let raw: Vec<[f64; 2]> = v.iter().map(|c| [c.re, c.im]).collect();
        raw.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Complex64>, D::Error> {
        let raw = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(raw
            .into_iter()
            .map(|[re, im]| Complex64::new(re, im))
            .collect())
    }
}

fn c64_one() -> C64 {
    C64::ONE
}

/// Potential family with its shape parameters. The overall coupling constant
/// `z` multiplies the family's shape function; under a `k_squared` coupling
/// law it is ignored in favour of `c·k²`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case")]
pub enum Family {
    /// `z1·δ(x-a1) + z2·δ(x-a2)`. Distributional: no pointwise evaluation.
    DeltaPair {
        #[serde(with = "serde_c64")]
        z1: C64,
        #[serde(with = "serde_c64")]
        z2: C64,
        a1: f64,
        a2: f64,
    },
    /// `z` on the support interval, zero outside.
    RectangularBarrier {
        #[serde(default = "c64_one", with = "serde_c64")]
        z: C64,
    },
    /// `z·e^{iKx}` on the support interval.
    TruncatedExponential {
        #[serde(default = "c64_one", with = "serde_c64")]
        z: C64,
        #[serde(rename = "K")]
        k_mode: f64,
    },
    /// `z·f(x)` with `f(x) = Σ_j c_j e^{ijKx}` on the support interval.
    LocallyPeriodicFourier {
        #[serde(default = "c64_one", with = "serde_c64")]
        z: C64,
        #[serde(rename = "K")]
        k_mode: f64,
        #[serde(with = "serde_modes")]
        modes: Vec<(i32, C64)>,
    },
    /// `-2·z·x·e^{-(x/L)²} / (sqrt(pi)·L³)`; the Fourier pair of a Gaussian
    /// off-diagonal first-Born entry.
    GaussianDerivative {
        #[serde(default = "c64_one", with = "serde_c64")]
        z: C64,
        #[serde(rename = "L")]
        width: f64,
    },
    /// `i·z·e^{-(x/L)²} / (sqrt(pi)·L²)`.
    GaussianPlain {
        #[serde(default = "c64_one", with = "serde_c64")]
        z: C64,
        #[serde(rename = "L")]
        width: f64,
    },
    /// `z·f(x)` with `f(x) = Σ_{j>=1} a^j e^{2ijKx} + b^j e^{-(2j-1)iKx}`,
    /// `|a| < 1`, `|b| < 1`; locally periodic with infinitely many modes.
    GeometricSeriesPeriodic {
        #[serde(default = "c64_one", with = "serde_c64")]
        z: C64,
        #[serde(rename = "K")]
        k_mode: f64,
        #[serde(with = "serde_c64")]
        a: C64,
        #[serde(with = "serde_c64")]
        b: C64,
    },
    /// Infinite-range unidirectionally invisible profile
    /// `z·e^{-2iKx}e^{-x²/L²}[2x³ - 3L²x + iKL²(2x² - L²)] / (sqrt(pi)K²L⁷)`.
    InfiniteRangeAnalytic {
        #[serde(default = "c64_one", with = "serde_c64")]
        z: C64,
        #[serde(rename = "K")]
        k_mode: f64,
        #[serde(rename = "L")]
        width: f64,
    },
    /// Uniform grid of complex samples, linearly interpolated.
    SampledGrid {
        x0: f64,
        dx: f64,
        #[serde(with = "serde_c64_vec")]
        values: Vec<C64>,
    },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::DeltaPair { .. } => "delta_pair",
            Family::RectangularBarrier { .. } => "rectangular_barrier",
            Family::TruncatedExponential { .. } => "truncated_exponential",
            Family::LocallyPeriodicFourier { .. } => "locally_periodic_fourier",
            Family::GaussianDerivative { .. } => "gaussian_derivative",
            Family::GaussianPlain { .. } => "gaussian_plain",
            Family::GeometricSeriesPeriodic { .. } => "geometric_series_periodic",
            Family::InfiniteRangeAnalytic { .. } => "infinite_range_analytic",
            Family::SampledGrid { .. } => "sampled_grid",
        }
    }

    pub fn is_distributional(&self) -> bool {
        matches!(self, Family::DeltaPair { .. })
    }

    /// Shape function without the overall coupling factor. Support clipping
    /// happens in [`PotentialSpec::evaluate`].
    fn shape(&self, x: f64) -> C64 {
        match self {
            Family::DeltaPair { .. } => unreachable!("distributional families are guarded"),
            Family::RectangularBarrier { .. } => C64::ONE,
            Family::TruncatedExponential { k_mode, .. } => (C64::i() * *k_mode * x).exp(),
            Family::LocallyPeriodicFourier { k_mode, modes, .. } => modes
                .iter()
                .map(|(j, c)| c * (C64::i() * (*j as f64) * *k_mode * x).exp())
                .sum(),
            Family::GaussianDerivative { width, .. } => {
                let l = *width;
                let u = x / l;
                C64::new(-2.0 * x * (-u * u).exp() / (PI.sqrt() * l * l * l), 0.0)
            }
            Family::GaussianPlain { width, .. } => {
                let l = *width;
                let u = x / l;
                C64::i() * (-u * u).exp() / (PI.sqrt() * l * l)
            }
            Family::GeometricSeriesPeriodic { k_mode, a, b, .. } => {
                let ep = (C64::i() * 2.0 * *k_mode * x).exp();
                let em = (-C64::i() * *k_mode * x).exp();
                a * ep / (C64::ONE - a * ep) + b * em / (C64::ONE - b * em * em)
            }
            Family::InfiniteRangeAnalytic { k_mode, width, .. } => {
                let (kk, l) = (*k_mode, *width);
                let l2 = l * l;
                let poly = C64::new(2.0 * x * x * x - 3.0 * l2 * x, kk * l2 * (2.0 * x * x - l2));
                let envelope = (-x * x / l2).exp();
                let phase = (-C64::i() * 2.0 * kk * x).exp();
                phase * poly * envelope / (PI.sqrt() * kk * kk * l2 * l2 * l2 * l)
            }
            Family::SampledGrid { x0, dx, values } => {
                let t = (x - x0) / dx;
                if t < 0.0 || t > (values.len() - 1) as f64 {
                    return C64::ZERO;
                }
                let i = (t.floor() as usize).min(values.len() - 2);
                let frac = t - i as f64;
                values[i] * (1.0 - frac) + values[i + 1] * frac
            }
        }
    }

    /// Base coupling constant stored in the parameters.
    fn base_coupling(&self) -> C64 {
        match self {
            Family::DeltaPair { .. } => C64::ONE,
            Family::RectangularBarrier { z }
            | Family::TruncatedExponential { z, .. }
            | Family::LocallyPeriodicFourier { z, .. }
            | Family::GaussianDerivative { z, .. }
            | Family::GaussianPlain { z, .. }
            | Family::GeometricSeriesPeriodic { z, .. }
            | Family::InfiniteRangeAnalytic { z, .. } => *z,
            Family::SampledGrid { .. } => C64::ONE,
        }
    }

    fn scale_base_coupling(&mut self, factor: f64) {
        match self {
            Family::DeltaPair { z1, z2, .. } => {
                *z1 *= factor;
                *z2 *= factor;
            }
            Family::RectangularBarrier { z }
            | Family::TruncatedExponential { z, .. }
            | Family::LocallyPeriodicFourier { z, .. }
            | Family::GaussianDerivative { z, .. }
            | Family::GaussianPlain { z, .. }
            | Family::GeometricSeriesPeriodic { z, .. }
            | Family::InfiniteRangeAnalytic { z, .. } => *z *= factor,
            Family::SampledGrid { values, .. } => {
                for v in values.iter_mut() {
                    *v *= factor;
                }
            }
        }
    }
}

/// Spatial support of the potential.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SupportRepr", into = "SupportRepr")]
pub enum Support {
    Interval(f64, f64),
    Infinite,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum SupportRepr {
    Interval([f64; 2]),
    Tag(String),
}

impl From<Support> for SupportRepr {
    fn from(s: Support) -> Self {
        match s {
            Support::Interval(a, b) => SupportRepr::Interval([a, b]),
            Support::Infinite => SupportRepr::Tag("infinite".into()),
        }
    }
}

impl TryFrom<SupportRepr> for Support {
    type Error = String;
    fn try_from(r: SupportRepr) -> std::result::Result<Self, String> {
        match r {
            SupportRepr::Interval([a, b]) if a < b => Ok(Support::Interval(a, b)),
            SupportRepr::Interval([a, b]) => Err(format!("support: empty interval [{a}, {b}]")),
            SupportRepr::Tag(t) if t == "infinite" => Ok(Support::Infinite),
            SupportRepr::Tag(t) => Err(format!("support: expected \"infinite\", got \"{t}\"")),
        }
    }
}

impl Support {
    pub fn contains(&self, x: f64) -> bool {
        match self {
            Support::Interval(a, b) => x >= *a && x <= *b,
            Support::Infinite => true,
        }
    }

    pub fn length(&self) -> Option<f64> {
        match self {
            Support::Interval(a, b) => Some(b - a),
            Support::Infinite => None,
        }
    }
}

/// Coupling law: either a plain constant (the `z` of the parameters), or
/// `z = c·k²` with a real dimensionless `c`.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "CouplingRepr", into = "CouplingRepr")]
pub enum Coupling {
    #[default]
    Constant,
    KSquaredScaled(f64),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CouplingRepr {
    Tag(String),
    KSquared { k_squared: f64 },
}

impl From<Coupling> for CouplingRepr {
    fn from(c: Coupling) -> Self {
        match c {
            Coupling::Constant => CouplingRepr::Tag("constant".into()),
            Coupling::KSquaredScaled(v) => CouplingRepr::KSquared { k_squared: v },
        }
    }
}

impl TryFrom<CouplingRepr> for Coupling {
    type Error = String;
    fn try_from(r: CouplingRepr) -> std::result::Result<Self, String> {
        match r {
            CouplingRepr::Tag(t) if t == "constant" => Ok(Coupling::Constant),
            CouplingRepr::Tag(t) => Err(format!("coupling: expected \"constant\", got \"{t}\"")),
            CouplingRepr::KSquared { k_squared } => Ok(Coupling::KSquaredScaled(k_squared)),
        }
    }
}

/// A complete declarative potential description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PotentialSpec {
    #[serde(flatten)]
    pub family: Family,
    pub support: Support,
    #[serde(default)]
    pub coupling: Coupling,
}

impl PotentialSpec {
    pub fn new(family: Family, support: Support) -> Self {
        Self {
            family,
            support,
            coupling: Coupling::Constant,
        }
    }

    pub fn with_coupling(mut self, coupling: Coupling) -> Self {
        self.coupling = coupling;
        self
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: PotentialSpec =
            serde_json::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serialization cannot fail")
    }

    /// Structural checks that do not depend on `k`.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidSpec(msg));
        match (&self.family, &self.support) {
            (Family::DeltaPair { a1, a2, .. }, support) => {
                if let Support::Interval(lo, hi) = support {
                    if !(lo <= a1 && a1 <= hi && lo <= a2 && a2 <= hi) {
                        return fail(format!(
                            "params.a1/a2: delta positions {a1}, {a2} outside support [{lo}, {hi}]"
                        ));
                    }
                }
                if self.coupling != Coupling::Constant {
                    return fail("coupling: delta_pair supports only \"constant\"".into());
                }
            }
            (Family::RectangularBarrier { .. }, Support::Infinite)
            | (Family::TruncatedExponential { .. }, Support::Infinite)
            | (Family::LocallyPeriodicFourier { .. }, Support::Infinite)
            | (Family::GeometricSeriesPeriodic { .. }, Support::Infinite) => {
                return fail(format!(
                    "support: family {} requires a finite interval",
                    self.family.name()
                ));
            }
            (Family::TruncatedExponential { k_mode, .. }, _) => {
                if *k_mode == 0.0 {
                    return fail("params.K: mode wavenumber must be nonzero".into());
                }
            }
            (Family::LocallyPeriodicFourier { k_mode, modes, .. }, Support::Interval(a, b)) => {
                if *k_mode <= 0.0 {
                    return fail("params.K: lattice wavenumber must be positive".into());
                }
                if modes.is_empty() {
                    return fail("params.modes: at least one Fourier mode required".into());
                }
                if let Some(period) = fundamental_period(*k_mode, modes.iter().map(|(j, _)| *j)) {
                    let ratio = (b - a) / period;
                    if (ratio - ratio.round()).abs() > 1e-9 * ratio.max(1.0) {
                        return Err(Error::PeriodMismatch {
                            support: b - a,
                            period,
                        });
                    }
                }
            }
            (Family::GeometricSeriesPeriodic { k_mode, a, b, .. }, Support::Interval(lo, hi)) => {
                if *k_mode <= 0.0 {
                    return fail("params.K: lattice wavenumber must be positive".into());
                }
                if a.norm() >= 1.0 || b.norm() >= 1.0 {
                    return fail(
                        "params.a/b: geometric ratios must satisfy |a| < 1, |b| < 1".into(),
                    );
                }
                let period = 2.0 * PI / *k_mode;
                let ratio = (hi - lo) / period;
                if (ratio - ratio.round()).abs() > 1e-9 * ratio.max(1.0) {
                    return Err(Error::PeriodMismatch {
                        support: hi - lo,
                        period,
                    });
                }
            }
            (Family::GaussianDerivative { width, .. }, _)
            | (Family::GaussianPlain { width, .. }, _) => {
                if *width <= 0.0 {
                    return fail("params.L: width must be positive".into());
                }
            }
            (Family::InfiniteRangeAnalytic { k_mode, width, .. }, _) => {
                if *width <= 0.0 || *k_mode <= 0.0 {
                    return fail("params.K/L: must be positive".into());
                }
            }
            (Family::SampledGrid { dx, values, .. }, _) => {
                if *dx <= 0.0 {
                    return fail("params.dx: grid step must be positive".into());
                }
                if values.len() < 2 {
                    return fail("params.values: at least two samples required".into());
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Effective coupling factor `g(k)` with `v(x; k) = g(k)·shape(x)`.
    pub fn coupling_at(&self, k: f64) -> C64 {
        match self.coupling {
            Coupling::Constant => self.family.base_coupling(),
            Coupling::KSquaredScaled(c) => C64::new(c * k * k, 0.0),
        }
    }

    /// Same potential with the coupling multiplied by `factor`; used for
    /// perturbative scaling studies.
    pub fn scale_coupling(&self, factor: f64) -> Self {
        let mut out = self.clone();
        match &mut out.coupling {
            Coupling::Constant => out.family.scale_base_coupling(factor),
            Coupling::KSquaredScaled(c) => *c *= factor,
        }
        out
    }

    /// Pointwise value `v(x; k)`.
    pub fn evaluate(&self, x: f64, k: f64) -> Result<C64> {
        if self.family.is_distributional() {
            return Err(Error::DistributionalPotential);
        }
        if k <= 0.0 {
            return Err(Error::InvalidWavenumber(k));
        }
        if !self.support.contains(x) {
            return Ok(C64::ZERO);
        }
        Ok(self.coupling_at(k) * self.family.shape(x))
    }

    /// Complex refractive index `sqrt(1 - v(x;k)/k²)`, principal branch.
    pub fn refractive_index(&self, x: f64, k: f64) -> Result<C64> {
        let v = self.evaluate(x, k)?;
        Ok((C64::ONE - v / (k * k)).sqrt())
    }

    /// Finite window that carries all of the potential up to the truncation
    /// threshold. For finite supports this is the support itself.
    pub fn window(&self) -> (f64, f64) {
        self.window_with_factor(DEFAULT_TRUNCATION_FACTOR)
    }

    pub fn window_with_factor(&self, factor: f64) -> (f64, f64) {
        match (&self.family, self.support) {
            (_, Support::Interval(a, b)) => (a, b),
            (Family::GaussianDerivative { width, .. }, Support::Infinite)
            | (Family::GaussianPlain { width, .. }, Support::Infinite)
            | (Family::InfiniteRangeAnalytic { width, .. }, Support::Infinite) => {
                (-factor * width, factor * width)
            }
            (Family::SampledGrid { x0, dx, values }, Support::Infinite) => {
                (*x0, x0 + dx * (values.len() - 1) as f64)
            }
            (_, Support::Infinite) => unreachable!("validated families have finite support"),
        }
    }

    /// Positions where the potential jumps; smooth pieces in between.
    pub fn discontinuities(&self) -> Vec<f64> {
        match (&self.family, self.support) {
            (Family::DeltaPair { a1, a2, .. }, _) => {
                let mut v = vec![*a1, *a2];
                v.sort_by(f64::total_cmp);
                v.dedup();
                v
            }
            (Family::RectangularBarrier { .. }, Support::Interval(a, b))
            | (Family::TruncatedExponential { .. }, Support::Interval(a, b))
            | (Family::LocallyPeriodicFourier { .. }, Support::Interval(a, b))
            | (Family::GeometricSeriesPeriodic { .. }, Support::Interval(a, b)) => vec![a, b],
            _ => Vec::new(),
        }
    }

    /// Lattice wavenumber and Fourier modes of the periodic profile `f`, for
    /// the families that have one.
    pub fn periodic_profile(&self) -> Result<PeriodicProfile> {
        match &self.family {
            Family::RectangularBarrier { .. } => {
                let length = self
                    .support
                    .length()
                    .ok_or_else(|| Error::InvalidSpec("barrier needs finite support".into()))?;
                Ok(PeriodicProfile {
                    k_lattice: 2.0 * PI / length,
                    kind: ProfileKind::Modes(vec![(0, C64::ONE)]),
                })
            }
            Family::TruncatedExponential { k_mode, .. } => Ok(PeriodicProfile {
                k_lattice: k_mode.abs(),
                kind: ProfileKind::Modes(vec![(k_mode.signum() as i32, C64::ONE)]),
            }),
            Family::LocallyPeriodicFourier { k_mode, modes, .. } => Ok(PeriodicProfile {
                k_lattice: *k_mode,
                kind: ProfileKind::Modes(modes.clone()),
            }),
            Family::GeometricSeriesPeriodic { k_mode, a, b, .. } => Ok(PeriodicProfile {
                k_lattice: *k_mode,
                kind: ProfileKind::Geometric { a: *a, b: *b },
            }),
            _ => Err(Error::NotPeriodic),
        }
    }
}

/// Fourier description of the periodic profile `f` of a locally periodic
/// potential, indexed on the declared lattice `e^{ijKx}`.
#[derive(Clone, Debug)]
pub struct PeriodicProfile {
    pub k_lattice: f64,
    pub kind: ProfileKind,
}

#[derive(Clone, Debug)]
pub enum ProfileKind {
    Modes(Vec<(i32, C64)>),
    Geometric { a: C64, b: C64 },
}

impl PeriodicProfile {
    /// Fourier coefficient `c_j` of `f` on the declared lattice.
    pub fn coefficient(&self, j: i32) -> C64 {
        match &self.kind {
            ProfileKind::Modes(modes) => modes
                .iter()
                .filter(|(jj, _)| *jj == j)
                .map(|(_, c)| *c)
                .sum(),
            ProfileKind::Geometric { a, b } => {
                if j >= 2 && j % 2 == 0 {
                    a.powu((j / 2) as u32)
                } else if j < 0 && (-j) % 2 == 1 {
                    b.powu(((1 - j) / 2) as u32)
                } else {
                    C64::ZERO
                }
            }
        }
    }

    /// Index gcd of the non-zero modes: the profile's fundamental lattice is
    /// `g·K`. `None` when only the constant mode is present.
    pub fn index_gcd(&self) -> Option<u32> {
        fn gcd(a: u32, b: u32) -> u32 {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        match &self.kind {
            ProfileKind::Modes(modes) => {
                let mut g = 0u32;
                for (j, c) in modes {
                    if *j != 0 && c.norm() > 0.0 {
                        g = gcd(g, j.unsigned_abs());
                    }
                }
                (g > 0).then_some(g)
            }
            ProfileKind::Geometric { a, b } => {
                if b.norm() > 0.0 {
                    Some(1) // odd negative modes are present
                } else if a.norm() > 0.0 {
                    Some(2)
                } else {
                    None
                }
            }
        }
    }
}

fn fundamental_period(k_lattice: f64, indices: impl Iterator<Item = i32>) -> Option<f64> {
    fn gcd(a: u32, b: u32) -> u32 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    let mut g = 0u32;
    for j in indices {
        if j != 0 {
            g = gcd(g, j.unsigned_abs());
        }
    }
    (g > 0).then(|| 2.0 * PI / (k_lattice * g as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    pub fn barrier(z: C64, l: f64) -> PotentialSpec {
        PotentialSpec::new(Family::RectangularBarrier { z }, Support::Interval(0.0, l))
    }

    #[test]
    fn barrier_evaluates_inside_and_outside() {
        let spec = barrier(C64::new(1.0, 0.5), 2.0);
        let inside = spec.evaluate(1.0, 1.0).unwrap();
        assert_eq!(inside, C64::new(1.0, 0.5));
        assert_eq!(spec.evaluate(2.5, 1.0).unwrap(), C64::ZERO);
        assert_eq!(spec.evaluate(-0.1, 1.0).unwrap(), C64::ZERO);
    }

    #[test]
    fn delta_pair_evaluation_is_an_error() {
        let spec = PotentialSpec::new(
            Family::DeltaPair {
                z1: C64::ONE,
                z2: C64::ONE,
                a1: 0.0,
                a2: 1.0,
            },
            Support::Interval(0.0, 1.0),
        );
        assert!(matches!(
            spec.evaluate(0.5, 1.0),
            Err(Error::DistributionalPotential)
        ));
    }

    #[test]
    fn nonpositive_wavenumber_is_an_error() {
        let spec = barrier(C64::ONE, 1.0);
        assert!(matches!(
            spec.evaluate(0.5, 0.0),
            Err(Error::InvalidWavenumber(_))
        ));
        assert!(matches!(
            spec.evaluate(0.5, -2.0),
            Err(Error::InvalidWavenumber(_))
        ));
    }

    #[test]
    fn k_squared_coupling_scales_like_k_squared() {
        // truncated exponential with z = c k^2 at x = 0: v = c k^2
        let spec = PotentialSpec::new(
            Family::TruncatedExponential {
                z: C64::ONE,
                k_mode: 3.0,
            },
            Support::Interval(0.0, 1.0),
        )
        .with_coupling(Coupling::KSquaredScaled(1e-3));
        let v = spec.evaluate(0.0, 2.0).unwrap();
        assert_relative_eq!(v.re, 4e-3, max_relative = 1e-14);
        assert_eq!(v.im, 0.0);
        // v/k^2 is independent of k
        let r1 = spec.evaluate(0.3, 1.0).unwrap() / 1.0;
        let r2 = spec.evaluate(0.3, 2.5).unwrap() / (2.5 * 2.5);
        assert!((r1 - r2).norm() < 1e-15);
    }

    #[test]
    fn refractive_index_limits() {
        let spec = barrier(C64::ZERO, 1.0);
        assert_eq!(spec.refractive_index(0.5, 1.0).unwrap(), C64::ONE);
        // v = k^2 is a turning point: n = 0
        let spec = barrier(C64::new(4.0, 0.0), 1.0);
        let n = spec.refractive_index(0.5, 2.0).unwrap();
        assert!(n.norm() < 1e-12);
    }

    #[test]
    fn multimode_profile_stays_near_unit_index() {
        // with z = 1e-3 k² the optical medium deviates from vacuum by less
        // than 0.0012 across the whole support and spectrum of interest
        let spec = crate::fixtures::multimode();
        let length = 4.0 * PI;
        let mut worst = 0.0f64;
        for ik in 0..=40 {
            let k = 0.05 + 3.45 * ik as f64 / 40.0;
            for ix in 0..=400 {
                let x = length * ix as f64 / 400.0;
                let n = spec.refractive_index(x, k).unwrap();
                worst = worst.max((n - C64::ONE).norm());
            }
        }
        assert!(worst < 0.0012, "max |n - 1| = {worst:.5}");
    }

    #[test]
    fn json_round_trip_matches_schema() {
        let text = r#"{"family":"rectangular_barrier","params":{"z":[1.0,0.5]},"support":[0.0,2.0],"coupling":"constant"}"#;
        let spec = PotentialSpec::from_json(text).unwrap();
        assert_eq!(
            spec.family,
            Family::RectangularBarrier {
                z: C64::new(1.0, 0.5)
            }
        );
        assert_eq!(spec.support, Support::Interval(0.0, 2.0));
        let back = serde_json::to_string(&spec).unwrap();
        let reparsed = PotentialSpec::from_json(&back).unwrap();
        assert_eq!(spec, reparsed);

        let ks = r#"{"family":"locally_periodic_fourier","params":{"K":1.0,"modes":[[-2,[1.0,0.0]],[4,[0.5,0.0]]]},"support":[0.0,12.566370614359172],"coupling":{"k_squared":0.001}}"#;
        let spec = PotentialSpec::from_json(ks).unwrap();
        assert_eq!(spec.coupling, Coupling::KSquaredScaled(0.001));
        let v = spec.evaluate(0.0, 2.0).unwrap();
        // f(0) = 1 + 0.5, g = 1e-3 * 4
        assert_relative_eq!(v.re, 4e-3 * 1.5, max_relative = 1e-12);
    }

    #[test]
    fn period_mismatch_is_rejected() {
        let bad = r#"{"family":"locally_periodic_fourier","params":{"K":1.0,"modes":[[1,[1.0,0.0]]]},"support":[0.0,5.0],"coupling":"constant"}"#;
        assert!(matches!(
            PotentialSpec::from_json(bad),
            Err(Error::PeriodMismatch { .. })
        ));
    }

    #[test]
    fn geometric_profile_coefficients_follow_the_ladder() {
        let spec = PotentialSpec::new(
            Family::GeometricSeriesPeriodic {
                z: C64::ONE,
                k_mode: 2.0 * PI,
                a: C64::new(0.5, 0.0),
                b: C64::new(0.25, 0.0),
            },
            Support::Interval(0.0, 1.0),
        );
        spec.validate().unwrap();
        let profile = spec.periodic_profile().unwrap();
        assert_eq!(profile.coefficient(2), C64::new(0.5, 0.0));
        assert_eq!(profile.coefficient(4), C64::new(0.25, 0.0));
        assert_eq!(profile.coefficient(-1), C64::new(0.25, 0.0));
        assert_eq!(profile.coefficient(-3), C64::new(0.0625, 0.0));
        assert_eq!(profile.coefficient(1), C64::ZERO);
        assert_eq!(profile.coefficient(-2), C64::ZERO);
        // evaluate() sums the closed form; cross-check against the ladder.
        let x = 0.37;
        let direct = spec.evaluate(x, 1.0).unwrap();
        let mut ladder = C64::ZERO;
        for j in 1..60 {
            ladder += profile.coefficient(2 * j) * (C64::i() * (2 * j) as f64 * 2.0 * PI * x).exp();
            ladder += profile.coefficient(-(2 * j - 1))
                * (-C64::i() * (2 * j - 1) as f64 * 2.0 * PI * x).exp();
        }
        assert!((direct - ladder).norm() < 1e-12);
    }

    #[test]
    fn sampled_grid_interpolates_linearly() {
        let spec = PotentialSpec::new(
            Family::SampledGrid {
                x0: 0.0,
                dx: 1.0,
                values: vec![C64::ZERO, C64::new(2.0, 0.0), C64::ZERO],
            },
            Support::Interval(0.0, 2.0),
        );
        assert_relative_eq!(spec.evaluate(0.5, 1.0).unwrap().re, 1.0);
        assert_relative_eq!(spec.evaluate(1.0, 1.0).unwrap().re, 2.0);
        assert_eq!(spec.evaluate(3.0, 1.0).unwrap(), C64::ZERO);
    }
}
