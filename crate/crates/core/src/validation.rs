//! The acceptance checks behind `cargo test --test acceptance` and the CLI
//! `validate` subcommand.
//!
//! Each check pins its tolerances in code and reports a single pass/fail
//! outcome with measured numbers in the details string, so regressions show
//! up as numbers rather than missing coverage.

use crate::born;
use crate::fixtures;
use crate::inverse::{self, AnalyticData, DataKind, FirstBornData, ReconstructionOptions};
use crate::invisibility::{self, ClassifierOptions, Direction, Grade, ScanMethod};
use crate::mat2::Mat2;
use crate::transfer::{self, EngineOptions};
use crate::two_level;
use num_complex::Complex64 as C64;
use serde::Serialize;
use std::f64::consts::PI;
use std::time::Instant;

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub id: &'static str,
    pub name: &'static str,
    pub pass: bool,
    pub details: String,
    pub elapsed_ms: u64,
}

impl CheckOutcome {
    pub fn line(&self) -> String {
        format!(
            "[{}] {:<28} {} ({} ms) {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed_ms,
            self.details
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<CheckOutcome>,
    pub all_pass: bool,
}

pub fn run_all() -> ValidationReport {
    let checks = vec![
        unit_determinant(),
        barrier_closed_form_agreement(),
        composition(),
        double_delta_exactness(),
        closed_born_orders(),
        exponential_second_order(),
        multimode_scan(),
        classifier_modes(),
        inverse_round_trips(),
        spectral_diagnostics(),
        property_suite(),
    ];
    let all_pass = checks.iter().all(|c| c.pass);
    ValidationReport { checks, all_pass }
}

fn outcome(
    id: &'static str,
    name: &'static str,
    start: Instant,
    pass: bool,
    details: String,
) -> CheckOutcome {
    CheckOutcome {
        id,
        name,
        pass,
        details,
        elapsed_ms: start.elapsed().as_millis() as u64,
    }
}

const K_SET: [f64; 4] = [0.5, 1.0, 2.0, 5.0];

/// AC1: `|det M - 1| <= 1e-9` from the exact engine on the fixture set.
pub fn unit_determinant() -> CheckOutcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut worst_case = String::new();
    let mut pass = true;
    for (name, spec) in fixtures::determinant_set() {
        for k in K_SET {
            match transfer::transfer_matrix_ode(&spec, k, 1e-10) {
                Ok(tm) => {
                    if tm.det_residual > worst {
                        worst = tm.det_residual;
                        worst_case = format!("{name} at k = {k}");
                    }
                }
                Err(e) => {
                    pass = false;
                    worst_case = format!("{name} at k = {k}: {e}");
                }
            }
        }
    }
    pass &= worst <= 1e-9;
    outcome(
        "AC1",
        "unit determinant",
        start,
        pass,
        format!("worst |det-1| = {worst:.2e} ({worst_case}), tolerance 1e-9"),
    )
}

/// AC2: exact engine vs barrier closed form, entrywise 1e-8, under 5 s.
pub fn barrier_closed_form_agreement() -> CheckOutcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for z in [C64::new(1.0, 0.0), C64::i(), C64::new(1.0, 1.0)] {
        for l in [1.0, 2.0] {
            let spec = fixtures::barrier(z, l);
            for k in K_SET {
                let ode = transfer::transfer_matrix_ode(&spec, k, 1e-10);
                let closed = transfer::analytic_transfer(&spec, k);
                match (ode, closed) {
                    (Ok(a), Ok(b)) => {
                        let d = a.m.max_abs_diff(&b.m);
                        worst = worst.max(d);
                        if d > 1e-8 {
                            failures.push(format!("z={z}, L={l}, k={k}: {d:.2e}"));
                        }
                    }
                    (a, b) => failures.push(format!(
                        "z={z}, L={l}, k={k}: {:?} / {:?}",
                        a.err(),
                        b.err()
                    )),
                }
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let pass = failures.is_empty() && elapsed < 5.0;
    outcome(
        "AC2",
        "exact engine vs closed barrier",
        start,
        pass,
        format!(
            "worst entrywise diff = {worst:.2e} (tolerance 1e-8), {elapsed:.2} s{}",
            if failures.is_empty() {
                String::new()
            } else {
                format!("; failures: {}", failures.join("; "))
            }
        ),
    )
}

/// AC3: three-piece split of the barrier reassembles the whole matrix to
/// 1e-10, and composition is associative.
pub fn composition() -> CheckOutcome {
    let start = Instant::now();
    let z = C64::new(1.0, 0.5);
    let l = 1.5;
    let k = 1.3;
    let whole = transfer::analytic_transfer(&fixtures::barrier(z, l), k).unwrap();
    let piece = |x0: f64, x1: f64| {
        transfer::analytic_transfer(&fixtures::barrier_on(z, x0, x1), k).unwrap()
    };
    let (p1, p2, p3) = (
        piece(0.0, l / 3.0),
        piece(l / 3.0, 2.0 * l / 3.0),
        piece(2.0 * l / 3.0, l),
    );
    let left_first = transfer::compose(&p3, &transfer::compose(&p2, &p1).unwrap()).unwrap();
    let right_first = transfer::compose(&transfer::compose(&p3, &p2).unwrap(), &p1).unwrap();
    let d_split = left_first.m.max_abs_diff(&whole.m);
    let d_assoc = left_first.m.max_abs_diff(&right_first.m);
    let pass = d_split <= 1e-10 && d_assoc <= 1e-10;
    outcome(
        "AC3",
        "composition of adjacent pieces",
        start,
        pass,
        format!("split defect {d_split:.2e}, associativity defect {d_assoc:.2e}, tolerance 1e-10"),
    )
}

/// AC4: the Born sum at N = 2 is the exact double-delta matrix, and the
/// second-order cross term carries a 1/k² prefactor (a 1/k⁴ power would be
/// off by 4x already at k = 2).
pub fn double_delta_exactness() -> CheckOutcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut prefactor_defect = 0.0f64;
    let mut pass = true;
    for (z1, z2, a1, a2) in [
        (C64::new(1.0, 0.0), C64::new(1.0, 0.0), 0.0, 1.0),
        (C64::i(), C64::new(2.0, 0.0), -1.0, 1.0),
    ] {
        let spec = fixtures::delta_pair(z1, z2, a1, a2);
        for k in K_SET {
            let sum = match born::born_sum(&spec, k, 2) {
                Ok(s) => s,
                Err(_) => {
                    pass = false;
                    continue;
                }
            };
            let exact = transfer::transfer_matrix_ode(&spec, k, 1e-12).unwrap();
            worst = worst.max(sum.transfer.m.max_abs_diff(&exact.m));

            // explicit transcription of the ordered cross term with the
            // quadratic power of 1/k
            let (lo, hi) = if a1 <= a2 { (a1, a2) } else { (a2, a1) };
            let e = |a: f64| (-C64::i() * 2.0 * k * a).exp();
            let c = z1 * z2 / (4.0 * k * k);
            let expected_m2 = Mat2::new(
                -c * (C64::ONE - (C64::i() * 2.0 * k * (lo - hi)).exp()),
                -c * (e(lo) - e(hi)),
                -c * ((C64::ONE / e(lo)) - (C64::ONE / e(hi))),
                -c * (C64::ONE - (C64::i() * 2.0 * k * (hi - lo)).exp()),
            );
            let m2 = born::second_order_closed(&spec, k).unwrap();
            prefactor_defect = prefactor_defect.max(m2.max_abs_diff(&expected_m2));
        }
    }
    pass &= worst <= 1e-8 && prefactor_defect <= 1e-12;
    outcome(
        "AC4",
        "double delta exact at order 2",
        start,
        pass,
        format!(
            "N=2 sum vs exact: {worst:.2e} (tol 1e-8); quadratic 1/k² cross-term \
             transcription defect {prefactor_defect:.2e} across k in {K_SET:?}"
        ),
    )
}

/// AC5: ODE recursion vs closed-form assemblies of the first two orders.
pub fn closed_born_orders() -> CheckOutcome {
    let start = Instant::now();
    let cases = [
        ("barrier", fixtures::barrier(C64::new(0.8, 0.3), 1.0)),
        (
            "exponential",
            fixtures::exponential(C64::new(0.5, 0.0), 2.0 * PI, 1.0),
        ),
        ("gaussian", fixtures::gaussian_derivative()),
    ];
    let mut worst = 0.0f64;
    let mut pass = true;
    for (name, spec) in &cases {
        for &k in &[0.8, 1.7] {
            let opts = EngineOptions::with_tol(1e-12);
            let terms = match born::born_terms_with(spec, k, 2, &opts) {
                Ok(t) => t,
                Err(e) => {
                    pass = false;
                    worst = f64::INFINITY;
                    let _ = e;
                    continue;
                }
            };
            let m1 = born::first_order_closed(spec, k).unwrap();
            let m2 = born::second_order_closed(spec, k).unwrap();
            let d = terms[0]
                .matrix
                .max_abs_diff(&m1)
                .max(terms[1].matrix.max_abs_diff(&m2));
            worst = worst.max(d);
            let _ = name;
        }
    }
    pass &= worst <= 1e-9;
    outcome(
        "AC5",
        "closed Born orders vs recursion",
        start,
        pass,
        format!("worst M1/M2 difference = {worst:.2e}, tolerance 1e-9"),
    )
}

/// AC6: second-order amplitudes of the exponential potential at the
/// unidirectional point, and the cubic suppression of the left reflection.
pub fn exponential_second_order() -> CheckOutcome {
    let start = Instant::now();
    let spec = fixtures::exponential_invisible();
    let k = 2.0 * PI;
    let z = 0.01;
    let amps = born::amplitudes_second_order(&spec, k).unwrap();
    let rr_expect = C64::new(0.0, -z / (4.0 * PI) + z * z / (32.0 * PI.powi(3)));
    let t_expect = C64::ONE + C64::new(0.0, z * z / (128.0 * PI.powi(3)));
    let rr_rel = (amps.r_right - rr_expect).norm() / rr_expect.norm();
    let t_rel = (amps.t - t_expect).norm() / (t_expect - C64::ONE).norm();

    let report = invisibility::verify_at(
        &spec,
        k,
        Direction::Left,
        Grade::Reflectionless,
        ScanMethod::Exact,
        &invisibility::VerificationThresholds {
            suppressed_min: 2.9,
            ..Default::default()
        },
        false,
    )
    .unwrap();
    let pass = rr_rel <= 1e-4 && t_rel <= 1e-4 && report.exponents.r_left >= 2.9;
    outcome(
        "AC6",
        "exponential second order",
        start,
        pass,
        format!(
            "Rr rel err {rr_rel:.2e}, (T-1) rel err {t_rel:.2e} (tol 1e-4); \
             |Rl| coupling exponent {:.2} (needs >= 2.9)",
            report.exponents.r_left
        ),
    )
}

/// AC7: exact scan of the multimode profile: suppression ratios at k = 2K
/// (left) and k = K, 3K (right) at or below 1e-2, with the opposite side not
/// dipping below half its neighbourhood median; 1200 grid points in under
/// 60 s.
pub fn multimode_scan() -> CheckOutcome {
    let start = Instant::now();
    let spec = fixtures::multimode();
    let ks = invisibility::k_grid(0.05, 3.5, 1200);
    let scan = invisibility::scan(&spec, &ks, ScanMethod::Exact);

    let amps_at = |k: f64| {
        let tm = transfer::transfer_matrix_ode(&spec, k, 1e-10).unwrap();
        transfer::amplitudes_from_transfer(&tm).unwrap()
    };
    let median_near = |k0: f64, pick: &dyn Fn(&invisibility::ScanRow) -> f64| {
        let mut vals: Vec<f64> = scan
            .rows
            .iter()
            .filter(|r| (r.k - k0).abs() <= 0.05 && r.flags.is_empty())
            .map(pick)
            .collect();
        vals.sort_by(f64::total_cmp);
        vals[vals.len() / 2]
    };

    let mut details = Vec::new();
    let mut pass = start.elapsed().as_secs_f64() < 60.0;
    // (k, suppressed is left?)
    for (k0, left) in [(2.0, true), (1.0, false), (3.0, false)] {
        let a = amps_at(k0);
        let (suppressed, opposite) = if left {
            (a.r_left.norm(), a.r_right.norm())
        } else {
            (a.r_right.norm(), a.r_left.norm())
        };
        let ratio = suppressed / opposite;
        let med = if left {
            median_near(k0, &|r| r.abs_r_right)
        } else {
            median_near(k0, &|r| r.abs_r_left)
        };
        let vitality = opposite / med;
        pass &= ratio <= 1e-2 && vitality >= 0.5;
        details.push(format!(
            "k={k0}K: suppression {ratio:.1e}, opposite/median {vitality:.2}"
        ));
    }
    outcome(
        "AC7",
        "multimode scan",
        start,
        pass,
        format!(
            "{} ({} rows, {:.1} s; thresholds 1e-2 and 0.5)",
            details.join("; "),
            scan.rows.len(),
            start.elapsed().as_secs_f64()
        ),
    )
}

/// AC8: the classifier emits exactly the three multimode modes, the full
/// geometric ladder, and nothing for real-valued fixtures.
pub fn classifier_modes() -> CheckOutcome {
    let start = Instant::now();
    let mut pass = true;
    let mut details = Vec::new();

    let multimode =
        invisibility::classify(&fixtures::multimode(), &ClassifierOptions::default()).unwrap();
    let multimode_ok = multimode.len() == 3
        && multimode.iter().any(|p| {
            (p.k - 2.0).abs() < 1e-12
                && p.direction == Direction::Left
                && p.grade == Grade::Invisible
        })
        && multimode
            .iter()
            .any(|p| (p.k - 1.0).abs() < 1e-12 && p.direction == Direction::Right)
        && multimode
            .iter()
            .any(|p| (p.k - 3.0).abs() < 1e-12 && p.direction == Direction::Right);
    pass &= multimode_ok;
    details.push(format!(
        "multimode profile: {} predictions{}",
        multimode.len(),
        if multimode_ok { "" } else { " (wrong set)" }
    ));

    let geo = invisibility::classify(
        &fixtures::geometric(),
        &ClassifierOptions {
            j_max: 11,
            ..Default::default()
        },
    )
    .unwrap();
    let k_unit = 2.0 * PI;
    let mut ladder_ok = true;
    for n in 1..=5 {
        ladder_ok &= geo.iter().any(|p| {
            (p.k - n as f64 * k_unit).abs() < 1e-9
                && p.direction == Direction::Left
                && p.grade == Grade::Invisible
        });
        ladder_ok &= geo.iter().any(|p| {
            (p.k - (n as f64 + 0.5) * k_unit).abs() < 1e-9 && p.direction == Direction::Right
        });
    }
    // parity of every emission
    for p in &geo {
        let r = p.k / k_unit;
        match p.direction {
            Direction::Left => ladder_ok &= (r - r.round()).abs() < 1e-9,
            Direction::Right => ladder_ok &= (r - r.floor() - 0.5).abs() < 1e-9,
        }
    }
    pass &= ladder_ok;
    details.push(format!(
        "geometric ladder n<=5 {}",
        if ladder_ok { "complete" } else { "incomplete" }
    ));

    let real_empty =
        invisibility::classify(&fixtures::cosine_real(), &ClassifierOptions::default())
            .unwrap()
            .is_empty()
            && invisibility::classify(&fixtures::barrier_real(), &ClassifierOptions::default())
                .unwrap()
                .is_empty();
    pass &= real_empty;
    details.push(format!(
        "real fixtures: {}",
        if real_empty {
            "no predictions"
        } else {
            "spurious predictions"
        }
    ));

    outcome(
        "AC8",
        "invisibility classifier",
        start,
        pass,
        details.join("; "),
    )
}

/// AC9: inverse-scattering round trips.
pub fn inverse_round_trips() -> CheckOutcome {
    let start = Instant::now();
    let mut pass = true;
    let mut details = Vec::new();

    // (a) barrier from off-diagonal data, +-0.02L around the jumps excluded
    let z = C64::ONE;
    let data = FirstBornData::analytic(
        DataKind::M12,
        AnalyticData::BarrierOffdiag {
            z,
            length: 1.0,
            start: 0.0,
        },
    );
    let rec =
        inverse::potential_from_offdiagonal(&data, &ReconstructionOptions::over(-0.5, 1.5, 201));
    match rec {
        Ok(rec) => {
            let mut sup = 0.0f64;
            for (x, v) in rec.xs.iter().zip(&rec.values) {
                if x.abs() < 0.02 || (x - 1.0).abs() < 0.02 {
                    continue;
                }
                let expect = if *x > 0.0 && *x < 1.0 { z } else { C64::ZERO };
                sup = sup.max((v - expect).norm());
            }
            pass &= sup <= 1e-3;
            details.push(format!("barrier sup {sup:.1e} (tol 1e-3)"));
        }
        Err(e) => {
            pass = false;
            details.push(format!("barrier: {e}"));
        }
    }

    // (b) the two Gaussian pairs, pointwise 1e-6. The inversion of the
    // z/(Lk) dataset carries twice the printed reference amplitude; the
    // doubled profile is the one whose forward entry reproduces the data.
    let opts = ReconstructionOptions::over(-4.0, 4.0, 201);
    let bump = FirstBornData::analytic(DataKind::M12, AnalyticData::GaussianBump { z, width: 1.0 });
    let rec = inverse::potential_from_offdiagonal(&bump, &opts).unwrap();
    let reference = fixtures::gaussian_derivative();
    let mut worst = 0.0f64;
    for (x, v) in rec.xs.iter().zip(&rec.values) {
        worst = worst.max((v - reference.evaluate(*x, 1.0).unwrap()).norm());
    }
    pass &= worst <= 1e-6;
    details.push(format!("odd-gaussian pair {worst:.1e} (tol 1e-6)"));

    let over_k =
        FirstBornData::analytic(DataKind::M12, AnalyticData::GaussianOverK { z, width: 1.0 });
    let rec = inverse::potential_from_offdiagonal(&over_k, &opts).unwrap();
    let reference = fixtures::gaussian_plain();
    let mut worst = 0.0f64;
    for (x, v) in rec.xs.iter().zip(&rec.values) {
        worst = worst.max((v - 2.0 * reference.evaluate(*x, 1.0).unwrap()).norm());
    }
    pass &= worst <= 1e-6;
    details.push(format!(
        "even-gaussian pair {worst:.1e} vs twice the printed profile (tol 1e-6)"
    ));

    // (c) two-block shape with the correct signs
    let (l, j) = (1.0, 0.5);
    let blocks = FirstBornData::analytic(
        DataKind::M12,
        AnalyticData::TwoBlockOffdiag {
            z,
            length: l,
            gap: j,
        },
    );
    let rec =
        inverse::potential_from_offdiagonal(&blocks, &ReconstructionOptions::over(-0.5, 3.0, 351))
            .unwrap();
    let mut shape_ok = true;
    for (x, v) in rec.xs.iter().zip(&rec.values) {
        let expect = if *x > 0.02 && *x < l - 0.02 {
            -z
        } else if *x > l + j + 0.02 && *x < 2.0 * l + j - 0.02 {
            z
        } else if (*x < -0.02) || (*x > l + 0.02 && *x < l + j - 0.02) || *x > 2.0 * l + j + 0.02 {
            C64::ZERO
        } else {
            continue; // jump neighbourhood
        };
        shape_ok &= (v - expect).norm() < 1e-3;
    }
    pass &= shape_ok;
    details.push(format!(
        "two-block shape {}",
        if shape_ok { "recovered" } else { "wrong" }
    ));

    // (d) the infinite-range profile from its left reflection
    let (kk, width) = (2.0, 1.0);
    let eg = FirstBornData::analytic(
        DataKind::RLeft,
        AnalyticData::DetunedGaussianLeft {
            z,
            k_mode: kk,
            width,
        },
    );
    let rec =
        inverse::potential_from_left_reflection(&eg, &ReconstructionOptions::over(-8.0, 8.0, 801))
            .unwrap();
    let alpha = rec.alpha.unwrap().norm();
    pass &= alpha <= 1e-8;
    let ks: Vec<f64> = (0..44).map(|i| 0.15 + 0.1 * i as f64).collect();
    let fwd = inverse::forward_check_left(&rec, &|k| eg_value(z, kk, width, k), &ks).unwrap();
    let peak = ks
        .iter()
        .map(|&k| eg_value(z, kk, width, k).norm())
        .fold(0.0, f64::max);
    pass &= fwd <= 1e-6 * peak.max(1.0);
    details.push(format!(
        "infinite-range: |alpha| {alpha:.1e} (tol 1e-8), forward defect {fwd:.1e}"
    ));

    outcome(
        "AC9",
        "inverse-scattering round trips",
        start,
        pass,
        details.join("; "),
    )
}

fn eg_value(z: C64, kk: f64, width: f64, k: f64) -> C64 {
    let d = k / kk - 1.0;
    z * d * d * (-(width * (k - kk)).powi(2)).exp()
}

/// AC10: coalescence at the turning point and pseudo-Hermiticity residuals.
pub fn spectral_diagnostics() -> CheckOutcome {
    let start = Instant::now();
    let mut pass = true;
    let mut details = Vec::new();

    let k = 2.0;
    let spec = fixtures::barrier(C64::new(k * k, 0.0), 1.0);
    let d = two_level::spectral_diagnostic(&spec, k, k * 0.5).unwrap();
    let coalesced = d.exceptional && d.e_plus.norm() < 1e-12 && d.e_minus.norm() < 1e-12;
    pass &= coalesced;
    details.push(format!(
        "turning point: |E+| = {:.1e}, exceptional = {}",
        d.e_plus.norm(),
        d.exceptional
    ));

    let mut max_real = 0.0f64;
    for spec in [fixtures::barrier_real(), fixtures::cosine_real()] {
        for tau in [0.2, 0.5, 0.9] {
            let d = two_level::spectral_diagnostic(&spec, 1.0, tau).unwrap();
            max_real = max_real.max(d.pseudo_hermitian_residual);
        }
    }
    pass &= max_real == 0.0;
    details.push(format!(
        "real fixtures residual = {max_real:.1e} (must be 0)"
    ));

    let mut min_complex = f64::INFINITY;
    for spec in [fixtures::barrier_complex(), fixtures::multimode()] {
        let d = two_level::spectral_diagnostic(&spec, 1.0, 0.5).unwrap();
        min_complex = min_complex.min(d.pseudo_hermitian_residual);
    }
    pass &= min_complex > 0.0;
    details.push(format!(
        "complex fixtures residual >= {min_complex:.1e} (must be > 0)"
    ));

    outcome(
        "AC10",
        "spectral diagnostics",
        start,
        pass,
        details.join("; "),
    )
}

/// AC11: oracle-based property suite: Born order scaling, unitarity of real
/// potentials, and the k -> -k entry symmetry of the closed forms.
pub fn property_suite() -> CheckOutcome {
    let start = Instant::now();
    let mut pass = true;
    let mut details = Vec::new();

    // Born terms scale as z^l through order 4
    let spec = fixtures::barrier(C64::new(0.6, 0.2), 1.0);
    let half = spec.scale_coupling(0.5);
    let opts = EngineOptions::with_tol(1e-13);
    let full_terms = born::born_terms_with(&spec, 1.1, 4, &opts).unwrap();
    let half_terms = born::born_terms_with(&half, 1.1, 4, &opts).unwrap();
    let mut scaling = 0.0f64;
    for (f, h) in full_terms.iter().zip(&half_terms) {
        let expect = f.matrix.scale(C64::new(0.5f64.powi(f.order as i32), 0.0));
        let rel = expect.max_abs_diff(&h.matrix) / f.matrix.norm_max().max(1e-30);
        scaling = scaling.max(rel);
    }
    pass &= scaling <= 1e-9;
    details.push(format!("order scaling defect {scaling:.1e} (tol 1e-9)"));

    // unitarity of real potentials from the exact engine
    let mut unitarity = 0.0f64;
    for spec in [fixtures::barrier_real(), fixtures::cosine_real()] {
        for k in [0.7, 1.0, 2.0] {
            let tm = transfer::transfer_matrix_ode(&spec, k, 1e-11).unwrap();
            let a = transfer::amplitudes_from_transfer(&tm).unwrap();
            let dl = (a.r_left.norm_sqr() + a.t.norm_sqr() - 1.0).abs();
            let dr = (a.r_right.norm_sqr() + a.t.norm_sqr() - 1.0).abs();
            let dm = (a.r_left.norm() - a.r_right.norm()).abs();
            unitarity = unitarity.max(dl).max(dr).max(dm);
        }
    }
    pass &= unitarity <= 1e-8;
    details.push(format!("unitarity defect {unitarity:.1e} (tol 1e-8)"));

    // M11(k) = M22(-k), M12(k) = M21(-k) on the closed-form families
    let mut symmetry = 0.0f64;
    for spec in [
        fixtures::barrier_complex(),
        fixtures::delta_pair(C64::new(1.0, 0.3), C64::new(2.0, 0.0), 0.0, 1.0),
    ] {
        for k in [0.7, 1.3, 2.9] {
            let plus = transfer::analytic_transfer(&spec, k).unwrap().m;
            let minus = transfer::analytic_transfer(&spec, -k).unwrap().m;
            symmetry = symmetry
                .max((plus.m11 - minus.m22).norm())
                .max((plus.m12 - minus.m21).norm());
        }
    }
    pass &= symmetry <= 1e-8;
    details.push(format!(
        "k-negation symmetry defect {symmetry:.1e} (tol 1e-8)"
    ));

    outcome("AC11", "property suite", start, pass, details.join("; "))
}
