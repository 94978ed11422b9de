//! `wavetm` — transfer matrices, Born expansions, invisibility analysis and
//! first-Born inverse scattering for 1D complex potentials, from the command
//! line.
//!
//! Potentials come from declarative JSON spec files (see the fixtures
//! directory); 1D tables go out as CSV, structured reports as JSON, and every
//! output file gets a `<name>.meta.json` sidecar echoing the run
//! configuration. All computations are deterministic: identical invocations
//! produce byte-identical outputs. `WAVETM_THREADS` caps the worker pool.

mod output;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64 as C64;
use output::{csv_num, Sidecar};
use std::path::PathBuf;
use std::process::ExitCode;
use wavetm_core::inverse::{self, AnalyticData, DataKind, FirstBornData, ReconstructionOptions};
use wavetm_core::invisibility::{self, ClassifierOptions, ScanMethod, VerificationThresholds};
use wavetm_core::transfer::{self, EngineOptions};
use wavetm_core::{born, two_level, validation, PotentialSpec};

#[derive(Parser)]
#[command(
    name = "wavetm",
    version,
    about = "1D scattering transfer-matrix toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full transfer matrix and amplitudes at one wavenumber.
    Scatter(ScatterArgs),
    /// Spectral scan of |Rl|, |Rr|, |T-1| over a wavenumber grid.
    Scan(ScanArgs),
    /// Born terms and partial sums.
    Born(BornArgs),
    /// Classify and verify unidirectional reflectionless/invisible modes.
    Invisibility(InvisibilityArgs),
    /// Reconstruct a potential from first-Born data.
    Invert(InvertArgs),
    /// Run the acceptance checks and emit a machine-readable report.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct ScatterArgs {
    /// Potential spec file (JSON).
    #[arg(long)]
    spec: PathBuf,
    /// Wavenumber.
    #[arg(long)]
    k: f64,
    /// Engine: ode | born1 | born2 | bornN (with --order).
    #[arg(long, default_value = "ode")]
    method: String,
    /// Born order for --method bornN.
    #[arg(long)]
    order: Option<u32>,
    /// Local tolerance of the integrator.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Output JSON file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long)]
    k_min: f64,
    #[arg(long)]
    k_max: f64,
    #[arg(long)]
    k_steps: usize,
    /// Engine: ode | born1 | born2.
    #[arg(long, default_value = "ode")]
    method: String,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Append spectral-diagnostic columns (refractive-index deviation,
    /// exceptional-point flag, pseudo-Hermiticity residual).
    #[arg(long)]
    diagnostics: bool,
    /// Also write a plain gnuplot script next to the CSV.
    #[arg(long)]
    gnuplot_script: bool,
    /// Output CSV file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BornArgs {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long)]
    k: f64,
    /// Highest order of the partial sum.
    #[arg(long)]
    order: u32,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct InvisibilityArgs {
    #[arg(long)]
    spec: PathBuf,
    /// Largest mode index examined by the classifier.
    #[arg(long, default_value_t = 12)]
    jmax: u32,
    /// Verification engine: ode | born1 | born2.
    #[arg(long, default_value = "ode")]
    method: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct InvertArgs {
    /// Data route: m12 | m21 | rl | rr.
    #[arg(long)]
    route: String,
    /// Tabulated data CSV with rows `k,re,im` on a symmetric grid.
    #[arg(long, conflicts_with = "analytic")]
    data: Option<PathBuf>,
    /// Registered analytic dataset, e.g.
    /// '{"name":"barrier_offdiag","z":[1,0],"L":1}'.
    #[arg(long)]
    analytic: Option<String>,
    /// Truncation frequency override.
    #[arg(long)]
    k_max: Option<f64>,
    #[arg(long, default_value_t = -2.0)]
    x_min: f64,
    #[arg(long, default_value_t = 2.0)]
    x_max: f64,
    #[arg(long, default_value_t = 201)]
    x_steps: usize,
    /// Output CSV `x,re_v,im_v`.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ValidateArgs {
    /// Optional JSON report path.
    #[arg(long)]
    out: Option<PathBuf>,
}

enum CliError {
    /// Bad input: spec files, flags, data tables. Exit code 2.
    Input(String),
    /// The computation itself failed. Exit code 1.
    Compute(String),
}

impl From<wavetm_core::Error> for CliError {
    fn from(e: wavetm_core::Error) -> Self {
        match e {
            wavetm_core::Error::InvalidSpec(_)
            | wavetm_core::Error::InvalidData(_)
            | wavetm_core::Error::InvalidWavenumber(_) => CliError::Input(e.to_string()),
            other => CliError::Compute(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("WAVETM_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Scatter(args) => scatter(args),
        Command::Scan(args) => scan(args),
        Command::Born(args) => born_cmd(args),
        Command::Invisibility(args) => invisibility_cmd(args),
        Command::Invert(args) => invert(args),
        Command::Validate(args) => validate(args),
    };
    match result {
        Ok(code) => code,
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn load_spec(path: &PathBuf) -> Result<PotentialSpec, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    PotentialSpec::from_json(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn parse_scan_method(name: &str) -> Result<ScanMethod, CliError> {
    match name {
        "ode" | "exact" => Ok(ScanMethod::Exact),
        "born1" => Ok(ScanMethod::Born1),
        "born2" => Ok(ScanMethod::Born2),
        other => Err(CliError::Input(format!(
            "method: expected ode|born1|born2, got {other}"
        ))),
    }
}

fn complex_pair(c: C64) -> [f64; 2] {
    [c.re, c.im]
}

fn scatter(args: ScatterArgs) -> Result<ExitCode, CliError> {
    let spec = load_spec(&args.spec)?;
    let opts = EngineOptions::with_tol(args.tol);
    let (tm, residual_estimate) = match args.method.as_str() {
        "ode" | "exact" => (
            transfer::transfer_matrix_ode_with(&spec, args.k, &opts)?,
            None,
        ),
        "born1" => (born::born_sum_with(&spec, args.k, 1, &opts)?.transfer, None),
        "born2" => (born::born_sum_with(&spec, args.k, 2, &opts)?.transfer, None),
        "bornN" | "bornn" => {
            let order = args
                .order
                .ok_or_else(|| CliError::Input("--order is required with --method bornN".into()))?;
            let sum = born::born_sum_with(&spec, args.k, order, &opts)?;
            (sum.transfer, sum.residual_estimate)
        }
        other => {
            return Err(CliError::Input(format!(
                "method: expected ode|born1|born2|bornN, got {other}"
            )))
        }
    };
    let amps = transfer::amplitudes_from_transfer(&tm)?;
    let record = serde_json::json!({
        "k": args.k,
        "M": [
            complex_pair(tm.m.m11), complex_pair(tm.m.m12),
            complex_pair(tm.m.m21), complex_pair(tm.m.m22),
        ],
        "Rl": complex_pair(amps.r_left),
        "Rr": complex_pair(amps.r_right),
        "T": complex_pair(amps.t),
        "det_residual": tm.det_residual,
        "method": tm.method.to_string(),
        "residual_estimate": residual_estimate,
    });
    output::write_json(&args.out, &record)?;
    Sidecar::new("scatter")
        .spec(&args.spec)
        .param("k", args.k)
        .param("method", &args.method)
        .param("tol", args.tol)
        .write(&args.out)?;
    Ok(ExitCode::SUCCESS)
}

fn scan(args: ScanArgs) -> Result<ExitCode, CliError> {
    let spec = load_spec(&args.spec)?;
    if args.k_steps == 0 || args.k_max <= args.k_min {
        return Err(CliError::Input("empty wavenumber grid".into()));
    }
    let method = parse_scan_method(&args.method)?;
    let ks = invisibility::k_grid(args.k_min, args.k_max, args.k_steps);
    let opts = EngineOptions::with_tol(args.tol);
    let scan = invisibility::scan_with(&spec, &ks, method, &opts);

    let mut csv = String::new();
    csv.push_str("k,abs_Rl,abs_Rr,abs_Tm1,method,flags");
    if args.diagnostics {
        csv.push_str(",n_dev_max,exceptional,ph_residual_max");
    }
    csv.push('\n');
    for row in &scan.rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{}",
            csv_num(row.k),
            csv_num(row.abs_r_left),
            csv_num(row.abs_r_right),
            csv_num(row.abs_t_minus_1),
            scan.method,
            row.flags
        ));
        if args.diagnostics {
            let d = diagnostics_row(&spec, row.k)?;
            csv.push_str(&format!(",{},{},{}", csv_num(d.0), d.1, csv_num(d.2)));
        }
        csv.push('\n');
    }
    output::write_text(&args.out, &csv)?;
    if args.gnuplot_script {
        output::write_gnuplot(&args.out)?;
    }
    Sidecar::new("scan")
        .spec(&args.spec)
        .param("k_min", args.k_min)
        .param("k_max", args.k_max)
        .param("k_steps", args.k_steps)
        .param("method", &args.method)
        .param("tol", args.tol)
        .write(&args.out)?;
    Ok(ExitCode::SUCCESS)
}

/// Max |n - 1|, any turning point, and max pseudo-Hermiticity residual over
/// a coarse sweep of the support.
fn diagnostics_row(spec: &PotentialSpec, k: f64) -> Result<(f64, bool, f64), CliError> {
    let (lo, hi) = spec.window();
    let mut n_dev = 0.0f64;
    let mut exceptional = false;
    let mut residual = 0.0f64;
    for i in 0..=200 {
        let x = lo + (hi - lo) * i as f64 / 200.0;
        let d = two_level::spectral_diagnostic(spec, k, k * x)?;
        n_dev = n_dev.max((d.n_of_tau - C64::ONE).norm());
        exceptional |= d.exceptional;
        residual = residual.max(d.pseudo_hermitian_residual);
    }
    Ok((n_dev, exceptional, residual))
}

fn born_cmd(args: BornArgs) -> Result<ExitCode, CliError> {
    let spec = load_spec(&args.spec)?;
    let opts = EngineOptions::with_tol(args.tol);
    let sum = born::born_sum_with(&spec, args.k, args.order, &opts)?;
    let terms = born::born_terms_with(&spec, args.k, args.order, &opts)?;
    let amps = transfer::amplitudes_from_transfer(&sum.transfer).ok();
    let tm = &sum.transfer;
    let record = serde_json::json!({
        "k": args.k,
        "order": args.order,
        "M": [
            complex_pair(tm.m.m11), complex_pair(tm.m.m12),
            complex_pair(tm.m.m21), complex_pair(tm.m.m22),
        ],
        "residual_estimate": sum.residual_estimate,
        "convergent": sum.convergent,
        "det_residual": tm.det_residual,
        "amplitudes": amps.map(|a| serde_json::json!({
            "Rl": complex_pair(a.r_left),
            "Rr": complex_pair(a.r_right),
            "T": complex_pair(a.t),
        })),
        "terms": terms.iter().map(|t| serde_json::json!({
            "order": t.order,
            "M": [
                complex_pair(t.matrix.m11), complex_pair(t.matrix.m12),
                complex_pair(t.matrix.m21), complex_pair(t.matrix.m22),
            ],
        })).collect::<Vec<_>>(),
    });
    output::write_json(&args.out, &record)?;
    Sidecar::new("born")
        .spec(&args.spec)
        .param("k", args.k)
        .param("order", args.order)
        .param("tol", args.tol)
        .write(&args.out)?;
    Ok(ExitCode::SUCCESS)
}

fn invisibility_cmd(args: InvisibilityArgs) -> Result<ExitCode, CliError> {
    let spec = load_spec(&args.spec)?;
    let method = parse_scan_method(&args.method)?;
    let opts = ClassifierOptions {
        j_max: args.jmax,
        ..Default::default()
    };
    let predictions = invisibility::classify(&spec, &opts)?;
    let thresholds = VerificationThresholds::default();
    let verifications: Vec<_> = predictions
        .iter()
        .map(|p| invisibility::verify_prediction(&spec, p, method, &thresholds, false))
        .collect::<Result<_, _>>()?;
    let record = serde_json::json!({
        "predictions": predictions,
        "verifications": verifications,
    });
    output::write_json(&args.out, &record)?;
    Sidecar::new("invisibility")
        .spec(&args.spec)
        .param("jmax", args.jmax)
        .param("method", &args.method)
        .param("suppressed_exponent_min", thresholds.suppressed_min)
        .write(&args.out)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(serde::Deserialize)]
struct AnalyticSpec {
    name: String,
    #[serde(default = "default_pair")]
    z: [f64; 2],
    #[serde(rename = "L", default)]
    length: f64,
    #[serde(rename = "J", default)]
    gap: f64,
    #[serde(rename = "K", default)]
    k_mode: f64,
    #[serde(default)]
    start: f64,
}

fn default_pair() -> [f64; 2] {
    [1.0, 0.0]
}

fn parse_analytic(text: &str) -> Result<AnalyticData, CliError> {
    let raw: AnalyticSpec =
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("analytic: {e}")))?;
    let z = C64::new(raw.z[0], raw.z[1]);
    let data = match raw.name.as_str() {
        "barrier_offdiag" => AnalyticData::BarrierOffdiag {
            z,
            length: raw.length,
            start: raw.start,
        },
        "two_block_offdiag" => AnalyticData::TwoBlockOffdiag {
            z,
            length: raw.length,
            gap: raw.gap,
        },
        "gaussian_bump" => AnalyticData::GaussianBump {
            z,
            width: raw.length,
        },
        "gaussian_over_k" => AnalyticData::GaussianOverK {
            z,
            width: raw.length,
        },
        "detuned_gaussian_left" => AnalyticData::DetunedGaussianLeft {
            z,
            k_mode: raw.k_mode,
            width: raw.length,
        },
        other => {
            return Err(CliError::Input(format!(
                "analytic.name: unknown dataset {other}"
            )))
        }
    };
    Ok(data)
}

fn parse_data_csv(path: &PathBuf, kind: DataKind) -> Result<FirstBornData, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let mut ks = Vec::new();
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (i == 0 && line.starts_with('k')) {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(CliError::Input(format!(
                "{}:{}: expected `k,re,im`",
                path.display(),
                i + 1
            )));
        }
        let parse = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| CliError::Input(format!("{}:{}: {e}", path.display(), i + 1)))
        };
        ks.push(parse(fields[0])?);
        values.push(C64::new(parse(fields[1])?, parse(fields[2])?));
    }
    FirstBornData::from_samples(kind, ks, values).map_err(CliError::from)
}

fn invert(args: InvertArgs) -> Result<ExitCode, CliError> {
    let kind = match args.route.as_str() {
        "m12" => DataKind::M12,
        "m21" => DataKind::M21,
        "rr" => DataKind::RRight,
        "rl" => DataKind::RLeft,
        other => {
            return Err(CliError::Input(format!(
                "route: expected m12|m21|rl|rr, got {other}"
            )))
        }
    };
    let mut data = match (&args.data, &args.analytic) {
        (Some(path), None) => parse_data_csv(path, kind)?,
        (None, Some(text)) => FirstBornData::analytic(kind, parse_analytic(text)?),
        _ => {
            return Err(CliError::Input(
                "exactly one of --data or --analytic is required".into(),
            ))
        }
    };
    if let Some(k_max) = args.k_max {
        data = data.with_k_max(k_max);
    }
    if args.x_steps < 2 || args.x_max <= args.x_min {
        return Err(CliError::Input("empty reconstruction grid".into()));
    }
    let opts = ReconstructionOptions::over(args.x_min, args.x_max, args.x_steps);
    let rec = match kind {
        DataKind::M12 | DataKind::M21 => inverse::potential_from_offdiagonal(&data, &opts)?,
        DataKind::RRight => inverse::potential_from_right_reflection(&data, &opts)?,
        DataKind::RLeft => inverse::potential_from_left_reflection(&data, &opts)?,
    };

    let mut csv = String::from("x,re_v,im_v\n");
    for (x, v) in rec.xs.iter().zip(&rec.values) {
        csv.push_str(&format!(
            "{},{},{}\n",
            csv_num(*x),
            csv_num(v.re),
            csv_num(v.im)
        ));
    }
    output::write_text(&args.out, &csv)?;
    let sidecar_extra = serde_json::json!({
        "alpha": rec.alpha.map(complex_pair),
        "route": rec.route,
        "kmax": rec.k_max,
        "errors": rec.warnings,
    });
    Sidecar::new("invert")
        .param("x_min", args.x_min)
        .param("x_max", args.x_max)
        .param("x_steps", args.x_steps)
        .param("taper_fraction", opts.inverse.taper_fraction)
        .param("noise_bound", opts.noise_bound)
        .extra(sidecar_extra)
        .write(&args.out)?;
    Ok(ExitCode::SUCCESS)
}

fn validate(args: ValidateArgs) -> Result<ExitCode, CliError> {
    let report = validation::run_all();
    for check in &report.checks {
        println!("{}", check.line());
    }
    if let Some(out) = &args.out {
        output::write_json(out, &serde_json::to_value(&report).unwrap())?;
        Sidecar::new("validate").write(out)?;
    }
    if report.all_pass {
        println!("all {} checks passed", report.checks.len());
        Ok(ExitCode::SUCCESS)
    } else {
        println!("validation FAILED");
        Ok(ExitCode::from(1))
    }
}
