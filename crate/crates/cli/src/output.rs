//! Output plumbing: deterministic number formatting, file writers and the
//! `<out>.meta.json` sidecar with the configuration echo.

use crate::CliError;
use std::path::{Path, PathBuf};

/// Shortest round-trip decimal form; identical inputs always format to
/// identical bytes.
pub fn csv_num(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x}")
    }
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn write_json(path: &Path, value: &serde_json::Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Compute(format!("serialization: {e}")))?;
    text.push('\n');
    write_text(path, &text)
}

/// Config echo written next to every output file.
pub struct Sidecar {
    subcommand: &'static str,
    spec_path: Option<PathBuf>,
    params: Vec<(String, serde_json::Value)>,
    extra: Option<serde_json::Value>,
}

impl Sidecar {
    pub fn new(subcommand: &'static str) -> Self {
        Self {
            subcommand,
            spec_path: None,
            params: Vec::new(),
            extra: None,
        }
    }

    pub fn spec(mut self, path: &Path) -> Self {
        self.spec_path = Some(path.to_path_buf());
        self
    }

    pub fn param(mut self, key: &str, value: impl serde::Serialize) -> Self {
        self.params.push((
            key.to_string(),
            serde_json::to_value(value).expect("sidecar params are plain values"),
        ));
        self
    }

    pub fn extra(mut self, value: serde_json::Value) -> Self {
        self.extra = Some(value);
        self
    }

    pub fn write(self, out: &Path) -> Result<(), CliError> {
        let params: serde_json::Map<String, serde_json::Value> = self.params.into_iter().collect();
        // echo the spec file content so the run is reproducible even if the
        // file later changes
        let spec_echo = match &self.spec_path {
            Some(p) => std::fs::read_to_string(p)
                .ok()
                .and_then(|t| serde_json::from_str::<serde_json::Value>(&t).ok()),
            None => None,
        };
        let mut record = serde_json::json!({
            "tool": "wavetm",
            "version": env!("CARGO_PKG_VERSION"),
            "subcommand": self.subcommand,
            "spec_path": self.spec_path.as_ref().map(|p| p.display().to_string()),
            "spec": spec_echo,
            "params": params,
        });
        if let Some(serde_json::Value::Object(extra)) = self.extra {
            let root = record.as_object_mut().expect("record is an object");
            for (k, v) in extra {
                root.insert(k, v);
            }
        }
        let mut meta = out.as_os_str().to_owned();
        meta.push(".meta.json");
        write_json(Path::new(&meta), &record)
    }
}

/// Plain plotting script for a scan CSV: log-scale magnitudes against k.
pub fn write_gnuplot(csv: &Path) -> Result<(), CliError> {
    let name = csv.display();
    let script = format!(
        "set datafile separator ','\n\
         set logscale y\n\
         set xlabel 'k'\n\
         set ylabel 'magnitude'\n\
         plot '{name}' using 1:2 with lines title '|Rl|', \\\n\
         \x20    '{name}' using 1:3 with lines title '|Rr|', \\\n\
         \x20    '{name}' using 1:4 with lines title '|T-1|'\n"
    );
    let mut path = csv.as_os_str().to_owned();
    path.push(".gp");
    write_text(Path::new(&path), &script)
}
