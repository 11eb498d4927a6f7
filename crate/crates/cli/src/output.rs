//! Result files with an embedded run manifest.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub seed: Option<u64>,
    pub tool_version: String,
    pub wall_time: f64,
}

pub const CSV_MANIFEST_PREFIX: &str = "# manifest: ";

/// Collects the manifest while a subcommand runs.
pub struct Run {
    command: &'static str,
    parameters: BTreeMap<String, Value>,
    seed: Option<u64>,
    started: Instant,
}

impl Run {
    pub fn start(command: &'static str, args: &impl Serialize, seed: Option<u64>) -> Result<Self> {
        let parameters = match serde_json::to_value(args)? {
            Value::Object(map) => map.into_iter().collect(),
            other => bail!("arguments did not serialize to an object: {other}"),
        };
        Ok(Self { command, parameters, seed, started: Instant::now() })
    }

    pub fn manifest(&self) -> RunManifest {
        RunManifest {
            command: self.command.to_string(),
            parameters: self.parameters.clone(),
            seed: self.seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time: self.started.elapsed().as_secs_f64(),
        }
    }

    /// `result` (a JSON object) with a `manifest` member added, pretty-printed.
    pub fn json(&self, result: &impl Serialize) -> Result<String> {
        let mut value = serde_json::to_value(result)?;
        let Value::Object(map) = &mut value else {
            bail!("result is not a JSON object");
        };
        map.insert("manifest".into(), serde_json::to_value(self.manifest())?);
        Ok(render_json(&value))
    }

    /// CSV body preceded by a manifest comment line.
    pub fn csv(&self, body: &str) -> Result<String> {
        Ok(format!("{CSV_MANIFEST_PREFIX}{}\n{body}", serde_json::to_string(&self.manifest())?))
    }
}

/// Canonical text for a JSON value: sorted keys, pretty, trailing newline.
pub fn render_json(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    s.push('\n');
    s
}

pub fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// `<dir>/<stem>.report.json` next to `out`.
pub fn sidecar_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "out".into());
    out.with_file_name(format!("{stem}.report.json"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sidecar_names() {
        assert_eq!(sidecar_path(Path::new("dir/alphabet.json")), PathBuf::from("dir/alphabet.report.json"));
        assert_eq!(sidecar_path(Path::new("a")), PathBuf::from("a.report.json"));
    }

    #[test]
    fn json_round_trips() {
        #[derive(Serialize)]
        struct R {
            z: f64,
            a: Vec<f64>,
        }
        let run = Run::start("t", &serde_json::json!({"k": 1}), Some(3)).unwrap();
        let text = run.json(&R { z: 0.1 + 0.2, a: vec![1e-300, -0.0, 7.25] }).unwrap();
        let parsed: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(render_json(&parsed), text);
        assert_eq!(parsed["manifest"]["seed"], 3);
    }
}
