//! Result files: CSV tables, JSON summaries and their schemas.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use super::config::RunConfig;
use crate::profile::{Axis, ProfileEstimate};
use crate::viz::GridSurface;
use crate::{Error, Field, Result};

/// Version of every JSON document this crate writes.
pub const SCHEMA_VERSION: u32 = 1;

pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Keys each schema requires on top of `schema`, `schema_version`,
/// `code_version` and `config`.
const SCHEMAS: [(&str, &[&str]); 6] = [
    (
        "sepscope.profile",
        &[
            "axis", "field", "sampler", "generator", "seed", "n_samples", "grid_points", "probability", "stderr",
            "total_weight",
        ],
    ),
    ("sepscope.bloore", &["integral", "probability", "quadrature_error", "evaluations", "all_pass"]),
    ("sepscope.fit", &["model", "params", "rms_residual", "inputs"]),
    ("sepscope.volume", &["estimates"]),
    ("sepscope.viz-rebit", &["ratios", "tally", "skipped", "measure", "n_qmc", "grid", "seed"]),
    (
        "sepscope.viz-qubit",
        &["separability", "negative_jacobian_fraction", "counts", "tally", "marginals", "n_qmc", "bins", "seed"],
    ),
];

/// Wraps `body` with the schema header and the run configuration.
pub fn document(schema: &str, config: &RunConfig, body: Value) -> Result<Value> {
    let Value::Object(mut map) = body else {
        return Err(Error::Input("document body must be a JSON object".into()));
    };
    map.insert("schema".into(), json!(schema));
    map.insert("schema_version".into(), json!(SCHEMA_VERSION));
    map.insert("code_version".into(), json!(CODE_VERSION));
    map.insert("config".into(), serde_json::to_value(config)?);
    let doc = Value::Object(map);
    validate_document(&doc)?;
    Ok(doc)
}

/// Checks a result document against its declared schema.
pub fn validate_document(doc: &Value) -> Result<()> {
    let map = doc.as_object().ok_or_else(|| Error::Input("document is not a JSON object".into()))?;
    let schema = map
        .get("schema")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Input("missing `schema`".into()))?;
    let required = SCHEMAS
        .iter()
        .find(|(name, _)| *name == schema)
        .map(|(_, keys)| *keys)
        .ok_or_else(|| Error::Input(format!("unknown schema `{schema}`")))?;
    if map.get("schema_version").and_then(Value::as_u64) != Some(SCHEMA_VERSION as u64) {
        return Err(Error::Input(format!("`{schema}`: unsupported schema_version")));
    }
    if !map.get("code_version").is_some_and(Value::is_string) {
        return Err(Error::Input(format!("`{schema}`: missing code_version")));
    }
    let config = map.get("config").and_then(Value::as_object);
    if !config.is_some_and(|c| c.get("subcommand").is_some_and(Value::is_string) && c.get("options").is_some_and(Value::is_object)) {
        return Err(Error::Input(format!("`{schema}`: missing or malformed config")));
    }
    for key in required {
        if !map.contains_key(*key) {
            return Err(Error::Input(format!("`{schema}`: missing key `{key}`")));
        }
    }
    Ok(())
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn to_json_text(doc: &Value) -> Result<String> {
    let mut s = serde_json::to_string_pretty(doc)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json(path: &Path, doc: &Value) -> Result<()> {
    write_file(path, &to_json_text(doc)?)
}

pub(crate) fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, text)?;
    Ok(())
}

/// `base` with `suffix` appended to the file stem, keeping the extension.
pub fn with_stem_suffix(base: &Path, suffix: &str) -> PathBuf {
    let stem = base.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let ext = base.extension().map(|e| e.to_string_lossy().into_owned()).unwrap_or_else(|| "csv".into());
    base.with_file_name(format!("{stem}{suffix}.{ext}"))
}

pub fn profile_csv(p: &ProfileEstimate) -> String {
    let mut s = String::from("abscissa,value,stderr\n");
    for ((x, v), e) in p.grid.iter().zip(&p.value).zip(&p.stderr) {
        s.push_str(&format!("{x},{v},{e}\n"));
    }
    s
}

/// Reads a profile CSV written by [`profile_csv`].
pub fn read_profile_csv(text: &str, axis: Axis, field: Field) -> Result<ProfileEstimate> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| Error::Input("empty profile CSV".into()))?;
    if header.trim() != "abscissa,value,stderr" {
        return Err(Error::Input(format!("unexpected CSV header `{header}`")));
    }
    let (mut grid, mut value, mut stderr) = (Vec::new(), Vec::new(), Vec::new());
    for (n, line) in lines.enumerate() {
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| Error::Input(format!("CSV row {}: cannot parse `{s}`", n + 2)))
        };
        if cols.len() != 3 {
            return Err(Error::Input(format!("CSV row {}: expected 3 columns", n + 2)));
        }
        grid.push(parse(cols[0])?);
        value.push(parse(cols[1])?);
        stderr.push(parse(cols[2])?);
    }
    ProfileEstimate::from_values(axis, field, grid, value, stderr)
}

/// Rows `a,b,measure` over the lattice, first axis outermost.
pub fn surface_csv(s: &GridSurface) -> String {
    let mut out = format!("{},{},measure\n", s.axes[0], s.axes[1]);
    let n = s.side();
    for i in 0..n {
        for j in 0..n {
            out.push_str(&format!("{},{},{}\n", s.abscissae[i], s.abscissae[j], s.at(i, j)));
        }
    }
    out
}
