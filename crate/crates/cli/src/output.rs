//! Atomic file output and report headers.

use std::io::Write;
use std::path::Path;

use serde_json::{json, Map, Value};
use zerodist::ZeroList;

use crate::config::RunConfig;

/// Writes `contents` to a temporary file beside `path`, then renames it.
pub fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Self-describing header: tool version, resolved config, zero provenance.
pub fn header(cfg: &RunConfig, zeros: Option<&ZeroList>) -> Value {
    let mut config = Map::new();
    for (k, r) in &cfg.values {
        config.insert(k.to_string(), json!({ "value": r.value, "source": r.source }));
    }
    let mut h = json!({
        "tool": "zerodist",
        "version": env!("CARGO_PKG_VERSION"),
        "command": cfg.command.name,
        "config": config,
        "config_file": cfg.config_file.as_ref().map(|p| p.display().to_string()),
    });
    if let Some(z) = zeros {
        h["zeros"] = json!({
            "source": z.source().to_string(),
            "accuracy": z.accuracy(),
            "count": z.count(),
            "last": z.last(),
        });
    }
    h
}

/// Writes a JSON document to `path`, or to standard output when `path` is `None`.
pub fn emit_json(path: Option<&Path>, value: &Value, stdout: &mut dyn Write) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values serialize");
    text.push('\n');
    match path {
        Some(p) => write_atomic(p, text.as_bytes()),
        None => stdout.write_all(text.as_bytes()),
    }
}

/// CSV with a header row; numbers use Rust's locale-free formatting.
pub fn csv(header: &str, rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut s = String::from(header);
    s.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}
