//! Staged outputs. Nothing touches the output directory until a command has
//! finished computing, so a failed run leaves no partial files.

use std::fs;
use std::path::Path;

use serde_json::json;

use crate::config::{sha256_hex, RunConfig};
use crate::Failure;

pub struct Outputs {
    hash: String,
    files: Vec<(String, String)>,
    verdicts: Vec<serde_json::Value>,
}

impl Outputs {
    pub fn new(config: &RunConfig) -> Self {
        Outputs { hash: config.hash(), files: Vec::new(), verdicts: Vec::new() }
    }

    /// Stage a file, stamping it with the config hash in a form that keeps
    /// it valid for its type.
    pub fn add(&mut self, name: &str, contents: &str) {
        let stamped = if name.ends_with(".csv") {
            stamp_csv(contents, &self.hash)
        } else if name.ends_with(".svg") {
            stamp_svg(contents, &self.hash)
        } else {
            format!("# config_hash {}\n{contents}", self.hash)
        };
        self.files.push((name.to_string(), stamped));
    }

    pub fn verdict(&mut self, name: &str, passed: bool, detail: &str) {
        self.verdicts.push(json!({ "check": name, "passed": passed, "detail": detail }));
    }

    /// Write every staged file plus `manifest.json`.
    pub fn write(self, out: &Path, config: &RunConfig, exit_code: i32) -> Result<(), Failure> {
        let io = |e: std::io::Error| Failure::Input(format!("cannot write to {}: {e}", out.display()));
        fs::create_dir_all(out).map_err(io)?;
        let mut listed = Vec::new();
        for (name, text) in &self.files {
            fs::write(out.join(name), text).map_err(io)?;
            listed.push(json!({ "name": name, "bytes": text.len(), "sha256": sha256_hex(text.as_bytes()) }));
        }
        let manifest = json!({
            "tool": "steklov-lab",
            "config": config.to_json(),
            "config_hash": self.hash,
            "files": listed,
            "verdicts": self.verdicts,
            "exit_code": exit_code,
        });
        let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
        fs::write(out.join("manifest.json"), text).map_err(io)?;
        Ok(())
    }
}

/// Adds a trailing `config_hash` column.
fn stamp_csv(contents: &str, hash: &str) -> String {
    let mut out = String::with_capacity(contents.len() + 80 * contents.lines().count());
    for (i, line) in contents.lines().filter(|l| !l.is_empty()).enumerate() {
        out.push_str(line);
        out.push(',');
        out.push_str(if i == 0 { "config_hash" } else { hash });
        out.push('\n');
    }
    out
}

/// Adds a comment right after the opening `<svg ...>` tag.
fn stamp_svg(contents: &str, hash: &str) -> String {
    let comment = format!("<!-- config_hash {hash} -->");
    match contents.find("<svg").and_then(|s| contents[s..].find('>').map(|e| s + e + 1)) {
        Some(at) => format!("{}\n{comment}{}", &contents[..at], &contents[at..]),
        None => format!("{comment}\n{contents}"),
    }
}
