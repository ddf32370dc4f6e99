use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use tamesep_core::harness::to_json_string;

use crate::commands::CliError;

/// Writes `text` to `out`, or to stdout.
pub fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            fs::write(p, text)?;
        }
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

pub fn json<T: Serialize>(x: &T) -> Result<String, CliError> {
    Ok(to_json_string(x)?)
}

/// CSV text with optional `# ` comment lines before the header.
pub fn csv(comments: &[String], header: &[&str], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    let body = String::from_utf8(w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?)
        .expect("csv output is UTF-8");
    let mut s: String = comments.iter().map(|c| format!("# {c}\n")).collect();
    s.push_str(&body);
    Ok(s)
}
