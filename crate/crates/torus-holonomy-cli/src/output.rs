//! Deterministic file and stdout emission.
//!
//! Floats in CSV are printed with 12 significant digits in scientific
//! notation; files are written through a temp-and-rename so a failed run
//! never leaves a partial file behind.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use torus_holonomy::transport::SweepRow;

/// 12 significant digits, scientific notation.
pub fn fmt_sig12(x: f64) -> String {
    format!("{x:.11e}")
}

fn temp_sibling(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".tmp");
    path.with_file_name(name)
}

/// Write `contents` to `path` atomically (temp file + rename).
pub fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let tmp = temp_sibling(path);
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
        drop(f);
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}

/// Render sweep rows as CSV with the fixed header
/// `theta0,n,sigma,divergent`, LF line endings, UTF-8.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(rows.len() * 48 + 32);
    out.push_str("theta0,n,sigma,divergent\n");
    for row in rows {
        out.push_str(&fmt_sig12(row.theta0));
        out.push(',');
        out.push_str(&fmt_sig12(row.n));
        out.push(',');
        match row.sigma {
            Some(s) => {
                out.push_str(&fmt_sig12(s));
                out.push_str(",0\n");
            }
            None => out.push_str(",1\n"),
        }
    }
    out
}

/// Serialize a record as pretty JSON with a trailing newline.
pub fn to_json<T: serde::Serialize>(record: &T) -> String {
    let mut s = serde_json::to_string_pretty(record).expect("record serialization cannot fail");
    s.push('\n');
    s
}

/// Send JSON to `--out` if given, stdout otherwise.
pub fn emit_json<T: serde::Serialize>(record: &T, out: Option<&Path>) -> std::io::Result<()> {
    let text = to_json(record);
    match out {
        Some(path) => write_atomic(path, text.as_bytes()),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())
        }
    }
}
