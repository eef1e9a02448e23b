use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::args::Format;

/// First line of every CSV report. Bump the version when columns change.
pub const CSV_VERSION_LINE: &str = "# qam-csv v1";

/// A report printable in every output format.
pub trait Render: Serialize {
    /// Column names, without the version line.
    fn csv_header(&self) -> String;
    fn csv_rows(&self) -> Vec<String>;
    fn plain(&self) -> String;

    /// Failed internal checks; any entry turns the exit code to 2.
    fn violations(&self) -> Vec<String> {
        Vec::new()
    }
}

pub fn render<R: Render>(report: &R, format: Format) -> Result<String, serde_json::Error> {
    Ok(match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report)?;
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = format!("{CSV_VERSION_LINE}\n{}\n", report.csv_header());
            for row in report.csv_rows() {
                let _ = writeln!(s, "{row}");
            }
            s
        }
        Format::Plain => {
            let mut s = report.plain();
            if !s.ends_with('\n') {
                s.push('\n');
            }
            s
        }
    })
}

pub fn write_out(text: &str, out: Option<&Path>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

/// Joins a list for a single CSV cell.
pub fn cell<T: std::fmt::Display>(values: &[T]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(";")
}
