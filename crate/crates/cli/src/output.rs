use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <Format as ValueEnum>::from_str(s, true)
    }
}

/// Metadata carried by every report.
#[derive(Debug, Clone, Serialize)]
pub struct Header {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub seed: Option<u64>,
    pub tolerance: f64,
    pub target_constant: Option<f64>,
    pub passed: bool,
}

impl Header {
    pub fn new(command: &str, seed: Option<u64>, tolerance: f64, target_constant: Option<f64>, passed: bool) -> Self {
        Self {
            tool: "katolab",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            seed,
            tolerance,
            target_constant: target_constant.filter(|t| t.is_finite()),
            passed,
        }
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    #[serde(flatten)]
    header: &'a Header,
    result: &'a T,
}

/// A rendered table for `--format csv`.
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

pub fn num(x: f64) -> String {
    if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else if x == 0.0 || (1e-4..1e15).contains(&x.abs()) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn open(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(std::io::BufWriter::new(
            std::fs::File::create(p).map_err(|e| CliError::Config(format!("cannot write {}: {e}", p.display())))?,
        )),
        None => Box::new(std::io::stdout().lock()),
    })
}

pub fn write_json<T: Serialize>(out: &mut dyn Write, header: &Header, result: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, &Envelope { header, result }).map_err(|e| CliError::Io(e.to_string()))?;
    writeln!(out).map_err(|e| CliError::Io(e.to_string()))
}

/// CSV with `#`-prefixed metadata lines ahead of the header row.
pub fn write_csv(out: &mut dyn Write, header: &Header, table: &Table) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(e.to_string());
    writeln!(out, "# {} {} {}", header.tool, header.version, header.command).map_err(io)?;
    let seed = header.seed.map_or("none".to_string(), |s| s.to_string());
    let target = header.target_constant.map_or("none".to_string(), num);
    writeln!(
        out,
        "# seed={seed} tolerance={} target_constant={target} passed={}",
        num(header.tolerance),
        header.passed
    )
    .map_err(io)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&table.columns).map_err(|e| CliError::Io(e.to_string()))?;
    for row in &table.rows {
        w.write_record(row).map_err(|e| CliError::Io(e.to_string()))?;
    }
    w.flush().map_err(io)
}

/// Plain CSV to a side file, no metadata lines.
pub fn write_side_csv(path: &Path, table: &Table) -> Result<(), CliError> {
    let mut w =
        csv::Writer::from_path(path).map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))?;
    w.write_record(&table.columns).map_err(|e| CliError::Io(e.to_string()))?;
    for row in &table.rows {
        w.write_record(row).map_err(|e| CliError::Io(e.to_string()))?;
    }
    w.flush().map_err(|e| CliError::Io(e.to_string()))
}

/// One compact JSON object per line.
pub fn write_json_lines(path: &Path, lines: &[serde_json::Value]) -> Result<(), CliError> {
    let file =
        std::fs::File::create(path).map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))?;
    let mut w = std::io::BufWriter::new(file);
    for line in lines {
        serde_json::to_writer(&mut w, line).map_err(|e| CliError::Io(e.to_string()))?;
        writeln!(w).map_err(|e| CliError::Io(e.to_string()))?;
    }
    w.flush().map_err(|e| CliError::Io(e.to_string()))
}
