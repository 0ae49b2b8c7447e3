//! Deterministic CSV emission.
//!
//! Numbers are printed with 17 significant digits (`{:.16e}`), so output
//! is byte-identical across runs of the same scenario and round-trips
//! through f64 exactly. Every file has a header row even when no data
//! rows follow.

use std::io::Write;
use std::path::{Path, PathBuf};

use lkweld_core::FitResult;

use crate::error::CliError;

/// 17-significant-digit rendering used for every floating-point field.
pub fn format_value(x: f64) -> String {
    format!("{x:.16e}")
}

fn create(path: &Path) -> Result<std::io::BufWriter<std::fs::File>, CliError> {
    let file = std::fs::File::create(path)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))?;
    Ok(std::io::BufWriter::new(file))
}

/// Writes a numeric table with a header row.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<f64>]) -> Result<(), CliError> {
    let mut w = create(path)?;
    let io = |e: std::io::Error| CliError::Io(format!("writing {}: {e}", path.display()));
    writeln!(w, "{}", header.join(",")).map_err(io)?;
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        let line: Vec<String> = row.iter().map(|&v| format_value(v)).collect();
        writeln!(w, "{}", line.join(",")).map_err(io)?;
    }
    w.flush().map_err(io)
}

/// Writes the summary of a convergence fit.
pub fn write_fit_csv(path: &Path, fit: &FitResult) -> Result<(), CliError> {
    let mut w = create(path)?;
    let io = |e: std::io::Error| CliError::Io(format!("writing {}: {e}", path.display()));
    writeln!(w, "slope,half_width,points_used,degenerate").map_err(io)?;
    writeln!(
        w,
        "{},{},{},{}",
        format_value(fit.slope),
        format_value(fit.slope_half_width),
        fit.used.iter().filter(|&&u| u).count(),
        fit.degenerate
    )
    .map_err(io)?;
    w.flush().map_err(io)
}

/// Ensures the output directory exists and returns a path inside it.
pub fn out_file(dir: &Path, name: &str) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Io(format!("cannot create output dir {}: {e}", dir.display())))?;
    Ok(dir.join(name))
}
