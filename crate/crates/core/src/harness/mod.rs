//! Experiment drivers behind the command-line interface.
//!
//! Tables are written as CSV and traces as JSON lines. Independent work
//! items (strategies of a grid, points of a scan) run on a rayon pool whose
//! size comes from the `ESCQE_WORKERS` environment variable.

mod config;
mod dissociation;
mod integrals;
pub mod metrics;
mod spectrum;
mod validate;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

pub use config::{AtomSpec, GeometrySpec, RunConfig};
pub use dissociation::{cmd_dissociation, DissociationOutcome, DissociationRow, EnergyRow};
pub use integrals::cmd_integrals;
pub use spectrum::{cmd_spectrum, SpectrumOutcome, SpectrumSummary, StateRow};
pub use validate::{cmd_validate, ValidationItem, ValidationReport};

pub const WORKERS_ENV: &str = "ESCQE_WORKERS";

/// Thread pool sized by `ESCQE_WORKERS` (rayon's default when unset).
pub fn worker_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(WORKERS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("{WORKERS_ENV} must be a positive integer, got `{v}`")))?;
        builder = builder.num_threads(n.max(1));
    }
    builder.build().map_err(|e| Error::Config(e.to_string()))
}

pub(crate) fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Config(format!("csv: {other:?}")),
    }
}

pub(crate) fn write_jsonl<T: Serialize>(path: &Path, items: &[T]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for it in items {
        serde_json::to_writer(&mut w, it).map_err(|e| Error::Config(e.to_string()))?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

pub(crate) fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Config(e.to_string()))?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

/// File-name friendly form of a strategy string.
pub(crate) fn slug(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '.' || c == '-' { c } else { '_' })
        .collect()
}
