use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::RunConfig;
use super::metrics::{k_matched_error, nearest_unique_error, to_mh};
use super::{slug, worker_pool, write_csv, write_jsonl};
use crate::error::Result;
use crate::fci::FciSpectrum;
use crate::molint::MolecularSystem;
use crate::solver::{starting_points, RunRecord, SingleRun, Solver};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DissociationRow {
    pub d: f64,
    pub method: String,
    pub strategy: String,
    pub k_matched_mh: f64,
    pub nearest_unique_mh: f64,
    pub converged: usize,
    pub states: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyRow {
    pub d: f64,
    pub method: String,
    pub strategy: String,
    pub index: usize,
    pub energy: f64,
    pub fci_energy: f64,
    pub spin: String,
}

#[derive(Debug, Clone)]
pub struct DissociationOutcome {
    pub errors: Vec<DissociationRow>,
    pub energies: Vec<EnergyRow>,
    pub files: Vec<PathBuf>,
}

struct PointResult {
    errors: Vec<DissociationRow>,
    energies: Vec<EnergyRow>,
    traces: Vec<(String, Vec<RunRecord>)>,
}

fn point(config: &RunConfig, d: f64) -> Result<PointResult> {
    let system = MolecularSystem::from_geometry(config.geometry.build(Some(d))?, &config.basis)?;
    let fci = FciSpectrum::for_system(&system)?;
    let solver = Solver::for_system(&system, config.optimizer.clone())?;
    let pool = starting_points(&solver.guesses(config.guess)?);
    let k = config.k.unwrap_or(6);
    let reference = fci.energies();
    let mut out = PointResult {
        errors: Vec::new(),
        energies: Vec::new(),
        traces: Vec::new(),
    };
    for s in config.strategy_grid()? {
        let plain = solver.run_spectrum(&pool, k, &s)?;
        let (_, plus) = solver.cqe_plus(&pool, k, &s, &config.prescan, config.prescan_mode)?;
        for (method, runs) in [("CQE", plain), ("CQE+", plus)] {
            let energies: Vec<f64> = runs.iter().map(|r| r.record.energy).collect();
            out.errors.push(DissociationRow {
                d,
                method: method.into(),
                strategy: s.to_string(),
                k_matched_mh: to_mh(k_matched_error(&energies, reference)),
                nearest_unique_mh: to_mh(nearest_unique_error(&energies, reference).0),
                converged: runs.iter().filter(|r| r.record.converged).count(),
                states: runs.len(),
            });
            let mut sorted: Vec<&SingleRun> = runs.iter().collect();
            sorted.sort_by(|a, b| a.record.energy.total_cmp(&b.record.energy));
            for (i, r) in sorted.iter().enumerate() {
                out.energies.push(EnergyRow {
                    d,
                    method: method.into(),
                    strategy: s.to_string(),
                    index: i,
                    energy: r.record.energy,
                    fci_energy: reference[i],
                    spin: r.record.spin.clone(),
                });
            }
            out.traces.push((
                format!("{method}_{}", slug(&s.to_string())),
                runs.into_iter().map(|r| r.record).collect(),
            ));
        }
    }
    Ok(out)
}

/// k-lowest states along the scan with both error metrics in millihartree.
/// Each point writes its own files; the merged tables follow scan order.
pub fn cmd_dissociation(config: &RunConfig, out: &Path) -> Result<DissociationOutcome> {
    config.validate()?;
    let points_dir = out.join("points");
    std::fs::create_dir_all(&points_dir)?;
    let results: Vec<(f64, PointResult)> = worker_pool()?.install(|| {
        config
            .scan
            .par_iter()
            .map(|&d| point(config, d).map(|r| (d, r)))
            .collect::<Result<Vec<_>>>()
    })?;

    let mut files = Vec::new();
    let mut errors = Vec::new();
    let mut energies = Vec::new();
    for (d, r) in results {
        let stem = format!("d_{d:.3}");
        let p = points_dir.join(format!("{stem}_energies.csv"));
        write_csv(&p, &r.energies)?;
        files.push(p);
        for (tag, records) in &r.traces {
            let p = points_dir.join(format!("{stem}_{}.jsonl", slug(tag)));
            write_jsonl(&p, records)?;
            files.push(p);
        }
        errors.extend(r.errors);
        energies.extend(r.energies);
    }
    let e_path = out.join(format!("{}_errors.csv", config.name));
    write_csv(&e_path, &errors)?;
    let en_path = out.join(format!("{}_energies.csv", config.name));
    write_csv(&en_path, &energies)?;
    files.push(e_path);
    files.push(en_path);
    Ok(DissociationOutcome { errors, energies, files })
}
