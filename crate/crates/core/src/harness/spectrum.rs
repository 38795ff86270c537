use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::RunConfig;
use super::metrics::{summarize, StrategySummary};
use super::{slug, worker_pool, write_csv, write_json, write_jsonl};
use crate::error::Result;
use crate::fci::{FciSpectrum, SymmetryTable};
use crate::molint::MolecularSystem;
use crate::solver::{starting_points, ConstraintStrategy, RunRecord, SingleRun, Solver};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateRow {
    pub index: usize,
    pub guess: String,
    pub e_cqe: f64,
    pub e_fci: Option<f64>,
    pub abs_de: Option<f64>,
    pub variance: f64,
    pub iterations: usize,
    pub spin: String,
    pub irrep: String,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSummary {
    pub name: String,
    pub geometry_xyz: String,
    pub sector_dimension: usize,
    pub pauli_terms: usize,
    pub l1_norm: f64,
    pub l1_norm_with_identity: f64,
    pub sector_frobenius_norm: f64,
    pub nuclear_repulsion: f64,
    pub rhf_energy: f64,
    pub fci_energies: Vec<f64>,
    pub symmetry_table: SymmetryTable,
    pub strategies: Vec<StrategySummary>,
}

#[derive(Debug, Clone)]
pub struct SpectrumOutcome {
    pub summary: SpectrumSummary,
    pub runs: Vec<(ConstraintStrategy, Vec<SingleRun>)>,
    pub files: Vec<PathBuf>,
}

fn rows(runs: &[SingleRun], fci: &[f64]) -> Vec<StateRow> {
    let mut order: Vec<usize> = (0..runs.len()).collect();
    order.sort_by(|&a, &b| runs[a].record.energy.total_cmp(&runs[b].record.energy));
    order
        .iter()
        .enumerate()
        .map(|(k, &i)| {
            let r = &runs[i].record;
            let e_fci = fci.get(k).copied();
            StateRow {
                index: k,
                guess: r.guess.clone(),
                e_cqe: r.energy,
                e_fci,
                abs_de: e_fci.map(|e| (e - r.energy).abs()),
                variance: r.variance,
                iterations: r.total_iterations,
                spin: r.spin.clone(),
                irrep: r.irrep.clone(),
                converged: r.converged,
            }
        })
        .collect()
}

/// Full or k-lowest spectrum for every strategy of the grid, plus the exact
/// reference.
pub fn cmd_spectrum(config: &RunConfig, out: &Path) -> Result<SpectrumOutcome> {
    config.validate()?;
    std::fs::create_dir_all(out)?;
    let system = MolecularSystem::from_geometry(config.geometry.build(None)?, &config.basis)?;
    let fci = FciSpectrum::for_system(&system)?;
    let solver = Solver::for_system(&system, config.optimizer.clone())?;
    let mut files = Vec::new();

    let fci_path = out.join(format!("{}_fci.csv", config.name));
    std::fs::write(&fci_path, fci.csv())?;
    files.push(fci_path);

    let strategies = if config.fci_only {
        Vec::new()
    } else {
        config.strategy_grid()?
    };
    let k = config.k.unwrap_or(fci.basis.dim());
    let pool = starting_points(&solver.guesses(config.guess)?);
    let runs: Vec<(ConstraintStrategy, Vec<SingleRun>)> = worker_pool()?.install(|| {
        strategies
            .par_iter()
            .map(|s| {
                let runs = if config.cqe_plus {
                    solver
                        .cqe_plus(&pool, k, s, &config.prescan, config.prescan_mode)
                        .map(|(_, r)| r)
                } else {
                    solver.run_spectrum(&pool, k, s)
                };
                runs.map(|r| (*s, r))
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let mut summaries = Vec::new();
    for (s, r) in &runs {
        let tag = format!("{}_{}", config.name, slug(&s.to_string()));
        let csv_path = out.join(format!("{tag}_states.csv"));
        write_csv(&csv_path, &rows(r, fci.energies()))?;
        let trace_path = out.join(format!("{tag}_runs.jsonl"));
        let records: Vec<&RunRecord> = r.iter().map(|x| &x.record).collect();
        write_jsonl(&trace_path, &records)?;
        files.push(csv_path);
        files.push(trace_path);
        summaries.push(summarize(&s.to_string(), r, fci.energies()));
    }

    let summary = SpectrumSummary {
        name: config.name.clone(),
        geometry_xyz: system.geometry.to_xyz(),
        sector_dimension: fci.basis.dim(),
        pauli_terms: solver.pauli.len(),
        l1_norm: solver.pauli.l1_norm(false),
        l1_norm_with_identity: solver.pauli.l1_norm(true),
        sector_frobenius_norm: fci.frobenius_norm(),
        nuclear_repulsion: system.hamiltonian.enuc,
        rhf_energy: system.scf.energy,
        fci_energies: fci.energies().to_vec(),
        symmetry_table: fci.table(),
        strategies: summaries,
    };
    let summary_path = out.join(format!("{}_summary.json", config.name));
    write_json(&summary_path, &summary)?;
    files.push(summary_path);
    Ok(SpectrumOutcome { summary, runs, files })
}
