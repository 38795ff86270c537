use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::refstates::Guess;
use crate::residuals::{overlaps, ProjectionSet};
use crate::sim::StateVector;

use super::single::{SingleRun, Solver};
use super::strategy::{ConstraintStrategy, OptimizerConfig};

/// Overlap above which a new state counts as a re-converged earlier state.
pub const DUPLICATE_OVERLAP: f64 = 0.5;

#[derive(Debug, Clone)]
pub struct StartingPoint {
    pub label: String,
    pub state: StateVector,
}

impl From<&Guess> for StartingPoint {
    fn from(g: &Guess) -> Self {
        Self {
            label: g.spec.to_string(),
            state: g.state.clone(),
        }
    }
}

pub fn starting_points(guesses: &[Guess]) -> Vec<StartingPoint> {
    guesses.iter().map(StartingPoint::from).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrescanMode {
    /// Restart from the original guesses in the new order.
    Reorder,
    /// Continue from the partially optimised prescan states.
    WarmStart,
}

#[derive(Debug, Clone)]
pub struct PrescanEntry {
    pub label: String,
    pub guess: StateVector,
    pub warm: StateVector,
    pub energy: f64,
    /// Position in the original pool.
    pub pool_index: usize,
}

fn duplicate_of(state: &StateVector, p: &ProjectionSet, owners: &[usize]) -> Option<usize> {
    overlaps(state, p)
        .iter()
        .enumerate()
        .filter(|(_, o)| o.norm_sqr() > DUPLICATE_OVERLAP)
        .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))
        .map(|(a, _)| owners[a])
}

impl Solver {
    /// k sequential constrained runs. Each result (converged or not) joins
    /// the projection set unless it duplicates an earlier state, in which
    /// case the next guess is tried once before the duplicate is recorded.
    pub fn run_spectrum(
        &self,
        guesses: &[StartingPoint],
        k: usize,
        strategy: &ConstraintStrategy,
    ) -> Result<Vec<SingleRun>> {
        let mut p = ProjectionSet::new();
        let mut owners: Vec<usize> = Vec::new();
        let mut out: Vec<SingleRun> = Vec::with_capacity(k);
        let mut next = 0;
        while out.len() < k && next < guesses.len() {
            let g = &guesses[next];
            next += 1;
            let mut run = self.run_single_state(&g.label, &g.state, &p, strategy, &self.config)?;
            let mut dup = duplicate_of(&run.state, &p, &owners);
            if dup.is_some() && next < guesses.len() {
                log::info!("{} re-converged to state {:?}; retrying with the next guess", g.label, dup);
                let g = &guesses[next];
                next += 1;
                run = self.run_single_state(&g.label, &g.state, &p, strategy, &self.config)?;
                dup = duplicate_of(&run.state, &p, &owners);
            }
            run.record.duplicate_of = dup;
            if dup.is_none() {
                p.push(
                    run.state.clone(),
                    run.record.energy,
                    Some((run.initial.clone(), run.gadgets.clone())),
                );
                owners.push(out.len());
            }
            out.push(run);
        }
        Ok(out)
    }

    /// Low-budget runs over the first 2k guesses, each constrained against
    /// those already scanned, then sorted by the resulting energies.
    pub fn cqe_plus_prescan(
        &self,
        guesses: &[StartingPoint],
        k: usize,
        strategy: &ConstraintStrategy,
        prescan: &OptimizerConfig,
    ) -> Result<Vec<PrescanEntry>> {
        let mut p = ProjectionSet::new();
        let mut entries = Vec::new();
        for (i, g) in guesses.iter().take(2 * k).enumerate() {
            let run = self.run_single_state(&g.label, &g.state, &p, strategy, prescan)?;
            p.push(run.state.clone(), run.record.energy, None);
            entries.push(PrescanEntry {
                label: g.label.clone(),
                guess: g.state.clone(),
                warm: run.state,
                energy: run.record.energy,
                pool_index: i,
            });
        }
        entries.sort_by(|a, b| a.energy.total_cmp(&b.energy).then(a.pool_index.cmp(&b.pool_index)));
        Ok(entries)
    }

    /// Prescan followed by a k-state run over the reordered guesses.
    pub fn cqe_plus(
        &self,
        guesses: &[StartingPoint],
        k: usize,
        strategy: &ConstraintStrategy,
        prescan: &OptimizerConfig,
        mode: PrescanMode,
    ) -> Result<(Vec<PrescanEntry>, Vec<SingleRun>)> {
        let ranked = self.cqe_plus_prescan(guesses, k, strategy, prescan)?;
        let mut starts: Vec<StartingPoint> = ranked
            .iter()
            .map(|e| StartingPoint {
                label: e.label.clone(),
                state: match mode {
                    PrescanMode::Reorder => e.guess.clone(),
                    PrescanMode::WarmStart => e.warm.clone(),
                },
            })
            .collect();
        starts.extend(guesses.iter().skip(2 * k).cloned());
        let runs = self.run_spectrum(&starts, k, strategy)?;
        Ok((ranked, runs))
    }
}
