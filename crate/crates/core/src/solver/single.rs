use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fci::{classify, D2hSymmetry, FciSpectrum};
use crate::molint::{MolecularSystem, SpinOrbitalHamiltonian};
use crate::refstates::{guess_pool, Guess, GuessKind};
use crate::residuals::{acpse_residual, norm_n, overlaps, projected_energy, variance, ProjectionSet};
use crate::secondq::{assemble_hamiltonian, GeneratorBasis, PauliSum};
use crate::sim::{apply_generator_step, CompiledOperator, GadgetSequence, StateVector};

use super::objective::MeritForm;
use super::quasi_newton::QuasiNewton;
use super::strategy::{ConstraintStrategy, OptimizerConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Converged,
    MaxIterations,
    /// No step satisfied the Armijo condition even from steepest descent.
    Stalled,
    /// Gradient below threshold with constraints still violated.
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub merit: f64,
    pub projected_energy: f64,
    pub residual_norm: f64,
    pub violations: Vec<f64>,
    /// Accepted line-search step from this point (0 for the final point).
    pub step: f64,
    pub gadgets: usize,
    pub fallback: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub guess: String,
    pub strategy: String,
    pub iterations: Vec<IterationRecord>,
    pub converged: bool,
    pub termination: Termination,
    pub energy: f64,
    pub expectation: f64,
    pub variance: f64,
    pub acpse_norm: Option<f64>,
    pub s2: f64,
    pub spin: String,
    pub irrep: String,
    pub total_iterations: usize,
    pub outer_cycles: usize,
    pub fallback_iterations: usize,
    pub max_violation: f64,
    pub gadget_count: usize,
    /// Index (in run order) of the earlier state this run re-converged to.
    pub duplicate_of: Option<usize>,
    pub wall_time_s: f64,
}

#[derive(Debug, Clone)]
pub struct SingleRun {
    pub initial: StateVector,
    pub state: StateVector,
    pub gadgets: GadgetSequence,
    pub record: RunRecord,
}

/// Hamiltonian-level data shared by every optimisation on one geometry.
#[derive(Debug, Clone)]
pub struct Solver {
    pub hamiltonian: SpinOrbitalHamiltonian,
    pub pauli: PauliSum,
    pub op: CompiledOperator,
    pub basis: GeneratorBasis,
    pub symmetry: Option<D2hSymmetry>,
    pub n_electrons: usize,
    pub config: OptimizerConfig,
    /// Deflation shift used when the projected form is ill-conditioned.
    pub fallback_shift: f64,
}

impl Solver {
    pub fn new(
        hamiltonian: SpinOrbitalHamiltonian,
        n_electrons: usize,
        symmetry: Option<D2hSymmetry>,
        config: OptimizerConfig,
    ) -> Result<Self> {
        config.validate()?;
        let pauli = assemble_hamiltonian(&hamiltonian);
        let op = CompiledOperator::new(&pauli);
        let basis = GeneratorBasis::new(hamiltonian.n_spin_orbitals())?;
        let fallback_shift = 10.0 * pauli.l1_norm(true);
        Ok(Self {
            hamiltonian,
            pauli,
            op,
            basis,
            symmetry,
            n_electrons,
            config,
            fallback_shift,
        })
    }

    pub fn for_system(system: &MolecularSystem, config: OptimizerConfig) -> Result<Self> {
        let symmetry =
            D2hSymmetry::from_orbitals(&system.geometry, &system.scf.mo_coeffs, &system.integrals.overlap).ok();
        Self::new(system.hamiltonian.clone(), system.n_electrons, symmetry, config)
    }

    pub fn n_qubits(&self) -> usize {
        self.hamiltonian.n_spin_orbitals()
    }

    /// Guess pool in the lowest-|Sz| sector.
    pub fn guesses(&self, kind: GuessKind) -> Result<Vec<Guess>> {
        guess_pool(&self.hamiltonian, self.n_electrons, (self.n_electrons % 2) as i32, kind)
    }

    pub fn fci(&self, system: &MolecularSystem) -> Result<FciSpectrum> {
        FciSpectrum::for_system(system)
    }

    /// One constrained optimisation from `initial` against the states in `p`.
    pub fn run_single_state(
        &self,
        label: &str,
        initial: &StateVector,
        p: &ProjectionSet,
        strategy: &ConstraintStrategy,
        config: &OptimizerConfig,
    ) -> Result<SingleRun> {
        strategy.validate()?;
        config.validate()?;
        let clock = Instant::now();
        let mut psi = initial.clone();
        let mut gadgets = GadgetSequence::new(psi.n_qubits());
        let mut qn = QuasiNewton::new(config.method, self.basis.len());
        let mut form = MeritForm::for_strategy(strategy, p);
        let fallback_form = MeritForm::Deflated {
            shifted: p.entries.iter().map(|e| e.energy - self.fallback_shift).collect(),
        };
        let mut in_fallback = false;
        let mut iterations: Vec<IterationRecord> = Vec::new();
        let mut pending: Option<(Vec<f64>, Vec<f64>)> = None;
        let mut outer_cycles = 0;
        let mut last_outer_violation = f64::INFINITY;
        let mut fallback_iterations = 0;
        let mut steps = 0;

        let termination = loop {
            let want_fallback = !matches!(strategy, ConstraintStrategy::Deflation { .. })
                && (norm_n(&psi, p).is_err() || max_overlap(&psi, p) > config.fallback_overlap);
            if want_fallback != in_fallback {
                log::debug!("{label}: fallback {}", if want_fallback { "engaged" } else { "released" });
                in_fallback = want_fallback;
                qn.reset();
                pending = None;
            }
            let active = if in_fallback { fallback_form.clone() } else { form.clone() };
            let ev = active.evaluate(&psi, &self.op, p)?;
            let grad = self.basis.project(&ev.gradient);
            if let Some((s, g_old)) = pending.take() {
                let y: Vec<f64> = grad.iter().zip(&g_old).map(|(a, b)| a - b).collect();
                qn.update(&s, &y);
            }
            let max_violation = ev.max_violation();
            iterations.push(IterationRecord {
                iteration: steps,
                merit: ev.value,
                projected_energy: ev.energy(),
                residual_norm: ev.norm,
                violations: ev.violations.clone(),
                step: 0.0,
                gadgets: 0,
                fallback: in_fallback,
            });

            if !in_fallback && ev.norm < config.residual_threshold {
                if max_violation < config.violation_threshold {
                    break Termination::Converged;
                }
                match (strategy, &mut form) {
                    (ConstraintStrategy::Augmented { growth, .. }, MeritForm::Projected { lambda, mu })
                        if outer_cycles < config.max_outer_cycles =>
                    {
                        for (l, g) in lambda.iter_mut().zip(&ev.violations) {
                            *l += *mu * g;
                        }
                        if max_violation > 0.25 * last_outer_violation {
                            *mu *= growth;
                        }
                        last_outer_violation = max_violation;
                        outer_cycles += 1;
                        qn.reset();
                        iterations.pop();
                        continue;
                    }
                    _ => break Termination::Infeasible,
                }
            }
            if steps >= config.max_iterations {
                break Termination::MaxIterations;
            }

            let mut accepted = None;
            for attempt in 0..2 {
                let dir = if attempt == 0 {
                    qn.direction(&grad)
                } else {
                    grad.iter().map(|g| -g).collect()
                };
                let slope: f64 = grad.iter().zip(&dir).map(|(a, b)| a * b).sum();
                if !(slope < 0.0) {
                    qn.reset();
                    continue;
                }
                let mut t = config.initial_step;
                for _ in 0..=config.max_backtracks {
                    let mut trial = psi.clone();
                    let seq = apply_generator_step(&mut trial, &self.basis, &dir, t)?;
                    let value = active.value(&trial, &self.op, p).unwrap_or(f64::INFINITY);
                    if value <= ev.value + config.armijo_c1 * t * slope {
                        accepted = Some((trial, seq, t, dir.clone()));
                        break;
                    }
                    t *= config.shrink;
                }
                if accepted.is_some() {
                    break;
                }
                if qn.is_fresh() {
                    break;
                }
                qn.reset();
            }
            let Some((trial, seq, t, dir)) = accepted else {
                break Termination::Stalled;
            };
            let last = iterations.last_mut().expect("pushed above");
            last.step = t;
            last.gadgets = seq.len();
            psi = trial;
            gadgets.extend(&seq);
            steps += 1;
            if in_fallback {
                fallback_iterations += 1;
            }
            if config.reset_memory_each_step {
                qn.reset();
            } else {
                pending = Some((dir.iter().map(|d| d * t).collect(), grad));
            }
        };

        let expectation = self.op.expectation(&psi).re;
        let energy = projected_energy(&psi, &self.op, p).unwrap_or(expectation);
        let acpse_norm = acpse_residual(&psi, &self.op, p, energy).ok().map(|r| r.norm);
        let label_info = classify(&psi, self.symmetry.as_ref());
        let record = RunRecord {
            guess: label.to_string(),
            strategy: strategy.to_string(),
            converged: termination == Termination::Converged,
            termination,
            energy,
            expectation,
            variance: variance(&psi, &self.op),
            acpse_norm,
            s2: label_info.s2,
            spin: label_info.spin_text(),
            irrep: label_info.irrep_text(),
            total_iterations: steps,
            outer_cycles,
            fallback_iterations,
            max_violation: max_overlap(&psi, p),
            gadget_count: gadgets.len(),
            duplicate_of: None,
            wall_time_s: clock.elapsed().as_secs_f64(),
            iterations,
        };
        log::info!(
            "{label}: {:?} after {steps} steps, E = {energy:.10}, var = {:.2e}",
            termination,
            record.variance
        );
        Ok(SingleRun {
            initial: initial.clone(),
            state: psi,
            gadgets,
            record,
        })
    }
}

/// max_α |⟨α|ψ⟩|²
pub fn max_overlap(psi: &StateVector, p: &ProjectionSet) -> f64 {
    overlaps(psi, p).iter().map(|o| o.norm_sqr()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::molint::Geometry;
    use crate::refstates::CsfSpec;
    use crate::sim::inner_product;
    use crate::solver::{starting_points, OptimizerConfig};

    fn h4_solver() -> Solver {
        let sys = MolecularSystem::from_geometry(Geometry::h4_rectangle(1.0, 1.5).unwrap(), "sto-3g").unwrap();
        Solver::for_system(&sys, OptimizerConfig::default()).unwrap()
    }

    #[test]
    fn h2_spectrum_is_exact() {
        let sys = MolecularSystem::from_geometry(Geometry::h2(0.74).unwrap(), "sto-3g").unwrap();
        let config = OptimizerConfig {
            residual_threshold: 1e-8,
            ..OptimizerConfig::default()
        };
        let solver = Solver::for_system(&sys, config).unwrap();
        let pool = solver.guesses(GuessKind::Csf).unwrap();
        let runs = solver
            .run_spectrum(&starting_points(&pool), 4, &ConstraintStrategy::default())
            .unwrap();
        assert_eq!(runs.len(), 4);
        for r in &runs {
            assert!(r.record.converged, "{:?}", r.record.termination);
            assert!(r.record.variance < 1e-10, "{}", r.record.variance);
        }
    }

    #[test]
    fn quintet_needs_no_steps() {
        let solver = h4_solver();
        let quintet = crate::refstates::prepare_csf(&"1111:++++".parse::<CsfSpec>().unwrap()).unwrap();
        let run = solver
            .run_single_state(
                "quintet",
                &quintet,
                &ProjectionSet::new(),
                &ConstraintStrategy::default(),
                &solver.config,
            )
            .unwrap();
        assert!(run.record.converged);
        assert_eq!(run.record.total_iterations, 0);
        assert!(run.record.variance < 1e-12);
    }

    #[test]
    fn gadget_history_replays() {
        let solver = h4_solver();
        let pool = solver.guesses(GuessKind::Sd).unwrap();
        let run = solver
            .run_single_state(
                "rhf",
                &pool[0].state,
                &ProjectionSet::new(),
                &ConstraintStrategy::default(),
                &solver.config,
            )
            .unwrap();
        assert!(run.record.converged);
        let replay = run.gadgets.run(&run.initial);
        assert!((inner_product(&replay, &run.state).norm() - 1.0).abs() < 1e-10);
        let iters = &run.record.iterations;
        for w in iters.windows(2) {
            assert!(w[1].merit <= w[0].merit + 1e-14);
        }
    }

    #[test]
    fn zero_budget_reports_guess_energy() {
        let solver = h4_solver();
        let pool = solver.guesses(GuessKind::Csf).unwrap();
        let config = OptimizerConfig {
            max_iterations: 0,
            ..OptimizerConfig::prescan()
        };
        let ranked = solver
            .cqe_plus_prescan(&starting_points(&pool), 6, &ConstraintStrategy::default(), &config)
            .unwrap();
        assert_eq!(ranked.len(), 12);
        for (i, e) in ranked.iter().enumerate() {
            assert_eq!(e.pool_index, i);
            assert!((e.energy - pool[i].energy).abs() < 1e-10);
        }
    }
}
