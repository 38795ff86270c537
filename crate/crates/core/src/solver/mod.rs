//! Excited-state contracted eigensolver.
//!
//! Each state is optimised by a quasi-Newton method in the tangent space of
//! two-body unitaries exp(Ĵ). The search direction lives in the real
//! parameter space of [`crate::secondq::GeneratorBasis`]; after every
//! accepted step the linearisation point moves to the new state while the
//! curvature memory is kept. States found earlier enter through one of the
//! constraint strategies.

mod objective;
mod quasi_newton;
mod single;
mod spectrum;
mod strategy;

pub use objective::{directional_derivative, objective_and_gradient, Evaluation, MeritForm};
pub use quasi_newton::QuasiNewton;
pub use single::{max_overlap, IterationRecord, RunRecord, SingleRun, Solver, Termination};
pub use spectrum::{starting_points, PrescanEntry, PrescanMode, StartingPoint, DUPLICATE_OVERLAP};
pub use strategy::{ConstraintStrategy, OptimizerConfig, QuasiNewtonMethod};
