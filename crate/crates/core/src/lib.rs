//! Excited-state contracted quantum eigensolver on an exact statevector
//! simulator.
//!
//! The crate is layered bottom-up:
//!
//! * [`molint`]: STO-3G integrals for hydrogen geometries, RHF, spin-orbital
//!   Hamiltonian, FCIDUMP.
//! * [`secondq`]: Pauli algebra and the Jordan–Wigner map of fermionic
//!   operators.
//! * [`sim`]: statevectors, Pauli gadgets, transition density matrices and the
//!   ancilla-controlled overlap circuits.
//! * [`fci`]: exact diagonalisation of the fixed-spin sector plus spin and
//!   D2h classification.
//! * [`residuals`]: projected energy, contracted residuals, variance.
//! * [`refstates`]: determinants, configuration state functions, guess pools.
//! * [`solver`]: constrained quasi-Newton optimisation and the k-state loop.
//! * [`harness`]: experiment drivers, reports, and the validation battery.

pub mod error;
pub mod fci;
pub mod harness;
pub mod molint;
pub mod refstates;
pub mod residuals;
pub mod secondq;
pub mod sim;
pub mod solver;

pub use error::{Error, Result};
