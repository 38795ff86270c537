//! Second-quantized operators and their Jordan–Wigner images.

pub mod fock;
mod hamiltonian;
mod jw;
mod pauli;
mod two_body;

pub use fock::{number_operator, s_squared_operator, sz_operator, FermionOperator};
pub use hamiltonian::{assemble_hamiltonian, fermion_hamiltonian};
pub use jw::{gamma_op, jw_fermion_op, jw_product, Ladder};
pub use pauli::{Pauli, PauliSum, PauliWord, PRUNE_THRESHOLD};
pub use two_body::{
    ordered_pairs, two_body_to_pauli, Generator, GeneratorBasis, Hermiticity, Pair, TwoBodyCoefficients,
};
