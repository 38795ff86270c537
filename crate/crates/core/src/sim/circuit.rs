//! Ancilla-controlled pair circuits for overlaps and transition matrix
//! elements. The ancilla is the most significant qubit (index n). The branch
//! state is |Ψ⟩ = (|0⟩|ψ^k⟩ + |1⟩|ψ^j⟩)/√2 and each branch gadget uses
//! exp(iθ|0⟩⟨0|⊗P) = exp(iθ/2 I⊗P)·exp(iθ/2 Z⊗P) (mirrored sign on Z for
//! the |1⟩ branch). Reading out the ancilla gives
//! ⟨ψ^j|O|ψ^k⟩ = ⟨X⊗O⟩ − i⟨Y⊗O⟩.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::gadgets::GadgetSequence;
use super::operator::CompiledOperator;
use super::state::{apply_gadget, StateVector};
use crate::error::{Error, Result};
use crate::secondq::{gamma_op, Pauli, PauliSum};

pub fn controlled_pair_circuit(
    seq_k: &GadgetSequence,
    init_k: &StateVector,
    seq_j: &GadgetSequence,
    init_j: &StateVector,
) -> Result<StateVector> {
    let n = init_k.n_qubits();
    if init_j.n_qubits() != n || seq_k.n_qubits != n || seq_j.n_qubits != n {
        return Err(Error::Dimension(format!(
            "branch registers disagree: init {n}/{}, sequences {}/{}",
            init_j.n_qubits(),
            seq_k.n_qubits,
            seq_j.n_qubits
        )));
    }
    let dim = 1usize << n;
    let mut amps = vec![Complex64::default(); 2 * dim];
    for (x, a) in init_k.amplitudes().iter().enumerate() {
        amps[x] = a * FRAC_1_SQRT_2;
    }
    for (x, a) in init_j.amplitudes().iter().enumerate() {
        amps[dim + x] = a * FRAC_1_SQRT_2;
    }
    let mut state = StateVector::from_amplitudes(n + 1, amps)?;

    let steps = seq_k.len().max(seq_j.len());
    for g in 0..steps {
        if let Some((w, theta)) = seq_k.gadgets.get(g) {
            apply_gadget(&mut state, w, theta / 2.0);
            apply_gadget(&mut state, &w.with(n, Pauli::Z), theta / 2.0);
        }
        if let Some((w, theta)) = seq_j.gadgets.get(g) {
            apply_gadget(&mut state, w, theta / 2.0);
            apply_gadget(&mut state, &w.with(n, Pauli::Z), -theta / 2.0);
        }
    }
    Ok(state)
}

/// ⟨ψ^j|O|ψ^k⟩ from the ancilla-extended expectations of X⊗O and Y⊗O.
pub fn ancilla_readout(state: &StateVector, op: &PauliSum) -> Result<Complex64> {
    let n = state.n_qubits() - 1;
    if op.n_qubits() != n {
        return Err(Error::Dimension(format!("operator on {} qubits, register {n}", op.n_qubits())));
    }
    let x = CompiledOperator::new(&op.extended(n + 1, &[(n, Pauli::X)])).expectation(state);
    let y = CompiledOperator::new(&op.extended(n + 1, &[(n, Pauli::Y)])).expectation(state);
    Ok(x - Complex64::i() * y)
}

/// ⟨ψ^j|ψ^k⟩ through the controlled-pair circuit.
pub fn controlled_pair_overlap(
    seq_k: &GadgetSequence,
    init_k: &StateVector,
    seq_j: &GadgetSequence,
    init_j: &StateVector,
) -> Result<Complex64> {
    let state = controlled_pair_circuit(seq_k, init_k, seq_j, init_j)?;
    let n = init_k.n_qubits();
    ancilla_readout(&state, &PauliSum::identity(n, Complex64::new(1.0, 0.0)))
}

/// ⟨ψ^j|Γ(i,k,l,j)|ψ^k⟩ through the controlled-pair circuit.
pub fn controlled_pair_tdm(
    seq_k: &GadgetSequence,
    init_k: &StateVector,
    seq_j: &GadgetSequence,
    init_j: &StateVector,
    gamma: [usize; 4],
) -> Result<Complex64> {
    let state = controlled_pair_circuit(seq_k, init_k, seq_j, init_j)?;
    let n = init_k.n_qubits();
    let [i, k, l, j] = gamma;
    ancilla_readout(&state, &gamma_op(i, k, l, j, n)?)
}
