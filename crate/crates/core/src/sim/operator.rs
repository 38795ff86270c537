use num_complex::Complex64;

use super::state::{word_phase, y_phase, StateVector};
use crate::secondq::{FermionOperator, PauliSum};

/// A PauliSum compiled for repeated application: terms grouped by their
/// bit-flip mask, each carrying its sign mask and `c·i^{n_Y}`.
#[derive(Debug, Clone)]
pub struct CompiledOperator {
    n_qubits: usize,
    groups: Vec<(usize, Vec<(u64, Complex64)>)>,
}

impl CompiledOperator {
    pub fn new(op: &PauliSum) -> Self {
        let mut groups: Vec<(usize, Vec<(u64, Complex64)>)> = Vec::new();
        for (w, c) in op.iter() {
            let flip = w.flip_mask() as usize;
            let entry = (w.phase_mask(), c * y_phase(w));
            match groups.iter_mut().find(|(f, _)| *f == flip) {
                Some((_, terms)) => terms.push(entry),
                None => groups.push((flip, vec![entry])),
            }
        }
        Self {
            n_qubits: op.n_qubits(),
            groups,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// `O|ψ⟩` as raw amplitudes.
    pub fn apply(&self, amps: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(amps.len(), 1 << self.n_qubits, "dimension mismatch");
        let mut out = vec![Complex64::default(); amps.len()];
        for (flip, terms) in &self.groups {
            for (x, a) in amps.iter().enumerate() {
                if *a == Complex64::default() {
                    continue;
                }
                let mut coeff = Complex64::default();
                for &(sign_mask, c) in terms {
                    coeff += word_phase(c, sign_mask, x);
                }
                out[x ^ flip] += coeff * a;
            }
        }
        out
    }

    pub fn expectation(&self, state: &StateVector) -> Complex64 {
        let amps = state.amplitudes();
        dot(amps, &self.apply(amps))
    }

    /// ⟨a|O|b⟩
    pub fn matrix_element(&self, a: &StateVector, b: &StateVector) -> Complex64 {
        dot(a.amplitudes(), &self.apply(b.amplitudes()))
    }
}

/// Σ conj(a)·b over raw amplitude slices.
pub fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// ⟨ψ|O|ψ⟩
pub fn expectation(state: &StateVector, op: &PauliSum) -> Complex64 {
    assert_eq!(state.n_qubits(), op.n_qubits(), "qubit count mismatch");
    CompiledOperator::new(op).expectation(state)
}

/// ⟨ψ|O|ψ⟩ for an operator given in ladder form.
pub fn fermion_expectation(state: &StateVector, op: &FermionOperator) -> Complex64 {
    let amps = state.amplitudes();
    dot(amps, &op.apply(amps))
}
