//! Two-body transition density matrices by pair annihilation:
//! ⟨a|a†_i a†_k a_l a_j|b⟩ = ⟨a_k a_i a | a_l a_j b⟩.

use num_complex::Complex64;

use super::operator::dot;
use super::state::StateVector;
use crate::secondq::fock::apply_string;
use crate::secondq::{ordered_pairs, Hermiticity, Ladder, Pair, TwoBodyCoefficients};

/// `a_l a_j |ψ⟩` for every pair j<l, in [`ordered_pairs`] order.
pub fn pair_annihilated(amps: &[Complex64], n: usize) -> Vec<(Pair, Vec<Complex64>)> {
    ordered_pairs(n)
        .into_iter()
        .map(|(j, l)| {
            let ops = [(Ladder::Annihilate, l), (Ladder::Annihilate, j)];
            let mut out = vec![Complex64::default(); amps.len()];
            for (x, a) in amps.iter().enumerate() {
                if *a == Complex64::default() {
                    continue;
                }
                if let Some((s, y)) = apply_string(x as u64, &ops) {
                    out[y as usize] += a * s;
                }
            }
            ((j, l), out)
        })
        .collect()
}

/// T[i,k,j,l] = ⟨a|Γ(i,k,l,j)|b⟩ from precomputed pair annihilations.
pub fn transition_tensor_from_pairs(
    n: usize,
    pa: &[(Pair, Vec<Complex64>)],
    pb: &[(Pair, Vec<Complex64>)],
) -> TwoBodyCoefficients {
    let mut t = TwoBodyCoefficients::zeros(n, Hermiticity::General);
    for ((i, k), va) in pa {
        for ((j, l), vb) in pb {
            let v = dot(va, vb);
            if v != Complex64::default() {
                t.set(*i, *k, *j, *l, v);
            }
        }
    }
    t
}

/// Transition tensor T[i,k,j,l] = ⟨a|Γ(i,k,l,j)|b⟩.
pub fn transition_tensor(a: &StateVector, b: &StateVector) -> TwoBodyCoefficients {
    assert_eq!(a.n_qubits(), b.n_qubits(), "qubit count mismatch");
    let n = a.n_qubits();
    let pa = pair_annihilated(a.amplitudes(), n);
    let pb = if a == b { pa.clone() } else { pair_annihilated(b.amplitudes(), n) };
    transition_tensor_from_pairs(n, &pa, &pb)
}

/// 2-TDM with element access in Γ order, `D[i,k,l,j] = ⟨a|a†_i a†_k a_l a_j|b⟩`.
#[derive(Debug, Clone)]
pub struct TransitionRdm {
    inner: TwoBodyCoefficients,
}

impl TransitionRdm {
    pub fn get(&self, i: usize, k: usize, l: usize, j: usize) -> Complex64 {
        self.inner.get(i, k, j, l)
    }

    pub fn n(&self) -> usize {
        self.inner.n()
    }

    /// Σ_{ik} D[i,k,k,i]
    pub fn trace(&self) -> Complex64 {
        let n = self.n();
        (0..n).flat_map(|i| (0..n).map(move |k| (i, k))).map(|(i, k)| self.get(i, k, k, i)).sum()
    }

    pub fn as_coefficients(&self) -> &TwoBodyCoefficients {
        &self.inner
    }
}

pub fn transition_2rdm(a: &StateVector, b: &StateVector) -> TransitionRdm {
    TransitionRdm {
        inner: transition_tensor(a, b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_operator_case() {
        let s = StateVector::basis(4, 0b0011);
        let d = transition_2rdm(&s, &s);
        assert!((d.get(0, 1, 1, 0) - 1.0).norm() < 1e-15);
        assert!((d.get(1, 0, 1, 0) + 1.0).norm() < 1e-15);
        assert!((d.trace() - 2.0).norm() < 1e-15);
    }

    #[test]
    fn different_particle_numbers_decouple() {
        let a = StateVector::basis(4, 0b0011);
        let b = StateVector::basis(4, 0b0111);
        assert!(transition_tensor(&a, &b).max_abs() == 0.0);
    }
}
