use num_complex::Complex64;

use super::fock::FermionOperator;
use super::jw::Ladder;
use super::pauli::PauliSum;
use crate::molint::SpinOrbitalHamiltonian;

/// Fermionic form of the Hamiltonian with the two-body part reduced to
/// p<r, q<s: Σ V2[p,r,q,s] a†_p a†_r a_s a_q.
pub fn fermion_hamiltonian(h: &SpinOrbitalHamiltonian) -> FermionOperator {
    use Ladder::{Annihilate as A, Create as C};
    let n = h.n_spin_orbitals();
    let mut op = FermionOperator::new();
    op.push(Complex64::new(h.enuc, 0.0), Vec::new());
    for p in 0..n {
        for q in 0..n {
            let v = h.k1(p, q);
            if v.abs() > 1e-15 {
                op.push(Complex64::new(v, 0.0), vec![(C, p), (A, q)]);
            }
        }
    }
    for p in 0..n {
        for r in p + 1..n {
            for q in 0..n {
                for s in q + 1..n {
                    let v = h.v2(p, r, q, s);
                    if v.abs() > 1e-15 {
                        op.push(Complex64::new(v, 0.0), vec![(C, p), (C, r), (A, s), (A, q)]);
                    }
                }
            }
        }
    }
    op
}

/// Qubit Hamiltonian under Jordan–Wigner, including `enuc` on the identity.
pub fn assemble_hamiltonian(h: &SpinOrbitalHamiltonian) -> PauliSum {
    let sum = fermion_hamiltonian(h)
        .to_pauli(h.n_spin_orbitals())
        .expect("indices bounded by construction");
    debug_assert!(sum.max_imag() < 1e-12);
    sum.real_part()
}
