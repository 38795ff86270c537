use num_complex::Complex64;

use super::state::{apply_gadget, StateVector};
use crate::error::{Error, Result};
use crate::secondq::{two_body_to_pauli, GeneratorBasis, Hermiticity, PauliSum, PauliWord, TwoBodyCoefficients};

/// Ordered list of gadgets exp(iθP); order matters for non-commuting words.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GadgetSequence {
    pub n_qubits: usize,
    pub gadgets: Vec<(PauliWord, f64)>,
}

impl GadgetSequence {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            gadgets: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.gadgets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gadgets.is_empty()
    }

    pub fn push(&mut self, word: PauliWord, angle: f64) {
        assert!(angle.is_finite(), "gadget angle must be finite");
        self.gadgets.push((word, angle));
    }

    pub fn extend(&mut self, other: &GadgetSequence) {
        assert_eq!(self.n_qubits, other.n_qubits);
        self.gadgets.extend_from_slice(&other.gadgets);
    }

    pub fn apply(&self, state: &mut StateVector) {
        assert_eq!(state.n_qubits(), self.n_qubits, "qubit count mismatch");
        for (w, theta) in &self.gadgets {
            apply_gadget(state, w, *theta);
        }
    }

    /// Fresh copy of `init` with the sequence applied.
    pub fn run(&self, init: &StateVector) -> StateVector {
        let mut s = init.clone();
        self.apply(&mut s);
        s
    }
}

/// First-order Trotter product of exp(ε·Â) for an anti-Hermitian Pauli sum
/// Â = Σ iθ_P P, applied in canonical term order.
pub fn apply_pauli_step(state: &mut StateVector, op: &PauliSum, epsilon: f64) -> Result<GadgetSequence> {
    if !op.is_anti_hermitian(1e-12) {
        return Err(Error::NotAntiHermitian(op.max_real()));
    }
    let mut seq = GadgetSequence::new(op.n_qubits());
    for (w, c) in op.iter() {
        let angle = epsilon * c.im;
        if angle != 0.0 {
            seq.push(*w, angle);
        }
    }
    seq.apply(state);
    Ok(seq)
}

/// Trotterized `exp(ε·Â)` for a two-body anti-Hermitian coefficient tensor.
pub fn apply_two_body_step(
    state: &mut StateVector,
    a: &TwoBodyCoefficients,
    epsilon: f64,
) -> Result<GadgetSequence> {
    if a.hermiticity != Hermiticity::AntiHermitian {
        let d = a.anti_hermiticity_defect();
        if d > 1e-12 {
            return Err(Error::NotAntiHermitian(d));
        }
    }
    let op = two_body_to_pauli(a)?;
    apply_pauli_step(state, &op, epsilon)
}

/// Product over generators (basis order) of exp(ε x_g G_g). Each factor is
/// exact because the words of one generator commute, so particle number and
/// Sz are conserved exactly; the splitting error is between generators only.
pub fn apply_generator_step(
    state: &mut StateVector,
    basis: &GeneratorBasis,
    params: &[f64],
    epsilon: f64,
) -> Result<GadgetSequence> {
    if params.len() != basis.len() {
        return Err(Error::Dimension(format!("{} parameters for {} generators", params.len(), basis.len())));
    }
    let mut seq = GadgetSequence::new(state.n_qubits());
    for (p, &x) in basis.paulis().iter().zip(params) {
        if x == 0.0 {
            continue;
        }
        for (w, c) in p.iter() {
            let angle = epsilon * x * c.im;
            if angle != 0.0 {
                seq.push(*w, angle);
            }
        }
    }
    seq.apply(state);
    Ok(seq)
}

/// Dense exp(M)·v for small dense matrices by scaling and squaring of a
/// Taylor series (used for diagnostics; the optimizer never needs it).
pub fn dense_expm_apply(m: &[Complex64], dim: usize, v: &[Complex64]) -> Vec<Complex64> {
    let norm: f64 = (0..dim)
        .map(|r| (0..dim).map(|c| m[r * dim + c].norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scale = 0.5f64.powi(squarings as i32);
    let mut out = v.to_vec();
    for _ in 0..(1u64 << squarings) {
        let mut term = out.clone();
        let mut acc = out.clone();
        for k in 1..30 {
            let next: Vec<Complex64> = (0..dim)
                .map(|r| (0..dim).map(|c| m[r * dim + c] * term[c]).sum::<Complex64>() * (scale / k as f64))
                .collect();
            let small = next.iter().map(|x| x.norm()).fold(0.0, f64::max) < 1e-18;
            for (a, b) in acc.iter_mut().zip(&next) {
                *a += b;
            }
            term = next;
            if small {
                break;
            }
        }
        out = acc;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_tensor_is_identity_step() {
        let mut s = StateVector::basis(4, 0b0011);
        let before = s.clone();
        let a = TwoBodyCoefficients::zeros(4, Hermiticity::AntiHermitian);
        let seq = apply_two_body_step(&mut s, &a, 0.3).unwrap();
        assert!(seq.is_empty());
        assert_eq!(s, before);
    }

    #[test]
    fn general_tensor_rejected() {
        let mut s = StateVector::basis(4, 0b0011);
        let mut a = TwoBodyCoefficients::zeros(4, Hermiticity::General);
        a.set(0, 1, 2, 3, Complex64::new(1.0, 0.0));
        assert!(apply_two_body_step(&mut s, &a, 0.1).is_err());
    }

    #[test]
    fn expm_of_rotation_generator() {
        // exp(θ[[0,-1],[1,0]]) e0 = (cos θ, sin θ)
        let m = [Complex64::new(0.0, 0.0), Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]
            .map(|x| x * 2.0);
        let out = dense_expm_apply(&m, 2, &[Complex64::new(1.0, 0.0), Complex64::default()]);
        assert!((out[0].re - 2f64.cos()).abs() < 1e-13);
        assert!((out[1].re - 2f64.sin()).abs() < 1e-13);
    }

    #[test]
    fn generator_step_conserves_number_and_sz() {
        use crate::secondq::{number_operator, sz_operator};
        use crate::sim::fermion_expectation;
        let basis = GeneratorBasis::new(8).unwrap();
        let params: Vec<f64> = (0..basis.len()).map(|i| ((i * 37 % 11) as f64 - 5.0) * 0.07).collect();
        let mut s = StateVector::basis(8, 0b0000_1111);
        apply_generator_step(&mut s, &basis, &params, 0.9).unwrap();
        for (idx, a) in s.amplitudes().iter().enumerate() {
            if a.norm() > 1e-14 {
                let alpha = (idx & 0x55).count_ones();
                let beta = (idx & 0xAA).count_ones();
                assert_eq!((alpha, beta), (2, 2));
            }
        }
        assert!((fermion_expectation(&s, &number_operator(8)).re - 4.0).abs() < 1e-12);
        assert!(fermion_expectation(&s, &sz_operator(8)).re.abs() < 1e-12);
    }

    #[test]
    fn single_generator_factor_is_exact() {
        let basis = GeneratorBasis::new(4).unwrap();
        for g in 0..basis.len() {
            let mut params = vec![0.0; basis.len()];
            params[g] = 0.8;
            let mut s = StateVector::basis(4, 0b0101);
            apply_generator_step(&mut s, &basis, &params, 1.0).unwrap();
            let dense = basis.to_pauli(&params).to_dense();
            let reference = dense_expm_apply(&dense, 16, StateVector::basis(4, 0b0101).amplitudes());
            for (a, b) in s.amplitudes().iter().zip(&reference) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }
}
