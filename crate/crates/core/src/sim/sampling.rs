//! Finite-shot estimator: each Pauli term's ±1 outcome count is drawn from a
//! binomial distribution with the exact success probability (1 + ⟨P⟩)/2.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use super::operator::CompiledOperator;
use super::state::StateVector;
use crate::secondq::PauliSum;

pub struct SampledEstimator {
    shots: u64,
    rng: ChaCha8Rng,
}

impl SampledEstimator {
    pub fn new(shots: u64, seed: u64) -> Self {
        assert!(shots > 0, "at least one shot per term");
        Self {
            shots,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Real part of ⟨O⟩ for a Hermitian sum, estimated term by term.
    pub fn estimate(&mut self, state: &StateVector, op: &PauliSum) -> f64 {
        let mut total = 0.0;
        for (w, c) in op.iter() {
            if w.is_identity() {
                total += c.re;
                continue;
            }
            let single = PauliSum::from_term(op.n_qubits(), *w, num_complex::Complex64::new(1.0, 0.0));
            let exact = CompiledOperator::new(&single).expectation(state).re.clamp(-1.0, 1.0);
            let p = 0.5 * (1.0 + exact);
            let plus = Binomial::new(self.shots, p).expect("probability in [0,1]").sample(&mut self.rng);
            let mean = (2.0 * plus as f64 - self.shots as f64) / self.shots as f64;
            total += c.re * mean;
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::secondq::{Pauli, PauliWord};
    use num_complex::Complex64;

    #[test]
    fn eigenstate_is_noise_free() {
        let s = StateVector::basis(2, 1);
        let z0 = PauliSum::from_term(2, PauliWord::single(0, Pauli::Z), Complex64::new(0.5, 0.0));
        let mut est = SampledEstimator::new(100, 3);
        assert_eq!(est.estimate(&s, &z0), -0.5);
    }

    #[test]
    fn converges_with_shots() {
        let mut s = StateVector::basis(1, 0);
        crate::sim::apply_gadget(&mut s, &PauliWord::single(0, Pauli::X), 0.4);
        let z = PauliSum::from_term(1, PauliWord::single(0, Pauli::Z), Complex64::new(1.0, 0.0));
        let exact = (0.8f64).cos();
        let mut est = SampledEstimator::new(1_000_000, 9);
        assert!((est.estimate(&s, &z) - exact).abs() < 5e-3);
    }
}
