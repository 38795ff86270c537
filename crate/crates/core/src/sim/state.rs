use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::secondq::PauliWord;

/// Tolerance on the unit-norm invariant.
pub const NORM_TOL: f64 = 1e-10;

/// Normalized amplitudes over `2^n` computational basis states; bit `q` of
/// the index is the state of qubit `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn basis(n_qubits: usize, index: u64) -> Self {
        assert!(n_qubits < 31, "statevector too large");
        let mut amps = vec![Complex64::default(); 1 << n_qubits];
        amps[index as usize] = Complex64::new(1.0, 0.0);
        Self { n_qubits, amps }
    }

    pub fn from_amplitudes(n_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 1 << n_qubits {
            return Err(Error::Dimension(format!(
                "{} amplitudes for {n_qubits} qubits",
                amps.len()
            )));
        }
        let s = Self { n_qubits, amps };
        let norm = s.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Dimension(format!("state norm {norm} is not 1")));
        }
        Ok(s)
    }

    /// Builds a state from arbitrary amplitudes and rescales to unit norm.
    pub fn normalized(n_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 1 << n_qubits {
            return Err(Error::Dimension(format!(
                "{} amplitudes for {n_qubits} qubits",
                amps.len()
            )));
        }
        let mut s = Self { n_qubits, amps };
        s.renormalize();
        Ok(s)
    }

    /// Explicit renormalization; returns the norm before rescaling.
    pub fn renormalize(&mut self) -> f64 {
        let norm = self.norm();
        if (norm - 1.0).abs() > 1e-14 {
            log::debug!("renormalizing statevector with norm {norm:.3e}");
        }
        if norm > 0.0 {
            for a in &mut self.amps {
                *a /= norm;
            }
        }
        norm
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Multiplies by a global phase so the largest amplitude is real positive.
    pub fn fix_phase(&mut self) {
        let (_, pivot) = self
            .amps
            .iter()
            .enumerate()
            .fold((0.0, Complex64::new(1.0, 0.0)), |(m, p), (_, a)| {
                if a.norm() > m + 1e-12 {
                    (a.norm(), *a)
                } else {
                    (m, p)
                }
            });
        let phase = pivot.conj() / pivot.norm();
        for a in &mut self.amps {
            *a *= phase;
        }
    }
}

/// ⟨a|b⟩
pub fn inner_product(a: &StateVector, b: &StateVector) -> Complex64 {
    assert_eq!(a.n_qubits, b.n_qubits, "qubit count mismatch");
    a.amps.iter().zip(&b.amps).map(|(x, y)| x.conj() * y).sum()
}

/// Phase factor of `P|x⟩ = phase(x) |x ⊕ flip⟩`.
#[inline]
pub(crate) fn word_phase(y_phase: Complex64, sign_mask: u64, x: usize) -> Complex64 {
    if (x as u64 & sign_mask).count_ones() % 2 == 0 {
        y_phase
    } else {
        -y_phase
    }
}

#[inline]
pub(crate) fn y_phase(word: &PauliWord) -> Complex64 {
    match word.y_count() % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// `state ← exp(i·angle·P)·state` by direct amplitude-pair updates.
pub fn apply_gadget(state: &mut StateVector, word: &PauliWord, angle: f64) {
    if angle == 0.0 {
        return;
    }
    debug_assert!(word.support_max().map_or(true, |q| q < state.n_qubits));
    let flip = word.flip_mask() as usize;
    let sign_mask = word.phase_mask();
    let yp = y_phase(word);
    let (s, c) = angle.sin_cos();
    let is = Complex64::new(0.0, s);
    let amps = &mut state.amps;
    if flip == 0 {
        for (x, a) in amps.iter_mut().enumerate() {
            *a *= c + is * word_phase(yp, sign_mask, x);
        }
        return;
    }
    let top = 1usize << (usize::BITS - 1 - flip.leading_zeros());
    for x in 0..amps.len() {
        if x & top != 0 {
            continue;
        }
        let y = x ^ flip;
        let (ax, ay) = (amps[x], amps[y]);
        // P|x⟩ = ph(x)|y⟩ and P|y⟩ = ph(y)|x⟩
        amps[y] = ay * c + is * word_phase(yp, sign_mask, x) * ax;
        amps[x] = ax * c + is * word_phase(yp, sign_mask, y) * ay;
    }
}

/// `P|ψ⟩` for a single Pauli word.
pub fn apply_word(state: &StateVector, word: &PauliWord) -> Vec<Complex64> {
    let flip = word.flip_mask() as usize;
    let sign_mask = word.phase_mask();
    let yp = y_phase(word);
    let mut out = vec![Complex64::default(); state.dim()];
    for (x, a) in state.amps.iter().enumerate() {
        out[x ^ flip] = word_phase(yp, sign_mask, x) * a;
    }
    out
}
