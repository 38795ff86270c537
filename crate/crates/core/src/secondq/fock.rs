//! Direct action of fermionic ladder strings on occupation-number basis
//! states. Basis index bit `p` is the occupation of spin orbital `p`; the
//! state `|x⟩` is the ascending product a†_{p1} a†_{p2} … |vac⟩ with
//! p1 < p2 < …, so annihilating `q` picks up (−1) per occupied orbital
//! below `q`.

use num_complex::Complex64;

use super::jw::{jw_product, Ladder};
use super::pauli::PauliSum;
use crate::error::Result;

/// Applies a single ladder operator to a basis index.
#[inline]
pub fn apply_ladder(bits: u64, op: Ladder, p: usize) -> Option<(f64, u64)> {
    let mask = 1u64 << p;
    let occupied = bits & mask != 0;
    let sign = if (bits & (mask - 1)).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
    match (op, occupied) {
        (Ladder::Create, false) => Some((sign, bits | mask)),
        (Ladder::Annihilate, true) => Some((sign, bits & !mask)),
        _ => None,
    }
}

/// Applies an operator product written left to right (the rightmost factor
/// acts first).
pub fn apply_string(bits: u64, ops: &[(Ladder, usize)]) -> Option<(f64, u64)> {
    let mut sign = 1.0;
    let mut state = bits;
    for &(op, p) in ops.iter().rev() {
        let (s, next) = apply_ladder(state, op, p)?;
        sign *= s;
        state = next;
    }
    Some((sign, state))
}

/// Linear combination of ladder-operator products.
#[derive(Debug, Clone, Default)]
pub struct FermionOperator {
    pub terms: Vec<(Complex64, Vec<(Ladder, usize)>)>,
}

impl FermionOperator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, coeff: Complex64, ops: Vec<(Ladder, usize)>) {
        self.terms.push((coeff, ops));
    }

    /// `O|bits⟩` as (amplitude, basis index) pairs, possibly repeated.
    pub fn apply_basis(&self, bits: u64) -> impl Iterator<Item = (Complex64, u64)> + '_ {
        self.terms
            .iter()
            .filter_map(move |(c, ops)| apply_string(bits, ops).map(|(s, out)| (c * s, out)))
    }

    /// Applies the operator to an amplitude vector over `2^n` basis states.
    pub fn apply(&self, amps: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::default(); amps.len()];
        for (x, &a) in amps.iter().enumerate() {
            if a == Complex64::default() {
                continue;
            }
            for (c, y) in self.apply_basis(x as u64) {
                out[y as usize] += c * a;
            }
        }
        out
    }

    pub fn to_pauli(&self, n: usize) -> Result<PauliSum> {
        let mut sum = PauliSum::zero(n);
        for (c, ops) in &self.terms {
            sum.add_scaled(&jw_product(ops, n)?, *c);
        }
        Ok(sum)
    }
}

/// Σ_p n̂_p
pub fn number_operator(n: usize) -> FermionOperator {
    let mut op = FermionOperator::new();
    for p in 0..n {
        op.push(Complex64::new(1.0, 0.0), vec![(Ladder::Create, p), (Ladder::Annihilate, p)]);
    }
    op
}

/// Ŝz = ½ Σ_p (n̂_{pα} − n̂_{pβ}) over interleaved spin orbitals.
pub fn sz_operator(n: usize) -> FermionOperator {
    let mut op = FermionOperator::new();
    for p in 0..n {
        let w = if p % 2 == 0 { 0.5 } else { -0.5 };
        op.push(Complex64::new(w, 0.0), vec![(Ladder::Create, p), (Ladder::Annihilate, p)]);
    }
    op
}

/// Ŝ² = Ŝ₊Ŝ₋ + Ŝz² − Ŝz expanded into ladder products.
pub fn s_squared_operator(n: usize) -> FermionOperator {
    use Ladder::{Annihilate as A, Create as C};
    let r = n / 2;
    let one = Complex64::new(1.0, 0.0);
    let mut op = FermionOperator::new();
    // Ŝ₊Ŝ₋ = Σ_pq a†_{pα} a_{pβ} a†_{qβ} a_{qα}
    for p in 0..r {
        for q in 0..r {
            op.push(one, vec![(C, 2 * p), (A, 2 * p + 1), (C, 2 * q + 1), (A, 2 * q)]);
        }
    }
    let sz = sz_operator(n);
    for (ca, a) in &sz.terms {
        for (cb, b) in &sz.terms {
            let mut ops = a.clone();
            ops.extend_from_slice(b);
            op.push(ca * cb, ops);
        }
        op.push(-ca, a.clone());
    }
    op
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn annihilation_sign_counts_lower_occupations() {
        // |x⟩ with orbitals 0, 2, 3 occupied; a_3 passes two occupied orbitals.
        let x = 0b1101;
        assert_eq!(apply_ladder(x, Ladder::Annihilate, 3), Some((1.0, 0b0101)));
        assert_eq!(apply_ladder(x, Ladder::Annihilate, 2), Some((-1.0, 0b1001)));
        assert_eq!(apply_ladder(x, Ladder::Annihilate, 0), Some((1.0, 0b1100)));
        assert_eq!(apply_ladder(x, Ladder::Create, 0), None);
        assert_eq!(apply_ladder(x, Ladder::Annihilate, 1), None);
    }

    #[test]
    fn s_squared_of_simple_states() {
        let s2 = s_squared_operator(4);
        let expect = |bits: u64| -> f64 {
            s2.apply_basis(bits)
                .filter(|(_, y)| *y == bits)
                .map(|(c, _)| c.re)
                .sum()
        };
        // Closed shell, then two parallel α spins (triplet M=1).
        assert!((expect(0b0011)).abs() < 1e-14);
        assert!((expect(0b0101) - 2.0).abs() < 1e-14);
        // Single α electron: S(S+1) = 3/4.
        assert!((expect(0b0001) - 0.75).abs() < 1e-14);
    }
}
