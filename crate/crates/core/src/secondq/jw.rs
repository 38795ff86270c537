//! Jordan–Wigner encoding: a†_p = ½(X_p − iY_p) Z_{p−1}…Z_0.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::pauli::{Pauli, PauliSum, PauliWord};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ladder {
    Create,
    Annihilate,
}

pub fn jw_fermion_op(op: Ladder, p: usize, n: usize) -> Result<PauliSum> {
    if p >= n {
        return Err(Error::IndexOutOfRange { index: p, size: n });
    }
    let mut z_string = PauliWord::identity();
    for q in 0..p {
        z_string = z_string.with(q, Pauli::Z);
    }
    let y_coeff = match op {
        Ladder::Create => Complex64::new(0.0, -0.5),
        Ladder::Annihilate => Complex64::new(0.0, 0.5),
    };
    let mut sum = PauliSum::zero(n);
    sum.add_term(z_string.with(p, Pauli::X), Complex64::new(0.5, 0.0));
    sum.add_term(z_string.with(p, Pauli::Y), y_coeff);
    Ok(sum)
}

/// Product of ladder operators, leftmost factor first.
pub fn jw_product(ops: &[(Ladder, usize)], n: usize) -> Result<PauliSum> {
    let mut acc = PauliSum::identity(n, Complex64::new(1.0, 0.0));
    for &(op, p) in ops {
        acc = acc.mul(&jw_fermion_op(op, p, n)?);
        if acc.is_empty() {
            break;
        }
    }
    Ok(acc)
}

/// Γ(i,k,l,j) = a†_i a†_k a_l a_j
pub fn gamma_op(i: usize, k: usize, l: usize, j: usize, n: usize) -> Result<PauliSum> {
    jw_product(
        &[
            (Ladder::Create, i),
            (Ladder::Create, k),
            (Ladder::Annihilate, l),
            (Ladder::Annihilate, j),
        ],
        n,
    )
}
