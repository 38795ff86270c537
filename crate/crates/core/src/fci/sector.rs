use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::molint::SpinOrbitalHamiltonian;
use crate::secondq::fock::apply_string;
use crate::secondq::Ladder;
use crate::sim::StateVector;

/// Determinants with fixed (N_α, N_β) over `r` spatial orbitals. Each entry
/// is a spin-orbital occupation mask with α orbital p on bit 2p and β
/// orbital p on bit 2p+1. Ordering is lexicographic in (α string, β string),
/// each string enumerated in ascending combination order.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorBasis {
    pub n_spatial: usize,
    pub n_alpha: usize,
    pub n_beta: usize,
    dets: Vec<u64>,
    lookup: HashMap<u64, usize>,
}

/// All `k`-subsets of `0..r` as bit masks, in ascending combination order.
pub fn combinations(r: usize, k: usize) -> Vec<u64> {
    fn rec(start: usize, r: usize, k: usize, acc: u64, out: &mut Vec<u64>) {
        if k == 0 {
            out.push(acc);
            return;
        }
        for p in start..=r - k {
            rec(p + 1, r, k - 1, acc | (1 << p), out);
        }
    }
    let mut out = Vec::new();
    if k <= r {
        rec(0, r, k, 0, &mut out);
    }
    out
}

fn spread(string: u64, sigma: usize) -> u64 {
    let mut bits = 0;
    for p in 0..32 {
        if string >> p & 1 == 1 {
            bits |= 1 << (2 * p + sigma);
        }
    }
    bits
}

pub fn enumerate_sector(r: usize, n_alpha: usize, n_beta: usize) -> Result<SectorBasis> {
    if n_alpha > r || n_beta > r || r > 31 {
        return Err(Error::ElectronCount {
            n_electrons: n_alpha + n_beta,
            n_orbitals: r,
        });
    }
    let alphas = combinations(r, n_alpha);
    let betas = combinations(r, n_beta);
    let mut dets = Vec::with_capacity(alphas.len() * betas.len());
    for &a in &alphas {
        for &b in &betas {
            dets.push(spread(a, 0) | spread(b, 1));
        }
    }
    let lookup = dets.iter().enumerate().map(|(i, &d)| (d, i)).collect();
    Ok(SectorBasis {
        n_spatial: r,
        n_alpha,
        n_beta,
        dets,
        lookup,
    })
}

impl SectorBasis {
    pub fn dim(&self) -> usize {
        self.dets.len()
    }

    pub fn n_spin_orbitals(&self) -> usize {
        2 * self.n_spatial
    }

    pub fn determinants(&self) -> &[u64] {
        &self.dets
    }

    pub fn index_of(&self, det: u64) -> Option<usize> {
        self.lookup.get(&det).copied()
    }

    /// Sector coefficients as a full statevector over 2^(2r) basis states.
    pub fn embed(&self, coeffs: &DVector<f64>) -> Result<StateVector> {
        let mut amps = vec![Complex64::default(); 1 << self.n_spin_orbitals()];
        for (&d, &c) in self.dets.iter().zip(coeffs.iter()) {
            amps[d as usize] = Complex64::new(c, 0.0);
        }
        StateVector::normalized(self.n_spin_orbitals(), amps)
    }

    /// Complex sector components of a statevector (outside weight dropped).
    pub fn restrict(&self, state: &StateVector) -> Vec<Complex64> {
        self.dets.iter().map(|&d| state.amplitudes()[d as usize]).collect()
    }
}

/// Sector Hamiltonian by Slater–Condon rules.
pub fn sector_hamiltonian(h: &SpinOrbitalHamiltonian, basis: &SectorBasis) -> DMatrix<f64> {
    let dim = basis.dim();
    let dets = basis.determinants();
    let mut m = DMatrix::zeros(dim, dim);
    for (col, &dj) in dets.iter().enumerate() {
        for (row, &di) in dets.iter().enumerate().skip(col) {
            let v = slater_condon(h, di, dj);
            m[(row, col)] = v;
            m[(col, row)] = v;
        }
    }
    m
}

fn occupied(bits: u64) -> Vec<usize> {
    (0..64).filter(|&p| bits >> p & 1 == 1).collect()
}

/// ⟨I|H|J⟩ for determinants given as occupation masks.
pub fn slater_condon(h: &SpinOrbitalHamiltonian, di: u64, dj: u64) -> f64 {
    let diff = di ^ dj;
    match diff.count_ones() {
        0 => h.determinant_energy(&occupied(di)),
        2 => {
            let p = (di & !dj).trailing_zeros() as usize;
            let m = (dj & !di).trailing_zeros() as usize;
            let (sign, out) = apply_string(dj, &[(Ladder::Create, p), (Ladder::Annihilate, m)])
                .expect("single excitation is valid");
            debug_assert_eq!(out, di);
            let mut v = h.k1(p, m);
            for n in occupied(dj & di) {
                v += h.v2(p, n, m, n);
            }
            sign * v
        }
        4 => {
            let add = occupied(di & !dj);
            let rem = occupied(dj & !di);
            let (p, q) = (add[0], add[1]);
            let (m, n) = (rem[0], rem[1]);
            let ops = [
                (Ladder::Create, p),
                (Ladder::Create, q),
                (Ladder::Annihilate, n),
                (Ladder::Annihilate, m),
            ];
            let (sign, out) = apply_string(dj, &ops).expect("double excitation is valid");
            debug_assert_eq!(out, di);
            sign * h.v2(p, q, m, n)
        }
        _ => 0.0,
    }
}
