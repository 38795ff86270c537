//! Closed-shell Roothaan–Hall SCF with DIIS extrapolation.

use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::integrals::IntegralSet;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct ScfOptions {
    pub max_cycles: usize,
    pub diis_history: usize,
    /// Convergence on max |FDS − SDF|.
    pub commutator_tol: f64,
    /// Density mixing applied during the first `damping_cycles` cycles.
    pub damping: f64,
    pub damping_cycles: usize,
}

impl Default for ScfOptions {
    fn default() -> Self {
        Self {
            max_cycles: 200,
            diis_history: 8,
            commutator_tol: 1e-9,
            damping: 0.3,
            damping_cycles: 3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RhfSolution {
    /// Columns are S-orthonormal molecular orbitals, ascending in energy.
    pub mo_coeffs: DMatrix<f64>,
    pub orbital_energies: DVector<f64>,
    /// Total energy including nuclear repulsion.
    pub energy: f64,
    pub cycles: usize,
    pub commutator_norm: f64,
}

pub fn rhf(integrals: &IntegralSet, n_electrons: usize) -> Result<RhfSolution> {
    rhf_with(integrals, n_electrons, None, &ScfOptions::default())
}

/// SCF with an optional starting set of orbitals (core guess otherwise).
pub fn rhf_with(
    integrals: &IntegralSet,
    n_electrons: usize,
    guess: Option<&DMatrix<f64>>,
    opts: &ScfOptions,
) -> Result<RhfSolution> {
    let n = integrals.n_orbitals();
    if n_electrons % 2 != 0 || n_electrons > 2 * n {
        return Err(Error::ElectronCount {
            n_electrons,
            n_orbitals: n,
        });
    }
    let n_occ = n_electrons / 2;
    let s = &integrals.overlap;
    let h = &integrals.hcore;
    let x = inverse_sqrt(s);

    let mut coeffs = match guess {
        Some(c) => c.clone(),
        None => diagonalize(h, &x).1,
    };
    let mut density = density_matrix(&coeffs, n_occ);
    let mut diis: VecDeque<(DMatrix<f64>, DMatrix<f64>)> = VecDeque::new();
    let mut last_comm = f64::INFINITY;

    for cycle in 1..=opts.max_cycles {
        let fock = fock_matrix(integrals, &density);
        let comm = &fock * &density * s - s * &density * &fock;
        last_comm = comm.amax();
        if last_comm < opts.commutator_tol {
            let (eps, c) = diagonalize(&fock, &x);
            let density = density_matrix(&c, n_occ);
            let energy = electronic_energy(h, &fock_matrix(integrals, &density), &density) + integrals.enuc;
            return Ok(RhfSolution {
                mo_coeffs: c,
                orbital_energies: eps,
                energy,
                cycles: cycle,
                commutator_norm: last_comm,
            });
        }

        let err = x.transpose() * &comm * &x;
        diis.push_back((fock.clone(), err));
        if diis.len() > opts.diis_history {
            diis.pop_front();
        }
        let extrapolated = if diis.len() >= 2 {
            diis_extrapolate(&diis).unwrap_or(fock)
        } else {
            fock
        };

        let (_, c) = diagonalize(&extrapolated, &x);
        coeffs = c;
        let new_density = density_matrix(&coeffs, n_occ);
        density = if cycle <= opts.damping_cycles && opts.damping > 0.0 {
            &new_density * (1.0 - opts.damping) + &density * opts.damping
        } else {
            new_density
        };
    }
    Err(Error::ScfNotConverged {
        cycles: opts.max_cycles,
        commutator: last_comm,
    })
}

/// Spin-summed-per-spin density `D = C_occ C_occᵀ` (one electron per spin).
pub fn density_matrix(coeffs: &DMatrix<f64>, n_occ: usize) -> DMatrix<f64> {
    let occ = coeffs.columns(0, n_occ);
    &occ * occ.transpose()
}

pub fn fock_matrix(integrals: &IntegralSet, density: &DMatrix<f64>) -> DMatrix<f64> {
    let n = integrals.n_orbitals();
    let mut f = integrals.hcore.clone();
    for p in 0..n {
        for q in 0..n {
            let mut g = 0.0;
            for r in 0..n {
                for s in 0..n {
                    let d = density[(r, s)];
                    g += d * (2.0 * integrals.eri.get(p, q, r, s) - integrals.eri.get(p, r, q, s));
                }
            }
            f[(p, q)] += g;
        }
    }
    f
}

pub fn electronic_energy(h: &DMatrix<f64>, fock: &DMatrix<f64>, density: &DMatrix<f64>) -> f64 {
    density.component_mul(&(h + fock)).sum()
}

fn inverse_sqrt(s: &DMatrix<f64>) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(s.clone());
    let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|v| v.sqrt().recip()));
    &eig.eigenvectors * d * eig.eigenvectors.transpose()
}

/// Solves FC = SCε through the symmetric orthogonaliser `x`; eigenvalues
/// ascending, each column's largest-magnitude entry made positive.
fn diagonalize(f: &DMatrix<f64>, x: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let fp = x.transpose() * f * x;
    let eig = SymmetricEigen::new(fp);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let n = order.len();
    let mut c = DMatrix::zeros(x.nrows(), n);
    let mut eps = DVector::zeros(n);
    for (col, &k) in order.iter().enumerate() {
        let mut v = x * eig.eigenvectors.column(k);
        let pivot = v.iter().copied().fold(0.0f64, |m, e| if e.abs() > m.abs() + 1e-10 { e } else { m });
        if pivot < 0.0 {
            v.neg_mut();
        }
        c.set_column(col, &v);
        eps[col] = eig.eigenvalues[k];
    }
    (eps, c)
}

fn diis_extrapolate(history: &VecDeque<(DMatrix<f64>, DMatrix<f64>)>) -> Option<DMatrix<f64>> {
    let m = history.len();
    let mut b = DMatrix::zeros(m + 1, m + 1);
    let mut rhs = DVector::zeros(m + 1);
    for i in 0..m {
        for j in 0..m {
            b[(i, j)] = history[i].1.dot(&history[j].1);
        }
        b[(i, m)] = -1.0;
        b[(m, i)] = -1.0;
    }
    rhs[m] = -1.0;
    let weights = b.lu().solve(&rhs)?;
    if weights.iter().any(|w| !w.is_finite()) {
        return None;
    }
    let mut f = DMatrix::zeros(history[0].0.nrows(), history[0].0.ncols());
    for (i, (fock, _)) in history.iter().enumerate() {
        f += fock * weights[i];
    }
    Some(f)
}
