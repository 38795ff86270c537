//! Exact diagonalisation of a fixed (N_α, N_β) sector with spin and D2h
//! labels.

mod sector;
mod solve;
mod symmetry;

pub use sector::{combinations, enumerate_sector, sector_hamiltonian, slater_condon, SectorBasis};
pub use solve::{fci_solve, FciSolution};
pub use symmetry::{
    classify, s2_sector_matrix, spectrum_csv, spin_from_s2, symmetry_adapt, D2hSymmetry, Irrep, SymmetryLabel,
    SymmetryTable,
};

use nalgebra::DMatrix;

use crate::error::Result;
use crate::molint::MolecularSystem;
use crate::sim::StateVector;

/// Eigenvalues within this window are treated as one multiplet.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Everything the oracle knows about one geometry.
#[derive(Debug, Clone)]
pub struct FciSpectrum {
    pub basis: SectorBasis,
    pub matrix: DMatrix<f64>,
    pub solution: FciSolution,
    pub symmetry: Option<D2hSymmetry>,
    pub labels: Vec<SymmetryLabel>,
}

impl FciSpectrum {
    /// Sz = 0 sector (or the closest, for odd electron counts).
    pub fn for_system(system: &MolecularSystem) -> Result<Self> {
        let n_beta = system.n_electrons / 2;
        let n_alpha = system.n_electrons - n_beta;
        let basis = enumerate_sector(system.hamiltonian.n_spatial(), n_alpha, n_beta)?;
        let matrix = sector_hamiltonian(&system.hamiltonian, &basis);
        let symmetry = match D2hSymmetry::from_orbitals(
            &system.geometry,
            &system.scf.mo_coeffs,
            &system.integrals.overlap,
        ) {
            Ok(s) => Some(s),
            Err(e) => {
                log::info!("no D2h labels: {e}");
                None
            }
        };
        let raw = fci_solve(&matrix);
        let solution = symmetry_adapt(&raw, &basis, symmetry.as_ref(), DEGENERACY_TOL);
        let mut labels = Vec::with_capacity(solution.len());
        for k in 0..solution.len() {
            labels.push(classify(&basis.embed(&solution.vector(k))?, symmetry.as_ref()));
        }
        Ok(Self {
            basis,
            matrix,
            solution,
            symmetry,
            labels,
        })
    }

    pub fn energies(&self) -> &[f64] {
        &self.solution.energies
    }

    pub fn state(&self, k: usize) -> Result<StateVector> {
        self.basis.embed(&self.solution.vector(k))
    }

    pub fn table(&self) -> SymmetryTable {
        SymmetryTable::from_labels(&self.labels)
    }

    pub fn csv(&self) -> String {
        spectrum_csv(self.energies(), &self.labels)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.matrix.norm()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::molint::Geometry;

    #[test]
    fn h4_rectangle_table() {
        let sys = MolecularSystem::from_geometry(Geometry::h4_rectangle(1.0, 1.5).unwrap(), "sto-3g").unwrap();
        let spec = FciSpectrum::for_system(&sys).unwrap();
        assert_eq!(spec.basis.dim(), 36);
        let t = spec.table();
        assert_eq!(t.unlabelled, 0);
        assert_eq!([t.count(Irrep::A1g, 0), t.count(Irrep::A1g, 1), t.count(Irrep::A1g, 2)], [8, 3, 1]);
        for g in [Irrep::B1g, Irrep::B2u, Irrep::B3u] {
            assert_eq!([t.count(g, 0), t.count(g, 1), t.count(g, 2)], [4, 4, 0]);
        }
        assert!(spec.energies()[0] < sys.scf.energy);
        assert!(spec.solution.max_residual(&spec.matrix) < 1e-10);
    }
}
