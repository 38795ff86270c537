//! Molecular integrals for hydrogen geometries: STO-3G integrals, closed-shell
//! SCF, the spin-orbital Hamiltonian, and FCIDUMP interchange.

mod basis;
mod boys;
mod fcidump;
mod geometry;
mod integrals;
mod scf;
mod spin_orbital;

pub use basis::{BasisSet, ContractedGaussian};
pub use boys::boys_f0;
pub use fcidump::{read_fcidump, write_fcidump, Fcidump, FcidumpHeader};
pub use geometry::{nuclear_charge, Atom, Geometry, ANGSTROM_TO_BOHR};
pub use integrals::{
    basis_functions, build_integrals, electron_repulsion_integral, kinetic_integral,
    nuclear_attraction_integral, overlap_integral, Eri, IntegralSet,
};
pub use scf::{density_matrix, electronic_energy, fock_matrix, rhf, rhf_with, RhfSolution, ScfOptions};
pub use spin_orbital::{spin_orbital, to_spin_orbitals, transform_eri, SpinOrbitalHamiltonian};

use nalgebra::DMatrix;

use crate::error::Result;

/// Everything downstream modules need for one geometry.
#[derive(Debug, Clone)]
pub struct MolecularSystem {
    pub geometry: Geometry,
    pub integrals: IntegralSet,
    pub scf: RhfSolution,
    pub hamiltonian: SpinOrbitalHamiltonian,
    pub n_electrons: usize,
}

impl MolecularSystem {
    pub fn from_geometry(geometry: Geometry, basis: &str) -> Result<Self> {
        let integrals = build_integrals(&geometry, basis)?;
        let n_electrons = geometry.n_electrons();
        let scf = rhf(&integrals, n_electrons)?;
        let hamiltonian = to_spin_orbitals(&integrals, &scf.mo_coeffs)?;
        Ok(Self {
            geometry,
            integrals,
            scf,
            hamiltonian,
            n_electrons,
        })
    }

    /// MO-basis integrals ready for FCIDUMP export.
    pub fn mo_fcidump(&self) -> Fcidump {
        let c = &self.scf.mo_coeffs;
        let n = c.ncols();
        let mo = IntegralSet {
            overlap: DMatrix::identity(n, n),
            hcore: c.transpose() * &self.integrals.hcore * c,
            eri: transform_eri(&self.integrals.eri, c),
            enuc: self.integrals.enuc,
        };
        let mut dump = Fcidump::new(mo, self.n_electrons, 0);
        dump.orbital_energies = self.scf.orbital_energies.iter().map(|&e| Some(e)).collect();
        dump
    }
}

/// Spin-orbital Hamiltonian from MO integrals read from an FCIDUMP file.
pub fn hamiltonian_from_fcidump(dump: &Fcidump) -> Result<SpinOrbitalHamiltonian> {
    let n = dump.header.norb;
    to_spin_orbitals(&dump.integrals, &DMatrix::identity(n, n))
}
