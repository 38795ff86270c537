//! Spin and D2h labels for sector states.
//!
//! Axis convention: the molecule lies in the xy-plane with its long side
//! along x. The three mirror planes σ(xy), σ(xz), σ(yz) generate D2h; each
//! irrep is fixed by its characters under them. Molecular orbitals must be
//! ±1 eigenfunctions of every mirror, so determinants pick up the product of
//! their occupied orbitals' characters.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::sector::SectorBasis;
use super::solve::{fix_sign, FciSolution};
use crate::error::{Error, Result};
use crate::molint::Geometry;
use crate::secondq::s_squared_operator;
use crate::sim::{fermion_expectation, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Irrep {
    A1g,
    B1g,
    B2g,
    B3g,
    Au,
    B1u,
    B2u,
    B3u,
}

impl Irrep {
    /// Characters under (σxy, σxz, σyz).
    pub fn characters(self) -> [i8; 3] {
        match self {
            Irrep::A1g => [1, 1, 1],
            Irrep::B1g => [1, -1, -1],
            Irrep::B2g => [-1, 1, -1],
            Irrep::B3g => [-1, -1, 1],
            Irrep::Au => [-1, -1, -1],
            Irrep::B1u => [-1, 1, 1],
            Irrep::B2u => [1, -1, 1],
            Irrep::B3u => [1, 1, -1],
        }
    }

    pub fn from_characters(chars: [i8; 3]) -> Self {
        Self::ALL
            .into_iter()
            .find(|g| g.characters() == chars)
            .expect("every sign triple is an irrep")
    }

    pub const ALL: [Irrep; 8] = [
        Irrep::A1g,
        Irrep::B1g,
        Irrep::B2g,
        Irrep::B3g,
        Irrep::Au,
        Irrep::B1u,
        Irrep::B2u,
        Irrep::B3u,
    ];

    pub fn product(self, other: Irrep) -> Irrep {
        let (a, b) = (self.characters(), other.characters());
        Irrep::from_characters([a[0] * b[0], a[1] * b[1], a[2] * b[2]])
    }
}

impl fmt::Display for Irrep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Per-orbital mirror characters for one geometry.
#[derive(Debug, Clone)]
pub struct D2hSymmetry {
    orbital_chars: Vec<[i8; 3]>,
}

const MIRRORS: [[f64; 3]; 3] = [[1.0, 1.0, -1.0], [1.0, -1.0, 1.0], [-1.0, 1.0, 1.0]];

impl D2hSymmetry {
    /// Requires one s function per atom, atoms mapped onto atoms by each
    /// mirror (within 1e-6 Å), and every MO a ±1 eigenfunction (1e-6).
    pub fn from_orbitals(geometry: &Geometry, mo_coeffs: &DMatrix<f64>, overlap: &DMatrix<f64>) -> Result<Self> {
        let n = geometry.atoms.len();
        if mo_coeffs.nrows() != n {
            return Err(Error::SymmetryUnavailable("expected one basis function per atom".into()));
        }
        let mut perms = Vec::new();
        for m in MIRRORS {
            let mut perm = vec![0; n];
            for (a, atom) in geometry.atoms.iter().enumerate() {
                let image = [atom.position[0] * m[0], atom.position[1] * m[1], atom.position[2] * m[2]];
                let b = geometry
                    .atoms
                    .iter()
                    .position(|other| {
                        other.symbol == atom.symbol
                            && (0..3).all(|x| (other.position[x] - image[x]).abs() < 1e-6)
                    })
                    .ok_or_else(|| {
                        Error::SymmetryUnavailable(format!("atom {a} has no mirror image under {m:?}"))
                    })?;
                perm[a] = b;
            }
            perms.push(perm);
        }
        let mut orbital_chars = Vec::with_capacity(mo_coeffs.ncols());
        for p in 0..mo_coeffs.ncols() {
            let c = mo_coeffs.column(p);
            let mut chars = [0i8; 3];
            for (g, perm) in perms.iter().enumerate() {
                let mut chi = 0.0;
                for a in 0..n {
                    for b in 0..n {
                        chi += c[b] * c[a] * overlap[(b, perm[a])];
                    }
                }
                chars[g] = if (chi - 1.0).abs() < 1e-6 {
                    1
                } else if (chi + 1.0).abs() < 1e-6 {
                    -1
                } else {
                    return Err(Error::SymmetryUnavailable(format!(
                        "orbital {p} has character {chi:.6} under mirror {g}"
                    )));
                };
            }
            orbital_chars.push(chars);
        }
        Ok(Self { orbital_chars })
    }

    pub fn orbital_irreps(&self) -> Vec<Irrep> {
        self.orbital_chars.iter().map(|&c| Irrep::from_characters(c)).collect()
    }

    /// Mirror characters of a determinant (spin-orbital occupation mask).
    pub fn determinant_chars(&self, det: u64) -> [i8; 3] {
        let mut chars = [1i8; 3];
        for (p, oc) in self.orbital_chars.iter().enumerate() {
            let occ = (det >> (2 * p) & 1) + (det >> (2 * p + 1) & 1);
            if occ == 1 {
                for g in 0..3 {
                    chars[g] *= oc[g];
                }
            }
        }
        chars
    }

    /// Irrep of a state, or `None` if it is not an eigenfunction of every
    /// mirror within 1e-6.
    pub fn state_irrep(&self, state: &StateVector) -> Option<Irrep> {
        let mut chars = [0i8; 3];
        for (g, ch) in chars.iter_mut().enumerate() {
            let mut chi = 0.0;
            for (x, a) in state.amplitudes().iter().enumerate() {
                if a.norm_sqr() > 0.0 {
                    chi += a.norm_sqr() * self.determinant_chars(x as u64)[g] as f64;
                }
            }
            *ch = if (chi - 1.0).abs() < 1e-6 {
                1
            } else if (chi + 1.0).abs() < 1e-6 {
                -1
            } else {
                return None;
            };
        }
        Some(Irrep::from_characters(chars))
    }

    /// Diagonal generator matrix on a sector.
    fn sector_generator(&self, basis: &SectorBasis, g: usize) -> Vec<f64> {
        basis
            .determinants()
            .iter()
            .map(|&d| self.determinant_chars(d)[g] as f64)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryLabel {
    /// ⟨Ŝ²⟩
    pub s2: f64,
    /// Total spin if ⟨Ŝ²⟩ is within 1e-6 of some S(S+1); `None` means mixed.
    pub spin: Option<f64>,
    pub sz: f64,
    /// `None` when the geometry has no D2h classification or the state is
    /// not symmetry-pure.
    pub irrep: Option<Irrep>,
}

impl SymmetryLabel {
    pub fn spin_text(&self) -> String {
        match self.spin {
            Some(s) if s.fract() == 0.0 => format!("{}", s as i64),
            Some(s) => format!("{}/2", (2.0 * s) as i64),
            None => "mixed".into(),
        }
    }

    pub fn irrep_text(&self) -> String {
        self.irrep.map_or_else(|| "n/a".into(), |g| g.to_string())
    }
}

/// Spin from ⟨Ŝ²⟩: S = (−1 + √(1 + 4⟨Ŝ²⟩))/2 rounded to a half-integer.
pub fn spin_from_s2(s2: f64) -> Option<f64> {
    let raw = 0.5 * (-1.0 + (1.0 + 4.0 * s2.max(0.0)).sqrt());
    let s = (2.0 * raw).round() / 2.0;
    ((s * (s + 1.0) - s2).abs() < 1e-6).then_some(s)
}

pub fn classify(state: &StateVector, symmetry: Option<&D2hSymmetry>) -> SymmetryLabel {
    let n = state.n_qubits();
    let s2 = fermion_expectation(state, &s_squared_operator(n)).re;
    let sz = fermion_expectation(state, &crate::secondq::sz_operator(n)).re;
    SymmetryLabel {
        s2,
        spin: spin_from_s2(s2),
        sz,
        irrep: symmetry.and_then(|s| s.state_irrep(state)),
    }
}

/// Ŝ² on a sector.
pub fn s2_sector_matrix(basis: &SectorBasis) -> DMatrix<f64> {
    let op = s_squared_operator(basis.n_spin_orbitals());
    let dim = basis.dim();
    let mut m = DMatrix::zeros(dim, dim);
    for (col, &d) in basis.determinants().iter().enumerate() {
        for (c, out) in op.apply_basis(d) {
            if let Some(row) = basis.index_of(out) {
                m[(row, col)] += c.re;
            }
        }
    }
    m
}

/// Rotates each group of eigenvectors with energies within `tol` onto joint
/// eigenvectors of Ŝ² and the mirror generators.
pub fn symmetry_adapt(
    sol: &FciSolution,
    basis: &SectorBasis,
    symmetry: Option<&D2hSymmetry>,
    tol: f64,
) -> FciSolution {
    let s2 = s2_sector_matrix(basis);
    let dim = basis.dim();
    let mut probe = s2.clone();
    if let Some(sym) = symmetry {
        for (g, w) in [(1usize, 0.1), (2usize, 0.013), (0usize, 0.0017)] {
            for (k, v) in sym.sector_generator(basis, g).into_iter().enumerate() {
                probe[(k, k)] += w * v;
            }
        }
    }
    let mut out = sol.clone();
    let mut start = 0;
    while start < sol.len() {
        let mut end = start + 1;
        while end < sol.len() && sol.energies[end] - sol.energies[end - 1] < tol {
            end += 1;
        }
        if end - start > 1 {
            let block = sol.vectors.columns(start, end - start).into_owned();
            let small = block.transpose() * &probe * &block;
            let eig = SymmetricEigen::new(small);
            let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
            order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
            for (c, &k) in order.iter().enumerate() {
                let mut v = &block * eig.eigenvectors.column(k);
                v /= v.norm();
                fix_sign(&mut v);
                out.vectors.set_column(start + c, &v);
            }
        }
        start = end;
    }
    debug_assert_eq!(out.vectors.nrows(), dim);
    out
}

/// Counts of states per (irrep, S); unlabelled states are skipped.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SymmetryTable {
    pub counts: BTreeMap<Irrep, BTreeMap<String, usize>>,
    pub unlabelled: usize,
}

impl SymmetryTable {
    pub fn from_labels(labels: &[SymmetryLabel]) -> Self {
        let mut t = SymmetryTable::default();
        for l in labels {
            match (l.irrep, l.spin) {
                (Some(g), Some(_)) => *t.counts.entry(g).or_default().entry(l.spin_text()).or_default() += 1,
                _ => t.unlabelled += 1,
            }
        }
        t
    }

    pub fn count(&self, irrep: Irrep, spin: u32) -> usize {
        self.counts
            .get(&irrep)
            .and_then(|m| m.get(&spin.to_string()))
            .copied()
            .unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.counts.values().flat_map(|m| m.values()).sum::<usize>() + self.unlabelled
    }
}

/// `index,energy,S,irrep` rows.
pub fn spectrum_csv(energies: &[f64], labels: &[SymmetryLabel]) -> String {
    let mut out = String::from("index,energy,S,irrep\n");
    for (k, (e, l)) in energies.iter().zip(labels).enumerate() {
        out.push_str(&format!("{k},{e:.12},{},{}\n", l.spin_text(), l.irrep_text()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irrep_group_closure() {
        for a in Irrep::ALL {
            assert_eq!(a.product(a), Irrep::A1g);
            for b in Irrep::ALL {
                assert_eq!(a.product(b), b.product(a));
            }
        }
        assert_eq!(Irrep::B2u.product(Irrep::B3u), Irrep::B1g);
    }

    #[test]
    fn spin_rounding() {
        assert_eq!(spin_from_s2(0.0), Some(0.0));
        assert_eq!(spin_from_s2(2.0), Some(1.0));
        assert_eq!(spin_from_s2(0.75), Some(0.5));
        assert_eq!(spin_from_s2(1.0), None);
    }
}
