use std::f64::consts::PI;

use nalgebra::DMatrix;

use super::basis::{BasisSet, ContractedGaussian};
use super::boys::boys_f0_unchecked;
use super::geometry::{dist_sq, Geometry};
use crate::error::{Error, Result};

/// Dense four-index tensor in chemists' notation `(pq|rs)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Eri {
    n: usize,
    data: Vec<f64>,
}

impl Eri {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n * n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    fn idx(&self, p: usize, q: usize, r: usize, s: usize) -> usize {
        ((p * self.n + q) * self.n + r) * self.n + s
    }

    #[inline]
    pub fn get(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        self.data[self.idx(p, q, r, s)]
    }

    /// Writes one value into all eight permutationally equivalent slots.
    pub fn set_symmetric(&mut self, p: usize, q: usize, r: usize, s: usize, v: f64) {
        for (a, b, c, d) in [
            (p, q, r, s),
            (q, p, r, s),
            (p, q, s, r),
            (q, p, s, r),
            (r, s, p, q),
            (s, r, p, q),
            (r, s, q, p),
            (s, r, q, p),
        ] {
            let i = self.idx(a, b, c, d);
            self.data[i] = v;
        }
    }

    pub fn set(&mut self, p: usize, q: usize, r: usize, s: usize, v: f64) {
        let i = self.idx(p, q, r, s);
        self.data[i] = v;
    }

    /// Largest violation of `(pq|rs)=(qp|rs)=(pq|sr)=(rs|pq)`.
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    for s in 0..n {
                        let v = self.get(p, q, r, s);
                        worst = worst
                            .max((v - self.get(q, p, r, s)).abs())
                            .max((v - self.get(p, q, s, r)).abs())
                            .max((v - self.get(r, s, p, q)).abs());
                    }
                }
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &Eri) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Spatial-orbital integrals in Hartree.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralSet {
    pub overlap: DMatrix<f64>,
    pub hcore: DMatrix<f64>,
    pub eri: Eri,
    pub enuc: f64,
}

impl IntegralSet {
    pub fn n_orbitals(&self) -> usize {
        self.hcore.nrows()
    }

    /// Largest deviation from the documented symmetry invariants.
    pub fn invariant_defect(&self) -> f64 {
        let asym = |m: &DMatrix<f64>| (m - m.transpose()).amax();
        asym(&self.overlap)
            .max(asym(&self.hcore))
            .max(self.eri.symmetry_defect())
    }
}

pub fn overlap_integral(a: &ContractedGaussian, b: &ContractedGaussian) -> f64 {
    let r2 = dist_sq(&a.center, &b.center);
    let mut s = 0.0;
    for &(alpha, ca) in &a.primitives {
        for &(beta, cb) in &b.primitives {
            let p = alpha + beta;
            s += ca * cb * (PI / p).powf(1.5) * (-alpha * beta / p * r2).exp();
        }
    }
    s
}

pub fn kinetic_integral(a: &ContractedGaussian, b: &ContractedGaussian) -> f64 {
    let r2 = dist_sq(&a.center, &b.center);
    let mut t = 0.0;
    for &(alpha, ca) in &a.primitives {
        for &(beta, cb) in &b.primitives {
            let p = alpha + beta;
            let mu = alpha * beta / p;
            let s = (PI / p).powf(1.5) * (-mu * r2).exp();
            t += ca * cb * mu * (3.0 - 2.0 * mu * r2) * s;
        }
    }
    t
}

/// Attraction to a point charge `z` at `c` (negative for positive `z`).
pub fn nuclear_attraction_integral(
    a: &ContractedGaussian,
    b: &ContractedGaussian,
    c: &[f64; 3],
    z: f64,
) -> f64 {
    let r2 = dist_sq(&a.center, &b.center);
    let mut v = 0.0;
    for &(alpha, ca) in &a.primitives {
        for &(beta, cb) in &b.primitives {
            let p = alpha + beta;
            let center = product_center(alpha, &a.center, beta, &b.center);
            let k = (-alpha * beta / p * r2).exp();
            v += ca * cb * 2.0 * PI / p * k * boys_f0_unchecked(p * dist_sq(&center, c));
        }
    }
    -z * v
}

pub fn electron_repulsion_integral(
    a: &ContractedGaussian,
    b: &ContractedGaussian,
    c: &ContractedGaussian,
    d: &ContractedGaussian,
) -> f64 {
    let rab = dist_sq(&a.center, &b.center);
    let rcd = dist_sq(&c.center, &d.center);
    let mut g = 0.0;
    for &(alpha, ca) in &a.primitives {
        for &(beta, cb) in &b.primitives {
            let p = alpha + beta;
            let pc = product_center(alpha, &a.center, beta, &b.center);
            let kab = ca * cb * (-alpha * beta / p * rab).exp();
            for &(gamma, cc) in &c.primitives {
                for &(delta, cd) in &d.primitives {
                    let q = gamma + delta;
                    let qc = product_center(gamma, &c.center, delta, &d.center);
                    let kcd = cc * cd * (-gamma * delta / q * rcd).exp();
                    let rho = p * q / (p + q);
                    g += 2.0 * PI.powf(2.5) / (p * q * (p + q).sqrt())
                        * kab
                        * kcd
                        * boys_f0_unchecked(rho * dist_sq(&pc, &qc));
                }
            }
        }
    }
    g
}

#[inline]
fn product_center(a: f64, ra: &[f64; 3], b: f64, rb: &[f64; 3]) -> [f64; 3] {
    let p = a + b;
    [0, 1, 2].map(|k| (a * ra[k] + b * rb[k]) / p)
}

/// Basis functions for a hydrogen-only geometry, one per atom.
pub fn basis_functions(geometry: &Geometry, basis: &str) -> Result<Vec<ContractedGaussian>> {
    geometry.validate()?;
    let set = BasisSet::by_name(basis)?;
    let positions = geometry.positions_bohr();
    let mut out = Vec::new();
    for (atom, center) in geometry.atoms.iter().zip(positions) {
        if !atom.symbol.eq_ignore_ascii_case("H") {
            return Err(Error::UnsupportedElement(atom.symbol.clone()));
        }
        for shell in set.shells_for(&atom.symbol)? {
            out.push(ContractedGaussian::new(center, shell)?);
        }
    }
    Ok(out)
}

/// Overlap, core Hamiltonian, ERIs and nuclear repulsion for a hydrogen
/// geometry in a minimal s basis.
pub fn build_integrals(geometry: &Geometry, basis: &str) -> Result<IntegralSet> {
    let funcs = basis_functions(geometry, basis)?;
    let centers = geometry.positions_bohr();
    let charges = geometry.charges();
    let n = funcs.len();

    let mut overlap = DMatrix::zeros(n, n);
    let mut hcore = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let s = overlap_integral(&funcs[i], &funcs[j]);
            let mut h = kinetic_integral(&funcs[i], &funcs[j]);
            for (c, &z) in centers.iter().zip(&charges) {
                h += nuclear_attraction_integral(&funcs[i], &funcs[j], c, z);
            }
            overlap[(i, j)] = s;
            overlap[(j, i)] = s;
            hcore[(i, j)] = h;
            hcore[(j, i)] = h;
        }
    }

    let mut eri = Eri::zeros(n);
    for p in 0..n {
        for q in 0..=p {
            let pq = p * (p + 1) / 2 + q;
            for r in 0..n {
                for s in 0..=r {
                    let rs = r * (r + 1) / 2 + s;
                    if rs > pq {
                        continue;
                    }
                    let v = electron_repulsion_integral(&funcs[p], &funcs[q], &funcs[r], &funcs[s]);
                    eri.set_symmetric(p, q, r, s, v);
                }
            }
        }
    }

    Ok(IntegralSet {
        overlap,
        hcore,
        eri,
        enuc: geometry.nuclear_repulsion(),
    })
}
