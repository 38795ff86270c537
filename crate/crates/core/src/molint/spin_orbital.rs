use nalgebra::DMatrix;

use super::integrals::{Eri, IntegralSet};
use crate::error::{Error, Result};

/// Spin-orbital index for spatial orbital `p` and spin `sigma` (0 = α, 1 = β).
#[inline]
pub fn spin_orbital(p: usize, sigma: usize) -> usize {
    2 * p + sigma
}

/// Electronic Hamiltonian over interleaved spin orbitals (α even, β odd):
///
/// H = Σ K1[p,q] a†_p a_q + ¼ Σ V2[p,r,q,s] a†_p a†_r a_s a_q + enuc
///
/// with `V2[p,r,q,s] = ⟨pr|qs⟩ − ⟨pr|sq⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinOrbitalHamiltonian {
    n: usize,
    k1: Vec<f64>,
    v2: Vec<f64>,
    pub enuc: f64,
}

impl SpinOrbitalHamiltonian {
    pub fn new(n: usize, k1: Vec<f64>, v2: Vec<f64>, enuc: f64) -> Result<Self> {
        if k1.len() != n * n || v2.len() != n * n * n * n {
            return Err(Error::Dimension(format!(
                "expected {} one-body and {} two-body entries for {n} spin orbitals",
                n * n,
                n * n * n * n
            )));
        }
        Ok(Self { n, k1, v2, enuc })
    }

    pub fn n_spin_orbitals(&self) -> usize {
        self.n
    }

    pub fn n_spatial(&self) -> usize {
        self.n / 2
    }

    #[inline]
    pub fn k1(&self, p: usize, q: usize) -> f64 {
        self.k1[p * self.n + q]
    }

    #[inline]
    pub fn v2(&self, p: usize, r: usize, q: usize, s: usize) -> f64 {
        self.v2[((p * self.n + r) * self.n + q) * self.n + s]
    }

    /// Energy of the determinant occupying `occupied` spin orbitals.
    pub fn determinant_energy(&self, occupied: &[usize]) -> f64 {
        let mut e = self.enuc;
        for &p in occupied {
            e += self.k1(p, p);
        }
        for (a, &p) in occupied.iter().enumerate() {
            for &q in &occupied[..a] {
                e += self.v2(p, q, p, q);
            }
        }
        e
    }

    /// Largest violation of K1 hermiticity, V2 antisymmetry, and spin blocking.
    pub fn invariant_defect(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for p in 0..n {
            for q in 0..n {
                worst = worst.max((self.k1(p, q) - self.k1(q, p)).abs());
                if p % 2 != q % 2 {
                    worst = worst.max(self.k1(p, q).abs());
                }
                for r in 0..n {
                    for s in 0..n {
                        let v = self.v2(p, r, q, s);
                        worst = worst
                            .max((v + self.v2(r, p, q, s)).abs())
                            .max((v + self.v2(p, r, s, q)).abs())
                            .max((v - self.v2(q, s, p, r)).abs());
                    }
                }
            }
        }
        worst
    }
}

/// Transforms AO integrals with the given MO coefficients into the
/// interleaved spin-orbital Hamiltonian.
pub fn to_spin_orbitals(integrals: &IntegralSet, mo_coeffs: &DMatrix<f64>) -> Result<SpinOrbitalHamiltonian> {
    let r = integrals.n_orbitals();
    if mo_coeffs.nrows() != r || mo_coeffs.ncols() != r {
        return Err(Error::Dimension(format!(
            "MO coefficients are {}x{}, integrals have {r} orbitals",
            mo_coeffs.nrows(),
            mo_coeffs.ncols()
        )));
    }
    let h_mo = mo_coeffs.transpose() * &integrals.hcore * mo_coeffs;
    let eri_mo = transform_eri(&integrals.eri, mo_coeffs);

    let n = 2 * r;
    let mut k1 = vec![0.0; n * n];
    for p in 0..r {
        for q in 0..r {
            for sigma in 0..2 {
                k1[spin_orbital(p, sigma) * n + spin_orbital(q, sigma)] = h_mo[(p, q)];
            }
        }
    }

    // ⟨PR|QS⟩ = (pq|rs) δ(σP,σQ) δ(σR,σS)
    let phys = |a: usize, b: usize, c: usize, d: usize| -> f64 {
        if a % 2 == c % 2 && b % 2 == d % 2 {
            eri_mo.get(a / 2, c / 2, b / 2, d / 2)
        } else {
            0.0
        }
    };
    let mut v2 = vec![0.0; n * n * n * n];
    for p in 0..n {
        for rr in 0..n {
            for q in 0..n {
                for s in 0..n {
                    v2[((p * n + rr) * n + q) * n + s] = phys(p, rr, q, s) - phys(p, rr, s, q);
                }
            }
        }
    }
    SpinOrbitalHamiltonian::new(n, k1, v2, integrals.enuc)
}

/// Four quarter-transformations `(pq|rs) → Σ C C C C (μν|λσ)`.
pub fn transform_eri(eri: &Eri, c: &DMatrix<f64>) -> Eri {
    let n = eri.dim();
    let m = c.ncols();
    let mut t1 = vec![0.0; m * n * n * n];
    for p in 0..m {
        for nu in 0..n {
            for la in 0..n {
                for si in 0..n {
                    let mut v = 0.0;
                    for mu in 0..n {
                        v += c[(mu, p)] * eri.get(mu, nu, la, si);
                    }
                    t1[((p * n + nu) * n + la) * n + si] = v;
                }
            }
        }
    }
    let mut t2 = vec![0.0; m * m * n * n];
    for p in 0..m {
        for q in 0..m {
            for la in 0..n {
                for si in 0..n {
                    let mut v = 0.0;
                    for nu in 0..n {
                        v += c[(nu, q)] * t1[((p * n + nu) * n + la) * n + si];
                    }
                    t2[((p * m + q) * n + la) * n + si] = v;
                }
            }
        }
    }
    let mut t3 = vec![0.0; m * m * m * n];
    for p in 0..m {
        for q in 0..m {
            for r in 0..m {
                for si in 0..n {
                    let mut v = 0.0;
                    for la in 0..n {
                        v += c[(la, r)] * t2[((p * m + q) * n + la) * n + si];
                    }
                    t3[((p * m + q) * m + r) * n + si] = v;
                }
            }
        }
    }
    let mut out = Eri::zeros(m);
    for p in 0..m {
        for q in 0..m {
            for r in 0..m {
                for s in 0..m {
                    let mut v = 0.0;
                    for si in 0..n {
                        v += c[(si, s)] * t3[((p * m + q) * m + r) * n + si];
                    }
                    out.set(p, q, r, s, v);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::molint::{build_integrals, rhf, Geometry};

    fn h2() -> (SpinOrbitalHamiltonian, f64) {
        let ints = build_integrals(&Geometry::h2(0.74).unwrap(), "sto-3g").unwrap();
        let sol = rhf(&ints, 2).unwrap();
        (to_spin_orbitals(&ints, &sol.mo_coeffs).unwrap(), sol.energy)
    }

    #[test]
    fn ground_determinant_reproduces_rhf() {
        let (h, e_rhf) = h2();
        assert!((h.determinant_energy(&[0, 1]) - e_rhf).abs() < 1e-10);
    }

    #[test]
    fn h4_ground_determinant_reproduces_rhf() {
        let ints = build_integrals(&Geometry::h4_rectangle(1.0, 1.5).unwrap(), "sto-3g").unwrap();
        let sol = rhf(&ints, 4).unwrap();
        let h = to_spin_orbitals(&ints, &sol.mo_coeffs).unwrap();
        assert!((h.determinant_energy(&[0, 1, 2, 3]) - sol.energy).abs() < 1e-10);
        assert!(h.invariant_defect() < 1e-12);
    }

    #[test]
    fn shape_mismatch() {
        let ints = build_integrals(&Geometry::h2(0.74).unwrap(), "sto-3g").unwrap();
        assert!(to_spin_orbitals(&ints, &DMatrix::identity(3, 3)).is_err());
    }
}
