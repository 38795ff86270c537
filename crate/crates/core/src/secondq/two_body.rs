//! Two-body coefficient tensors ²J[i,k,j,l] and the operators they define,
//! Ĵ = Σ J[i,k,j,l] Γ(i,k,l,j) summed over all index tuples.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::jw::gamma_op;
use super::pauli::PauliSum;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Hermiticity {
    General,
    AntiHermitian,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoBodyCoefficients {
    n: usize,
    data: Vec<Complex64>,
    pub hermiticity: Hermiticity,
}

impl TwoBodyCoefficients {
    pub fn zeros(n: usize, hermiticity: Hermiticity) -> Self {
        Self {
            n,
            data: vec![Complex64::default(); n * n * n * n],
            hermiticity,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn idx(&self, i: usize, k: usize, j: usize, l: usize) -> usize {
        ((i * self.n + k) * self.n + j) * self.n + l
    }

    #[inline]
    pub fn get(&self, i: usize, k: usize, j: usize, l: usize) -> Complex64 {
        self.data[self.idx(i, k, j, l)]
    }

    /// Raw write of one element; the caller maintains the invariants.
    pub fn set_raw(&mut self, i: usize, k: usize, j: usize, l: usize, v: Complex64) {
        let x = self.idx(i, k, j, l);
        self.data[x] = v;
    }

    /// Sets `J[i,k,j,l] = v` together with its antisymmetric images.
    pub fn set(&mut self, i: usize, k: usize, j: usize, l: usize, v: Complex64) {
        self.set_raw(i, k, j, l, v);
        self.set_raw(k, i, j, l, -v);
        self.set_raw(i, k, l, j, -v);
        self.set_raw(k, i, l, j, v);
    }

    /// Sets an element, its antisymmetric images, and the adjoint images
    /// `J[j,l,i,k] = −conj(v)` required by anti-hermiticity.
    pub fn set_anti_hermitian(&mut self, i: usize, k: usize, j: usize, l: usize, v: Complex64) {
        self.set(i, k, j, l, v);
        self.set(j, l, i, k, -v.conj());
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    /// Two-body adjoint: J‡[i,k,j,l] = conj(J[j,l,i,k]).
    pub fn adjoint(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n, self.hermiticity);
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    for l in 0..n {
                        out.set_raw(i, k, j, l, self.get(j, l, i, k).conj());
                    }
                }
            }
        }
        out
    }

    /// (J − J‡)/2
    pub fn anti_hermitize(&self) -> Self {
        let adj = self.adjoint();
        let data = self
            .data
            .iter()
            .zip(&adj.data)
            .map(|(a, b)| (a - b) * 0.5)
            .collect();
        Self {
            n: self.n,
            data,
            hermiticity: Hermiticity::AntiHermitian,
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|c| c * s).collect(),
            hermiticity: self.hermiticity,
        }
    }

    pub fn add_scaled(&mut self, other: &Self, s: Complex64) {
        assert_eq!(self.n, other.n);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * s;
        }
    }

    /// Σ over all tuples of J·K (no conjugation).
    pub fn pairing(&self, other: &Self) -> Complex64 {
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest defect of either antisymmetry relation.
    pub fn antisymmetry_defect(&self) -> (f64, [usize; 4]) {
        let n = self.n;
        let mut worst = (0.0, [0; 4]);
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    for l in 0..n {
                        let v = self.get(i, k, j, l);
                        let d = (v + self.get(k, i, j, l)).norm().max((v + self.get(i, k, l, j)).norm());
                        if d > worst.0 {
                            worst = (d, [i, k, j, l]);
                        }
                    }
                }
            }
        }
        worst
    }

    pub fn anti_hermiticity_defect(&self) -> f64 {
        let adj = self.adjoint();
        self.data
            .iter()
            .zip(&adj.data)
            .map(|(a, b)| (a + b).norm())
            .fold(0.0, f64::max)
    }

    /// Checks antisymmetry and, when flagged, anti-hermiticity.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let (d, idx) = self.antisymmetry_defect();
        if d > tol {
            return Err(Error::Antisymmetry(idx));
        }
        if self.hermiticity == Hermiticity::AntiHermitian {
            let d = self.anti_hermiticity_defect();
            if d > tol {
                return Err(Error::NotAntiHermitian(d));
            }
        }
        Ok(())
    }

    /// Frobenius norm over the independent tuples i<k, j<l.
    pub fn restricted_norm(&self) -> f64 {
        let n = self.n;
        let mut s = 0.0;
        for i in 0..n {
            for k in i + 1..n {
                for j in 0..n {
                    for l in j + 1..n {
                        s += self.get(i, k, j, l).norm_sqr();
                    }
                }
            }
        }
        s.sqrt()
    }
}

/// Ĵ = Σ_{all} J[i,k,j,l] Γ(i,k,l,j) = 4 Σ_{i<k, j<l} J[i,k,j,l] Γ(i,k,l,j).
pub fn two_body_to_pauli(a: &TwoBodyCoefficients) -> Result<PauliSum> {
    a.validate(1e-12)?;
    let n = a.n;
    let mut sum = PauliSum::zero(n);
    for i in 0..n {
        for k in i + 1..n {
            for j in 0..n {
                for l in j + 1..n {
                    let c = a.get(i, k, j, l);
                    if c.norm() < 1e-15 {
                        continue;
                    }
                    sum.add_scaled(&gamma_op(i, k, l, j, n)?, c * 4.0);
                }
            }
        }
    }
    Ok(sum)
}

/// Ordered pair of spin orbitals `(i, k)` with `i < k`.
pub type Pair = (usize, usize);

/// Number of β orbitals in a pair (interleaved ordering).
fn beta_count(p: Pair) -> usize {
    p.0 % 2 + p.1 % 2
}

/// All pairs i<k over `n` spin orbitals, lexicographic.
pub fn ordered_pairs(n: usize) -> Vec<Pair> {
    (0..n).flat_map(|i| (i + 1..n).map(move |k| (i, k))).collect()
}

/// One real parameter of the optimizer's tangent space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    /// Γ_uv − Γ_vu for u < v.
    Real(Pair, Pair),
    /// i(Γ_uv + Γ_vu) for u < v, or iΓ_uu on the diagonal.
    Imag(Pair, Pair),
}

/// Basis of Sz-conserving anti-Hermitian two-body generators with their
/// Pauli decompositions precomputed.
#[derive(Debug, Clone)]
pub struct GeneratorBasis {
    n: usize,
    generators: Vec<Generator>,
    paulis: Vec<PauliSum>,
}

impl GeneratorBasis {
    pub fn new(n: usize) -> Result<Self> {
        let pairs = ordered_pairs(n);
        let mut generators = Vec::new();
        for (a, &u) in pairs.iter().enumerate() {
            for &v in &pairs[a + 1..] {
                if beta_count(u) == beta_count(v) {
                    generators.push(Generator::Real(u, v));
                }
            }
        }
        for (a, &u) in pairs.iter().enumerate() {
            for &v in &pairs[a..] {
                if beta_count(u) == beta_count(v) {
                    generators.push(Generator::Imag(u, v));
                }
            }
        }
        let paulis = generators
            .iter()
            .map(|g| {
                let mut t = TwoBodyCoefficients::zeros(n, Hermiticity::AntiHermitian);
                unit_coefficients(&mut t, *g, 1.0);
                two_body_to_pauli(&t)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { n, generators, paulis })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    /// Pauli decomposition of each unit generator; the words within one
    /// generator mutually commute.
    pub fn paulis(&self) -> &[PauliSum] {
        &self.paulis
    }

    /// Coefficient tensor of Σ_g x_g G_g.
    pub fn to_coefficients(&self, params: &[f64]) -> TwoBodyCoefficients {
        assert_eq!(params.len(), self.len());
        let mut t = TwoBodyCoefficients::zeros(self.n, Hermiticity::AntiHermitian);
        for (g, &x) in self.generators.iter().zip(params) {
            if x != 0.0 {
                unit_coefficients(&mut t, *g, x);
            }
        }
        t
    }

    /// Pauli form of Σ_g x_g G_g from the cached decompositions.
    pub fn to_pauli(&self, params: &[f64]) -> PauliSum {
        assert_eq!(params.len(), self.len());
        let mut sum = PauliSum::zero(self.n);
        for (p, &x) in self.paulis.iter().zip(params) {
            if x != 0.0 {
                for (w, c) in p.iter() {
                    sum.add_term(*w, c * x);
                }
            }
        }
        sum.prune();
        sum
    }

    /// Parameter gradient from a residual tensor, given that the
    /// directional derivative along Ĵ is Σ_all J·A.
    pub fn project(&self, residual: &TwoBodyCoefficients) -> Vec<f64> {
        self.generators
            .iter()
            .map(|g| {
                let (u, v) = match *g {
                    Generator::Real(u, v) | Generator::Imag(u, v) => (u, v),
                };
                let auv = residual.get(u.0, u.1, v.0, v.1);
                let avu = residual.get(v.0, v.1, u.0, u.1);
                let d = match *g {
                    Generator::Real(..) => auv - avu,
                    Generator::Imag(..) if u == v => Complex64::i() * auv,
                    Generator::Imag(..) => Complex64::i() * (auv + avu),
                };
                d.re
            })
            .collect()
    }
}

/// Adds `x` times generator `g` to `t`. Γ_uv carries J[u,v] = ¼ because the
/// full sum visits four antisymmetric images of each restricted tuple.
fn unit_coefficients(t: &mut TwoBodyCoefficients, g: Generator, x: f64) {
    let q = 0.25 * x;
    match g {
        Generator::Real(u, v) => {
            let a = t.get(u.0, u.1, v.0, v.1) + q;
            t.set(u.0, u.1, v.0, v.1, a);
            let b = t.get(v.0, v.1, u.0, u.1) - q;
            t.set(v.0, v.1, u.0, u.1, b);
        }
        Generator::Imag(u, v) => {
            let iq = Complex64::new(0.0, q);
            let a = t.get(u.0, u.1, v.0, v.1) + iq;
            t.set(u.0, u.1, v.0, v.1, a);
            if u != v {
                let b = t.get(v.0, v.1, u.0, u.1) + iq;
                t.set(v.0, v.1, u.0, u.1, b);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_general(n: usize, seed: u64) -> TwoBodyCoefficients {
        let mut state = seed;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let mut t = TwoBodyCoefficients::zeros(n, Hermiticity::General);
        for i in 0..n {
            for k in i + 1..n {
                for j in 0..n {
                    for l in j + 1..n {
                        t.set(i, k, j, l, Complex64::new(next(), next()));
                    }
                }
            }
        }
        t
    }

    #[test]
    fn h4_generator_count() {
        let b = GeneratorBasis::new(8).unwrap();
        assert_eq!(b.len(), 328);
    }

    #[test]
    fn anti_hermitize_is_projector() {
        let j = random_general(4, 7);
        let a = j.anti_hermitize();
        assert!(a.anti_hermiticity_defect() < 1e-15);
        let aa = a.anti_hermitize();
        let diff = a.as_slice().iter().zip(aa.as_slice()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        assert!(diff < 1e-14);
    }

    #[test]
    fn hermitian_part_vanishes() {
        let j = random_general(4, 3);
        let mut h = j.clone();
        h.add_scaled(&j.adjoint(), Complex64::new(1.0, 0.0));
        assert!(h.anti_hermitize().max_abs() < 1e-14);
    }

    #[test]
    fn generator_paulis_are_anti_hermitian() {
        let b = GeneratorBasis::new(6).unwrap();
        for p in &b.paulis {
            assert!(!p.is_empty());
            assert!(p.is_anti_hermitian(1e-14));
        }
    }

    #[test]
    fn projection_matches_pairing() {
        let b = GeneratorBasis::new(6).unwrap();
        let a = random_general(6, 11).anti_hermitize();
        let grad = b.project(&a);
        for (g, &d) in grad.iter().enumerate() {
            let mut x = vec![0.0; b.len()];
            x[g] = 1.0;
            let direct = b.to_coefficients(&x).pairing(&a);
            assert!((direct.re - d).abs() < 1e-12);
            assert!(direct.im.abs() < 1e-12);
        }
    }

    #[test]
    fn cached_pauli_matches_tensor_route() {
        let b = GeneratorBasis::new(4).unwrap();
        let x: Vec<f64> = (0..b.len()).map(|g| (g as f64 * 0.37).sin()).collect();
        let direct = two_body_to_pauli(&b.to_coefficients(&x)).unwrap();
        let mut diff = b.to_pauli(&x);
        diff.add_scaled(&direct, Complex64::new(-1.0, 0.0));
        assert!(diff.l1_norm(true) < 1e-12);
    }

    #[test]
    fn invalid_tensor_rejected() {
        let mut t = TwoBodyCoefficients::zeros(4, Hermiticity::General);
        t.set_raw(0, 1, 2, 3, Complex64::new(1.0, 0.0));
        assert!(matches!(two_body_to_pauli(&t), Err(Error::Antisymmetry(_))));
        let mut t = TwoBodyCoefficients::zeros(4, Hermiticity::AntiHermitian);
        t.set(0, 1, 2, 3, Complex64::new(1.0, 0.0));
        assert!(matches!(t.validate(1e-12), Err(Error::NotAntiHermitian(_))));
    }

    #[test]
    fn words_within_a_generator_commute() {
        use crate::secondq::PauliWord;
        let b = GeneratorBasis::new(8).unwrap();
        for p in b.paulis() {
            let words: Vec<PauliWord> = p.iter().map(|(w, _)| *w).collect();
            for a in &words {
                for c in &words {
                    assert!(a.commutes_with(c));
                }
            }
        }
    }
}
