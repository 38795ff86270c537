//! Dense Fock-space oracles written independently of the library's
//! second-quantization code.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use escqe::molint::SpinOrbitalHamiltonian;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Matrix of a single creation (`create = true`) or annihilation operator
/// on `n` modes, with the sign given by the parity of lower modes.
pub fn ladder(n: usize, p: usize, create: bool) -> CMat {
    let dim = 1usize << n;
    let mut m = CMat::zeros(dim, dim);
    for col in 0..dim {
        let occ = (col >> p) & 1 == 1;
        if occ == create {
            continue;
        }
        let parity = (col & ((1 << p) - 1)).count_ones() % 2;
        let row = col ^ (1 << p);
        m[(row, col)] = c(if parity == 0 { 1.0 } else { -1.0 });
    }
    m
}

/// a†_i a†_k a_l a_j
pub fn gamma(n: usize, i: usize, k: usize, l: usize, j: usize) -> CMat {
    ladder(n, i, true) * ladder(n, k, true) * ladder(n, l, false) * ladder(n, j, false)
}

/// Applies a product of ladder operators (rightmost first) to a basis
/// state; `true` marks a creator.
pub fn apply_ops(bits: usize, ops: &[(bool, usize)]) -> Option<(f64, usize)> {
    let mut b = bits;
    let mut sign = 1.0;
    for &(create, p) in ops.iter().rev() {
        let occ = (b >> p) & 1 == 1;
        if occ == create {
            return None;
        }
        if (b & ((1 << p) - 1)).count_ones() % 2 == 1 {
            sign = -sign;
        }
        b ^= 1 << p;
    }
    Some((sign, b))
}

/// H = Σ K1 a†_p a_q + ¼ Σ V2[p,r,q,s] a†_p a†_r a_s a_q + enuc, assembled
/// column by column from the action on occupation-number states.
pub fn hamiltonian(h: &SpinOrbitalHamiltonian) -> CMat {
    let n = h.n_spin_orbitals();
    let dim = 1usize << n;
    let mut m = CMat::identity(dim, dim) * c(h.enuc);
    for col in 0..dim {
        for p in 0..n {
            for q in 0..n {
                let k = h.k1(p, q);
                if k == 0.0 {
                    continue;
                }
                if let Some((s, row)) = apply_ops(col, &[(true, p), (false, q)]) {
                    m[(row, col)] += c(k * s);
                }
            }
        }
        for p in 0..n {
            for r in 0..n {
                for q in 0..n {
                    for s in 0..n {
                        let v = h.v2(p, r, q, s);
                        if v == 0.0 {
                            continue;
                        }
                        if let Some((sg, row)) = apply_ops(col, &[(true, p), (true, r), (false, s), (false, q)]) {
                            m[(row, col)] += c(0.25 * v * sg);
                        }
                    }
                }
            }
        }
    }
    m
}

/// a†_i a†_k a_l a_j built from bit operations.
pub fn gamma_sparse(n: usize, i: usize, k: usize, l: usize, j: usize) -> CMat {
    let dim = 1usize << n;
    let mut m = CMat::zeros(dim, dim);
    for col in 0..dim {
        if let Some((s, row)) = apply_ops(col, &[(true, i), (true, k), (false, l), (false, j)]) {
            m[(row, col)] = c(s);
        }
    }
    m
}

pub fn from_row_major(dim: usize, data: &[Complex64]) -> CMat {
    CMat::from_row_slice(dim, dim, data)
}

pub fn max_diff(a: &CMat, b: &CMat) -> f64 {
    (a - b).iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Random spatial integrals with the 8-fold permutational symmetry, mapped
/// to interleaved spin orbitals.
pub fn random_hamiltonian<R: Rng>(rng: &mut R, r: usize) -> SpinOrbitalHamiltonian {
    let mut hcore = vec![0.0; r * r];
    for p in 0..r {
        for q in 0..=p {
            let v = rng.gen_range(-1.0..1.0);
            hcore[p * r + q] = v;
            hcore[q * r + p] = v;
        }
    }
    let mut g = vec![0.0; r * r * r * r];
    let idx = |p: usize, q: usize, s: usize, t: usize| ((p * r + q) * r + s) * r + t;
    for p in 0..r {
        for q in 0..r {
            for s in 0..r {
                for t in 0..r {
                    if g[idx(p, q, s, t)] != 0.0 {
                        continue;
                    }
                    let v = rng.gen_range(-0.5..0.5);
                    for (a, b, cc, d) in [
                        (p, q, s, t),
                        (q, p, s, t),
                        (p, q, t, s),
                        (q, p, t, s),
                        (s, t, p, q),
                        (t, s, p, q),
                        (s, t, q, p),
                        (t, s, q, p),
                    ] {
                        g[idx(a, b, cc, d)] = v;
                    }
                }
            }
        }
    }
    let n = 2 * r;
    let mut k1 = vec![0.0; n * n];
    for p in 0..n {
        for q in 0..n {
            if p % 2 == q % 2 {
                k1[p * n + q] = hcore[(p / 2) * r + q / 2];
            }
        }
    }
    // ⟨pr|qs⟩ = (pq|rs) in chemists' notation with spin deltas.
    let phys = |p: usize, rr: usize, q: usize, s: usize| -> f64 {
        if p % 2 == q % 2 && rr % 2 == s % 2 {
            g[idx(p / 2, q / 2, rr / 2, s / 2)]
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
    SpinOrbitalHamiltonian::new(n, k1, v2, rng.gen_range(0.0..1.0)).unwrap()
}

pub fn random_vector<R: Rng>(rng: &mut R, dim: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / norm).collect()
}

/// Random normalised vector supported on determinants with the given
/// numbers of α (even) and β (odd) electrons.
pub fn random_sector_vector<R: Rng>(rng: &mut R, n: usize, n_alpha: u32, n_beta: u32) -> Vec<Complex64> {
    let alpha_mask: usize = (0..n).step_by(2).map(|p| 1 << p).sum();
    let mut v: Vec<Complex64> = (0..1usize << n)
        .map(|b| {
            if (b & alpha_mask).count_ones() == n_alpha && (b & !alpha_mask).count_ones() == n_beta {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            } else {
                Complex64::default()
            }
        })
        .collect();
    let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
    v
}

pub fn quad_form(m: &CMat, a: &[Complex64], b: &[Complex64]) -> Complex64 {
    let a = CVec::from_column_slice(a);
    let b = CVec::from_column_slice(b);
    (a.adjoint() * m * b)[(0, 0)]
}

/// exp(M)v by scaling and squaring of a Taylor series.
pub fn expm(m: &CMat) -> CMat {
    let norm = m.iter().map(|x| x.norm()).sum::<f64>().max(1e-300);
    let s = (norm.log2().ceil().max(0.0) as i32) + 1;
    let a = m / c(2f64.powi(s));
    let dim = m.nrows();
    let mut term = CMat::identity(dim, dim);
    let mut sum = term.clone();
    for k in 1..30 {
        term = &term * &a / c(k as f64);
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}
