//! Projected energy, overlap constraints, contracted residuals and variance.
//!
//! With overlaps o_α = ⟨α|ψ⟩ and N = 1 − Σ|o_α|², the projected energy is
//! E = (⟨ψ|H|ψ⟩ − Σ E_α|o_α|²)/N. Its derivative along ψ → exp(εĴ)ψ for
//! Ĵ = Σ J[i,k,j,l] Γ(i,k,l,j) is Σ J·A, where
//!
//!   A·N = T(w, ψ) − T(ψ, w),  w = Hψ + Σ (E − E_α) o_α |α⟩,
//!
//! and T(a, b)[i,k,j,l] = ⟨a|Γ(i,k,l,j)|b⟩. Every residual below is an
//! instance of this bilinear form with a different `w`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::secondq::TwoBodyCoefficients;
use crate::sim::{
    dot, inner_product, pair_annihilated, transition_tensor_from_pairs, CompiledOperator, GadgetSequence,
    StateVector,
};

/// Default lower bound on N before the projected form is abandoned.
pub const N_THRESHOLD: f64 = 1e-6;

/// A previously found state and its energy. `replay` keeps the preparation
/// (initial state and gadget history) for circuit-level cross-checks.
#[derive(Debug, Clone)]
pub struct ProjectedState {
    pub state: StateVector,
    pub energy: f64,
    pub replay: Option<(StateVector, GadgetSequence)>,
}

#[derive(Debug, Clone)]
pub struct ProjectionSet {
    pub entries: Vec<ProjectedState>,
    pub overlap_tol: f64,
}

impl Default for ProjectionSet {
    fn default() -> Self {
        Self {
            entries: Vec::new(),
            overlap_tol: 1e-4,
        }
    }
}

impl ProjectionSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn energies(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.energy).collect()
    }

    /// Appends a state, logging (not rejecting) overlaps above `overlap_tol`.
    pub fn push(&mut self, state: StateVector, energy: f64, replay: Option<(StateVector, GadgetSequence)>) {
        for (a, e) in self.entries.iter().enumerate() {
            let ov = inner_product(&e.state, &state).norm_sqr();
            if ov > self.overlap_tol {
                log::warn!("projection entry {} overlaps entry {a} with |⟨α|β⟩|² = {ov:.2e}", self.entries.len());
            }
        }
        self.entries.push(ProjectedState { state, energy, replay });
    }
}

/// o_α = ⟨α|ψ⟩ for every entry.
pub fn overlaps(psi: &StateVector, p: &ProjectionSet) -> Vec<Complex64> {
    p.entries.iter().map(|e| inner_product(&e.state, psi)).collect()
}

/// c_α = 1 − |⟨ψ|α⟩|²
pub fn overlap_constraints(psi: &StateVector, p: &ProjectionSet) -> Vec<f64> {
    overlaps(psi, p).iter().map(|o| 1.0 - o.norm_sqr()).collect()
}

/// N = 1 − Σ|⟨ψ|α⟩|², with a degenerate-projection error below the threshold.
pub fn norm_n(psi: &StateVector, p: &ProjectionSet) -> Result<f64> {
    let n = 1.0 - overlaps(psi, p).iter().map(|o| o.norm_sqr()).sum::<f64>();
    if n < N_THRESHOLD {
        return Err(Error::DegenerateProjection(n));
    }
    Ok(n)
}

/// (⟨H⟩ − Σ E_α|o_α|²)/N
pub fn projected_energy(psi: &StateVector, h: &CompiledOperator, p: &ProjectionSet) -> Result<f64> {
    let n = norm_n(psi, p)?;
    let e_h = h.expectation(psi).re;
    let shift: f64 = overlaps(psi, p)
        .iter()
        .zip(&p.entries)
        .map(|(o, e)| e.energy * o.norm_sqr())
        .sum();
    Ok((e_h - shift) / n)
}

/// ⟨H²⟩ − ⟨H⟩²
pub fn variance(psi: &StateVector, h: &CompiledOperator) -> f64 {
    let hpsi = h.apply(psi.amplitudes());
    let e = dot(psi.amplitudes(), &hpsi).re;
    dot(&hpsi, &hpsi).re - e * e
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ResidualFlavor {
    Cpse,
    Acpse,
    Deflated,
}

#[derive(Debug, Clone)]
pub struct ResidualTensor {
    pub flavor: ResidualFlavor,
    pub values: TwoBodyCoefficients,
    /// Frobenius norm over i<k, j<l.
    pub norm: f64,
    /// N at the evaluation point (1 for the deflated flavor).
    pub n: f64,
}

impl ResidualTensor {
    fn new(flavor: ResidualFlavor, values: TwoBodyCoefficients, n: f64) -> Self {
        let norm = values.restricted_norm();
        Self { flavor, values, norm, n }
    }
}

/// T(w, ψ) − T(ψ, w): the derivative of Re⟨ψ|w⟩-type functionals along
/// two-body generators.
pub fn antisymmetric_transition(psi: &[Complex64], w: &[Complex64], n_qubits: usize) -> TwoBodyCoefficients {
    let pp = pair_annihilated(psi, n_qubits);
    let pw = pair_annihilated(w, n_qubits);
    let mut t = transition_tensor_from_pairs(n_qubits, &pw, &pp);
    let back = transition_tensor_from_pairs(n_qubits, &pp, &pw);
    t.add_scaled(&back, Complex64::new(-1.0, 0.0));
    t.hermiticity = crate::secondq::Hermiticity::AntiHermitian;
    t
}

/// `base + Σ weight_α o_α |α⟩`
pub fn add_projections(base: &mut [Complex64], p: &ProjectionSet, ovs: &[Complex64], weights: &[f64]) {
    for ((e, o), wgt) in p.entries.iter().zip(ovs).zip(weights) {
        let c = o * *wgt;
        for (b, a) in base.iter_mut().zip(e.state.amplitudes()) {
            *b += c * a;
        }
    }
}

/// ACPSE residual ²A (divided by N).
pub fn acpse_residual(psi: &StateVector, h: &CompiledOperator, p: &ProjectionSet, e: f64) -> Result<ResidualTensor> {
    let n = norm_n(psi, p)?;
    let ovs = overlaps(psi, p);
    let mut w = h.apply(psi.amplitudes());
    let weights: Vec<f64> = p.entries.iter().map(|a| e - a.energy).collect();
    add_projections(&mut w, p, &ovs, &weights);
    let a = antisymmetric_transition(psi.amplitudes(), &w, psi.n_qubits()).scaled(1.0 / n);
    Ok(ResidualTensor::new(ResidualFlavor::Acpse, a, n))
}

/// CPSE residual ²R = ⟨ψ|P(H − E)Γ|ψ⟩/N for eigenstate entries:
/// R·N = T(w, ψ) − E·T(ψ, ψ). Its anti-Hermitian part R − R‡ is ²A.
pub fn cpse_residual(psi: &StateVector, h: &CompiledOperator, p: &ProjectionSet, e: f64) -> Result<ResidualTensor> {
    let n = norm_n(psi, p)?;
    let ovs = overlaps(psi, p);
    let mut w = h.apply(psi.amplitudes());
    let weights: Vec<f64> = p.entries.iter().map(|a| e - a.energy).collect();
    add_projections(&mut w, p, &ovs, &weights);
    for (x, a) in w.iter_mut().zip(psi.amplitudes()) {
        *x -= a * e;
    }
    let nq = psi.n_qubits();
    let pp = pair_annihilated(psi.amplitudes(), nq);
    let pw = pair_annihilated(&w, nq);
    let r = transition_tensor_from_pairs(nq, &pw, &pp).scaled(1.0 / n);
    Ok(ResidualTensor::new(ResidualFlavor::Cpse, r, n))
}

/// Residual of the deflated energy ⟨H⟩ − Σ E'_α|o_α|² with the given
/// per-entry energies E'_α (the stored E_α when `energies` is `None`).
pub fn deflated_residual(
    psi: &StateVector,
    h: &CompiledOperator,
    p: &ProjectionSet,
    energies: Option<&[f64]>,
) -> ResidualTensor {
    let ovs = overlaps(psi, p);
    let stored = p.energies();
    let e_prime = energies.unwrap_or(&stored);
    let weights: Vec<f64> = e_prime.iter().map(|e| -e).collect();
    let mut w = h.apply(psi.amplitudes());
    add_projections(&mut w, p, &ovs, &weights);
    let a = antisymmetric_transition(psi.amplitudes(), &w, psi.n_qubits());
    ResidualTensor::new(ResidualFlavor::Deflated, a, 1.0)
}

/// Deflated energy ⟨H⟩ − Σ E'_α|o_α|².
pub fn deflated_energy(psi: &StateVector, h: &CompiledOperator, p: &ProjectionSet, energies: Option<&[f64]>) -> f64 {
    let stored = p.energies();
    let e_prime = energies.unwrap_or(&stored);
    h.expectation(psi).re
        - overlaps(psi, p)
            .iter()
            .zip(e_prime)
            .map(|(o, e)| e * o.norm_sqr())
            .sum::<f64>()
}
