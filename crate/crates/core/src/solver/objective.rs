//! Merit functions and their two-body gradients.
//!
//! Every form is a function of ⟨ψ|H|ψ⟩ and the overlaps g_α = |⟨α|ψ⟩|², so
//! its gradient is T(w, ψ) − T(ψ, w) for a single vector w assembled from Hψ
//! and the projection states (see the `residuals` module).

use num_complex::Complex64;

use crate::error::Result;
use crate::residuals::{add_projections, antisymmetric_transition, norm_n, overlaps, ProjectionSet};
use crate::secondq::TwoBodyCoefficients;
use crate::sim::{dot, CompiledOperator, StateVector};

use super::strategy::ConstraintStrategy;

#[derive(Debug, Clone, PartialEq)]
pub enum MeritForm {
    /// E_proj + Σ (λ_α g_α + μ/2 g_α²)
    Projected { lambda: Vec<f64>, mu: f64 },
    /// ⟨H⟩ − Σ E'_α g_α
    Deflated { shifted: Vec<f64> },
}

impl MeritForm {
    /// Initial form of a strategy for the given projection set.
    pub fn for_strategy(strategy: &ConstraintStrategy, p: &ProjectionSet) -> Self {
        let m = p.len();
        match *strategy {
            ConstraintStrategy::Lagrangian { lambda } => MeritForm::Projected {
                lambda: vec![lambda; m],
                mu: 0.0,
            },
            ConstraintStrategy::Penalty { mu } => MeritForm::Projected {
                lambda: vec![0.0; m],
                mu,
            },
            ConstraintStrategy::Augmented { lambda0, mu, .. } => MeritForm::Projected {
                lambda: vec![lambda0; m],
                mu,
            },
            ConstraintStrategy::Deflation { beta } => MeritForm::Deflated {
                shifted: p.entries.iter().map(|e| e.energy - beta).collect(),
            },
        }
    }

    pub fn value(&self, psi: &StateVector, h: &CompiledOperator, p: &ProjectionSet) -> Result<f64> {
        let hpsi = h.apply(psi.amplitudes());
        let e_h = dot(psi.amplitudes(), &hpsi).re;
        let g: Vec<f64> = overlaps(psi, p).iter().map(|o| o.norm_sqr()).collect();
        match self {
            MeritForm::Projected { lambda, mu } => {
                let n = norm_n(psi, p)?;
                let e = projected(e_h, &g, p, n);
                Ok(e + g.iter().zip(lambda).map(|(g, l)| l * g + 0.5 * mu * g * g).sum::<f64>())
            }
            MeritForm::Deflated { shifted } => Ok(e_h - g.iter().zip(shifted).map(|(g, e)| e * g).sum::<f64>()),
        }
    }

    pub fn evaluate(&self, psi: &StateVector, h: &CompiledOperator, p: &ProjectionSet) -> Result<Evaluation> {
        let mut w = h.apply(psi.amplitudes());
        let expectation = dot(psi.amplitudes(), &w).re;
        let ovs = overlaps(psi, p);
        let g: Vec<f64> = ovs.iter().map(|o| o.norm_sqr()).collect();
        let n = 1.0 - g.iter().sum::<f64>();
        let projected_energy = norm_n(psi, p).ok().map(|n| projected(expectation, &g, p, n));
        let value = match self {
            MeritForm::Projected { lambda, mu } => {
                let n = norm_n(psi, p)?;
                let e = projected(expectation, &g, p, n);
                for x in &mut w {
                    *x /= n;
                }
                let weights: Vec<f64> = p
                    .entries
                    .iter()
                    .zip(&g)
                    .zip(lambda)
                    .map(|((a, g), l)| (e - a.energy) / n + l + mu * g)
                    .collect();
                add_projections(&mut w, p, &ovs, &weights);
                e + g.iter().zip(lambda).map(|(g, l)| l * g + 0.5 * mu * g * g).sum::<f64>()
            }
            MeritForm::Deflated { shifted } => {
                let weights: Vec<f64> = shifted.iter().map(|e| -e).collect();
                add_projections(&mut w, p, &ovs, &weights);
                expectation - g.iter().zip(shifted).map(|(g, e)| e * g).sum::<f64>()
            }
        };
        let gradient = antisymmetric_transition(psi.amplitudes(), &w, psi.n_qubits());
        let norm = gradient.restricted_norm();
        Ok(Evaluation {
            value,
            gradient,
            norm,
            violations: g,
            n,
            projected_energy,
            expectation,
        })
    }
}

fn projected(e_h: f64, g: &[f64], p: &ProjectionSet, n: f64) -> f64 {
    (e_h - g.iter().zip(&p.entries).map(|(g, a)| a.energy * g).sum::<f64>()) / n
}

#[derive(Debug, Clone)]
pub struct Evaluation {
    pub value: f64,
    /// A with d/dε merit(exp(εĴ)ψ) = Re Σ J·A.
    pub gradient: TwoBodyCoefficients,
    /// Frobenius norm of `gradient` over i<k, j<l.
    pub norm: f64,
    /// g_α = |⟨α|ψ⟩|²
    pub violations: Vec<f64>,
    pub n: f64,
    pub projected_energy: Option<f64>,
    pub expectation: f64,
}

impl Evaluation {
    pub fn max_violation(&self) -> f64 {
        self.violations.iter().copied().fold(0.0, f64::max)
    }

    /// Projected energy where defined, ⟨H⟩ otherwise.
    pub fn energy(&self) -> f64 {
        self.projected_energy.unwrap_or(self.expectation)
    }
}

/// Merit value and gradient tensor for `strategy` at its starting multipliers.
pub fn objective_and_gradient(
    psi: &StateVector,
    h: &CompiledOperator,
    p: &ProjectionSet,
    strategy: &ConstraintStrategy,
) -> Result<(f64, TwoBodyCoefficients)> {
    let ev = MeritForm::for_strategy(strategy, p).evaluate(psi, h, p)?;
    Ok((ev.value, ev.gradient))
}

/// Re Σ J·A, the first-order change of a merit along exp(εĴ).
pub fn directional_derivative(j: &TwoBodyCoefficients, a: &TwoBodyCoefficients) -> f64 {
    let s: Complex64 = j.pairing(a);
    s.re
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::molint::{Geometry, MolecularSystem};
    use crate::residuals::acpse_residual;
    use crate::secondq::assemble_hamiltonian;

    #[test]
    fn empty_projection_is_plain_energy() {
        let sys = MolecularSystem::from_geometry(Geometry::h2(0.8).unwrap(), "sto-3g").unwrap();
        let h = CompiledOperator::new(&assemble_hamiltonian(&sys.hamiltonian));
        let amps = vec![Complex64::new(0.3, 0.1); 16];
        let psi = StateVector::normalized(4, amps).unwrap();
        let p = ProjectionSet::new();
        let bare = acpse_residual(&psi, &h, &p, h.expectation(&psi).re).unwrap();
        for s in [
            ConstraintStrategy::default(),
            ConstraintStrategy::Penalty { mu: 1.0 },
            ConstraintStrategy::Deflation { beta: 2.0 },
        ] {
            let (v, g) = objective_and_gradient(&psi, &h, &p, &s).unwrap();
            assert!((v - h.expectation(&psi).re).abs() < 1e-12);
            let mut d = g.clone();
            d.add_scaled(&bare.values, Complex64::new(-1.0, 0.0));
            assert!(d.max_abs() < 1e-12);
        }
    }
}
