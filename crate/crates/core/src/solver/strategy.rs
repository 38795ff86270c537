use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How overlaps with previously found states enter the merit function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ConstraintStrategy {
    /// E + λ Σ g_α
    Lagrangian { lambda: f64 },
    /// E + (μ/2) Σ g_α²
    Penalty { mu: f64 },
    /// E + Σ λ_α g_α + (μ/2) Σ g_α², λ_α ← λ_α + μ g_α between cycles.
    Augmented { lambda0: f64, mu: f64, growth: f64 },
    /// ⟨H⟩ + Σ (β − E_α) g_α
    Deflation { beta: f64 },
}

impl Default for ConstraintStrategy {
    fn default() -> Self {
        ConstraintStrategy::Augmented {
            lambda0: 1.0,
            mu: 1.0,
            growth: 2.0,
        }
    }
}

impl ConstraintStrategy {
    pub fn name(&self) -> &'static str {
        match self {
            ConstraintStrategy::Lagrangian { .. } => "lagrangian",
            ConstraintStrategy::Penalty { .. } => "penalty",
            ConstraintStrategy::Augmented { .. } => "augmented",
            ConstraintStrategy::Deflation { .. } => "deflation",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(format!("{}: {m}", self.name())));
        match *self {
            ConstraintStrategy::Penalty { mu } if !(mu > 0.0) => bad("μ must be positive"),
            ConstraintStrategy::Augmented { mu, growth, .. } if !(mu > 0.0) || !(growth >= 1.0) => {
                bad("μ must be positive and growth at least 1")
            }
            ConstraintStrategy::Deflation { beta } if !(beta > 0.0) => bad("β must be positive"),
            ConstraintStrategy::Lagrangian { lambda } | ConstraintStrategy::Augmented { lambda0: lambda, .. }
                if !lambda.is_finite() =>
            {
                bad("λ must be finite")
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for ConstraintStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstraintStrategy::Lagrangian { lambda } => write!(f, "lagrangian:lambda={lambda}"),
            ConstraintStrategy::Penalty { mu } => write!(f, "penalty:mu={mu}"),
            ConstraintStrategy::Augmented { lambda0, mu, growth } => {
                write!(f, "augmented:lambda={lambda0},mu={mu},growth={growth}")
            }
            ConstraintStrategy::Deflation { beta } => write!(f, "deflation:beta={beta}"),
        }
    }
}

impl FromStr for ConstraintStrategy {
    type Err = Error;

    /// `name[:key=value,...]`, e.g. `augmented:mu=2` or `deflation:beta=1`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, params) = s.split_once(':').unwrap_or((s, ""));
        let mut kv = Vec::new();
        for item in params.split(',').filter(|t| !t.trim().is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("expected key=value in `{item}`")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad number in `{item}`")))?;
            kv.push((k.trim().to_ascii_lowercase(), v));
        }
        let get = |keys: &[&str], default: f64| {
            kv.iter()
                .find(|(k, _)| keys.contains(&k.as_str()))
                .map_or(default, |&(_, v)| v)
        };
        let allowed: &[&str] = match name.trim().to_ascii_lowercase().as_str() {
            "lagrangian" => &["lambda", "λ"],
            "penalty" => &["mu", "μ"],
            "augmented" => &["lambda", "λ", "mu", "μ", "growth"],
            "deflation" => &["beta", "β"],
            other => return Err(Error::Config(format!("unknown strategy `{other}`"))),
        };
        if let Some((k, _)) = kv.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
            return Err(Error::Config(format!("unknown parameter `{k}` for {name}")));
        }
        let strategy = match name.trim().to_ascii_lowercase().as_str() {
            "lagrangian" => ConstraintStrategy::Lagrangian {
                lambda: get(&["lambda", "λ"], 1.0),
            },
            "penalty" => ConstraintStrategy::Penalty {
                mu: get(&["mu", "μ"], 1.0),
            },
            "augmented" => ConstraintStrategy::Augmented {
                lambda0: get(&["lambda", "λ"], 1.0),
                mu: get(&["mu", "μ"], 1.0),
                growth: get(&["growth"], 2.0),
            },
            _ => ConstraintStrategy::Deflation {
                beta: get(&["beta", "β"], 2.0),
            },
        };
        strategy.validate()?;
        Ok(strategy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum QuasiNewtonMethod {
    Bfgs,
    Lbfgs { history: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizerConfig {
    pub method: QuasiNewtonMethod,
    /// Convergence bound on the restricted Frobenius norm of the merit gradient.
    pub residual_threshold: f64,
    /// Largest |⟨ψ|α⟩|² accepted at convergence.
    pub violation_threshold: f64,
    pub max_iterations: usize,
    pub armijo_c1: f64,
    pub shrink: f64,
    pub initial_step: f64,
    pub max_backtracks: usize,
    /// Drop curvature memory after every accepted step.
    pub reset_memory_each_step: bool,
    /// Overlap above which the projected form is replaced by a large deflation shift.
    pub fallback_overlap: f64,
    pub max_outer_cycles: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            method: QuasiNewtonMethod::Bfgs,
            residual_threshold: 1e-5,
            violation_threshold: 1e-4,
            max_iterations: 100,
            armijo_c1: 1e-4,
            shrink: 0.5,
            initial_step: 1.0,
            max_backtracks: 40,
            reset_memory_each_step: false,
            fallback_overlap: 0.1,
            max_outer_cycles: 30,
        }
    }
}

impl OptimizerConfig {
    /// Low-budget settings used to rank guesses before a k-state run.
    pub fn prescan() -> Self {
        Self {
            residual_threshold: 0.01,
            max_iterations: 6,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.residual_threshold > 0.0) || !(self.violation_threshold > 0.0) {
            return Err(Error::Config("thresholds must be positive".into()));
        }
        if !(self.shrink > 0.0 && self.shrink < 1.0) || !(self.initial_step > 0.0) {
            return Err(Error::Config("line search needs 0 < shrink < 1 and a positive initial step".into()));
        }
        if let QuasiNewtonMethod::Lbfgs { history: 0 } = self.method {
            return Err(Error::Config("L-BFGS history must be at least 1".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let s: ConstraintStrategy = "augmented:mu=2".parse().unwrap();
        assert_eq!(
            s,
            ConstraintStrategy::Augmented {
                lambda0: 1.0,
                mu: 2.0,
                growth: 2.0
            }
        );
        assert_eq!(s.to_string().parse::<ConstraintStrategy>().unwrap(), s);
        assert_eq!(
            "deflation".parse::<ConstraintStrategy>().unwrap(),
            ConstraintStrategy::Deflation { beta: 2.0 }
        );
        assert!("penalty:mu=0".parse::<ConstraintStrategy>().is_err());
        assert!("penalty:beta=1".parse::<ConstraintStrategy>().is_err());
        assert!("newton".parse::<ConstraintStrategy>().is_err());
    }

    #[test]
    fn config_defaults() {
        let c = OptimizerConfig::default();
        assert_eq!((c.residual_threshold, c.max_iterations), (1e-5, 100));
        c.validate().unwrap();
        let p = OptimizerConfig::prescan();
        assert_eq!((p.residual_threshold, p.max_iterations), (0.01, 6));
    }
}
