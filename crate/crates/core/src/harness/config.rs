use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::molint::{Atom, Geometry};
use crate::refstates::GuessKind;
use crate::solver::{ConstraintStrategy, OptimizerConfig, PrescanMode};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GeometrySpec {
    /// Four hydrogens on a rectangle with sides `a` (fixed) and `d` (scanned), Å.
    Rectangle { a: f64, d: f64 },
    /// H2 with bond length `r`, Å.
    Diatomic { r: f64 },
    /// Explicit atoms, positions in Å.
    Atoms { atoms: Vec<AtomSpec> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSpec {
    pub symbol: String,
    pub position: [f64; 3],
}

impl GeometrySpec {
    /// Geometry with the scanned coordinate replaced by `scan` when given.
    pub fn build(&self, scan: Option<f64>) -> Result<Geometry> {
        match self {
            GeometrySpec::Rectangle { a, d } => Geometry::h4_rectangle(*a, scan.unwrap_or(*d)),
            GeometrySpec::Diatomic { r } => Geometry::h2(scan.unwrap_or(*r)),
            GeometrySpec::Atoms { atoms } => {
                if scan.is_some() {
                    return Err(Error::Config("explicit atom lists cannot be scanned".into()));
                }
                Geometry::new(
                    atoms
                        .iter()
                        .map(|a| Atom {
                            symbol: a.symbol.clone(),
                            position: a.position,
                        })
                        .collect(),
                )
            }
        }
    }
}

/// One experiment. Every field has a default, so a config file only needs
/// the entries it changes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub name: String,
    pub geometry: GeometrySpec,
    pub basis: String,
    /// Number of states; `None` targets the whole sector.
    pub k: Option<usize>,
    pub guess: GuessKind,
    /// Strategy grid in `name[:key=value,...]` form.
    pub strategies: Vec<String>,
    /// Values of the scanned side for the dissociation experiment.
    pub scan: Vec<f64>,
    /// Rank guesses with a low-budget prescan before the k-state run.
    pub cqe_plus: bool,
    pub prescan_mode: PrescanMode,
    pub seed: u64,
    pub fci_only: bool,
    /// Integral file checked by the validation battery.
    pub fcidump: Option<String>,
    pub optimizer: OptimizerConfig,
    pub prescan: OptimizerConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            name: "h4".into(),
            geometry: GeometrySpec::Rectangle { a: 1.0, d: 1.5 },
            basis: "sto-3g".into(),
            k: None,
            guess: GuessKind::Csf,
            strategies: vec!["augmented:lambda=1,mu=1".into()],
            scan: vec![0.50, 0.75, 0.90, 1.00, 1.10, 1.25, 1.50, 1.75, 2.00, 2.25, 2.50],
            cqe_plus: false,
            prescan_mode: PrescanMode::Reorder,
            seed: 0,
            fci_only: false,
            fcidump: None,
            optimizer: OptimizerConfig::default(),
            prescan: OptimizerConfig::prescan(),
        }
    }
}

impl RunConfig {
    /// Defaults of the k = 6 scan: looser gradient threshold.
    pub fn dissociation() -> Self {
        Self {
            name: "h4-dissociation".into(),
            k: Some(6),
            optimizer: OptimizerConfig {
                residual_threshold: 1e-3,
                ..OptimizerConfig::default()
            },
            ..Self::default()
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let c: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn strategy_grid(&self) -> Result<Vec<ConstraintStrategy>> {
        if self.strategies.is_empty() {
            return Err(Error::Config("strategy grid is empty".into()));
        }
        self.strategies.iter().map(|s| s.parse()).collect()
    }

    pub fn validate(&self) -> Result<()> {
        self.strategy_grid()?;
        self.optimizer.validate()?;
        self.prescan.validate()?;
        if let Some(d) = self.scan.iter().find(|d| !(**d > 0.0)) {
            return Err(Error::Config(format!("scan value {d} must be positive")));
        }
        if self.k == Some(0) {
            return Err(Error::Config("k must be at least 1".into()));
        }
        self.geometry.build(None)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_file_uses_defaults() {
        let c = RunConfig::from_toml(
            r#"
            name = "test"
            k = 4
            strategies = ["deflation:beta=2", "penalty:mu=1"]
            [geometry]
            kind = "diatomic"
            r = 0.74
            [optimizer]
            max_iterations = 50
            "#,
        )
        .unwrap();
        assert_eq!(c.k, Some(4));
        assert_eq!(c.optimizer.max_iterations, 50);
        assert_eq!(c.optimizer.residual_threshold, 1e-5);
        assert_eq!(c.strategy_grid().unwrap().len(), 2);
        assert_eq!(c.geometry.build(None).unwrap().atoms.len(), 2);
    }

    #[test]
    fn round_trip_and_rejections() {
        let c = RunConfig::dissociation();
        assert_eq!(RunConfig::from_toml(&c.to_toml().unwrap()).unwrap(), c);
        assert!(RunConfig::from_toml("strategies = []").is_err());
        assert!(RunConfig::from_toml("scan = [1.0, -0.5]").is_err());
        assert!(RunConfig::from_toml("unknown_key = 3").is_err());
    }
}
