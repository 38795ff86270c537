//! Contracted s-type Gaussians and the shipped STO-3G data file.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const STO3G_NW: &str = include_str!("../../data/sto-3g.nw");

/// Contracted s-type Gaussian. Coefficients include primitive normalisation
/// and are rescaled so that the contracted function has unit self-overlap.
#[derive(Debug, Clone, PartialEq)]
pub struct ContractedGaussian {
    /// Centre in Bohr.
    pub center: [f64; 3],
    /// (exponent in 1/Bohr², coefficient).
    pub primitives: Vec<(f64, f64)>,
}

impl ContractedGaussian {
    /// Builds a normalised contraction from exponents and coefficients that
    /// refer to unit-normalised primitives.
    pub fn new(center: [f64; 3], shell: &[(f64, f64)]) -> Result<Self> {
        if shell.is_empty() || shell.iter().any(|&(a, _)| !(a > 0.0) || !a.is_finite()) {
            return Err(Error::Geometry(
                "Gaussian exponents must be positive and finite".into(),
            ));
        }
        let mut primitives: Vec<(f64, f64)> = shell
            .iter()
            .map(|&(a, c)| (a, c * (2.0 * a / PI).powf(0.75)))
            .collect();
        let mut self_overlap = 0.0;
        for &(a, ca) in &primitives {
            for &(b, cb) in &primitives {
                self_overlap += ca * cb * (PI / (a + b)).powf(1.5);
            }
        }
        let scale = self_overlap.sqrt().recip();
        for p in &mut primitives {
            p.1 *= scale;
        }
        Ok(Self { center, primitives })
    }
}

/// Per-element list of s shells parsed from an NWChem-format basis file.
#[derive(Debug, Clone)]
pub struct BasisSet {
    pub name: String,
    shells: Vec<(String, Vec<(f64, f64)>)>,
}

impl BasisSet {
    pub fn by_name(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "sto-3g" | "sto3g" => Self::parse_nwchem("sto-3g", STO3G_NW),
            _ => Err(Error::UnsupportedBasis(name.to_string())),
        }
    }

    pub fn parse_nwchem(name: &str, text: &str) -> Result<Self> {
        let mut shells: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with("BASIS") || line == "END" {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let err = |message: String| Error::Parse {
                line: idx + 1,
                message,
            };
            match fields.as_slice() {
                [element, kind] if kind.chars().all(|c| c.is_ascii_alphabetic()) => {
                    if !kind.eq_ignore_ascii_case("S") {
                        return Err(err(format!("only s shells are supported, found `{kind}`")));
                    }
                    shells.push((element.to_string(), Vec::new()));
                }
                [exp, coef] => {
                    let shell = shells
                        .last_mut()
                        .ok_or_else(|| err("primitive before any shell header".into()))?;
                    let a: f64 = exp.parse().map_err(|_| err(format!("bad exponent `{exp}`")))?;
                    let c: f64 = coef.parse().map_err(|_| err(format!("bad coefficient `{coef}`")))?;
                    shell.1.push((a, c));
                }
                _ => return Err(err(format!("unrecognised line `{line}`"))),
            }
        }
        Ok(Self {
            name: name.to_string(),
            shells,
        })
    }

    pub fn shells_for(&self, element: &str) -> Result<Vec<&[(f64, f64)]>> {
        let found: Vec<&[(f64, f64)]> = self
            .shells
            .iter()
            .filter(|(e, _)| e.eq_ignore_ascii_case(element))
            .map(|(_, s)| s.as_slice())
            .collect();
        if found.is_empty() {
            return Err(Error::UnsupportedElement(element.to_string()));
        }
        Ok(found)
    }
}
