use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Conversion applied exactly once when geometry enters the integral code.
pub const ANGSTROM_TO_BOHR: f64 = 1.8897261246;

const ELEMENTS: [&str; 10] = ["H", "He", "Li", "Be", "B", "C", "N", "O", "F", "Ne"];

/// Nuclear charge for the first-row elements recognised in XYZ input.
pub fn nuclear_charge(symbol: &str) -> Option<u32> {
    ELEMENTS
        .iter()
        .position(|e| e.eq_ignore_ascii_case(symbol))
        .map(|i| i as u32 + 1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub symbol: String,
    /// Cartesian position in Å.
    pub position: [f64; 3],
}

#[derive(Debug, Clone, PartialEq)]
pub struct Geometry {
    pub atoms: Vec<Atom>,
    pub charge: i32,
    pub multiplicity: u32,
    /// Second line of the XYZ file, kept verbatim.
    pub comment: String,
}

impl Geometry {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        let geometry = Self {
            atoms,
            charge: 0,
            multiplicity: 1,
            comment: String::new(),
        };
        geometry.validate()?;
        Ok(geometry)
    }

    /// Planar H4 rectangle centred at the origin in the xy-plane: side `d`
    /// along x and side `a` along y (both in Å).
    pub fn h4_rectangle(a: f64, d: f64) -> Result<Self> {
        if !(a > 0.0 && d > 0.0) {
            return Err(Error::Geometry(format!(
                "rectangle sides must be positive, got a={a}, d={d}"
            )));
        }
        let (x, y) = (0.5 * d, 0.5 * a);
        let corners = [[x, y], [-x, y], [-x, -y], [x, -y]];
        let mut g = Self::new(
            corners
                .iter()
                .map(|c| Atom {
                    symbol: "H".into(),
                    position: [c[0], c[1], 0.0],
                })
                .collect(),
        )?;
        g.comment = format!("H4 rectangle a={a} d={d}");
        Ok(g)
    }

    /// H2 along the z axis with bond length `r` in Å.
    pub fn h2(r: f64) -> Result<Self> {
        let mut g = Self::new(vec![
            Atom {
                symbol: "H".into(),
                position: [0.0, 0.0, -0.5 * r],
            },
            Atom {
                symbol: "H".into(),
                position: [0.0, 0.0, 0.5 * r],
            },
        ])?;
        g.comment = format!("H2 r={r}");
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.atoms.is_empty() {
            return Err(Error::Geometry("no atoms".into()));
        }
        for atom in &self.atoms {
            if atom.position.iter().any(|c| !c.is_finite()) {
                return Err(Error::Geometry(format!(
                    "non-finite position for {}",
                    atom.symbol
                )));
            }
            if nuclear_charge(&atom.symbol).is_none() {
                return Err(Error::UnsupportedElement(atom.symbol.clone()));
            }
        }
        Ok(())
    }

    /// Parses XYZ text: atom count, comment line, then `El x y z` in Å.
    pub fn from_xyz(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, count_line) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "empty XYZ input".into(),
        })?;
        let count: usize = count_line.trim().parse().map_err(|_| Error::Parse {
            line: 1,
            message: format!("expected atom count, found `{}`", count_line.trim()),
        })?;
        let comment = lines.next().map(|(_, l)| l.to_string()).unwrap_or_default();
        let mut atoms = Vec::with_capacity(count);
        for (idx, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parse_err = |message: String| Error::Parse {
                line: idx + 1,
                message,
            };
            if fields.len() < 4 {
                return Err(parse_err(format!("expected `El x y z`, found `{line}`")));
            }
            let mut position = [0.0; 3];
            for (k, field) in fields[1..4].iter().enumerate() {
                position[k] = field
                    .parse()
                    .map_err(|_| parse_err(format!("bad coordinate `{field}`")))?;
            }
            atoms.push(Atom {
                symbol: fields[0].to_string(),
                position,
            });
        }
        if atoms.len() != count {
            return Err(Error::Parse {
                line: 1,
                message: format!("header declares {count} atoms, found {}", atoms.len()),
            });
        }
        let mut g = Self::new(atoms)?;
        g.comment = comment;
        Ok(g)
    }

    pub fn to_xyz(&self) -> String {
        let mut out = format!("{}\n{}\n", self.atoms.len(), self.comment);
        for atom in &self.atoms {
            let [x, y, z] = atom.position;
            let _ = writeln!(out, "{:<2} {:>18.10} {:>18.10} {:>18.10}", atom.symbol, x, y, z);
        }
        out
    }

    pub fn positions_bohr(&self) -> Vec<[f64; 3]> {
        self.atoms
            .iter()
            .map(|a| a.position.map(|c| c * ANGSTROM_TO_BOHR))
            .collect()
    }

    pub fn charges(&self) -> Vec<f64> {
        self.atoms
            .iter()
            .map(|a| nuclear_charge(&a.symbol).unwrap_or(0) as f64)
            .collect()
    }

    pub fn n_electrons(&self) -> usize {
        let z: i64 = self
            .atoms
            .iter()
            .map(|a| nuclear_charge(&a.symbol).unwrap_or(0) as i64)
            .sum();
        (z - self.charge as i64).max(0) as usize
    }

    /// Nuclear repulsion in Hartree.
    pub fn nuclear_repulsion(&self) -> f64 {
        let pos = self.positions_bohr();
        let z = self.charges();
        let mut e = 0.0;
        for i in 0..pos.len() {
            for j in 0..i {
                e += z[i] * z[j] / distance(&pos[i], &pos[j]);
            }
        }
        e
    }

    pub fn translated(&self, shift: [f64; 3]) -> Self {
        let mut g = self.clone();
        for atom in &mut g.atoms {
            for k in 0..3 {
                atom.position[k] += shift[k];
            }
        }
        g
    }

    /// Applies a 3x3 row-major rotation matrix to every position.
    pub fn rotated(&self, rot: [[f64; 3]; 3]) -> Self {
        let mut g = self.clone();
        for atom in &mut g.atoms {
            let p = atom.position;
            atom.position = [0, 1, 2].map(|r| rot[r][0] * p[0] + rot[r][1] * p[1] + rot[r][2] * p[2]);
        }
        g
    }
}

pub(crate) fn distance(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    dist_sq(a, b).sqrt()
}

#[inline]
pub(crate) fn dist_sq(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xyz_round_trip_keeps_comment() {
        let g = Geometry::h4_rectangle(1.0, 1.5).unwrap();
        let back = Geometry::from_xyz(&g.to_xyz()).unwrap();
        assert_eq!(back.comment, g.comment);
        assert_eq!(back.atoms.len(), 4);
        for (a, b) in g.atoms.iter().zip(&back.atoms) {
            for k in 0..3 {
                assert!((a.position[k] - b.position[k]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn xyz_rejects_bad_count() {
        let err = Geometry::from_xyz("3\nc\nH 0 0 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn xyz_reports_bad_coordinate_line() {
        let err = Geometry::from_xyz("1\nc\nH 0 zero 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
    }

    #[test]
    fn h2_repulsion() {
        let g = Geometry::h2(0.74).unwrap();
        let r = 0.74 * ANGSTROM_TO_BOHR;
        assert!((g.nuclear_repulsion() - 1.0 / r).abs() < 1e-14);
        assert_eq!(g.n_electrons(), 2);
    }

    #[test]
    fn non_finite_rejected() {
        let atoms = vec![Atom {
            symbol: "H".into(),
            position: [f64::NAN, 0.0, 0.0],
        }];
        assert!(Geometry::new(atoms).is_err());
    }
}
