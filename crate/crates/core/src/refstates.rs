//! Initial states: Slater determinants, configuration state functions built
//! by genealogical spin coupling, and energy-sorted guess pools.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fci::combinations;
use crate::molint::SpinOrbitalHamiltonian;
use crate::secondq::assemble_hamiltonian;
use crate::secondq::fock::apply_ladder;
use crate::secondq::Ladder;
use crate::sim::{inner_product, CompiledOperator, StateVector};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DeterminantSpec {
    pub occupied: Vec<usize>,
}

impl DeterminantSpec {
    pub fn new(mut occupied: Vec<usize>) -> Self {
        occupied.sort_unstable();
        occupied.dedup();
        Self { occupied }
    }

    pub fn bits(&self) -> u64 {
        self.occupied.iter().fold(0, |b, &p| b | 1 << p)
    }
}

impl fmt::Display for DeterminantSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.occupied.iter().map(|p| p.to_string()).collect();
        write!(f, "[{}]", items.join(","))
    }
}

pub fn prepare_determinant(spec: &DeterminantSpec, n_qubits: usize) -> Result<StateVector> {
    if let Some(&p) = spec.occupied.iter().find(|&&p| p >= n_qubits) {
        return Err(Error::IndexOutOfRange { index: p, size: n_qubits });
    }
    Ok(StateVector::basis(n_qubits, spec.bits()))
}

/// Orbital configuration plus a coupling path over its open shells.
/// `path[i] = +1` couples the i-th open shell up (S → S + ½), `-1` down.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CsfSpec {
    pub occupations: Vec<u8>,
    pub path: Vec<i8>,
    /// Twice the target M.
    pub m2: i32,
}

impl CsfSpec {
    pub fn open_shells(&self) -> Vec<usize> {
        (0..self.occupations.len()).filter(|&p| self.occupations[p] == 1).collect()
    }

    /// Twice the total spin.
    pub fn s2(&self) -> i32 {
        self.path.iter().map(|&t| t as i32).sum()
    }

    pub fn validate(&self) -> Result<()> {
        if self.occupations.iter().any(|&o| o > 2) {
            return Err(Error::CouplingPath("occupations must be 0, 1 or 2".into()));
        }
        if self.path.len() != self.open_shells().len() {
            return Err(Error::CouplingPath(format!(
                "{} steps for {} open shells",
                self.path.len(),
                self.open_shells().len()
            )));
        }
        let mut s = 0;
        for (i, &t) in self.path.iter().enumerate() {
            if t != 1 && t != -1 {
                return Err(Error::CouplingPath(format!("step {i} is {t}, expected ±1")));
            }
            s += t as i32;
            if s < 0 {
                return Err(Error::CouplingPath(format!("spin becomes negative at step {i}")));
            }
        }
        if self.m2.abs() > s || (s - self.m2) % 2 != 0 {
            return Err(Error::CouplingPath(format!("M = {}/2 incompatible with S = {s}/2", self.m2)));
        }
        Ok(())
    }

    pub fn n_electrons(&self) -> usize {
        self.occupations.iter().map(|&o| o as usize).sum()
    }
}

impl fmt::Display for CsfSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let occ: String = self.occupations.iter().map(|o| char::from(b'0' + o)).collect();
        let path: String = self.path.iter().map(|&t| if t > 0 { '+' } else { '-' }).collect();
        write!(f, "{occ}:{path}")
    }
}

impl FromStr for CsfSpec {
    type Err = Error;

    /// `"2110:+-"` (M = 0) or `"2110:++:2"` with explicit 2M.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::CouplingPath(format!("cannot parse CSF `{s}`"));
        if parts.len() < 2 || parts.len() > 3 {
            return Err(bad());
        }
        let occupations = parts[0]
            .chars()
            .map(|c| c.to_digit(10).map(|d| d as u8).ok_or_else(bad))
            .collect::<Result<Vec<_>>>()?;
        let path = parts[1]
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                _ => Err(bad()),
            })
            .collect::<Result<Vec<_>>>()?;
        let m2 = match parts.get(2) {
            Some(m) => m.parse().map_err(|_| bad())?,
            None => 0,
        };
        let spec = CsfSpec { occupations, path, m2 };
        spec.validate()?;
        Ok(spec)
    }
}

/// Spin functions of the first `path.len()` open shells as (spin pattern,
/// coefficient) with bit i set when open shell i carries β spin.
fn spin_function(path: &[i8], m2: i32) -> Vec<(u64, f64)> {
    let k = path.len();
    if k == 0 {
        return if m2 == 0 { vec![(0, 1.0)] } else { Vec::new() };
    }
    let s2: i32 = path.iter().map(|&t| t as i32).sum();
    let prev_s2 = s2 - path[k - 1] as i32;
    let s = s2 as f64 / 2.0;
    let m = m2 as f64 / 2.0;
    let mut out = Vec::new();
    for (sigma2, beta) in [(1, false), (-1, true)] {
        let prev_m2 = m2 - sigma2;
        if prev_m2.abs() > prev_s2 {
            continue;
        }
        let c = if path[k - 1] > 0 {
            if sigma2 > 0 {
                ((s + m) / (2.0 * s)).sqrt()
            } else {
                ((s - m) / (2.0 * s)).sqrt()
            }
        } else if sigma2 > 0 {
            -((s - m + 1.0) / (2.0 * s + 2.0)).sqrt()
        } else {
            ((s + m + 1.0) / (2.0 * s + 2.0)).sqrt()
        };
        if c == 0.0 {
            continue;
        }
        for (pattern, coeff) in spin_function(&path[..k - 1], prev_m2) {
            let bit = if beta { 1u64 << (k - 1) } else { 0 };
            out.push((pattern | bit, coeff * c));
        }
    }
    out
}

/// Creates doubly occupied orbitals first, then open shells in orbital
/// order, and fixes the phase so the first nonzero amplitude is positive.
pub fn prepare_csf(spec: &CsfSpec) -> Result<StateVector> {
    spec.validate()?;
    let r = spec.occupations.len();
    let n = 2 * r;
    let open = spec.open_shells();
    let mut ops: Vec<usize> = Vec::new();
    for (p, &o) in spec.occupations.iter().enumerate() {
        if o == 2 {
            ops.push(2 * p);
            ops.push(2 * p + 1);
        }
    }
    let mut amps = vec![Complex64::default(); 1 << n];
    for (pattern, coeff) in spin_function(&spec.path, spec.m2) {
        let mut bits = 0u64;
        let mut sign = 1.0;
        let mut seq = ops.clone();
        for (i, &p) in open.iter().enumerate() {
            seq.push(2 * p + (pattern >> i & 1) as usize);
        }
        for q in seq {
            let (s, next) = apply_ladder(bits, Ladder::Create, q).expect("orbitals created once");
            sign *= s;
            bits = next;
        }
        amps[bits as usize] += coeff * sign;
    }
    if let Some(first) = amps.iter().find(|a| a.norm() > 1e-12).copied() {
        if first.re < 0.0 {
            for a in &mut amps {
                *a = -*a;
            }
        }
    }
    StateVector::normalized(n, amps)
}

/// All coupling paths over `k` open shells that end at 2S ≥ |m2|.
pub fn coupling_paths(k: usize, m2: i32) -> Vec<Vec<i8>> {
    fn rec(k: usize, s: i32, acc: &mut Vec<i8>, m2: i32, out: &mut Vec<Vec<i8>>) {
        if acc.len() == k {
            if s >= m2.abs() && (s - m2) % 2 == 0 {
                out.push(acc.clone());
            }
            return;
        }
        for t in [1i8, -1] {
            if s + t as i32 >= 0 {
                acc.push(t);
                rec(k, s + t as i32, acc, m2, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(k, 0, &mut Vec::new(), m2, &mut out);
    out
}

/// All CSFs with `n_electrons` in `r` orbitals and the given 2M.
pub fn enumerate_csfs(r: usize, n_electrons: usize, m2: i32) -> Vec<CsfSpec> {
    let mut out = Vec::new();
    let mut occ = vec![0u8; r];
    fn configs(p: usize, left: usize, occ: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if p == occ.len() {
            if left == 0 {
                out.push(occ.clone());
            }
            return;
        }
        for o in (0..=2u8).rev() {
            if (o as usize) <= left {
                occ[p] = o;
                configs(p + 1, left - o as usize, occ, out);
            }
        }
        occ[p] = 0;
    }
    let mut cfgs = Vec::new();
    configs(0, n_electrons, &mut occ, &mut cfgs);
    for c in cfgs {
        let k = c.iter().filter(|&&o| o == 1).count();
        for path in coupling_paths(k, m2) {
            out.push(CsfSpec {
                occupations: c.clone(),
                path,
                m2,
            });
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GuessSpec {
    Determinant(DeterminantSpec),
    Csf(CsfSpec),
}

impl GuessSpec {
    pub fn prepare(&self, n_qubits: usize) -> Result<StateVector> {
        match self {
            GuessSpec::Determinant(d) => prepare_determinant(d, n_qubits),
            GuessSpec::Csf(c) => prepare_csf(c),
        }
    }
}

impl fmt::Display for GuessSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GuessSpec::Determinant(d) => write!(f, "det{d}"),
            GuessSpec::Csf(c) => write!(f, "csf{c}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GuessKind {
    Sd,
    Csf,
    Mixed,
}

impl FromStr for GuessKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sd" => Ok(GuessKind::Sd),
            "csf" => Ok(GuessKind::Csf),
            "mixed" => Ok(GuessKind::Mixed),
            _ => Err(Error::Config(format!("unknown guess kind `{s}`"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Guess {
    pub spec: GuessSpec,
    pub energy: f64,
    pub state: StateVector,
}

/// Energy-sorted initial guesses in the sector with 2·Sz = `sz2`.
pub fn guess_pool(h: &SpinOrbitalHamiltonian, n_electrons: usize, sz2: i32, kind: GuessKind) -> Result<Vec<Guess>> {
    let r = h.n_spatial();
    let n = h.n_spin_orbitals();
    let twice_alpha = n_electrons as i32 + sz2;
    if twice_alpha < 0 || twice_alpha % 2 != 0 || twice_alpha as usize / 2 > r || n_electrons > n {
        return Err(Error::ElectronCount {
            n_electrons,
            n_orbitals: r,
        });
    }
    let n_alpha = twice_alpha as usize / 2;
    let n_beta = n_electrons - n_alpha;
    if n_beta > r {
        return Err(Error::ElectronCount {
            n_electrons,
            n_orbitals: r,
        });
    }
    let op = CompiledOperator::new(&assemble_hamiltonian(h));

    let determinants = || -> Result<Vec<Guess>> {
        let mut out = Vec::new();
        for a in combinations(r, n_alpha) {
            for b in combinations(r, n_beta) {
                let occ: Vec<usize> = (0..r)
                    .flat_map(|p| {
                        let mut v = Vec::new();
                        if a >> p & 1 == 1 {
                            v.push(2 * p);
                        }
                        if b >> p & 1 == 1 {
                            v.push(2 * p + 1);
                        }
                        v
                    })
                    .collect();
                let spec = DeterminantSpec::new(occ);
                out.push(Guess {
                    energy: h.determinant_energy(&spec.occupied),
                    state: prepare_determinant(&spec, n)?,
                    spec: GuessSpec::Determinant(spec),
                });
            }
        }
        Ok(out)
    };
    let csfs = || -> Result<Vec<Guess>> {
        enumerate_csfs(r, n_electrons, sz2)
            .into_iter()
            .map(|c| {
                let state = prepare_csf(&c)?;
                Ok(Guess {
                    energy: op.expectation(&state).re,
                    state,
                    spec: GuessSpec::Csf(c),
                })
            })
            .collect()
    };

    let mut pool = match kind {
        GuessKind::Sd => determinants()?,
        GuessKind::Csf => csfs()?,
        GuessKind::Mixed => {
            let mut c = csfs()?;
            let extra: Vec<Guess> = determinants()?
                .into_iter()
                .filter(|d| {
                    !c.iter()
                        .any(|g| (inner_product(&g.state, &d.state).norm_sqr() - 1.0).abs() < 1e-10)
                })
                .collect();
            c.extend(extra);
            c
        }
    };
    pool.sort_by(|a, b| a.energy.total_cmp(&b.energy).then_with(|| a.spec.cmp(&b.spec)));
    Ok(pool)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::secondq::{s_squared_operator, sz_operator};
    use crate::sim::fermion_expectation;

    #[test]
    fn open_shell_singlet_closed_form() {
        let spec: CsfSpec = "11:+-".parse().unwrap();
        let s = prepare_csf(&spec).unwrap();
        let a = s.amplitudes();
        // α0β1 (bits 0,3) and β0α1 (bits 1,2); a†_{1β}a†_{0α} and a†_{1α}a†_{0β}.
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((a[0b1001].re.abs() - h).abs() < 1e-12);
        assert!((a[0b0110].re.abs() - h).abs() < 1e-12);
        assert!(a[0b0110].re > 0.0);
        assert!(a[0b1001].re < 0.0);
        let s2 = fermion_expectation(&s, &s_squared_operator(4)).re;
        assert!(s2.abs() < 1e-12);
    }

    #[test]
    fn four_open_shells_give_six_orthonormal_states() {
        let csfs: Vec<CsfSpec> = enumerate_csfs(4, 4, 0)
            .into_iter()
            .filter(|c| c.occupations == vec![1, 1, 1, 1])
            .collect();
        assert_eq!(csfs.len(), 6);
        let states: Vec<StateVector> = csfs.iter().map(|c| prepare_csf(c).unwrap()).collect();
        for (i, a) in states.iter().enumerate() {
            for (j, b) in states.iter().enumerate() {
                let g = inner_product(a, b);
                let target = if i == j { 1.0 } else { 0.0 };
                assert!((g - target).norm() < 1e-10);
            }
            let s = csfs[i].s2() as f64 / 2.0;
            let s2 = fermion_expectation(a, &s_squared_operator(8)).re;
            assert!((s2 - s * (s + 1.0)).abs() < 1e-10);
            assert!(fermion_expectation(a, &sz_operator(8)).re.abs() < 1e-12);
        }
    }

    #[test]
    fn invalid_paths() {
        assert!("11:-+".parse::<CsfSpec>().is_err());
        assert!("11:+".parse::<CsfSpec>().is_err());
        assert!("11:++:4".parse::<CsfSpec>().is_err());
        assert!("13:+".parse::<CsfSpec>().is_err());
    }

    #[test]
    fn display_round_trip() {
        let c: CsfSpec = "2110:++:2".parse().unwrap();
        assert_eq!(c.to_string(), "2110:++");
        assert_eq!(c.m2, 2);
    }

    #[test]
    fn h4_csf_count() {
        assert_eq!(enumerate_csfs(4, 4, 0).len(), 36);
    }
}
