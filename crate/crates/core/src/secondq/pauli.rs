//! Pauli words and sums.
//!
//! A word stores one 2-bit code per qubit (I=0, X=1, Y=2, Z=3) packed into a
//! `u128`, qubit 0 in the lowest bits. Ordering compares the packed code,
//! which is lexicographic over the printed word (qubit 0 rightmost) with
//! I < X < Y < Z. Trotter products follow this order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const MAX_QUBITS: usize = 64;
/// Coefficients below this magnitude are dropped after arithmetic.
pub const PRUNE_THRESHOLD: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn code(self) -> u128 {
        match self {
            Pauli::I => 0,
            Pauli::X => 1,
            Pauli::Y => 2,
            Pauli::Z => 3,
        }
    }

    fn from_code(c: u128) -> Self {
        match c & 3 {
            0 => Pauli::I,
            1 => Pauli::X,
            2 => Pauli::Y,
            _ => Pauli::Z,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    /// Single-qubit product `self · other = phase · result`.
    fn mul(self, other: Pauli) -> (Complex64, Pauli) {
        use Pauli::*;
        let i = Complex64::i();
        let one = Complex64::new(1.0, 0.0);
        match (self, other) {
            (I, p) | (p, I) => (one, p),
            (X, X) | (Y, Y) | (Z, Z) => (one, I),
            (X, Y) => (i, Z),
            (Y, X) => (-i, Z),
            (Y, Z) => (i, X),
            (Z, Y) => (-i, X),
            (Z, X) => (i, Y),
            (X, Z) => (-i, Y),
        }
    }
}

/// Tensor product of single-qubit Paulis on up to 64 qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct PauliWord(u128);

impl PauliWord {
    pub fn identity() -> Self {
        Self(0)
    }

    pub fn single(qubit: usize, p: Pauli) -> Self {
        Self(p.code() << (2 * qubit))
    }

    pub fn get(&self, qubit: usize) -> Pauli {
        Pauli::from_code(self.0 >> (2 * qubit))
    }

    pub fn with(mut self, qubit: usize, p: Pauli) -> Self {
        self.0 &= !(3u128 << (2 * qubit));
        self.0 |= p.code() << (2 * qubit);
        self
    }

    pub fn is_identity(&self) -> bool {
        self.0 == 0
    }

    pub fn packed(&self) -> u128 {
        self.0
    }

    /// Bit mask of qubits carrying X or Y (the bit-flip pattern).
    pub fn flip_mask(&self) -> u64 {
        let mut m = 0u64;
        for q in 0..MAX_QUBITS {
            if matches!(self.get(q), Pauli::X | Pauli::Y) {
                m |= 1 << q;
            }
        }
        m
    }

    /// Bit mask of qubits carrying Z or Y (the sign pattern).
    pub fn phase_mask(&self) -> u64 {
        let mut m = 0u64;
        for q in 0..MAX_QUBITS {
            if matches!(self.get(q), Pauli::Z | Pauli::Y) {
                m |= 1 << q;
            }
        }
        m
    }

    pub fn y_count(&self) -> u32 {
        (0..MAX_QUBITS).filter(|&q| self.get(q) == Pauli::Y).count() as u32
    }

    /// Highest qubit with a non-identity factor, if any.
    pub fn support_max(&self) -> Option<usize> {
        (self.0 != 0).then(|| (127 - self.0.leading_zeros() as usize) / 2)
    }

    /// Product `self · other = phase · word`.
    pub fn mul(&self, other: &PauliWord) -> (Complex64, PauliWord) {
        let mut phase = Complex64::new(1.0, 0.0);
        let mut out = PauliWord::identity();
        let (mut a, mut b) = (self.0, other.0);
        let mut q = 0;
        while a != 0 || b != 0 {
            let (ph, p) = Pauli::from_code(a).mul(Pauli::from_code(b));
            phase *= ph;
            out.0 |= p.code() << (2 * q);
            a >>= 2;
            b >>= 2;
            q += 1;
        }
        (phase, out)
    }

    pub fn commutes_with(&self, other: &PauliWord) -> bool {
        let anti = (self.flip_mask() & other.phase_mask()) ^ (self.phase_mask() & other.flip_mask());
        anti.count_ones() % 2 == 0
    }

    /// Renders the word on `n` qubits, qubit 0 rightmost.
    pub fn render(&self, n: usize) -> String {
        (0..n).rev().map(|q| self.get(q).symbol()).collect()
    }

    /// Parses an `IXYZ` word with qubit 0 rightmost.
    pub fn parse(s: &str) -> Result<Self> {
        let n = s.len();
        if n > MAX_QUBITS {
            return Err(Error::Dimension(format!("{n} qubits exceeds {MAX_QUBITS}")));
        }
        let mut w = PauliWord::identity();
        for (k, ch) in s.chars().enumerate() {
            let q = n - 1 - k;
            let p = match ch {
                'I' => Pauli::I,
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                _ => {
                    return Err(Error::Parse {
                        line: 0,
                        message: format!("invalid Pauli symbol `{ch}`"),
                    })
                }
            };
            w = w.with(q, p);
        }
        Ok(w)
    }
}

impl Ord for PauliWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl PartialOrd for PauliWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Linear combination of Pauli words on a fixed number of qubits.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PauliSum {
    n_qubits: usize,
    terms: BTreeMap<PauliWord, Complex64>,
}

impl PauliSum {
    pub fn zero(n_qubits: usize) -> Self {
        assert!(n_qubits <= MAX_QUBITS, "at most {MAX_QUBITS} qubits");
        Self {
            n_qubits,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(n_qubits: usize, coeff: Complex64) -> Self {
        let mut s = Self::zero(n_qubits);
        s.add_term(PauliWord::identity(), coeff);
        s
    }

    pub fn from_term(n_qubits: usize, word: PauliWord, coeff: Complex64) -> Self {
        let mut s = Self::zero(n_qubits);
        s.add_term(word, coeff);
        s
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&PauliWord, &Complex64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, word: &PauliWord) -> Complex64 {
        self.terms.get(word).copied().unwrap_or_default()
    }

    /// Accumulates without pruning; call [`PauliSum::prune`] afterwards.
    pub fn add_term(&mut self, word: PauliWord, coeff: Complex64) {
        debug_assert!(word.support_max().map_or(true, |q| q < self.n_qubits));
        *self.terms.entry(word).or_default() += coeff;
    }

    pub fn prune(&mut self) {
        self.terms.retain(|_, c| c.norm() >= PRUNE_THRESHOLD);
    }

    pub fn add_scaled(&mut self, other: &PauliSum, scale: Complex64) {
        assert_eq!(self.n_qubits, other.n_qubits, "qubit count mismatch");
        for (w, c) in &other.terms {
            *self.terms.entry(*w).or_default() += c * scale;
        }
        self.prune();
    }

    pub fn scaled(&self, scale: Complex64) -> PauliSum {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c *= scale;
        }
        out.prune();
        out
    }

    pub fn mul(&self, other: &PauliSum) -> PauliSum {
        assert_eq!(self.n_qubits, other.n_qubits, "qubit count mismatch");
        let mut out = PauliSum::zero(self.n_qubits);
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                let (ph, w) = wa.mul(wb);
                out.add_term(w, ph * ca * cb);
            }
        }
        out.prune();
        out
    }

    pub fn dagger(&self) -> PauliSum {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.conj();
        }
        out
    }

    pub fn max_imag(&self) -> f64 {
        self.terms.values().map(|c| c.im.abs()).fold(0.0, f64::max)
    }

    pub fn max_real(&self) -> f64 {
        self.terms.values().map(|c| c.re.abs()).fold(0.0, f64::max)
    }

    /// Drops imaginary parts (roundoff cleanup for Hermitian sums).
    pub fn real_part(&self) -> PauliSum {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            c.im = 0.0;
        }
        out.prune();
        out
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_imag() <= tol
    }

    pub fn is_anti_hermitian(&self, tol: f64) -> bool {
        self.max_real() <= tol
    }

    /// Σ |c| over the terms, optionally skipping the identity.
    pub fn l1_norm(&self, include_identity: bool) -> f64 {
        self.terms
            .iter()
            .filter(|(w, _)| include_identity || !w.is_identity())
            .map(|(_, c)| c.norm())
            .sum()
    }

    pub fn commutator(&self, other: &PauliSum) -> PauliSum {
        let mut ab = self.mul(other);
        ab.add_scaled(&other.mul(self), Complex64::new(-1.0, 0.0));
        ab
    }

    /// Embeds into a register with `extra` additional high qubits, placing
    /// `prefix` on them (e.g. an ancilla factor).
    pub fn extended(&self, n_total: usize, high: &[(usize, Pauli)]) -> PauliSum {
        assert!(n_total >= self.n_qubits && n_total <= MAX_QUBITS);
        let mut prefix = PauliWord::identity();
        for &(q, p) in high {
            assert!(q >= self.n_qubits && q < n_total);
            prefix = prefix.with(q, p);
        }
        let mut out = PauliSum::zero(n_total);
        for (w, c) in &self.terms {
            out.add_term(PauliWord(w.0 | prefix.0), *c);
        }
        out
    }

    /// Dense row-major matrix in the computational basis (small n only).
    pub fn to_dense(&self) -> Vec<Complex64> {
        let dim = 1usize << self.n_qubits;
        let mut m = vec![Complex64::default(); dim * dim];
        for (w, c) in &self.terms {
            let flip = w.flip_mask() as usize;
            let sign_mask = w.phase_mask() as usize;
            let y_phase = Complex64::i().powu(w.y_count());
            for col in 0..dim {
                let row = col ^ flip;
                let sign = if (col & sign_mask).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                m[row * dim + col] += c * y_phase * sign;
            }
        }
        m
    }

    /// One term per line, `±c.ccccccccce±dd WORD` (real coefficient) or
    /// `±re ±im WORD` when the coefficient has an imaginary part.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (w, c) in &self.terms {
            if c.im.abs() < PRUNE_THRESHOLD {
                out.push_str(&format!("{} {}\n", sci(c.re), w.render(self.n_qubits)));
            } else {
                out.push_str(&format!("{} {} {}\n", sci(c.re), sci(c.im), w.render(self.n_qubits)));
            }
        }
        out
    }

    pub fn parse_dump(text: &str) -> Result<PauliSum> {
        let mut sum: Option<PauliSum> = None;
        for (idx, line) in text.lines().enumerate() {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse {
                line: idx + 1,
                message,
            };
            let (re, im, word) = match fields.as_slice() {
                [re, word] => (*re, "0", *word),
                [re, im, word] => (*re, *im, *word),
                _ => return Err(err(format!("unrecognised term `{line}`"))),
            };
            let re: f64 = re.parse().map_err(|_| err(format!("bad coefficient `{re}`")))?;
            let im: f64 = im.parse().map_err(|_| err(format!("bad coefficient `{im}`")))?;
            let w = PauliWord::parse(word).map_err(|_| err(format!("bad word `{word}`")))?;
            let s = sum.get_or_insert_with(|| PauliSum::zero(word.len()));
            if s.n_qubits != word.len() {
                return Err(err("inconsistent word length".into()));
            }
            s.add_term(w, Complex64::new(re, im));
        }
        let mut s = sum.unwrap_or_else(|| PauliSum::zero(0));
        s.prune();
        Ok(s)
    }
}

impl FromStr for PauliWord {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        PauliWord::parse(s)
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump())
    }
}

/// `±c.ccccccccce±dd`
fn sci(v: f64) -> String {
    let sign = if v.is_sign_negative() && v != 0.0 { '-' } else { '+' };
    let a = v.abs();
    if a == 0.0 {
        return format!("{sign}0.000000000e+00");
    }
    let s = format!("{a:.9e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let esign = if exp < 0 { '-' } else { '+' };
    format!("{sign}{mantissa}e{esign}{:02}", exp.abs())
}
