//! FCIDUMP reader/writer (1-based indices, chemists' notation).
//!
//! Records are `value i j k l`: all indices non-zero is `(ij|kl)`,
//! `k = l = 0` is a one-electron integral, `i = j = k = l = 0` is the
//! nuclear repulsion, and `i > 0, j = k = l = 0` is an orbital energy.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;

use super::integrals::{Eri, IntegralSet};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct FcidumpHeader {
    pub norb: usize,
    pub nelec: usize,
    pub ms2: i32,
    pub orbsym: Vec<u32>,
    pub isym: u32,
}

/// Integrals in an orthonormal (MO) basis plus header metadata. The overlap
/// of `integrals` is the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Fcidump {
    pub header: FcidumpHeader,
    pub integrals: IntegralSet,
    pub orbital_energies: Vec<Option<f64>>,
}

const WRITE_THRESHOLD: f64 = 1e-15;
const CONFLICT_TOL: f64 = 1e-10;

impl Fcidump {
    pub fn new(integrals: IntegralSet, nelec: usize, ms2: i32) -> Self {
        let norb = integrals.n_orbitals();
        Self {
            header: FcidumpHeader {
                norb,
                nelec,
                ms2,
                orbsym: vec![1; norb],
                isym: 1,
            },
            integrals,
            orbital_energies: vec![None; norb],
        }
    }

    pub fn render(&self) -> String {
        let h = &self.header;
        let ints = &self.integrals;
        let n = h.norb;
        let mut out = String::new();
        let orbsym: Vec<String> = h.orbsym.iter().map(|s| s.to_string()).collect();
        let _ = writeln!(out, "&FCI NORB={},NELEC={},MS2={},", h.norb, h.nelec, h.ms2);
        let _ = writeln!(out, "  ORBSYM={},", orbsym.join(","));
        let _ = writeln!(out, "  ISYM={},", h.isym);
        let _ = writeln!(out, "&END");
        let record = |out: &mut String, v: f64, i: usize, j: usize, k: usize, l: usize| {
            let _ = writeln!(out, "{v:>24.16e} {i:>4} {j:>4} {k:>4} {l:>4}");
        };
        for i in 0..n {
            for j in 0..=i {
                for k in 0..n {
                    for l in 0..=k {
                        if k * (k + 1) / 2 + l > i * (i + 1) / 2 + j {
                            continue;
                        }
                        let v = ints.eri.get(i, j, k, l);
                        if v.abs() > WRITE_THRESHOLD {
                            record(&mut out, v, i + 1, j + 1, k + 1, l + 1);
                        }
                    }
                }
            }
        }
        for (i, e) in self.orbital_energies.iter().enumerate() {
            if let Some(e) = e {
                record(&mut out, *e, i + 1, 0, 0, 0);
            }
        }
        for i in 0..n {
            for j in 0..=i {
                let v = ints.hcore[(i, j)];
                if v.abs() > WRITE_THRESHOLD {
                    record(&mut out, v, i + 1, j + 1, 0, 0);
                }
            }
        }
        record(&mut out, ints.enuc, 0, 0, 0, 0);
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().peekable();
        let mut header_text = String::new();
        let mut header_start = 1;
        let mut closed = false;
        while let Some((idx, line)) = lines.next() {
            let t = line.trim();
            if header_text.is_empty() && !t.to_ascii_uppercase().starts_with("&FCI") {
                if t.is_empty() {
                    continue;
                }
                return Err(Error::Parse {
                    line: idx + 1,
                    message: "expected `&FCI` header".into(),
                });
            }
            if header_text.is_empty() {
                header_start = idx + 1;
            }
            let upper = t.to_ascii_uppercase();
            let end = upper.find("&END").or_else(|| (upper == "/").then_some(0));
            match end {
                Some(pos) => {
                    header_text.push_str(&t[..pos]);
                    header_text.push(' ');
                    closed = true;
                    break;
                }
                None => {
                    header_text.push_str(t);
                    header_text.push(' ');
                }
            }
        }
        if !closed {
            return Err(Error::Parse {
                line: header_start,
                message: "header is not terminated by `&END` or `/`".into(),
            });
        }
        let header = parse_header(&header_text, header_start)?;
        let n = header.norb;

        let mut eri = Eri::zeros(n);
        let mut eri_seen = vec![false; n * n * n * n];
        let mut hcore = DMatrix::<f64>::zeros(n, n);
        let mut h_seen = vec![false; n * n];
        let mut enuc: Option<f64> = None;
        let mut orbital_energies = vec![None; n];

        for (idx, line) in lines {
            let line_no = idx + 1;
            let t = line.trim();
            if t.is_empty() {
                continue;
            }
            let fields: Vec<&str> = t.split_whitespace().collect();
            let err = |message: String| Error::Parse {
                line: line_no,
                message,
            };
            if fields.len() != 5 {
                return Err(err(format!("expected `value i j k l`, found `{t}`")));
            }
            let value = parse_float(fields[0]).ok_or_else(|| err(format!("bad value `{}`", fields[0])))?;
            let mut ix = [0usize; 4];
            for (slot, f) in ix.iter_mut().zip(&fields[1..]) {
                *slot = f.parse().map_err(|_| err(format!("bad index `{f}`")))?;
                if *slot > n {
                    return Err(err(format!("index {slot} exceeds NORB={n}")));
                }
            }
            let [i, j, k, l] = ix;
            match (i, j, k, l) {
                (0, 0, 0, 0) => {
                    if let Some(old) = enuc {
                        if (old - value).abs() > CONFLICT_TOL {
                            return Err(err("conflicting nuclear repulsion records".into()));
                        }
                    }
                    enuc = Some(value);
                }
                (i, 0, 0, 0) => orbital_energies[i - 1] = Some(value),
                (i, j, 0, 0) if j > 0 => {
                    let (a, b) = (i - 1, j - 1);
                    for (x, y) in [(a, b), (b, a)] {
                        if h_seen[x * n + y] && (hcore[(x, y)] - value).abs() > CONFLICT_TOL {
                            return Err(err(format!("conflicting one-electron record ({i},{j})")));
                        }
                        hcore[(x, y)] = value;
                        h_seen[x * n + y] = true;
                    }
                }
                (i, j, k, l) if i > 0 && j > 0 && k > 0 && l > 0 => {
                    let (p, q, r, s) = (i - 1, j - 1, k - 1, l - 1);
                    let slot = ((p * n + q) * n + r) * n + s;
                    if eri_seen[slot] && (eri.get(p, q, r, s) - value).abs() > CONFLICT_TOL {
                        return Err(err(format!("conflicting two-electron record ({i}{j}|{k}{l})")));
                    }
                    eri.set_symmetric(p, q, r, s, value);
                    for (a, b, c, d) in [
                        (p, q, r, s),
                        (q, p, r, s),
                        (p, q, s, r),
                        (q, p, s, r),
                        (r, s, p, q),
                        (s, r, p, q),
                        (r, s, q, p),
                        (s, r, q, p),
                    ] {
                        eri_seen[((a * n + b) * n + c) * n + d] = true;
                    }
                }
                _ => return Err(err(format!("invalid index pattern {i} {j} {k} {l}"))),
            }
        }

        Ok(Self {
            header,
            integrals: IntegralSet {
                overlap: DMatrix::identity(n, n),
                hcore,
                eri,
                enuc: enuc.unwrap_or(0.0),
            },
            orbital_energies,
        })
    }
}

pub fn read_fcidump(path: impl AsRef<Path>) -> Result<Fcidump> {
    Fcidump::parse(&std::fs::read_to_string(path)?)
}

pub fn write_fcidump(path: impl AsRef<Path>, dump: &Fcidump) -> Result<()> {
    std::fs::write(path, dump.render())?;
    Ok(())
}

fn parse_float(s: &str) -> Option<f64> {
    s.replace(['D', 'd'], "e").parse().ok()
}

fn parse_header(text: &str, line: usize) -> Result<FcidumpHeader> {
    let body = text.trim_start();
    let body = body
        .get(4..)
        .filter(|_| body.to_ascii_uppercase().starts_with("&FCI"))
        .unwrap_or(body);
    let mut entries: Vec<(String, Vec<String>)> = Vec::new();
    for token in body.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
        if let Some((key, value)) = token.split_once('=') {
            let mut values = Vec::new();
            if !value.is_empty() {
                values.push(value.to_string());
            }
            entries.push((key.trim().to_ascii_uppercase(), values));
        } else if let Some(last) = entries.last_mut() {
            last.1.push(token.to_string());
        } else {
            return Err(Error::Parse {
                line,
                message: format!("stray header token `{token}`"),
            });
        }
    }
    let get = |key: &str| entries.iter().find(|(k, _)| k == key).map(|(_, v)| v);
    let scalar = |key: &str| -> Result<Option<i64>> {
        match get(key) {
            None => Ok(None),
            Some(v) if v.len() == 1 => v[0].parse().map(Some).map_err(|_| Error::Parse {
                line,
                message: format!("bad value for {key}"),
            }),
            Some(_) => Err(Error::Parse {
                line,
                message: format!("{key} expects a single value"),
            }),
        }
    };
    let norb = scalar("NORB")?.ok_or(Error::Parse {
        line,
        message: "missing NORB".into(),
    })?;
    if norb <= 0 {
        return Err(Error::Parse {
            line,
            message: "NORB must be positive".into(),
        });
    }
    let norb = norb as usize;
    let nelec = scalar("NELEC")?.ok_or(Error::Parse {
        line,
        message: "missing NELEC".into(),
    })?;
    if nelec < 0 || nelec as usize > 2 * norb {
        return Err(Error::Parse {
            line,
            message: format!("NELEC={nelec} incompatible with NORB={norb}"),
        });
    }
    let ms2 = scalar("MS2")?.unwrap_or(0) as i32;
    let isym = scalar("ISYM")?.unwrap_or(1) as u32;
    let orbsym = match get("ORBSYM") {
        None => vec![1; norb],
        Some(v) => {
            let parsed: Option<Vec<u32>> = v.iter().map(|s| s.parse().ok()).collect();
            let parsed = parsed.ok_or(Error::Parse {
                line,
                message: "bad ORBSYM entry".into(),
            })?;
            if parsed.len() != norb {
                return Err(Error::Parse {
                    line,
                    message: format!("ORBSYM has {} entries, NORB={norb}", parsed.len()),
                });
            }
            parsed
        }
    };
    Ok(FcidumpHeader {
        norb,
        nelec: nelec as usize,
        ms2,
        orbsym,
        isym,
    })
}
