//! Binary statevector snapshots: 8-byte magic, qubit count as u32 LE, then
//! (re, im) f64 LE pairs.

use std::fs;
use std::path::Path;

use num_complex::Complex64;

use super::state::StateVector;
use crate::error::{Error, Result};

pub const SNAPSHOT_MAGIC: &[u8; 8] = b"ESCQESV1";

pub fn encode_snapshot(state: &StateVector) -> Vec<u8> {
    let mut buf = Vec::with_capacity(12 + 16 * state.dim());
    buf.extend_from_slice(SNAPSHOT_MAGIC);
    buf.extend_from_slice(&(state.n_qubits() as u32).to_le_bytes());
    for a in state.amplitudes() {
        buf.extend_from_slice(&a.re.to_le_bytes());
        buf.extend_from_slice(&a.im.to_le_bytes());
    }
    buf
}

pub fn decode_snapshot(bytes: &[u8]) -> Result<StateVector> {
    let bad = |message: &str| Error::Parse {
        line: 0,
        message: format!("snapshot: {message}"),
    };
    if bytes.len() < 12 || &bytes[..8] != SNAPSHOT_MAGIC {
        return Err(bad("missing magic header"));
    }
    let n = u32::from_le_bytes(bytes[8..12].try_into().expect("4 bytes")) as usize;
    if n > 30 || bytes.len() != 12 + 16 * (1usize << n) {
        return Err(bad("payload length does not match qubit count"));
    }
    let amps = bytes[12..]
        .chunks_exact(16)
        .map(|c| {
            Complex64::new(
                f64::from_le_bytes(c[..8].try_into().expect("8 bytes")),
                f64::from_le_bytes(c[8..].try_into().expect("8 bytes")),
            )
        })
        .collect();
    StateVector::from_amplitudes(n, amps)
}

pub fn write_snapshot(path: impl AsRef<Path>, state: &StateVector) -> Result<()> {
    fs::write(path, encode_snapshot(state))?;
    Ok(())
}

pub fn read_snapshot(path: impl AsRef<Path>) -> Result<StateVector> {
    decode_snapshot(&fs::read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bit_exact() {
        let s = StateVector::normalized(
            2,
            vec![
                Complex64::new(0.1, -0.3),
                Complex64::new(0.7, 0.0),
                Complex64::new(-0.2, 0.25),
                Complex64::new(0.0, 1.0 / 3.0),
            ],
        )
        .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.bin");
        write_snapshot(&path, &s).unwrap();
        assert_eq!(read_snapshot(&path).unwrap(), s);
    }

    #[test]
    fn corrupt_payload_rejected() {
        let s = StateVector::basis(2, 1);
        let mut bytes = encode_snapshot(&s);
        bytes.pop();
        assert!(decode_snapshot(&bytes).is_err());
        bytes[0] = b'X';
        assert!(decode_snapshot(&bytes).is_err());
    }
}
