//! Binary field snapshots.
//!
//! Layout: one line of JSON text describing the payload, then raw row-major
//! 64-bit float samples (complex fields interleave re, im). The header
//! declares the byte order; files are always written little-endian, and a
//! big-endian declaration is honored on read by swapping. Writes go through
//! a temp file and a rename, so a snapshot is never visible half-written.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SdError};
use crate::field::{ComplexField, RealField};
use crate::grid::Grid;

/// A stored field with the time it was sampled at.
#[derive(Debug, Clone, PartialEq)]
pub enum Snapshot {
    Complex { field: ComplexField, time: f64 },
    Real { field: RealField, time: f64 },
}

impl Snapshot {
    pub fn time(&self) -> f64 {
        match self {
            Snapshot::Complex { time, .. } | Snapshot::Real { time, .. } => *time,
        }
    }

    pub fn grid(&self) -> &Grid {
        match self {
            Snapshot::Complex { field, .. } => &field.grid,
            Snapshot::Real { field, .. } => &field.grid,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct Header {
    dim: usize,
    points: usize,
    extent: f64,
    time: f64,
    kind: String,
    precision: String,
    byte_order: String,
}

pub fn write_snapshot(snap: &Snapshot, path: &Path) -> Result<()> {
    let grid = snap.grid();
    let (kind, samples): (&str, Vec<f64>) = match snap {
        Snapshot::Complex { field, .. } => {
            let mut s = Vec::with_capacity(2 * field.values.len());
            for z in &field.values {
                s.push(z.re);
                s.push(z.im);
            }
            ("complex", s)
        }
        Snapshot::Real { field, .. } => ("real", field.values.clone()),
    };
    let header = Header {
        dim: grid.dim(),
        points: grid.points_per_axis(),
        extent: grid.extent(),
        time: snap.time(),
        kind: kind.to_string(),
        precision: "f64".to_string(),
        byte_order: "little".to_string(),
    };
    let mut buf = serde_json::to_string(&header)
        .map_err(|e| SdError::SnapshotFormat(e.to_string()))?
        .into_bytes();
    buf.push(b'\n');
    buf.reserve(samples.len() * 8);
    for x in samples {
        buf.extend_from_slice(&x.to_le_bytes());
    }

    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    let tmp = path.with_extension("tmp");
    {
        let mut file = fs::File::create(&tmp)?;
        file.write_all(&buf)?;
        file.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn read_snapshot(path: &Path) -> Result<Snapshot> {
    let mut bytes = Vec::new();
    fs::File::open(path)?.read_to_end(&mut bytes)?;
    let newline = bytes
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| SdError::SnapshotFormat("missing header line".into()))?;
    let header: Header = serde_json::from_slice(&bytes[..newline])
        .map_err(|e| SdError::SnapshotFormat(format!("bad header: {e}")))?;
    if header.precision != "f64" {
        return Err(SdError::SnapshotFormat(format!(
            "unsupported precision {:?}",
            header.precision
        )));
    }
    let big_endian = match header.byte_order.as_str() {
        "little" => false,
        "big" => true,
        other => {
            return Err(SdError::SnapshotFormat(format!("unsupported byte order {other:?}")))
        }
    };
    let grid = Grid::new(header.dim, header.points, header.extent)?;
    let per_sample = match header.kind.as_str() {
        "complex" => 2,
        "real" => 1,
        other => return Err(SdError::SnapshotFormat(format!("unsupported kind {other:?}"))),
    };
    let payload = &bytes[newline + 1..];
    let expected = grid.len() * per_sample * 8;
    if payload.len() != expected {
        return Err(SdError::SnapshotFormat(format!(
            "payload is {} bytes, expected {expected}",
            payload.len()
        )));
    }
    let mut samples = Vec::with_capacity(grid.len() * per_sample);
    for chunk in payload.chunks_exact(8) {
        let arr: [u8; 8] = chunk.try_into().expect("chunks_exact(8)");
        samples.push(if big_endian { f64::from_be_bytes(arr) } else { f64::from_le_bytes(arr) });
    }
    Ok(match header.kind.as_str() {
        "complex" => {
            let values = samples.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect();
            Snapshot::Complex { field: ComplexField { grid, values }, time: header.time }
        }
        _ => Snapshot::Real { field: RealField { grid, values: samples }, time: header.time },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_complex(grid: &Grid, seed: u64) -> ComplexField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        ComplexField {
            grid: grid.clone(),
            values: (0..grid.len())
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect(),
        }
    }

    #[test]
    fn roundtrip_is_bitwise_exact() {
        let dir = tempfile::tempdir().unwrap();
        let grid = Grid::new(2, 16, 7.25).unwrap();
        let field = random_complex(&grid, 3);
        let path = dir.path().join("u.snap");
        write_snapshot(&Snapshot::Complex { field: field.clone(), time: 1.5 }, &path).unwrap();
        match read_snapshot(&path).unwrap() {
            Snapshot::Complex { field: back, time } => {
                assert_eq!(time.to_bits(), 1.5f64.to_bits());
                assert_eq!(back.grid, grid);
                for (a, b) in back.values.iter().zip(&field.values) {
                    assert_eq!(a.re.to_bits(), b.re.to_bits());
                    assert_eq!(a.im.to_bits(), b.im.to_bits());
                }
            }
            other => panic!("wrong kind: {other:?}"),
        }

        let real = RealField::from_fn(&grid, |x| x[0] - 0.3 * x[1]);
        let rpath = dir.path().join("v.snap");
        write_snapshot(&Snapshot::Real { field: real.clone(), time: 0.0 }, &rpath).unwrap();
        match read_snapshot(&rpath).unwrap() {
            Snapshot::Real { field: back, .. } => {
                for (a, b) in back.values.iter().zip(&real.values) {
                    assert_eq!(a.to_bits(), b.to_bits());
                }
            }
            other => panic!("wrong kind: {other:?}"),
        }
    }

    #[test]
    fn corrupt_header_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.snap");
        std::fs::write(&path, b"not json at all\n\x00\x01\x02").unwrap();
        assert!(matches!(read_snapshot(&path), Err(SdError::SnapshotFormat(_))));

        std::fs::write(&path, b"no newline here").unwrap();
        assert!(matches!(read_snapshot(&path), Err(SdError::SnapshotFormat(_))));
    }

    #[test]
    fn truncated_payload_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let grid = Grid::new(1, 8, 1.0).unwrap();
        let field = random_complex(&grid, 9);
        let path = dir.path().join("t.snap");
        write_snapshot(&Snapshot::Complex { field, time: 0.0 }, &path).unwrap();
        let mut bytes = std::fs::read(&path).unwrap();
        bytes.truncate(bytes.len() - 5);
        std::fs::write(&path, &bytes).unwrap();
        match read_snapshot(&path) {
            Err(SdError::SnapshotFormat(msg)) => assert!(msg.contains("payload")),
            other => panic!("expected truncation error, got {other:?}"),
        }
    }

    #[test]
    fn big_endian_declaration_is_honored() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("be.snap");
        let header = r#"{"dim":1,"points":8,"extent":2.0,"time":0.75,"kind":"real","precision":"f64","byte_order":"big"}"#;
        let mut bytes = header.as_bytes().to_vec();
        bytes.push(b'\n');
        let values: Vec<f64> = (0..8).map(|i| i as f64 * 0.5 - 1.0).collect();
        for v in &values {
            bytes.extend_from_slice(&v.to_be_bytes());
        }
        std::fs::write(&path, &bytes).unwrap();
        match read_snapshot(&path).unwrap() {
            Snapshot::Real { field, time } => {
                assert_eq!(time, 0.75);
                assert_eq!(field.values, values);
            }
            other => panic!("wrong kind: {other:?}"),
        }
    }
}
