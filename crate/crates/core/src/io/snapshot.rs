//! `NSCH` binary snapshots.
//!
//! Layout (little-endian): magic `NSCH`, `u32` version, `u32` dim, `u32` n
//! per axis, `f64` t, `u32` field count, one 16-byte zero-padded name per
//! field, then the raw `f64` arrays in the same order (`u1..u_dim`, `c`),
//! each row-major of length `n^dim`.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Result, SnapshotError};
use crate::solver::State;
use crate::spectral::{divergence_defect, Grid, ScalarField, VectorField};

pub const SNAPSHOT_VERSION: u32 = 1;
const MAGIC: &[u8; 4] = b"NSCH";
const NAME_LEN: usize = 16;

/// Relative spectral divergence below which a loaded velocity is tagged
/// solenoidal.
pub const SOLENOIDAL_TOL: f64 = 1e-10;

fn field_names(dim: usize) -> Vec<String> {
    let mut v: Vec<String> = (1..=dim).map(|i| format!("u{i}")).collect();
    v.push("c".into());
    v
}

pub fn write_snapshot(state: &State, path: &Path) -> Result<()> {
    let g = state.grid();
    let d = g.dim();
    let names = field_names(d);
    let mut buf = Vec::with_capacity(64 + names.len() * (NAME_LEN + 8 * g.len()));
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&SNAPSHOT_VERSION.to_le_bytes());
    buf.extend_from_slice(&(d as u32).to_le_bytes());
    for _ in 0..d {
        buf.extend_from_slice(&(g.n() as u32).to_le_bytes());
    }
    buf.extend_from_slice(&state.t.to_le_bytes());
    buf.extend_from_slice(&(names.len() as u32).to_le_bytes());
    for name in &names {
        let mut b = [0u8; NAME_LEN];
        b[..name.len()].copy_from_slice(name.as_bytes());
        buf.extend_from_slice(&b);
    }
    for f in state.u.components().iter().chain(std::iter::once(&state.c)) {
        for v in f.values() {
            buf.extend_from_slice(&v.to_le_bytes());
        }
    }
    let mut file = fs::File::create(path)?;
    file.write_all(&buf)?;
    file.flush()?;
    Ok(())
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize, what: &str) -> std::result::Result<&'a [u8], SnapshotError> {
        if self.pos + n > self.bytes.len() {
            return Err(SnapshotError::CorruptHeader(format!(
                "file ends inside the header while reading {what}"
            )));
        }
        let s = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u32(&mut self, what: &str) -> std::result::Result<u32, SnapshotError> {
        Ok(u32::from_le_bytes(self.take(4, what)?.try_into().unwrap()))
    }

    fn f64(&mut self, what: &str) -> std::result::Result<f64, SnapshotError> {
        Ok(f64::from_le_bytes(self.take(8, what)?.try_into().unwrap()))
    }
}

/// Reads and validates a snapshot. The velocity is tagged solenoidal when
/// its relative spectral divergence is below [`SOLENOIDAL_TOL`]; it is not
/// re-projected, so restarts continue bit-for-bit.
pub fn read_snapshot(path: &Path) -> Result<State> {
    let bytes = fs::read(path)?;
    Ok(decode(&bytes)?)
}

fn decode(bytes: &[u8]) -> std::result::Result<State, SnapshotError> {
    if bytes.len() < 4 || &bytes[..4] != MAGIC {
        return Err(SnapshotError::BadMagic);
    }
    let mut cur = Cursor { bytes, pos: 4 };
    let version = cur.u32("version")?;
    if version != SNAPSHOT_VERSION {
        return Err(SnapshotError::UnsupportedVersion(version));
    }
    let dim = cur.u32("dim")? as usize;
    if dim != 2 && dim != 3 {
        return Err(SnapshotError::CorruptHeader(format!("dimension {dim}")));
    }
    let ns: Vec<u32> = (0..dim)
        .map(|_| cur.u32("resolution"))
        .collect::<std::result::Result<_, _>>()?;
    if ns.iter().any(|&v| v != ns[0]) {
        return Err(SnapshotError::CorruptHeader(format!(
            "unequal resolutions {ns:?}"
        )));
    }
    let grid =
        Grid::new(dim, ns[0] as usize).map_err(|e| SnapshotError::CorruptHeader(e.to_string()))?;
    let t = cur.f64("time")?;
    if !t.is_finite() {
        return Err(SnapshotError::CorruptHeader(format!("time {t}")));
    }
    let count = cur.u32("field count")? as usize;
    let expected_names = field_names(dim);
    if count != expected_names.len() {
        return Err(SnapshotError::CorruptHeader(format!(
            "expected {} fields, header lists {count}",
            expected_names.len()
        )));
    }
    for want in &expected_names {
        let raw = cur.take(NAME_LEN, "field name")?;
        let end = raw.iter().position(|&b| b == 0).unwrap_or(NAME_LEN);
        if raw[end..].iter().any(|&b| b != 0) || &raw[..end] != want.as_bytes() {
            return Err(SnapshotError::CorruptHeader(format!(
                "expected field {want:?}, found {:?}",
                String::from_utf8_lossy(&raw[..end])
            )));
        }
    }

    let payload = &bytes[cur.pos..];
    let expected = count * grid.len() * 8;
    if payload.len() < expected {
        return Err(SnapshotError::TruncatedPayload {
            expected,
            found: payload.len(),
        });
    }
    if payload.len() > expected {
        return Err(SnapshotError::CorruptHeader(format!(
            "{} trailing bytes after the payload",
            payload.len() - expected
        )));
    }

    let mut fields = Vec::with_capacity(count);
    for (f, name) in expected_names.iter().enumerate() {
        let chunk = &payload[f * grid.len() * 8..(f + 1) * grid.len() * 8];
        let values: Vec<f64> = chunk
            .chunks_exact(8)
            .map(|b| f64::from_le_bytes(b.try_into().unwrap()))
            .collect();
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(SnapshotError::NonFinitePayload {
                field: name.clone(),
                index,
            });
        }
        fields.push(ScalarField::from_vec(grid, values));
    }
    let c = fields.pop().expect("order parameter present");
    let u = VectorField::from_parts(grid, fields, false);
    let solenoidal = divergence_defect(&u) <= SOLENOIDAL_TOL;
    let u = VectorField::from_parts(grid, u.into_components(), solenoidal);
    Ok(State { t, u, c })
}
