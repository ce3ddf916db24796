//! Field snapshot files: a short self-describing text header followed by
//! the raw little-endian f64 payload.
//!
//! Layout:
//!
//! ```text
//! proca-fields 1
//! version 0.1.0
//! config_hash 00000000deadbeef
//! dims 256 1 1
//! spacing 2.4543692606170259e-2 1e0 1e0
//! time 1.2500000000000000e0
//! mu 1e0
//! field_order ex ey ez bx by bz ax ay az phi
//! data f64 little_endian
//!
//! <10 * nx * ny * nz doubles, component-major, x fastest>
//! ```
//!
//! The header ends at the first empty line. Header floats carry 17
//! significant digits so they round-trip exactly.

use crate::error::{Error, Result};
use crate::grid::{EMFieldState, Grid};
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

pub const MAGIC: &str = "proca-fields 1";
const FIELD_ORDER: &str = "ex ey ez bx by bz ax ay az phi";

#[derive(Clone, Debug, PartialEq)]
pub struct SnapshotMeta {
    pub version: String,
    pub config_hash: String,
    pub time: f64,
    pub mu: f64,
}

pub fn write_snapshot(path: &Path, state: &EMFieldState, meta: &SnapshotMeta) -> Result<()> {
    let grid = state.grid();
    let mut w = BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "{MAGIC}")?;
    writeln!(w, "version {}", meta.version)?;
    writeln!(w, "config_hash {}", meta.config_hash)?;
    let [nx, ny, nz] = grid.dims();
    writeln!(w, "dims {nx} {ny} {nz}")?;
    let [dx, dy, dz] = grid.spacing();
    writeln!(w, "spacing {dx:.16e} {dy:.16e} {dz:.16e}")?;
    writeln!(w, "time {:.16e}", meta.time)?;
    writeln!(w, "mu {:.16e}", meta.mu)?;
    writeln!(w, "field_order {FIELD_ORDER}")?;
    writeln!(w, "data f64 little_endian")?;
    writeln!(w)?;

    let mut write_comp = |data: &[f64]| -> Result<()> {
        for v in data {
            w.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    };
    for c in 0..3 {
        write_comp(state.e.comp(c))?;
    }
    for c in 0..3 {
        write_comp(state.b.comp(c))?;
    }
    for c in 0..3 {
        write_comp(state.a.comp(c))?;
    }
    write_comp(state.phi.data())?;
    Ok(())
}

pub fn read_snapshot(path: &Path) -> Result<(EMFieldState, SnapshotMeta)> {
    let mut r = BufReader::new(std::fs::File::open(path)?);
    let mut header = Vec::new();
    loop {
        let mut line = String::new();
        let n = r.read_line(&mut line)?;
        if n == 0 {
            return Err(Error::MalformedSnapshot("unterminated header".into()));
        }
        let line = line.trim_end_matches(['\n', '\r']);
        if line.is_empty() {
            break;
        }
        header.push(line.to_string());
    }
    if header.first().map(String::as_str) != Some(MAGIC) {
        return Err(Error::MalformedSnapshot(format!(
            "bad magic line {:?}",
            header.first()
        )));
    }

    let field = |key: &str| -> Result<String> {
        header
            .iter()
            .find_map(|l| l.strip_prefix(&format!("{key} ")))
            .map(str::to_string)
            .ok_or_else(|| Error::MalformedSnapshot(format!("missing header key '{key}'")))
    };
    let parse_f64 = |key: &str| -> Result<f64> {
        field(key)?
            .parse::<f64>()
            .map_err(|e| Error::MalformedSnapshot(format!("bad {key}: {e}")))
    };

    let dims_raw = field("dims")?;
    let dims: Vec<usize> = dims_raw
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::MalformedSnapshot(format!("bad dims: {e}")))?;
    let spacing_raw = field("spacing")?;
    let spacing: Vec<f64> = spacing_raw
        .split_whitespace()
        .map(|t| t.parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::MalformedSnapshot(format!("bad spacing: {e}")))?;
    if dims.len() != 3 || spacing.len() != 3 {
        return Err(Error::MalformedSnapshot(
            "dims and spacing need three entries".into(),
        ));
    }
    if field("field_order")? != FIELD_ORDER {
        return Err(Error::MalformedSnapshot("unexpected field order".into()));
    }
    let grid = Grid::new(
        [dims[0], dims[1], dims[2]],
        [spacing[0], spacing[1], spacing[2]],
    )
    .map_err(|e| Error::MalformedSnapshot(format!("{e}")))?;

    let meta = SnapshotMeta {
        version: field("version")?,
        config_hash: field("config_hash")?,
        time: parse_f64("time")?,
        mu: parse_f64("mu")?,
    };

    let n = grid.cell_count();
    let mut payload = vec![0u8; n * 10 * 8];
    r.read_exact(&mut payload)
        .map_err(|_| Error::MalformedSnapshot("payload shorter than 10 * cells doubles".into()))?;
    let mut extra = [0u8; 1];
    if r.read(&mut extra)? != 0 {
        return Err(Error::MalformedSnapshot(
            "trailing bytes after payload".into(),
        ));
    }

    let mut state = EMFieldState::zeros(grid);
    let mut offset = 0usize;
    let mut take = |dst: &mut [f64]| {
        for v in dst.iter_mut() {
            let bytes: [u8; 8] = payload[offset..offset + 8].try_into().unwrap();
            *v = f64::from_le_bytes(bytes);
            offset += 8;
        }
    };
    for c in 0..3 {
        take(state.e.comp_mut(c));
    }
    for c in 0..3 {
        take(state.b.comp_mut(c));
    }
    for c in 0..3 {
        take(state.a.comp_mut(c));
    }
    take(state.phi.data_mut());
    Ok((state, meta))
}
