//! Binary trace dump: little-endian f64 samples with a fixed header.
//!
//! Layout: magic `LVK1`, `n_axes: u32`, `n_steps: u64`, `dt: f64`, then
//! `n_axes` blocks of `n_steps` little-endian f64 position samples.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"LVK1";

pub fn write_trace(path: &Path, dt: f64, axes: &[Vec<f64>]) -> Result<()> {
    let n_steps = axes.first().map_or(0, Vec::len);
    if axes.iter().any(|a| a.len() != n_steps) {
        return Err(Error::InvalidConfig("all axes must have equal length".into()));
    }
    let mut file = std::io::BufWriter::new(
        std::fs::File::create(path)
            .map_err(|e| Error::InvalidConfig(format!("cannot create {path:?}: {e}")))?,
    );
    let io = |e: std::io::Error| Error::InvalidConfig(format!("write {path:?}: {e}"));
    file.write_all(MAGIC).map_err(io)?;
    file.write_all(&(axes.len() as u32).to_le_bytes()).map_err(io)?;
    file.write_all(&(n_steps as u64).to_le_bytes()).map_err(io)?;
    file.write_all(&dt.to_le_bytes()).map_err(io)?;
    for axis in axes {
        for &v in axis {
            file.write_all(&v.to_le_bytes()).map_err(io)?;
        }
    }
    file.flush().map_err(io)
}

pub fn read_trace(path: &Path) -> Result<(f64, Vec<Vec<f64>>)> {
    let mut file = std::io::BufReader::new(
        std::fs::File::open(path)
            .map_err(|e| Error::InvalidConfig(format!("cannot open {path:?}: {e}")))?,
    );
    let io = |e: std::io::Error| Error::InvalidConfig(format!("read {path:?}: {e}"));
    let mut magic = [0u8; 4];
    file.read_exact(&mut magic).map_err(io)?;
    if &magic != MAGIC {
        return Err(Error::InvalidConfig(format!("bad trace magic {magic:?}")));
    }
    let mut b4 = [0u8; 4];
    file.read_exact(&mut b4).map_err(io)?;
    let n_axes = u32::from_le_bytes(b4) as usize;
    let mut b8 = [0u8; 8];
    file.read_exact(&mut b8).map_err(io)?;
    let n_steps = u64::from_le_bytes(b8) as usize;
    file.read_exact(&mut b8).map_err(io)?;
    let dt = f64::from_le_bytes(b8);
    let mut axes = Vec::with_capacity(n_axes);
    for _ in 0..n_axes {
        let mut series = Vec::with_capacity(n_steps);
        for _ in 0..n_steps {
            file.read_exact(&mut b8).map_err(io)?;
            series.push(f64::from_le_bytes(b8));
        }
        axes.push(series);
    }
    Ok((dt, axes))
}
