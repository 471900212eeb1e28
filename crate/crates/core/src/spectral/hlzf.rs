//! The HLZF binary field format.
//!
//! Layout (little endian): magic `HLZF`, `u32` version (1), `u32` ndim,
//! `u32` domain tag (0 physical, 1 frequency), then per axis `u64 N_i` and
//! `f64 L_i`, then the samples as interleaved `(re, im)` `f64` pairs in
//! row-major order.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use super::field::{Domain, SampledField};
use super::grid::GridSpec;
use crate::error::{Error, Result};

pub const MAGIC: [u8; 4] = *b"HLZF";
pub const VERSION: u32 = 1;

pub fn write<W: Write>(field: &SampledField, mut out: W) -> Result<()> {
    out.write_all(&MAGIC)?;
    out.write_all(&VERSION.to_le_bytes())?;
    out.write_all(&(field.grid.ndim() as u32).to_le_bytes())?;
    out.write_all(&field.domain.tag().to_le_bytes())?;
    for (&n, &l) in field.grid.points().iter().zip(field.grid.half_width()) {
        out.write_all(&(n as u64).to_le_bytes())?;
        out.write_all(&l.to_le_bytes())?;
    }
    for v in &field.values {
        out.write_all(&v.re.to_le_bytes())?;
        out.write_all(&v.im.to_le_bytes())?;
    }
    out.flush()?;
    Ok(())
}

pub fn read<R: Read>(mut input: R) -> Result<SampledField> {
    let mut magic = [0u8; 4];
    input.read_exact(&mut magic)?;
    if magic != MAGIC {
        return Err(Error::Format("bad magic bytes".into()));
    }
    let version = read_u32(&mut input)?;
    if version != VERSION {
        return Err(Error::Format(format!("unsupported HLZF version {version}")));
    }
    let ndim = read_u32(&mut input)? as usize;
    if !(1..=3).contains(&ndim) {
        return Err(Error::Format(format!("unsupported dimension {ndim}")));
    }
    let tag = read_u32(&mut input)?;
    let domain = Domain::from_tag(tag).ok_or_else(|| Error::Format(format!("unknown domain tag {tag}")))?;
    let mut points = Vec::with_capacity(ndim);
    let mut half = Vec::with_capacity(ndim);
    for _ in 0..ndim {
        let mut b = [0u8; 8];
        input.read_exact(&mut b)?;
        points.push(u64::from_le_bytes(b) as usize);
        input.read_exact(&mut b)?;
        half.push(f64::from_le_bytes(b));
    }
    let grid = GridSpec::new(points, half).map_err(|e| Error::Format(e.to_string()))?;
    let mut values = Vec::with_capacity(grid.len());
    let mut b = [0u8; 16];
    for _ in 0..grid.len() {
        input.read_exact(&mut b)?;
        let re = f64::from_le_bytes(b[..8].try_into().expect("8 bytes"));
        let im = f64::from_le_bytes(b[8..].try_into().expect("8 bytes"));
        values.push(Complex64::new(re, im));
    }
    SampledField::new(grid, values, domain)
}

pub fn save(field: &SampledField, path: &Path) -> Result<()> {
    write(field, BufWriter::new(File::create(path)?))
}

pub fn load(path: &Path) -> Result<SampledField> {
    read(BufReader::new(File::open(path)?))
}

fn read_u32<R: Read>(input: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    input.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}
