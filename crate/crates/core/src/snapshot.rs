//! The `NLSF1` binary field format.

use std::io::{Read, Write};
use std::path::Path;

use ndarray::Array2;
use num_complex::Complex64;

use crate::{Error, Field, GridSpec, Representation, Result};

pub const MAGIC: &[u8; 6] = b"NLSF1\0";

pub fn write_field<W: Write>(out: &mut W, f: &Field) -> Result<()> {
    let g = f.grid();
    out.write_all(MAGIC)?;
    out.write_all(&(g.n() as u32).to_le_bytes())?;
    out.write_all(&g.side().to_le_bytes())?;
    let flag: u8 = match f.representation() {
        Representation::Physical => 0,
        Representation::Spectral => 1,
    };
    out.write_all(&[flag])?;
    let mut buf = Vec::with_capacity(16 * g.n() * g.n());
    for z in f.values().iter() {
        buf.extend_from_slice(&z.re.to_le_bytes());
        buf.extend_from_slice(&z.im.to_le_bytes());
    }
    out.write_all(&buf)?;
    Ok(())
}

pub fn read_field<R: Read>(input: &mut R) -> Result<Field> {
    let mut magic = [0u8; 6];
    input.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Format("bad NLSF1 magic".into()));
    }
    let mut b4 = [0u8; 4];
    input.read_exact(&mut b4)?;
    let n = u32::from_le_bytes(b4) as usize;
    let mut b8 = [0u8; 8];
    input.read_exact(&mut b8)?;
    let side = f64::from_le_bytes(b8);
    let mut flag = [0u8; 1];
    input.read_exact(&mut flag)?;
    let repr = match flag[0] {
        0 => Representation::Physical,
        1 => Representation::Spectral,
        other => return Err(Error::Format(format!("unknown representation flag {other}"))),
    };
    let grid = GridSpec::new(side, n)?;
    let mut raw = vec![0u8; 16 * n * n];
    input.read_exact(&mut raw)?;
    let data: Vec<Complex64> = raw
        .chunks_exact(16)
        .map(|c| {
            Complex64::new(
                f64::from_le_bytes(c[..8].try_into().unwrap()),
                f64::from_le_bytes(c[8..].try_into().unwrap()),
            )
        })
        .collect();
    let values = Array2::from_shape_vec((n, n), data).map_err(|e| Error::Format(e.to_string()))?;
    Field::from_values(grid, repr, values)
}

pub fn save_field(path: impl AsRef<Path>, f: &Field) -> Result<()> {
    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_field(&mut file, f)?;
    file.flush()?;
    Ok(())
}

pub fn load_field(path: impl AsRef<Path>) -> Result<Field> {
    let mut file = std::io::BufReader::new(std::fs::File::open(path)?);
    read_field(&mut file)
}

/// Plain-text `key = value` manifest, one pair per line.
pub fn write_manifest(path: impl AsRef<Path>, pairs: &[(String, String)]) -> Result<()> {
    let mut s = String::new();
    for (k, v) in pairs {
        s.push_str(&format!("{k} = {v}\n"));
    }
    std::fs::write(path, s)?;
    Ok(())
}

pub fn read_manifest(path: impl AsRef<Path>) -> Result<Vec<(String, String)>> {
    let text = std::fs::read_to_string(path)?;
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            l.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| Error::Format(format!("manifest line without '=': {l}")))
        })
        .collect()
}
