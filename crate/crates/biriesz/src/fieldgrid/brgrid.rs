//! The BRGRID1 container: magic, u32 LE header length, JSON header, then
//! N^dim little-endian (re, im) f64 pairs in row-major order.

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{GridFunction, GridSpec, Lattice, Space};
use crate::error::{Error, Result};
use crate::C64;

pub const MAGIC: &[u8; 7] = b"BRGRID1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridHeader {
    pub dim: usize,
    pub n: usize,
    pub extent: f64,
    pub space: String,
}

impl GridHeader {
    pub fn lattice(&self) -> Result<Lattice> {
        Lattice::new(self.dim, self.n, self.extent)
    }

    pub fn space(&self) -> Result<Space> {
        match self.space.as_str() {
            "physical" => Ok(Space::Physical),
            "frequency" => Ok(Space::Frequency),
            other => Err(Error::Format(format!("unknown space tag {other:?}"))),
        }
    }
}

pub fn write(mut w: impl Write, header: &GridHeader, samples: &[C64]) -> Result<()> {
    let expected = header.lattice()?.len();
    if samples.len() != expected {
        return Err(Error::Format(format!(
            "header promises {expected} samples, got {}",
            samples.len()
        )));
    }
    let json = serde_json::to_vec(header).map_err(|e| Error::Format(e.to_string()))?;
    w.write_all(MAGIC)?;
    w.write_all(&(json.len() as u32).to_le_bytes())?;
    w.write_all(&json)?;
    let mut buf = Vec::with_capacity(samples.len() * 16);
    for v in samples {
        buf.extend_from_slice(&v.re.to_le_bytes());
        buf.extend_from_slice(&v.im.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

pub fn read(mut r: impl Read) -> Result<(GridHeader, Vec<C64>)> {
    let mut magic = [0u8; 7];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let mut len = [0u8; 4];
    r.read_exact(&mut len)?;
    let len = u32::from_le_bytes(len) as usize;
    if len > 1 << 20 {
        return Err(Error::Format(format!("header length {len} is implausible")));
    }
    let mut json = vec![0u8; len];
    r.read_exact(&mut json)?;
    let header: GridHeader =
        serde_json::from_slice(&json).map_err(|e| Error::Format(e.to_string()))?;
    header.space()?;
    let count = header.lattice()?.len();
    let mut raw = vec![0u8; count * 16];
    r.read_exact(&mut raw)?;
    let samples = raw
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().expect("8 bytes"));
            let im = f64::from_le_bytes(c[8..].try_into().expect("8 bytes"));
            C64::new(re, im)
        })
        .collect();
    Ok((header, samples))
}

pub fn header_for(spec: &GridSpec, space: Space) -> GridHeader {
    GridHeader {
        dim: spec.dim(),
        n: spec.points(),
        extent: spec.extent(),
        space: space.name().into(),
    }
}

pub fn save(path: impl AsRef<Path>, f: &GridFunction) -> Result<()> {
    let file = std::io::BufWriter::new(std::fs::File::create(path)?);
    write(file, &header_for(f.spec(), f.space()), f.samples())
}

pub fn load(path: impl AsRef<Path>) -> Result<GridFunction> {
    let file = std::io::BufReader::new(std::fs::File::open(path)?);
    let (header, samples) = read(file)?;
    let spec = GridSpec::new(header.dim, header.n, header.extent)?;
    GridFunction::new(spec, header.space()?, samples)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_bytes() {
        let spec = GridSpec::new(2, 8, 2.0).unwrap();
        let f = GridFunction::from_physical_fn(spec, |x| C64::new(x[0], x[1] * x[1]));
        let mut buf = Vec::new();
        write(&mut buf, &header_for(&spec, Space::Physical), f.samples()).unwrap();
        assert_eq!(&buf[..7], b"BRGRID1");
        let (header, samples) = read(buf.as_slice()).unwrap();
        assert_eq!(header.space, "physical");
        assert_eq!(samples, f.samples());
        buf[0] = b'X';
        assert!(read(buf.as_slice()).is_err());
    }
}
