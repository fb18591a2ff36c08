//! Binary container and CSV export for matrix samples.
//!
//! Container layout (all integers little-endian):
//! magic `SMX1`, version u32, n u64, descriptor length u64, descriptor JSON
//! (model + optional spike), seed u64, then the row-major upper triangle as
//! n(n+1)/2 f64 values.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};
use std::path::Path;

use crate::ensembles::{ModelDescriptor, SymmetricMatrixSample};
use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"SMX1";
const VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct ContainerMeta {
    model: ModelDescriptor,
    spike: Option<Vec<f64>>,
}

pub fn write_sample(sample: &SymmetricMatrixSample, path: &Path) -> Result<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    let meta = ContainerMeta {
        model: sample.model.clone(),
        spike: sample.spike.as_ref().map(|s| s.iter().cloned().collect()),
    };
    let desc = serde_json::to_vec(&meta)?;
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&(sample.n as u64).to_le_bytes())?;
    w.write_all(&(desc.len() as u64).to_le_bytes())?;
    w.write_all(&desc)?;
    w.write_all(&sample.seed.to_le_bytes())?;
    for i in 0..sample.n {
        for j in i..sample.n {
            w.write_all(&sample.entries[(i, j)].to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_sample(path: &Path) -> Result<SymmetricMatrixSample> {
    let mut r = std::io::BufReader::new(std::fs::File::open(path)?);

    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Container(format!("bad magic {magic:?}")));
    }
    let version = read_u32(&mut r)?;
    if version != VERSION {
        return Err(Error::Container(format!("unsupported version {version}")));
    }
    let n = read_u64(&mut r)? as usize;
    let desc_len = read_u64(&mut r)? as usize;
    if desc_len > 1 << 30 {
        return Err(Error::Container(format!("descriptor length {desc_len} is implausible")));
    }
    let mut desc = vec![0u8; desc_len];
    r.read_exact(&mut desc)?;
    let meta: ContainerMeta = serde_json::from_slice(&desc)?;
    let seed = read_u64(&mut r)?;

    let mut entries = DMatrix::<f64>::zeros(n, n);
    let mut buf = [0u8; 8];
    for i in 0..n {
        for j in i..n {
            r.read_exact(&mut buf)?;
            let v = f64::from_le_bytes(buf);
            entries[(i, j)] = v;
            entries[(j, i)] = v;
        }
    }

    Ok(SymmetricMatrixSample {
        n,
        entries,
        model: meta.model,
        seed,
        spike: meta.spike.map(DVector::from_vec),
        samples_matrix: None,
    })
}

/// Full dense matrix as CSV, with the provenance in `#` comment lines.
/// Intended for small n.
pub fn write_matrix_csv(sample: &SymmetricMatrixSample, path: &Path) -> Result<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "# model: {}", serde_json::to_string(&sample.model)?)?;
    writeln!(w, "# seed: {}", sample.seed)?;
    for i in 0..sample.n {
        let row: Vec<String> = (0..sample.n)
            .map(|j| format!("{:.17e}", sample.entries[(i, j)]))
            .collect();
        writeln!(w, "{}", row.join(","))?;
    }
    w.flush()?;
    Ok(())
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut buf = [0u8; 4];
    r.read_exact(&mut buf)?;
    Ok(u32::from_le_bytes(buf))
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf)?;
    Ok(u64::from_le_bytes(buf))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::sample_gwig;
    use crate::priors::SpikePrior;

    #[test]
    fn container_round_trip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.smx");
        let sample = sample_gwig(1.3, &SpikePrior::rademacher(), 17, 99).unwrap();
        write_sample(&sample, &path).unwrap();
        let back = read_sample(&path).unwrap();
        assert_eq!(back.n, sample.n);
        assert_eq!(back.seed, sample.seed);
        assert_eq!(back.model, sample.model);
        assert_eq!(back.entries, sample.entries);
        assert_eq!(back.spike.unwrap(), sample.spike.unwrap());
    }

    #[test]
    fn rejects_garbage() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("junk");
        std::fs::write(&path, b"not a container").unwrap();
        assert!(read_sample(&path).is_err());
    }
}
