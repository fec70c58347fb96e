//! Binary checkpoint format for [`ParamSet`].
//!
//! Layout (all little-endian):
//!   magic `SXNN` | version u32 | tensor count u64 |
//!   per tensor: name len u32 | name utf-8 | ndims u32 | dims u64... |
//!               data f64...
//!
//! Gradient slots are not persisted; they load as zeros.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::NnError;
use crate::param::{ParamSet, PARAMSET_VERSION};

const MAGIC: &[u8; 4] = b"SXNN";

pub fn save_params(params: &ParamSet, path: &Path) -> Result<(), NnError> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(MAGIC)?;
    w.write_all(&params.version.to_le_bytes())?;
    w.write_all(&(params.len() as u64).to_le_bytes())?;
    for (name, entry) in params.iter() {
        w.write_all(&(name.len() as u32).to_le_bytes())?;
        w.write_all(name.as_bytes())?;
        w.write_all(&(entry.dims.len() as u32).to_le_bytes())?;
        for d in &entry.dims {
            w.write_all(&(*d as u64).to_le_bytes())?;
        }
        for v in &entry.data {
            w.write_all(&v.to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn load_params(path: &Path) -> Result<ParamSet, NnError> {
    let mut r = BufReader::new(File::open(path)?);
    let mut magic = [0u8; 4];
    read_exact(&mut r, &mut magic)?;
    if &magic != MAGIC {
        return Err(NnError::Format("bad magic".into()));
    }
    let version = read_u32(&mut r)?;
    if version != PARAMSET_VERSION {
        return Err(NnError::Version {
            expected: PARAMSET_VERSION,
            got: version,
        });
    }
    let count = read_u64(&mut r)?;
    let mut params = ParamSet::new();
    for _ in 0..count {
        let name_len = read_u32(&mut r)? as usize;
        if name_len > 4096 {
            return Err(NnError::Format(format!("implausible name length {name_len}")));
        }
        let mut name_bytes = vec![0u8; name_len];
        read_exact(&mut r, &mut name_bytes)?;
        let name = String::from_utf8(name_bytes)
            .map_err(|_| NnError::Format("tensor name is not utf-8".into()))?;
        let ndims = read_u32(&mut r)? as usize;
        if ndims == 0 || ndims > 8 {
            return Err(NnError::Format(format!("implausible rank {ndims}")));
        }
        let mut dims = Vec::with_capacity(ndims);
        for _ in 0..ndims {
            dims.push(read_u64(&mut r)? as usize);
        }
        let n: usize = dims.iter().product();
        let mut data = Vec::with_capacity(n);
        for _ in 0..n {
            data.push(read_f64(&mut r)?);
        }
        params
            .register(&name, dims, data)
            .map_err(|_| NnError::Format(format!("duplicate tensor `{name}`")))?;
    }
    // trailing bytes mean the file does not match its own header
    let mut probe = [0u8; 1];
    if r.read(&mut probe)? != 0 {
        return Err(NnError::Format("trailing bytes after last tensor".into()));
    }
    Ok(params)
}

fn read_exact<R: Read>(r: &mut R, buf: &mut [u8]) -> Result<(), NnError> {
    r.read_exact(buf)
        .map_err(|_| NnError::Format("truncated checkpoint".into()))
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32, NnError> {
    let mut b = [0u8; 4];
    read_exact(r, &mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64, NnError> {
    let mut b = [0u8; 8];
    read_exact(r, &mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn read_f64<R: Read>(r: &mut R) -> Result<f64, NnError> {
    let mut b = [0u8; 8];
    read_exact(r, &mut b)?;
    Ok(f64::from_le_bytes(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_params() -> ParamSet {
        let mut p = ParamSet::new();
        p.register("net.w0", vec![2, 3], vec![0.1, -0.2, 0.3, 1e-9, f64::MIN_POSITIVE, 7.0])
            .unwrap();
        p.register("net.b0", vec![2], vec![0.0, -0.0]).unwrap();
        p
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.bin");
        let p = sample_params();
        save_params(&p, &path).unwrap();
        let q = load_params(&path).unwrap();
        assert_eq!(p.len(), q.len());
        for (name, e) in p.iter() {
            let f = q.get(name);
            assert_eq!(e.dims, f.dims);
            let a: Vec<u64> = e.data.iter().map(|v| v.to_bits()).collect();
            let b: Vec<u64> = f.data.iter().map(|v| v.to_bits()).collect();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn truncated_file_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.bin");
        save_params(&sample_params(), &path).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        std::fs::write(&path, &bytes[..bytes.len() - 5]).unwrap();
        assert!(matches!(load_params(&path), Err(NnError::Format(_))));
    }

    #[test]
    fn unknown_version_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.bin");
        save_params(&sample_params(), &path).unwrap();
        let mut bytes = std::fs::read(&path).unwrap();
        bytes[4..8].copy_from_slice(&99u32.to_le_bytes());
        std::fs::write(&path, &bytes).unwrap();
        assert!(matches!(
            load_params(&path),
            Err(NnError::Version { got: 99, .. })
        ));
    }
}
