//! Dense array interchange files.
//!
//! A flat little-endian container that any numerical environment can read
//! with a fixed-offset header parse:
//!
//! | offset | size      | field                                  |
//! |--------|-----------|----------------------------------------|
//! | 0      | 8         | magic `PMCWARR1`                       |
//! | 8      | 4         | dtype: 1 = float32, 2 = float64        |
//! | 12     | 4         | ndim                                   |
//! | 16     | 8 × ndim  | dims, u64 each                         |
//! | …      | …         | payload, row-major (C order)           |
//!
//! Complex matrices are written with a trailing axis of length 2 holding
//! the real and imaginary parts.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub const MAGIC: &[u8; 8] = b"PMCWARR1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dtype {
    F32 = 1,
    F64 = 2,
}

/// An array read back from an interchange file, widened to `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseArray {
    pub dtype: Dtype,
    pub dims: Vec<u64>,
    pub values: Vec<f64>,
}

impl DenseArray {
    /// Interpret a `[rows, cols, 2]` array as a complex matrix.
    pub fn to_complex_matrix(&self) -> Result<Array2<Complex64>> {
        match self.dims.as_slice() {
            &[rows, cols, 2] => {
                let (rows, cols) = (rows as usize, cols as usize);
                Ok(Array2::from_shape_fn((rows, cols), |(r, c)| {
                    let k = 2 * (r * cols + c);
                    Complex64::new(self.values[k], self.values[k + 1])
                }))
            }
            other => Err(Error::Malformed(format!(
                "expected dims [rows, cols, 2], found {other:?}"
            ))),
        }
    }
}

/// Write a complex matrix as `[rows, cols, 2]`.
pub fn write_complex_matrix(path: &Path, data: &Array2<Complex64>, dtype: Dtype) -> Result<()> {
    let (rows, cols) = data.dim();
    let mut out = BufWriter::new(File::create(path).map_err(|e| Error::io(path, e))?);
    let mut header = Vec::with_capacity(40);
    header.extend_from_slice(MAGIC);
    header.extend_from_slice(&(dtype as u32).to_le_bytes());
    header.extend_from_slice(&3u32.to_le_bytes());
    for d in [rows as u64, cols as u64, 2] {
        header.extend_from_slice(&d.to_le_bytes());
    }
    out.write_all(&header).map_err(|e| Error::io(path, e))?;
    let mut buf = Vec::with_capacity(cols * 16);
    for row in data.rows() {
        buf.clear();
        for z in row {
            match dtype {
                Dtype::F32 => {
                    buf.extend_from_slice(&(z.re as f32).to_le_bytes());
                    buf.extend_from_slice(&(z.im as f32).to_le_bytes());
                }
                Dtype::F64 => {
                    buf.extend_from_slice(&z.re.to_le_bytes());
                    buf.extend_from_slice(&z.im.to_le_bytes());
                }
            }
        }
        out.write_all(&buf).map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

pub fn read_array(path: &Path) -> Result<DenseArray> {
    let mut input = BufReader::new(File::open(path).map_err(|e| Error::io(path, e))?);
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes).map_err(|e| Error::io(path, e))?;
    let malformed = |what: &str| Error::Parse {
        path: path.to_path_buf(),
        message: what.to_string(),
    };
    if bytes.len() < 16 || &bytes[..8] != MAGIC {
        return Err(malformed("missing PMCWARR1 header"));
    }
    let word = |at: usize| u32::from_le_bytes(bytes[at..at + 4].try_into().unwrap());
    let dtype = match word(8) {
        1 => Dtype::F32,
        2 => Dtype::F64,
        other => return Err(malformed(&format!("unknown dtype code {other}"))),
    };
    let ndim = word(12) as usize;
    let payload_at = 16 + 8 * ndim;
    if bytes.len() < payload_at {
        return Err(malformed("truncated dims"));
    }
    let dims: Vec<u64> = (0..ndim)
        .map(|k| u64::from_le_bytes(bytes[16 + 8 * k..24 + 8 * k].try_into().unwrap()))
        .collect();
    let count = dims.iter().product::<u64>() as usize;
    let width = match dtype {
        Dtype::F32 => 4,
        Dtype::F64 => 8,
    };
    let payload = &bytes[payload_at..];
    if payload.len() != count * width {
        return Err(malformed(&format!(
            "payload holds {} bytes, dims need {}",
            payload.len(),
            count * width
        )));
    }
    let values = match dtype {
        Dtype::F32 => payload
            .chunks_exact(4)
            .map(|c| f64::from(f32::from_le_bytes(c.try_into().unwrap())))
            .collect(),
        Dtype::F64 => payload
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect(),
    };
    Ok(DenseArray { dtype, dims, values })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_layout() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.arr");
        let data = Array2::from_shape_fn((2, 3), |(r, c)| Complex64::new(r as f64, -(c as f64)));
        write_complex_matrix(&path, &data, Dtype::F32).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        assert_eq!(&bytes[..8], b"PMCWARR1");
        assert_eq!(bytes.len(), 16 + 24 + 2 * 3 * 2 * 4);
        // element (1, 2) sits at flat index (1*3 + 2)*2
        let at = 40 + (5 * 2) * 4;
        assert_eq!(f32::from_le_bytes(bytes[at..at + 4].try_into().unwrap()), 1.0);
        assert_eq!(f32::from_le_bytes(bytes[at + 4..at + 8].try_into().unwrap()), -2.0);
        let back = read_array(&path).unwrap();
        assert_eq!(back.dims, vec![2, 3, 2]);
        assert_eq!(back.to_complex_matrix().unwrap(), data);
    }

    #[test]
    fn f64_round_trip_and_truncation() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("b.arr");
        let data = Array2::from_shape_fn((3, 2), |(r, c)| Complex64::new(0.1 * r as f64, 1.0 / (c as f64 + 3.0)));
        write_complex_matrix(&path, &data, Dtype::F64).unwrap();
        assert_eq!(read_array(&path).unwrap().to_complex_matrix().unwrap(), data);
        let bytes = std::fs::read(&path).unwrap();
        std::fs::write(&path, &bytes[..bytes.len() - 1]).unwrap();
        assert!(read_array(&path).is_err());
    }
}
