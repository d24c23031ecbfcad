use std::path::Path;

use serde::{Deserialize, Serialize};

use super::ComplexMatrix;
use crate::error::{Error, Result};

/// On-disk form of a matrix: `{"dim": d, "re": [[..]], "im": [[..]]}`,
/// rows first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixFile {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        Self {
            dim: m.dim(),
            re: m.real_part(),
            im: m.imag_part(),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        for part in [&self.re, &self.im] {
            if part.len() != self.dim {
                return Err(Error::BadShape {
                    dim: self.dim,
                    len: part.iter().map(Vec::len).sum(),
                });
            }
        }
        ComplexMatrix::from_parts(&self.re, &self.im)
    }
}

pub fn parse_matrix_json(json: &str) -> Result<ComplexMatrix> {
    serde_json::from_str::<MatrixFile>(json)?.to_matrix()
}

pub fn matrix_to_json(m: &ComplexMatrix) -> String {
    serde_json::to_string(&MatrixFile::from_matrix(m)).expect("matrix entries are finite")
}

pub fn read_matrix_json(path: impl AsRef<Path>) -> Result<ComplexMatrix> {
    parse_matrix_json(&std::fs::read_to_string(path)?)
}

pub fn write_matrix_json(path: impl AsRef<Path>, m: &ComplexMatrix) -> Result<()> {
    std::fs::write(path, matrix_to_json(m) + "\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::C_I;

    #[test]
    fn round_trip() {
        let m = ComplexMatrix::from_fn(2, |i, j| C_I * (i as f64) + (j as f64) * 0.25);
        let back = parse_matrix_json(&matrix_to_json(&m)).unwrap();
        assert_eq!(back, m);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.json");
        write_matrix_json(&path, &m).unwrap();
        assert_eq!(read_matrix_json(&path).unwrap(), m);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(parse_matrix_json(r#"{"dim": 2, "re": [[1, 0]], "im": [[0, 0]]}"#).is_err());
        assert!(parse_matrix_json(r#"{"dim": 2, "re": [[1, 0], [0]], "im": [[0, 0], [0, 0]]}"#).is_err());
        assert!(parse_matrix_json(r#"{"dim": 2}"#).is_err());
        let ok = parse_matrix_json(r#"{"dim": 1, "re": [[1.0]], "im": [[0.0]]}"#).unwrap();
        assert_eq!(ok.dim(), 1);
    }
}
