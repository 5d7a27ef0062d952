//! JSON state files: `{"dims": [2, 2], "matrix": [[re, im], ...], "label": "..."}`
//! with the matrix flattened row-major.
//!
//! Floats are written in serde_json's shortest round-trip form, so a file
//! written here parses back to the same bits.

use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::states::DensityMatrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dims: Vec<usize>,
    pub matrix: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl StateFile {
    pub fn from_matrix(m: &ComplexMatrix, dims: Vec<usize>, label: Option<String>) -> Self {
        let matrix = m.as_slice().iter().map(|z| [z.re, z.im]).collect();
        Self { dims, matrix, label }
    }

    pub fn from_state(rho: &DensityMatrix, label: Option<String>) -> Self {
        Self::from_matrix(rho.matrix(), rho.dims().to_vec(), label)
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn read_from<R: Read>(reader: R) -> Result<Self> {
        serde_json::from_reader(reader).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn write_to<W: Write>(&self, mut writer: W) -> std::io::Result<()> {
        writer.write_all(self.to_json().as_bytes())?;
        writer.write_all(b"\n")
    }

    /// The operator, checked only for shape. Used in `--raw` mode.
    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let n: usize = self.dims.iter().product();
        if self.dims.is_empty() || self.dims.contains(&0) {
            return Err(Error::Parse(format!("field `dims`: invalid dimensions {:?}", self.dims)));
        }
        if self.matrix.len() != n * n {
            return Err(Error::Parse(format!(
                "field `matrix`: expected {} entries for dims {:?}, found {}",
                n * n,
                self.dims,
                self.matrix.len()
            )));
        }
        if let Some(k) = self.matrix.iter().position(|[re, im]| !re.is_finite() || !im.is_finite()) {
            return Err(Error::Parse(format!("field `matrix`: entry {k} is not finite")));
        }
        let data = self.matrix.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        ComplexMatrix::from_vec(n, n, data)
    }

    pub fn to_density(&self, tol: f64) -> Result<DensityMatrix> {
        DensityMatrix::validate(self.to_matrix()?, self.dims.clone(), tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DEFAULT_TOL;
    use crate::random::{ginibre, random_density_dims, seeded_rng};

    #[test]
    fn round_trip_is_bit_exact() {
        let mut rng = seeded_rng(1);
        let rho = random_density_dims(&mut rng, &[2, 3]);
        let file = StateFile::from_state(&rho, Some("random".into()));
        let back = StateFile::parse(&file.to_json()).unwrap();
        assert_eq!(back, file);
        let again = back.to_density(DEFAULT_TOL).unwrap();
        assert_eq!(again.matrix(), rho.matrix());
        assert_eq!(again.dims(), &[2, 3]);
    }

    #[test]
    fn raw_operators_skip_validation() {
        let mut rng = seeded_rng(2);
        let g = ginibre(&mut rng, 3, 3);
        let file = StateFile::from_matrix(&g, vec![3], None);
        assert!(!file.to_json().contains("label"));
        assert_eq!(file.to_matrix().unwrap(), g);
        assert!(file.to_density(DEFAULT_TOL).is_err());
    }

    #[test]
    fn malformed_input() {
        let err = StateFile::parse("{\"dims\": [2],\n \"matrix\": [[1, 0], [0]]}").unwrap_err();
        assert!(matches!(&err, Error::Parse(msg) if msg.contains("line 2")), "{err}");
        let short = StateFile::parse(r#"{"dims":[2],"matrix":[[1,0]]}"#).unwrap();
        assert!(matches!(short.to_matrix(), Err(Error::Parse(msg)) if msg.contains("matrix")));
        assert!(StateFile::parse(r#"{"dims":[2],"matrix":[],"extra":1}"#).is_err());
    }
}
