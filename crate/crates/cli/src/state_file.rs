//! JSON state files: `{"dims": [d1, ...], "matrix": [[[re, im], ...], ...]}`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use separability::{
    validate_density, Complex64, ComplexMatrix, DensityMatrix, PartyStructure, Tolerances,
};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dims: Vec<usize>,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl StateFile {
    pub fn from_density(rho: &DensityMatrix) -> Self {
        let m = rho.matrix();
        Self {
            dims: rho.structure().dims().to_vec(),
            matrix: (0..m.nrows())
                .map(|r| {
                    (0..m.ncols())
                        .map(|c| [m[(r, c)].re, m[(r, c)].im])
                        .collect()
                })
                .collect(),
        }
    }

    /// Checks the shape and values, then validates the matrix as a state.
    pub fn to_density(&self, tol: &Tolerances) -> Result<DensityMatrix, CliError> {
        let structure = PartyStructure::new(self.dims.clone())?;
        let n = structure.total_dim();
        if self.matrix.len() != n {
            return Err(CliError::Format(format!(
                "matrix has {} rows, dims require {n}",
                self.matrix.len()
            )));
        }
        if let Some((r, row)) = self
            .matrix
            .iter()
            .enumerate()
            .find(|(_, row)| row.len() != n)
        {
            return Err(CliError::Format(format!(
                "row {r} has {} entries, expected {n}",
                row.len()
            )));
        }
        if self
            .matrix
            .iter()
            .flatten()
            .flatten()
            .any(|x| !x.is_finite())
        {
            return Err(CliError::Format(
                "matrix contains a non-finite entry".into(),
            ));
        }
        let mat = ComplexMatrix::from_fn(n, n, |r, c| {
            let [re, im] = self.matrix[r][c];
            Complex64::new(re, im)
        });
        Ok(validate_density(mat, structure, tol)?)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Format(e.to_string()))
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("state files always serialize")
    }
}
