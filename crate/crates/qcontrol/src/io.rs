//! JSON file schemas for systems, densities, states, bases and reports.
//! Complex entries are encoded as [re, im] pairs.

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::analysis::{AnalysisReport, SystemModel};
use crate::error::{Error, Result};
use crate::lie::LieBasis;
use crate::matcore::{CMat, DensityMatrix, StateVector, I};

pub type MatrixJson = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_json(m: &CMat) -> MatrixJson {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect()
}

pub fn matrix_from_json(rows: &MatrixJson) -> Result<CMat> {
    let nr = rows.len();
    if nr == 0 {
        return Err(Error::Validation("matrix has no rows".into()));
    }
    let nc = rows[0].len();
    if rows.iter().any(|r| r.len() != nc) {
        return Err(Error::Validation("matrix rows have unequal lengths".into()));
    }
    let mut m = CMat::zeros(nr, nc);
    for (r, row) in rows.iter().enumerate() {
        for (c, &[re, im]) in row.iter().enumerate() {
            if !re.is_finite() || !im.is_finite() {
                return Err(Error::Validation("matrix entry is not finite".into()));
            }
            m[(r, c)] = Complex64::new(re, im);
        }
    }
    Ok(m)
}

/// On-disk system description. With `"hermitian": true` the stored matrices
/// are Hamiltonians and are multiplied by i on load.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SystemFile {
    pub n: usize,
    pub label: String,
    pub drift: MatrixJson,
    pub controls: Vec<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hermitian: Option<bool>,
}

impl SystemFile {
    pub fn to_model(&self) -> Result<SystemModel> {
        let load = |m: &MatrixJson| -> Result<CMat> {
            let mat = matrix_from_json(m)?;
            if mat.nrows() != self.n || mat.ncols() != self.n {
                return Err(Error::Shape(format!(
                    "matrix is {}x{} but file declares n = {}",
                    mat.nrows(),
                    mat.ncols(),
                    self.n
                )));
            }
            Ok(if self.hermitian.unwrap_or(false) {
                mat * I
            } else {
                mat
            })
        };
        let drift = load(&self.drift)?;
        let controls = self
            .controls
            .iter()
            .map(&load)
            .collect::<Result<Vec<_>>>()?;
        SystemModel::new(drift, controls, self.label.clone())
    }

    pub fn from_model(model: &SystemModel) -> Self {
        Self {
            n: model.n(),
            label: model.label().to_string(),
            drift: matrix_to_json(model.drift()),
            controls: model.controls().iter().map(matrix_to_json).collect(),
            hermitian: None,
        }
    }

    /// SHA-256 of the canonical re-serialization, for report provenance.
    pub fn digest(&self) -> String {
        let canonical = serde_json::to_string(self).expect("schema is serializable");
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensityFile {
    pub n: usize,
    pub matrix: MatrixJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_prime: Option<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<MatrixJson>,
}

impl DensityFile {
    pub fn to_density(&self) -> Result<DensityMatrix> {
        let m = matrix_from_json(&self.matrix)?;
        if m.nrows() != self.n {
            return Err(Error::Shape("density matrix size does not match n".into()));
        }
        DensityMatrix::new(m)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateFile {
    pub amplitudes: Vec<[f64; 2]>,
}

impl StateFile {
    pub fn to_state(&self) -> Result<StateVector> {
        let v = DVector::from_iterator(
            self.amplitudes.len(),
            self.amplitudes.iter().map(|&[re, im]| Complex64::new(re, im)),
        );
        StateVector::new(v)
    }

    pub fn from_state(psi: &StateVector) -> Self {
        Self {
            amplitudes: psi.amplitudes().iter().map(|a| [a.re, a.im]).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BasisFile {
    pub n: usize,
    pub elements: Vec<MatrixJson>,
}

impl BasisFile {
    pub fn from_basis(l: &LieBasis) -> Self {
        Self {
            n: l.n(),
            elements: l.elements().iter().map(matrix_to_json).collect(),
        }
    }

    pub fn to_matrices(&self) -> Result<Vec<CMat>> {
        self.elements.iter().map(matrix_from_json).collect()
    }
}

/// JSON mirror of the analysis report, with tool version and input digest.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportFile {
    pub version: String,
    pub input_digest: String,
    #[serde(flatten)]
    pub report: AnalysisReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbit_equality: Option<bool>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{single_spin, two_spin, Coupling};

    #[test]
    fn system_file_round_trip() {
        let m = two_spin(1.0, 1.0, 1.1, Coupling::Ising).unwrap();
        let f = SystemFile::from_model(&m);
        let text = serde_json::to_string(&f).unwrap();
        let parsed: SystemFile = serde_json::from_str(&text).unwrap();
        let model = parsed.to_model().unwrap();
        assert_eq!(model.n(), 4);
        assert_eq!(model.controls().len(), 3);
        assert_eq!(f.digest(), parsed.digest());
    }

    #[test]
    fn hermitian_flag_multiplies_by_i() {
        let mut f = SystemFile::from_model(&single_spin(1.0));
        // stored matrices are skew-Hermitian; dividing by i makes them Hermitian
        let strip = |m: &MatrixJson| -> MatrixJson {
            m.iter()
                .map(|row| row.iter().map(|&[re, im]| [im, -re]).collect())
                .collect()
        };
        f.drift = strip(&f.drift);
        f.controls = f.controls.iter().map(strip).collect();
        f.hermitian = Some(true);
        let model = f.to_model().unwrap();
        let reference = single_spin(1.0);
        assert!((model.drift() - reference.drift()).norm() < 1e-14);
    }

    #[test]
    fn malformed_matrix_is_rejected() {
        let rows: MatrixJson = vec![vec![[1.0, 0.0], [0.0, 0.0]], vec![[0.0, 0.0]]];
        assert!(matrix_from_json(&rows).is_err());
    }

    #[test]
    fn state_file_round_trip() {
        let psi = StateVector::basis(3, 2);
        let f = StateFile::from_state(&psi);
        assert_eq!(f.to_state().unwrap(), psi);
    }
}
