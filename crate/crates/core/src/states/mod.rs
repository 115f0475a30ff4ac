//! Quantum states over an explicit subsystem shape, plus the named catalog
//! and seeded random sampling.

mod catalog;
mod json;
mod random;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{self, ComplexMatrix, SubsystemShape, EIGEN_ZERO_TOL};

pub use catalog::{
    antisym_qutrit_state, catalog, catalog_state, df4_state, gsd_state, nonconvexity_pair, state_322, w_state,
    CatalogEntry,
};
pub use json::StateDocument;
pub use random::{haar_random_pure, random_isometry, random_unitary, seeded_rng, HAAR_ALGORITHM};

/// Tolerance on the norm / trace of a state.
pub const NORMALIZATION_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Pure,
    Mixed,
}

/// A pure state (column vector) or density matrix over a [`SubsystemShape`].
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumState {
    kind: StateKind,
    data: ComplexMatrix,
    shape: SubsystemShape,
}

impl QuantumState {
    /// Pure state from amplitudes that must already have unit norm.
    pub fn pure(amplitudes: Vec<Complex64>, shape: SubsystemShape) -> Result<Self> {
        if amplitudes.len() != shape.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: shape.total_dim(),
                found: amplitudes.len(),
            });
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::Normalization(format!("state norm is {norm}, expected 1")));
        }
        Ok(Self {
            kind: StateKind::Pure,
            data: ComplexMatrix::column(amplitudes),
            shape,
        })
    }

    /// Pure state from an arbitrary nonzero vector, rescaled to unit norm.
    pub fn pure_normalized(mut amplitudes: Vec<Complex64>, shape: SubsystemShape) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Normalization(format!("cannot normalize vector of norm {norm}")));
        }
        for z in &mut amplitudes {
            *z /= norm;
        }
        Self::pure(amplitudes, shape)
    }

    /// Density matrix; it is checked and then stored as its exact Hermitian part.
    pub fn mixed(matrix: ComplexMatrix, shape: SubsystemShape) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        if matrix.rows() != shape.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: shape.total_dim(),
                found: matrix.rows(),
            });
        }
        let defect = matrix.hermiticity_defect();
        if defect > NORMALIZATION_TOL {
            return Err(Error::InvalidState(format!("density matrix not Hermitian (defect {defect:e})")));
        }
        let herm = (&matrix + &matrix.adjoint()).scale(Complex64::new(0.5, 0.0));
        let trace = herm.trace().re;
        if (trace - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::Normalization(format!("density matrix trace is {trace}, expected 1")));
        }
        let min_eig = tensor::hermitian_eigenvalues(&herm)?.last().copied().unwrap_or(0.0);
        if min_eig < -EIGEN_ZERO_TOL {
            return Err(Error::InvalidState(format!(
                "density matrix has negative eigenvalue {min_eig:e}"
            )));
        }
        Ok(Self {
            kind: StateKind::Mixed,
            data: herm,
            shape,
        })
    }

    /// Convex mixture `sum_k p_k rho_k` of states sharing one shape.
    pub fn mixture(parts: &[(f64, &QuantumState)]) -> Result<Self> {
        let (_, first) = parts
            .first()
            .ok_or_else(|| Error::InvalidState("empty mixture".into()))?;
        let shape = first.shape.clone();
        let d = shape.total_dim();
        let mut acc = ComplexMatrix::zeros(d, d);
        for (p, s) in parts {
            if s.shape != shape {
                return Err(Error::InvalidState("mixture components have different shapes".into()));
            }
            if *p < 0.0 {
                return Err(Error::InvalidState(format!("negative mixture weight {p}")));
            }
            acc = &acc + &s.density_matrix().scale(Complex64::new(*p, 0.0));
        }
        Self::mixed(acc, shape)
    }

    pub fn kind(&self) -> StateKind {
        self.kind
    }

    pub fn is_pure(&self) -> bool {
        self.kind == StateKind::Pure
    }

    pub fn shape(&self) -> &SubsystemShape {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.shape.total_dim()
    }

    /// Raw data: column vector when pure, density matrix when mixed.
    pub fn data(&self) -> &ComplexMatrix {
        &self.data
    }

    pub fn amplitudes(&self) -> Option<&[Complex64]> {
        match self.kind {
            StateKind::Pure => Some(self.data.as_slice()),
            StateKind::Mixed => None,
        }
    }

    pub fn density_matrix(&self) -> ComplexMatrix {
        match self.kind {
            StateKind::Pure => ComplexMatrix::outer(self.data.as_slice()),
            StateKind::Mixed => self.data.clone(),
        }
    }

    /// Reduced state on `keep` (original subsystem order is preserved).
    pub fn reduce(&self, keep: &[usize]) -> Result<Self> {
        let mut keep: Vec<usize> = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if keep.len() == self.shape.len() && keep.iter().enumerate().all(|(i, &k)| i == k) {
            return Ok(self.clone());
        }
        let shape = self.shape.select(&keep)?;
        let reduced = tensor::partial_trace(&self.density_matrix(), &self.shape, &keep)?;
        Self::mixed(reduced, shape)
    }

    /// `self ⊗ other`, concatenating the shapes.
    pub fn tensor(&self, other: &QuantumState) -> Result<Self> {
        let mut dims = self.shape.dims().to_vec();
        dims.extend_from_slice(other.shape.dims());
        let shape = SubsystemShape::new(dims)?;
        match (self.kind, other.kind) {
            (StateKind::Pure, StateKind::Pure) => {
                let v = tensor::kron(&self.data, &other.data);
                Self::pure_normalized(v.into_vec(), shape)
            }
            _ => Self::mixed(tensor::kron(&self.density_matrix(), &other.density_matrix()), shape),
        }
    }

    /// Applies `U_0 ⊗ U_1 ⊗ ...`, one unitary per subsystem.
    pub fn apply_local_unitaries(&self, unitaries: &[ComplexMatrix]) -> Result<Self> {
        if unitaries.len() != self.shape.len() {
            return Err(Error::DimensionMismatch {
                expected: self.shape.len(),
                found: unitaries.len(),
            });
        }
        for (u, &d) in unitaries.iter().zip(self.shape.dims()) {
            if u.rows() != d || u.cols() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: u.rows(),
                });
            }
        }
        let full = unitaries[1..]
            .iter()
            .fold(unitaries[0].clone(), |acc, u| tensor::kron(&acc, u));
        match self.kind {
            StateKind::Pure => {
                let v = full.matmul(&self.data)?;
                Self::pure_normalized(v.into_vec(), self.shape.clone())
            }
            StateKind::Mixed => {
                let m = &(&full * &self.data) * &full.adjoint();
                Self::mixed(m, self.shape.clone())
            }
        }
    }

    /// Rank-one density matrices are returned as the corresponding pure state.
    pub fn purify_if_rank_one(&self) -> Result<Self> {
        if self.is_pure() {
            return Ok(self.clone());
        }
        let eig = tensor::hermitian_eigen(&self.data)?;
        if eig.values.iter().skip(1).all(|&v| v.abs() <= EIGEN_ZERO_TOL) {
            Self::pure_normalized(eig.vector(0), self.shape.clone())
        } else {
            Ok(self.clone())
        }
    }

    /// `tr(rho_S^2)` for the reduced state on `subsystems`.
    pub fn purity_of(&self, subsystems: &[usize]) -> Result<f64> {
        let r = self.reduce(subsystems)?;
        let m = r.data();
        Ok(m.as_slice().iter().map(|z| z.norm_sqr()).sum())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str::<StateDocument>(text)?.into_state()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&StateDocument::from_state(self)).expect("state serialization is infallible")
    }
}
