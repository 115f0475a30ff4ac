use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{QuantumState, StateKind};
use crate::error::{Error, Result};
use crate::tensor::{ComplexMatrix, SubsystemShape};

/// On-disk state format. Complex numbers are `[re, im]` pairs.
///
/// ```json
/// {"dims": [2, 2], "kind": "pure", "amplitudes": [[0.7071, 0], [0, 0], [0, 0], [0.7071, 0]]}
/// {"dims": [2, 2], "kind": "mixed", "matrix": [[[0.5, 0], ...], ...]}
/// ```
///
/// `kind` may be omitted; it is then inferred from which payload is present.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateDocument {
    pub dims: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<StateKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<[f64; 2]>>>,
}

fn to_complex(p: &[f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

impl StateDocument {
    pub fn into_state(self) -> Result<QuantumState> {
        let shape = SubsystemShape::new(self.dims)?;
        let kind = match (self.kind, &self.amplitudes, &self.matrix) {
            (Some(k), _, _) => k,
            (None, Some(_), None) => StateKind::Pure,
            (None, None, Some(_)) => StateKind::Mixed,
            _ => {
                return Err(Error::InvalidState(
                    "state document needs exactly one of `amplitudes` or `matrix`".into(),
                ))
            }
        };
        match kind {
            StateKind::Pure => {
                let amps = self
                    .amplitudes
                    .ok_or_else(|| Error::InvalidState("pure state without `amplitudes`".into()))?;
                QuantumState::pure(amps.iter().map(to_complex).collect(), shape)
            }
            StateKind::Mixed => {
                let rows = self
                    .matrix
                    .ok_or_else(|| Error::InvalidState("mixed state without `matrix`".into()))?;
                let n = rows.len();
                if let Some(bad) = rows.iter().find(|r| r.len() != n) {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        found: bad.len(),
                    });
                }
                let data = rows.iter().flatten().map(to_complex).collect();
                QuantumState::mixed(ComplexMatrix::new(n, n, data)?, shape)
            }
        }
    }

    pub fn from_state(state: &QuantumState) -> Self {
        let pair = |z: &Complex64| [z.re, z.im];
        let dims = state.shape().dims().to_vec();
        match state.kind() {
            StateKind::Pure => Self {
                dims,
                kind: Some(StateKind::Pure),
                amplitudes: Some(state.data().as_slice().iter().map(pair).collect()),
                matrix: None,
            },
            StateKind::Mixed => {
                let m = state.data();
                Self {
                    dims,
                    kind: Some(StateKind::Mixed),
                    amplitudes: None,
                    matrix: Some((0..m.rows()).map(|r| m.row(r).iter().map(pair).collect()).collect()),
                }
            }
        }
    }
}
