use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::Serialize;

use super::{QuantumState, StateKind};
use crate::error::{Error, Result};
use crate::tensor::SubsystemShape;

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Pure state from `(digits, amplitude)` terms, normalized afterwards.
fn from_terms(dims: &[usize], terms: &[(&[usize], Complex64)]) -> QuantumState {
    let shape = SubsystemShape::new(dims.to_vec()).expect("catalog shapes are valid");
    let mut v = vec![Complex64::new(0.0, 0.0); shape.total_dim()];
    for (digits, amp) in terms {
        v[shape.ravel(digits)] += amp;
    }
    QuantumState::pure_normalized(v, shape).expect("catalog states are nonzero")
}

fn check_unit(sum_sq: f64) -> Result<()> {
    if (sum_sq - 1.0).abs() > 1e-9 {
        return Err(Error::Normalization(format!(
            "squared coefficients sum to {sum_sq}, expected 1"
        )));
    }
    Ok(())
}

/// Three-qubit generalized Schmidt form
/// `λ0|000> + λ1 e^{iφ}|100> + λ2|101> + λ3|110> + λ4|111>`.
pub fn gsd_state(lambda: [f64; 5], phi: f64) -> Result<QuantumState> {
    if let Some(l) = lambda.iter().find(|l| **l < 0.0) {
        return Err(Error::InvalidState(format!("negative coefficient {l}")));
    }
    check_unit(lambda.iter().map(|l| l * l).sum())?;
    Ok(from_terms(
        &[2, 2, 2],
        &[
            (&[0, 0, 0], re(lambda[0])),
            (&[1, 0, 0], Complex64::from_polar(lambda[1], phi)),
            (&[1, 0, 1], re(lambda[2])),
            (&[1, 1, 0], re(lambda[3])),
            (&[1, 1, 1], re(lambda[4])),
        ],
    ))
}

/// `(|100> + |010> + |001>) / √3`.
pub fn w_state() -> QuantumState {
    from_terms(
        &[2, 2, 2],
        &[(&[1, 0, 0], re(1.0)), (&[0, 1, 0], re(1.0)), (&[0, 0, 1], re(1.0))],
    )
}

/// Four-qubit decoherence-free superposition `a|Ψ0> + b|Ψ1>` with
/// `|Ψ0> = (|01>-|10>)(|01>-|10>)/2` and
/// `|Ψ1> = (2|1100> + 2|0011> - |1010> - |1001> - |0101> - |0110>)/(2√3)`.
pub fn df4_state(a: f64, b: f64) -> Result<QuantumState> {
    check_unit(a * a + b * b)?;
    let h = 0.5 * a;
    let t = b / (2.0 * 3f64.sqrt());
    Ok(from_terms(
        &[2, 2, 2, 2],
        &[
            (&[0, 1, 0, 1], re(h)),
            (&[0, 1, 1, 0], re(-h)),
            (&[1, 0, 0, 1], re(-h)),
            (&[1, 0, 1, 0], re(h)),
            (&[1, 1, 0, 0], re(2.0 * t)),
            (&[0, 0, 1, 1], re(2.0 * t)),
            (&[1, 0, 1, 0], re(-t)),
            (&[1, 0, 0, 1], re(-t)),
            (&[0, 1, 0, 1], re(-t)),
            (&[0, 1, 1, 0], re(-t)),
        ],
    ))
}

/// Totally antisymmetric three-qutrit state.
pub fn antisym_qutrit_state() -> QuantumState {
    from_terms(
        &[3, 3, 3],
        &[
            (&[0, 1, 2], re(1.0)),
            (&[0, 2, 1], re(-1.0)),
            (&[1, 2, 0], re(1.0)),
            (&[1, 0, 2], re(-1.0)),
            (&[2, 0, 1], re(1.0)),
            (&[2, 1, 0], re(-1.0)),
        ],
    )
}

/// `(√2|010> + √2|101> + |200> + |211>) / √6` on `3 ⊗ 2 ⊗ 2`.
pub fn state_322() -> QuantumState {
    let s2 = 2f64.sqrt();
    from_terms(
        &[3, 2, 2],
        &[
            (&[0, 1, 0], re(s2)),
            (&[1, 0, 1], re(s2)),
            (&[2, 0, 0], re(1.0)),
            (&[2, 1, 1], re(1.0)),
        ],
    )
}

/// Singlet projector and `|01><01|`; their equal mixture witnesses that the
/// logarithmic convex-roof negativity is not convex.
pub fn nonconvexity_pair() -> (QuantumState, QuantumState) {
    let singlet = from_terms(&[2, 2], &[(&[0, 1], re(FRAC_1_SQRT_2)), (&[1, 0], re(-FRAC_1_SQRT_2))]);
    let product = from_terms(&[2, 2], &[(&[0, 1], re(1.0))]);
    let mixed = |s: &QuantumState| QuantumState::mixed(s.density_matrix(), s.shape().clone()).expect("projector");
    (mixed(&singlet), mixed(&product))
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub dims: Vec<usize>,
    pub kind: StateKind,
    pub description: &'static str,
}

const NAMES: [(&str, &str); 6] = [
    (
        "example1",
        "three-qubit generalized Schmidt state with λ0=λ3=λ4=1/√5, λ2=√(2/5), λ1=0",
    ),
    ("df4", "four-qubit decoherence-free state a|Ψ0>+b|Ψ1> with a=b=1/√2"),
    ("w", "three-qubit W state (|100>+|010>+|001>)/√3"),
    ("antisym333", "totally antisymmetric three-qutrit state, a CKW counterexample"),
    ("cex322", "3⊗2⊗2 state (√2|010>+√2|101>+|200>+|211>)/√6, a CKW counterexample"),
    ("nonconvex", "two-qubit mixture (singlet + |01><01|)/2 witnessing nonconvexity"),
];

/// Named states with their shapes.
pub fn catalog() -> Vec<CatalogEntry> {
    NAMES
        .iter()
        .map(|&(name, description)| {
            let s = catalog_state(name).expect("catalog names resolve");
            CatalogEntry {
                name,
                dims: s.shape().dims().to_vec(),
                kind: s.kind(),
                description,
            }
        })
        .collect()
}

pub fn catalog_state(name: &str) -> Result<QuantumState> {
    match name {
        "example1" => {
            let s = 1.0 / 5f64.sqrt();
            gsd_state([s, 0.0, (2.0f64 / 5.0).sqrt(), s, s], 0.0)
        }
        "df4" => df4_state(FRAC_1_SQRT_2, FRAC_1_SQRT_2),
        "w" => Ok(w_state()),
        "antisym333" => Ok(antisym_qutrit_state()),
        "cex322" => Ok(state_322()),
        "nonconvex" => {
            let (r1, r2) = nonconvexity_pair();
            QuantumState::mixture(&[(0.5, &r1), (0.5, &r2)])
        }
        other => Err(Error::UnknownCatalogState(other.to_string())),
    }
}
