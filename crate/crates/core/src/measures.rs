//! Bipartite entanglement measures.
//!
//! Negativity uses the unnormalized convention `||rho^{T_A}||_1 - 1`, and every
//! logarithm is base 2. Convex-roof quantities dispatch to a closed form when
//! one exists (pure states, two-qubit states) and to [`crate::roof`]
//! otherwise; the path taken is recorded in [`MeasureValue::method`].

use std::f64::consts::LN_2;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roof::{roof_maximize, roof_minimize, RoofConfig};
use crate::states::QuantumState;
use crate::tensor::{self, ComplexMatrix, SubsystemShape, EIGEN_ZERO_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    Negativity,
    LogNegativity,
    Concurrence,
    ConcurrenceAssist,
    Cren,
    Crenoa,
    Lcren,
    Lcrenoa,
    Tangle,
}

impl MeasureKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Negativity => "negativity",
            Self::LogNegativity => "log_negativity",
            Self::Concurrence => "concurrence",
            Self::ConcurrenceAssist => "concurrence_assist",
            Self::Cren => "cren",
            Self::Crenoa => "crenoa",
            Self::Lcren => "lcren",
            Self::Lcrenoa => "lcrenoa",
            Self::Tangle => "tangle",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    PureState,
    RoofOptimizer,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureValue {
    pub name: MeasureKind,
    pub value: f64,
    pub method: Method,
    pub error_bound: f64,
}

impl MeasureValue {
    fn exact(name: MeasureKind, value: f64, method: Method) -> Self {
        Self {
            name,
            value: value.max(0.0),
            method,
            error_bound: 0.0,
        }
    }
}

/// `A | B` split over the subsystems of a state. Subsystems in neither set
/// are traced out before the measure is evaluated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bipartition {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

impl Bipartition {
    pub fn new(a: Vec<usize>, b: Vec<usize>) -> Self {
        Self { a, b }
    }

    /// `focus | everything else`.
    pub fn focus_rest(focus: usize, parties: usize) -> Self {
        Self {
            a: vec![focus],
            b: (0..parties).filter(|&i| i != focus).collect(),
        }
    }

    /// `focus | other`, tracing out the rest.
    pub fn pair(focus: usize, other: usize) -> Self {
        Self {
            a: vec![focus],
            b: vec![other],
        }
    }

    pub fn validate(&self, shape: &SubsystemShape) -> Result<()> {
        if self.a.is_empty() || self.b.is_empty() {
            return Err(Error::InvalidBipartition("both sides must be nonempty".into()));
        }
        let mut seen = vec![false; shape.len()];
        for &i in self.a.iter().chain(&self.b) {
            if i >= shape.len() {
                return Err(Error::InvalidBipartition(format!(
                    "subsystem {i} out of range for {} subsystems",
                    shape.len()
                )));
            }
            if seen[i] {
                return Err(Error::InvalidBipartition(format!("subsystem {i} listed twice")));
            }
            seen[i] = true;
        }
        Ok(())
    }
}

/// Reduces `state` to `cut.a ∪ cut.b` and returns the positions of `A`
/// inside the reduced shape. Rank-one reductions come back as pure states.
fn prepare(state: &QuantumState, cut: &Bipartition) -> Result<(QuantumState, Vec<usize>)> {
    cut.validate(state.shape())?;
    let mut keep: Vec<usize> = cut.a.iter().chain(&cut.b).copied().collect();
    keep.sort_unstable();
    let a_local = cut
        .a
        .iter()
        .map(|i| keep.iter().position(|k| k == i).expect("a is kept"))
        .collect();
    let reduced = state.reduce(&keep)?;
    let reduced = if keep.len() < state.shape().len() {
        reduced.purify_if_rank_one()?
    } else {
        reduced
    };
    Ok((reduced, a_local))
}

/// Index table mapping `(i, j)` on the smaller side `i` and the larger side
/// `j` of a cut to the full basis index.
#[derive(Clone, Debug)]
struct CutLayout {
    small: usize,
    large: usize,
    table: Vec<usize>,
}

impl CutLayout {
    fn new(shape: &SubsystemShape, a: &[usize]) -> Self {
        let in_a: Vec<bool> = (0..shape.len()).map(|i| a.contains(&i)).collect();
        let da: usize = (0..shape.len()).filter(|&i| in_a[i]).map(|i| shape.dims()[i]).product();
        let db = shape.total_dim() / da;
        let (small, large, a_is_small) = if da <= db { (da, db, true) } else { (db, da, false) };
        let mut table = vec![0; shape.total_dim()];
        for full in 0..shape.total_dim() {
            let digits = shape.unravel(full);
            let (mut ia, mut ib) = (0, 0);
            for (k, &j) in digits.iter().enumerate() {
                if in_a[k] {
                    ia = ia * shape.dims()[k] + j;
                } else {
                    ib = ib * shape.dims()[k] + j;
                }
            }
            let (i, j) = if a_is_small { (ia, ib) } else { (ib, ia) };
            table[i * large + j] = full;
        }
        Self { small, large, table }
    }

    /// Reduced density matrix on the smaller side, as a row-major `small x small` block.
    fn gram(&self, psi: &[Complex64], out: &mut [Complex64]) {
        let (n, l) = (self.small, self.large);
        for i in 0..n {
            for j in i..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..l {
                    acc += psi[self.table[i * l + k]] * psi[self.table[j * l + k]].conj();
                }
                out[i * n + j] = acc;
                out[j * n + i] = acc.conj();
            }
        }
    }

    /// Schmidt coefficients squared (eigenvalues of the reduced state).
    fn schmidt_weights(&self, psi: &[Complex64]) -> Vec<f64> {
        let n = self.small;
        let mut g = vec![Complex64::new(0.0, 0.0); n * n];
        self.gram(psi, &mut g);
        let m = DMatrix::from_row_slice(n, n, &g);
        m.symmetric_eigenvalues().iter().map(|v| v.max(0.0)).collect()
    }

    /// `(sum_i s_i)^2 - 1` for Schmidt coefficients `s_i`.
    fn negativity(&self, psi: &[Complex64]) -> f64 {
        match self.small {
            1 => 0.0,
            2 => {
                let mut g = [Complex64::new(0.0, 0.0); 4];
                self.gram(psi, &mut g);
                // (s0 + s1)^2 - 1 = 2 s0 s1 = 2 sqrt(det G)
                let det = g[0].re * g[3].re - g[1].norm_sqr();
                2.0 * det.max(0.0).sqrt()
            }
            _ => {
                let s: f64 = self.schmidt_weights(psi).iter().map(|w| w.sqrt()).sum();
                (s * s - 1.0).max(0.0)
            }
        }
    }

    /// `2 (1 - tr rho_A^2)`.
    fn tangle(&self, psi: &[Complex64]) -> f64 {
        let n = self.small;
        let mut g = vec![Complex64::new(0.0, 0.0); n * n];
        self.gram(psi, &mut g);
        let purity: f64 = g.iter().map(|z| z.norm_sqr()).sum();
        (2.0 * (1.0 - purity)).max(0.0)
    }
}

/// Pure-state negativity across `a | rest` for unit vectors over `shape`.
pub fn pure_negativity_fn(shape: &SubsystemShape, a: &[usize]) -> impl Fn(&[Complex64]) -> f64 + Sync + Clone {
    let layout = CutLayout::new(shape, a);
    move |psi: &[Complex64]| layout.negativity(psi)
}

/// Pure-state tangle `2(1 - tr rho_A^2)` across `a | rest`.
pub fn pure_tangle_fn(shape: &SubsystemShape, a: &[usize]) -> impl Fn(&[Complex64]) -> f64 + Sync + Clone {
    let layout = CutLayout::new(shape, a);
    move |psi: &[Complex64]| layout.tangle(psi)
}

pub fn negativity(state: &QuantumState, cut: &Bipartition) -> Result<MeasureValue> {
    let (rho, a) = prepare(state, cut)?;
    if let Some(psi) = rho.amplitudes() {
        let v = CutLayout::new(rho.shape(), &a).negativity(psi);
        return Ok(MeasureValue::exact(MeasureKind::Negativity, v, Method::PureState));
    }
    let pt = tensor::partial_transpose(rho.data(), rho.shape(), &a)?;
    let norm = tensor::trace_norm(&pt)?;
    Ok(MeasureValue::exact(MeasureKind::Negativity, norm - 1.0, Method::ClosedForm))
}

/// `log2 ||rho^{T_A}||_1`.
pub fn log_negativity(state: &QuantumState, cut: &Bipartition) -> Result<MeasureValue> {
    let n = negativity(state, cut)?;
    Ok(MeasureValue {
        name: MeasureKind::LogNegativity,
        value: (n.value + 1.0).log2(),
        ..n
    })
}

fn require_two_qubits(state: &QuantumState) -> Result<()> {
    if state.shape().dims() != [2, 2] {
        return Err(Error::WrongShape {
            expected: "[2, 2]",
            found: state.shape().dims().to_vec(),
        });
    }
    Ok(())
}

/// Descending singular values `mu_i` of the Wootters matrix
/// `T_ij = w_i^T (σy⊗σy) w_j` built from the weighted eigenvectors `w_j`,
/// padded to four entries. These are the square roots of the eigenvalues of
/// `rho (σy⊗σy) rho* (σy⊗σy)`.
fn wootters_mu(state: &QuantumState) -> Result<[f64; 4]> {
    let w: Vec<Vec<Complex64>> = match state.amplitudes() {
        Some(a) => vec![a.to_vec()],
        None => {
            let eig = tensor::hermitian_eigen(state.data())?;
            (0..4)
                .filter(|&k| eig.values[k] > EIGEN_ZERO_TOL)
                .map(|k| {
                    let s = eig.values[k].sqrt();
                    eig.vector(k).into_iter().map(|z| z * s).collect()
                })
                .collect()
        }
    };
    let r = w.len();
    let yy = |x: &[Complex64], y: &[Complex64]| -x[0] * y[3] + x[1] * y[2] + x[2] * y[1] - x[3] * y[0];
    let t = ComplexMatrix::from_fn(r, r, |i, j| yy(&w[i], &w[j]));
    let sv = tensor::singular_values(&t);
    let mut mu = [0.0; 4];
    for (m, s) in mu.iter_mut().zip(sv) {
        *m = s;
    }
    Ok(mu)
}

/// Wootters concurrence `max(0, mu1 - mu2 - mu3 - mu4)`.
pub fn concurrence_2qubit(state: &QuantumState) -> Result<MeasureValue> {
    require_two_qubits(state)?;
    let mu = wootters_mu(state)?;
    let c = mu[0] - mu[1] - mu[2] - mu[3];
    Ok(MeasureValue::exact(MeasureKind::Concurrence, c, Method::ClosedForm))
}

/// Concurrence of assistance `mu1 + mu2 + mu3 + mu4`.
pub fn concurrence_assist_2qubit(state: &QuantumState) -> Result<MeasureValue> {
    require_two_qubits(state)?;
    let mu = wootters_mu(state)?;
    Ok(MeasureValue::exact(MeasureKind::ConcurrenceAssist, mu.iter().sum(), Method::ClosedForm))
}

fn roof_negativity(state: &QuantumState, cut: &Bipartition, cfg: &RoofConfig, assist: bool) -> Result<MeasureValue> {
    let name = if assist { MeasureKind::Crenoa } else { MeasureKind::Cren };
    let (rho, a) = prepare(state, cut)?;
    if let Some(psi) = rho.amplitudes() {
        let v = CutLayout::new(rho.shape(), &a).negativity(psi);
        return Ok(MeasureValue::exact(name, v, Method::PureState));
    }
    if rho.shape().dims() == [2, 2] {
        let v = if assist {
            concurrence_assist_2qubit(&rho)?
        } else {
            concurrence_2qubit(&rho)?
        };
        return Ok(MeasureValue::exact(name, v.value, Method::ClosedForm));
    }
    let f = pure_negativity_fn(rho.shape(), &a);
    let res = if assist {
        roof_maximize(&rho, f, cfg)?
    } else {
        roof_minimize(&rho, f, cfg)?
    };
    Ok(MeasureValue {
        name,
        value: res.value.max(0.0),
        method: Method::RoofOptimizer,
        error_bound: res.error_bound,
    })
}

/// Convex-roof extended negativity (minimum average over decompositions).
pub fn cren(state: &QuantumState, cut: &Bipartition, cfg: &RoofConfig) -> Result<MeasureValue> {
    roof_negativity(state, cut, cfg, false)
}

/// Convex-roof extended negativity of assistance (maximum average).
pub fn crenoa(state: &QuantumState, cut: &Bipartition, cfg: &RoofConfig) -> Result<MeasureValue> {
    roof_negativity(state, cut, cfg, true)
}

/// `log2(x + 1)` with the error bound pushed through the logarithm.
fn log_lift(v: MeasureValue, name: MeasureKind) -> MeasureValue {
    let floor = 1.0 + (v.value - v.error_bound).max(0.0);
    MeasureValue {
        name,
        value: (v.value + 1.0).log2(),
        method: v.method,
        error_bound: v.error_bound / (floor * LN_2),
    }
}

/// `log2(CREN + 1)`.
pub fn lcren(state: &QuantumState, cut: &Bipartition, cfg: &RoofConfig) -> Result<MeasureValue> {
    Ok(log_lift(cren(state, cut, cfg)?, MeasureKind::Lcren))
}

/// `log2(CRENoA + 1)`.
pub fn lcrenoa(state: &QuantumState, cut: &Bipartition, cfg: &RoofConfig) -> Result<MeasureValue> {
    Ok(log_lift(crenoa(state, cut, cfg)?, MeasureKind::Lcrenoa))
}

/// Tangle: `2(1 - tr rho_A^2)` on pure states, the squared convex roof of
/// `sqrt(tau)` on mixed states.
pub fn tangle(state: &QuantumState, cut: &Bipartition, cfg: &RoofConfig) -> Result<MeasureValue> {
    let (rho, a) = prepare(state, cut)?;
    if let Some(psi) = rho.amplitudes() {
        let v = CutLayout::new(rho.shape(), &a).tangle(psi);
        return Ok(MeasureValue::exact(MeasureKind::Tangle, v, Method::PureState));
    }
    if rho.shape().dims() == [2, 2] {
        let c = concurrence_2qubit(&rho)?.value;
        return Ok(MeasureValue::exact(MeasureKind::Tangle, c * c, Method::ClosedForm));
    }
    let layout = CutLayout::new(rho.shape(), &a);
    let res = roof_minimize(&rho, move |psi: &[Complex64]| layout.tangle(psi).sqrt(), cfg)?;
    let s = res.value.max(0.0);
    Ok(MeasureValue {
        name: MeasureKind::Tangle,
        value: s * s,
        method: Method::RoofOptimizer,
        error_bound: 2.0 * s * res.error_bound + res.error_bound * res.error_bound,
    })
}

/// Evaluates any measure by kind.
pub fn measure(kind: MeasureKind, state: &QuantumState, cut: &Bipartition, cfg: &RoofConfig) -> Result<MeasureValue> {
    match kind {
        MeasureKind::Negativity => negativity(state, cut),
        MeasureKind::LogNegativity => log_negativity(state, cut),
        MeasureKind::Concurrence | MeasureKind::ConcurrenceAssist => {
            let (rho, _) = prepare(state, cut)?;
            if kind == MeasureKind::Concurrence {
                concurrence_2qubit(&rho)
            } else {
                concurrence_assist_2qubit(&rho)
            }
        }
        MeasureKind::Cren => cren(state, cut, cfg),
        MeasureKind::Crenoa => crenoa(state, cut, cfg),
        MeasureKind::Lcren => lcren(state, cut, cfg),
        MeasureKind::Lcrenoa => lcrenoa(state, cut, cfg),
        MeasureKind::Tangle => tangle(state, cut, cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn bell() -> QuantumState {
        let z = Complex64::new(0.0, 0.0);
        let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
        QuantumState::pure(vec![s, z, z, s], SubsystemShape::qubits(2).unwrap()).unwrap()
    }

    fn cfg() -> RoofConfig {
        RoofConfig::default()
    }

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn negativity_examples() {
        let ab = Bipartition::pair(0, 1);
        close(negativity(&bell(), &ab).unwrap().value, 1.0, 1e-14);
        let mixed_bell = QuantumState::mixed(bell().density_matrix(), bell().shape().clone()).unwrap();
        let n = negativity(&mixed_bell, &ab).unwrap();
        close(n.value, 1.0, 1e-14);
        assert_eq!(n.method, Method::ClosedForm);
        let prod = gsd_state([1.0, 0.0, 0.0, 0.0, 0.0], 0.0).unwrap();
        close(negativity(&prod, &Bipartition::focus_rest(0, 3)).unwrap().value, 0.0, 1e-15);
        let anti = antisym_qutrit_state();
        close(negativity(&anti, &Bipartition::focus_rest(0, 3)).unwrap().value, 2.0, 1e-14);
    }

    #[test]
    fn log_negativity_examples() {
        let ab = Bipartition::pair(0, 1);
        close(log_negativity(&bell(), &ab).unwrap().value, 1.0, 1e-14);
        let bb = bell().tensor(&bell()).unwrap();
        let paired = Bipartition::new(vec![0, 2], vec![1, 3]);
        close(log_negativity(&bb, &paired).unwrap().value, 2.0, 1e-13);
        let ex1 = catalog_state("example1").unwrap();
        close(
            log_negativity(&ex1, &Bipartition::focus_rest(0, 3)).unwrap().value,
            (9.0f64 / 5.0).log2(),
            1e-14,
        );
    }

    #[test]
    fn concurrence_examples() {
        close(concurrence_2qubit(&bell()).unwrap().value, 1.0, 1e-14);
        let mix = catalog_state("nonconvex").unwrap();
        close(concurrence_2qubit(&mix).unwrap().value, 0.5, 1e-14);
        let id = QuantumState::mixed(ComplexMatrix::diag(&[0.25; 4]), SubsystemShape::qubits(2).unwrap()).unwrap();
        close(concurrence_2qubit(&id).unwrap().value, 0.0, 1e-15);
        assert!(matches!(
            concurrence_2qubit(&w_state()),
            Err(Error::WrongShape { .. })
        ));
    }

    #[test]
    fn concurrence_assist_examples() {
        let psi = haar_random_pure(&SubsystemShape::qubits(2).unwrap(), 17).unwrap();
        close(
            concurrence_assist_2qubit(&psi).unwrap().value,
            concurrence_2qubit(&psi).unwrap().value,
            1e-14,
        );
        let rab = w_state().reduce(&[0, 1]).unwrap();
        close(concurrence_assist_2qubit(&rab).unwrap().value, 2.0 / 3.0, 1e-14);
        let id = QuantumState::mixed(ComplexMatrix::diag(&[0.25; 4]), SubsystemShape::qubits(2).unwrap()).unwrap();
        let ca = concurrence_assist_2qubit(&id).unwrap().value;
        let f = pure_negativity_fn(id.shape(), &[0]);
        let roof = roof_maximize(&id, f, &RoofConfig { restarts: 8, ..cfg() }).unwrap();
        close(roof.value, ca, 1e-3);
    }

    #[test]
    fn cren_examples() {
        // With |a b c> ordered A, B, C: ρ_AC keeps the |000>, |101> coherence,
        // so 2λ0λ2 belongs to A|C and 2λ0λ3 to A|B.
        let ex1 = catalog_state("example1").unwrap();
        let v = cren(&ex1, &Bipartition::pair(0, 2), &cfg()).unwrap();
        close(v.value, 2.0 * 2f64.sqrt() / 5.0, 1e-12);
        assert_eq!(v.method, Method::ClosedForm);
        close(cren(&ex1, &Bipartition::pair(0, 1), &cfg()).unwrap().value, 2.0 / 5.0, 1e-12);
        close(cren(&ex1, &Bipartition::focus_rest(0, 3), &cfg()).unwrap().value, 4.0 / 5.0, 1e-12);
        let psi = haar_random_pure(&SubsystemShape::new(vec![2, 3]).unwrap(), 5).unwrap();
        let cut = Bipartition::pair(0, 1);
        assert_eq!(cren(&psi, &cut, &cfg()).unwrap().value, negativity(&psi, &cut).unwrap().value);
    }

    #[test]
    fn df4_pairwise_cren_follows_from_the_stated_state() {
        // Independent numpy evaluation of the state as defined gives
        // concurrences (0, √3/2, 0) for the pairs (A,B), (A,C), (A,D).
        let s = catalog_state("df4").unwrap();
        let expected = [0.0, 3f64.sqrt() / 2.0, 0.0];
        for (j, e) in (1..4).zip(expected) {
            close(cren(&s, &Bipartition::pair(0, j), &cfg()).unwrap().value, e, 1e-12);
        }
        close(cren(&s, &Bipartition::focus_rest(0, 4), &cfg()).unwrap().value, 1.0, 1e-12);
    }

    #[test]
    fn crenoa_examples() {
        let w = w_state();
        close(
            crenoa(&w, &Bipartition::focus_rest(0, 3), &cfg()).unwrap().value,
            2.0 * 2f64.sqrt() / 3.0,
            1e-14,
        );
        close(crenoa(&bell(), &Bipartition::pair(0, 1), &cfg()).unwrap().value, 1.0, 1e-14);
        // Werner-type mixture p|Φ+><Φ+| + (1-p) I/4 against the roof.
        let p = 0.6;
        let werner = QuantumState::mixed(
            &bell().density_matrix().scale(Complex64::new(p, 0.0))
                + &ComplexMatrix::diag(&[(1.0 - p) / 4.0; 4]),
            SubsystemShape::qubits(2).unwrap(),
        )
        .unwrap();
        let closed = crenoa(&werner, &Bipartition::pair(0, 1), &cfg()).unwrap().value;
        let roof = roof_maximize(&werner, pure_negativity_fn(werner.shape(), &[0]), &cfg()).unwrap();
        close(roof.value, closed, 1e-3);
    }

    #[test]
    fn lcren_examples() {
        let ex1 = catalog_state("example1").unwrap();
        close(
            lcren(&ex1, &Bipartition::pair(0, 2), &cfg()).unwrap().value,
            (2.0 * 2f64.sqrt() / 5.0 + 1.0).log2(),
            1e-12,
        );
        close(
            lcren(&ex1, &Bipartition::pair(0, 1), &cfg()).unwrap().value,
            (7.0f64 / 5.0).log2(),
            1e-12,
        );
        let prod = gsd_state([1.0, 0.0, 0.0, 0.0, 0.0], 0.0).unwrap();
        close(lcren(&prod, &Bipartition::pair(0, 1), &cfg()).unwrap().value, 0.0, 1e-15);
        let anti = antisym_qutrit_state();
        close(lcren(&anti, &Bipartition::focus_rest(0, 3), &cfg()).unwrap().value, 3f64.log2(), 1e-13);
        let ab = lcren(&anti, &Bipartition::pair(0, 1), &cfg()).unwrap();
        assert_eq!(ab.method, Method::RoofOptimizer);
        close(ab.value, 1.0, 1e-9);
    }

    #[test]
    fn lcrenoa_examples() {
        let w = w_state();
        close(
            lcrenoa(&w, &Bipartition::focus_rest(0, 3), &cfg()).unwrap().value,
            (2.0 * 2f64.sqrt() / 3.0 + 1.0).log2(),
            1e-14,
        );
        close(
            lcrenoa(&w, &Bipartition::pair(0, 1), &cfg()).unwrap().value,
            (5.0f64 / 3.0).log2(),
            1e-12,
        );
        let prod = gsd_state([1.0, 0.0, 0.0, 0.0, 0.0], 0.0).unwrap();
        close(lcrenoa(&prod, &Bipartition::focus_rest(0, 3), &cfg()).unwrap().value, 0.0, 1e-15);
    }

    #[test]
    fn tangle_examples() {
        let anti = antisym_qutrit_state();
        close(tangle(&anti, &Bipartition::focus_rest(0, 3), &cfg()).unwrap().value, 4.0 / 3.0, 1e-14);
        let cex = state_322();
        close(tangle(&cex, &Bipartition::focus_rest(0, 3), &cfg()).unwrap().value, 4.0 / 3.0, 1e-14);
        let t = tangle(&cex, &Bipartition::pair(0, 1), &cfg()).unwrap();
        assert_eq!(t.method, Method::RoofOptimizer);
        assert!(t.value <= 8.0 / 9.0 + 1e-2, "{}", t.value);
        close(tangle(&bell(), &Bipartition::pair(0, 1), &cfg()).unwrap().value, 1.0, 1e-14);
    }

    #[test]
    fn bipartition_validation() {
        let w = w_state();
        for bad in [
            Bipartition::new(vec![], vec![1]),
            Bipartition::new(vec![0], vec![0]),
            Bipartition::new(vec![0], vec![3]),
        ] {
            assert!(matches!(negativity(&w, &bad), Err(Error::InvalidBipartition(_))));
        }
    }

    #[test]
    fn measure_dispatch_by_kind() {
        let w = w_state();
        let cut = Bipartition::pair(0, 1);
        for kind in [
            MeasureKind::Negativity,
            MeasureKind::LogNegativity,
            MeasureKind::Concurrence,
            MeasureKind::ConcurrenceAssist,
            MeasureKind::Cren,
            MeasureKind::Crenoa,
            MeasureKind::Lcren,
            MeasureKind::Lcrenoa,
            MeasureKind::Tangle,
        ] {
            let v = measure(kind, &w, &cut, &cfg()).unwrap();
            assert_eq!(v.name, kind);
            assert!(v.value >= 0.0);
        }
    }
}
