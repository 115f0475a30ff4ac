//! Convex-roof extension of pure-state functionals.
//!
//! Every pure-state ensemble of a density matrix `rho = sum_j q_j |v_j><v_j|`
//! (rank `r`) arises from an `m x r` isometry `V` through
//! `|psi_k~> = sum_j V_kj sqrt(q_j) |v_j>`, `p_k = ||psi_k~||^2`. The optimizer
//! searches over isometries with random two-row unitary rotations (a
//! derivative-free pattern search) whose angle is halved whenever a full sweep
//! fails to improve the objective.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, TAU};

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::states::{random_isometry, seeded_rng, QuantumState};
use crate::tensor::{self, ComplexMatrix, EIGEN_ZERO_TOL};

/// Maximum tolerated deviation of `V^dag V` from the identity.
pub const ISOMETRY_TOL: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RoofConfig {
    /// Number of ensemble members `m`; `None` means `rank^2`.
    pub ensemble_size: Option<usize>,
    pub restarts: usize,
    /// Maximum number of full pair sweeps per restart.
    pub max_iterations: usize,
    /// Rotation angle at which a restart is considered converged.
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for RoofConfig {
    fn default() -> Self {
        Self {
            ensemble_size: None,
            restarts: 32,
            max_iterations: 2000,
            tolerance: 1e-6,
            seed: 0,
        }
    }
}

impl RoofConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    fn validate(&self, rank: usize) -> Result<usize> {
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be at least 1".into()));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::InvalidConfig("tolerance must be positive".into()));
        }
        let m = self.ensemble_size.unwrap_or(rank * rank);
        if m < rank {
            return Err(Error::InvalidConfig(format!(
                "ensemble size {m} is smaller than the rank {rank}"
            )));
        }
        Ok(m)
    }
}

/// Pure-state decomposition `{p_k, |psi_k>}`.
#[derive(Clone, Debug)]
pub struct Ensemble {
    pub weights: Vec<f64>,
    pub members: Vec<QuantumState>,
}

impl Ensemble {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `sum_k p_k |psi_k><psi_k|`.
    pub fn density_matrix(&self) -> ComplexMatrix {
        let d = self.members.first().map_or(1, |m| m.dim());
        let mut acc = ComplexMatrix::zeros(d, d);
        for (p, m) in self.weights.iter().zip(&self.members) {
            acc = &acc + &m.density_matrix().scale(Complex64::new(*p, 0.0));
        }
        acc
    }

    /// `sum_k p_k f(psi_k)`.
    pub fn average(&self, f: impl Fn(&[Complex64]) -> f64) -> f64 {
        self.weights
            .iter()
            .zip(&self.members)
            .map(|(p, m)| p * f(m.amplitudes().expect("ensemble members are pure")))
            .sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Minimize,
    Maximize,
}

#[derive(Clone, Debug)]
pub struct RoofResult {
    /// Objective of `ensemble`: an upper bound of the minimum (lower bound of the maximum).
    pub value: f64,
    pub ensemble: Ensemble,
    pub isometry: ComplexMatrix,
    /// Spread over the best three restarts, widened to the final step size if
    /// the best restart ran out of iterations.
    pub error_bound: f64,
    pub converged: bool,
    /// Final objective of every restart, in restart order.
    pub restart_values: Vec<f64>,
}

/// Weighted eigenvectors `sqrt(q_j) v_j` of the nonzero spectrum, as rows.
struct Spectrum {
    rows: Vec<Vec<Complex64>>,
}

impl Spectrum {
    fn of(rho: &QuantumState) -> Result<Self> {
        if let Some(a) = rho.amplitudes() {
            return Ok(Self { rows: vec![a.to_vec()] });
        }
        let eig = tensor::hermitian_eigen(rho.data())?;
        let kept: Vec<usize> = (0..eig.values.len())
            .filter(|&k| eig.values[k] > EIGEN_ZERO_TOL)
            .collect();
        let total: f64 = kept.iter().map(|&k| eig.values[k]).sum();
        let rows = kept
            .iter()
            .map(|&k| {
                let s = (eig.values[k] / total).sqrt();
                eig.vector(k).into_iter().map(|z| z * s).collect()
            })
            .collect();
        Ok(Self { rows })
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn dim(&self) -> usize {
        self.rows[0].len()
    }

    /// Rows of `V W`.
    fn apply(&self, v: &ComplexMatrix) -> Vec<Vec<Complex64>> {
        let d = self.dim();
        (0..v.rows())
            .map(|k| {
                let mut row = vec![ZERO; d];
                for (j, w) in self.rows.iter().enumerate() {
                    let c = v[(k, j)];
                    for (x, y) in row.iter_mut().zip(w) {
                        *x += c * y;
                    }
                }
                row
            })
            .collect()
    }
}

fn ensemble_from_rows(rows: &[Vec<Complex64>], rho: &QuantumState) -> Result<Ensemble> {
    let mut weights = Vec::new();
    let mut members = Vec::new();
    for row in rows {
        let p: f64 = row.iter().map(|z| z.norm_sqr()).sum();
        if p <= 1e-15 {
            continue;
        }
        weights.push(p);
        members.push(QuantumState::pure_normalized(row.clone(), rho.shape().clone())?);
    }
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    Ok(Ensemble { weights, members })
}

fn isometry_defect(v: &ComplexMatrix) -> f64 {
    (&v.adjoint() * v).max_abs_diff(&ComplexMatrix::identity(v.cols()))
}

/// Ensemble generated by the isometry `v` (`m x rank`). Members with
/// vanishing weight are dropped.
pub fn decompose(rho: &QuantumState, v: &ComplexMatrix) -> Result<Ensemble> {
    let spectrum = Spectrum::of(rho)?;
    if v.cols() != spectrum.rank() {
        return Err(Error::DimensionMismatch {
            expected: spectrum.rank(),
            found: v.cols(),
        });
    }
    let deviation = isometry_defect(v);
    if deviation > ISOMETRY_TOL {
        return Err(Error::NotIsometry { deviation });
    }
    ensemble_from_rows(&spectrum.apply(v), rho)
}

/// `[I_r; 0]`: the eigendecomposition ensemble padded with empty members.
fn padded_identity(m: usize, r: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(m, r, |i, j| if i == j { Complex64::new(1.0, 0.0) } else { ZERO })
}

struct Restart {
    value: f64,
    rows: Vec<Vec<Complex64>>,
    isometry: ComplexMatrix,
    converged: bool,
    final_step: f64,
}

struct Search<'a, F> {
    f: &'a F,
    sign: f64,
    scratch: Vec<Complex64>,
}

impl<F: Fn(&[Complex64]) -> f64> Search<'_, F> {
    /// `p f(psi / sqrt(p))`, signed so that the search always minimizes.
    fn contribution(&mut self, row: &[Complex64]) -> f64 {
        let p: f64 = row.iter().map(|z| z.norm_sqr()).sum();
        if p <= 1e-300 {
            return 0.0;
        }
        let s = 1.0 / p.sqrt();
        self.scratch.clear();
        self.scratch.extend(row.iter().map(|z| z * s));
        self.sign * p * (self.f)(&self.scratch)
    }
}

/// Applies `[[c, -e^{-iφ} s], [e^{iφ} s, c]]` to the pair `(x, y)`.
fn rotate(x: &[Complex64], y: &[Complex64], c: f64, s_phase: Complex64, out_x: &mut Vec<Complex64>, out_y: &mut Vec<Complex64>) {
    out_x.clear();
    out_y.clear();
    for (a, b) in x.iter().zip(y) {
        out_x.push(a * c - s_phase.conj() * b);
        out_y.push(s_phase * a + b * c);
    }
}

fn run_restart<F>(spectrum: &Spectrum, m: usize, f: &F, direction: Direction, cfg: &RoofConfig, index: usize) -> Restart
where
    F: Fn(&[Complex64]) -> f64,
{
    let r = spectrum.rank();
    let mut rng = seeded_rng(cfg.seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let mut v = if index == 0 {
        padded_identity(m, r)
    } else {
        random_isometry(m, r, &mut rng)
    };
    let mut rows = spectrum.apply(&v);
    let mut search = Search {
        f,
        sign: if direction == Direction::Minimize { 1.0 } else { -1.0 },
        scratch: Vec::with_capacity(spectrum.dim()),
    };
    let mut contrib: Vec<f64> = rows.iter().map(|row| search.contribution(row)).collect();

    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|k| (k + 1..m).map(move |l| (k, l))).collect();
    let mut step = FRAC_PI_4;
    let mut converged = pairs.is_empty();
    let (mut nx, mut ny) = (Vec::new(), Vec::new());
    let (mut vx, mut vy) = (Vec::new(), Vec::new());

    for _sweep in 0..cfg.max_iterations {
        if converged {
            break;
        }
        let phase0 = rng.random_range(0.0..TAU);
        let mut improved = false;
        for &(k, l) in &pairs {
            let old = contrib[k] + contrib[l];
            for (angle, phase) in [(step, phase0), (-step, phase0), (step, phase0 + FRAC_PI_2), (-step, phase0 + FRAC_PI_2)] {
                let (s, c) = angle.sin_cos();
                let sp = Complex64::from_polar(s, phase);
                rotate(&rows[k], &rows[l], c, sp, &mut nx, &mut ny);
                let (ck, cl) = (search.contribution(&nx), search.contribution(&ny));
                if old - (ck + cl) > 1e-15 {
                    std::mem::swap(&mut rows[k], &mut nx);
                    std::mem::swap(&mut rows[l], &mut ny);
                    contrib[k] = ck;
                    contrib[l] = cl;
                    let (rk, rl): (Vec<Complex64>, Vec<Complex64>) =
                        ((0..r).map(|j| v[(k, j)]).collect(), (0..r).map(|j| v[(l, j)]).collect());
                    rotate(&rk, &rl, c, sp, &mut vx, &mut vy);
                    for j in 0..r {
                        v[(k, j)] = vx[j];
                        v[(l, j)] = vy[j];
                    }
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            step *= 0.5;
            if step < cfg.tolerance {
                converged = true;
            }
        }
    }

    // Recompute from the final rows to shed accumulated increments.
    let value = search.sign * rows.iter().map(|row| search.contribution(row)).sum::<f64>();
    Restart {
        value,
        rows,
        isometry: v,
        converged,
        final_step: step,
    }
}

fn optimize<F>(rho: &QuantumState, f: F, cfg: &RoofConfig, direction: Direction) -> Result<RoofResult>
where
    F: Fn(&[Complex64]) -> f64 + Sync,
{
    let spectrum = Spectrum::of(rho)?;
    let r = spectrum.rank();
    if r == 1 {
        let ensemble = ensemble_from_rows(&spectrum.rows, rho)?;
        let value = ensemble.average(&f);
        return Ok(RoofResult {
            value,
            ensemble,
            isometry: ComplexMatrix::identity(1),
            error_bound: 0.0,
            converged: true,
            restart_values: vec![value],
        });
    }
    let m = cfg.validate(r)?;
    let restarts: Vec<Restart> = (0..cfg.restarts)
        .into_par_iter()
        .map(|i| run_restart(&spectrum, m, &f, direction, cfg, i))
        .collect();

    let better = |a: f64, b: f64| match direction {
        Direction::Minimize => a < b,
        Direction::Maximize => a > b,
    };
    // Ties go to the lowest restart index.
    let mut best = 0;
    for (i, rs) in restarts.iter().enumerate().skip(1) {
        if better(rs.value, restarts[best].value) {
            best = i;
        }
    }
    let restart_values: Vec<f64> = restarts.iter().map(|rs| rs.value).collect();
    let mut ranked = restart_values.clone();
    ranked.sort_by(|a, b| match direction {
        Direction::Minimize => a.total_cmp(b),
        Direction::Maximize => b.total_cmp(a),
    });
    let top = &ranked[..ranked.len().min(3)];
    let mut error_bound = (top[0] - top[top.len() - 1]).abs();
    let winner = &restarts[best];
    if !winner.converged {
        error_bound = error_bound.max(winner.final_step);
    }
    Ok(RoofResult {
        value: winner.value,
        ensemble: ensemble_from_rows(&winner.rows, rho)?,
        isometry: winner.isometry.clone(),
        error_bound,
        converged: winner.converged,
        restart_values,
    })
}

/// Smallest ensemble average of `f` found; `f` receives normalized vectors.
pub fn roof_minimize<F>(rho: &QuantumState, f: F, cfg: &RoofConfig) -> Result<RoofResult>
where
    F: Fn(&[Complex64]) -> f64 + Sync,
{
    optimize(rho, f, cfg, Direction::Minimize)
}

/// Largest ensemble average of `f` found.
pub fn roof_maximize<F>(rho: &QuantumState, f: F, cfg: &RoofConfig) -> Result<RoofResult>
where
    F: Fn(&[Complex64]) -> f64 + Sync,
{
    optimize(rho, f, cfg, Direction::Maximize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{concurrence_2qubit, concurrence_assist_2qubit, pure_negativity_fn};
    use crate::states::{haar_random_pure, nonconvexity_pair, random_unitary};
    use crate::tensor::SubsystemShape;

    fn nonconvex_mixture() -> QuantumState {
        let (r1, r2) = nonconvexity_pair();
        QuantumState::mixture(&[(0.5, &r1), (0.5, &r2)]).unwrap()
    }

    fn random_two_qubit_mixed(seed: u64) -> QuantumState {
        let env = 2 + (seed % 3) as usize;
        let shape = SubsystemShape::new(vec![2, 2, env]).unwrap();
        haar_random_pure(&shape, seed).unwrap().reduce(&[0, 1]).unwrap()
    }

    #[test]
    fn identity_isometry_gives_eigen_ensemble() {
        let rho = nonconvex_mixture();
        let ens = decompose(&rho, &ComplexMatrix::identity(2)).unwrap();
        assert_eq!(ens.len(), 2);
        let mut w = ens.weights.clone();
        w.sort_by(|a, b| a.total_cmp(b));
        // Eigenvalues of (singlet + |01><01|)/2 are (2 ± √2)/4.
        assert!((w[0] - (2.0 - 2f64.sqrt()) / 4.0).abs() < 1e-12);
        assert!(ens.density_matrix().max_abs_diff(rho.data()) < 1e-12);
    }

    #[test]
    fn rank_one_collapses_to_the_pure_state() {
        let psi = haar_random_pure(&SubsystemShape::qubits(2).unwrap(), 3).unwrap();
        let rho = QuantumState::mixed(psi.density_matrix(), psi.shape().clone()).unwrap();
        let mut rng = seeded_rng(1);
        let v = random_isometry(4, 1, &mut rng);
        let ens = decompose(&rho, &v).unwrap();
        let a = psi.amplitudes().unwrap();
        for m in &ens.members {
            let overlap: Complex64 = a.iter().zip(m.amplitudes().unwrap()).map(|(x, y)| x.conj() * y).sum();
            assert!((overlap.norm() - 1.0).abs() < 1e-10);
        }
        let f = pure_negativity_fn(psi.shape(), &[0]);
        let res = roof_minimize(&rho, &f, &RoofConfig::default()).unwrap();
        assert!((res.value - f(a)).abs() < 1e-12);
    }

    #[test]
    fn decompose_rejects_non_isometry() {
        let rho = nonconvex_mixture();
        let bad = ComplexMatrix::diag(&[1.0, 2.0]);
        assert!(matches!(decompose(&rho, &bad), Err(Error::NotIsometry { .. })));
        assert!(matches!(
            decompose(&rho, &ComplexMatrix::identity(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn random_isometries_reconstruct_rho() {
        let rho = random_two_qubit_mixed(11);
        let mut rng = seeded_rng(5);
        for m in [4, 7, 16] {
            let v = random_isometry(m, 4, &mut rng);
            let ens = decompose(&rho, &v).unwrap();
            assert!((ens.weights.iter().sum::<f64>() - 1.0).abs() < 1e-10);
            assert!(ens.density_matrix().max_abs_diff(rho.data()) < 1e-8);
        }
    }

    #[test]
    fn grid_search_finds_half_for_nonconvex_mixture() {
        // Brute force over 2x2 unitaries [[c, -e^{-iφ}s], [e^{iφ}s, c]] acting
        // on the eigen-ensemble: some rotation reaches average negativity 1/2.
        let rho = nonconvex_mixture();
        let f = pure_negativity_fn(rho.shape(), &[0]);
        let mut best = f64::INFINITY;
        let n = 400;
        for i in 0..=n {
            let theta = std::f64::consts::PI * i as f64 / n as f64;
            for phi in [0.0, FRAC_PI_2, std::f64::consts::PI, 3.0 * FRAC_PI_2] {
                let (s, c) = theta.sin_cos();
                let sp = Complex64::from_polar(s, phi);
                let v = ComplexMatrix::new(2, 2, vec![Complex64::new(c, 0.0), -sp.conj(), sp, Complex64::new(c, 0.0)]).unwrap();
                best = best.min(decompose(&rho, &v).unwrap().average(&f));
            }
        }
        assert!(best <= 0.5 + 1e-6, "grid minimum {best}");

        let res = roof_minimize(&rho, &f, &RoofConfig::default()).unwrap();
        assert!((res.value - 0.5).abs() < 1e-3, "roof {}", res.value);
    }

    #[test]
    fn never_worse_than_eigen_ensemble_and_deterministic() {
        let rho = random_two_qubit_mixed(5);
        let f = pure_negativity_fn(rho.shape(), &[0]);
        let eig_value = decompose(&rho, &ComplexMatrix::identity(4)).unwrap().average(&f);
        let cfg = RoofConfig {
            restarts: 4,
            ..RoofConfig::with_seed(9)
        };
        let a = roof_minimize(&rho, &f, &cfg).unwrap();
        assert!(a.value <= eig_value + 1e-12);
        let b = roof_minimize(&rho, &f, &cfg).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.restart_values, b.restart_values);
        assert!(isometry_defect(&a.isometry) < 1e-9);
        assert!(a.ensemble.density_matrix().max_abs_diff(rho.data()) < 1e-8);
    }

    #[test]
    fn matches_wootters_on_random_states() {
        let cfg = RoofConfig {
            restarts: 8,
            ..RoofConfig::with_seed(1)
        };
        for seed in 0..6 {
            let rho = random_two_qubit_mixed(seed);
            let f = pure_negativity_fn(rho.shape(), &[0]);
            let c = concurrence_2qubit(&rho).unwrap().value;
            let ca = concurrence_assist_2qubit(&rho).unwrap().value;
            let lo = roof_minimize(&rho, &f, &cfg).unwrap();
            let hi = roof_maximize(&rho, &f, &cfg).unwrap();
            assert!((lo.value - c).abs() < 1e-3, "seed {seed}: roof {} vs C {c}", lo.value);
            assert!((hi.value - ca).abs() < 1e-3, "seed {seed}: roof {} vs Ca {ca}", hi.value);
        }
    }

    #[test]
    fn config_validation() {
        let rho = nonconvex_mixture();
        let f = pure_negativity_fn(rho.shape(), &[0]);
        let bad = RoofConfig {
            ensemble_size: Some(1),
            ..RoofConfig::default()
        };
        assert!(matches!(roof_minimize(&rho, &f, &bad), Err(Error::InvalidConfig(_))));
        let bad = RoofConfig {
            restarts: 0,
            ..RoofConfig::default()
        };
        assert!(roof_maximize(&rho, &f, &bad).is_err());
    }

    #[test]
    fn unitary_invariance_of_the_ensemble_average_space() {
        // Any unitary mixing of a fixed ensemble reproduces rho.
        let rho = random_two_qubit_mixed(8);
        let mut rng = seeded_rng(2);
        let u = random_unitary(4, &mut rng);
        let ens = decompose(&rho, &u).unwrap();
        assert!(ens.density_matrix().max_abs_diff(rho.data()) < 1e-8);
    }
}
