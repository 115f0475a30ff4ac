use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    attach_tails, check_monogamy, check_negative_alpha, check_polygamy, ckw_check, measure_profile,
    scan_hybrid, InequalityReport, MeasureProfile, NegativeMode, Scheme, TheoremId, Verdict, MONOGAMY_SCALE,
};
use crate::error::{Error, Result};
use crate::measures::MeasureKind;
use crate::roof::RoofConfig;
use crate::states::{haar_random_pure, HAAR_ALGORITHM};
use crate::tensor::SubsystemShape;

/// `steps` evenly spaced points from `lo` to `hi` inclusive.
pub fn alpha_grid(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>> {
    if !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidConfig("alpha grid bounds must be finite".into()));
    }
    match steps {
        0 => Err(Error::InvalidConfig("alpha grid needs at least one step".into())),
        1 if lo == hi => Ok(vec![lo]),
        _ if lo >= hi => Err(Error::InvalidConfig(format!(
            "alpha grid must be strictly increasing, got {lo}:{hi}:{steps}"
        ))),
        1 => Err(Error::InvalidConfig("a single-point grid needs lo == hi".into())),
        _ => {
            let last = (steps - 1) as f64;
            Ok((0..steps)
                .map(|k| if k == steps - 1 { hi } else { lo + (hi - lo) * k as f64 / last })
                .collect())
        }
    }
}

/// One row of an α sweep. `rhs_weighted` is the Hamming-weight bound and
/// `rhs_geometric` the geometric one, present only when its side condition
/// holds. `margin` refers to the Hamming-weight bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub alpha: f64,
    pub lhs: f64,
    pub rhs_baseline: f64,
    pub rhs_weighted: f64,
    pub rhs_geometric: Option<f64>,
    pub margin: f64,
}

/// Evaluates baseline, Hamming and geometric bounds over `alphas`.
pub fn sweep(profile: &MeasureProfile, alphas: &[f64]) -> Result<Vec<SweepRow>> {
    let check = match profile.measure {
        MeasureKind::Lcren => check_monogamy,
        MeasureKind::Lcrenoa => check_polygamy,
        other => {
            return Err(Error::InvalidConfig(format!(
                "sweeps run on lcren or lcrenoa profiles, not {}",
                other.as_str()
            )))
        }
    };
    alphas
        .iter()
        .map(|&alpha| {
            let base = check(profile, alpha, Scheme::Uniform)?;
            let ham = check(profile, alpha, Scheme::Hamming)?;
            let geo = check(profile, alpha, Scheme::Geometric)?;
            Ok(SweepRow {
                alpha,
                lhs: ham.lhs,
                rhs_baseline: base.rhs,
                rhs_weighted: ham.rhs,
                rhs_geometric: geo.conditions_hold().then_some(geo.rhs),
                margin: ham.margin,
            })
        })
        .collect()
}

/// CSV header for a sweep on `measure`.
pub fn sweep_header(measure: MeasureKind) -> &'static str {
    match measure {
        MeasureKind::Lcrenoa => "alpha,lhs,rhs_baseline,rhs_thm5,rhs_thm6,margin",
        _ => "alpha,lhs,rhs_baseline,rhs_thm1,rhs_thm2,margin",
    }
}

/// Renders sweep rows as CSV with 17 significant digits. A missing
/// geometric bound is an empty field.
pub fn sweep_csv(measure: MeasureKind, rows: &[SweepRow]) -> String {
    let mut out = String::new();
    out.push_str(sweep_header(measure));
    out.push('\n');
    for r in rows {
        let geo = r.rhs_geometric.map(|v| format!("{v:.16e}")).unwrap_or_default();
        let _ = writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{},{:.16e}",
            r.alpha, r.lhs, r.rhs_baseline, r.rhs_weighted, geo, r.margin
        );
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub qubits: usize,
    pub count: usize,
    pub seed: u64,
    pub mono_alphas: Vec<f64>,
    pub poly_alphas: Vec<f64>,
    pub negative_alphas: Vec<f64>,
    /// Pairwise values must exceed this for the averaged bounds to run.
    pub negative_floor: f64,
    /// Evaluate the hybrid bounds (needs at least four qubits and runs the
    /// roof optimizer on group reductions).
    pub hybrid: bool,
    pub roof: RoofConfig,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            qubits: 3,
            count: 100,
            seed: 0,
            mono_alphas: vec![MONOGAMY_SCALE, 3.0, 5.0],
            poly_alphas: vec![0.5, 1.5, 2.0],
            negative_alphas: vec![-0.5, -2.0],
            negative_floor: 1e-6,
            hybrid: false,
            roof: RoofConfig {
                restarts: 8,
                ..RoofConfig::default()
            },
        }
    }
}

/// Outcome counts for one theorem at one α (and split `t` for hybrids).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremTally {
    pub theorem: TheoremId,
    pub alpha: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    pub evaluated: usize,
    pub holds: usize,
    pub violated: usize,
    pub condition_failed: usize,
    pub inconclusive: usize,
    /// Samples where a precondition on the inputs excluded the check.
    pub skipped: usize,
    /// Smallest margin among samples whose conditions hold.
    pub worst_margin: Option<f64>,
    pub worst_seed: Option<u64>,
}

impl TheoremTally {
    fn new(theorem: TheoremId, alpha: f64, t: Option<usize>) -> Self {
        Self {
            theorem,
            alpha,
            t,
            evaluated: 0,
            holds: 0,
            violated: 0,
            condition_failed: 0,
            inconclusive: 0,
            skipped: 0,
            worst_margin: None,
            worst_seed: None,
        }
    }

    fn add(&mut self, r: &InequalityReport, seed: u64) {
        self.evaluated += 1;
        match r.verdict {
            Verdict::Holds => self.holds += 1,
            Verdict::Violated => self.violated += 1,
            Verdict::ConditionFailed => self.condition_failed += 1,
            Verdict::Inconclusive => self.inconclusive += 1,
        }
        if r.verdict != Verdict::ConditionFailed && self.worst_margin.is_none_or(|w| r.margin < w) {
            self.worst_margin = Some(r.margin);
            self.worst_seed = Some(seed);
        }
    }

    /// Fraction of evaluated samples whose side conditions held.
    pub fn condition_incidence(&self) -> f64 {
        if self.evaluated == 0 {
            0.0
        } else {
            (self.evaluated - self.condition_failed) as f64 / self.evaluated as f64
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub qubits: usize,
    pub count: usize,
    pub seed: u64,
    pub sampler: String,
    pub tallies: Vec<TheoremTally>,
}

impl SuiteSummary {
    pub fn tally(&self, theorem: TheoremId, alpha: f64) -> Option<&TheoremTally> {
        self.tallies.iter().find(|t| t.theorem == theorem && t.alpha == alpha && t.t.is_none())
    }

    pub fn total_violations(&self, theorem: TheoremId) -> usize {
        self.tallies.iter().filter(|t| t.theorem == theorem).map(|t| t.violated).sum()
    }
}

enum Outcome {
    Report(Option<usize>, InequalityReport),
    Skipped(TheoremId, f64),
}

fn sample_seed(base: u64, i: usize) -> u64 {
    base.wrapping_add(i as u64)
}

fn run_sample(cfg: &SuiteConfig, shape: &SubsystemShape, seed: u64) -> Result<Vec<Outcome>> {
    let state = haar_random_pure(shape, seed)?;
    let mut out = Vec::new();
    let mut mono = measure_profile(&state, 0, MeasureKind::Lcren, &cfg.roof)?;
    let mut poly = measure_profile(&state, 0, MeasureKind::Lcrenoa, &cfg.roof)?;
    let hybrid = cfg.hybrid && mono.n() >= 3;
    if hybrid {
        attach_tails(&mut mono, &state, &cfg.roof)?;
        attach_tails(&mut poly, &state, &cfg.roof)?;
    }
    for &a in &cfg.mono_alphas {
        for s in [Scheme::Uniform, Scheme::Hamming, Scheme::Geometric] {
            out.push(Outcome::Report(None, check_monogamy(&mono, a, s)?));
        }
        if hybrid {
            for (t, r) in scan_hybrid(&mono, a)?.into_iter().enumerate() {
                out.push(Outcome::Report(Some(t), r));
            }
        }
    }
    for &a in &cfg.poly_alphas {
        for s in [Scheme::Uniform, Scheme::Hamming, Scheme::Geometric] {
            out.push(Outcome::Report(None, check_polygamy(&poly, a, s)?));
        }
        if hybrid {
            for (t, r) in scan_hybrid(&poly, a)?.into_iter().enumerate() {
                out.push(Outcome::Report(Some(t), r));
            }
        }
    }
    for &a in &cfg.negative_alphas {
        for (p, mode, id) in [
            (&mono, NegativeMode::MonogamyUpper, TheoremId::Thm4),
            (&poly, NegativeMode::PolygamyLower, TheoremId::Thm8),
        ] {
            if p.pairs.iter().all(|t| t.value > cfg.negative_floor) {
                out.push(Outcome::Report(None, check_negative_alpha(p, a, mode)?));
            } else {
                out.push(Outcome::Skipped(id, a));
            }
        }
    }
    let tangle = measure_profile(&state, 0, MeasureKind::Tangle, &cfg.roof)?;
    out.push(Outcome::Report(None, ckw_check(&tangle)?));
    Ok(out)
}

/// Runs every bound on `count` seeded Haar-random pure states of
/// `qubits` qubits with focus 0. Sample `i` uses seed `seed + i`.
pub fn random_suite(cfg: &SuiteConfig) -> Result<SuiteSummary> {
    let shape = SubsystemShape::qubits(cfg.qubits)?;
    if cfg.qubits < 3 {
        return Err(Error::InvalidConfig("random suites need at least three qubits".into()));
    }
    let per_sample: Vec<(u64, Vec<Outcome>)> = (0..cfg.count)
        .into_par_iter()
        .map(|i| {
            let seed = sample_seed(cfg.seed, i);
            run_sample(cfg, &shape, seed).map(|o| (seed, o))
        })
        .collect::<Result<_>>()?;
    let mut tallies: BTreeMap<(TheoremId, Option<usize>, u64), TheoremTally> = BTreeMap::new();
    for (seed, outcomes) in &per_sample {
        for o in outcomes {
            match o {
                Outcome::Report(t, r) => tallies
                    .entry((r.theorem_id, *t, r.alpha.to_bits()))
                    .or_insert_with(|| TheoremTally::new(r.theorem_id, r.alpha, *t))
                    .add(r, *seed),
                Outcome::Skipped(id, a) => {
                    tallies
                        .entry((*id, None, a.to_bits()))
                        .or_insert_with(|| TheoremTally::new(*id, *a, None))
                        .skipped += 1
                }
            }
        }
    }
    let mut tallies: Vec<TheoremTally> = tallies.into_values().collect();
    tallies.sort_by(|a, b| (a.theorem, a.t).cmp(&(b.theorem, b.t)).then(a.alpha.total_cmp(&b.alpha)));
    Ok(SuiteSummary {
        qubits: cfg.qubits,
        count: cfg.count,
        seed: cfg.seed,
        sampler: HAAR_ALGORITHM.to_string(),
        tallies,
    })
}
