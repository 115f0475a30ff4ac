//! Monogamy and polygamy bounds on powered LCREN / LCRENoA, plus the
//! tangle-based CKW relation.
//!
//! Every check takes a [`MeasureProfile`] so the same code runs on computed
//! values and on tabulated ones. Pairwise values are sorted in descending
//! order before weights are assigned, except for the hybrid split bounds,
//! which keep the input order of the `B_i`.

mod profile;
mod suite;

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::MeasureKind;

pub use profile::{attach_tails, measure_profile, MeasureProfile, Term};
pub use suite::{
    alpha_grid, random_suite, sweep, sweep_csv, sweep_header, SuiteConfig, SuiteSummary, SweepRow, TheoremTally,
};

/// Weight base denominator for LCREN monogamy.
pub const MONOGAMY_SCALE: f64 = 4.0 * LN_2;
/// Weight base denominator for LCRENoA polygamy.
pub const POLYGAMY_SCALE: f64 = 2.0;
/// A margin below `-VIOLATION_TOL` means the inequality fails numerically.
pub const VIOLATION_TOL: f64 = 1e-9;
/// Side conditions compare with this slack.
pub const CONDITION_TOL: f64 = 1e-12;
/// Pairwise terms at or below this are dropped for negative exponents.
pub const ZERO_TERM_TOL: f64 = 1e-12;

/// Binary expansion of an index, least significant bit first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryVector {
    pub bits: Vec<u8>,
    pub source_index: u64,
}

impl BinaryVector {
    pub fn new(j: u64) -> Self {
        let width = (u64::BITS - j.leading_zeros()).max(1);
        Self {
            bits: (0..width).map(|k| ((j >> k) & 1) as u8).collect(),
            source_index: j,
        }
    }

    pub fn hamming_weight(&self) -> u32 {
        self.bits.iter().map(|&b| b as u32).sum()
    }
}

pub fn hamming_weight(j: u64) -> u32 {
    j.count_ones()
}

/// `(1+x)^α ≥ 1+αx^α` for `α ≥ 1` and `≤` for `0 ≤ α ≤ 1`, on `x ∈ [0, 1]`.
pub fn lemma1_check(x: f64, alpha: f64) -> Result<bool> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidConfig(format!("x = {x} outside [0, 1]")));
    }
    if alpha.is_nan() || alpha < 0.0 {
        return Err(Error::AlphaOutOfRange {
            alpha,
            reason: "Lemma needs alpha >= 0".into(),
        });
    }
    let lhs = (1.0 + x).powf(alpha);
    let rhs = 1.0 + alpha * x.powf(alpha);
    let slack = 1e-12 * lhs.max(rhs);
    Ok(if alpha >= 1.0 { lhs >= rhs - slack } else { lhs <= rhs + slack })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremId {
    BaselineMono,
    BaselinePoly,
    Thm1,
    Thm2,
    Thm3,
    Thm4,
    Thm5,
    Thm6,
    Thm7,
    Thm8,
    Ckw,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// `lhs ≥ rhs`.
    Lower,
    /// `lhs ≤ rhs`.
    Upper,
}

impl TheoremId {
    pub const ALL: [TheoremId; 11] = [
        Self::BaselineMono,
        Self::BaselinePoly,
        Self::Thm1,
        Self::Thm2,
        Self::Thm3,
        Self::Thm4,
        Self::Thm5,
        Self::Thm6,
        Self::Thm7,
        Self::Thm8,
        Self::Ckw,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::BaselineMono => "baseline_mono",
            Self::BaselinePoly => "baseline_poly",
            Self::Thm1 => "thm1",
            Self::Thm2 => "thm2",
            Self::Thm3 => "thm3",
            Self::Thm4 => "thm4",
            Self::Thm5 => "thm5",
            Self::Thm6 => "thm6",
            Self::Thm7 => "thm7",
            Self::Thm8 => "thm8",
            Self::Ckw => "ckw",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown theorem `{s}`")))
    }

    /// Measure the inequality is stated for.
    pub fn measure(self) -> MeasureKind {
        match self {
            Self::BaselineMono | Self::Thm1 | Self::Thm2 | Self::Thm3 | Self::Thm4 => MeasureKind::Lcren,
            Self::BaselinePoly | Self::Thm5 | Self::Thm6 | Self::Thm7 | Self::Thm8 => MeasureKind::Lcrenoa,
            Self::Ckw => MeasureKind::Tangle,
        }
    }

    /// Direction of the inequality.
    pub fn bound_kind(self) -> BoundKind {
        match self {
            Self::BaselineMono | Self::Thm1 | Self::Thm2 | Self::Thm3 | Self::Thm8 | Self::Ckw => BoundKind::Lower,
            Self::BaselinePoly | Self::Thm5 | Self::Thm6 | Self::Thm7 | Self::Thm4 => BoundKind::Upper,
        }
    }
}

/// Exponent pattern for the weights `(α/c)^{w(j)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// `w(j) = 0`: the unweighted baseline.
    Uniform,
    /// `w(j) = ω_H(j)`.
    Hamming,
    /// `w(j) = j`.
    Geometric,
    /// `w(j) = j` for `j ≤ t`, `t + 2` for `t < j ≤ N-2`, `t + 1` for `j = N-1`.
    Hybrid(usize),
}

pub fn scheme_exponents(n: usize, scheme: Scheme) -> Result<Vec<u32>> {
    match scheme {
        Scheme::Uniform => Ok(vec![0; n]),
        Scheme::Hamming => Ok((0..n as u64).map(hamming_weight).collect()),
        Scheme::Geometric => Ok((0..n as u32).collect()),
        Scheme::Hybrid(t) => {
            if n < 3 || t + 3 > n {
                return Err(Error::SchemeMismatch(format!(
                    "hybrid split needs N >= 3 and 0 <= t <= N-3, got N = {n}, t = {t}"
                )));
            }
            Ok((0..n)
                .map(|j| {
                    if j <= t {
                        j as u32
                    } else if j == n - 1 {
                        (t + 1) as u32
                    } else {
                        (t + 2) as u32
                    }
                })
                .collect())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RhsTerm {
    /// Position in weight order.
    pub index: usize,
    /// Subsystem label of the pair.
    pub subsystem: usize,
    pub weight: f64,
    /// `E_j^α`.
    pub value: f64,
}

impl RhsTerm {
    pub fn contribution(&self) -> f64 {
        if self.weight == 0.0 {
            0.0
        } else {
            self.weight * self.value
        }
    }
}

fn check_alpha_for_scale(alpha: f64, c: f64) -> Result<()> {
    if !alpha.is_finite() {
        return Err(Error::AlphaOutOfRange {
            alpha,
            reason: "alpha must be finite".into(),
        });
    }
    if c == MONOGAMY_SCALE {
        if alpha < MONOGAMY_SCALE - 1e-12 {
            return Err(Error::AlphaOutOfRange {
                alpha,
                reason: "monogamy bounds need alpha >= 4 ln 2".into(),
            });
        }
    } else if c == POLYGAMY_SCALE {
        if !(0.0..=2.0).contains(&alpha) {
            return Err(Error::AlphaOutOfRange {
                alpha,
                reason: "polygamy bounds need 0 <= alpha <= 2".into(),
            });
        }
    } else {
        return Err(Error::SchemeMismatch(format!("scale must be 4 ln 2 or 2, got {c}")));
    }
    Ok(())
}

/// Weighted right-hand side terms `(α/c)^{w(j)} E_j^α` for a list already in
/// weight order.
pub fn weighted_bound(e_list: &[f64], alpha: f64, scheme: Scheme, c: f64) -> Result<Vec<RhsTerm>> {
    check_alpha_for_scale(alpha, c)?;
    let exps = scheme_exponents(e_list.len(), scheme)?;
    let base = alpha / c;
    Ok(e_list
        .iter()
        .zip(exps)
        .enumerate()
        .map(|(j, (&e, w))| RhsTerm {
            index: j,
            subsystem: j,
            weight: base.powi(w as i32),
            value: e.powf(alpha),
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionVerdict {
    pub id: String,
    pub holds: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Violated,
    /// A side condition of the bound is not met, so it makes no claim.
    ConditionFailed,
    /// The margin is negative but within the optimizer error.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub theorem_id: TheoremId,
    pub alpha: f64,
    pub lhs: f64,
    pub rhs_terms: Vec<RhsTerm>,
    pub rhs: f64,
    pub holds: bool,
    /// `lhs - rhs` for lower bounds on the total, `rhs - lhs` for upper bounds.
    pub margin: f64,
    pub condition_verdicts: Vec<ConditionVerdict>,
    pub verdict: Verdict,
    pub error_bound: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
}

impl InequalityReport {
    pub fn conditions_hold(&self) -> bool {
        self.condition_verdicts.iter().all(|c| c.holds)
    }
}

/// Largest change of `x^α` over `[x - e, x + e] ∩ [0, ∞)`.
fn power_error(x: f64, e: f64, alpha: f64) -> f64 {
    if e <= 0.0 {
        return 0.0;
    }
    let at = x.powf(alpha);
    let hi = (x + e).powf(alpha);
    let lo = (x - e).max(0.0).powf(alpha);
    (hi - at).abs().max((lo - at).abs())
}

struct Draft {
    theorem_id: TheoremId,
    alpha: f64,
    lhs: f64,
    lhs_error: f64,
    rhs_terms: Vec<RhsTerm>,
    rhs_error: f64,
    conditions: Vec<ConditionVerdict>,
    flags: Vec<String>,
}

impl Draft {
    fn finish(self) -> InequalityReport {
        let rhs: f64 = self.rhs_terms.iter().map(RhsTerm::contribution).sum();
        let margin = match self.theorem_id.bound_kind() {
            BoundKind::Lower => self.lhs - rhs,
            BoundKind::Upper => rhs - self.lhs,
        };
        let error_bound = self.lhs_error + self.rhs_error;
        let holds = margin >= -VIOLATION_TOL;
        let verdict = if self.conditions.iter().any(|c| !c.holds) {
            Verdict::ConditionFailed
        } else if holds {
            Verdict::Holds
        } else if -margin <= error_bound {
            Verdict::Inconclusive
        } else {
            Verdict::Violated
        };
        InequalityReport {
            theorem_id: self.theorem_id,
            alpha: self.alpha,
            lhs: self.lhs,
            rhs_terms: self.rhs_terms,
            rhs,
            holds,
            margin,
            condition_verdicts: self.conditions,
            verdict,
            error_bound,
            flags: self.flags,
        }
    }
}

fn require_measure(profile: &MeasureProfile, id: TheoremId) -> Result<()> {
    if profile.measure != id.measure() {
        return Err(Error::SchemeMismatch(format!(
            "{} is stated for {}, profile holds {}",
            id.as_str(),
            id.measure().as_str(),
            profile.measure.as_str()
        )));
    }
    Ok(())
}

/// Weighted terms with subsystem labels and the propagated error. Pairs are
/// sorted except for the hybrid split, whose side conditions fix the labels.
fn sorted_terms(profile: &MeasureProfile, alpha: f64, scheme: Scheme, c: f64) -> Result<(Vec<RhsTerm>, f64)> {
    let sorted = match scheme {
        Scheme::Hybrid(_) => profile.pairs.iter().collect(),
        _ => profile.sorted_pairs(),
    };
    let values: Vec<f64> = sorted.iter().map(|t| t.value).collect();
    let mut terms = weighted_bound(&values, alpha, scheme, c)?;
    let mut err = 0.0;
    for (term, pair) in terms.iter_mut().zip(&sorted) {
        term.subsystem = pair.subsystems[0];
        err += term.weight * power_error(pair.value, pair.error, alpha);
    }
    Ok((terms, err))
}

/// `E_i^c ≥ Σ_{j>i} E_j^c` for `i = 0..N-2` on the sorted list.
fn geometric_conditions(profile: &MeasureProfile, c: f64) -> Vec<ConditionVerdict> {
    let v: Vec<f64> = profile.sorted_pairs().iter().map(|t| t.value.powf(c)).collect();
    (0..v.len().saturating_sub(1))
        .map(|i| {
            let tail: f64 = v[i + 1..].iter().sum();
            ConditionVerdict {
                id: format!("dominance_{i}"),
                holds: v[i] >= tail - CONDITION_TOL,
            }
        })
        .collect()
}

/// `E_i^c ≥ E(A|B_{i+1}..)^c` for `i ≤ t`, `E_j^c ≤ E(A|B_{j+1}..)^c` for
/// `t < j ≤ N-2`, in input order.
fn hybrid_conditions(profile: &MeasureProfile, t: usize, c: f64) -> Result<Vec<ConditionVerdict>> {
    let tails = profile.tails.as_ref().ok_or_else(|| {
        Error::InvalidConfig("hybrid bounds need group values; attach tails to the profile".into())
    })?;
    let n = profile.n();
    let v: Vec<f64> = profile.pairs.iter().map(|t| t.value.powf(c)).collect();
    let g: Vec<f64> = tails.iter().map(|t| t.value.powf(c)).collect();
    let mut out = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        let holds = if i <= t {
            v[i] >= g[i + 1] - CONDITION_TOL
        } else {
            v[i] <= g[i + 1] + CONDITION_TOL
        };
        let kind = if i <= t { "upper" } else { "lower" };
        out.push(ConditionVerdict {
            id: format!("{kind}_split_{i}"),
            holds,
        });
    }
    Ok(out)
}

fn scheme_for(id: TheoremId, t: Option<usize>) -> Result<Scheme> {
    let need_t = || t.ok_or_else(|| Error::InvalidConfig(format!("{} needs a split index t", id.as_str())));
    Ok(match id {
        TheoremId::BaselineMono | TheoremId::BaselinePoly | TheoremId::Ckw => Scheme::Uniform,
        TheoremId::Thm1 | TheoremId::Thm5 => Scheme::Hamming,
        TheoremId::Thm2 | TheoremId::Thm6 => Scheme::Geometric,
        TheoremId::Thm3 | TheoremId::Thm7 => Scheme::Hybrid(need_t()?),
        TheoremId::Thm4 | TheoremId::Thm8 => {
            return Err(Error::SchemeMismatch(format!("{} uses uniform averaging", id.as_str())))
        }
    })
}

fn weighted_report(profile: &MeasureProfile, id: TheoremId, alpha: f64, scheme: Scheme, c: f64) -> Result<InequalityReport> {
    require_measure(profile, id)?;
    let (rhs_terms, rhs_error) = sorted_terms(profile, alpha, scheme, c)?;
    let conditions = match scheme {
        Scheme::Geometric => geometric_conditions(profile, c),
        Scheme::Hybrid(t) => hybrid_conditions(profile, t, c)?,
        _ => Vec::new(),
    };
    let mut flags = Vec::new();
    if c == POLYGAMY_SCALE && alpha == 1.0 {
        flags.push("alpha_one_excluded_by_baseline".to_string());
    }
    Ok(Draft {
        theorem_id: id,
        alpha,
        lhs: profile.total.value.powf(alpha),
        lhs_error: power_error(profile.total.value, profile.total.error, alpha),
        rhs_terms,
        rhs_error,
        conditions,
        flags,
    }
    .finish())
}

/// LCREN lower bounds on the powered total: `baseline_mono` (uniform),
/// `thm1` (Hamming), `thm2` (geometric) or `thm3` (hybrid), for `α ≥ 4 ln 2`.
pub fn check_monogamy(profile: &MeasureProfile, alpha: f64, scheme: Scheme) -> Result<InequalityReport> {
    let id = match scheme {
        Scheme::Uniform => TheoremId::BaselineMono,
        Scheme::Hamming => TheoremId::Thm1,
        Scheme::Geometric => TheoremId::Thm2,
        Scheme::Hybrid(_) => TheoremId::Thm3,
    };
    weighted_report(profile, id, alpha, scheme, MONOGAMY_SCALE)
}

/// LCRENoA upper bounds on the powered total: `baseline_poly`, `thm5`,
/// `thm6`, `thm7`, for `0 ≤ α ≤ 2`. `α = 1` is evaluated and flagged.
pub fn check_polygamy(profile: &MeasureProfile, alpha: f64, scheme: Scheme) -> Result<InequalityReport> {
    let id = match scheme {
        Scheme::Uniform => TheoremId::BaselinePoly,
        Scheme::Hamming => TheoremId::Thm5,
        Scheme::Geometric => TheoremId::Thm6,
        Scheme::Hybrid(_) => TheoremId::Thm7,
    };
    weighted_report(profile, id, alpha, scheme, POLYGAMY_SCALE)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NegativeMode {
    /// LCREN: `E^α ≤ (1/N') Σ E_j^α`.
    MonogamyUpper,
    /// LCRENoA: `E^α ≥ (1/N') Σ E_j^α`.
    PolygamyLower,
}

/// Averaged bounds for `α < 0`. Pairwise terms that vanish are removed and
/// `N'` counts the remaining ones.
pub fn check_negative_alpha(profile: &MeasureProfile, alpha: f64, mode: NegativeMode) -> Result<InequalityReport> {
    let id = match mode {
        NegativeMode::MonogamyUpper => TheoremId::Thm4,
        NegativeMode::PolygamyLower => TheoremId::Thm8,
    };
    require_measure(profile, id)?;
    if !alpha.is_finite() || alpha >= 0.0 {
        return Err(Error::AlphaOutOfRange {
            alpha,
            reason: "averaged bounds need alpha < 0".into(),
        });
    }
    let sorted = profile.sorted_pairs();
    let kept: Vec<(usize, &Term)> = sorted
        .into_iter()
        .enumerate()
        .filter(|(_, t)| t.value > ZERO_TERM_TOL)
        .collect();
    let removed = profile.n() - kept.len();
    let weight = if kept.is_empty() { 0.0 } else { 1.0 / kept.len() as f64 };
    let mut rhs_error = 0.0;
    let rhs_terms = kept
        .iter()
        .map(|&(index, t)| {
            rhs_error += weight * power_error(t.value, t.error, alpha);
            RhsTerm {
                index,
                subsystem: t.subsystems[0],
                weight,
                value: t.value.powf(alpha),
            }
        })
        .collect();
    let mut flags = Vec::new();
    if removed > 0 {
        flags.push(format!("removed_zero_terms={removed}"));
    }
    let conditions = vec![
        ConditionVerdict {
            id: "nonzero_total".into(),
            holds: profile.total.value > ZERO_TERM_TOL,
        },
        ConditionVerdict {
            id: "some_nonzero_term".into(),
            holds: !kept.is_empty(),
        },
    ];
    Ok(Draft {
        theorem_id: id,
        alpha,
        lhs: profile.total.value.powf(alpha),
        lhs_error: power_error(profile.total.value, profile.total.error, alpha),
        rhs_terms,
        rhs_error,
        conditions,
        flags,
    }
    .finish())
}

/// `τ(A|B_0..B_{N-1}) ≥ Σ τ(A|B_j)` on a tangle profile.
pub fn ckw_check(profile: &MeasureProfile) -> Result<InequalityReport> {
    require_measure(profile, TheoremId::Ckw)?;
    let mut rhs_error = 0.0;
    let rhs_terms = profile
        .sorted_pairs()
        .into_iter()
        .enumerate()
        .map(|(index, t)| {
            rhs_error += t.error;
            RhsTerm {
                index,
                subsystem: t.subsystems[0],
                weight: 1.0,
                value: t.value,
            }
        })
        .collect();
    Ok(Draft {
        theorem_id: TheoremId::Ckw,
        alpha: 1.0,
        lhs: profile.total.value,
        lhs_error: profile.total.error,
        rhs_terms,
        rhs_error,
        conditions: Vec::new(),
        flags: Vec::new(),
    }
    .finish())
}

/// Dispatches on the theorem tag. `t` is the split index for `thm3`/`thm7`.
pub fn evaluate(profile: &MeasureProfile, id: TheoremId, alpha: f64, t: Option<usize>) -> Result<InequalityReport> {
    match id {
        TheoremId::Thm4 => check_negative_alpha(profile, alpha, NegativeMode::MonogamyUpper),
        TheoremId::Thm8 => check_negative_alpha(profile, alpha, NegativeMode::PolygamyLower),
        TheoremId::Ckw => ckw_check(profile),
        _ => {
            let scheme = scheme_for(id, t)?;
            match id.measure() {
                MeasureKind::Lcren => check_monogamy(profile, alpha, scheme),
                _ => check_polygamy(profile, alpha, scheme),
            }
        }
    }
}

/// Evaluates the hybrid bound for every admissible split `t`.
pub fn scan_hybrid(profile: &MeasureProfile, alpha: f64) -> Result<Vec<InequalityReport>> {
    let n = profile.n();
    if n < 3 {
        return Err(Error::SchemeMismatch(format!("hybrid split needs N >= 3, got {n}")));
    }
    (0..=n - 3)
        .map(|t| match profile.measure {
            MeasureKind::Lcren => check_monogamy(profile, alpha, Scheme::Hybrid(t)),
            _ => check_polygamy(profile, alpha, Scheme::Hybrid(t)),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TightnessVerdict {
    pub tighter: TheoremId,
    pub looser: TheoremId,
    pub alpha: f64,
    /// `rhs(tighter) - rhs(looser)` for lower bounds, the reverse for upper bounds.
    pub gap: f64,
    pub holds: bool,
}

/// Checks `rhs(thm2) ≥ rhs(thm1) ≥ rhs(baseline)` for lower bounds and the
/// reverse chain for upper bounds, pairing reports with equal α. Links to
/// `thm2`/`thm6` are only checked when their side condition holds.
pub fn compare_tightness(reports: &[InequalityReport]) -> Vec<TightnessVerdict> {
    let chains = [
        [TheoremId::BaselineMono, TheoremId::Thm1, TheoremId::Thm2],
        [TheoremId::BaselinePoly, TheoremId::Thm5, TheoremId::Thm6],
    ];
    let mut out = Vec::new();
    for chain in chains {
        for pair in chain.windows(2) {
            let (looser, tighter) = (pair[0], pair[1]);
            for l in reports.iter().filter(|r| r.theorem_id == looser) {
                for t in reports.iter().filter(|r| r.theorem_id == tighter && r.alpha == l.alpha) {
                    if !t.conditions_hold() {
                        continue;
                    }
                    let gap = match tighter.bound_kind() {
                        BoundKind::Lower => t.rhs - l.rhs,
                        BoundKind::Upper => l.rhs - t.rhs,
                    };
                    out.push(TightnessVerdict {
                        tighter,
                        looser,
                        alpha: l.alpha,
                        gap,
                        holds: gap >= -CONDITION_TOL * (1.0 + l.rhs.abs()),
                    });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn l2(x: f64) -> f64 {
        x.log2()
    }

    fn example1() -> MeasureProfile {
        MeasureProfile::from_values(
            MeasureKind::Lcren,
            l2(9.0 / 5.0),
            &[l2(2.0 * 2f64.sqrt() / 5.0 + 1.0), l2(7.0 / 5.0)],
        )
        .unwrap()
    }

    fn w_profile() -> MeasureProfile {
        MeasureProfile::from_values(
            MeasureKind::Lcrenoa,
            l2(2.0 * 2f64.sqrt() / 3.0 + 1.0),
            &[l2(5.0 / 3.0), l2(5.0 / 3.0)],
        )
        .unwrap()
    }

    #[test]
    fn hamming_weights() {
        assert_eq!(hamming_weight(0), 0);
        assert_eq!(hamming_weight(3), 2);
        for j in 0..(1u64 << 16) {
            assert!(hamming_weight(j) as u64 <= j);
        }
        let b = BinaryVector::new(6);
        assert_eq!(b.bits, vec![0, 1, 1]);
        assert_eq!(b.hamming_weight(), 2);
        assert_eq!(BinaryVector::new(0).bits, vec![0]);
    }

    #[test]
    fn lemma1_examples() {
        assert!(lemma1_check(1.0, 2.0).unwrap());
        for a in [0.0, 0.3, 1.0, 2.5] {
            assert!(lemma1_check(0.0, a).unwrap());
        }
        assert!(lemma1_check(1.5, 1.0).is_err());
        assert!(lemma1_check(0.5, -1.0).is_err());
    }

    #[test]
    fn exponent_patterns() {
        assert_eq!(scheme_exponents(4, Scheme::Hybrid(1)).unwrap(), vec![0, 1, 3, 2]);
        assert_eq!(scheme_exponents(4, Scheme::Hamming).unwrap(), vec![0, 1, 1, 2]);
        assert_eq!(scheme_exponents(3, Scheme::Geometric).unwrap(), vec![0, 1, 2]);
        assert!(scheme_exponents(3, Scheme::Hybrid(1)).is_err());
        assert!(scheme_exponents(2, Scheme::Hybrid(0)).is_err());
    }

    #[test]
    fn weighted_bound_structure() {
        let t = weighted_bound(&[0.5, 0.3], MONOGAMY_SCALE, Scheme::Hamming, MONOGAMY_SCALE).unwrap();
        assert!((t[0].weight - 1.0).abs() < 1e-15 && (t[1].weight - 1.0).abs() < 1e-15);
        let e = [0.934101, 0.415001, 0.314986];
        let t = weighted_bound(&e, 5.0, Scheme::Geometric, MONOGAMY_SCALE).unwrap();
        let r = 5.0 / (4.0 * LN_2);
        let expected = e[0].powi(5) + r * e[1].powi(5) + r * r * e[2].powi(5);
        let got: f64 = t.iter().map(RhsTerm::contribution).sum();
        assert!((got - expected).abs() < 1e-14);
        assert!(weighted_bound(&e, 2.0, Scheme::Hamming, MONOGAMY_SCALE).is_err());
        assert!(weighted_bound(&e, 2.5, Scheme::Hamming, POLYGAMY_SCALE).is_err());
        assert!(weighted_bound(&e, 1.0, Scheme::Hamming, 3.0).is_err());
    }

    #[test]
    fn example1_theorem1_at_three() {
        let r = check_monogamy(&example1(), 3.0, Scheme::Hamming).unwrap();
        let lhs = l2(9.0 / 5.0).powi(3);
        let rhs = l2(2.0 * 2f64.sqrt() / 5.0 + 1.0).powi(3) + 3.0 / (4.0 * LN_2) * l2(7.0 / 5.0).powi(3);
        assert!((r.lhs - lhs).abs() < 1e-14);
        assert!((r.rhs - rhs).abs() < 1e-14);
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.theorem_id, TheoremId::Thm1);
    }

    #[test]
    fn antisym_lcren_check() {
        let p = MeasureProfile::from_values(MeasureKind::Lcren, 3f64.log2(), &[1.0, 1.0]).unwrap();
        let r = check_monogamy(&p, MONOGAMY_SCALE, Scheme::Hamming).unwrap();
        assert!((r.lhs - 3.5853).abs() < 1e-3, "{}", r.lhs);
        assert!((r.rhs - 2.0).abs() < 1e-12);
        assert!(r.holds);
    }

    #[test]
    fn product_state_is_equality() {
        let p = MeasureProfile::from_values(MeasureKind::Lcren, 0.0, &[0.0, 0.0]).unwrap();
        let r = check_monogamy(&p, 3.0, Scheme::Hamming).unwrap();
        assert_eq!((r.lhs, r.rhs, r.verdict), (0.0, 0.0, Verdict::Holds));
    }

    #[test]
    fn w_state_theorem5() {
        let r = check_polygamy(&w_profile(), 1.5, Scheme::Hamming).unwrap();
        let lhs = l2(2.0 * 2f64.sqrt() / 3.0 + 1.0).powf(1.5);
        let rhs = 1.75 * l2(5.0 / 3.0).powf(1.5);
        assert!((r.lhs - lhs).abs() < 1e-14 && (r.rhs - rhs).abs() < 1e-14);
        assert_eq!(r.verdict, Verdict::Holds);
        let at2 = check_polygamy(&w_profile(), 2.0, Scheme::Hamming).unwrap();
        let base = check_polygamy(&w_profile(), 2.0, Scheme::Uniform).unwrap();
        assert_eq!(at2.rhs, base.rhs);
        assert!(check_polygamy(&w_profile(), 1.0, Scheme::Uniform)
            .unwrap()
            .flags
            .contains(&"alpha_one_excluded_by_baseline".to_string()));
    }

    #[test]
    fn negative_alpha_example1() {
        let r = check_negative_alpha(&example1(), -1.0, NegativeMode::MonogamyUpper).unwrap();
        let rhs = 0.5 * (1.0 / l2(2.0 * 2f64.sqrt() / 5.0 + 1.0) + 1.0 / l2(7.0 / 5.0));
        assert!((r.rhs - rhs).abs() < 1e-14);
        assert_eq!(r.verdict, Verdict::Holds);
    }

    #[test]
    fn negative_alpha_lower_bound_fails_on_w_state() {
        // The total dominates each pair, so for alpha < 0 the powered total
        // sits below every powered pair and the averaged lower bound fails:
        // 1/log2(2√2/3+1) ≈ 1.0438 < 1/log2(5/3) ≈ 1.3569.
        let r = check_negative_alpha(&w_profile(), -1.0, NegativeMode::PolygamyLower).unwrap();
        assert!((r.lhs - 1.0 / l2(2.0 * 2f64.sqrt() / 3.0 + 1.0)).abs() < 1e-14);
        assert!((r.rhs - 1.0 / l2(5.0 / 3.0)).abs() < 1e-14);
        assert!(!r.holds);
        assert_eq!(r.verdict, Verdict::Violated);
    }

    #[test]
    fn zero_terms_are_removed() {
        let p = MeasureProfile::from_values(MeasureKind::Lcren, 0.9, &[0.0, 0.5, 0.4]).unwrap();
        let r = check_negative_alpha(&p, -2.0, NegativeMode::MonogamyUpper).unwrap();
        assert_eq!(r.rhs_terms.len(), 2);
        assert!(r.rhs_terms.iter().all(|t| t.weight == 0.5));
        assert_eq!(r.flags, vec!["removed_zero_terms=1".to_string()]);
        assert_eq!(r.verdict, Verdict::Holds);
        let z = MeasureProfile::from_values(MeasureKind::Lcren, 0.0, &[0.0, 0.0]).unwrap();
        assert_eq!(
            check_negative_alpha(&z, -1.0, NegativeMode::MonogamyUpper).unwrap().verdict,
            Verdict::ConditionFailed
        );
        assert!(check_negative_alpha(&p, 0.5, NegativeMode::MonogamyUpper).is_err());
    }

    #[test]
    fn geometric_condition_gates_the_verdict() {
        let ok = MeasureProfile::from_values(MeasureKind::Lcren, 1.0, &[0.9, 0.3, 0.1]).unwrap();
        let r = check_monogamy(&ok, 3.0, Scheme::Geometric).unwrap();
        assert!(r.conditions_hold());
        let bad = MeasureProfile::from_values(MeasureKind::Lcren, 0.3, &[0.3, 0.3, 0.3]).unwrap();
        let r = check_monogamy(&bad, 5.0, Scheme::Geometric).unwrap();
        assert!(!r.holds);
        assert_eq!(r.verdict, Verdict::ConditionFailed);
    }

    #[test]
    fn hybrid_needs_tails() {
        let p = MeasureProfile::from_values(MeasureKind::Lcren, 1.0, &[0.6, 0.3, 0.2, 0.1]).unwrap();
        assert!(check_monogamy(&p, 3.0, Scheme::Hybrid(0)).is_err());
        let p = p.with_tail_values(&[0.4, 0.25]).unwrap();
        assert_eq!(scheme_exponents(4, Scheme::Hybrid(0)).unwrap(), vec![0, 2, 2, 1]);
        let reports = scan_hybrid(&p, 3.0).unwrap();
        assert_eq!(reports.len(), 2);
        assert_eq!(reports[0].condition_verdicts.len(), 3);
        // t = 0: 0.6 ≥ 0.4, then 0.3 ≤ 0.25 fails.
        assert!(!reports[0].conditions_hold());
        // t = 1: 0.6 ≥ 0.4, 0.3 ≥ 0.25, 0.2 ≤ 0.1 fails.
        assert!(!reports[1].conditions_hold());
        // Input order is kept: 0.6 ≥ 0.4, 0.1 ≤ 0.35, 0.2 ≤ 0.3.
        let p2 = MeasureProfile::from_values(MeasureKind::Lcren, 1.0, &[0.6, 0.1, 0.2, 0.3])
            .unwrap()
            .with_tail_values(&[0.4, 0.35])
            .unwrap();
        let r = &scan_hybrid(&p2, 3.0).unwrap()[0];
        assert!(r.conditions_hold());
        let w: Vec<f64> = r.rhs_terms.iter().map(|t| t.weight).collect();
        let a = 3.0 / MONOGAMY_SCALE;
        assert_eq!(w, vec![1.0, a * a, a * a, a]);
        assert_eq!(r.rhs_terms[3].subsystem, 4);
    }

    #[test]
    fn ckw_with_tabulated_values() {
        let p = MeasureProfile::from_values(MeasureKind::Tangle, 4.0 / 3.0, &[1.0, 1.0]).unwrap();
        let r = ckw_check(&p).unwrap();
        assert_eq!(r.verdict, Verdict::Violated);
        let p = MeasureProfile::from_values(MeasureKind::Tangle, 4.0 / 3.0, &[8.0 / 9.0, 8.0 / 9.0]).unwrap();
        assert_eq!(ckw_check(&p).unwrap().verdict, Verdict::Violated);
    }

    #[test]
    fn small_negative_margin_within_error_is_inconclusive() {
        let mut p = MeasureProfile::from_values(MeasureKind::Tangle, 1.0, &[0.5, 0.5 + 1e-6]).unwrap();
        p.pairs[1].error = 1e-5;
        assert_eq!(ckw_check(&p).unwrap().verdict, Verdict::Inconclusive);
    }

    #[test]
    fn measure_mismatch_is_rejected() {
        assert!(matches!(
            check_polygamy(&example1(), 1.0, Scheme::Hamming),
            Err(Error::SchemeMismatch(_))
        ));
        assert!(evaluate(&example1(), TheoremId::Thm3, 3.0, None).is_err());
    }

    #[test]
    fn theorem_ids_round_trip() {
        for id in TheoremId::ALL {
            assert_eq!(TheoremId::parse(id.as_str()).unwrap(), id);
            assert_eq!(serde_json::to_string(&id).unwrap(), format!("\"{}\"", id.as_str()));
        }
    }

    #[test]
    fn tightness_at_unit_weights_is_equality() {
        let reports = vec![
            check_monogamy(&example1(), MONOGAMY_SCALE, Scheme::Uniform).unwrap(),
            check_monogamy(&example1(), MONOGAMY_SCALE, Scheme::Hamming).unwrap(),
        ];
        assert_eq!(reports[0].rhs, reports[1].rhs);
        let v = compare_tightness(&reports);
        assert_eq!(v.len(), 1);
        assert!(v[0].holds && v[0].gap == 0.0);
    }

    fn descending(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(0.0f64..2.0, 2..=max_len).prop_map(|mut v| {
            v.sort_by(|a, b| b.total_cmp(a));
            v
        })
    }

    proptest! {
        #[test]
        fn lemma1_random(x in 0.0f64..=1.0, alpha in 0.0f64..10.0) {
            prop_assert!(lemma1_check(x, alpha).unwrap());
        }

        #[test]
        fn weight_monotonicity(j in 0u64..64, alpha in MONOGAMY_SCALE..12.0, beta in 0.0f64..=2.0) {
            let a = alpha / MONOGAMY_SCALE;
            let h = a.powi(hamming_weight(j) as i32);
            prop_assert!(h >= 1.0);
            prop_assert!(a.powi(j as i32) >= h);
            let b = beta / POLYGAMY_SCALE;
            let hb = b.powi(hamming_weight(j) as i32);
            prop_assert!(hb <= 1.0);
            prop_assert!(b.powi(j as i32) <= hb);
        }

        #[test]
        fn tightness_chain_on_descending_lists(e in descending(6), alpha in prop::sample::select(vec![3.0, 5.0])) {
            let p = MeasureProfile::from_values(MeasureKind::Lcren, 3.0, &e).unwrap();
            let reports: Vec<_> = [Scheme::Uniform, Scheme::Hamming, Scheme::Geometric]
                .into_iter()
                .map(|s| check_monogamy(&p, alpha, s).unwrap())
                .collect();
            prop_assert!(reports[1].rhs >= reports[0].rhs);
            prop_assert!(reports[2].rhs >= reports[1].rhs);
            prop_assert!(compare_tightness(&reports).iter().all(|v| v.holds));
        }

        #[test]
        fn sorting_invariance(e in prop::collection::vec(0.0f64..2.0, 2..6), seed in 0u64..1000, alpha in MONOGAMY_SCALE..8.0) {
            use rand::seq::SliceRandom;
            let mut shuffled = e.clone();
            shuffled.shuffle(&mut crate::states::seeded_rng(seed));
            let a = MeasureProfile::from_values(MeasureKind::Lcren, 2.0, &e).unwrap();
            let b = MeasureProfile::from_values(MeasureKind::Lcren, 2.0, &shuffled).unwrap();
            for s in [Scheme::Hamming, Scheme::Geometric] {
                let ra = check_monogamy(&a, alpha, s).unwrap();
                let rb = check_monogamy(&b, alpha, s).unwrap();
                prop_assert_eq!(ra.rhs, rb.rhs);
                prop_assert_eq!(ra.verdict, rb.verdict);
            }
        }
    }
}
