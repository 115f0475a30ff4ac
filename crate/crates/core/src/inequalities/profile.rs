use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{measure, Bipartition, MeasureKind};
use crate::roof::RoofConfig;
use crate::states::QuantumState;

/// One measured quantity `E(A | subsystems)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub subsystems: Vec<usize>,
    pub value: f64,
    pub error: f64,
}

impl Term {
    pub fn exact(subsystems: Vec<usize>, value: f64) -> Self {
        Self {
            subsystems,
            value,
            error: 0.0,
        }
    }
}

/// Operands of a monogamy-type inequality for a focus subsystem `A`:
/// the total `E(A | B_0 ... B_{N-1})` and the pairwise `E(A | B_i)`.
///
/// `tails`, when present, holds `E(A | B_k ... B_{N-1})` for `k = 0..N` in
/// input order; entry 0 is the total and the last entry the last pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureProfile {
    pub measure: MeasureKind,
    pub focus: usize,
    pub total: Term,
    pub pairs: Vec<Term>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tails: Option<Vec<Term>>,
}

fn check_profile_measure(kind: MeasureKind) -> Result<()> {
    match kind {
        MeasureKind::Lcren | MeasureKind::Lcrenoa | MeasureKind::Tangle => Ok(()),
        other => Err(Error::InvalidConfig(format!(
            "profiles use lcren, lcrenoa or tangle, not {}",
            other.as_str()
        ))),
    }
}

impl MeasureProfile {
    /// Profile from known values with zero error. Pair `i` is labelled
    /// subsystem `i + 1` with focus 0.
    pub fn from_values(measure: MeasureKind, total: f64, pairs: &[f64]) -> Result<Self> {
        check_profile_measure(measure)?;
        if pairs.is_empty() {
            return Err(Error::InvalidConfig("at least one pairwise value is required".into()));
        }
        if let Some(v) = std::iter::once(&total).chain(pairs).find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidConfig(format!("measure values must be finite and nonnegative, got {v}")));
        }
        let n = pairs.len();
        Ok(Self {
            measure,
            focus: 0,
            total: Term::exact((1..=n).collect(), total),
            pairs: pairs.iter().enumerate().map(|(i, &v)| Term::exact(vec![i + 1], v)).collect(),
            tails: None,
        })
    }

    /// Attaches group values `E(A | B_k ... B_{N-1})` for `k = 1..N-2`.
    pub fn with_tail_values(mut self, tails: &[f64]) -> Result<Self> {
        let n = self.pairs.len();
        if n < 2 || tails.len() + 2 != n {
            return Err(Error::DimensionMismatch {
                expected: n.saturating_sub(2),
                found: tails.len(),
            });
        }
        let mut out = vec![self.total.clone()];
        for (k, &v) in tails.iter().enumerate() {
            let subs = self.pairs[k + 1..].iter().map(|t| t.subsystems[0]).collect();
            out.push(Term::exact(subs, v));
        }
        out.push(self.pairs[n - 1].clone());
        self.tails = Some(out);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.pairs.len()
    }

    /// Pair indices sorted by descending value; ties keep input order.
    pub fn order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.pairs.len()).collect();
        idx.sort_by(|&i, &j| self.pairs[j].value.total_cmp(&self.pairs[i].value));
        idx
    }

    pub fn sorted_pairs(&self) -> Vec<&Term> {
        self.order().into_iter().map(|i| &self.pairs[i]).collect()
    }
}

/// Evaluates `measure` across `focus | rest` and on every reduced pair
/// `(focus, B_i)`, keeping the input order of the `B_i`.
pub fn measure_profile(state: &QuantumState, focus: usize, kind: MeasureKind, cfg: &RoofConfig) -> Result<MeasureProfile> {
    check_profile_measure(kind)?;
    let parties = state.shape().len();
    if parties < 3 {
        return Err(Error::InvalidBipartition(format!(
            "profiles need at least three subsystems, got {parties}"
        )));
    }
    if focus >= parties {
        return Err(Error::IndexOutOfRange {
            index: focus,
            len: parties,
        });
    }
    let cut = Bipartition::focus_rest(focus, parties);
    let total = measure(kind, state, &cut, cfg)?;
    let mut pairs = Vec::with_capacity(parties - 1);
    for &b in &cut.b {
        let v = measure(kind, state, &Bipartition::pair(focus, b), cfg)?;
        pairs.push(Term {
            subsystems: vec![b],
            value: v.value,
            error: v.error_bound,
        });
    }
    Ok(MeasureProfile {
        measure: kind,
        focus,
        total: Term {
            subsystems: cut.b,
            value: total.value,
            error: total.error_bound,
        },
        pairs,
        tails: None,
    })
}

/// Adds the group values needed by the hybrid bounds. Groups of two or more
/// subsystems are mixed in general and go through the roof optimizer.
pub fn attach_tails(profile: &mut MeasureProfile, state: &QuantumState, cfg: &RoofConfig) -> Result<()> {
    let n = profile.n();
    let mut tails = vec![profile.total.clone()];
    for k in 1..n.saturating_sub(1) {
        let subs: Vec<usize> = profile.pairs[k..].iter().map(|t| t.subsystems[0]).collect();
        let v = measure(
            profile.measure,
            state,
            &Bipartition::new(vec![profile.focus], subs.clone()),
            cfg,
        )?;
        tails.push(Term {
            subsystems: subs,
            value: v.value,
            error: v.error_bound,
        });
    }
    if n >= 2 {
        tails.push(profile.pairs[n - 1].clone());
    }
    profile.tails = Some(tails);
    Ok(())
}
