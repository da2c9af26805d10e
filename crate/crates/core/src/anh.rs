//! AdaNormalHedge potential and weights for sleeping experts.
//!
//! Raw weights grow like `exp(R^2 / 3C)`, which overflows an `f64` after a few
//! thousand rounds, so normalization happens in log space.

use std::collections::BTreeMap;

use crate::error::{argument, Error, Result};
use crate::point::Point;

/// Running regret `R` and absolute regret `C` of the meta-learner against one
/// expert, accumulated over the rounds the expert has been awake.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct AnhRecord {
    regret: f64,
    abs_regret: f64,
}

impl AnhRecord {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_parts(regret: f64, abs_regret: f64) -> Result<Self> {
        if abs_regret.is_nan() || abs_regret < 0.0 || regret.abs() > abs_regret || !regret.is_finite() {
            return Err(argument(format!("invalid record (R={regret}, C={abs_regret})")));
        }
        Ok(Self { regret, abs_regret })
    }

    pub fn regret(&self) -> f64 {
        self.regret
    }

    pub fn abs_regret(&self) -> f64 {
        self.abs_regret
    }

    /// Adds `r = f(w_t) - f(w_{t,I})` to `R` and `|r|` to `C`.
    pub fn update(&mut self, meta_loss: f64, expert_loss: f64) {
        let r = meta_loss - expert_loss;
        self.regret += r;
        self.abs_regret += r.abs();
    }

    pub fn log_weight(&self) -> f64 {
        log_anh_weight_unchecked(self.regret, self.abs_regret)
    }
}

fn check_c(c: f64) -> Result<()> {
    if c.is_nan() || c < 0.0 {
        return Err(argument(format!("C must be nonnegative, got {c}")));
    }
    Ok(())
}

/// `exp([R]_+^2 / 3C)`, with `Phi(R, C) = 1` whenever `[R]_+ = 0`.
pub fn potential(r: f64, c: f64) -> Result<f64> {
    check_c(c)?;
    let rp = r.max(0.0);
    if rp == 0.0 {
        return Ok(1.0);
    }
    if c == 0.0 {
        return Err(argument(format!("Phi({r}, 0) is undefined for R > 0")));
    }
    Ok((rp * rp / (3.0 * c)).exp())
}

/// `(Phi(R+1, C+1) - Phi(R-1, C+1)) / 2`.
pub fn anh_weight(r: f64, c: f64) -> Result<f64> {
    Ok(log_anh_weight(r, c)?.exp())
}

/// Natural log of [`anh_weight`]; `-inf` when the weight is exactly zero.
pub fn log_anh_weight(r: f64, c: f64) -> Result<f64> {
    check_c(c)?;
    if !r.is_finite() {
        return Err(Error::Numeric(format!("non-finite regret {r}")));
    }
    Ok(log_anh_weight_unchecked(r, c))
}

// w = e^a (1 - e^{b-a}) / 2 with a >= b
fn log_anh_weight_unchecked(r: f64, c: f64) -> f64 {
    let denom = 3.0 * (c + 1.0);
    let hi = (r + 1.0).max(0.0);
    let lo = (r - 1.0).max(0.0);
    let a = hi * hi / denom;
    let b = lo * lo / denom;
    if a <= b {
        return f64::NEG_INFINITY;
    }
    a - std::f64::consts::LN_2 + (-(b - a).exp_m1()).ln()
}

/// Normalizes log-weights by subtracting their maximum; uniform if every
/// weight is zero.
pub fn normalize_log_weights(log_weights: &[f64]) -> Result<Vec<f64>> {
    if log_weights.is_empty() {
        return Err(argument("cannot normalize an empty weight set"));
    }
    if log_weights.iter().any(|l| l.is_nan() || *l == f64::INFINITY) {
        return Err(Error::Numeric("invalid log-weight".into()));
    }
    let max = log_weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        let n = log_weights.len() as f64;
        return Ok(vec![1.0 / n; log_weights.len()]);
    }
    let raw: Vec<f64> = log_weights.iter().map(|l| (l - max).exp()).collect();
    let total: f64 = raw.iter().sum();
    Ok(raw.into_iter().map(|x| x / total).collect())
}

/// Sleeping-expert probabilities `p_I = w(R_I, C_I) / sum_J w(R_J, C_J)`.
pub fn normalize_weights<K: Ord + Clone>(
    records: &BTreeMap<K, AnhRecord>,
) -> Result<BTreeMap<K, f64>> {
    let logs: Vec<f64> = records.values().map(AnhRecord::log_weight).collect();
    let probs = normalize_log_weights(&logs)?;
    Ok(records.keys().cloned().zip(probs).collect())
}

/// Weighted average `sum_I p_I w_I` of the experts' actions.
pub fn combine_actions<K: Ord>(
    weights: &BTreeMap<K, f64>,
    actions: &BTreeMap<K, Point>,
) -> Result<Point> {
    if weights.len() != actions.len() || weights.keys().zip(actions.keys()).any(|(a, b)| a != b) {
        return Err(argument("weights and actions have different experts"));
    }
    weighted_average(weights.values().copied().zip(actions.values()))
}

pub(crate) fn weighted_average<'a>(
    mut items: impl Iterator<Item = (f64, &'a Point)>,
) -> Result<Point> {
    let (p0, w0) = items.next().ok_or_else(|| argument("no actions to combine"))?;
    let mut acc = w0.scaled(p0);
    for (p, w) in items {
        if w.dim() != acc.dim() {
            return Err(argument("actions have different dimensions"));
        }
        acc = acc.add_scaled(p, w);
    }
    if !acc.is_finite() {
        return Err(Error::Numeric("combined action is not finite".into()));
    }
    Ok(acc)
}
