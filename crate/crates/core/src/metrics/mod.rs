//! Regret measures, regularity measures and bound evaluators over a [`RunTrace`].

mod bounds;
mod window;

use std::fmt;
use std::str::FromStr;

use crate::domain::Domain;
use crate::error::{argument, Error, Result};
use crate::game::{ExpertId, RunTrace};
use crate::intervals::Interval;
use crate::loss::{linear_minimizer, Loss, LossFunction};
use crate::point::{self, Point};

pub use bounds::{
    bound_c, bound_c_prime, bound_lemma1, bound_thm2, bound_thm3, bound_thm4, bound_thm5,
    bound_thm6_cited, bound_thm7, k_index,
};
pub use point::{path_length, squared_path_length};
pub use window::{WindowOracle, DEFAULT_RESOLUTION};

/// Tolerance for comparators lying in the domain.
const MEMBERSHIP_TOLERANCE: f64 = 1e-9;

fn prefix_sums(values: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut acc = vec![0.0];
    for v in values {
        acc.push(acc[acc.len() - 1] + v);
    }
    acc
}

fn check_window(trace: &RunTrace, r: usize, s: usize) -> Result<()> {
    if r == 0 || r > s || s > trace.horizon() {
        return Err(argument(format!("window [{r}, {s}] outside [1, {}]", trace.horizon())));
    }
    Ok(())
}

/// Learner loss over `[r, s]` minus the best fixed action on that window.
pub fn window_regret(trace: &RunTrace, r: usize, s: usize) -> Result<f64> {
    check_window(trace, r, s)?;
    let losses = trace.losses();
    let (best, _) = WindowOracle::new(&trace.domain, &losses).minimize(r, s);
    let incurred: f64 = trace.rounds[r - 1..s].iter().map(|x| x.loss_value).sum();
    Ok(incurred - best)
}

/// Regret against the best fixed action in hindsight.
pub fn static_regret(trace: &RunTrace) -> f64 {
    window_regret(trace, 1, trace.horizon()).expect("a trace has at least one round")
}

/// Regret against an arbitrary comparator sequence `u_1..u_T`.
pub fn dynamic_regret(trace: &RunTrace, comparators: &[Point]) -> Result<f64> {
    interval_dynamic_regret(trace, 1, trace.horizon(), comparators)
}

/// Regret over `[r, s]` against `u_r..u_s` (so `comparators.len() == s - r + 1`).
pub fn interval_dynamic_regret(trace: &RunTrace, r: usize, s: usize, comparators: &[Point]) -> Result<f64> {
    check_window(trace, r, s)?;
    if comparators.len() != s - r + 1 {
        return Err(argument(format!(
            "expected {} comparators, got {}",
            s - r + 1,
            comparators.len()
        )));
    }
    let mut total = 0.0;
    for (record, u) in trace.rounds[r - 1..s].iter().zip(comparators) {
        if u.dim() != trace.domain.dim() || !trace.domain.contains(u, MEMBERSHIP_TOLERANCE) {
            return Err(argument("comparator lies outside the domain"));
        }
        total += record.loss_value - record.loss.value(u);
    }
    Ok(total)
}

/// Dynamic regret against the per-round minimizers.
pub fn restricted_dynamic_regret(trace: &RunTrace) -> Result<f64> {
    dynamic_regret(trace, &minimizer_comparators(trace)?)
}

/// Strongly adaptive regret: the worst window regret over windows of length `tau`.
pub fn sa_regret(trace: &RunTrace, tau: usize) -> Result<f64> {
    let horizon = trace.horizon();
    if tau == 0 || tau > horizon {
        return Err(argument(format!("tau must lie in [1, {horizon}], got {tau}")));
    }
    let losses = trace.losses();
    let oracle = WindowOracle::new(&trace.domain, &losses);
    let prefix = prefix_sums(trace.rounds.iter().map(|x| x.loss_value));
    Ok((1..=horizon + 1 - tau)
        .map(|r| {
            let s = r + tau - 1;
            prefix[s] - prefix[r - 1] - oracle.minimize(r, s).0
        })
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Strongly adaptive regret for every window length; entry `tau - 1` holds `SAReg(T, tau)`.
pub fn sa_regret_profile(trace: &RunTrace) -> Vec<f64> {
    let horizon = trace.horizon();
    let losses = trace.losses();
    let oracle = WindowOracle::new(&trace.domain, &losses);
    let prefix = prefix_sums(trace.rounds.iter().map(|x| x.loss_value));
    let mut profile = vec![f64::NEG_INFINITY; horizon];
    for r in 1..=horizon {
        oracle.scan_from(r, |s, best, _| {
            let regret = prefix[s] - prefix[r - 1] - best;
            let slot = &mut profile[s - r];
            *slot = slot.max(regret);
        });
    }
    profile
}

/// Weakly adaptive regret: the worst window regret over all contiguous windows.
pub fn weak_adaptive_regret(trace: &RunTrace) -> f64 {
    sa_regret_profile(trace).into_iter().fold(f64::NEG_INFINITY, f64::max)
}

/// Worst static regret over the environment's declared segments.
pub fn max_segment_regret(trace: &RunTrace) -> f64 {
    trace
        .segments()
        .into_iter()
        .map(|(r, s)| window_regret(trace, r, s).expect("segments lie within the horizon"))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `sum_t sup_w |f_{t+1}(w) - f_t(w)|` over the domain.
///
/// Exact for pairs of one-dimensional distance losses and for pairs of linear
/// losses; other pairs are searched over domain probe points, both minimizers
/// and (in one dimension) a uniform grid.
pub fn function_variation(trace: &RunTrace) -> f64 {
    trace
        .rounds
        .windows(2)
        .map(|pair| sup_difference(&trace.domain, &pair[0].loss, &pair[1].loss))
        .sum()
}

fn sup_difference(domain: &Domain, f: &Loss, g: &Loss) -> f64 {
    let gap = |w: &Point| (g.value(w) - f.value(w)).abs();
    match (f, g) {
        (Loss::Linear { slope: a, offset: b }, Loss::Linear { slope: c, offset: d }) => {
            let diff = c.sub(a);
            let shift = d - b;
            let lo = linear_minimizer(&diff, domain);
            let hi = linear_minimizer(&diff.scaled(-1.0), domain);
            (diff.dot(&lo) + shift).abs().max((diff.dot(&hi) + shift).abs())
        }
        _ => {
            let mut candidates = domain.probe_points();
            candidates.push(domain.origin());
            candidates.push(f.minimizer(domain));
            candidates.push(g.minimizer(domain));
            if let Domain::Box { lower, upper } = domain {
                if lower.len() == 1 {
                    let n = DEFAULT_RESOLUTION;
                    let step = (upper[0] - lower[0]) / n as f64;
                    candidates.extend((0..=n).map(|i| Point::scalar(lower[0] + step * i as f64)));
                }
            }
            candidates.iter().map(gap).fold(0.0, f64::max)
        }
    }
}

/// The per-round loss minimizers recorded in the trace.
pub fn minimizer_comparators(trace: &RunTrace) -> Result<Vec<Point>> {
    trace
        .minimizers()
        .ok_or_else(|| Error::UnsupportedMetric("trace does not record per-round minimizers".into()))
}

/// The best fixed action of each declared segment, repeated over the segment.
pub fn piecewise_constant_comparators(trace: &RunTrace) -> Vec<Point> {
    piecewise_constant_on(trace, None, 1, trace.horizon())
}

/// Piecewise-constant comparators for `[r, s]`: one windowed optimum per
/// segment piece intersecting the interval.
pub fn piecewise_constant_on(trace: &RunTrace, table: Option<&WindowTable>, r: usize, s: usize) -> Vec<Point> {
    let losses;
    let oracle = match table {
        Some(_) => None,
        None => {
            losses = trace.losses();
            Some(WindowOracle::new(&trace.domain, &losses))
        }
    };
    let mut out = Vec::with_capacity(s + 1 - r);
    for (a, b) in trace.segments() {
        let (a, b) = (a.max(r), b.min(s));
        if a > b {
            continue;
        }
        let argmin = match (table, &oracle) {
            (Some(t), _) => t.argmin(a, b).clone(),
            (None, Some(o)) => o.minimize(a, b).1,
            (None, None) => unreachable!(),
        };
        out.extend(std::iter::repeat_n(argmin, b + 1 - a));
    }
    out
}

/// Source of the comparator sequence for dynamic regret.
#[derive(Debug, Clone, PartialEq)]
pub enum ComparatorPolicy {
    Minimizers,
    PiecewiseConstant,
    Explicit(Vec<Point>),
}

impl ComparatorPolicy {
    pub fn name(&self) -> &'static str {
        match self {
            ComparatorPolicy::Minimizers => "minimizers",
            ComparatorPolicy::PiecewiseConstant => "piecewise-constant",
            ComparatorPolicy::Explicit(_) => "file",
        }
    }

    pub fn comparators(&self, trace: &RunTrace) -> Result<Vec<Point>> {
        match self {
            ComparatorPolicy::Minimizers => minimizer_comparators(trace),
            ComparatorPolicy::PiecewiseConstant => Ok(piecewise_constant_comparators(trace)),
            ComparatorPolicy::Explicit(u) => {
                if u.len() != trace.horizon() {
                    return Err(argument(format!(
                        "comparator file has {} rows, trace has {} rounds",
                        u.len(),
                        trace.horizon()
                    )));
                }
                Ok(u.clone())
            }
        }
    }
}

/// Upper estimate of dynamic regret from measured strongly adaptive regret: `min_tau SAReg(T, tau) T / tau + tau G P_T`.
pub fn bound_thm1_rhs(trace: &RunTrace, comparators: &[Point], lipschitz: f64) -> Result<f64> {
    if comparators.len() != trace.horizon() {
        return Err(argument("one comparator per round is required"));
    }
    let p = path_length(comparators);
    let horizon = trace.horizon() as f64;
    Ok(sa_regret_profile(trace)
        .into_iter()
        .enumerate()
        .map(|(i, sa)| {
            let tau = (i + 1) as f64;
            sa * horizon / tau + tau * lipschitz * p
        })
        .fold(f64::INFINITY, f64::min))
}

/// Running meta-regret `sum_{u=i}^{t} f_u(w_u) - f_u(w_{u,J})` of the combined
/// learner against the expert of interval `J`, for `t` from `J.start` to
/// `min(J.end, T)`. Fails if the expert was not recorded in some round.
pub fn meta_regret_prefixes(trace: &RunTrace, interval: Interval) -> Result<Vec<f64>> {
    let last = interval.end().min(trace.horizon());
    let mut acc = 0.0;
    let mut out = Vec::new();
    for u in interval.start()..=last {
        let record = &trace.rounds[u - 1];
        let expert = record
            .experts
            .iter()
            .find(|e| e.id == ExpertId::Interval(interval))
            .ok_or_else(|| Error::Invariant(format!("expert {interval} missing at round {u}")))?;
        acc += record.loss_value - record.loss.value(&expert.action);
        out.push(acc);
    }
    Ok(out)
}

/// Minimum value and minimizer of every window `[r, s]`, for interval queries.
#[derive(Debug, Clone)]
pub struct WindowTable {
    horizon: usize,
    // row r - 1 holds windows [r, r], [r, r + 1], ..., [r, T]
    values: Vec<Vec<f64>>,
    argmins: Vec<Vec<Point>>,
}

impl WindowTable {
    pub fn new(trace: &RunTrace) -> Self {
        let horizon = trace.horizon();
        let losses = trace.losses();
        let oracle = WindowOracle::new(&trace.domain, &losses);
        let mut values = Vec::with_capacity(horizon);
        let mut argmins = Vec::with_capacity(horizon);
        for r in 1..=horizon {
            let mut row_v = Vec::with_capacity(horizon + 1 - r);
            let mut row_a = Vec::with_capacity(horizon + 1 - r);
            oracle.scan_from(r, |_, v, w| {
                row_v.push(v);
                row_a.push(w.clone());
            });
            values.push(row_v);
            argmins.push(row_a);
        }
        Self { horizon, values, argmins }
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn value(&self, r: usize, s: usize) -> f64 {
        self.values[r - 1][s - r]
    }

    pub fn argmin(&self, r: usize, s: usize) -> &Point {
        &self.argmins[r - 1][s - r]
    }
}

/// Named scalar metrics available on a trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    CumulativeLoss,
    StaticRegret,
    DynamicRegret,
    RestrictedDynamicRegret,
    SaRegret,
    WeakAdaptiveRegret,
    MaxSegmentRegret,
    PathLength,
    SquaredPathLength,
    FunctionVariation,
}

impl Metric {
    pub const ALL: [Metric; 10] = [
        Metric::CumulativeLoss,
        Metric::StaticRegret,
        Metric::DynamicRegret,
        Metric::RestrictedDynamicRegret,
        Metric::SaRegret,
        Metric::WeakAdaptiveRegret,
        Metric::MaxSegmentRegret,
        Metric::PathLength,
        Metric::SquaredPathLength,
        Metric::FunctionVariation,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Metric::CumulativeLoss => "cumulative_loss",
            Metric::StaticRegret => "static_regret",
            Metric::DynamicRegret => "dynamic_regret",
            Metric::RestrictedDynamicRegret => "restricted_dynamic_regret",
            Metric::SaRegret => "sa_regret",
            Metric::WeakAdaptiveRegret => "weak_adaptive_regret",
            Metric::MaxSegmentRegret => "max_segment_regret",
            Metric::PathLength => "path_length",
            Metric::SquaredPathLength => "squared_path_length",
            Metric::FunctionVariation => "function_variation",
        }
    }

    /// Evaluates the metric. `tau` is required by `sa_regret`; the comparator
    /// policy applies to `dynamic_regret` and the path lengths.
    pub fn evaluate(&self, trace: &RunTrace, tau: Option<usize>, policy: &ComparatorPolicy) -> Result<f64> {
        match self {
            Metric::CumulativeLoss => Ok(trace.cumulative_loss()),
            Metric::StaticRegret => Ok(static_regret(trace)),
            Metric::DynamicRegret => dynamic_regret(trace, &policy.comparators(trace)?),
            Metric::RestrictedDynamicRegret => restricted_dynamic_regret(trace),
            Metric::SaRegret => {
                sa_regret(trace, tau.ok_or_else(|| argument("sa_regret needs a window length tau"))?)
            }
            Metric::WeakAdaptiveRegret => Ok(weak_adaptive_regret(trace)),
            Metric::MaxSegmentRegret => Ok(max_segment_regret(trace)),
            Metric::PathLength => Ok(path_length(&policy.comparators(trace)?)),
            Metric::SquaredPathLength => Ok(squared_path_length(&policy.comparators(trace)?)),
            Metric::FunctionVariation => Ok(function_variation(trace)),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::UnsupportedMetric(s.to_string()))
    }
}
