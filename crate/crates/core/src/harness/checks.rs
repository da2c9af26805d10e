//! Measured-versus-bound comparisons on recorded runs.

use crate::error::{argument, Result};
use crate::game::RunTrace;
use crate::intervals::{top_level, Interval};
use crate::loss::LossFunction;
use crate::metrics::{
    bound_lemma1, bound_thm2, bound_thm3, bound_thm4, bound_thm5, bound_thm7, dynamic_regret,
    meta_regret_prefixes, path_length, sa_regret_profile, static_regret, ComparatorPolicy, WindowTable,
};
use crate::point::Point;

/// One inequality `measured <= bound`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCheck {
    pub check: &'static str,
    pub scope: String,
    /// Length of the window, interval or expert the check refers to.
    pub span: usize,
    pub measured: f64,
    pub bound: f64,
}

impl BoundCheck {
    pub fn passes(&self) -> bool {
        self.measured <= self.bound
    }

    pub fn slack(&self) -> f64 {
        self.bound - self.measured
    }
}

/// Static regret of tuned OGD against `D G sqrt T`.
pub fn thm2_check(trace: &RunTrace) -> BoundCheck {
    BoundCheck {
        check: "thm2",
        scope: format!("T={}", trace.horizon()),
        span: trace.horizon(),
        measured: static_regret(trace),
        bound: bound_thm2(trace.diameter(), trace.lipschitz, trace.horizon()),
    }
}

/// `SAReg(T, tau)` of AOD for every `tau`.
pub fn thm3_checks(trace: &RunTrace) -> Vec<BoundCheck> {
    let (d, g, horizon) = (trace.diameter(), trace.lipschitz, trace.horizon());
    sa_regret_profile(trace)
        .into_iter()
        .enumerate()
        .map(|(i, measured)| BoundCheck {
            check: "thm3",
            scope: format!("tau={}", i + 1),
            span: i + 1,
            measured,
            bound: bound_thm3(i + 1, horizon, d, g),
        })
        .collect()
}

fn dynamic_check(
    trace: &RunTrace,
    policy: &ComparatorPolicy,
    check: &'static str,
    bound: fn(usize, f64, f64, f64) -> f64,
) -> Result<BoundCheck> {
    let u = policy.comparators(trace)?;
    let p = path_length(&u);
    Ok(BoundCheck {
        check,
        scope: policy.name().to_string(),
        span: trace.horizon(),
        measured: dynamic_regret(trace, &u)?,
        bound: bound(trace.horizon(), p, trace.diameter(), trace.lipschitz),
    })
}

/// Dynamic regret of AOD against the policy's comparators.
pub fn thm4_check(trace: &RunTrace, policy: &ComparatorPolicy) -> Result<BoundCheck> {
    dynamic_check(trace, policy, "thm4", bound_thm4)
}

/// Dynamic regret of Ader against the policy's comparators.
pub fn thm7_check(trace: &RunTrace, policy: &ComparatorPolicy) -> Result<BoundCheck> {
    dynamic_check(trace, policy, "thm7", bound_thm7)
}

fn prefix(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut acc = vec![0.0];
    for v in values {
        acc.push(acc[acc.len() - 1] + v);
    }
    acc
}

/// Interval dynamic regret of AOA on every `[r, s]` with `r` in `starts`.
///
/// For the piecewise-constant policy the comparators are recomputed inside each
/// interval, one windowed optimum per segment piece, using `table`.
pub fn thm5_checks(
    trace: &RunTrace,
    policy: &ComparatorPolicy,
    table: &WindowTable,
    starts: impl IntoIterator<Item = usize>,
) -> Result<Vec<BoundCheck>> {
    let horizon = trace.horizon();
    if table.horizon() != horizon {
        return Err(argument("window table was built for a different trace"));
    }
    let (d, g) = (trace.diameter(), trace.lipschitz);
    let incurred = prefix(trace.rounds.iter().map(|r| r.loss_value));
    let fixed = match policy {
        ComparatorPolicy::PiecewiseConstant => None,
        other => {
            let u = other.comparators(trace)?;
            // validates membership once for the whole sequence
            dynamic_regret(trace, &u)?;
            let comparator_loss = prefix(trace.rounds.iter().zip(&u).map(|(r, x)| r.loss.value(x)));
            let steps = prefix(u.windows(2).map(|w| w[1].distance(&w[0])));
            Some((comparator_loss, steps))
        }
    };
    let segments = trace.segments();
    let mut out = Vec::new();
    for r in starts {
        if r == 0 || r > horizon {
            return Err(argument(format!("interval start {r} outside [1, {horizon}]")));
        }
        for s in r..=horizon {
            let (measured, p) = match &fixed {
                Some((comparator_loss, steps)) => (
                    incurred[s] - incurred[r - 1] - (comparator_loss[s] - comparator_loss[r - 1]),
                    steps[s - 1] - steps[r - 1],
                ),
                None => {
                    let mut best = 0.0;
                    let mut p = 0.0;
                    let mut previous: Option<&Point> = None;
                    for &(a, b) in &segments {
                        let (a, b) = (a.max(r), b.min(s));
                        if a > b {
                            continue;
                        }
                        best += table.value(a, b);
                        let w = table.argmin(a, b);
                        if let Some(prev) = previous {
                            p += w.distance(prev);
                        }
                        previous = Some(w);
                    }
                    (incurred[s] - incurred[r - 1] - best, p)
                }
            };
            out.push(BoundCheck {
                check: "thm5",
                scope: format!("{} I={r}..{s}", policy.name()),
                span: s + 1 - r,
                measured,
                bound: bound_thm5(s + 1 - r, s, p, d, g),
            });
        }
    }
    Ok(out)
}

/// Meta-regret of AOD against every dense covering expert, at every prefix.
///
/// Needs the per-round expert snapshots recorded by `run_game`.
pub fn lemma1_checks(trace: &RunTrace) -> Result<Vec<BoundCheck>> {
    let horizon = trace.horizon();
    let mut out = Vec::new();
    for level in 0..=top_level(horizon) {
        let len = 1usize << level;
        for start in (1..=horizon).step_by(len) {
            let interval = Interval::new(start, level)?;
            for (offset, measured) in meta_regret_prefixes(trace, interval)?.into_iter().enumerate() {
                let t = start + offset;
                out.push(BoundCheck {
                    check: "lemma1",
                    scope: format!("J={start}..{} t={t}", interval.end()),
                    span: len,
                    measured,
                    bound: bound_lemma1(start, t, horizon),
                });
            }
        }
    }
    Ok(out)
}
