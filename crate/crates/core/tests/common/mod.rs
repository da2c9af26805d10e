//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use adaptive_oco::harness::{build_environment, EnvironmentSpec};
use adaptive_oco::{Environment, Loss};

pub fn abrupt(segments: usize) -> EnvironmentSpec {
    EnvironmentSpec::Abrupt { segments, change_points: None, levels: None }
}

pub fn env(spec: &EnvironmentSpec, horizon: usize, seed: u64) -> Environment {
    build_environment(spec, horizon, seed).expect("valid environment")
}

/// Targets of a one-dimensional absolute-loss environment.
pub fn thetas(env: &Environment) -> Vec<f64> {
    env.losses()
        .iter()
        .map(|f| match f {
            Loss::Distance { target, scale } => {
                assert_eq!(*scale, 1.0);
                target.coords()[0]
            }
            Loss::Linear { .. } => panic!("expected absolute losses"),
        })
        .collect()
}

/// `sum |w - theta_t|` over a window, minimized by trying every target (clamped
/// to `[0, 1]`) and both endpoints. Quadratic per window by design.
pub fn reference_window_min(thetas: &[f64]) -> f64 {
    let mut candidates = vec![0.0, 1.0];
    candidates.extend(thetas.iter().map(|t| t.clamp(0.0, 1.0)));
    candidates
        .iter()
        .map(|c| thetas.iter().map(|t| (c - t).abs()).sum::<f64>())
        .fold(f64::INFINITY, f64::min)
}

/// `SAReg(T, tau)` for every `tau`, by scanning every window.
pub fn reference_sa_profile(thetas: &[f64], losses: &[f64]) -> Vec<f64> {
    let n = thetas.len();
    let mut profile = vec![f64::NEG_INFINITY; n];
    for r in 0..n {
        let mut incurred = 0.0;
        for s in r..n {
            incurred += losses[s];
            let regret = incurred - reference_window_min(&thetas[r..=s]);
            profile[s - r] = profile[s - r].max(regret);
        }
    }
    profile
}

/// AOD on `[0, 1]` with losses `|w - theta_t|`, written directly from the
/// algorithm description with plain arrays.
///
/// The floating-point operations are performed in the same order as the
/// library so the comparison can be exact: log-weights
/// `a - ln 2 + ln(-expm1(b - a))`, normalization by the maximum, summation in
/// order of (start, level), and the first term of the average formed as a
/// product.
pub fn naive_aod(thetas: &[f64]) -> Vec<f64> {
    let horizon = thetas.len();
    let levels = (usize::BITS - 1 - horizon.leading_zeros()) as usize + 1;
    // per level: (start, iterate, R, C)
    let mut experts: Vec<(usize, f64, f64, f64)> = vec![(0, 0.0, 0.0, 0.0); levels];
    let mut actions = Vec::with_capacity(horizon);
    for t in 1..=horizon {
        for (k, e) in experts.iter_mut().enumerate() {
            let len = 1usize << k;
            if (t - 1) % len == 0 {
                // warm start from the dying expert of the same level
                let inherited = if t == 1 { 0.0 } else { e.1 };
                *e = (t, inherited, 0.0, 0.0);
            }
        }
        let mut order: Vec<usize> = (0..levels).collect();
        order.sort_by_key(|&k| (experts[k].0, k));
        let logs: Vec<f64> = order
            .iter()
            .map(|&k| {
                let (r, c) = (experts[k].2, experts[k].3);
                let denom = 3.0 * (c + 1.0);
                let hi = (r + 1.0).max(0.0);
                let lo = (r - 1.0).max(0.0);
                let a = hi * hi / denom;
                let b = lo * lo / denom;
                if a <= b {
                    f64::NEG_INFINITY
                } else {
                    a - std::f64::consts::LN_2 + (-(b - a).exp_m1()).ln()
                }
            })
            .collect();
        let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let probs: Vec<f64> = if max == f64::NEG_INFINITY {
            vec![1.0 / levels as f64; levels]
        } else {
            let raw: Vec<f64> = logs.iter().map(|l| (l - max).exp()).collect();
            let mut total = 0.0;
            for x in &raw {
                total += x;
            }
            raw.iter().map(|x| x / total).collect()
        };
        let mut w = experts[order[0]].1 * probs[0];
        for (i, &k) in order.iter().enumerate().skip(1) {
            w += probs[i] * experts[k].1;
        }
        actions.push(w);

        let theta = thetas[t - 1];
        let meta_loss = (w - theta).abs();
        for (k, e) in experts.iter_mut().enumerate() {
            let r = meta_loss - (e.1 - theta).abs();
            e.2 += r;
            e.3 += r.abs();
            let eta = 1.0 / ((1usize << k) as f64).sqrt();
            let diff = e.1 - theta;
            let g = if diff == 0.0 { 0.0 } else { diff / diff.abs() };
            e.1 = (e.1 + -eta * g).clamp(0.0, 1.0);
        }
    }
    actions
}
