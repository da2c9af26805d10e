//! Best fixed action over a contiguous window of rounds.
//!
//! Shipped losses get exact answers: one-dimensional distance losses are
//! minimized at a weighted median of the targets, and sums of linear losses
//! are linear. Anything else falls back to a numeric search whose resolution
//! is set by [`WindowOracle::with_resolution`].

use crate::domain::Domain;
use crate::loss::{linear_minimizer, Loss, LossFunction};
use crate::point::Point;

/// Default number of grid cells for the numeric fallback.
pub const DEFAULT_RESOLUTION: usize = 1024;

const GOLDEN_ITERS: usize = 200;
const SUBGRADIENT_ITERS: usize = 4000;

#[derive(Debug, Clone)]
enum Kind {
    /// `sum_i |w - theta_i| / scale_i` on an interval.
    Median {
        lo: f64,
        hi: f64,
        thetas: Vec<f64>,
        weights: Vec<f64>,
        /// rank of each round's target in `sorted`
        ranks: Vec<usize>,
        sorted: Vec<f64>,
    },
    Linear,
    Numeric,
}

/// Exact or tolerance-bounded window minimizer over a loss sequence.
#[derive(Debug, Clone)]
pub struct WindowOracle<'a> {
    domain: &'a Domain,
    losses: &'a [Loss],
    kind: Kind,
    resolution: usize,
}

impl<'a> WindowOracle<'a> {
    pub fn new(domain: &'a Domain, losses: &'a [Loss]) -> Self {
        let kind = classify(domain, losses);
        Self { domain, losses, kind, resolution: DEFAULT_RESOLUTION }
    }

    /// Grid resolution of the numeric fallback (ignored by the exact paths).
    pub fn with_resolution(mut self, resolution: usize) -> Self {
        self.resolution = resolution.max(2);
        self
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self.kind, Kind::Numeric)
    }

    /// `min_w sum_{t=r}^{s} f_t(w)` and a minimizer; rounds are 1-based inclusive.
    pub fn minimize(&self, r: usize, s: usize) -> (f64, Point) {
        assert!(1 <= r && r <= s && s <= self.losses.len(), "bad window [{r}, {s}]");
        let window = &self.losses[r - 1..s];
        let argmin = match &self.kind {
            Kind::Median { lo, hi, thetas, weights, .. } => {
                let mut pairs: Vec<(f64, f64)> = thetas[r - 1..s]
                    .iter()
                    .copied()
                    .zip(weights[r - 1..s].iter().copied())
                    .collect();
                pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
                let total: f64 = pairs.iter().map(|p| p.1).sum();
                let mut acc = 0.0;
                let median = pairs
                    .iter()
                    .find(|(_, w)| {
                        acc += w;
                        acc >= total / 2.0
                    })
                    .map_or(pairs[pairs.len() - 1].0, |p| p.0);
                Point::scalar(median.clamp(*lo, *hi))
            }
            Kind::Linear => linear_minimizer(&summed_slope(window), self.domain),
            Kind::Numeric => numeric_minimizer(self.domain, window, self.resolution),
        };
        (window_value(window, &argmin), argmin)
    }

    /// Visits `(s, min_w sum_{t=r}^{s} f_t(w), argmin)` for every `s` from `r` to `T`.
    pub fn scan_from(&self, r: usize, mut visit: impl FnMut(usize, f64, &Point)) {
        let horizon = self.losses.len();
        assert!(r >= 1 && r <= horizon);
        match &self.kind {
            Kind::Median { lo, hi, thetas, weights, ranks, sorted } => {
                let mut weight_tree = Fenwick::new(sorted.len());
                let mut moment_tree = Fenwick::new(sorted.len());
                let mut total_w = 0.0;
                let mut total_m = 0.0;
                for s in r..=horizon {
                    let (th, a, k) = (thetas[s - 1], weights[s - 1], ranks[s - 1]);
                    weight_tree.add(k, a);
                    moment_tree.add(k, a * th);
                    total_w += a;
                    total_m += a * th;
                    let k_med = weight_tree.lower_bound(total_w / 2.0);
                    let m = sorted[k_med.min(sorted.len() - 1)].clamp(*lo, *hi);
                    let below = sorted.partition_point(|x| *x <= m);
                    let (wl, ml) = (weight_tree.prefix(below), moment_tree.prefix(below));
                    let value = (m * wl - ml) + ((total_m - ml) - m * (total_w - wl));
                    visit(s, value.max(0.0), &Point::scalar(m));
                }
            }
            Kind::Linear => {
                let mut slope = vec![0.0; self.domain.dim()];
                let mut offset = 0.0;
                for s in r..=horizon {
                    if let Loss::Linear { slope: a, offset: b } = &self.losses[s - 1] {
                        for (acc, x) in slope.iter_mut().zip(a.coords()) {
                            *acc += x;
                        }
                        offset += b;
                    }
                    let a = Point::from_vec_unchecked(slope.clone());
                    let w = linear_minimizer(&a, self.domain);
                    visit(s, a.dot(&w) + offset, &w);
                }
            }
            Kind::Numeric => {
                for s in r..=horizon {
                    let (v, w) = self.minimize(r, s);
                    visit(s, v, &w);
                }
            }
        }
    }
}

fn classify(domain: &Domain, losses: &[Loss]) -> Kind {
    if losses.iter().all(|f| matches!(f, Loss::Linear { .. })) {
        return Kind::Linear;
    }
    let one_dim_distance = domain.dim() == 1
        && losses.iter().all(|f| matches!(f, Loss::Distance { target, .. } if target.dim() == 1));
    if let (true, Domain::Box { lower, upper }) = (one_dim_distance, domain) {
        let (thetas, weights): (Vec<f64>, Vec<f64>) = losses
            .iter()
            .map(|f| match f {
                Loss::Distance { target, scale } => (target.coords()[0], 1.0 / scale),
                Loss::Linear { .. } => unreachable!(),
            })
            .unzip();
        let mut order: Vec<usize> = (0..thetas.len()).collect();
        order.sort_by(|&a, &b| thetas[a].total_cmp(&thetas[b]).then(a.cmp(&b)));
        let mut ranks = vec![0; thetas.len()];
        for (rank, &i) in order.iter().enumerate() {
            ranks[i] = rank;
        }
        let sorted = order.iter().map(|&i| thetas[i]).collect();
        return Kind::Median { lo: lower[0], hi: upper[0], thetas, weights, ranks, sorted };
    }
    Kind::Numeric
}

fn summed_slope(window: &[Loss]) -> Point {
    let dim = window[0].dim();
    let mut acc = vec![0.0; dim];
    for f in window {
        if let Loss::Linear { slope, .. } = f {
            for (a, x) in acc.iter_mut().zip(slope.coords()) {
                *a += x;
            }
        }
    }
    Point::from_vec_unchecked(acc)
}

pub(crate) fn window_value(window: &[Loss], w: &Point) -> f64 {
    window.iter().map(|f| f.value(w)).sum()
}

fn numeric_minimizer(domain: &Domain, window: &[Loss], resolution: usize) -> Point {
    let objective = |w: &Point| window_value(window, w);
    match domain {
        Domain::Box { lower, upper } if lower.len() == 1 => {
            let (lo, hi) = (lower[0], upper[0]);
            let step = (hi - lo) / resolution as f64;
            let grid = |i: usize| if i == resolution { hi } else { lo + step * i as f64 };
            let best = (0..=resolution)
                .min_by(|&a, &b| {
                    objective(&Point::scalar(grid(a))).total_cmp(&objective(&Point::scalar(grid(b))))
                })
                .unwrap_or(0);
            // a convex function is unimodal, so the optimum lies in the two cells around `best`
            let mut a = grid(best.saturating_sub(1));
            let mut b = grid((best + 1).min(resolution));
            let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
            for _ in 0..GOLDEN_ITERS {
                let c = b - inv_phi * (b - a);
                let d = a + inv_phi * (b - a);
                if objective(&Point::scalar(c)) <= objective(&Point::scalar(d)) {
                    b = d;
                } else {
                    a = c;
                }
            }
            let mid = Point::scalar((a + b) / 2.0);
            let at_grid = Point::scalar(grid(best));
            if objective(&mid) <= objective(&at_grid) {
                mid
            } else {
                at_grid
            }
        }
        _ => {
            // projected subgradient descent, keeping the best iterate
            let mut candidates = domain.probe_points();
            candidates.push(domain.origin());
            candidates.extend(window.iter().map(|f| f.minimizer(domain)));
            let mut best = candidates
                .into_iter()
                .min_by(|a, b| objective(a).total_cmp(&objective(b)))
                .unwrap_or_else(|| domain.origin());
            let mut best_val = objective(&best);
            let mut w = best.clone();
            let lip: f64 = window.iter().map(|f| f.lipschitz()).sum::<f64>().max(f64::MIN_POSITIVE);
            let iters = SUBGRADIENT_ITERS.max(resolution);
            for k in 1..=iters {
                let g = window
                    .iter()
                    .fold(Point::zeros(domain.dim()), |acc, f| acc.add_scaled(1.0, &f.gradient(&w)));
                let eta = domain.diameter() / (lip * (k as f64).sqrt());
                w = domain.project(&w.add_scaled(-eta, &g));
                let v = objective(&w);
                if v < best_val {
                    best_val = v;
                    best = w.clone();
                }
            }
            best
        }
    }
}

/// Binary indexed tree over nonnegative weights.
#[derive(Debug, Clone)]
struct Fenwick {
    tree: Vec<f64>,
}

impl Fenwick {
    fn new(n: usize) -> Self {
        Self { tree: vec![0.0; n + 1] }
    }

    fn add(&mut self, index: usize, value: f64) {
        let mut i = index + 1;
        while i < self.tree.len() {
            self.tree[i] += value;
            i += i & i.wrapping_neg();
        }
    }

    /// Sum of entries `0..count`.
    fn prefix(&self, count: usize) -> f64 {
        let mut i = count;
        let mut acc = 0.0;
        while i > 0 {
            acc += self.tree[i];
            i &= i - 1;
        }
        acc
    }

    /// Smallest index whose inclusive prefix sum reaches `target`.
    fn lower_bound(&self, target: f64) -> usize {
        let n = self.tree.len() - 1;
        let mut pos = 0;
        let mut rem = target;
        let mut step = if n == 0 { 0 } else { 1 << (usize::BITS - 1 - n.leading_zeros()) };
        while step > 0 {
            let next = pos + step;
            if next <= n && self.tree[next] < rem {
                pos = next;
                rem -= self.tree[next];
            }
            step >>= 1;
        }
        pos
    }
}
