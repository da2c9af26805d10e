//! Geometric covering (GC) and dense geometric covering (DGC) interval systems.
//!
//! Level `k` of DGC partitions `{1, 2, ...}` into blocks `[(i-1)2^k + 1, i 2^k]`
//! and only levels with `2^k <= T` exist. Level `k` of GC partitions
//! `{2^k, 2^k + 1, ...}` into blocks `[i 2^k, (i+1) 2^k - 1]` and is unbounded,
//! so GC intervals can be produced lazily without knowing the horizon.

use std::fmt;

use crate::error::{argument, Error, Result};

/// Closed range of rounds `[start, start + 2^level - 1]`.
///
/// The end is derived from the level, so the length invariant cannot be broken.
/// Ordering is by start round, then by level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interval {
    start: usize,
    level: u32,
}

impl Interval {
    pub fn new(start: usize, level: u32) -> Result<Self> {
        if start == 0 {
            return Err(argument("rounds are numbered from 1"));
        }
        if level >= usize::BITS - 1 {
            return Err(argument(format!("level {level} is too large")));
        }
        Ok(Self { start, level })
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn len(&self) -> usize {
        1 << self.level
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn end(&self) -> usize {
        self.start + self.len() - 1
    }

    pub fn contains(&self, t: usize) -> bool {
        self.start <= t && t <= self.end()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.start, self.end())
    }
}

/// `floor(log2 T)`, the top DGC level for horizon `T`.
pub fn top_level(horizon: usize) -> u32 {
    assert!(horizon >= 1);
    usize::BITS - 1 - horizon.leading_zeros()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntervalSystem {
    /// DGC intervals with lengths at most `horizon`.
    Dense { horizon: usize },
    /// GC intervals, unbounded.
    Geometric,
}

impl IntervalSystem {
    pub fn contains(&self, interval: &Interval) -> bool {
        let len = interval.len();
        match *self {
            IntervalSystem::Dense { horizon } => {
                len <= horizon && (interval.start() - 1).is_multiple_of(len)
            }
            IntervalSystem::Geometric => interval.start().is_multiple_of(len),
        }
    }

    /// Members of the system whose first round is `t`, in ascending level.
    pub fn starting_at(&self, t: usize) -> Result<Vec<Interval>> {
        match *self {
            IntervalSystem::Dense { horizon } => dgc_starting_at(t, horizon),
            IntervalSystem::Geometric => gc_starting_at(t),
        }
    }

    /// Members of the system that contain round `t`, in ascending level.
    pub fn containing(&self, t: usize) -> Result<Vec<Interval>> {
        if t == 0 {
            return Err(argument("rounds are numbered from 1"));
        }
        let max_level = match *self {
            IntervalSystem::Dense { horizon } => top_level(horizon),
            IntervalSystem::Geometric => top_level(t),
        };
        let mut out = Vec::new();
        for k in 0..=max_level {
            let len = 1usize << k;
            let start = match *self {
                IntervalSystem::Dense { .. } => (t - 1) / len * len + 1,
                IntervalSystem::Geometric => t / len * len,
            };
            out.push(Interval::new(start, k)?);
        }
        Ok(out)
    }
}

/// DGC intervals that open at round `t`: levels `k` with `2^k <= T` and
/// `2^k | (t - 1)`.
pub fn dgc_starting_at(t: usize, horizon: usize) -> Result<Vec<Interval>> {
    if t == 0 {
        return Err(argument("rounds are numbered from 1"));
    }
    if horizon == 0 {
        return Err(argument("horizon must be at least 1"));
    }
    (0..=top_level(horizon))
        .take_while(|k| (t - 1).is_multiple_of(1usize << k))
        .map(|k| Interval::new(t, k))
        .collect()
}

/// GC intervals that open at round `t`: levels `k` with `t = i 2^k`, `i >= 1`.
pub fn gc_starting_at(t: usize) -> Result<Vec<Interval>> {
    if t == 0 {
        return Err(argument("rounds are numbered from 1"));
    }
    (0..=t.trailing_zeros())
        .filter(|k| 1usize << k <= t)
        .map(|k| Interval::new(t, k))
        .collect()
}

/// Tiles `[r, s]` with disjoint consecutive members of `system`.
///
/// Greedy: at each position take the longest member that still ends within
/// `s`. The lengths first at least double and then at least halve, which is
/// exactly the two-sided halving structure checked by [`halving_split`].
pub fn cover(r: usize, s: usize, system: IntervalSystem) -> Result<Vec<Interval>> {
    if r == 0 || r > s {
        return Err(argument(format!("invalid range [{r}, {s}]")));
    }
    if let IntervalSystem::Dense { horizon } = system {
        if s > horizon {
            return Err(argument(format!("[{r}, {s}] exceeds the horizon {horizon}")));
        }
    }
    let mut out = Vec::new();
    let mut pos = r;
    while pos <= s {
        let next = system
            .starting_at(pos)?
            .into_iter()
            .rev()
            .find(|i| i.end() <= s)
            .ok_or_else(|| Error::Invariant(format!("no interval starts at round {pos}")))?;
        pos = next.end() + 1;
        out.push(next);
    }
    debug_assert!(halving_split(&out).is_some());
    Ok(out)
}

/// Finds an index `j` such that lengths before `j` at least double step by
/// step up to `intervals[j]`, and lengths after `j + 1` at least halve step
/// by step. Returns `None` if no such split exists.
pub fn halving_split(intervals: &[Interval]) -> Option<usize> {
    let lens: Vec<usize> = intervals.iter().map(Interval::len).collect();
    (0..lens.len()).find(|&j| {
        lens[..=j].windows(2).all(|w| 2 * w[0] <= w[1])
            && lens.get(j + 1..).is_none_or(|tail| tail.windows(2).all(|w| 2 * w[1] <= w[0]))
    })
}
