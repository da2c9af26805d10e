//! Meta-algorithms that run interval-bound experts under AdaNormalHedge.
//!
//! [`Aod`] keeps one warm-started OGD expert per DGC level and needs the
//! horizon up front. [`Aoa`] runs an Ader expert on every GC interval and is
//! horizon-free.

mod aoa;
mod aod;

pub use aoa::{aoa_round, Aoa};
pub use aod::{aod_round, Aod, WarmStart};

use crate::anh::AnhRecord;
use crate::intervals::Interval;
use crate::point::Point;

/// An awake expert: its interval, learner state, and meta-level bookkeeping.
#[derive(Debug, Clone)]
pub struct ExpertSlot<L> {
    pub interval: Interval,
    pub learner: L,
    pub record: AnhRecord,
    /// Action the expert proposed in the current (or most recent) round.
    pub last_action: Point,
}
