use std::collections::BTreeMap;

use super::ExpertSlot;
use crate::anh::{combine_actions, normalize_weights};
use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::game::{ExpertId, ExpertSnapshot, OnlineLearner};
use crate::intervals::{dgc_starting_at, top_level, Interval};
use crate::loss::LossFunction;
use crate::ogd::{static_step_size, OgdState};
use crate::point::Point;

/// A DGC expert initialized from its dying same-level predecessor.
#[derive(Debug, Clone, PartialEq)]
pub struct WarmStart {
    pub round: usize,
    pub from: Interval,
    pub to: Interval,
    pub inherited: Point,
}

/// OGD experts on dense geometric covering intervals, combined by
/// AdaNormalHedge. Exactly one expert per level is awake in every round.
#[derive(Debug, Clone)]
pub struct Aod {
    horizon: usize,
    domain: Domain,
    lipschitz: f64,
    round: usize,
    in_round: bool,
    by_level: Vec<Option<Interval>>,
    slots: BTreeMap<Interval, ExpertSlot<OgdState>>,
    weights: BTreeMap<Interval, f64>,
    action: Option<Point>,
    warm_starts: Vec<WarmStart>,
}

impl Aod {
    pub fn new(domain: Domain, lipschitz: f64, horizon: usize) -> Result<Self> {
        // validates D, G and T
        static_step_size(domain.diameter(), lipschitz, horizon)?;
        Ok(Self {
            horizon,
            domain,
            lipschitz,
            round: 0,
            in_round: false,
            by_level: vec![None; top_level(horizon) as usize + 1],
            slots: BTreeMap::new(),
            weights: BTreeMap::new(),
            action: None,
            warm_starts: Vec::new(),
        })
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// Index of the round currently open, or of the last completed one.
    pub fn rounds_played(&self) -> usize {
        self.round
    }

    pub fn slots(&self) -> impl Iterator<Item = &ExpertSlot<OgdState>> {
        self.slots.values()
    }

    /// Probabilities of the round currently open (or last played).
    pub fn weights(&self) -> &BTreeMap<Interval, f64> {
        &self.weights
    }

    /// Every warm start performed so far, in round order.
    pub fn warm_starts(&self) -> &[WarmStart] {
        &self.warm_starts
    }

    fn open_experts(&mut self, t: usize) -> Result<()> {
        for interval in dgc_starting_at(t, self.horizon)? {
            let level = interval.level() as usize;
            let eta = static_step_size(self.domain.diameter(), self.lipschitz, interval.len())?;
            let learner = if t == 1 {
                OgdState::new(self.domain.clone(), eta)?
            } else {
                let prev = self.by_level[level].take().ok_or_else(|| {
                    Error::Invariant(format!("no level-{level} expert to warm start {interval}"))
                })?;
                let dying = self
                    .slots
                    .remove(&prev)
                    .ok_or_else(|| Error::Invariant(format!("level index points at missing {prev}")))?;
                let inherited = dying.learner.current().clone();
                self.warm_starts.push(WarmStart {
                    round: t,
                    from: prev,
                    to: interval,
                    inherited: inherited.clone(),
                });
                dying.learner.with_step_size(eta)?
            };
            self.by_level[level] = Some(interval);
            let last_action = learner.current().clone();
            self.slots.insert(
                interval,
                ExpertSlot { interval, learner, record: Default::default(), last_action },
            );
        }
        if self.slots.len() != self.by_level.len() {
            return Err(Error::Invariant(format!(
                "{} experts awake at round {t}, expected {}",
                self.slots.len(),
                self.by_level.len()
            )));
        }
        Ok(())
    }
}

/// Functional form of one AOD round.
pub fn aod_round(state: &Aod, loss: &dyn LossFunction) -> Result<(Point, Aod)> {
    let mut next = state.clone();
    let w = next.round(loss)?;
    Ok((w, next))
}

impl OnlineLearner for Aod {
    fn act(&mut self) -> Result<Point> {
        if self.in_round {
            return Err(Error::Protocol("act called twice without observe".into()));
        }
        let t = self.round + 1;
        if t > self.horizon {
            return Err(Error::Protocol(format!("AOD was configured for {} rounds", self.horizon)));
        }
        self.open_experts(t)?;
        for slot in self.slots.values_mut() {
            slot.last_action = slot.learner.current().clone();
        }
        let records = self.slots.iter().map(|(k, s)| (*k, s.record)).collect();
        self.weights = normalize_weights(&records)?;
        let actions = self.slots.iter().map(|(k, s)| (*k, s.last_action.clone())).collect();
        let w = combine_actions(&self.weights, &actions)?;
        self.round = t;
        self.in_round = true;
        self.action = Some(w.clone());
        Ok(w)
    }

    fn observe(&mut self, loss: &dyn LossFunction) -> Result<()> {
        let action = match (self.in_round, &self.action) {
            (true, Some(a)) => a,
            _ => return Err(Error::Protocol("observe called before act".into())),
        };
        let meta_loss = loss.value(action);
        for slot in self.slots.values_mut() {
            slot.record.update(meta_loss, loss.value(&slot.last_action));
            slot.learner.step_in_place(loss)?;
        }
        self.in_round = false;
        Ok(())
    }

    fn experts(&self) -> Vec<ExpertSnapshot> {
        self.slots
            .iter()
            .map(|(k, s)| ExpertSnapshot {
                id: ExpertId::Interval(*k),
                action: s.last_action.clone(),
                weight: self.weights.get(k).copied().unwrap_or(0.0),
            })
            .collect()
    }

    fn active_experts(&self) -> usize {
        self.slots.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loss::Loss;

    fn unit() -> Domain {
        Domain::interval(0.0, 1.0).unwrap()
    }

    fn dist(theta: f64) -> Loss {
        Loss::distance(Point::scalar(theta), 1.0).unwrap()
    }

    #[test]
    fn first_round_creates_one_expert_per_level() {
        let mut aod = Aod::new(unit(), 1.0, 4).unwrap();
        let w = aod.act().unwrap();
        assert_eq!(w, Point::scalar(0.0));
        let spans: Vec<_> = aod.slots().map(|s| (s.interval.start(), s.interval.end())).collect();
        assert_eq!(spans, vec![(1, 1), (1, 2), (1, 4)]);
        assert!(aod.weights().values().all(|p| (*p - 1.0 / 3.0).abs() < 1e-15));
        for s in aod.slots() {
            let expected = static_step_size(1.0, 1.0, s.interval.len()).unwrap();
            assert_eq!(s.learner.step_size(), expected);
        }
    }

    #[test]
    fn warm_start_inherits_predecessor_iterate() {
        let mut aod = Aod::new(unit(), 1.0, 4).unwrap();
        aod.round(&dist(0.9)).unwrap();
        aod.round(&dist(0.7)).unwrap();
        let before: BTreeMap<_, _> =
            aod.slots().map(|s| (s.interval, s.learner.current().clone())).collect();
        aod.act().unwrap();
        let ws: Vec<_> = aod.warm_starts().iter().filter(|w| w.round == 3).collect();
        assert_eq!(ws.len(), 2);
        for w in ws {
            assert_eq!(w.inherited, before[&w.from]);
            assert_eq!(w.from.len(), w.to.len());
            let slot = aod.slots().find(|s| s.interval == w.to).unwrap();
            assert_eq!(slot.last_action, w.inherited);
            assert_eq!(slot.record, Default::default());
        }
        let long = aod.warm_starts().iter().find(|w| w.to.len() == 2 && w.round == 3).unwrap();
        assert_eq!((long.from.start(), long.from.end()), (1, 2));
    }

    #[test]
    fn horizon_and_protocol_order_are_enforced() {
        let mut aod = Aod::new(unit(), 1.0, 2).unwrap();
        assert!(aod.observe(&dist(0.5)).is_err());
        aod.act().unwrap();
        assert!(aod.act().is_err());
        aod.observe(&dist(0.5)).unwrap();
        aod.round(&dist(0.5)).unwrap();
        assert!(matches!(aod.act(), Err(Error::Protocol(_))));
    }

    #[test]
    fn active_set_size_is_constant_for_odd_horizons() {
        for horizon in [1, 5, 12, 33] {
            let mut aod = Aod::new(unit(), 1.0, horizon).unwrap();
            for t in 1..=horizon {
                aod.act().unwrap();
                assert_eq!(aod.active_experts(), top_level(horizon) as usize + 1);
                aod.observe(&dist((t % 3) as f64 / 3.0)).unwrap();
            }
        }
    }

    #[test]
    fn functional_round_leaves_input_untouched() {
        let aod = Aod::new(unit(), 1.0, 8).unwrap();
        let (w, next) = aod_round(&aod, &dist(0.4)).unwrap();
        assert_eq!(w, Point::scalar(0.0));
        assert_eq!(aod.rounds_played(), 0);
        assert_eq!(next.rounds_played(), 1);
    }
}
