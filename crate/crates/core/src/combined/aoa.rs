use std::collections::BTreeMap;

use super::ExpertSlot;
use crate::ader::Ader;
use crate::anh::{combine_actions, normalize_weights};
use crate::domain::Domain;
use crate::error::{argument, Error, Result};
use crate::game::{ExpertId, ExpertSnapshot, OnlineLearner};
use crate::intervals::{gc_starting_at, Interval};
use crate::loss::LossFunction;
use crate::point::Point;

/// Ader experts on geometric covering intervals, combined by AdaNormalHedge.
///
/// Intervals are opened lazily, so no horizon is needed. Experts whose
/// interval ends at `t` are dropped right after `w_t` is played and never see
/// the round-`t` loss.
#[derive(Debug, Clone)]
pub struct Aoa {
    domain: Domain,
    lipschitz: f64,
    round: usize,
    in_round: bool,
    slots: BTreeMap<Interval, ExpertSlot<Ader>>,
    weights: BTreeMap<Interval, f64>,
    action: Option<Point>,
}

impl Aoa {
    pub fn new(domain: Domain, lipschitz: f64) -> Result<Self> {
        if !(lipschitz > 0.0 && lipschitz.is_finite()) {
            return Err(argument(format!("G must be positive, got {lipschitz}")));
        }
        Ok(Self {
            domain,
            lipschitz,
            round: 0,
            in_round: false,
            slots: BTreeMap::new(),
            weights: BTreeMap::new(),
            action: None,
        })
    }

    pub fn rounds_played(&self) -> usize {
        self.round
    }

    pub fn slots(&self) -> impl Iterator<Item = &ExpertSlot<Ader>> {
        self.slots.values()
    }

    pub fn weights(&self) -> &BTreeMap<Interval, f64> {
        &self.weights
    }
}

/// Functional form of one AOA round.
pub fn aoa_round(state: &Aoa, loss: &dyn LossFunction) -> Result<(Point, Aoa)> {
    let mut next = state.clone();
    let w = next.round(loss)?;
    Ok((w, next))
}

impl OnlineLearner for Aoa {
    fn act(&mut self) -> Result<Point> {
        if self.in_round {
            return Err(Error::Protocol("act called twice without observe".into()));
        }
        let t = self.round + 1;
        for interval in gc_starting_at(t)? {
            let learner = Ader::new(self.domain.clone(), self.lipschitz, interval.len())?;
            self.slots.insert(
                interval,
                ExpertSlot {
                    interval,
                    learner,
                    record: Default::default(),
                    last_action: self.domain.origin(),
                },
            );
        }
        for slot in self.slots.values_mut() {
            slot.last_action = slot.learner.act()?;
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
        let t = self.round;
        let meta_loss = loss.value(action);
        self.slots.retain(|interval, _| interval.end() != t);
        for slot in self.slots.values_mut() {
            slot.record.update(meta_loss, loss.value(&slot.last_action));
            slot.learner.observe(loss)?;
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

    fn spans(aoa: &Aoa) -> Vec<(usize, usize)> {
        aoa.slots().map(|s| (s.interval.start(), s.interval.end())).collect()
    }

    fn setup() -> (Aoa, Loss) {
        let d = Domain::interval(0.0, 1.0).unwrap();
        (Aoa::new(d, 1.0).unwrap(), Loss::distance(Point::scalar(0.6), 1.0).unwrap())
    }

    #[test]
    fn round_one_expert_expires_immediately() {
        let (mut aoa, f) = setup();
        aoa.act().unwrap();
        assert_eq!(spans(&aoa), vec![(1, 1)]);
        aoa.observe(&f).unwrap();
        assert!(spans(&aoa).is_empty());
        aoa.act().unwrap();
        assert_eq!(spans(&aoa), vec![(2, 2), (2, 3)]);
    }

    #[test]
    fn expiring_expert_gets_no_final_update() {
        let (mut aoa, f) = setup();
        aoa.round(&f).unwrap();
        aoa.act().unwrap();
        aoa.observe(&f).unwrap();
        // [2,2] is gone, [2,3] received exactly one update
        assert_eq!(spans(&aoa), vec![(2, 3)]);
        let survivor = aoa.slots().next().unwrap();
        assert_eq!(survivor.learner.rounds_played(), 1);
    }

    #[test]
    fn round_eight_opens_four_experts() {
        let (mut aoa, f) = setup();
        for _ in 0..7 {
            aoa.round(&f).unwrap();
        }
        aoa.act().unwrap();
        let opened: Vec<_> = aoa
            .slots()
            .filter(|s| s.interval.start() == 8)
            .map(|s| (s.interval.end(), s.learner.horizon()))
            .collect();
        assert_eq!(opened, vec![(8, 1), (9, 2), (11, 4), (15, 8)]);
    }

    #[test]
    fn active_set_is_logarithmic() {
        let (mut aoa, f) = setup();
        for t in 1..=300usize {
            aoa.act().unwrap();
            let bound = (usize::BITS - t.leading_zeros()) as usize;
            assert!(aoa.active_experts() <= bound, "t={t}");
            assert!(aoa.slots().all(|s| s.interval.contains(t)));
            aoa.observe(&f).unwrap();
        }
    }
}
