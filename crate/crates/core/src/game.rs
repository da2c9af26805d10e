use crate::domain::Domain;
use crate::env::Environment;
use crate::error::{Error, Result};
use crate::intervals::Interval;
use crate::loss::{Loss, LossFunction};
use crate::point::Point;

/// Maximum distance an action may sit outside the domain.
pub const PROTOCOL_TOLERANCE: f64 = 1e-9;

/// A learner in the online protocol: it commits to an action, then sees the loss.
pub trait OnlineLearner {
    /// Starts the next round and returns the action played in it.
    fn act(&mut self) -> Result<Point>;

    /// Reveals the loss of the round opened by the last `act`.
    fn observe(&mut self, loss: &dyn LossFunction) -> Result<()>;

    /// Sub-learners taking part in the round opened by the last `act`.
    fn experts(&self) -> Vec<ExpertSnapshot> {
        Vec::new()
    }

    fn active_experts(&self) -> usize {
        self.experts().len().max(1)
    }

    /// One full round: act, then observe.
    fn round(&mut self, loss: &dyn LossFunction) -> Result<Point> {
        let w = self.act()?;
        self.observe(loss)?;
        Ok(w)
    }
}

/// Identifies an expert inside a meta-algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExpertId {
    /// Interval-bound expert of AOD / AOA.
    Interval(Interval),
    /// `i`-th step size (0-based) of an Ader grid.
    StepSize(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpertSnapshot {
    pub id: ExpertId,
    pub action: Point,
    pub weight: f64,
}

/// Everything recorded about one round of play.
#[derive(Debug, Clone)]
pub struct RoundRecord {
    pub action: Point,
    pub loss_value: f64,
    pub loss: Loss,
    pub minimizer: Option<Point>,
    pub comparator: Option<Point>,
    pub experts: Vec<ExpertSnapshot>,
    pub active_experts: usize,
}

/// The record of a complete game; input to every metric.
#[derive(Debug, Clone)]
pub struct RunTrace {
    pub domain: Domain,
    pub lipschitz: f64,
    pub segment_starts: Vec<usize>,
    pub rounds: Vec<RoundRecord>,
}

impl RunTrace {
    pub fn horizon(&self) -> usize {
        self.rounds.len()
    }

    pub fn diameter(&self) -> f64 {
        self.domain.diameter()
    }

    pub fn actions(&self) -> Vec<Point> {
        self.rounds.iter().map(|r| r.action.clone()).collect()
    }

    pub fn loss_values(&self) -> Vec<f64> {
        self.rounds.iter().map(|r| r.loss_value).collect()
    }

    pub fn losses(&self) -> Vec<Loss> {
        self.rounds.iter().map(|r| r.loss.clone()).collect()
    }

    pub fn cumulative_loss(&self) -> f64 {
        self.rounds.iter().map(|r| r.loss_value).sum()
    }

    pub fn minimizers(&self) -> Option<Vec<Point>> {
        self.rounds.iter().map(|r| r.minimizer.clone()).collect()
    }

    pub fn comparators(&self) -> Option<Vec<Point>> {
        self.rounds.iter().map(|r| r.comparator.clone()).collect()
    }

    /// Inclusive 1-based segment ranges.
    pub fn segments(&self) -> Vec<(usize, usize)> {
        segment_ranges(&self.segment_starts, self.horizon())
    }
}

pub(crate) fn segment_ranges(starts: &[usize], horizon: usize) -> Vec<(usize, usize)> {
    starts
        .iter()
        .enumerate()
        .map(|(i, &s)| (s, starts.get(i + 1).map_or(horizon, |next| next - 1)))
        .collect()
}

/// Plays `learner` against `env` for the full horizon.
pub fn run_game(learner: &mut dyn OnlineLearner, env: &Environment) -> Result<RunTrace> {
    let horizon = env.horizon();
    let mut rounds = Vec::with_capacity(horizon);
    for t in 1..=horizon {
        let action = learner.act()?;
        if !action.is_finite() {
            return Err(Error::Numeric(format!("non-finite action at round {t}")));
        }
        let gap = if action.dim() == env.domain().dim() {
            env.domain().distance_to(&action)
        } else {
            f64::INFINITY
        };
        if gap > PROTOCOL_TOLERANCE {
            return Err(Error::Protocol(format!(
                "action at round {t} lies {gap:e} outside the domain"
            )));
        }
        let experts = learner.experts();
        let active_experts = learner.active_experts();
        let loss = env.loss_at(t);
        let loss_value = loss.value(&action);
        learner.observe(loss)?;
        rounds.push(RoundRecord {
            action,
            loss_value,
            loss: loss.clone(),
            minimizer: env.minimizer_at(t).cloned(),
            comparator: env.comparator_at(t).cloned(),
            experts,
            active_experts,
        });
    }
    Ok(RunTrace {
        domain: env.domain().clone(),
        lipschitz: env.lipschitz(),
        segment_starts: env.segment_starts().to_vec(),
        rounds,
    })
}
