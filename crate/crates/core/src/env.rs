use crate::domain::Domain;
use crate::error::{argument, Result};
use crate::loss::{Loss, LossFunction};
use crate::point::Point;

/// A fully materialized loss sequence over a fixed horizon.
///
/// Losses are generated up front (see `harness::build_environment`), so an
/// environment is deterministic given its seed and can be replayed freely.
#[derive(Debug, Clone)]
pub struct Environment {
    domain: Domain,
    losses: Vec<Loss>,
    minimizers: Vec<Point>,
    comparators: Option<Vec<Point>>,
    segment_starts: Vec<usize>,
    lipschitz: f64,
    seed: u64,
}

impl Environment {
    pub fn new(domain: Domain, losses: Vec<Loss>, seed: u64) -> Result<Self> {
        if losses.is_empty() {
            return Err(argument("environment horizon must be at least 1"));
        }
        if let Some(bad) = losses.iter().position(|f| f.dim() != domain.dim()) {
            return Err(argument(format!(
                "loss at round {} has dimension {}, domain has {}",
                bad + 1,
                losses[bad].dim(),
                domain.dim()
            )));
        }
        let lipschitz = losses.iter().map(|f| f.lipschitz()).fold(0.0, f64::max);
        let minimizers = losses.iter().map(|f| f.minimizer(&domain)).collect();
        Ok(Self {
            domain,
            losses,
            minimizers,
            comparators: None,
            segment_starts: vec![1],
            lipschitz,
            seed,
        })
    }

    /// Declares the rounds at which the environment switches regime.
    pub fn with_segments(mut self, mut starts: Vec<usize>) -> Result<Self> {
        starts.sort_unstable();
        starts.dedup();
        if starts.first() != Some(&1) || starts.last().is_some_and(|&s| s > self.horizon()) {
            return Err(argument("segment starts must begin at round 1 and lie within the horizon"));
        }
        self.segment_starts = starts;
        Ok(self)
    }

    /// Attaches an explicit comparator sequence `u_1..u_T`.
    pub fn with_comparators(mut self, comparators: Vec<Point>) -> Result<Self> {
        if comparators.len() != self.horizon() {
            return Err(argument(format!(
                "expected {} comparators, got {}",
                self.horizon(),
                comparators.len()
            )));
        }
        if let Some(t) = comparators.iter().position(|u| !self.domain.contains(u, 1e-9)) {
            return Err(argument(format!("comparator {} lies outside the domain", t + 1)));
        }
        self.comparators = Some(comparators);
        Ok(self)
    }

    /// Replaces the loss of round `t`; used to probe protocol causality.
    pub fn replace_loss(&mut self, t: usize, loss: Loss) -> Result<()> {
        self.check_round(t)?;
        self.minimizers[t - 1] = loss.minimizer(&self.domain);
        self.lipschitz = self.lipschitz.max(loss.lipschitz());
        self.losses[t - 1] = loss;
        Ok(())
    }

    fn check_round(&self, t: usize) -> Result<()> {
        if t == 0 || t > self.horizon() {
            return Err(argument(format!("round {t} outside [1, {}]", self.horizon())));
        }
        Ok(())
    }

    pub fn horizon(&self) -> usize {
        self.losses.len()
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    /// Gradient bound `G` over the whole sequence.
    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Loss of round `t` (1-based).
    pub fn loss_at(&self, t: usize) -> &Loss {
        &self.losses[t - 1]
    }

    pub fn losses(&self) -> &[Loss] {
        &self.losses
    }

    pub fn minimizer_at(&self, t: usize) -> Option<&Point> {
        self.minimizers.get(t.checked_sub(1)?)
    }

    pub fn comparator_at(&self, t: usize) -> Option<&Point> {
        self.comparators.as_ref()?.get(t.checked_sub(1)?)
    }

    pub fn segment_starts(&self) -> &[usize] {
        &self.segment_starts
    }
}
