//! Ader: OGD experts over a geometric grid of step sizes, mixed by Hedge.

use crate::anh::{normalize_log_weights, weighted_average};
use crate::domain::Domain;
use crate::error::{argument, Error, Result};
use crate::game::{ExpertId, ExpertSnapshot, OnlineLearner};
use crate::loss::LossFunction;
use crate::ogd::OgdState;
use crate::point::Point;

/// Ascending step sizes `eta_i = 2^{i-1} (D/G) sqrt(7 / 2T)`, `i = 1..N`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepSizeGrid {
    etas: Vec<f64>,
}

impl StepSizeGrid {
    pub fn etas(&self) -> &[f64] {
        &self.etas
    }

    pub fn len(&self) -> usize {
        self.etas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.etas.is_empty()
    }
}

/// Grid size `N = ceil(log2(1 + 4T/7) / 2) + 1`.
pub fn grid_size(horizon: usize) -> usize {
    (0.5 * (1.0 + 4.0 * horizon as f64 / 7.0).log2()).ceil() as usize + 1
}

pub fn build_grid(diameter: f64, lipschitz: f64, horizon: usize) -> Result<StepSizeGrid> {
    if !(diameter > 0.0 && lipschitz > 0.0) || horizon == 0 {
        return Err(argument(format!(
            "grid needs D, G > 0 and T >= 1 (got D={diameter}, G={lipschitz}, T={horizon})"
        )));
    }
    let base = diameter / lipschitz * (7.0 / (2.0 * horizon as f64)).sqrt();
    let etas = (0..grid_size(horizon)).map(|i| base * 2f64.powi(i as i32)).collect();
    Ok(StepSizeGrid { etas })
}

/// Nonuniform prior `p_i = (1 + 1/N) / (i (i + 1))`, which sums to one.
pub fn hedge_prior(n: usize) -> Vec<f64> {
    let c = 1.0 + 1.0 / n as f64;
    (1..=n).map(|i| c / (i * (i + 1)) as f64).collect()
}

/// One exponential-weights step `p_i <- p_i exp(-alpha l_i) / Z`.
pub fn hedge_update(weights: &[f64], losses: &[f64], alpha: f64) -> Result<Vec<f64>> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(argument(format!("learning rate must be positive, got {alpha}")));
    }
    if weights.len() != losses.len() || weights.is_empty() {
        return Err(argument("weights and losses must be non-empty and of equal length"));
    }
    if weights.iter().any(|p| p.is_nan() || *p < 0.0) {
        return Err(argument("weights must be nonnegative"));
    }
    let logs: Vec<f64> = weights
        .iter()
        .zip(losses)
        .map(|(p, l)| p.ln() - alpha * l)
        .collect();
    normalize_log_weights(&logs)
}

/// Ader over a known horizon.
#[derive(Debug, Clone)]
pub struct Ader {
    horizon: usize,
    played: usize,
    grid: StepSizeGrid,
    experts: Vec<OgdState>,
    log_weights: Vec<f64>,
    weights: Vec<f64>,
    alpha: f64,
    in_round: bool,
}

impl Ader {
    /// Every expert starts at the origin.
    pub fn new(domain: Domain, lipschitz: f64, horizon: usize) -> Result<Self> {
        let grid = build_grid(domain.diameter(), lipschitz, horizon)?;
        let experts = grid
            .etas()
            .iter()
            .map(|&eta| OgdState::new(domain.clone(), eta))
            .collect::<Result<Vec<_>>>()?;
        let weights = hedge_prior(grid.len());
        let log_weights = weights.iter().map(|p| p.ln()).collect();
        Ok(Self {
            horizon,
            played: 0,
            grid,
            experts,
            log_weights,
            weights,
            alpha: (8.0 / horizon as f64).sqrt(),
            in_round: false,
        })
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn grid(&self) -> &StepSizeGrid {
        &self.grid
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Current Hedge distribution over step sizes.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn experts(&self) -> &[OgdState] {
        &self.experts
    }

    /// Rounds fully played so far.
    pub fn rounds_played(&self) -> usize {
        self.played
    }

    fn combined(&self) -> Result<Point> {
        weighted_average(self.weights.iter().copied().zip(self.experts.iter().map(OgdState::current)))
    }
}

/// Functional form of one Ader round: returns the action and the next state.
pub fn ader_round(state: &Ader, loss: &dyn LossFunction) -> Result<(Point, Ader)> {
    let mut next = state.clone();
    let w = next.round(loss)?;
    Ok((w, next))
}

impl OnlineLearner for Ader {
    fn act(&mut self) -> Result<Point> {
        if self.played >= self.horizon {
            return Err(Error::Protocol(format!(
                "Ader was configured for {} rounds",
                self.horizon
            )));
        }
        self.in_round = true;
        self.combined()
    }

    fn observe(&mut self, loss: &dyn LossFunction) -> Result<()> {
        if !self.in_round {
            return Err(Error::Protocol("observe called before act".into()));
        }
        for (expert, log_w) in self.experts.iter_mut().zip(&mut self.log_weights) {
            *log_w -= self.alpha * loss.value(expert.current());
            expert.step_in_place(loss)?;
        }
        self.weights = normalize_log_weights(&self.log_weights)?;
        self.played += 1;
        self.in_round = false;
        Ok(())
    }

    fn experts(&self) -> Vec<ExpertSnapshot> {
        self.experts
            .iter()
            .zip(&self.weights)
            .enumerate()
            .map(|(i, (e, p))| ExpertSnapshot {
                id: ExpertId::StepSize(i),
                action: e.current().clone(),
                weight: *p,
            })
            .collect()
    }

    fn active_experts(&self) -> usize {
        self.experts.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loss::Loss;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn grid_examples() {
        let g = build_grid(1.0, 1.0, 7).unwrap();
        assert_eq!(g.len(), 3);
        let expected = [std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::SQRT_2, 2.0 * std::f64::consts::SQRT_2];
        for (a, b) in g.etas().iter().zip(expected) {
            assert!(close(*a, b, 1e-15));
        }
        assert_eq!(build_grid(1.0, 1.0, 100).unwrap().len(), 4);
        let doubled = build_grid(2.0, 1.0, 7).unwrap();
        for (a, b) in doubled.etas().iter().zip(g.etas()) {
            assert_eq!(*a, 2.0 * b);
        }
        assert!(build_grid(0.0, 1.0, 7).is_err());
        assert!(build_grid(1.0, 1.0, 0).is_err());
    }

    #[test]
    fn hedge_examples() {
        let p = hedge_update(&[0.2, 0.3, 0.5], &[0.4; 3], 1.7).unwrap();
        for (a, b) in p.iter().zip([0.2, 0.3, 0.5]) {
            assert!(close(*a, b, 1e-15));
        }
        let p = hedge_update(&[0.75, 0.25], &[0.0, 1.0], 2.0).unwrap();
        assert!(close(p[0], 0.956_835_467_020_003_7, 1e-12));
        assert!(close(p[1], 0.043_164_532_979_996_26, 1e-12));
        assert_eq!(hedge_update(&[1.0, 0.0], &[0.9, 0.1], 3.0).unwrap(), vec![1.0, 0.0]);
        assert!(hedge_update(&[0.5, 0.5], &[0.0, 1.0], 0.0).is_err());
    }

    #[test]
    fn prior_sums_to_one() {
        for n in 1..40 {
            assert!(close(hedge_prior(n).iter().sum::<f64>(), 1.0, 1e-12));
        }
        assert_eq!(hedge_prior(2), vec![0.75, 0.25]);
    }

    #[test]
    fn first_action_is_origin_and_horizon_is_enforced() {
        let d = Domain::interval(0.0, 1.0).unwrap();
        let f = Loss::distance(Point::scalar(0.8), 1.0).unwrap();
        let ader = Ader::new(d, 1.0, 2).unwrap();
        let (w, ader) = ader_round(&ader, &f).unwrap();
        assert_eq!(w, Point::scalar(0.0));
        let (_, mut ader) = ader_round(&ader, &f).unwrap();
        assert!(matches!(ader.act(), Err(Error::Protocol(_))));
    }

    #[test]
    fn action_is_weighted_average_of_experts() {
        let d = Domain::interval(0.0, 1.0).unwrap();
        let mut ader = Ader::new(d.clone(), 1.0, 1).unwrap();
        assert_eq!(ader.grid().len(), 2);
        ader.experts = vec![
            OgdState::starting_at(d.clone(), 0.1, Point::scalar(0.2)).unwrap(),
            OgdState::starting_at(d, 0.2, Point::scalar(0.6)).unwrap(),
        ];
        assert_eq!(ader.weights(), &[0.75, 0.25]);
        let w = ader.act().unwrap();
        assert!(close(w.coords()[0], 0.3, 1e-15));
    }

    proptest! {
        #[test]
        fn weights_stay_positive_and_normalized(thetas in proptest::collection::vec(0.0f64..1.0, 1..200)) {
            let d = Domain::interval(0.0, 1.0).unwrap();
            let mut ader = Ader::new(d, 1.0, thetas.len()).unwrap();
            for th in thetas {
                let f = Loss::distance(Point::scalar(th), 1.0).unwrap();
                ader.round(&f).unwrap();
                prop_assert!((ader.weights().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
                prop_assert!(ader.weights().iter().all(|p| *p > 0.0));
            }
        }
    }
}
