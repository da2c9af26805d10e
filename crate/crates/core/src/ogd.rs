//! Projected online gradient descent.

use crate::domain::Domain;
use crate::error::{argument, Error, Result};
use crate::game::OnlineLearner;
use crate::loss::LossFunction;
use crate::point::Point;

/// `D / (G sqrt(horizon))`, the step size that balances the static regret
/// bound `D^2 / (2 eta) + eta T G^2 / 2` at `DG sqrt(T)`.
pub fn static_step_size(diameter: f64, lipschitz: f64, horizon: usize) -> Result<f64> {
    if !(diameter > 0.0 && lipschitz > 0.0) || horizon == 0 {
        return Err(argument(format!(
            "step size needs D, G > 0 and horizon >= 1 (got D={diameter}, G={lipschitz}, T={horizon})"
        )));
    }
    Ok(diameter / (lipschitz * (horizon as f64).sqrt()))
}

/// State of one OGD run: the current iterate and its fixed step size.
#[derive(Debug, Clone, PartialEq)]
pub struct OgdState {
    current: Point,
    step_size: f64,
    domain: Domain,
}

impl OgdState {
    /// Starts at the origin.
    pub fn new(domain: Domain, step_size: f64) -> Result<Self> {
        let origin = domain.origin();
        Self::starting_at(domain, step_size, origin)
    }

    /// Starts at `initial`, projected onto the domain.
    pub fn starting_at(domain: Domain, step_size: f64, initial: Point) -> Result<Self> {
        if !(step_size.is_finite() && step_size > 0.0) {
            return Err(argument(format!("step size must be positive, got {step_size}")));
        }
        if initial.dim() != domain.dim() {
            return Err(argument("initial point has the wrong dimension"));
        }
        let current = domain.project(&initial);
        Ok(Self { current, step_size, domain })
    }

    /// Same iterate, new step size. The iterate is kept bit-for-bit; it was
    /// produced by a projection and re-projecting may move it by an ulp.
    pub fn with_step_size(&self, step_size: f64) -> Result<Self> {
        if !(step_size.is_finite() && step_size > 0.0) {
            return Err(argument(format!("step size must be positive, got {step_size}")));
        }
        Ok(Self { current: self.current.clone(), step_size, domain: self.domain.clone() })
    }

    pub fn current(&self) -> &Point {
        &self.current
    }

    pub fn step_size(&self) -> f64 {
        self.step_size
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    /// `Pi[w - eta grad f(w)]`, returned as a fresh state.
    pub fn step(&self, loss: &dyn LossFunction) -> Result<OgdState> {
        let grad = loss.gradient(&self.current);
        if !grad.is_finite() {
            return Err(Error::Numeric("non-finite gradient".into()));
        }
        let next = self.domain.project(&self.current.add_scaled(-self.step_size, &grad));
        Ok(Self {
            current: next,
            step_size: self.step_size,
            domain: self.domain.clone(),
        })
    }

    pub(crate) fn step_in_place(&mut self, loss: &dyn LossFunction) -> Result<()> {
        *self = self.step(loss)?;
        Ok(())
    }
}

/// Standalone OGD learner.
#[derive(Debug, Clone)]
pub struct Ogd {
    state: OgdState,
}

impl Ogd {
    pub fn new(domain: Domain, step_size: f64) -> Result<Self> {
        Ok(Self { state: OgdState::new(domain, step_size)? })
    }

    /// OGD tuned with [`static_step_size`] for a known horizon.
    pub fn tuned(domain: Domain, lipschitz: f64, horizon: usize) -> Result<Self> {
        let eta = static_step_size(domain.diameter(), lipschitz, horizon)?;
        Self::new(domain, eta)
    }

    pub fn state(&self) -> &OgdState {
        &self.state
    }
}

impl OnlineLearner for Ogd {
    fn act(&mut self) -> Result<Point> {
        Ok(self.state.current.clone())
    }

    fn observe(&mut self, loss: &dyn LossFunction) -> Result<()> {
        self.state.step_in_place(loss)
    }
}
