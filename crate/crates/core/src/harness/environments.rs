//! Builders for the shipped synthetic environments.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::config::EnvironmentSpec;
use crate::domain::Domain;
use crate::env::Environment;
use crate::error::{Error, Result};
use crate::loss::Loss;
use crate::point::Point;

/// Radius of the ball used by the linear environment, so that `D = 1`.
const LINEAR_RADIUS: f64 = 0.5;

/// Materializes `horizon` rounds of the environment described by `spec`.
pub fn build_environment(spec: &EnvironmentSpec, horizon: usize, seed: u64) -> Result<Environment> {
    if horizon == 0 {
        return Err(Error::Config("horizon must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match spec {
        EnvironmentSpec::Stationary { theta } => absolute(&vec![*theta; horizon], vec![1], seed),
        EnvironmentSpec::Abrupt { segments, change_points, levels } => {
            let starts = match change_points {
                Some(points) => {
                    let mut starts = points.clone();
                    if !starts.contains(&1) {
                        starts.push(1);
                    }
                    starts.sort_unstable();
                    starts.dedup();
                    starts
                }
                None => equal_segments(*segments, horizon)?,
            };
            if starts.last().is_some_and(|&s| s > horizon) {
                return Err(Error::Config(format!("change point beyond horizon {horizon}")));
            }
            let levels = match levels {
                Some(levels) if levels.len() == starts.len() => levels.clone(),
                Some(levels) => {
                    return Err(Error::Config(format!(
                        "{} levels given for {} segments",
                        levels.len(),
                        starts.len()
                    )))
                }
                None => (0..starts.len()).map(|_| rng.random::<f64>()).collect(),
            };
            let mut thetas = Vec::with_capacity(horizon);
            for t in 1..=horizon {
                let segment = starts.partition_point(|&s| s <= t) - 1;
                thetas.push(levels[segment]);
            }
            absolute(&thetas, starts, seed)
        }
        EnvironmentSpec::Drift { segments, cycles } => {
            let thetas: Vec<f64> = (1..=horizon)
                .map(|t| (1.0 + (2.0 * PI * cycles * t as f64 / horizon as f64).sin()) / 2.0)
                .collect();
            absolute(&thetas, equal_segments(*segments, horizon)?, seed)
        }
        EnvironmentSpec::AdversarialLinear { dim, segments } => {
            let domain = Domain::ball(*dim, LINEAR_RADIUS).map_err(config)?;
            let diameter = domain.diameter();
            let mut losses = Vec::with_capacity(horizon);
            while losses.len() < horizon {
                let g: Vec<f64> = (0..*dim).map(|_| StandardNormal.sample(&mut rng)).collect();
                let g = Point::new(g).map_err(config)?;
                if g.norm() > 0.0 {
                    losses.push(Loss::normalized_linear(&g.scaled(1.0 / g.norm()), diameter)?);
                }
            }
            Environment::new(domain, losses, seed)?.with_segments(equal_segments(*segments, horizon)?)
        }
    }
}

fn config(e: Error) -> Error {
    Error::Config(e.to_string())
}

/// Starts `1 + floor(j T / m)` for `j = 0..m`.
fn equal_segments(m: usize, horizon: usize) -> Result<Vec<usize>> {
    if m == 0 || m > horizon {
        return Err(Error::Config(format!("segment count {m} must lie in [1, {horizon}]")));
    }
    Ok((0..m).map(|j| 1 + j * horizon / m).collect())
}

fn absolute(thetas: &[f64], starts: Vec<usize>, seed: u64) -> Result<Environment> {
    let domain = Domain::interval(0.0, 1.0)?;
    let losses = thetas
        .iter()
        .map(|&theta| {
            if !theta.is_finite() {
                return Err(Error::Config(format!("target {theta} is not finite")));
            }
            Loss::distance(Point::scalar(theta), 1.0)
        })
        .collect::<Result<Vec<_>>>()?;
    Environment::new(domain, losses, seed)?.with_segments(starts)
}
