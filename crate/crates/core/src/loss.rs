use crate::domain::Domain;
use crate::error::{argument, Result};
use crate::point::Point;

/// First-order oracle for a convex per-round loss.
pub trait LossFunction {
    fn value(&self, w: &Point) -> f64;
    /// A (sub)gradient at `w`.
    fn gradient(&self, w: &Point) -> Point;
    /// Upper bound `G` on the gradient norm over the domain.
    fn lipschitz(&self) -> f64;
}

/// The closed-form loss families used by the shipped environments.
#[derive(Debug, Clone, PartialEq)]
pub enum Loss {
    /// `||w - target||_2 / scale`
    Distance { target: Point, scale: f64 },
    /// `<slope, w> + offset`
    Linear { slope: Point, offset: f64 },
}

impl Loss {
    pub fn distance(target: Point, scale: f64) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(argument(format!("distance scale must be positive, got {scale}")));
        }
        Ok(Loss::Distance { target, scale })
    }

    pub fn linear(slope: Point, offset: f64) -> Result<Self> {
        if !offset.is_finite() {
            return Err(argument("linear offset must be finite"));
        }
        Ok(Loss::Linear { slope, offset })
    }

    /// `(<g, w> + |g| D) / (2 |g| D)`, which lies in `[0, 1]` on any domain of
    /// diameter `D` containing the origin.
    pub fn normalized_linear(direction: &Point, diameter: f64) -> Result<Self> {
        let g = direction.norm();
        if !(g > 0.0 && diameter > 0.0) {
            return Err(argument("normalized linear loss needs a nonzero direction and positive diameter"));
        }
        Ok(Loss::Linear {
            slope: direction.scaled(1.0 / (2.0 * g * diameter)),
            offset: 0.5,
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            Loss::Distance { target, .. } => target.dim(),
            Loss::Linear { slope, .. } => slope.dim(),
        }
    }

    /// Exact minimizer over `domain`.
    pub fn minimizer(&self, domain: &Domain) -> Point {
        match self {
            Loss::Distance { target, .. } => domain.project(target),
            Loss::Linear { slope, .. } => linear_minimizer(slope, domain),
        }
    }
}

/// Minimizer of `<slope, w>` over the domain; zero slope components map to
/// the coordinate closest to the origin.
pub(crate) fn linear_minimizer(slope: &Point, domain: &Domain) -> Point {
    match domain {
        Domain::Box { lower, upper } => Point::from_vec_unchecked(
            slope
                .coords()
                .iter()
                .zip(lower.iter().zip(upper))
                .map(|(a, (lo, hi))| {
                    if *a > 0.0 {
                        *lo
                    } else if *a < 0.0 {
                        *hi
                    } else {
                        0.0
                    }
                })
                .collect(),
        ),
        Domain::Ball { radius, dim } => {
            let n = slope.norm();
            if n == 0.0 {
                Point::zeros(*dim)
            } else {
                slope.scaled(-radius / n)
            }
        }
    }
}

impl LossFunction for Loss {
    fn value(&self, w: &Point) -> f64 {
        match self {
            Loss::Distance { target, scale } => w.distance(target) / scale,
            Loss::Linear { slope, offset } => slope.dot(w) + offset,
        }
    }

    fn gradient(&self, w: &Point) -> Point {
        match self {
            Loss::Distance { target, scale } => {
                let diff = w.sub(target);
                let n = diff.norm();
                // 0 is a subgradient at the kink
                if n == 0.0 {
                    Point::zeros(w.dim())
                } else {
                    // divide rather than multiply by 1/n so 1-D gradients are exactly +-1
                    Point::from_vec_unchecked(diff.coords().iter().map(|c| c / n / scale).collect())
                }
            }
            Loss::Linear { slope, .. } => slope.clone(),
        }
    }

    fn lipschitz(&self) -> f64 {
        match self {
            Loss::Distance { scale, .. } => 1.0 / scale,
            Loss::Linear { slope, .. } => slope.norm(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn distance_subgradient_is_zero_at_target() {
        let f = Loss::distance(Point::scalar(0.3), 1.0).unwrap();
        assert_eq!(f.gradient(&Point::scalar(0.3)), Point::scalar(0.0));
        assert_eq!(f.gradient(&Point::scalar(0.1)), Point::scalar(-1.0));
        let f = Loss::distance(Point::scalar(0.25), 1.0).unwrap();
        assert_eq!(f.gradient(&Point::scalar(0.5)), Point::scalar(1.0));
        assert_eq!(f.gradient(&Point::scalar(0.0)), Point::scalar(-1.0));
        assert_eq!(f.value(&Point::scalar(0.25)), 0.0);
    }

    #[test]
    fn linear_minimizers() {
        let d = Domain::interval(0.0, 1.0).unwrap();
        let up = Loss::linear(Point::scalar(1.0), 0.0).unwrap();
        let down = Loss::linear(Point::scalar(-1.0), 1.0).unwrap();
        assert_eq!(up.minimizer(&d), Point::scalar(0.0));
        assert_eq!(down.minimizer(&d), Point::scalar(1.0));
        let ball = Domain::ball(2, 0.5).unwrap();
        let f = Loss::normalized_linear(&Point::new(vec![0.0, 2.0]).unwrap(), 1.0).unwrap();
        assert_eq!(f.minimizer(&ball), Point::new(vec![0.0, -0.5]).unwrap());
        // the ball reaches only half the diameter from the origin
        assert_eq!(f.value(&f.minimizer(&ball)), 0.25);
    }

    fn ball_point() -> impl Strategy<Value = Point> {
        proptest::collection::vec(-1.0f64..1.0, 3)
            .prop_map(|v| Domain::ball(3, 0.75).unwrap().project(&Point::new(v).unwrap()))
    }

    proptest! {
        // values in [0,1], gradient bounded by G, first-order convexity
        #[test]
        fn shipped_losses_satisfy_assumptions(
            g in proptest::collection::vec(-1.0f64..1.0, 3),
            theta in ball_point(),
            x in ball_point(),
            y in ball_point(),
        ) {
            prop_assume!(g.iter().map(|c| c * c).sum::<f64>() > 1e-6);
            let domain = Domain::ball(3, 0.75).unwrap();
            let diam = domain.diameter();
            let losses = [
                Loss::normalized_linear(&Point::new(g).unwrap(), diam).unwrap(),
                Loss::distance(theta, diam).unwrap(),
            ];
            for f in &losses {
                for w in [&x, &y] {
                    let v = f.value(w);
                    prop_assert!((0.0..=1.0).contains(&v));
                    prop_assert!(f.gradient(w).norm() <= f.lipschitz() + 1e-12);
                }
                let lower = f.value(&x) + f.gradient(&x).dot(&y.sub(&x));
                prop_assert!(f.value(&y) >= lower - 1e-9);
            }
        }
    }
}
