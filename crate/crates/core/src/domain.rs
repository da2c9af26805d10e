use crate::error::{argument, Result};
use crate::point::Point;

/// Convex feasible set with a Euclidean projection oracle.
///
/// Both shipped shapes contain the origin and have a unique projection.
#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    /// Axis-aligned box `prod_i [lower_i, upper_i]`.
    Box { lower: Vec<f64>, upper: Vec<f64> },
    /// Euclidean ball of the given radius centred at the origin.
    Ball { radius: f64, dim: usize },
}

impl Domain {
    /// One-dimensional interval `[lower, upper]`.
    pub fn interval(lower: f64, upper: f64) -> Result<Self> {
        Self::boxed(vec![lower], vec![upper])
    }

    /// Hypercube `[lower, upper]^dim`.
    pub fn cube(dim: usize, lower: f64, upper: f64) -> Result<Self> {
        Self::boxed(vec![lower; dim], vec![upper; dim])
    }

    pub fn boxed(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() || lower.len() != upper.len() {
            return Err(argument("box bounds must be non-empty and of equal length"));
        }
        for (lo, hi) in lower.iter().zip(&upper) {
            if !(lo.is_finite() && hi.is_finite()) {
                return Err(argument("box bounds must be finite"));
            }
            if !(*lo <= 0.0 && 0.0 <= *hi) {
                return Err(argument(format!("box [{lo}, {hi}] does not contain the origin")));
            }
        }
        let domain = Domain::Box { lower, upper };
        if domain.diameter() <= 0.0 {
            return Err(argument("box has zero diameter"));
        }
        Ok(domain)
    }

    pub fn ball(dim: usize, radius: f64) -> Result<Self> {
        if dim == 0 {
            return Err(argument("ball dimension must be at least 1"));
        }
        if !(radius.is_finite() && radius > 0.0) {
            return Err(argument(format!("ball radius must be positive, got {radius}")));
        }
        Ok(Domain::Ball { radius, dim })
    }

    pub fn dim(&self) -> usize {
        match self {
            Domain::Box { lower, .. } => lower.len(),
            Domain::Ball { dim, .. } => *dim,
        }
    }

    /// Largest distance between two points of the set.
    pub fn diameter(&self) -> f64 {
        match self {
            Domain::Box { lower, upper } => {
                if lower.len() == 1 {
                    upper[0] - lower[0]
                } else {
                    lower
                        .iter()
                        .zip(upper)
                        .map(|(lo, hi)| (hi - lo) * (hi - lo))
                        .sum::<f64>()
                        .sqrt()
                }
            }
            Domain::Ball { radius, .. } => 2.0 * radius,
        }
    }

    /// Nearest point of the set in Euclidean distance.
    pub fn project(&self, x: &Point) -> Point {
        debug_assert_eq!(x.dim(), self.dim());
        match self {
            Domain::Box { lower, upper } => Point::from_vec_unchecked(
                x.coords()
                    .iter()
                    .zip(lower.iter().zip(upper))
                    .map(|(c, (lo, hi))| c.clamp(*lo, *hi))
                    .collect(),
            ),
            Domain::Ball { radius, .. } => {
                let norm = x.norm();
                if norm > *radius {
                    x.scaled(radius / norm)
                } else {
                    x.clone()
                }
            }
        }
    }

    pub fn distance_to(&self, x: &Point) -> f64 {
        x.distance(&self.project(x))
    }

    pub fn contains(&self, x: &Point, tolerance: f64) -> bool {
        x.dim() == self.dim() && self.distance_to(x) <= tolerance
    }

    pub fn origin(&self) -> Point {
        Point::zeros(self.dim())
    }

    /// Extreme points used when scanning for suprema: box corners, or the
    /// axis endpoints of a ball. Corners are only enumerated up to 12 dims.
    pub(crate) fn probe_points(&self) -> Vec<Point> {
        match self {
            Domain::Box { lower, upper } => {
                let d = lower.len();
                if d > 12 {
                    return vec![
                        Point::from_vec_unchecked(lower.clone()),
                        Point::from_vec_unchecked(upper.clone()),
                    ];
                }
                (0..1usize << d)
                    .map(|mask| {
                        Point::from_vec_unchecked(
                            (0..d)
                                .map(|i| if mask >> i & 1 == 1 { upper[i] } else { lower[i] })
                                .collect(),
                        )
                    })
                    .collect()
            }
            Domain::Ball { radius, dim } => (0..*dim)
                .flat_map(|i| {
                    [*radius, -*radius].map(|r| {
                        let mut c = vec![0.0; *dim];
                        c[i] = r;
                        Point::from_vec_unchecked(c)
                    })
                })
                .collect(),
        }
    }
}
