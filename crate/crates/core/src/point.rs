use crate::error::{argument, Error, Result};

/// A point of the feasible set, stored as a dense coordinate vector.
///
/// Every coordinate is finite; constructors reject NaN and infinities.
#[derive(Debug, Clone, PartialEq)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(argument("a point needs at least one coordinate"));
        }
        if let Some(bad) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::Numeric(format!("non-finite coordinate {bad}")));
        }
        Ok(Self(coords))
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be at least 1");
        Self(vec![0.0; dim])
    }

    /// One-dimensional point.
    pub fn scalar(x: f64) -> Self {
        assert!(x.is_finite(), "non-finite scalar {x}");
        Self(vec![x])
    }

    pub(crate) fn from_vec_unchecked(coords: Vec<f64>) -> Self {
        debug_assert!(!coords.is_empty());
        Self(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    pub fn dot(&self, other: &Point) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// Euclidean norm. In one dimension this is the exact absolute value.
    pub fn norm(&self) -> f64 {
        match self.0.as_slice() {
            [x] => x.abs(),
            cs => cs.iter().map(|c| c * c).sum::<f64>().sqrt(),
        }
    }

    pub fn norm_squared(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum()
    }

    pub fn sub(&self, other: &Point) -> Point {
        debug_assert_eq!(self.dim(), other.dim());
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scaled(&self, factor: f64) -> Point {
        Point(self.0.iter().map(|c| c * factor).collect())
    }

    /// `self + factor * other`
    pub fn add_scaled(&self, factor: f64, other: &Point) -> Point {
        debug_assert_eq!(self.dim(), other.dim());
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a + factor * b).collect())
    }

    pub fn distance(&self, other: &Point) -> f64 {
        self.sub(other).norm()
    }
}

impl From<f64> for Point {
    fn from(x: f64) -> Self {
        Point::scalar(x)
    }
}

/// Total Euclidean movement `sum ||u_{t+1} - u_t||` of a sequence.
pub fn path_length(points: &[Point]) -> f64 {
    points.windows(2).map(|w| w[1].distance(&w[0])).sum()
}

/// Squared path-length `sum ||u_{t+1} - u_t||^2`.
pub fn squared_path_length(points: &[Point]) -> f64 {
    points.windows(2).map(|w| w[1].sub(&w[0]).norm_squared()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite() {
        assert!(Point::new(vec![0.0, f64::NAN]).is_err());
        assert!(Point::new(vec![f64::INFINITY]).is_err());
        assert!(Point::new(vec![]).is_err());
    }

    #[test]
    fn norm_is_exact_in_one_dimension() {
        let x = 0.1 + 0.2;
        assert_eq!(Point::scalar(-x).norm(), x);
        assert_eq!(Point::new(vec![3.0, 4.0]).unwrap().norm(), 5.0);
    }

    #[test]
    fn path_lengths() {
        let u: Vec<Point> = [0.0, 1.0, 0.0].into_iter().map(Point::scalar).collect();
        assert_eq!(path_length(&u), 2.0);
        assert_eq!(squared_path_length(&u), 2.0);
        let constant = vec![Point::scalar(0.4); 5];
        assert_eq!(path_length(&constant), 0.0);
        assert_eq!(squared_path_length(&constant), 0.0);
        assert_eq!(path_length(&constant[..1]), 0.0);
    }
}
