//! Ordered samples of a function or of measured execution times.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// One `(x, y)` observation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplePoint<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> SamplePoint<T> {
    pub fn new(x: T, y: T) -> Self {
        SamplePoint { x, y }
    }
}

impl<T: Scalar> From<(T, T)> for SamplePoint<T> {
    fn from((x, y): (T, T)) -> Self {
        SamplePoint { x, y }
    }
}

/// Non-empty list of finite samples with strictly increasing `x`.
///
/// Odd length is not enforced here; [`crate::build_piecewise`] checks it so
/// that files with an even row count still load and fail at model-build time.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSeries<T> {
    points: Vec<SamplePoint<T>>,
    label: String,
}

impl<T: Scalar> SampleSeries<T> {
    pub fn new(points: Vec<SamplePoint<T>>) -> Result<Self> {
        Self::with_label(points, String::new())
    }

    pub fn with_label(points: Vec<SamplePoint<T>>, label: impl Into<String>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::TooFewPoints { len: 0, min: 1 });
        }
        for (i, p) in points.iter().enumerate() {
            if !p.x.is_finite() || !p.y.is_finite() {
                return Err(Error::NonFinite { index: i });
            }
            if i > 0 && p.x <= points[i - 1].x {
                return Err(Error::NonMonotonicX { index: i });
            }
        }
        Ok(SampleSeries {
            points,
            label: label.into(),
        })
    }

    /// Samples `f` at each of `xs`.
    pub fn from_fn(xs: &[T], f: impl Fn(T) -> T) -> Result<Self> {
        Self::new(xs.iter().map(|&x| SamplePoint::new(x, f(x))).collect())
    }

    pub fn from_pairs(pairs: &[(T, T)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&p| p.into()).collect())
    }

    pub fn points(&self) -> &[SamplePoint<T>] {
        &self.points
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn set_label(&mut self, label: impl Into<String>) {
        self.label = label.into();
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn xs(&self) -> impl Iterator<Item = T> + '_ {
        self.points.iter().map(|p| p.x)
    }

    pub fn ys(&self) -> impl Iterator<Item = T> + '_ {
        self.points.iter().map(|p| p.y)
    }

    pub fn first_x(&self) -> T {
        self.points[0].x
    }

    pub fn last_x(&self) -> T {
        self.points[self.points.len() - 1].x
    }

    /// Copy without the final point.
    pub fn without_last(&self) -> Result<Self> {
        let mut points = self.points.clone();
        points.pop();
        Self::with_label(points, self.label.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_nan() {
        let dup = SampleSeries::from_pairs(&[(1.0, 2.0), (1.0, 3.0)]);
        assert_eq!(dup.unwrap_err(), Error::NonMonotonicX { index: 1 });
        let nan = SampleSeries::from_pairs(&[(1.0, f64::NAN)]);
        assert_eq!(nan.unwrap_err(), Error::NonFinite { index: 0 });
        assert!(SampleSeries::<f64>::new(vec![]).is_err());
    }

    #[test]
    fn even_lengths_load() {
        let s = SampleSeries::from_pairs(&[(1.0f32, 2.0), (2.0, 3.0)]).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.without_last().unwrap().len(), 1);
    }
}
