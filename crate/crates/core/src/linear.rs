use crate::error::{Error, Result};
use crate::sample::SamplePoint;
use crate::scalar::Scalar;

/// `y = slope * x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFn<T> {
    pub slope: T,
    pub intercept: T,
}

impl<T: Scalar> LinearFn<T> {
    pub fn eval(&self, x: T) -> T {
        self.slope * x + self.intercept
    }
}

/// Line through two samples in point-slope form, anchored at `q`.
pub fn secant_line<T: Scalar>(p: SamplePoint<T>, q: SamplePoint<T>) -> Result<LinearFn<T>> {
    let dx = q.x - p.x;
    if dx == T::zero() {
        return Err(Error::DegenerateNodes {
            x: p.x.to_f64().unwrap_or(f64::NAN),
        });
    }
    let slope = (q.y - p.y) / dx;
    Ok(LinearFn {
        slope,
        intercept: q.y - slope * q.x,
    })
}
