//! Reference functions that a model is compared against.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::piecewise::{geometric_knots, uniform_knots};
use crate::scalar::Scalar;

/// Callable `G(x)` with the interval on which it is known to be finite.
#[derive(Clone)]
pub struct ReferenceFn<T> {
    name: String,
    domain: (T, T),
    f: Arc<dyn Fn(T) -> T + Send + Sync>,
}

impl<T: Scalar> ReferenceFn<T> {
    pub fn new(
        name: impl Into<String>,
        domain: (T, T),
        f: impl Fn(T) -> T + Send + Sync + 'static,
    ) -> Self {
        ReferenceFn {
            name: name.into(),
            domain,
            f: Arc::new(f),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> (T, T) {
        self.domain
    }

    pub fn eval(&self, x: T) -> T {
        (self.f)(x)
    }

    pub fn covers(&self, lo: T, hi: T) -> bool {
        self.domain.0 <= lo && hi <= self.domain.1
    }
}

impl<T: Scalar> fmt::Debug for ReferenceFn<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ReferenceFn")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .finish()
    }
}

/// How knots are laid out between two bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KnotSpacing {
    Uniform,
    Geometric,
}

impl KnotSpacing {
    pub fn knots<T: Scalar>(self, from: T, to: T, segments: usize) -> Result<Vec<T>> {
        match self {
            KnotSpacing::Uniform => uniform_knots(from, to, segments),
            KnotSpacing::Geometric => geometric_knots(from, to, segments),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            KnotSpacing::Uniform => "uniform",
            KnotSpacing::Geometric => "geometric",
        }
    }
}

impl FromStr for KnotSpacing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(KnotSpacing::Uniform),
            "geometric" => Ok(KnotSpacing::Geometric),
            _ => Err(Error::InvalidArgument(format!("unknown spacing `{s}`"))),
        }
    }
}

/// The four benchmark functions: `log2 x`, `cos(pi x)`, `2^x`, `(x - 1)/x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandardFn {
    Log2,
    CosPiX,
    Exp2,
    Ratio,
}

impl StandardFn {
    pub const ALL: [StandardFn; 4] = [
        StandardFn::Log2,
        StandardFn::CosPiX,
        StandardFn::Exp2,
        StandardFn::Ratio,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StandardFn::Log2 => "log2",
            StandardFn::CosPiX => "cospix",
            StandardFn::Exp2 => "exp2",
            StandardFn::Ratio => "ratio",
        }
    }

    pub fn eval<T: Scalar>(self, x: T) -> T {
        match self {
            StandardFn::Log2 => x.log2(),
            StandardFn::CosPiX => (T::PI() * x).cos(),
            StandardFn::Exp2 => x.exp2(),
            StandardFn::Ratio => (x - T::one()) / x,
        }
    }

    /// Interval, segment count and knot spacing of the benchmark layout.
    pub fn benchmark_layout(self) -> (f64, f64, usize, KnotSpacing) {
        match self {
            StandardFn::Log2 => (8.0, 64.0, 3, KnotSpacing::Geometric),
            StandardFn::CosPiX => (0.0, 1.5, 3, KnotSpacing::Uniform),
            StandardFn::Exp2 => (3.0, 6.0, 3, KnotSpacing::Uniform),
            StandardFn::Ratio => (2.0, 16.0, 3, KnotSpacing::Geometric),
        }
    }

    /// Knot spacing used when none is requested.
    pub fn default_spacing(self) -> KnotSpacing {
        self.benchmark_layout().3
    }

    pub fn natural_domain<T: Scalar>(self) -> (T, T) {
        match self {
            StandardFn::Log2 => (T::min_positive_value(), T::infinity()),
            StandardFn::Ratio => (T::min_positive_value(), T::infinity()),
            StandardFn::CosPiX | StandardFn::Exp2 => (T::neg_infinity(), T::infinity()),
        }
    }

    pub fn reference<T: Scalar>(self) -> ReferenceFn<T> {
        ReferenceFn::new(self.name(), self.natural_domain(), move |x| self.eval(x))
    }
}

impl FromStr for StandardFn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StandardFn::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown function `{s}`")))
    }
}

impl fmt::Display for StandardFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
