//! One blended quadratic over a three-node span.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::lagrange::lagrange_quadratic;
use crate::linear::secant_line;
use crate::sample::SamplePoint;
use crate::scalar::Scalar;

/// How the Lagrange quadratic of a span is blended with a secant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum BlendMode {
    /// The interpolating quadratic alone.
    PureLagrange,
    /// Half quadratic, half secant through the span's last two nodes.
    PaperSecant,
    /// Half quadratic, half chord through the span's outer nodes.
    /// Keeps the piecewise model continuous at every knot.
    #[default]
    EndpointSecant,
}

impl BlendMode {
    pub const ALL: [BlendMode; 3] = [
        BlendMode::PureLagrange,
        BlendMode::PaperSecant,
        BlendMode::EndpointSecant,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BlendMode::PureLagrange => "pure-lagrange",
            BlendMode::PaperSecant => "paper-secant",
            BlendMode::EndpointSecant => "endpoint-secant",
        }
    }

    /// Whether adjacent segments are guaranteed to meet at shared knots.
    pub fn is_continuous(self) -> bool {
        !matches!(self, BlendMode::PaperSecant)
    }
}

impl fmt::Display for BlendMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BlendMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BlendMode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown blend mode `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Concavity {
    Upward,
    Downward,
    Linear,
}

impl fmt::Display for Concavity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Concavity::Upward => "upward",
            Concavity::Downward => "downward",
            Concavity::Linear => "linear",
        })
    }
}

/// `a*x^2 + b*x + c` on `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticSegment<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub lo: T,
    pub hi: T,
    pub node_xs: [T; 3],
    pub mode: BlendMode,
}

/// Builds the blended quadratic for three nodes with strictly increasing `x`.
pub fn build_segment<T: Scalar>(
    p0: SamplePoint<T>,
    p1: SamplePoint<T>,
    p2: SamplePoint<T>,
    mode: BlendMode,
) -> Result<QuadraticSegment<T>> {
    for (i, (l, r)) in [(p0, p1), (p1, p2)].into_iter().enumerate() {
        if l.x == r.x {
            return Err(Error::DegenerateNodes {
                x: l.x.to_f64().unwrap_or(f64::NAN),
            });
        }
        if l.x > r.x {
            return Err(Error::NonMonotonicX { index: i + 1 });
        }
    }
    let (la, lb, lc) = lagrange_quadratic(p0, p1, p2)?;
    let (a, b, c) = match mode {
        BlendMode::PureLagrange => (la, lb, lc),
        BlendMode::PaperSecant | BlendMode::EndpointSecant => {
            let from = if mode == BlendMode::PaperSecant { p1 } else { p0 };
            let line = secant_line(from, p2)?;
            let h = T::half();
            (h * la, h * (lb + line.slope), h * (lc + line.intercept))
        }
    };
    Ok(QuadraticSegment {
        a,
        b,
        c,
        lo: p0.x,
        hi: p2.x,
        node_xs: [p0.x, p1.x, p2.x],
        mode,
    })
}

impl<T: Scalar> QuadraticSegment<T> {
    /// Segment from explicit coefficients; the middle node is the midpoint.
    pub fn from_coeffs(a: T, b: T, c: T, lo: T, hi: T, mode: BlendMode) -> Result<Self> {
        if !(lo < hi) {
            return Err(Error::InvalidArgument(format!(
                "segment bounds must satisfy lo < hi (got {lo}, {hi})"
            )));
        }
        Ok(QuadraticSegment {
            a,
            b,
            c,
            lo,
            hi,
            node_xs: [lo, T::half() * (lo + hi), hi],
            mode,
        })
    }

    pub fn coeffs(&self) -> (T, T, T) {
        (self.a, self.b, self.c)
    }

    pub fn contains(&self, x: T) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn eval(&self, x: T) -> T {
        (self.a * x + self.b) * x + self.c
    }

    pub fn derivative(&self, x: T) -> T {
        T::two() * self.a * x + self.b
    }

    pub fn antiderivative(&self, x: T) -> T {
        let third = T::one() / T::lit(3.0);
        ((self.a * third * x + self.b * T::half()) * x + self.c) * x
    }

    /// Closed-form integral over `[from, to]`, ignoring the segment bounds.
    pub fn integrate(&self, from: T, to: T) -> T {
        self.antiderivative(to) - self.antiderivative(from)
    }

    /// Mean value over `[lo, hi]`.
    pub fn average(&self) -> T {
        self.integrate(self.lo, self.hi) / (self.hi - self.lo)
    }

    /// Sign of `a` with the default linear tolerance.
    pub fn concavity(&self) -> Concavity {
        self.concavity_with_tol(T::LINEAR_TOL)
    }

    /// `|a| <= tol * max(1, |b|, |c|)` counts as linear.
    pub fn concavity_with_tol(&self, tol: T) -> Concavity {
        let scale = T::one().max(self.b.abs()).max(self.c.abs());
        if self.a.abs() <= tol * scale {
            Concavity::Linear
        } else if self.a > T::zero() {
            Concavity::Upward
        } else {
            Concavity::Downward
        }
    }

    /// Input in `(lo, hi)` at which the segment takes its average value.
    ///
    /// Of two admissible roots the smaller is returned; linear segments return
    /// the midpoint.
    pub fn representative_input(&self) -> Result<T> {
        let mid = T::half() * (self.lo + self.hi);
        if self.concavity() == Concavity::Linear {
            return Ok(mid);
        }
        let target = self.average();
        let (a, b, c) = (self.a, self.b, self.c - target);
        let disc = b * b - T::lit(4.0) * a * c;
        let no_root = || Error::NoRootInRange {
            lo: self.lo.to_f64().unwrap_or(f64::NAN),
            hi: self.hi.to_f64().unwrap_or(f64::NAN),
        };
        let slack = T::epsilon() * T::lit(64.0) * (b * b + (T::lit(4.0) * a * c).abs());
        if disc < -slack {
            return Err(no_root());
        }
        let sq = disc.max(T::zero()).sqrt();
        let q = -T::half() * (b + if b < T::zero() { -sq } else { sq });
        let mut roots = Vec::with_capacity(2);
        roots.push(q / a);
        if q != T::zero() {
            roots.push(c / q);
        }
        let delta = roots
            .into_iter()
            .filter(|r| self.lo < *r && *r < self.hi)
            .fold(None, |best: Option<T>, r| Some(best.map_or(r, |b| b.min(r))))
            .ok_or_else(no_root)?;
        // one Newton step tightens the residual after cancellation in `c`
        let slope = self.derivative(delta);
        if slope != T::zero() {
            let polished = delta - (self.eval(delta) - target) / slope;
            if self.lo < polished && polished < self.hi {
                return Ok(polished);
            }
        }
        Ok(delta)
    }

    /// Coefficients predicted for the next span when the nodes double and the
    /// data is `log2`-like: `(a/4, b/2, c+1)`.
    pub fn self_similar_next(&self) -> (T, T, T) {
        (
            self.a / T::lit(4.0),
            self.b / T::two(),
            self.c + T::one(),
        )
    }
}
