//! Piecewise models assembled from consecutive three-node spans.

use crate::error::{Error, Result};
use crate::sample::{SamplePoint, SampleSeries};
use crate::scalar::Scalar;
use crate::segment::{build_segment, BlendMode, QuadraticSegment};

/// What to do with a series whose length is even.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EvenPolicy {
    #[default]
    Reject,
    DropLast,
}

/// One-sided derivatives at a point. Equal everywhere except, in general, at knots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneSided<T> {
    pub left: T,
    pub right: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PiecewisePoly<T> {
    segments: Vec<QuadraticSegment<T>>,
    mode: BlendMode,
}

/// Builds one segment per node triple `(0,1,2), (2,3,4), ...`.
pub fn build_piecewise<T: Scalar>(
    series: &SampleSeries<T>,
    mode: BlendMode,
) -> Result<PiecewisePoly<T>> {
    build_piecewise_with(series, mode, EvenPolicy::Reject)
}

pub fn build_piecewise_with<T: Scalar>(
    series: &SampleSeries<T>,
    mode: BlendMode,
    policy: EvenPolicy,
) -> Result<PiecewisePoly<T>> {
    let mut pts = series.points();
    if pts.len() % 2 == 0 {
        match policy {
            EvenPolicy::Reject => return Err(Error::EvenSeries { len: pts.len() }),
            EvenPolicy::DropLast => pts = &pts[..pts.len() - 1],
        }
    }
    if pts.len() < 3 {
        return Err(Error::TooFewPoints {
            len: pts.len(),
            min: 3,
        });
    }
    let segments = pts
        .windows(3)
        .step_by(2)
        .map(|w| build_segment(w[0], w[1], w[2], mode))
        .collect::<Result<Vec<_>>>()?;
    Ok(PiecewisePoly { segments, mode })
}

/// Samples `f` at each knot and at the midpoint of every pair of adjacent knots,
/// then builds the model.
pub fn build_on_knots<T: Scalar>(
    knots: &[T],
    f: impl Fn(T) -> T,
    mode: BlendMode,
) -> Result<PiecewisePoly<T>> {
    build_piecewise(&midpoint_series(knots, f)?, mode)
}

/// `[k0, (k0+k1)/2, k1, (k1+k2)/2, k2, ...]` sampled through `f`.
pub fn midpoint_series<T: Scalar>(knots: &[T], f: impl Fn(T) -> T) -> Result<SampleSeries<T>> {
    if knots.len() < 2 {
        return Err(Error::TooFewPoints {
            len: knots.len(),
            min: 2,
        });
    }
    let mut points = Vec::with_capacity(2 * knots.len() - 1);
    for w in knots.windows(2) {
        points.push(SamplePoint::new(w[0], f(w[0])));
        let mid = T::half() * (w[0] + w[1]);
        points.push(SamplePoint::new(mid, f(mid)));
    }
    let last = knots[knots.len() - 1];
    points.push(SamplePoint::new(last, f(last)));
    SampleSeries::new(points)
}

/// `segments + 1` equally spaced knots on `[from, to]`.
pub fn uniform_knots<T: Scalar>(from: T, to: T, segments: usize) -> Result<Vec<T>> {
    check_span(from, to, segments)?;
    let n = T::from_usize(segments).expect("segment count fits the scalar");
    let step = (to - from) / n;
    let mut knots: Vec<T> = (0..segments)
        .map(|i| from + step * T::from_usize(i).expect("index fits the scalar"))
        .collect();
    knots.push(to);
    Ok(knots)
}

/// `segments + 1` knots with a constant ratio between neighbours (`0 < from < to`).
pub fn geometric_knots<T: Scalar>(from: T, to: T, segments: usize) -> Result<Vec<T>> {
    check_span(from, to, segments)?;
    if from <= T::zero() {
        return Err(Error::InvalidArgument(
            "geometric knots need a positive lower bound".into(),
        ));
    }
    let n = T::from_usize(segments).expect("segment count fits the scalar");
    let span = to / from;
    let mut ratio = span.powf(T::one() / n);
    // keep whole-number ratios (doubling etc.) exact
    let whole = ratio.round();
    if whole.powi(segments as i32) == span {
        ratio = whole;
    }
    let mut knots = Vec::with_capacity(segments + 1);
    let mut k = from;
    for _ in 0..segments {
        knots.push(k);
        k = k * ratio;
    }
    knots.push(to);
    Ok(knots)
}

fn check_span<T: Scalar>(from: T, to: T, segments: usize) -> Result<()> {
    if segments == 0 || !(from < to) || !from.is_finite() || !to.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "need from < to and at least one segment (got [{from}, {to}], {segments})"
        )));
    }
    Ok(())
}

impl<T: Scalar> PiecewisePoly<T> {
    /// Assembles pre-built segments; bounds must chain exactly.
    pub fn from_segments(segments: Vec<QuadraticSegment<T>>, mode: BlendMode) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::TooFewPoints { len: 0, min: 1 });
        }
        for (i, w) in segments.windows(2).enumerate() {
            if w[0].hi != w[1].lo {
                return Err(Error::InvalidArgument(format!(
                    "segment {} ends at {} but segment {} starts at {}",
                    i,
                    w[0].hi,
                    i + 1,
                    w[1].lo
                )));
            }
        }
        Ok(PiecewisePoly { segments, mode })
    }

    pub fn segments(&self) -> &[QuadraticSegment<T>] {
        &self.segments
    }

    pub fn mode(&self) -> BlendMode {
        self.mode
    }

    pub fn domain(&self) -> (T, T) {
        (self.segments[0].lo, self.segments[self.segments.len() - 1].hi)
    }

    /// Interior knots shared by adjacent segments.
    pub fn interior_knots(&self) -> impl Iterator<Item = T> + '_ {
        self.segments[1..].iter().map(|s| s.lo)
    }

    fn out_of_domain(&self, x: T) -> Error {
        let (lo, hi) = self.domain();
        Error::OutOfDomain {
            x: x.to_f64().unwrap_or(f64::NAN),
            lo: lo.to_f64().unwrap_or(f64::NAN),
            hi: hi.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// Index of the segment owning `x`; a shared knot belongs to the left segment.
    pub fn segment_index(&self, x: T) -> Result<usize> {
        let (lo, hi) = self.domain();
        if !(lo <= x && x <= hi) {
            return Err(self.out_of_domain(x));
        }
        Ok(self.segments.partition_point(|s| s.hi < x))
    }

    pub fn evaluate(&self, x: T) -> Result<T> {
        Ok(self.segments[self.segment_index(x)?].eval(x))
    }

    /// Left and right derivatives. At a knot they come from the two adjacent
    /// segments and need not agree.
    pub fn derivative_at(&self, x: T) -> Result<OneSided<T>> {
        let i = self.segment_index(x)?;
        let left = self.segments[i].derivative(x);
        let right = match self.segments.get(i + 1) {
            Some(next) if x == self.segments[i].hi => next.derivative(x),
            _ => left,
        };
        Ok(OneSided { left, right })
    }

    /// Exact integral over `[a, b]`.
    pub fn integral(&self, a: T, b: T) -> Result<T> {
        if a > b {
            return Err(Error::InvalidArgument(format!(
                "integration bounds reversed ({a} > {b})"
            )));
        }
        let first = self.segment_index(a)?;
        let last = self.segment_index(b)?;
        let mut total = T::zero();
        for seg in &self.segments[first..=last] {
            let from = seg.lo.max(a);
            let to = seg.hi.min(b);
            if from < to {
                total = total + seg.integrate(from, to);
            }
        }
        Ok(total)
    }
}
