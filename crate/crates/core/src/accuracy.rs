//! Integral-ratio accuracy of a model against a reference or raw samples.

use crate::error::{Error, Result};
use crate::piecewise::PiecewisePoly;
use crate::quadrature::adaptive_simpson;
use crate::reference::ReferenceFn;
use crate::sample::SampleSeries;
use crate::scalar::Scalar;

/// Absolute tolerance of the reference quadrature on each segment.
pub const QUADRATURE_TOL: f64 = 1e-10;

/// Aggregates smaller than this are treated as zero.
pub const ZERO_INTEGRAL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SegmentAccuracy<T> {
    pub lo: T,
    pub hi: T,
    pub integral_reference: T,
    pub integral_model: T,
    /// `min(G/F, F/G)`; `None` when either integral is zero or the signs differ.
    pub ratio: Option<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyReport<T> {
    pub per_segment: Vec<SegmentAccuracy<T>>,
    pub total_reference: T,
    pub total_model: T,
    /// Aggregate accuracy in `(0, 1]`.
    pub aggregate: T,
}

/// `min(r, 1/r)` for `r = reference / model`, or `None` when meaningless.
fn folded_ratio<T: Scalar>(reference: T, model: T) -> Option<T> {
    if reference == T::zero() || model == T::zero() || reference.signum() != model.signum() {
        return None;
    }
    let r = reference / model;
    Some(r.min(r.recip()))
}

/// Compares the summed segment integrals of `pw` with those of `reference`.
///
/// The reference is integrated numerically, the model in closed form. The
/// larger total goes in the denominator so the result never exceeds one.
pub fn accuracy_vs<T: Scalar>(
    pw: &PiecewisePoly<T>,
    reference: &ReferenceFn<T>,
) -> Result<AccuracyReport<T>> {
    let (lo, hi) = pw.domain();
    if !reference.covers(lo, hi) {
        return Err(Error::InvalidArgument(format!(
            "reference `{}` is not defined on [{lo}, {hi}]",
            reference.name()
        )));
    }
    let tol = T::lit(QUADRATURE_TOL);
    let per_segment: Vec<_> = pw
        .segments()
        .iter()
        .map(|seg| {
            let integral_reference = adaptive_simpson(|x| reference.eval(x), seg.lo, seg.hi, tol);
            let integral_model = seg.integrate(seg.lo, seg.hi);
            SegmentAccuracy {
                lo: seg.lo,
                hi: seg.hi,
                integral_reference,
                integral_model,
                ratio: folded_ratio(integral_reference, integral_model),
            }
        })
        .collect();
    let total_reference = per_segment
        .iter()
        .fold(T::zero(), |acc, s| acc + s.integral_reference);
    let total_model = per_segment
        .iter()
        .fold(T::zero(), |acc, s| acc + s.integral_model);
    let zero = T::lit(ZERO_INTEGRAL);
    for total in [total_reference, total_model] {
        if total.abs() < zero {
            return Err(Error::ZeroIntegral {
                value: total.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    let aggregate =
        folded_ratio(total_reference, total_model).ok_or_else(|| Error::SignMismatch {
            reference: total_reference.to_f64().unwrap_or(f64::NAN),
            model: total_model.to_f64().unwrap_or(f64::NAN),
        })?;
    Ok(AccuracyReport {
        per_segment,
        total_reference,
        total_model,
        aggregate,
    })
}

/// Relative gap between the mean of the raw samples and the mean of the
/// model's segment averages.
pub fn validate_profile<T: Scalar>(pw: &PiecewisePoly<T>, samples: &SampleSeries<T>) -> Result<T> {
    for x in samples.xs() {
        pw.segment_index(x)?;
    }
    let n = T::from_usize(samples.len()).expect("sample count fits the scalar");
    let lhs = samples.ys().fold(T::zero(), |acc, y| acc + y) / n;
    let m = T::from_usize(pw.segments().len()).expect("segment count fits the scalar");
    let rhs = pw
        .segments()
        .iter()
        .fold(T::zero(), |acc, s| acc + s.average())
        / m;
    Ok((lhs - rhs).abs() / lhs.abs().max(T::lit(1e-12)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::piecewise::{build_on_knots, build_piecewise};
    use crate::reference::StandardFn;
    use crate::segment::{BlendMode, QuadraticSegment};

    fn quad_ref() -> ReferenceFn<f64> {
        ReferenceFn::new("q", (f64::NEG_INFINITY, f64::INFINITY), |x| 0.3 * x * x - x + 2.0)
    }

    #[test]
    fn identical_functions() {
        let r = quad_ref();
        let pw = build_on_knots(&[0.0, 1.0, 2.5, 4.0], |x| r.eval(x), BlendMode::PureLagrange).unwrap();
        let rep = accuracy_vs(&pw, &r).unwrap();
        assert!((rep.aggregate - 1.0).abs() < 1e-9);
        assert_eq!(rep.per_segment.len(), 3);
        assert_eq!((rep.per_segment[1].lo, rep.per_segment[1].hi), (1.0, 2.5));
    }

    #[test]
    fn reciprocal_rule() {
        let seg = QuadraticSegment::from_coeffs(0.0f64, 0.0, 2.0, 0.0, 1.0, BlendMode::PureLagrange).unwrap();
        let pw = PiecewisePoly::from_segments(vec![seg], BlendMode::PureLagrange).unwrap();
        let one = ReferenceFn::new("one", (0.0, 1.0), |_| 1.0);
        assert!((accuracy_vs(&pw, &one).unwrap().aggregate - 0.5).abs() < 1e-12);
    }

    #[test]
    fn log2_endpoint_value() {
        // Frozen from the quadrature oracle (scipy quad agrees to 1e-12).
        let pw = build_on_knots(&[8.0, 16.0, 32.0, 64.0], f64::log2, BlendMode::EndpointSecant).unwrap();
        let rep = accuracy_vs(&pw, &StandardFn::Log2.reference()).unwrap();
        assert!((rep.aggregate - 0.994_186_754_086).abs() < 1e-6, "{}", rep.aggregate);
    }

    #[test]
    fn sign_and_zero_errors() {
        let seg = QuadraticSegment::from_coeffs(0.0, 0.0, 1.0, 0.0, 1.0, BlendMode::PureLagrange).unwrap();
        let pw = PiecewisePoly::from_segments(vec![seg], BlendMode::PureLagrange).unwrap();
        let neg = ReferenceFn::new("neg", (0.0, 1.0), |_| -1.0);
        assert!(matches!(accuracy_vs(&pw, &neg), Err(Error::SignMismatch { .. })));
        let odd = ReferenceFn::new("odd", (0.0, 1.0), |x| x - 0.5);
        assert!(matches!(accuracy_vs(&pw, &odd), Err(Error::ZeroIntegral { .. })));
        let narrow = ReferenceFn::new("narrow", (0.5, 1.0), |_| 1.0);
        assert!(accuracy_vs(&pw, &narrow).is_err());
    }

    #[test]
    fn scale_invariant_and_symmetric() {
        let knots = [8.0, 16.0, 32.0, 64.0];
        let pw = build_on_knots(&knots, f64::log2, BlendMode::EndpointSecant).unwrap();
        let base = accuracy_vs(&pw, &StandardFn::Log2.reference()).unwrap().aggregate;
        let scaled_pw = build_on_knots(&knots, |x| 7.5 * x.log2(), BlendMode::EndpointSecant).unwrap();
        let scaled_ref = ReferenceFn::new("7.5 log2", (1.0, 100.0), |x: f64| 7.5 * x.log2());
        let scaled = accuracy_vs(&scaled_pw, &scaled_ref).unwrap().aggregate;
        assert!((base - scaled).abs() < 1e-12);

        // swap roles: model becomes the reference
        let model_ref = {
            let pw = pw.clone();
            ReferenceFn::new("model", pw.domain(), move |x| pw.evaluate(x).unwrap())
        };
        let target = build_on_knots(&knots, f64::log2, BlendMode::PureLagrange).unwrap();
        let forward = accuracy_vs(&pw, &target_ref(&target)).unwrap().aggregate;
        let backward = accuracy_vs(&target, &model_ref).unwrap().aggregate;
        assert!((forward - backward).abs() < 1e-9);
    }

    fn target_ref(pw: &PiecewisePoly<f64>) -> ReferenceFn<f64> {
        let pw = pw.clone();
        ReferenceFn::new("target", pw.domain(), move |x| pw.evaluate(x).unwrap())
    }

    #[test]
    fn validate_exact_cases() {
        let flat = SampleSeries::from_fn(&[1.0, 2.0, 4.0, 5.0, 9.0], |_| 3.25).unwrap();
        let pw = build_piecewise(&flat, BlendMode::EndpointSecant).unwrap();
        assert!(validate_profile(&pw, &flat).unwrap() < 1e-9);
        let line = SampleSeries::from_fn(&[0.0, 1.0, 2.0], |x| x).unwrap();
        let pw = build_piecewise(&line, BlendMode::EndpointSecant).unwrap();
        assert!(validate_profile(&pw, &line).unwrap() < 1e-9);
        let outside = SampleSeries::from_fn(&[0.0, 3.0], |x| x).unwrap();
        assert!(matches!(validate_profile(&pw, &outside), Err(Error::OutOfDomain { .. })));
    }
}
