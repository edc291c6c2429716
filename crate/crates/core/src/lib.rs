//! Piecewise blended-quadratic models of sampled functions, with integral
//! accuracy metrics and growth-class fitting for runtime measurements.
//!
//! Every numeric routine is generic over [`Scalar`] (`f32` or `f64`); the
//! `*64` / `*32` aliases below name the common concrete instantiations.

pub mod accuracy;
pub mod classifier;
pub mod error;
pub mod lagrange;
pub mod linear;
pub mod piecewise;
pub mod quadrature;
pub mod reference;
pub mod sample;
pub mod scalar;
pub mod segment;

pub use accuracy::{accuracy_vs, validate_profile, AccuracyReport, SegmentAccuracy};
pub use classifier::{
    classify, default_candidates, fit_class, CandidateClass, CandidateFit, ClassificationReport,
};
pub use error::{Error, Result};
pub use lagrange::{lagrange_general, lagrange_quadratic, Polynomial, MAX_GENERAL_NODES};
pub use linear::{secant_line, LinearFn};
pub use piecewise::{
    build_on_knots, build_piecewise, build_piecewise_with, geometric_knots, midpoint_series,
    uniform_knots, EvenPolicy, OneSided, PiecewisePoly,
};
pub use quadrature::adaptive_simpson;
pub use reference::{KnotSpacing, ReferenceFn, StandardFn};
pub use sample::{SamplePoint, SampleSeries};
pub use scalar::{rel_diff, Scalar};
pub use segment::{build_segment, BlendMode, Concavity, QuadraticSegment};

pub type SamplePoint64 = SamplePoint<f64>;
pub type SampleSeries64 = SampleSeries<f64>;
pub type QuadraticSegment64 = QuadraticSegment<f64>;
pub type PiecewisePoly64 = PiecewisePoly<f64>;
pub type ReferenceFn64 = ReferenceFn<f64>;
pub type AccuracyReport64 = AccuracyReport<f64>;
pub type CandidateFit64 = CandidateFit<f64>;
pub type ClassificationReport64 = ClassificationReport<f64>;

pub type SampleSeries32 = SampleSeries<f32>;
pub type QuadraticSegment32 = QuadraticSegment<f32>;
pub type PiecewisePoly32 = PiecewisePoly<f32>;
