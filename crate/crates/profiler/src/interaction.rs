//! Additive versus composite interaction between two variables.

use std::fmt;

use crate::error::{ProfileError, Result};
use crate::evaluator::Evaluator;
use crate::sweep::{spread, sweep_single, CurveFamily, SweepResult};
use crate::target::Args;

/// Fraction of a curve's range a difference curve may vary by and still count as constant.
pub const RELATIVE_TOLERANCE: f64 = 0.05;
/// Multiple of the pooled dispersion a difference curve may vary by.
pub const DISPERSION_FACTOR: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Interaction {
    /// Changing the second variable translates the first variable's curve.
    Additive,
    /// Changing the second variable reshapes the curve.
    Composite,
}

impl Interaction {
    pub fn as_str(self) -> &'static str {
        match self {
            Interaction::Additive => "additive",
            Interaction::Composite => "composite",
        }
    }

    /// Operator used when joining per-variable classes.
    pub fn joiner(self) -> &'static str {
        match self {
            Interaction::Additive => " + ",
            Interaction::Composite => " · ",
        }
    }
}

impl fmt::Display for Interaction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Interaction {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "additive" => Ok(Interaction::Additive),
            "composite" => Ok(Interaction::Composite),
            other => Err(format!("unknown interaction label `{other}`")),
        }
    }
}

/// Outcome of [`detect_interaction`].
///
/// `evidence` is the largest ratio of a difference curve's spread to the
/// spread it was allowed; the label is additive iff `evidence < threshold`.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionLabel {
    pub pair: (String, String),
    pub label: Interaction,
    pub evidence: f64,
    pub threshold: f64,
    /// Values of the second variable, one curve each.
    pub probes: Vec<i64>,
    /// `max - min` of each difference curve.
    pub spreads: Vec<f64>,
    /// Spread each difference curve was allowed.
    pub allowed: Vec<f64>,
    pub curves: Vec<SweepResult>,
}

impl InteractionLabel {
    pub fn is_additive(&self) -> bool {
        self.label == Interaction::Additive
    }

    pub fn family(&self) -> Result<CurveFamily> {
        CurveFamily::from_sweeps(&self.curves)
    }
}

/// Decides from already-collected curves (one per probe, same grid).
pub fn label_from_curves(
    pair: (&str, &str),
    probes: Vec<i64>,
    curves: Vec<SweepResult>,
) -> Result<InteractionLabel> {
    if curves.len() < 2 {
        return Err(ProfileError::InvalidConfig(format!(
            "interaction detection needs at least 2 probe curves (got {})",
            curves.len()
        )));
    }
    let family = CurveFamily::from_sweeps(&curves)?;
    let mut evidence: f64 = 0.0;
    let mut allowed = Vec::with_capacity(family.offset_spreads.len());
    for (w, &dev) in curves.windows(2).zip(&family.offset_spreads) {
        let ys = |s: &SweepResult| s.series.ys().collect::<Vec<_>>();
        let range = spread(&ys(&w[0])).max(spread(&ys(&w[1])));
        let pooled = (0.5
            * (w[0].pooled_dispersion().powi(2) + w[1].pooled_dispersion().powi(2)))
        .sqrt();
        let limit = (RELATIVE_TOLERANCE * range).max(DISPERSION_FACTOR * pooled);
        let ratio = if limit > 0.0 {
            dev / limit
        } else if dev > 0.0 {
            f64::INFINITY
        } else {
            0.0
        };
        evidence = evidence.max(ratio);
        allowed.push(limit);
    }
    let threshold = 1.0;
    let label = if evidence < threshold {
        Interaction::Additive
    } else {
        Interaction::Composite
    };
    Ok(InteractionLabel {
        pair: (pair.0.to_string(), pair.1.to_string()),
        label,
        evidence,
        threshold,
        probes,
        spreads: family.offset_spreads,
        allowed,
        curves,
    })
}

/// Sweeps `a` over `grid_a` once per value in `probes_b` and compares
/// consecutive curves pointwise.
pub fn detect_interaction<E: Evaluator + ?Sized>(
    eval: &mut E,
    a: &str,
    b: &str,
    grid_a: &[i64],
    probes_b: &[i64],
    fixed: &Args,
) -> Result<InteractionLabel> {
    let arity = eval.target().arity();
    if arity < 2 {
        return Err(ProfileError::InsufficientArity(arity));
    }
    if a == b {
        return Err(ProfileError::InvalidConfig(format!(
            "interaction pair must name two different variables (got `{a}` twice)"
        )));
    }
    for v in [a, b] {
        if eval.target().variable(v).is_none() {
            return Err(ProfileError::UnknownVariable(v.to_string()));
        }
    }
    if probes_b.len() < 2 {
        return Err(ProfileError::InvalidConfig(format!(
            "interaction detection needs at least 2 probe values for `{b}` (got {})",
            probes_b.len()
        )));
    }
    let curves = probes_b
        .iter()
        .map(|&p| {
            let mut f = fixed.clone();
            f.insert(b.to_string(), p);
            sweep_single(eval, a, grid_a, &f)
        })
        .collect::<Result<Vec<_>>>()?;
    label_from_curves((a, b), probes_b.to_vec(), curves)
}
