//! Per-variable piecewise models and multi-variable runtime profiles.

use std::collections::BTreeMap;

use log::{debug, info};
use qseg_core::{build_piecewise, validate_profile, BlendMode, PiecewisePoly, SampleSeries};

use crate::error::{ProfileError, Result};
use crate::evaluator::Evaluator;
use crate::interaction::{detect_interaction, InteractionLabel};
use crate::sweep::{sweep_single, validate_grid, SweepResult};
use crate::target::{Args, TargetSpec};

/// Piecewise model of runtime against one variable.
#[derive(Debug, Clone, PartialEq)]
pub struct VariableProfile {
    pub variable: String,
    pub fixed_values: Args,
    pub sweep: SweepResult,
    pub model: PiecewisePoly<f64>,
}

impl VariableProfile {
    pub fn series(&self) -> &SampleSeries<f64> {
        &self.sweep.series
    }

    /// Largest relative deviation of the model from the measured samples.
    pub fn validation_error(&self) -> Result<f64> {
        Ok(validate_profile(&self.model, &self.sweep.series)?)
    }

    /// Representative input of the middle segment, rounded and clamped to
    /// the sweep's grid; the grid midpoint when no root qualifies.
    pub fn representative_value(&self) -> i64 {
        let xs: Vec<f64> = self.sweep.series.xs().collect();
        let (lo, hi) = (xs[0], xs[xs.len() - 1]);
        let segs = self.model.segments();
        let mid = &segs[segs.len() / 2];
        let fallback = xs[xs.len() / 2];
        let value = match mid.representative_input() {
            Ok(v) if v.is_finite() => v,
            Ok(_) | Err(_) => {
                debug!(
                    "no representative input for `{}`; using grid midpoint {fallback}",
                    self.variable
                );
                fallback
            }
        };
        value.round().clamp(lo, hi) as i64
    }
}

/// Fits a piecewise model to a completed sweep.
pub fn profile_variable(sweep: SweepResult, mode: BlendMode) -> Result<VariableProfile> {
    let model = build_piecewise(&sweep.series, mode)?;
    Ok(VariableProfile {
        variable: sweep.swept_variable.clone(),
        fixed_values: sweep.fixed_values.clone(),
        sweep,
        model,
    })
}

/// Everything learned about one target.
#[derive(Debug, Clone, PartialEq)]
pub struct RuntimeProfile {
    pub target: TargetSpec,
    pub mode: BlendMode,
    pub grids: BTreeMap<String, Vec<i64>>,
    /// Values the other variables were held at during the coarse pass.
    pub first_pass_fixed: Args,
    /// Coarse models; identical to `profiles` for one-variable targets.
    pub coarse: Vec<VariableProfile>,
    /// Values the other variables were held at during the final pass.
    pub representatives: Args,
    /// One per variable, in target order.
    pub profiles: Vec<VariableProfile>,
    /// One per unordered variable pair.
    pub interactions: Vec<InteractionLabel>,
    /// Proportionality constant of the winning class, once classified.
    pub k_hint: Option<f64>,
}

impl RuntimeProfile {
    pub fn profile(&self, variable: &str) -> Option<&VariableProfile> {
        self.profiles.iter().find(|p| p.variable == variable)
    }

    pub fn interaction(&self, a: &str, b: &str) -> Option<&InteractionLabel> {
        self.interactions
            .iter()
            .find(|l| (l.pair.0 == a && l.pair.1 == b) || (l.pair.0 == b && l.pair.1 == a))
    }
}

/// Value a variable is held at in the coarse pass: 0 when allowed, else the
/// smallest grid value.
pub fn first_pass_value(target: &TargetSpec, variable: &str, grid: &[i64]) -> Result<i64> {
    let spec = target
        .variable(variable)
        .ok_or_else(|| ProfileError::UnknownVariable(variable.to_string()))?;
    Ok(if spec.min_value <= 0 { 0 } else { grid[0] })
}

fn held_except(values: &Args, variable: &str) -> Args {
    values
        .iter()
        .filter(|(k, _)| k.as_str() != variable)
        .map(|(k, v)| (k.clone(), *v))
        .collect()
}

fn probes(grid: &[i64]) -> Vec<i64> {
    vec![grid[0], grid[grid.len() / 2], grid[grid.len() - 1]]
}

/// Sweeps every variable twice (coarse, then at representative values of the
/// others) and labels every variable pair.
pub fn build_runtime_profile<E: Evaluator + ?Sized>(
    eval: &mut E,
    grids: &BTreeMap<String, Vec<i64>>,
    mode: BlendMode,
) -> Result<RuntimeProfile> {
    let target = eval.target().clone();
    for name in grids.keys() {
        if target.variable(name).is_none() {
            return Err(ProfileError::UnknownVariable(name.clone()));
        }
    }
    let names: Vec<String> = target.variables.iter().map(|v| v.name.clone()).collect();
    for name in &names {
        let grid = grids
            .get(name)
            .ok_or_else(|| ProfileError::MissingGrid(name.clone()))?;
        validate_grid(name, grid)?;
    }

    let mut first_pass_fixed = Args::new();
    for name in &names {
        first_pass_fixed.insert(name.clone(), first_pass_value(&target, name, &grids[name])?);
    }

    info!("coarse pass over {} variable(s) of `{}`", names.len(), target.name);
    let coarse = names
        .iter()
        .map(|name| {
            let fixed = held_except(&first_pass_fixed, name);
            profile_variable(sweep_single(eval, name, &grids[name], &fixed)?, mode)
        })
        .collect::<Result<Vec<_>>>()?;

    let representatives: Args = coarse
        .iter()
        .map(|p| (p.variable.clone(), p.representative_value()))
        .collect();

    let profiles = if names.len() == 1 {
        coarse.clone()
    } else {
        info!("final pass with others held at {representatives:?}");
        names
            .iter()
            .map(|name| {
                let fixed = held_except(&representatives, name);
                profile_variable(sweep_single(eval, name, &grids[name], &fixed)?, mode)
            })
            .collect::<Result<Vec<_>>>()?
    };

    let mut interactions = Vec::new();
    for i in 0..names.len() {
        for j in i + 1..names.len() {
            let (a, b) = (&names[i], &names[j]);
            let fixed = held_except(&held_except(&representatives, a), b);
            let label = detect_interaction(eval, a, b, &grids[a], &probes(&grids[b]), &fixed)?;
            info!("{a} × {b}: {} (evidence {:.3})", label.label, label.evidence);
            interactions.push(label);
        }
    }

    Ok(RuntimeProfile {
        target,
        mode,
        grids: grids.clone(),
        first_pass_fixed,
        coarse,
        representatives,
        profiles,
        interactions,
        k_hint: None,
    })
}
