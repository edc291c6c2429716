//! One-variable-at-a-time sweeps.

use qseg_core::{SamplePoint, SampleSeries};

use crate::error::{ProfileError, Result};
use crate::evaluator::Evaluator;
use crate::measure::TimingSample;
use crate::target::Args;

/// `n` evenly spaced integers from `lo` to `hi` inclusive (`n` odd, >= 3).
pub fn linspace_grid(lo: i64, hi: i64, n: usize) -> Result<Vec<i64>> {
    let spec = format!("{lo}:{hi}:{n}");
    let bad = |reason: &str| ProfileError::BadGridSpec {
        spec: spec.clone(),
        reason: reason.to_string(),
    };
    if n < 3 {
        return Err(bad("at least 3 points are required"));
    }
    if n % 2 == 0 {
        return Err(bad("the point count must be odd"));
    }
    if lo >= hi {
        return Err(bad("lo must be below hi"));
    }
    let step = (hi - lo) as f64 / (n - 1) as f64;
    let grid: Vec<i64> = (0..n)
        .map(|i| lo + (step * i as f64).round() as i64)
        .collect();
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(bad("range too narrow for that many distinct integers"));
    }
    Ok(grid)
}

/// `n` integers from `lo` to `hi` inclusive with (rounded) constant ratio.
pub fn geometric_grid(lo: i64, hi: i64, n: usize) -> Result<Vec<i64>> {
    let spec = format!("{lo}:{hi}:{n}:geo");
    let bad = |reason: &str| ProfileError::BadGridSpec {
        spec: spec.clone(),
        reason: reason.to_string(),
    };
    if lo <= 0 {
        return Err(bad("a geometric grid needs a positive lower bound"));
    }
    // shares the count and ordering checks
    linspace_grid(lo, hi, n).map_err(|e| match e {
        ProfileError::BadGridSpec { reason, .. } => bad(&reason),
        other => other,
    })?;
    let ratio = (hi as f64 / lo as f64).powf(1.0 / (n - 1) as f64);
    let mut grid: Vec<i64> = (0..n)
        .map(|i| (lo as f64 * ratio.powi(i as i32)).round() as i64)
        .collect();
    grid[n - 1] = hi;
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(bad("range too narrow for that many distinct integers"));
    }
    Ok(grid)
}

/// Parses `NAME=lo:hi:n`, optionally suffixed `:lin` (default) or `:geo`.
pub fn parse_grid_spec(spec: &str) -> Result<(String, Vec<i64>)> {
    let bad = |reason: &str| ProfileError::BadGridSpec {
        spec: spec.to_string(),
        reason: reason.to_string(),
    };
    let (name, range) = spec
        .split_once('=')
        .ok_or_else(|| bad("expected NAME=lo:hi:n"))?;
    let name = name.trim();
    if name.is_empty() {
        return Err(bad("empty variable name"));
    }
    let parts: Vec<&str> = range.split(':').collect();
    let (lo, hi, n, geometric) = match parts[..] {
        [lo, hi, n] => (lo, hi, n, false),
        [lo, hi, n, "lin"] => (lo, hi, n, false),
        [lo, hi, n, "geo"] => (lo, hi, n, true),
        [_, _, _, _] => return Err(bad("spacing must be `lin` or `geo`")),
        _ => return Err(bad("expected lo:hi:n")),
    };
    let lo: i64 = lo.trim().parse().map_err(|_| bad("lo is not an integer"))?;
    let hi: i64 = hi.trim().parse().map_err(|_| bad("hi is not an integer"))?;
    let n: usize = n.trim().parse().map_err(|_| bad("n is not a count"))?;
    let grid = if geometric {
        geometric_grid(lo, hi, n)?
    } else {
        linspace_grid(lo, hi, n)?
    };
    Ok((name.to_string(), grid))
}

/// Odd length >= 3 and strictly increasing.
pub fn validate_grid(variable: &str, grid: &[i64]) -> Result<()> {
    if grid.len() < 3 {
        return Err(ProfileError::GridTooSmall {
            variable: variable.to_string(),
            len: grid.len(),
        });
    }
    if grid.len() % 2 == 0 {
        return Err(ProfileError::EvenGrid {
            variable: variable.to_string(),
            len: grid.len(),
        });
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ProfileError::NonIncreasingGrid {
            variable: variable.to_string(),
        });
    }
    Ok(())
}

/// Timings of one variable over its grid with every other variable held fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub swept_variable: String,
    pub fixed_values: Args,
    pub samples: Vec<TimingSample>,
    /// `x` = swept value, `y` = aggregated CPU seconds.
    pub series: SampleSeries<f64>,
}

impl SweepResult {
    /// Assembles a sweep from already-collected samples.
    pub fn from_samples(
        variable: &str,
        fixed_values: Args,
        samples: Vec<TimingSample>,
    ) -> Result<Self> {
        let points = samples
            .iter()
            .map(|s| {
                let x = *s
                    .args
                    .get(variable)
                    .ok_or_else(|| ProfileError::UnknownVariable(variable.to_string()))?;
                Ok(SamplePoint::new(x as f64, s.cpu_seconds))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut series = SampleSeries::new(points)?;
        series.set_label(format!("{variable} sweep"));
        Ok(SweepResult {
            swept_variable: variable.to_string(),
            fixed_values,
            samples,
            series,
        })
    }

    /// Root-mean-square of the per-sample dispersions.
    pub fn pooled_dispersion(&self) -> f64 {
        let n = self.samples.len() as f64;
        (self.samples.iter().map(|s| s.dispersion * s.dispersion).sum::<f64>() / n).sqrt()
    }
}

/// Sweeps `variable` over `grid`; `fixed` must assign every other variable.
pub fn sweep_single<E: Evaluator + ?Sized>(
    eval: &mut E,
    variable: &str,
    grid: &[i64],
    fixed: &Args,
) -> Result<SweepResult> {
    let target = eval.target();
    if target.variable(variable).is_none() {
        return Err(ProfileError::UnknownVariable(variable.to_string()));
    }
    validate_grid(variable, grid)?;
    let mut fixed_values = Args::new();
    for v in &target.variables {
        if v.name == variable {
            continue;
        }
        let value = fixed
            .get(&v.name)
            .ok_or_else(|| ProfileError::MissingFixed(v.name.clone()))?;
        fixed_values.insert(v.name.clone(), *value);
    }
    let batch: Vec<Args> = grid
        .iter()
        .map(|&x| {
            let mut args = fixed_values.clone();
            args.insert(variable.to_string(), x);
            args
        })
        .collect();
    let samples = eval.evaluate_batch(&batch)?;
    SweepResult::from_samples(variable, fixed_values, samples)
}

/// Sweeps `pair.0` over `grid` once for each of `steps` values
/// `base[pair.1] + s * increment`.
pub fn pairwise_sweep<E: Evaluator + ?Sized>(
    eval: &mut E,
    pair: (&str, &str),
    base: &Args,
    increment: i64,
    steps: usize,
    grid: &[i64],
) -> Result<Vec<SweepResult>> {
    if steps < 2 {
        return Err(ProfileError::InvalidConfig(format!(
            "pairwise sweep needs at least 2 steps (got {steps})"
        )));
    }
    if increment <= 0 {
        return Err(ProfileError::InvalidConfig(format!(
            "increment must be positive (got {increment})"
        )));
    }
    let start = *base
        .get(pair.1)
        .ok_or_else(|| ProfileError::MissingFixed(pair.1.to_string()))?;
    (0..steps)
        .map(|s| {
            let mut fixed = base.clone();
            fixed.insert(pair.1.to_string(), start + increment * s as i64);
            sweep_single(eval, pair.0, grid, &fixed)
        })
        .collect()
}

/// How successive curves of a family relate to each other.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveFamily {
    /// Mean pointwise difference between each curve and the previous one.
    pub offsets: Vec<f64>,
    /// `max - min` of each pointwise difference curve.
    pub offset_spreads: Vec<f64>,
    /// Least-squares slope of each curve against the swept variable.
    pub slopes: Vec<f64>,
}

impl CurveFamily {
    /// Requires every sweep to share the same grid.
    pub fn from_sweeps(sweeps: &[SweepResult]) -> Result<Self> {
        if let Some(first) = sweeps.first() {
            let xs: Vec<f64> = first.series.xs().collect();
            if sweeps
                .iter()
                .any(|s| s.series.xs().collect::<Vec<_>>() != xs)
            {
                return Err(ProfileError::InvalidConfig(
                    "curve family sweeps must share one grid".into(),
                ));
            }
        }
        let mut offsets = Vec::new();
        let mut offset_spreads = Vec::new();
        for w in sweeps.windows(2) {
            let diffs: Vec<f64> = w[1]
                .series
                .ys()
                .zip(w[0].series.ys())
                .map(|(b, a)| b - a)
                .collect();
            offsets.push(diffs.iter().sum::<f64>() / diffs.len() as f64);
            offset_spreads.push(spread(&diffs));
        }
        let slopes = sweeps.iter().map(|s| ls_slope(&s.series)).collect();
        Ok(CurveFamily {
            offsets,
            offset_spreads,
            slopes,
        })
    }
}

pub(crate) fn spread(values: &[f64]) -> f64 {
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if values.is_empty() {
        0.0
    } else {
        hi - lo
    }
}

fn ls_slope(series: &SampleSeries<f64>) -> f64 {
    let n = series.len() as f64;
    let mx = series.xs().sum::<f64>() / n;
    let my = series.ys().sum::<f64>() / n;
    let (sxx, sxy) = series
        .points()
        .iter()
        .fold((0.0, 0.0), |(sxx, sxy), p| {
            (sxx + (p.x - mx) * (p.x - mx), sxy + (p.x - mx) * (p.y - my))
        });
    sxy / sxx
}
