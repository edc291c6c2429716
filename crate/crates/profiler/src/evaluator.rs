//! Sources of timing samples: real measurements or synthetic formulas.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::clock::ClockKind;
use crate::error::Result;
use crate::measure::{measure, measure_batch, MeasureConfig, TimingSample};
use crate::target::{Args, TargetKind, TargetSpec, VariableSpec};

/// Produces one [`TimingSample`] per argument assignment.
///
/// Sweeps and interaction detection are written against this trait so the
/// same orchestration runs on real targets and on noiseless formulas.
pub trait Evaluator {
    fn target(&self) -> &TargetSpec;

    fn evaluate(&mut self, args: &Args) -> Result<TimingSample>;

    /// Evaluates several assignments; the result is in input order.
    fn evaluate_batch(&mut self, batch: &[Args]) -> Result<Vec<TimingSample>> {
        batch.iter().map(|a| self.evaluate(a)).collect()
    }

    /// Every argument assignment evaluated so far, in order.
    fn trace(&self) -> &[Args];
}

/// Times a real target; measurements are strictly sequential.
pub struct Harness {
    target: TargetSpec,
    config: MeasureConfig,
    trace: Vec<Args>,
}

impl Harness {
    pub fn new(target: TargetSpec, config: MeasureConfig) -> Result<Self> {
        target.validate()?;
        config.validate()?;
        Ok(Harness {
            target,
            config,
            trace: Vec::new(),
        })
    }

    pub fn config(&self) -> &MeasureConfig {
        &self.config
    }
}

impl Evaluator for Harness {
    fn target(&self) -> &TargetSpec {
        &self.target
    }

    fn evaluate(&mut self, args: &Args) -> Result<TimingSample> {
        self.trace.push(args.clone());
        measure(&self.target, args, &self.config)
    }

    fn evaluate_batch(&mut self, batch: &[Args]) -> Result<Vec<TimingSample>> {
        self.trace.extend(batch.iter().cloned());
        measure_batch(&self.target, batch, &self.config)
    }

    fn trace(&self) -> &[Args] {
        &self.trace
    }
}

type Formula = Box<dyn Fn(&Args) -> f64 + Send>;

/// Evaluates a formula instead of running anything, optionally with
/// multiplicative Gaussian noise.
pub struct Synthetic {
    target: TargetSpec,
    formula: Formula,
    noise: Option<(f64, ChaCha8Rng)>,
    trace: Vec<Args>,
}

impl Synthetic {
    pub fn new(
        description: impl Into<String>,
        variables: Vec<VariableSpec>,
        formula: impl Fn(&Args) -> f64 + Send + 'static,
    ) -> Self {
        let description = description.into();
        Synthetic {
            target: TargetSpec {
                name: description.clone(),
                kind: TargetKind::Synthetic(description),
                variables,
            },
            formula: Box::new(formula),
            noise: None,
            trace: Vec::new(),
        }
    }

    /// Multiplies every value by `1 + relative * N(0, 1)`.
    pub fn with_noise(mut self, relative: f64, seed: u64) -> Self {
        self.noise = Some((relative, ChaCha8Rng::seed_from_u64(seed)));
        self
    }
}

impl Evaluator for Synthetic {
    fn target(&self) -> &TargetSpec {
        &self.target
    }

    fn evaluate(&mut self, args: &Args) -> Result<TimingSample> {
        for v in &self.target.variables {
            if !args.contains_key(&v.name) {
                return Err(crate::error::ProfileError::MissingFixed(v.name.clone()));
            }
        }
        self.trace.push(args.clone());
        let exact = (self.formula)(args);
        let (value, dispersion) = match &mut self.noise {
            None => (exact, 0.0),
            Some((rel, rng)) => {
                let z: f64 = StandardNormal.sample(rng);
                (exact * (1.0 + *rel * z), (*rel * exact).abs())
            }
        };
        Ok(TimingSample {
            args: args.clone(),
            cpu_seconds: value,
            dispersion,
            clock: ClockKind::Synthetic,
            warnings: Vec::new(),
        })
    }

    fn trace(&self) -> &[Args] {
        &self.trace
    }
}
