//! Controlled execution and timing of a single argument assignment.

use std::process::{Command, Stdio};
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::clock::{self, ClockKind};
use crate::error::{ProfileError, Result};
use crate::target::{Args, TargetKind, TargetSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Aggregator {
    #[default]
    Median,
    Mean,
}

impl Aggregator {
    pub fn as_str(self) -> &'static str {
        match self {
            Aggregator::Median => "median",
            Aggregator::Mean => "mean",
        }
    }

    pub fn apply(self, values: &[f64]) -> f64 {
        match self {
            Aggregator::Mean => values.iter().sum::<f64>() / values.len() as f64,
            Aggregator::Median => {
                let mut v = values.to_vec();
                v.sort_by(f64::total_cmp);
                let n = v.len();
                if n % 2 == 1 {
                    v[n / 2]
                } else {
                    0.5 * (v[n / 2 - 1] + v[n / 2])
                }
            }
        }
    }
}

impl std::fmt::Display for Aggregator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Aggregator {
    type Err = ProfileError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "median" => Ok(Aggregator::Median),
            "mean" => Ok(Aggregator::Mean),
            _ => Err(ProfileError::InvalidConfig(format!("unknown aggregator `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureConfig {
    pub warmup_runs: usize,
    pub repetitions: usize,
    pub aggregator: Aggregator,
    /// Seeds input-data generation; timings themselves are not reproducible.
    pub seed: u64,
}

impl Default for MeasureConfig {
    fn default() -> Self {
        MeasureConfig {
            warmup_runs: 1,
            repetitions: 21,
            aggregator: Aggregator::Median,
            seed: 0,
        }
    }
}

impl MeasureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.repetitions < 3 {
            return Err(ProfileError::InvalidConfig(format!(
                "repetitions must be at least 3 (got {})",
                self.repetitions
            )));
        }
        if self.warmup_runs < 1 {
            return Err(ProfileError::InvalidConfig(
                "at least one warmup run is required".into(),
            ));
        }
        Ok(())
    }
}

/// One aggregated measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct TimingSample {
    pub args: Args,
    pub cpu_seconds: f64,
    /// Standard deviation of the individual repetitions.
    pub dispersion: f64,
    pub clock: ClockKind,
    pub warnings: Vec<String>,
}

impl TimingSample {
    /// Aggregates raw repetition timings.
    pub fn from_runs(args: Args, runs: &[f64], aggregator: Aggregator, clock: ClockKind) -> Self {
        let n = runs.len() as f64;
        let mean = runs.iter().sum::<f64>() / n;
        let var = if runs.len() > 1 {
            runs.iter().map(|t| (t - mean) * (t - mean)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        TimingSample {
            args,
            cpu_seconds: aggregator.apply(runs).max(0.0),
            dispersion: var.sqrt(),
            clock,
            warnings: Vec::new(),
        }
    }
}

/// splitmix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for the input data of one repetition; depends only on the config
/// seed, the argument values and the repetition index.
pub fn repetition_seed(seed: u64, args: &Args, repetition: usize) -> u64 {
    let mut h = mix(seed);
    for (name, value) in args {
        for byte in name.bytes() {
            h = mix(h ^ byte as u64);
        }
        h = mix(h ^ *value as u64);
    }
    mix(h ^ repetition as u64)
}

/// Runs warmups then timed repetitions of `target` at `args`.
pub fn measure(target: &TargetSpec, args: &Args, cfg: &MeasureConfig) -> Result<TimingSample> {
    let mut samples = measure_batch(target, std::slice::from_ref(args), cfg)?;
    Ok(samples.remove(0))
}

/// Measures several assignments with repetitions interleaved round-robin,
/// so slow bursts of the machine spread over every assignment instead of
/// biasing one of them.
pub fn measure_batch(
    target: &TargetSpec,
    batch: &[Args],
    cfg: &MeasureConfig,
) -> Result<Vec<TimingSample>> {
    cfg.validate()?;
    for args in batch {
        for v in &target.variables {
            if !args.contains_key(&v.name) {
                return Err(ProfileError::MissingFixed(v.name.clone()));
            }
        }
    }
    if let TargetKind::Synthetic(formula) = &target.kind {
        return Err(ProfileError::InvalidConfig(format!(
            "synthetic target `{formula}` cannot be executed"
        )));
    }
    for args in batch {
        for _ in 0..cfg.warmup_runs {
            run_once(target, args, cfg, 0)?;
        }
    }
    let mut runs = vec![Vec::with_capacity(cfg.repetitions); batch.len()];
    let mut clocks = vec![clock::in_process_clock(); batch.len()];
    for rep in 0..cfg.repetitions {
        for (i, args) in batch.iter().enumerate() {
            let (t, kind) = run_once(target, args, cfg, rep)?;
            runs[i].push(t);
            clocks[i] = kind;
        }
    }
    let resolution = match target.kind {
        // getrusage reports CPU time in microseconds
        TargetKind::External(_) => 1e-6,
        _ => clock::thread_cpu_resolution(),
    };
    Ok(batch
        .iter()
        .zip(runs.iter().zip(clocks))
        .map(|(args, (runs, kind))| {
            let mut sample = TimingSample::from_runs(args.clone(), runs, cfg.aggregator, kind);
            if sample.cpu_seconds < 100.0 * resolution {
                let msg = format!(
                    "timer resolution: {:.3e} s is below 100x the clock resolution ({:.1e} s)",
                    sample.cpu_seconds, resolution
                );
                log::warn!("{}: {msg}", target.name);
                sample.warnings.push(msg);
            }
            sample
        })
        .collect())
}

fn run_once(
    target: &TargetSpec,
    args: &Args,
    cfg: &MeasureConfig,
    rep: usize,
) -> Result<(f64, ClockKind)> {
    match &target.kind {
        TargetKind::Builtin(b) => {
            let mut rng = ChaCha8Rng::seed_from_u64(repetition_seed(cfg.seed, args, rep));
            let mut work = b.prepare(args, &mut rng)?;
            let (out, t) = clock::time_cpu(|| work.run());
            std::hint::black_box(out);
            Ok((t, clock::in_process_clock()))
        }
        TargetKind::External(cmd) => run_external(&target.name, cmd, args),
        TargetKind::Synthetic(formula) => Err(ProfileError::InvalidConfig(format!(
            "synthetic target `{formula}` cannot be executed"
        ))),
    }
}

/// Executes `cmd --var NAME=VALUE ...` once and returns its CPU time.
fn run_external(name: &str, cmd: &[String], args: &Args) -> Result<(f64, ClockKind)> {
    let mut command = Command::new(&cmd[0]);
    command
        .args(&cmd[1..])
        .stdin(Stdio::null())
        .stdout(Stdio::null())
        .stderr(Stdio::null());
    for (k, v) in args {
        command.arg("--var").arg(format!("{k}={v}"));
    }
    let failure = |reason: String| ProfileError::TargetFailure {
        target: name.to_string(),
        reason,
    };
    #[cfg(unix)]
    {
        let child = command.spawn().map_err(|e| failure(e.to_string()))?;
        let pid = child.id() as libc::pid_t;
        let mut status: libc::c_int = 0;
        // SAFETY: zeroed rusage is a valid value for the out-parameter.
        let mut usage: libc::rusage = unsafe { std::mem::zeroed() };
        // SAFETY: `pid` is our own un-reaped child; the out-pointers are valid.
        // The `Child` handle is dropped without waiting, so no double reap.
        let rc = unsafe { libc::wait4(pid, &mut status, 0, &mut usage) };
        drop(child);
        if rc != pid {
            return Err(failure(std::io::Error::last_os_error().to_string()));
        }
        if !libc::WIFEXITED(status) {
            return Err(failure("terminated by a signal".into()));
        }
        let code = libc::WEXITSTATUS(status);
        if code != 0 {
            return Err(failure(format!("exit status {code}")));
        }
        let secs = |tv: libc::timeval| tv.tv_sec as f64 + tv.tv_usec as f64 * 1e-6;
        Ok((secs(usage.ru_utime) + secs(usage.ru_stime), ClockKind::ChildCpu))
    }
    #[cfg(not(unix))]
    {
        let start = std::time::Instant::now();
        let status = command.status().map_err(|e| failure(e.to_string()))?;
        let elapsed = start.elapsed().as_secs_f64();
        if !status.success() {
            return Err(failure(format!("exit status {status}")));
        }
        Ok((elapsed, ClockKind::Wall))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::target::{Builtin, VariableSpec};

    fn args(pairs: &[(&str, i64)]) -> Args {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn aggregators() {
        assert_eq!(Aggregator::Median.apply(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(Aggregator::Median.apply(&[4.0, 1.0, 2.0, 3.0]), 2.5);
        assert_eq!(Aggregator::Mean.apply(&[1.0, 2.0, 6.0]), 3.0);
        let s = TimingSample::from_runs(Args::new(), &[1.0, 2.0, 3.0], Aggregator::Median, ClockKind::Wall);
        assert_eq!((s.cpu_seconds, s.dispersion), (2.0, 1.0));
    }

    #[test]
    fn config_validation() {
        let mut cfg = MeasureConfig::default();
        cfg.validate().unwrap();
        cfg.repetitions = 2;
        assert!(cfg.validate().is_err());
        cfg.repetitions = 3;
        cfg.warmup_runs = 0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn seeds_are_deterministic_and_distinct() {
        let a = args(&[("x", 10), ("b", 3)]);
        assert_eq!(repetition_seed(7, &a, 2), repetition_seed(7, &a, 2));
        assert_ne!(repetition_seed(7, &a, 2), repetition_seed(7, &a, 3));
        assert_ne!(repetition_seed(7, &a, 2), repetition_seed(8, &a, 2));
        assert_ne!(repetition_seed(7, &a, 2), repetition_seed(7, &args(&[("x", 11), ("b", 3)]), 2));
    }

    #[test]
    fn empty_binary_search_is_cheap() {
        let target = TargetSpec::builtin(Builtin::BinarySearch);
        let s = measure(&target, &args(&[("x", 0)]), &MeasureConfig::default()).unwrap();
        assert!(s.cpu_seconds >= 0.0);
        assert!(s.cpu_seconds < 0.01, "{}", s.cpu_seconds);
        assert_eq!(s.clock, clock::in_process_clock());
    }

    #[test]
    fn missing_argument() {
        let target = TargetSpec::builtin(Builtin::SearchSort);
        assert!(matches!(
            measure(&target, &args(&[("x", 5)]), &MeasureConfig::default()),
            Err(ProfileError::MissingFixed(v)) if v == "b"
        ));
    }

    #[cfg(unix)]
    #[test]
    fn external_failure_and_success() {
        let vars = vec![VariableSpec::new("x", 0)];
        let bad = TargetSpec::external(vec!["false".into()], vars.clone()).unwrap();
        assert!(matches!(
            measure(&bad, &args(&[("x", 1)]), &MeasureConfig::default()),
            Err(ProfileError::TargetFailure { .. })
        ));
        let good = TargetSpec::external(vec!["true".into()], vars).unwrap();
        let s = measure(&good, &args(&[("x", 1)]), &MeasureConfig::default()).unwrap();
        assert_eq!(s.clock, ClockKind::ChildCpu);
        assert!(s.cpu_seconds >= 0.0);
    }

    #[cfg(unix)]
    #[test]
    fn external_receives_var_tokens() {
        // exits 0 only if the expected tokens arrive
        let script = r#"[ "$1" = "--var" ] && [ "$2" = "n=42" ]"#;
        let t = TargetSpec::external(
            vec!["sh".into(), "-c".into(), script.into(), "sh".into()],
            vec![VariableSpec::new("n", 0)],
        )
        .unwrap();
        measure(&t, &args(&[("n", 42)]), &MeasureConfig::default()).unwrap();
        assert!(measure(&t, &args(&[("n", 41)]), &MeasureConfig::default()).is_err());
    }
}
