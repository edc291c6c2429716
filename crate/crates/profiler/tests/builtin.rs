//! Real CPU-time measurements; tolerances are loose enough for a shared machine.

use std::collections::BTreeMap;

use qseg_core::BlendMode;
use qseg_profiler::{
    build_runtime_profile, measure, sweep_single, Args, Builtin, Harness, MeasureConfig, ProfileError,
    TargetSpec, VariableSpec,
};

fn default_grids(b: Builtin) -> BTreeMap<String, Vec<i64>> {
    b.variables()
        .iter()
        .map(|v| (v.name.clone(), b.default_grid(&v.name).unwrap()))
        .collect()
}

fn x(v: i64) -> Args {
    [("x".to_string(), v)].into_iter().collect()
}

#[test]
fn empty_search_is_near_the_floor() {
    let s = measure(
        &TargetSpec::builtin(Builtin::BinarySearch),
        &x(0),
        &MeasureConfig::default(),
    )
    .unwrap();
    assert!(s.cpu_seconds >= 0.0);
    assert!(s.cpu_seconds < 1e-2);
}

#[test]
fn repeated_measurements_agree() {
    let t = TargetSpec::builtin(Builtin::MergeSort);
    let cfg = MeasureConfig {
        seed: 3,
        ..Default::default()
    };
    let a = measure(&t, &x(4096), &cfg).unwrap();
    let b = measure(&t, &x(4096), &cfg).unwrap();
    let bound = 3.0 * (a.dispersion + b.dispersion) + 0.05 * a.cpu_seconds.max(b.cpu_seconds);
    assert!(
        (a.cpu_seconds - b.cpu_seconds).abs() <= bound,
        "{} vs {} (bound {bound})",
        a.cpu_seconds,
        b.cpu_seconds
    );
}

#[test]
fn superlinear_workload_is_monotone() {
    let grid = Builtin::MergeSort.default_grid("x").unwrap();
    let (mut up, mut total) = (0, 0);
    for seed in 0..5 {
        let cfg = MeasureConfig {
            seed,
            ..Default::default()
        };
        let mut h = Harness::new(TargetSpec::builtin(Builtin::MergeSort), cfg).unwrap();
        let sweep = sweep_single(&mut h, "x", &grid, &Args::new()).unwrap();
        let ys: Vec<f64> = sweep.series.ys().collect();
        up += ys.windows(2).filter(|w| w[1] >= w[0]).count();
        total += ys.len() - 1;
    }
    assert!(up as f64 >= 0.9 * total as f64, "{up}/{total} nondecreasing");
}

#[test]
fn models_track_their_sweeps() {
    for b in Builtin::ALL {
        let mut h = Harness::new(TargetSpec::builtin(b), MeasureConfig::default()).unwrap();
        let rp = build_runtime_profile(&mut h, &default_grids(b), BlendMode::default()).unwrap();
        assert_eq!(rp.profiles.len(), b.variables().len());
        let n = b.variables().len();
        assert_eq!(rp.interactions.len(), n * (n - 1) / 2);
        for p in &rp.profiles {
            let err = p.validation_error().unwrap();
            assert!(err < 0.1, "{b} / {}: {err}", p.variable);
        }
    }
}

#[cfg(unix)]
#[test]
fn external_failure_is_reported() {
    let t = TargetSpec::external(vec!["false".into()], vec![VariableSpec::new("x", 0)]).unwrap();
    let err = measure(&t, &x(1), &MeasureConfig::default()).unwrap_err();
    assert!(matches!(err, ProfileError::TargetFailure { .. }));
}

#[cfg(unix)]
#[test]
fn external_command_receives_arguments() {
    // succeeds only when invoked with exactly `--var x=7`
    let script = r#"[ "$1" = "--var" ] && [ "$2" = "x=7" ] && [ $# -eq 2 ]"#;
    let t = TargetSpec::external(
        vec!["sh".into(), "-c".into(), script.into(), "sh".into()],
        vec![VariableSpec::new("x", 0)],
    )
    .unwrap();
    assert!(measure(&t, &x(7), &MeasureConfig::default()).is_ok());
    assert!(measure(&t, &x(8), &MeasureConfig::default()).is_err());
}
