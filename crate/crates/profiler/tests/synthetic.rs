use std::collections::BTreeMap;

use proptest::prelude::*;
use qseg_core::BlendMode;
use qseg_profiler::{
    build_runtime_profile, detect_interaction, linspace_grid, pairwise_sweep, Args, CurveFamily, Evaluator,
    Harness, Interaction, MeasureConfig, Synthetic, TargetSpec, VariableSpec,
};

#[derive(Debug, Clone, Copy)]
enum Shape {
    Log2,
    Linear,
    Sqrt,
}

impl Shape {
    fn eval(self, v: f64) -> f64 {
        match self {
            Shape::Log2 => v.log2(),
            Shape::Linear => v,
            Shape::Sqrt => v.sqrt(),
        }
    }
}

const SHAPES: [Shape; 3] = [Shape::Log2, Shape::Linear, Shape::Sqrt];

fn pair_target(f: impl Fn(f64, f64) -> f64 + Send + 'static) -> Synthetic {
    Synthetic::new(
        "pair",
        vec![VariableSpec::new("x", 2), VariableSpec::new("b", 2)],
        move |a| f(a["x"] as f64, a["b"] as f64),
    )
}

fn grid_strategy() -> impl Strategy<Value = Vec<i64>> {
    (2i64..40, prop::collection::vec(1i64..60, 6)).prop_map(|(start, gaps)| {
        let mut g = vec![start];
        for gap in gaps {
            g.push(g.last().unwrap() + gap);
        }
        g
    })
}

fn probes_strategy() -> impl Strategy<Value = Vec<i64>> {
    (2i64..20, 1i64..50, 1i64..50).prop_map(|(p0, d1, d2)| vec![p0, p0 + d1, p0 + d1 + d2])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sums_are_additive(grid in grid_strategy(), probes in probes_strategy(), scale in 1e-9f64..1e-3) {
        for f in SHAPES {
            for g in SHAPES {
                let mut e = pair_target(move |x, b| scale * (f.eval(x) + g.eval(b)));
                let l = detect_interaction(&mut e, "x", "b", &grid, &probes, &Args::new()).unwrap();
                prop_assert_eq!(l.label, Interaction::Additive, "{:?} + {:?}", f, g);
            }
        }
    }

    #[test]
    fn products_are_composite(grid in grid_strategy(), probes in probes_strategy(), scale in 1e-9f64..1e-3) {
        for f in SHAPES {
            for g in SHAPES {
                let mut e = pair_target(move |x, b| scale * f.eval(x) * g.eval(b));
                let l = detect_interaction(&mut e, "x", "b", &grid, &probes, &Args::new()).unwrap();
                prop_assert_eq!(l.label, Interaction::Composite, "{:?} * {:?}", f, g);
            }
        }
    }

    #[test]
    fn additive_offsets_track_increment(base_b in 1i64..100, inc in 1i64..20, c in 1e-6f64..1.0) {
        let mut e = pair_target(move |x, b| c * (x.log2() + b));
        let base: Args = [("b".to_string(), base_b)].into_iter().collect();
        let sweeps = pairwise_sweep(&mut e, ("x", "b"), &base, inc, 4, &[8, 16, 32, 64, 128]).unwrap();
        let fam = CurveFamily::from_sweeps(&sweeps).unwrap();
        for off in fam.offsets {
            prop_assert!((off / (c * inc as f64) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn product_slopes_scale_with_b(base_b in 1i64..100, inc in 1i64..20) {
        let mut e = pair_target(|x, b| x * b);
        let base: Args = [("b".to_string(), base_b)].into_iter().collect();
        let sweeps = pairwise_sweep(&mut e, ("x", "b"), &base, inc, 3, &[1, 4, 9]).unwrap();
        let fam = CurveFamily::from_sweeps(&sweeps).unwrap();
        for (s, w) in fam.slopes.windows(2).enumerate() {
            let b = (base_b + inc * s as i64) as f64;
            prop_assert!((w[1] / w[0] - (b + inc as f64) / b).abs() < 1e-9);
        }
    }
}

#[test]
fn composite_example_from_reciprocal() {
    let mut e = pair_target(|x, b| 0.02 * x.log2() / b);
    let l = detect_interaction(&mut e, "x", "b", &[45, 70, 95, 150, 205, 295, 385], &[1, 5, 10], &Args::new())
        .unwrap();
    assert_eq!(l.label, Interaction::Composite);
}

#[test]
fn first_pass_respects_minimum() {
    // 1/b is undefined at b = 0, so the coarse pass must use the smallest grid value
    let mut e = Synthetic::new(
        "reciprocal",
        vec![VariableSpec::new("x", 1), VariableSpec::new("b", 1)],
        |a| {
            assert!(a["b"] > 0);
            (a["x"] as f64).log2() / a["b"] as f64
        },
    );
    let grids: BTreeMap<String, Vec<i64>> = [
        ("x".to_string(), linspace_grid(16, 1024, 7).unwrap()),
        ("b".to_string(), linspace_grid(1, 13, 7).unwrap()),
    ]
    .into_iter()
    .collect();
    let rp = build_runtime_profile(&mut e, &grids, BlendMode::default()).unwrap();
    assert_eq!(rp.first_pass_fixed["b"], 1);
    assert_eq!(rp.interactions[0].label, Interaction::Composite);
}

#[test]
fn orchestration_is_deterministic() {
    let spec = TargetSpec::builtin("search-sort".parse().unwrap());
    let grids: BTreeMap<String, Vec<i64>> = [
        ("x".to_string(), vec![4, 8, 16]),
        ("b".to_string(), vec![0, 10, 20]),
    ]
    .into_iter()
    .collect();
    let cfg = MeasureConfig {
        repetitions: 3,
        seed: 42,
        ..Default::default()
    };
    let run = || {
        let mut h = Harness::new(spec.clone(), cfg.clone()).unwrap();
        let rp = build_runtime_profile(&mut h, &grids, BlendMode::default()).unwrap();
        (h.trace().to_vec(), rp.first_pass_fixed)
    };
    let (t1, f1) = run();
    let (t2, f2) = run();
    assert_eq!(f1, f2);
    // representatives come from timings, so compare the coarse pass, which
    // is fully determined by the grids
    let coarse = 6;
    assert_eq!(t1[..coarse], t2[..coarse]);
    assert_eq!(t1.len(), t2.len());
}
