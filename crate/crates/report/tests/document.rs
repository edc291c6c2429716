use std::collections::BTreeMap;

use qseg_core::{accuracy_vs, build_on_knots, default_candidates, BlendMode, StandardFn};
use qseg_profiler::{build_runtime_profile, linspace_grid, MeasureConfig, Synthetic, VariableSpec};
use qseg_report::{
    strip_timing_fields, AccuracyRecord, ConfigEcho, ProfileDocument, ReportError, TargetDescriptor,
};
use serde_json::Value;

fn approx_doc() -> ProfileDocument {
    let knots = [8.0, 16.0, 32.0, 64.0];
    let series = qseg_core::midpoint_series(&knots, f64::log2).unwrap();
    let pw = build_on_knots(&knots, f64::log2, BlendMode::EndpointSecant).unwrap();
    let report = accuracy_vs(&pw, &StandardFn::Log2.reference()).unwrap();
    ProfileDocument::from_approximation(
        TargetDescriptor::approximation("log2", "function", (8.0, 64.0)),
        ConfigEcho {
            segments: Some(3),
            spacing: Some("geometric".into()),
            ..Default::default()
        },
        &series,
        &pw,
        Some(AccuracyRecord::new("log2", &report)),
    )
    .unwrap()
}

fn additive_profile_doc(seed: u64) -> ProfileDocument {
    let vars = vec![VariableSpec::new("x", 1), VariableSpec::new("b", 0)];
    let mut e = Synthetic::new("sum", vars, |a| 1e-6 * ((a["x"] as f64).log2() + a["b"] as f64))
        .with_noise(1e-6, seed);
    let grids: BTreeMap<String, Vec<i64>> = [
        ("x".to_string(), linspace_grid(2, 1024, 33).unwrap()),
        ("b".to_string(), linspace_grid(5, 705, 7).unwrap()),
    ]
    .into_iter()
    .collect();
    let rp = build_runtime_profile(&mut e, &grids, BlendMode::default()).unwrap();
    let cfg = MeasureConfig {
        seed,
        ..Default::default()
    };
    ProfileDocument::from_profile(&rp, &cfg).unwrap()
}

#[test]
fn reserialization_is_byte_stable() {
    let doc = approx_doc();
    let text = doc.to_json();
    let back = ProfileDocument::from_json(&text).unwrap();
    assert_eq!(back, doc);
    assert_eq!(back.to_json(), text);
}

#[test]
fn model_survives_round_trip() {
    let doc = approx_doc();
    let back = ProfileDocument::from_json(&doc.to_json()).unwrap();
    let a = doc.profile("x").unwrap().model().unwrap();
    let b = back.profile("x").unwrap().model().unwrap();
    for x in [8.0, 9.5, 16.0, 30.0, 64.0] {
        assert_eq!(a.evaluate(x).unwrap().to_bits(), b.evaluate(x).unwrap().to_bits());
    }
    assert!((back.accuracy.unwrap().aggregate - 0.994_186_754_086).abs() < 1e-6);
}

#[test]
fn unknown_fields_are_ignored() {
    let mut v: Value = serde_json::from_str(&approx_doc().to_json()).unwrap();
    v["format_version"] = "1.7".into();
    v["added_later"] = serde_json::json!({"anything": [1, 2]});
    v["profiles"][0]["extra"] = true.into();
    let doc = ProfileDocument::from_json(&v.to_string()).unwrap();
    assert_eq!(doc.profiles.len(), 1);
}

#[test]
fn newer_major_version_rejected() {
    let mut v: Value = serde_json::from_str(&approx_doc().to_json()).unwrap();
    v["format_version"] = "2.0".into();
    assert!(matches!(
        ProfileDocument::from_json(&v.to_string()),
        Err(ReportError::UnsupportedVersion { .. })
    ));
    v.as_object_mut().unwrap().remove("format_version");
    assert!(ProfileDocument::from_json(&v.to_string()).is_err());
}

#[test]
fn classification_is_recorded_in_place() {
    let mut doc = additive_profile_doc(1);
    assert_eq!(doc.interactions.len(), 1);
    assert_eq!(doc.interactions[0].label, "additive");
    let summary = doc.classify(&default_candidates()).unwrap().summary.clone();
    assert_eq!(summary, "log(x) + linear(b)");
    let back = ProfileDocument::from_json(&doc.to_json()).unwrap();
    assert_eq!(back.classification.unwrap().summary, summary);
}

#[test]
fn infinite_margin_round_trips() {
    let mut doc = approx_doc();
    doc.classify(&default_candidates()).unwrap();
    doc.classification.as_mut().unwrap().variables[0].margin = f64::INFINITY;
    let text = doc.to_json();
    assert!(text.contains("\"margin\": \"inf\""));
    let back = ProfileDocument::from_json(&text).unwrap();
    assert_eq!(back.classification.unwrap().variables[0].margin, f64::INFINITY);
}

#[test]
fn timing_fields_cover_all_differences() {
    // different noise seeds stand in for two timing runs of the same command
    let strip = |d: ProfileDocument| {
        let mut v: Value = serde_json::from_str(&d.to_json()).unwrap();
        v["config"]["seed"] = 0.into();
        strip_timing_fields(&mut v);
        v
    };
    let a = strip(additive_profile_doc(1));
    let b = strip(additive_profile_doc(2));
    assert_eq!(a, b);
    assert!(a["sweeps"][0]["samples"][0].get("cpu_seconds").is_none());
    assert!(a["sweeps"][0]["samples"][0].get("clock").is_some());
    assert!(a.get("target").is_some());
}
