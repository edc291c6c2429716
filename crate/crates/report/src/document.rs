//! Versioned JSON document holding a profile or an approximation report.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use qseg_core::{
    classify, AccuracyReport, BlendMode, CandidateClass, PiecewisePoly, QuadraticSegment, SamplePoint,
    SampleSeries,
};
use qseg_profiler::{
    compose_summary, Interaction, MeasureConfig, ProfileClassification, RuntimeProfile, SweepResult,
    TargetKind, TargetSpec, TimingSample,
};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{io_error, ReportError, Result};

pub const FORMAT_VERSION: &str = "1.0";
/// Documents with a greater major version are rejected.
pub const SUPPORTED_MAJOR: u64 = 1;

/// Fields whose values depend on measured timings, as paths from the
/// document root (`[]` steps into every array element).
///
/// Two `profile` runs with identical flags and seed agree on everything
/// else; [`strip_timing_fields`] removes these before comparing.
pub const TIMING_VALUED_FIELDS: &[&str] = &[
    "sweeps[].fixed",
    "sweeps[].samples[].args",
    "sweeps[].samples[].cpu_seconds",
    "sweeps[].samples[].dispersion",
    "sweeps[].samples[].warnings",
    "representatives",
    "profiles[].fixed",
    "profiles[].series",
    "profiles[].segments",
    "profiles[].validation_error",
    "interactions[].label",
    "interactions[].evidence",
    "interactions[].spreads",
    "interactions[].allowed",
    "classification",
    "k_hint",
];

/// Non-finite floats are written as the strings `"inf"`, `"-inf"`, `"NaN"`.
mod real {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if v.is_nan() {
            s.serialize_str("NaN")
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Text(t) => match t.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "NaN" => Ok(f64::NAN),
                other => Err(serde::de::Error::custom(format!("not a number: `{other}`"))),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariableRecord {
    pub name: String,
    pub min_value: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetDescriptor {
    pub name: String,
    /// `builtin`, `external`, `synthetic`, `function` or `series`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub command: Vec<String>,
    #[serde(default)]
    pub variables: Vec<VariableRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<[f64; 2]>,
}

impl TargetDescriptor {
    pub fn from_spec(spec: &TargetSpec) -> Self {
        let (kind, command) = match &spec.kind {
            TargetKind::Builtin(_) => ("builtin", Vec::new()),
            TargetKind::External(cmd) => ("external", cmd.clone()),
            TargetKind::Synthetic(_) => ("synthetic", Vec::new()),
        };
        TargetDescriptor {
            name: spec.name.clone(),
            kind: kind.to_string(),
            command,
            variables: spec
                .variables
                .iter()
                .map(|v| VariableRecord {
                    name: v.name.clone(),
                    min_value: v.min_value,
                })
                .collect(),
            domain: None,
        }
    }

    /// A named function or a series file approximated over `domain`.
    pub fn approximation(name: impl Into<String>, kind: &str, domain: (f64, f64)) -> Self {
        TargetDescriptor {
            name: name.into(),
            kind: kind.to_string(),
            command: Vec::new(),
            variables: vec![VariableRecord {
                name: "x".into(),
                min_value: i64::MIN,
            }],
            domain: Some([domain.0, domain.1]),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub repetitions: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warmup_runs: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aggregator: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub grids: BTreeMap<String, Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub segments: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spacing: Option<String>,
}

impl Default for ConfigEcho {
    fn default() -> Self {
        ConfigEcho {
            mode: BlendMode::default().as_str().to_string(),
            seed: None,
            repetitions: None,
            warmup_runs: None,
            aggregator: None,
            grids: BTreeMap::new(),
            segments: None,
            spacing: None,
        }
    }
}

impl ConfigEcho {
    pub fn from_measure(cfg: &MeasureConfig, mode: BlendMode, grids: &BTreeMap<String, Vec<i64>>) -> Self {
        ConfigEcho {
            mode: mode.as_str().to_string(),
            seed: Some(cfg.seed),
            repetitions: Some(cfg.repetitions),
            warmup_runs: Some(cfg.warmup_runs),
            aggregator: Some(cfg.aggregator.as_str().to_string()),
            grids: grids.clone(),
            segments: None,
            spacing: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepRole {
    /// Others held at 0 or at their smallest grid value.
    Coarse,
    /// Others held at their representative values.
    Final,
    /// One curve of an interaction probe.
    Interaction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub args: BTreeMap<String, i64>,
    pub cpu_seconds: f64,
    pub dispersion: f64,
    pub clock: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl From<&TimingSample> for SampleRecord {
    fn from(s: &TimingSample) -> Self {
        SampleRecord {
            args: s.args.clone(),
            cpu_seconds: s.cpu_seconds,
            dispersion: s.dispersion,
            clock: s.clock.as_str().to_string(),
            warnings: s.warnings.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub role: SweepRole,
    pub variable: String,
    pub fixed: BTreeMap<String, i64>,
    pub samples: Vec<SampleRecord>,
}

impl SweepRecord {
    fn new(role: SweepRole, sweep: &SweepResult) -> Self {
        SweepRecord {
            role,
            variable: sweep.swept_variable.clone(),
            fixed: sweep.fixed_values.clone(),
            samples: sweep.samples.iter().map(SampleRecord::from).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointRecord {
    pub x: f64,
    pub y: f64,
}

/// One quadratic piece `a x² + b x + c` on `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentRecord {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub lo: f64,
    pub hi: f64,
    pub mode: String,
}

impl From<&QuadraticSegment<f64>> for SegmentRecord {
    fn from(s: &QuadraticSegment<f64>) -> Self {
        SegmentRecord {
            a: s.a,
            b: s.b,
            c: s.c,
            lo: s.lo,
            hi: s.hi,
            mode: s.mode.as_str().to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileRecord {
    pub variable: String,
    #[serde(default)]
    pub fixed: BTreeMap<String, i64>,
    pub mode: String,
    pub series: Vec<PointRecord>,
    pub segments: Vec<SegmentRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub validation_error: Option<f64>,
}

impl ProfileRecord {
    pub fn new(
        variable: &str,
        fixed: BTreeMap<String, i64>,
        series: &SampleSeries<f64>,
        model: &PiecewisePoly<f64>,
        validation_error: Option<f64>,
    ) -> Self {
        ProfileRecord {
            variable: variable.to_string(),
            fixed,
            mode: model.mode().as_str().to_string(),
            series: series.points().iter().map(|p| PointRecord { x: p.x, y: p.y }).collect(),
            segments: model.segments().iter().map(SegmentRecord::from).collect(),
            validation_error,
        }
    }

    pub fn series(&self) -> Result<SampleSeries<f64>> {
        let points = self.series.iter().map(|p| SamplePoint::new(p.x, p.y)).collect();
        Ok(SampleSeries::with_label(points, self.variable.clone())?)
    }

    /// Rebuilds the piecewise model from the stored coefficients.
    pub fn model(&self) -> Result<PiecewisePoly<f64>> {
        let mode: BlendMode = self
            .mode
            .parse()
            .map_err(|e| ReportError::Document(format!("profile `{}`: {e}", self.variable)))?;
        let segments = self
            .segments
            .iter()
            .map(|s| {
                let m: BlendMode = s
                    .mode
                    .parse()
                    .map_err(|e| ReportError::Document(format!("segment mode: {e}")))?;
                Ok(QuadraticSegment::from_coeffs(s.a, s.b, s.c, s.lo, s.hi, m)?)
            })
            .collect::<Result<Vec<_>>>()?;
        if segments.is_empty() {
            return Err(ReportError::Document(format!(
                "profile `{}` has no segments",
                self.variable
            )));
        }
        Ok(PiecewisePoly::from_segments(segments, mode)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InteractionRecord {
    pub pair: [String; 2],
    pub label: String,
    #[serde(with = "real")]
    pub evidence: f64,
    pub threshold: f64,
    pub probes: Vec<i64>,
    pub spreads: Vec<f64>,
    pub allowed: Vec<f64>,
}

impl InteractionRecord {
    pub fn interaction(&self) -> Option<Interaction> {
        self.label.parse().ok()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitRecord {
    pub class: String,
    pub k: f64,
    pub c: f64,
    pub rmse: f64,
    #[serde(with = "real")]
    pub normalized_rmse: f64,
    #[serde(default)]
    pub excluded: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariableClassification {
    pub variable: String,
    pub winner: String,
    #[serde(with = "real")]
    pub margin: f64,
    pub ranked: Vec<FitRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl VariableClassification {
    pub fn new(variable: &str, report: &qseg_core::ClassificationReport<f64>) -> Self {
        VariableClassification {
            variable: variable.to_string(),
            winner: report.winner().class.name().to_string(),
            margin: report.margin(),
            ranked: report
                .ranked
                .iter()
                .map(|f| FitRecord {
                    class: f.class.name().to_string(),
                    k: f.k,
                    c: f.c,
                    rmse: f.rmse,
                    normalized_rmse: f.normalized_rmse,
                    excluded: f.excluded,
                })
                .collect(),
            warnings: report.warnings.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationRecord {
    pub summary: String,
    pub candidates: Vec<String>,
    pub variables: Vec<VariableClassification>,
}

impl ClassificationRecord {
    pub fn from_profile(c: &ProfileClassification, candidates: &[CandidateClass]) -> Self {
        ClassificationRecord {
            summary: c.summary.clone(),
            candidates: candidates.iter().map(|c| c.name().to_string()).collect(),
            variables: c
                .reports
                .iter()
                .map(|(v, r)| VariableClassification::new(v, r))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentAccuracyRecord {
    pub lo: f64,
    pub hi: f64,
    pub integral_reference: f64,
    pub integral_model: f64,
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccuracyRecord {
    pub reference: String,
    pub aggregate: f64,
    pub total_reference: f64,
    pub total_model: f64,
    pub per_segment: Vec<SegmentAccuracyRecord>,
}

impl AccuracyRecord {
    pub fn new(reference: &str, report: &AccuracyReport<f64>) -> Self {
        AccuracyRecord {
            reference: reference.to_string(),
            aggregate: report.aggregate,
            total_reference: report.total_reference,
            total_model: report.total_model,
            per_segment: report
                .per_segment
                .iter()
                .map(|s| SegmentAccuracyRecord {
                    lo: s.lo,
                    hi: s.hi,
                    integral_reference: s.integral_reference,
                    integral_model: s.integral_model,
                    ratio: s.ratio,
                })
                .collect(),
        }
    }
}

/// Everything written by `profile` and `approx`.
///
/// Unknown fields are ignored on read so newer minor versions stay readable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileDocument {
    pub format_version: String,
    pub target: TargetDescriptor,
    #[serde(default)]
    pub config: ConfigEcho,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sweeps: Vec<SweepRecord>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub first_pass_fixed: BTreeMap<String, i64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub representatives: BTreeMap<String, i64>,
    #[serde(default)]
    pub profiles: Vec<ProfileRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub interactions: Vec<InteractionRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classification: Option<ClassificationRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub accuracy: Option<AccuracyRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_hint: Option<f64>,
}

impl ProfileDocument {
    pub fn from_profile(rp: &RuntimeProfile, cfg: &MeasureConfig) -> Result<Self> {
        let mut sweeps = Vec::new();
        sweeps.extend(rp.coarse.iter().map(|p| SweepRecord::new(SweepRole::Coarse, &p.sweep)));
        if rp.profiles.len() > 1 {
            sweeps.extend(rp.profiles.iter().map(|p| SweepRecord::new(SweepRole::Final, &p.sweep)));
        }
        for l in &rp.interactions {
            sweeps.extend(l.curves.iter().map(|c| SweepRecord::new(SweepRole::Interaction, c)));
        }
        let profiles = rp
            .profiles
            .iter()
            .map(|p| {
                Ok(ProfileRecord::new(
                    &p.variable,
                    p.fixed_values.clone(),
                    p.series(),
                    &p.model,
                    Some(p.validation_error()?),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ProfileDocument {
            format_version: FORMAT_VERSION.to_string(),
            target: TargetDescriptor::from_spec(&rp.target),
            config: ConfigEcho::from_measure(cfg, rp.mode, &rp.grids),
            sweeps,
            first_pass_fixed: rp.first_pass_fixed.clone(),
            representatives: rp.representatives.clone(),
            profiles,
            interactions: rp
                .interactions
                .iter()
                .map(|l| InteractionRecord {
                    pair: [l.pair.0.clone(), l.pair.1.clone()],
                    label: l.label.as_str().to_string(),
                    evidence: l.evidence,
                    threshold: l.threshold,
                    probes: l.probes.clone(),
                    spreads: l.spreads.clone(),
                    allowed: l.allowed.clone(),
                })
                .collect(),
            classification: None,
            accuracy: None,
            k_hint: rp.k_hint,
        })
    }

    /// A single profile `x` built from `series`, with optional accuracy.
    pub fn from_approximation(
        target: TargetDescriptor,
        config: ConfigEcho,
        series: &SampleSeries<f64>,
        model: &PiecewisePoly<f64>,
        accuracy: Option<AccuracyRecord>,
    ) -> Result<Self> {
        let validation = qseg_core::validate_profile(model, series)?;
        Ok(ProfileDocument {
            format_version: FORMAT_VERSION.to_string(),
            target,
            config,
            sweeps: Vec::new(),
            first_pass_fixed: BTreeMap::new(),
            representatives: BTreeMap::new(),
            profiles: vec![ProfileRecord::new("x", BTreeMap::new(), series, model, Some(validation))],
            interactions: Vec::new(),
            classification: None,
            accuracy,
            k_hint: None,
        })
    }

    pub fn profile(&self, variable: &str) -> Option<&ProfileRecord> {
        self.profiles.iter().find(|p| p.variable == variable)
    }

    fn interaction(&self, a: &str, b: &str) -> Option<Interaction> {
        self.interactions
            .iter()
            .find(|l| (l.pair[0] == a && l.pair[1] == b) || (l.pair[0] == b && l.pair[1] == a))
            .and_then(InteractionRecord::interaction)
    }

    /// Classifies every stored profile series and records the result.
    pub fn classify(&mut self, candidates: &[CandidateClass]) -> Result<&ClassificationRecord> {
        let mut variables = Vec::with_capacity(self.profiles.len());
        let mut winners = Vec::with_capacity(self.profiles.len());
        for p in &self.profiles {
            let report = classify(&p.series()?, candidates)?;
            winners.push((p.variable.clone(), report.winner().class));
            variables.push(VariableClassification::new(&p.variable, &report));
        }
        let summary = compose_summary(&winners, |a, b| self.interaction(a, b));
        if let [only] = variables.as_slice() {
            self.k_hint = Some(only.ranked[0].k);
        }
        Ok(self.classification.insert(ClassificationRecord {
            summary,
            candidates: candidates.iter().map(|c| c.name().to_string()).collect(),
            variables,
        }))
    }

    /// Pretty JSON with a trailing newline; identical documents give identical bytes.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serialization cannot fail");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| ReportError::Document(e.to_string()))?;
        check_version(&value)?;
        serde_json::from_value(value).map_err(|e| ReportError::Document(e.to_string()))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::from_json(&fs::read_to_string(path).map_err(io_error(path))?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json()).map_err(io_error(path))
    }
}

fn check_version(value: &Value) -> Result<()> {
    let found = value
        .get("format_version")
        .and_then(Value::as_str)
        .ok_or_else(|| ReportError::Document("missing `format_version`".into()))?;
    let major: u64 = found
        .split('.')
        .next()
        .and_then(|m| m.parse().ok())
        .ok_or_else(|| ReportError::Document(format!("bad format version `{found}`")))?;
    if major > SUPPORTED_MAJOR {
        return Err(ReportError::UnsupportedVersion {
            found: found.to_string(),
            supported: SUPPORTED_MAJOR,
        });
    }
    Ok(())
}

/// Removes every [`TIMING_VALUED_FIELDS`] path from a parsed document.
pub fn strip_timing_fields(doc: &mut Value) {
    for path in TIMING_VALUED_FIELDS {
        let steps: Vec<&str> = path.split('.').collect();
        strip(doc, &steps);
    }
}

fn strip(v: &mut Value, steps: &[&str]) {
    let Some((first, rest)) = steps.split_first() else {
        return;
    };
    let (key, each) = match first.strip_suffix("[]") {
        Some(k) => (k, true),
        None => (*first, false),
    };
    let Some(obj) = v.as_object_mut() else {
        return;
    };
    if rest.is_empty() && !each {
        obj.remove(key);
        return;
    }
    let Some(child) = obj.get_mut(key) else {
        return;
    };
    if each {
        if let Some(items) = child.as_array_mut() {
            for item in items {
                strip(item, rest);
            }
        }
    } else {
        strip(child, rest);
    }
}
