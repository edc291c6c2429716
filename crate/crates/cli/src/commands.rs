use std::collections::BTreeMap;
use std::io::Write;

use anyhow::Context;
use qseg_core::{
    accuracy_vs, build_on_knots, build_piecewise, classify as rank, default_candidates, midpoint_series,
    rel_diff, CandidateClass, PiecewisePoly,
};
use qseg_profiler::{
    build_runtime_profile, parse_grid_spec, Harness, MeasureConfig, TargetSpec, VariableSpec,
};
use qseg_report::{
    emit_plot_data, read_series, AccuracyRecord, ConfigEcho, ProfileDocument, TargetDescriptor,
    VariableClassification,
};

use crate::args::{ApproxArgs, ClassifyArgs, EvalArgs, ProfileArgs};
use crate::error::{usage, CliResult};

/// Relative gap above which two one-sided values count as different.
const SIDE_TOL: f64 = 1e-9;

pub fn approx(a: ApproxArgs, out: &mut dyn Write) -> CliResult {
    let (doc, model, reference) = if let Some(path) = &a.input {
        let series = read_series(path)?;
        let model = build_piecewise(&series, a.mode)?;
        let target = TargetDescriptor::approximation(path.display().to_string(), "series", model.domain());
        let config = ConfigEcho {
            mode: a.mode.as_str().into(),
            segments: Some(model.segments().len()),
            ..Default::default()
        };
        let doc = ProfileDocument::from_approximation(target, config, &series, &model, None)?;
        (doc, model, None)
    } else {
        let func = a.function.expect("clap enforces one source");
        let (from, to, segments, spacing) = func.benchmark_layout();
        let (from, to) = (a.from.unwrap_or(from), a.to.unwrap_or(to));
        let segments = a.segments.unwrap_or(segments);
        let spacing = a.spacing.unwrap_or(spacing);
        if !(from < to) {
            return Err(usage(format!("--from ({from}) must be below --to ({to})")));
        }
        if segments == 0 {
            return Err(usage("--segments must be at least 1"));
        }
        let reference = func.reference();
        if !reference.covers(from, to) {
            return Err(usage(format!("{func} is not defined on [{from}, {to}]")));
        }
        let knots = spacing.knots(from, to, segments)?;
        let series = midpoint_series(&knots, |x| func.eval(x))?;
        let model = build_on_knots(&knots, |x| func.eval(x), a.mode)?;
        let report = accuracy_vs(&model, &reference)?;
        let target = TargetDescriptor::approximation(func.to_string(), "function", (from, to));
        let config = ConfigEcho {
            mode: a.mode.as_str().into(),
            segments: Some(segments),
            spacing: Some(spacing.as_str().into()),
            ..Default::default()
        };
        let accuracy = AccuracyRecord::new(func.to_string().as_str(), &report);
        let doc = ProfileDocument::from_approximation(target, config, &series, &model, Some(accuracy))?;
        (doc, model, Some(reference))
    };

    writeln!(out, "{} ({} mode)", doc.target.name, a.mode)?;
    print_segments(&model, out)?;
    if let Some(acc) = &doc.accuracy {
        writeln!(out, "A = {:.6}", acc.aggregate)?;
    }
    if let Some(v) = doc.profiles[0].validation_error {
        writeln!(out, "sample-average error = {v:.3e}")?;
    }
    if let Some(path) = &a.out {
        doc.write(path)?;
    }
    if let Some(path) = &a.plot {
        emit_plot_data(&model, reference.as_ref(), path)?;
    }
    Ok(())
}

fn print_segments(model: &PiecewisePoly<f64>, out: &mut dyn Write) -> std::io::Result<()> {
    for (i, s) in model.segments().iter().enumerate() {
        writeln!(
            out,
            "  [{i}] {:>12.6} .. {:<12.6} a={:+.6e} b={:+.6e} c={:+.6e} ({})",
            s.lo,
            s.hi,
            s.a,
            s.b,
            s.c,
            s.concavity()
        )?;
    }
    Ok(())
}

pub fn profile(a: ProfileArgs, out: &mut dyn Write) -> CliResult {
    let mut grids: BTreeMap<String, Vec<i64>> = BTreeMap::new();
    let mut order = Vec::new();
    for spec in &a.grids {
        let (name, grid) = parse_grid_spec(spec).map_err(|e| usage(e.to_string()))?;
        if grids.insert(name.clone(), grid).is_some() {
            return Err(usage(format!("grid for `{name}` given twice")));
        }
        order.push(name);
    }
    let target = match (&a.target, &a.exec) {
        (Some(b), _) => {
            let spec = TargetSpec::builtin(*b);
            if grids.is_empty() {
                for v in &spec.variables {
                    grids.insert(v.name.clone(), b.default_grid(&v.name).expect("builtin default grid"));
                }
            }
            spec
        }
        (None, Some(cmd)) => {
            if grids.is_empty() {
                return Err(usage("--exec needs at least one --grid"));
            }
            // the command is only ever called with values from its grids
            let vars = order
                .iter()
                .map(|n| VariableSpec::new(n.clone(), grids[n][0]))
                .collect();
            let argv = shell_words::split(cmd).map_err(|e| usage(format!("--exec: {e}")))?;
            TargetSpec::external(argv, vars).map_err(|e| usage(e.to_string()))?
        }
        (None, None) => unreachable!("clap enforces one source"),
    };
    for v in &target.variables {
        if !grids.contains_key(&v.name) {
            return Err(usage(format!("no --grid for variable `{}` of {}", v.name, target.name)));
        }
    }
    for name in grids.keys() {
        if target.variable(name).is_none() {
            return Err(usage(format!("{} has no variable `{name}`", target.name)));
        }
    }
    let cfg = MeasureConfig {
        warmup_runs: a.warmup,
        repetitions: a.reps,
        aggregator: a.aggregator,
        seed: a.seed,
    };
    cfg.validate().map_err(|e| usage(e.to_string()))?;
    let mut harness = Harness::new(target, cfg.clone())?;
    let rp = build_runtime_profile(&mut harness, &grids, a.mode)?;
    let doc = ProfileDocument::from_profile(&rp, &cfg)?;

    writeln!(out, "{} (seed {}, {} repetitions)", rp.target.name, cfg.seed, cfg.repetitions)?;
    for p in &rp.profiles {
        let held: Vec<String> = p.fixed_values.iter().map(|(k, v)| format!("{k}={v}")).collect();
        if held.is_empty() {
            writeln!(out, "{}:", p.variable)?;
        } else {
            writeln!(out, "{} (holding {}):", p.variable, held.join(", "))?;
        }
        print_segments(&p.model, out)?;
    }
    for l in &rp.interactions {
        writeln!(
            out,
            "{} × {}: {} (evidence {:.3}, threshold {})",
            l.pair.0, l.pair.1, l.label, l.evidence, l.threshold
        )?;
    }
    if let Some(path) = &a.out {
        doc.write(path)?;
    }
    Ok(())
}

fn print_ranking(v: &VariableClassification, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "  {:<10} {:>14} {:>14} {:>12}", "class", "k", "C", "nrmse")?;
    for f in &v.ranked {
        let note = if f.excluded > 0 {
            format!("  ({} point(s) excluded)", f.excluded)
        } else {
            String::new()
        };
        writeln!(
            out,
            "  {:<10} {:>14.6e} {:>14.6e} {:>12.4e}{note}",
            f.class, f.k, f.c, f.normalized_rmse
        )?;
    }
    for w in &v.warnings {
        log::warn!("{}: {w}", v.variable);
    }
    Ok(())
}

pub fn classify(a: ClassifyArgs, out: &mut dyn Write) -> CliResult {
    let candidates: Vec<CandidateClass> = a.candidates.clone().unwrap_or_else(default_candidates);
    if candidates.len() < 2 {
        return Err(usage("--candidates needs at least two classes"));
    }
    if let Some(path) = &a.input {
        let series = read_series(path)?;
        let v = VariableClassification::new("x", &rank(&series, &candidates)?);
        writeln!(out, "winner: {}", v.winner)?;
        print_ranking(&v, out)?;
        return Ok(());
    }
    let path = a.profile.as_ref().expect("clap enforces one source");
    let mut doc = ProfileDocument::read(path)?;
    let record = doc.classify(&candidates)?.clone();
    for v in &record.variables {
        writeln!(out, "{}: winner {}", v.variable, v.winner)?;
        print_ranking(v, out)?;
    }
    writeln!(out, "summary: {}", record.summary)?;
    doc.write(path)?;
    Ok(())
}

pub fn eval(a: EvalArgs, out: &mut dyn Write) -> CliResult {
    let doc = ProfileDocument::read(&a.model)?;
    let record = match &a.variable {
        Some(v) => doc
            .profile(v)
            .ok_or_else(|| usage(format!("document has no profile for `{v}`")))?,
        None => match doc.profiles.as_slice() {
            [only] => only,
            [] => return Err(anyhow::anyhow!("document holds no profiles").into()),
            _ => {
                let names: Vec<&str> = doc.profiles.iter().map(|p| p.variable.as_str()).collect();
                return Err(usage(format!("pick a profile with --var ({})", names.join(", "))));
            }
        },
    };
    let model = record
        .model()
        .with_context(|| format!("profile `{}`", record.variable))?;
    let x = a.at;
    let i = model.segment_index(x)?;
    let segs = model.segments();
    let at_knot = i + 1 < segs.len() && x == segs[i].hi;
    if a.derivative {
        let d = model.derivative_at(x)?;
        writeln!(out, "{:?} {:?}", d.left, d.right)?;
        if rel_diff(d.left, d.right) > SIDE_TOL {
            eprintln!("warning: not differentiable at x = {x} (left and right derivatives differ)");
        }
    } else {
        let v = model.evaluate(x)?;
        writeln!(out, "{v:?}")?;
        if at_knot {
            let right = segs[i + 1].eval(x);
            if rel_diff(v, right) > SIDE_TOL {
                eprintln!("warning: model jumps at knot x = {x}; right-hand value is {right:?}");
            }
        }
    }
    Ok(())
}
