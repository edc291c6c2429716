//! Dense evaluation tables for plotting a model against its reference.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use qseg_core::{rel_diff, PiecewisePoly, ReferenceFn};

use crate::error::{io_error, Result};

/// Evaluation points strictly inside each segment.
pub const POINTS_PER_SEGMENT: usize = 200;
/// Knot values closer than this (relative) are written as a single row.
pub const KNOT_JUMP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlotRow {
    pub x: f64,
    pub f: f64,
    pub g: Option<f64>,
    pub segment_index: usize,
    /// Row sits exactly on an interior knot.
    pub knot: bool,
}

/// Domain endpoints, [`POINTS_PER_SEGMENT`] interior points per segment and
/// every interior knot. A knot where the two neighbouring segments disagree
/// gets one row per side.
pub fn plot_rows(pw: &PiecewisePoly<f64>, reference: Option<&ReferenceFn<f64>>) -> Vec<PlotRow> {
    let segs = pw.segments();
    let g = |x: f64| reference.filter(|r| r.covers(x, x)).map(|r| r.eval(x));
    let row = |x: f64, i: usize, knot: bool| PlotRow {
        x,
        f: segs[i].eval(x),
        g: g(x),
        segment_index: i,
        knot,
    };
    let mut rows = Vec::with_capacity(segs.len() * (POINTS_PER_SEGMENT + 2));
    rows.push(row(segs[0].lo, 0, false));
    for (i, s) in segs.iter().enumerate() {
        let step = (s.hi - s.lo) / (POINTS_PER_SEGMENT + 1) as f64;
        rows.extend((1..=POINTS_PER_SEGMENT).map(|j| row(s.lo + step * j as f64, i, false)));
        if i + 1 < segs.len() {
            let left = row(s.hi, i, true);
            let right = row(s.hi, i + 1, true);
            rows.push(left);
            if rel_diff(left.f, right.f) > KNOT_JUMP_TOL {
                rows.push(right);
            }
        }
    }
    let last = segs.len() - 1;
    rows.push(row(segs[last].hi, last, false));
    rows
}

/// Writes `x,F[,G],segment_index,knot`; the `G` column appears only with a reference.
pub fn write_plot_data_to<W: Write>(
    pw: &PiecewisePoly<f64>,
    reference: Option<&ReferenceFn<f64>>,
    writer: W,
) -> std::io::Result<usize> {
    let rows = plot_rows(pw, reference);
    let mut w = csv::Writer::from_writer(writer);
    let with_g = reference.is_some();
    if with_g {
        w.write_record(["x", "F", "G", "segment_index", "knot"])?;
    } else {
        w.write_record(["x", "F", "segment_index", "knot"])?;
    }
    for r in &rows {
        let mut rec = vec![format!("{:?}", r.x), format!("{:?}", r.f)];
        if with_g {
            rec.push(r.g.map(|g| format!("{g:?}")).unwrap_or_default());
        }
        rec.push(r.segment_index.to_string());
        rec.push(u8::from(r.knot).to_string());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(rows.len())
}

/// Writes the plot table to `path` and returns the number of data rows.
pub fn emit_plot_data(
    pw: &PiecewisePoly<f64>,
    reference: Option<&ReferenceFn<f64>>,
    path: impl AsRef<Path>,
) -> Result<usize> {
    let path = path.as_ref();
    let file = File::create(path).map_err(io_error(path))?;
    write_plot_data_to(pw, reference, BufWriter::new(file)).map_err(io_error(path))
}
