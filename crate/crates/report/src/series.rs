//! `x,y` CSV files holding one [`SampleSeries`] each.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use qseg_core::{SamplePoint, SampleSeries};

use crate::error::{io_error, ReportError, Result};

/// Reads a series; the `x,y` header line is optional.
///
/// Parity of the row count is not checked here; model construction reports it.
pub fn read_series_from<R: Read>(reader: R) -> Result<SampleSeries<f64>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let mut points: Vec<SamplePoint<f64>> = Vec::new();
    let mut first = true;
    for record in rdr.records() {
        let record = record.map_err(|e| ReportError::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let is_header = first
            && record.len() == 2
            && record[0].eq_ignore_ascii_case("x")
            && record[1].eq_ignore_ascii_case("y");
        first = false;
        if is_header {
            continue;
        }
        if record.len() != 2 {
            return Err(ReportError::Parse {
                line,
                message: format!("expected 2 fields, found {}", record.len()),
            });
        }
        let field = |i: usize, name: &str| -> Result<f64> {
            let v: f64 = record[i].parse().map_err(|_| ReportError::Parse {
                line,
                message: format!("{name} value `{}` is not a number", &record[i]),
            })?;
            if !v.is_finite() {
                return Err(ReportError::Parse {
                    line,
                    message: format!("{name} value `{}` is not finite", &record[i]),
                });
            }
            Ok(v)
        };
        let (x, y) = (field(0, "x")?, field(1, "y")?);
        if let Some(prev) = points.last() {
            if x <= prev.x {
                return Err(ReportError::NonMonotonicX { line });
            }
        }
        points.push(SamplePoint::new(x, y));
    }
    if points.is_empty() {
        return Err(ReportError::Empty);
    }
    Ok(SampleSeries::new(points)?)
}

pub fn read_series(path: impl AsRef<Path>) -> Result<SampleSeries<f64>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(io_error(path))?;
    let mut series = read_series_from(BufReader::new(file))?;
    series.set_label(path.display().to_string());
    Ok(series)
}

/// Writes the header and one row per point, using shortest round-trip floats.
pub fn write_series_to<W: Write>(series: &SampleSeries<f64>, writer: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["x", "y"])?;
    for p in series.points() {
        w.write_record([format!("{:?}", p.x), format!("{:?}", p.y)])?;
    }
    w.flush()
}

pub fn write_series(series: &SampleSeries<f64>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(io_error(path))?;
    write_series_to(series, BufWriter::new(file)).map_err(io_error(path))
}
