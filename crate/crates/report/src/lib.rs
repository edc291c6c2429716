//! File formats: `x,y` series CSV, dense plot tables and the JSON profile
//! document shared by every subcommand.

pub mod document;
pub mod error;
pub mod plot;
pub mod series;

pub use document::{
    strip_timing_fields, AccuracyRecord, ClassificationRecord, ConfigEcho, ProfileDocument, ProfileRecord,
    TargetDescriptor, VariableClassification, FORMAT_VERSION, TIMING_VALUED_FIELDS,
};
pub use error::{ReportError, Result};
pub use plot::{emit_plot_data, plot_rows, write_plot_data_to, PlotRow, POINTS_PER_SEGMENT};
pub use series::{read_series, read_series_from, write_series, write_series_to};
