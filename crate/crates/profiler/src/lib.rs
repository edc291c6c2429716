//! CPU-time measurement of targets, one-variable sweeps, interaction
//! detection between variable pairs, and assembly of runtime profiles.
//!
//! Measurements always run sequentially on the calling thread.

pub mod clock;
pub mod error;
pub mod evaluator;
pub mod interaction;
pub mod measure;
pub mod profile;
pub mod summary;
pub mod sweep;
pub mod target;

pub use clock::ClockKind;
pub use error::{ProfileError, Result};
pub use evaluator::{Evaluator, Harness, Synthetic};
pub use interaction::{detect_interaction, label_from_curves, Interaction, InteractionLabel};
pub use measure::{measure, measure_batch, Aggregator, MeasureConfig, TimingSample};
pub use profile::{build_runtime_profile, first_pass_value, profile_variable, RuntimeProfile, VariableProfile};
pub use summary::{classify_profile, compose_summary, ProfileClassification};
pub use sweep::{geometric_grid, linspace_grid, pairwise_sweep, parse_grid_spec, sweep_single, validate_grid, CurveFamily, SweepResult};
pub use target::{Args, Builtin, TargetKind, TargetSpec, VariableSpec};
