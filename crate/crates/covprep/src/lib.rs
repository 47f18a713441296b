//! Preprocessing pipelines for OWID-style COVID time series.
//!
//! The crate implements two end-to-end preparation pipelines over a daily,
//! date-indexed numeric table ([`frame::SeriesFrame`]):
//!
//! * the **standard** pipeline: numeric extraction, linear interpolation +
//!   zero imputation, global z-score outlier processing, iterative feature
//!   selection, chronological splitting, and standardization;
//! * the **custom** pipeline: column grouping, weekly-pattern imputation,
//!   local (rolling-window) outlier winsorization, dependency-graph
//!   recomputation of derived columns, then selection and standardization on
//!   training data only.
//!
//! Both feed the same from-scratch regression model zoo ([`model`]) and
//! evaluation layer ([`eval`]), producing comparable reports.
//!
//! See the `examples/` directory for one runnable example per capability,
//! and the `covprep` binary for end-to-end runs.

pub mod derive;
pub mod error;
pub mod eval;
pub mod frame;
pub mod impute;
pub mod ingest;
pub mod model;
pub mod outlier;
pub mod pipeline;
pub mod rng;
pub mod select;
pub mod stats;
pub mod synthetic;

pub use error::{Error, Result};
pub use frame::SeriesFrame;
pub use pipeline::PipelineConfig;
