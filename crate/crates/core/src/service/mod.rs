//! Sessions, batch documents, exports and the HTTP API.

pub mod api;
pub mod bench;
pub mod config;
pub mod dataset;
pub mod document;
pub mod svg;

pub use api::{router, serve, AppState};
pub use bench::{bench, linear_fit, BenchReport, BenchRow};
pub use config::{AttributeOverride, Colormap, ConfigError, EmbeddingSource, EpsilonSetting, SessionConfig};
pub use dataset::{load_dataset, parse_dataset, Column, ColumnData, Dataset, DatasetError};
pub use document::{prepare, rangeset_json, run_pipeline, AttributeSection, Prepared, RangesetDocument, RunError, ViewParams, SCHEMA_VERSION};
pub use svg::{export_svg, SvgError, SvgOptions};
