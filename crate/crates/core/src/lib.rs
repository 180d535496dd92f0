//! Rangesets: per-bin α-hull contours over 2D embeddings of tabular data.
//!
//! The pipeline discretizes an attribute into bins, triangulates the embedded
//! points of each bin, drops Delaunay edges longer than a threshold ε and
//! traces the boundary of what remains. Points that end up isolated are
//! reported as outliers.

pub mod binning;
pub mod embedding;
pub mod filtration;
pub mod geometry;
pub mod mst;
pub mod palette;
pub mod pipeline;
pub mod service;
pub mod union_find;
