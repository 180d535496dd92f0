//! The batch pipeline and the document it produces.
//!
//! A [`RangesetDocument`] is made of independent sections (dataset, embedding,
//! quality, topology, one per attribute). The HTTP API serves exactly these
//! sections, built by the same functions, so a document assembled from API
//! responses is byte-identical to the batch output.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::config::{AttributeOverride, Colormap, ConfigError, EmbeddingSource, EpsilonSetting, SessionConfig};
use super::dataset::{load_dataset, Column, ColumnData, Dataset, DatasetError};
use crate::binning::{bin_assign, categorical_colors, categorize, AttributeKind, AttributeSpec, BinningError};
use crate::embedding::{
    classical_mds, ingest_embedding, metric_mds, projection_quality, standardize, EmbeddingError, EmbeddingMethod,
    HighDimMatrix, SmacofOptions,
};
use crate::filtration::{filtration_curve, FilterMode, FiltrationCurve};
use crate::geometry::{delaunay_triangulate, Point2D, PointSet2D};
use crate::mst::QuantileMethod;
use crate::pipeline::{compute_rangeset_cancellable, suggest_epsilon_with, PipelineError, Rangeset};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error("embedding: {0}")]
    Embedding(#[from] EmbeddingError),
    #[error("attribute `{attribute}`: {source}")]
    Binning { attribute: String, source: BinningError },
    #[error("attribute `{attribute}`: {source}")]
    Pipeline { attribute: String, source: PipelineError },
    #[error("embedding geometry: {0}")]
    Geometry(PipelineError),
    #[error("computation superseded by a newer request")]
    Cancelled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnSummary {
    pub name: String,
    pub kind: AttributeKind,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub missing: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub categories: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSection {
    pub rows: usize,
    /// Attributes with a rangeset, in document order.
    pub selected: Vec<String>,
    pub columns: Vec<ColumnSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingSection {
    pub source: EmbeddingSource,
    pub method: EmbeddingMethod,
    pub features: Vec<String>,
    /// Kruskal stress-1; absent for ingested coordinates.
    pub stress: Option<f64>,
    pub eigenvalues: Vec<f64>,
    pub coords: Vec<Point2D>,
}

/// Name of the per-point quality measure: Jaccard overlap of k-nearest-neighbor
/// sets before and after projection.
pub const QUALITY_METRIC: &str = "knn-jaccard";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QualitySection {
    /// Always `"knn-jaccard"`.
    pub metric: String,
    pub k: usize,
    pub mean: Option<f64>,
    /// Per-point neighborhood Jaccard; empty when there are no features.
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopologySection {
    pub mode: FilterMode,
    pub quantile: QuantileMethod,
    pub epsilon: f64,
    pub suggested_epsilon: f64,
    /// Longest Delaunay edge of the whole embedding.
    pub epsilon_max: f64,
    pub curve: FiltrationCurve,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramSection {
    pub attribute: String,
    pub kind: AttributeKind,
    pub edges: Vec<f64>,
    pub categories: Vec<String>,
    pub counts: Vec<usize>,
    pub outlier_counts: Vec<usize>,
    pub below_range: Vec<usize>,
    pub above_range: Vec<usize>,
    pub missing: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributeSection {
    pub spec: AttributeSpec,
    pub histogram: HistogramSection,
    pub rangeset: Rangeset,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RangesetDocument {
    pub schema_version: u32,
    pub fingerprint: String,
    pub dataset: DatasetSection,
    pub embedding: EmbeddingSection,
    pub quality: QualitySection,
    pub topology: TopologySection,
    pub attributes: Vec<AttributeSection>,
}

impl RangesetDocument {
    /// Canonical serialization: compact JSON, fields in declaration order,
    /// floats printed in shortest round-trip form.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn attribute(&self, name: &str) -> Option<&AttributeSection> {
        self.attributes.iter().find(|a| a.spec.name == name)
    }
}

/// Everything that does not depend on the attribute being viewed.
#[derive(Debug, Clone)]
pub struct Prepared {
    /// Config with paths resolved.
    pub config: SessionConfig,
    pub dataset: Dataset,
    pub points: PointSet2D,
    pub dataset_section: DatasetSection,
    pub embedding_section: EmbeddingSection,
    pub quality_section: QualitySection,
    pub topology_section: TopologySection,
}

/// Loads data, embeds it and computes the global sections. `config` must
/// have its paths resolved already.
pub fn prepare(config: &SessionConfig) -> Result<Prepared, RunError> {
    config.validate()?;
    let dataset = load_dataset(&config.dataset, &config.attribute)?;

    let selected: Vec<String> =
        if config.attributes.is_empty() { dataset.names() } else { config.attributes.clone() };
    for name in &selected {
        dataset.column(name)?;
    }
    let features: Vec<String> = if config.embedding.features.is_empty() {
        dataset.columns.iter().filter(|c| c.kind() == AttributeKind::Continuous).map(|c| c.name.clone()).collect()
    } else {
        config.embedding.features.clone()
    };
    let high = feature_matrix(&dataset, &features)?;

    let (points, embedding_section) = match config.embedding.source {
        EmbeddingSource::Compute => {
            let m = high.as_ref().ok_or_else(|| EmbeddingError::Shape("no continuous feature columns".into()))?;
            let result = match config.embedding.method {
                EmbeddingMethod::ClassicalMds => classical_mds(m)?,
                EmbeddingMethod::MetricMds | EmbeddingMethod::External => metric_mds(m, SmacofOptions::default())?,
            };
            let section = EmbeddingSection {
                source: EmbeddingSource::Compute,
                method: result.method,
                features: features.clone(),
                stress: Some(result.stress),
                eigenvalues: result.eigenvalues.clone(),
                coords: result.coords.as_slice().to_vec(),
            };
            (result.coords, section)
        }
        EmbeddingSource::File => {
            let path = config.embedding.file.as_ref().expect("validated");
            let coords = ingest_embedding(path, dataset.rows)?;
            let section = EmbeddingSection {
                source: EmbeddingSource::File,
                method: EmbeddingMethod::External,
                features: features.clone(),
                stress: None,
                eigenvalues: Vec::new(),
                coords: coords.as_slice().to_vec(),
            };
            (coords, section)
        }
    };

    let quality_section = match &high {
        Some(m) if m.nrows() >= 2 => {
            let k = config.quality_k.min(m.nrows() - 1);
            let values = projection_quality(m, &points, k)?;
            let mean = values.iter().sum::<f64>() / values.len() as f64;
            QualitySection { metric: QUALITY_METRIC.into(), k, mean: Some(mean), values }
        }
        _ => QualitySection { metric: QUALITY_METRIC.into(), k: 0, mean: None, values: Vec::new() },
    };

    let tri = delaunay_triangulate(points.as_slice()).map_err(|e| RunError::Geometry(e.into()))?;
    let suggested_length = suggest_epsilon_with(&points, config.quantile).map_err(RunError::Geometry)?;
    let suggested_epsilon = match config.mode {
        FilterMode::EdgeLength => suggested_length,
        // area of the equilateral triangle with the suggested side length
        FilterMode::TriangleArea => suggested_length * suggested_length * 3f64.sqrt() / 4.0,
    };
    let epsilon = match config.epsilon {
        EpsilonSetting::Auto => suggested_epsilon,
        EpsilonSetting::Value(v) => v,
    };
    let topology_section = TopologySection {
        mode: config.mode,
        quantile: config.quantile,
        epsilon,
        suggested_epsilon,
        epsilon_max: tri.max_edge_length(),
        curve: filtration_curve(&tri),
    };

    let dataset_section = DatasetSection {
        rows: dataset.rows,
        selected,
        columns: dataset.columns.iter().map(summarize).collect(),
    };

    Ok(Prepared {
        config: config.clone(),
        dataset,
        points,
        dataset_section,
        embedding_section,
        quality_section,
        topology_section,
    })
}

/// Parameters that the interactive view may change per request.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ViewParams {
    pub epsilon: Option<f64>,
    pub bins: Option<usize>,
}

impl Prepared {
    pub fn attribute_section(&self, name: &str, view: ViewParams) -> Result<AttributeSection, RunError> {
        self.attribute_section_cancellable(name, view, &|| false)
    }

    pub fn attribute_section_cancellable(
        &self,
        name: &str,
        view: ViewParams,
        cancelled: &(dyn Fn() -> bool + Sync),
    ) -> Result<AttributeSection, RunError> {
        let column = self.dataset.column(name)?;
        let overrides = self.config.attribute.get(name).cloned().unwrap_or_default();
        let (spec, mut binned) = bin_column(column, &overrides, self.config.colormap, view.bins)
            .map_err(|source| RunError::Binning { attribute: name.to_string(), source })?;
        let epsilon = view.epsilon.unwrap_or(self.topology_section.epsilon);
        let rangeset =
            compute_rangeset_cancellable(&self.points, &binned, &spec, epsilon, self.config.mode, cancelled)
                .map_err(|source| match source {
                    PipelineError::Cancelled => RunError::Cancelled,
                    source => RunError::Pipeline { attribute: name.to_string(), source },
                })?;
        binned.per_bin_outlier_counts = rangeset.outlier_counts();
        let histogram = HistogramSection {
            attribute: name.to_string(),
            kind: binned.kind,
            edges: binned.edges,
            categories: binned.categories,
            counts: binned.histogram,
            outlier_counts: binned.per_bin_outlier_counts,
            below_range: binned.below_range,
            above_range: binned.above_range,
            missing: binned.missing,
        };
        Ok(AttributeSection { spec, histogram, rangeset })
    }

    pub fn document(&self) -> Result<RangesetDocument, RunError> {
        let attributes = self
            .dataset_section
            .selected
            .iter()
            .map(|name| self.attribute_section(name, ViewParams::default()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(RangesetDocument {
            schema_version: SCHEMA_VERSION,
            fingerprint: self.dataset.fingerprint.clone(),
            dataset: self.dataset_section.clone(),
            embedding: self.embedding_section.clone(),
            quality: self.quality_section.clone(),
            topology: self.topology_section.clone(),
            attributes,
        })
    }
}

/// A standalone rangeset in the same serialization as inside documents.
pub fn rangeset_json(r: &Rangeset) -> String {
    serde_json::to_string(r).expect("rangesets serialize")
}

/// Batch pipeline: embedding, ε, topology and one rangeset per selected
/// attribute. `config` must have its paths resolved.
pub fn run_pipeline(config: &SessionConfig) -> Result<RangesetDocument, RunError> {
    prepare(config)?.document()
}

/// Standardized feature matrix; missing cells take the column mean.
fn feature_matrix(dataset: &Dataset, features: &[String]) -> Result<Option<HighDimMatrix>, RunError> {
    if features.is_empty() {
        return Ok(None);
    }
    let mut columns = Vec::with_capacity(features.len());
    for name in features {
        let col = dataset.column(name)?;
        let values = col
            .numeric()
            .ok_or_else(|| EmbeddingError::Shape(format!("feature `{name}` is categorical")))?;
        let present: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
        let mean = if present.is_empty() { 0.0 } else { present.iter().sum::<f64>() / present.len() as f64 };
        columns.push(values.iter().map(|&v| if v.is_finite() { v } else { mean }).collect());
    }
    let m = HighDimMatrix::from_columns(features.to_vec(), &columns)?;
    Ok(Some(standardize(&m)?))
}

fn summarize(c: &Column) -> ColumnSummary {
    match &c.data {
        ColumnData::Numeric(v) => {
            let finite = v.iter().copied().filter(|x| x.is_finite());
            let min = finite.clone().reduce(f64::min);
            let max = finite.reduce(f64::max);
            ColumnSummary { name: c.name.clone(), kind: AttributeKind::Continuous, min, max, missing: c.missing.len(), categories: Vec::new() }
        }
        ColumnData::Categorical(v) => ColumnSummary {
            name: c.name.clone(),
            kind: AttributeKind::Categorical,
            min: None,
            max: None,
            missing: c.missing.len(),
            categories: categorize(&c.name, v).categories,
        },
    }
}

/// Spec and bin assignment for one column with config overrides applied.
/// `bins` (from the interactive view) wins over the configured bin count.
pub fn bin_column(
    column: &Column,
    o: &AttributeOverride,
    colormap: Colormap,
    bins: Option<usize>,
) -> Result<(AttributeSpec, crate::binning::BinnedAttribute), BinningError> {
    match &column.data {
        ColumnData::Numeric(values) => {
            let mut spec = AttributeSpec::continuous(&column.name, values)?;
            if let Some([lo, hi]) = o.range {
                spec = spec.with_range(lo, hi)?;
            }
            if let Some(k) = bins.or(o.bins) {
                spec = spec.with_bins(k)?;
            }
            if colormap == Colormap::Category10 {
                spec.colors = categorical_colors(spec.bin_count);
            }
            // a view-level bin count replaces the configured binning wholesale
            let configured = bins.is_none() || bins == o.bins;
            if configured {
                spec.boundaries.clone_from(&o.boundaries);
                apply_text_overrides(&mut spec, o)?;
            }
            let binned = bin_assign(values, &spec)?;
            Ok((spec, binned))
        }
        ColumnData::Categorical(values) => {
            let binned = categorize(&column.name, values);
            let mut spec = AttributeSpec::categorical(&column.name, &binned.categories);
            apply_text_overrides(&mut spec, o)?;
            Ok((spec, binned))
        }
    }
}

fn apply_text_overrides(spec: &mut AttributeSpec, o: &AttributeOverride) -> Result<(), BinningError> {
    for (given, slot) in [(&o.labels, &mut spec.labels), (&o.colors, &mut spec.colors)] {
        if let Some(v) = given {
            if v.len() != spec.bin_count {
                return Err(BinningError::LengthMismatch { expected: spec.bin_count, got: v.len() });
            }
            *slot = v.clone();
        }
    }
    spec.validate()
}
