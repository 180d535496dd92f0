//! Attribute metadata and discretization into bins.
//!
//! Continuous attributes are cut into equal-width bins over a user range.
//! Values outside the range are clamped into the extremal bins and also listed
//! separately so histograms can show them. Categorical attributes get one bin
//! per distinct category.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default labels for five bins, lowest first.
pub const DEFAULT_LABELS: [&str; 5] = ["very low", "low", "medium", "high", "very high"];
/// Default symbolic colors for five bins, lowest first.
pub const DEFAULT_COLORS: [&str; 5] = ["blue", "green", "yellow", "orange", "red"];
pub const DEFAULT_BIN_COUNT: usize = 5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BinningError {
    #[error("attribute `{0}` has no finite values")]
    NoValues(String),
    #[error("invalid range ({lo}, {hi}) for `{name}`: need lo < hi")]
    InvalidRange { name: String, lo: f64, hi: f64 },
    #[error("bin count must be at least 1")]
    ZeroBins,
    #[error("attribute `{0}` is categorical; use categorize")]
    NotContinuous(String),
    #[error("{got} values supplied for {expected} points")]
    LengthMismatch { expected: usize, got: usize },
    #[error("custom boundaries for `{0}` must be strictly increasing with bin_count + 1 entries")]
    BadBoundaries(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AttributeKind {
    Continuous,
    Categorical,
}

/// How one attribute is discretized and presented.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributeSpec {
    pub name: String,
    pub kind: AttributeKind,
    pub data_min: f64,
    pub data_max: f64,
    pub user_range: (f64, f64),
    pub bin_count: usize,
    pub labels: Vec<String>,
    pub colors: Vec<String>,
    /// Non-uniform bin edges; `None` means equal-width bins over `user_range`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundaries: Option<Vec<f64>>,
}

impl AttributeSpec {
    /// Spec over the observed range of `values` (non-finite entries are ignored).
    pub fn continuous(name: &str, values: &[f64]) -> Result<Self, BinningError> {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for &v in values.iter().filter(|v| v.is_finite()) {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if lo > hi {
            return Err(BinningError::NoValues(name.to_string()));
        }
        // a constant column still needs a non-empty range
        let user_range = if lo < hi { (lo, hi) } else { (lo - 0.5, hi + 0.5) };
        Ok(Self {
            name: name.to_string(),
            kind: AttributeKind::Continuous,
            data_min: lo,
            data_max: hi,
            user_range,
            bin_count: DEFAULT_BIN_COUNT,
            labels: default_labels(DEFAULT_BIN_COUNT, user_range),
            colors: default_colors(DEFAULT_BIN_COUNT),
            boundaries: None,
        })
    }

    /// Spec for a categorical attribute with the given categories in bin order.
    pub fn categorical(name: &str, categories: &[String]) -> Self {
        let n = categories.len().max(1);
        Self {
            name: name.to_string(),
            kind: AttributeKind::Categorical,
            data_min: 0.0,
            data_max: (n - 1) as f64,
            user_range: (0.0, n as f64),
            bin_count: categories.len(),
            labels: categories.to_vec(),
            colors: categorical_colors(categories.len()),
            boundaries: None,
        }
    }

    /// Replaces the range; labels are regenerated.
    pub fn with_range(mut self, lo: f64, hi: f64) -> Result<Self, BinningError> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(BinningError::InvalidRange { name: self.name, lo, hi });
        }
        self.user_range = (lo, hi);
        self.labels = default_labels(self.bin_count, self.user_range);
        Ok(self)
    }

    /// Replaces the bin count; labels and colors are regenerated.
    pub fn with_bins(mut self, bin_count: usize) -> Result<Self, BinningError> {
        if bin_count == 0 {
            return Err(BinningError::ZeroBins);
        }
        self.bin_count = bin_count;
        self.labels = default_labels(bin_count, self.user_range);
        self.colors = default_colors(bin_count);
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), BinningError> {
        if self.bin_count == 0 && self.kind == AttributeKind::Continuous {
            return Err(BinningError::ZeroBins);
        }
        let (lo, hi) = self.user_range;
        if self.kind == AttributeKind::Continuous && !(lo < hi) {
            return Err(BinningError::InvalidRange { name: self.name.clone(), lo, hi });
        }
        if let Some(b) = &self.boundaries {
            if b.len() != self.bin_count + 1 || b.windows(2).any(|w| !(w[0] < w[1])) {
                return Err(BinningError::BadBoundaries(self.name.clone()));
            }
        }
        Ok(())
    }

    /// Bin edges, `bin_count + 1` entries from `lo` to `hi`.
    pub fn bin_edges(&self) -> Vec<f64> {
        if let Some(b) = &self.boundaries {
            return b.clone();
        }
        let (lo, hi) = self.user_range;
        let k = self.bin_count;
        let width = (hi - lo) / k as f64;
        let mut edges: Vec<f64> = (0..k).map(|i| lo + i as f64 * width).collect();
        edges.push(hi);
        edges
    }
}

/// Labels for `k` bins: the five named levels when `k == 5`, else interval text.
pub fn default_labels(k: usize, (lo, hi): (f64, f64)) -> Vec<String> {
    if k == DEFAULT_LABELS.len() {
        return DEFAULT_LABELS.iter().map(|s| s.to_string()).collect();
    }
    let width = (hi - lo) / k as f64;
    (0..k)
        .map(|i| {
            let a = lo + i as f64 * width;
            let b = if i + 1 == k { hi } else { lo + (i + 1) as f64 * width };
            let close = if i + 1 == k { ']' } else { ')' };
            format!("[{}, {}{close}", trim_float(a), trim_float(b))
        })
        .collect()
}

fn trim_float(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

/// Symbolic color keys for `k` ordered bins.
pub fn default_colors(k: usize) -> Vec<String> {
    if k == DEFAULT_COLORS.len() {
        return DEFAULT_COLORS.iter().map(|s| s.to_string()).collect();
    }
    crate::palette::ramp(k)
}

pub fn categorical_colors(k: usize) -> Vec<String> {
    crate::palette::categorical(k)
}

/// Per-point bin membership for one attribute.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinnedAttribute {
    pub attribute: String,
    pub kind: AttributeKind,
    /// Bin of each point; `None` for missing values.
    pub bin_index: Vec<Option<usize>>,
    pub histogram: Vec<usize>,
    pub below_range: Vec<usize>,
    pub above_range: Vec<usize>,
    pub missing: Vec<usize>,
    /// Filled in by the rangeset pipeline.
    pub per_bin_outlier_counts: Vec<usize>,
    /// Continuous: `bin_count + 1` edges. Categorical: empty.
    pub edges: Vec<f64>,
    /// Categorical: category of each bin. Continuous: empty.
    pub categories: Vec<String>,
}

impl BinnedAttribute {
    pub fn bin_count(&self) -> usize {
        self.histogram.len()
    }

    pub fn len(&self) -> usize {
        self.bin_index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bin_index.is_empty()
    }

    /// Point ids in bin `bin`, ascending.
    pub fn members(&self, bin: usize) -> Vec<usize> {
        self.bin_index
            .iter()
            .enumerate()
            .filter(|&(_, &b)| b == Some(bin))
            .map(|(i, _)| i)
            .collect()
    }

    /// All bins' members in one pass.
    pub fn all_members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.bin_count()];
        for (i, b) in self.bin_index.iter().enumerate() {
            if let Some(b) = b {
                out[*b].push(i);
            }
        }
        out
    }
}

/// Assigns each value to a bin of `spec`. Bin `i` covers
/// `[edge_i, edge_{i+1})`; the last bin also includes its upper edge. Values
/// below or above the range land in the first or last bin and are listed in
/// `below_range` / `above_range`. Non-finite values count as missing.
pub fn bin_assign(values: &[f64], spec: &AttributeSpec) -> Result<BinnedAttribute, BinningError> {
    if spec.kind != AttributeKind::Continuous {
        return Err(BinningError::NotContinuous(spec.name.clone()));
    }
    spec.validate()?;
    let edges = spec.bin_edges();
    let k = spec.bin_count;
    let (lo, hi) = (edges[0], edges[k]);

    let mut out = BinnedAttribute {
        attribute: spec.name.clone(),
        kind: AttributeKind::Continuous,
        bin_index: Vec::with_capacity(values.len()),
        histogram: vec![0; k],
        below_range: Vec::new(),
        above_range: Vec::new(),
        missing: Vec::new(),
        per_bin_outlier_counts: vec![0; k],
        edges: edges.clone(),
        categories: Vec::new(),
    };
    for (i, &v) in values.iter().enumerate() {
        if !v.is_finite() {
            out.missing.push(i);
            out.bin_index.push(None);
            continue;
        }
        let bin = if v < lo {
            out.below_range.push(i);
            0
        } else if v > hi {
            out.above_range.push(i);
            k - 1
        } else {
            locate_bin(&edges, v)
        };
        out.histogram[bin] += 1;
        out.bin_index.push(Some(bin));
    }
    Ok(out)
}

/// Index `i` with `edges[i] <= v < edges[i + 1]`, the last bin closed.
fn locate_bin(edges: &[f64], v: f64) -> usize {
    let k = edges.len() - 1;
    // number of interior edges <= v
    edges[1..k].partition_point(|&e| e <= v)
}

/// One bin per distinct category, in order of first appearance. `None`
/// entries are missing.
pub fn categorize<S: AsRef<str>>(name: &str, values: &[Option<S>]) -> BinnedAttribute {
    let mut categories: Vec<String> = Vec::new();
    let mut lookup: std::collections::HashMap<String, usize> = std::collections::HashMap::new();
    let mut out = BinnedAttribute {
        attribute: name.to_string(),
        kind: AttributeKind::Categorical,
        bin_index: Vec::with_capacity(values.len()),
        histogram: Vec::new(),
        below_range: Vec::new(),
        above_range: Vec::new(),
        missing: Vec::new(),
        per_bin_outlier_counts: Vec::new(),
        edges: Vec::new(),
        categories: Vec::new(),
    };
    for (i, v) in values.iter().enumerate() {
        match v {
            None => {
                out.missing.push(i);
                out.bin_index.push(None);
            }
            Some(s) => {
                let key = s.as_ref();
                let bin = match lookup.get(key) {
                    Some(&b) => b,
                    None => {
                        categories.push(key.to_string());
                        lookup.insert(key.to_string(), categories.len() - 1);
                        out.histogram.push(0);
                        categories.len() - 1
                    }
                };
                out.histogram[bin] += 1;
                out.bin_index.push(Some(bin));
            }
        }
    }
    out.per_bin_outlier_counts = vec![0; categories.len()];
    out.categories = categories;
    out
}
