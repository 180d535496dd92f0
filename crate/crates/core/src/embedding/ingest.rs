//! Reading precomputed embeddings (t-SNE, UMAP, ...) from CSV.
//!
//! The file holds one `x,y` pair per dataset row, in dataset order. A first
//! line that does not parse as numbers is treated as a header.

use std::io::Read;
use std::path::Path;

use super::EmbeddingError;
use crate::geometry::{Point2D, PointSet2D};

pub fn ingest_embedding(path: &Path, expected_rows: usize) -> Result<PointSet2D, EmbeddingError> {
    let file = std::fs::File::open(path).map_err(|e| EmbeddingError::Io(format!("{}: {e}", path.display())))?;
    ingest_embedding_reader(file, expected_rows)
}

pub fn ingest_embedding_reader<R: Read>(reader: R, expected_rows: usize) -> Result<PointSet2D, EmbeddingError> {
    let mut csv = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(reader);
    let mut points = Vec::new();
    for (i, record) in csv.records().enumerate() {
        let record = record.map_err(|e| EmbeddingError::Io(e.to_string()))?;
        let line = i + 1;
        if record.len() < 2 {
            return Err(EmbeddingError::NonNumeric { line, value: record.iter().collect::<Vec<_>>().join(",") });
        }
        let parse = |s: &str| s.parse::<f64>().ok().filter(|v| v.is_finite());
        match (parse(&record[0]), parse(&record[1])) {
            (Some(x), Some(y)) => points.push(Point2D::new(x, y)),
            _ if i == 0 => continue,
            (Some(_), None) => return Err(EmbeddingError::NonNumeric { line, value: record[1].to_string() }),
            (None, _) => return Err(EmbeddingError::NonNumeric { line, value: record[0].to_string() }),
        }
    }
    if points.len() != expected_rows {
        return Err(EmbeddingError::RowCountMismatch { expected: expected_rows, got: points.len() });
    }
    PointSet2D::new(points).map_err(|e| EmbeddingError::Shape(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_rows() {
        let p = ingest_embedding_reader("0,0\n1,2.5\n-3,4\n".as_bytes(), 3).unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p[1], Point2D::new(1.0, 2.5));
    }

    #[test]
    fn header_is_skipped() {
        let p = ingest_embedding_reader("x,y\n0,0\n1,1\n".as_bytes(), 2).unwrap();
        assert_eq!(p.len(), 2);
    }

    #[test]
    fn row_count_mismatch() {
        assert_eq!(
            ingest_embedding_reader("0,0\n1,1\n".as_bytes(), 3).unwrap_err(),
            EmbeddingError::RowCountMismatch { expected: 3, got: 2 }
        );
    }

    #[test]
    fn non_numeric_cell() {
        let err = ingest_embedding_reader("0,0\n1,abc\n".as_bytes(), 2).unwrap_err();
        assert_eq!(err, EmbeddingError::NonNumeric { line: 2, value: "abc".into() });
    }
}
