//! Static SVG rendering of one attribute's rangeset.
//!
//! Layers, bottom to top: translucent bin polygons, point glyphs colored by
//! bin, then outliers with enlarged glyphs. Polygons of different bins are
//! never clipped against each other; overlap shows through the transparency.

use std::fmt::Write;

use thiserror::Error;

use super::document::RangesetDocument;
use crate::filtration::ContourGeometry;
use crate::geometry::Point2D;
use crate::palette;

#[derive(Debug, Error, PartialEq)]
pub enum SvgError {
    #[error("attribute `{0}` is not in the document")]
    UnknownAttribute(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvgOptions {
    pub size: f64,
    pub margin: f64,
    pub radius: f64,
    /// Outlier glyph radius relative to `radius`.
    pub outlier_radius_scale: f64,
    pub fill_opacity: f64,
}

impl Default for SvgOptions {
    fn default() -> Self {
        Self { size: 800.0, margin: 24.0, radius: 3.0, outlier_radius_scale: 1.8, fill_opacity: 0.5 }
    }
}

const MISSING_COLOR: &str = "#bbbbbb";

pub fn export_svg(doc: &RangesetDocument, attribute: &str, opt: &SvgOptions) -> Result<String, SvgError> {
    let section = doc.attribute(attribute).ok_or_else(|| SvgError::UnknownAttribute(attribute.to_string()))?;
    let coords = &doc.embedding.coords;
    let map = Viewport::fit(coords, opt);

    let mut point_color = vec![MISSING_COLOR.to_string(); coords.len()];
    let mut is_outlier = vec![false; coords.len()];
    for bin in &section.rangeset.bins {
        let color = palette::resolve(&bin.color);
        for &id in &bin.member_ids {
            point_color[id].clone_from(&color);
        }
        for &id in &bin.outlier_ids {
            is_outlier[id] = true;
        }
    }

    let mut out = String::new();
    let s = opt.size;
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{s}" height="{s}" viewBox="0 0 {s} {s}">"#
    );
    let _ = writeln!(out, r#"<title>{}</title>"#, escape(attribute));
    let _ = writeln!(out, r##"<rect width="{s}" height="{s}" fill="#ffffff"/>"##);

    let _ = writeln!(out, r#"<g class="contours" fill-opacity="{}">"#, opt.fill_opacity);
    for bin in &section.rangeset.bins {
        if bin.contours.is_empty() {
            continue;
        }
        let color = palette::resolve(&bin.color);
        let _ = writeln!(
            out,
            r#"<g class="bin" data-bin="{}" data-label="{}" fill="{color}" stroke="{color}">"#,
            bin.bin_index,
            escape(&bin.label)
        );
        for contour in &bin.contours {
            out.push_str(&contour_element(contour, &map));
        }
        out.push_str("</g>\n");
    }
    out.push_str("</g>\n");

    let glyph = |out: &mut String, id: usize, r: f64, extra: &str| {
        let (x, y) = map.apply(coords[id]);
        let _ = writeln!(
            out,
            r#"<circle data-id="{id}" cx="{x:.2}" cy="{y:.2}" r="{r}" fill="{}"{extra}/>"#,
            point_color[id]
        );
    };
    out.push_str("<g class=\"points\">\n");
    for id in (0..coords.len()).filter(|&i| !is_outlier[i]) {
        glyph(&mut out, id, opt.radius, "");
    }
    out.push_str("</g>\n<g class=\"outliers\">\n");
    let r = opt.radius * opt.outlier_radius_scale;
    for id in (0..coords.len()).filter(|&i| is_outlier[i]) {
        glyph(&mut out, id, r, r##" stroke="#000000" stroke-width="0.75""##);
    }
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}

/// A `<polygon>` for a simple contour, an even-odd `<path>` when it has holes.
fn contour_element(c: &ContourGeometry, map: &Viewport) -> String {
    let ring_coords = |pts: &[Point2D]| -> Vec<String> {
        pts.iter()
            .map(|&p| {
                let (x, y) = map.apply(p);
                format!("{x:.2},{y:.2}")
            })
            .collect()
    };
    if c.hole_count() == 0 {
        return format!("<polygon points=\"{}\"/>\n", ring_coords(&c.outer().points).join(" "));
    }
    let mut d = String::new();
    for ring in &c.rings {
        let _ = write!(d, "M{}Z", ring_coords(&ring.points).join("L"));
    }
    format!("<path fill-rule=\"evenodd\" d=\"{d}\"/>\n")
}

/// Uniform scaling of the data bounding box into the drawing area, y up.
struct Viewport {
    min: Point2D,
    scale: f64,
    offset: (f64, f64),
    size: f64,
}

impl Viewport {
    fn fit(coords: &[Point2D], opt: &SvgOptions) -> Self {
        let (mut lo, mut hi) = (Point2D::new(f64::MAX, f64::MAX), Point2D::new(f64::MIN, f64::MIN));
        for p in coords {
            lo = Point2D::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point2D::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        if coords.is_empty() {
            lo = Point2D::new(0.0, 0.0);
            hi = Point2D::new(1.0, 1.0);
        }
        let inner = opt.size - 2.0 * opt.margin;
        let span = (hi.x - lo.x).max(hi.y - lo.y);
        let scale = if span > 0.0 { inner / span } else { 1.0 };
        // center the shorter axis
        let offset = (
            opt.margin + 0.5 * (inner - (hi.x - lo.x) * scale),
            opt.margin + 0.5 * (inner - (hi.y - lo.y) * scale),
        );
        Self { min: lo, scale, offset, size: opt.size }
    }

    fn apply(&self, p: Point2D) -> (f64, f64) {
        let x = self.offset.0 + (p.x - self.min.x) * self.scale;
        let y = self.size - (self.offset.1 + (p.y - self.min.y) * self.scale);
        (x, y)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::service::config::SessionConfig;
    use crate::service::document::run_pipeline;

    fn triangle_doc() -> RangesetDocument {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        std::fs::write(&path, "x,y,v\n0,0,1\n4,0,1\n0,3,1\n").unwrap();
        let mut c = SessionConfig::new(path);
        c.embedding.method = crate::embedding::EmbeddingMethod::ClassicalMds;
        c.embedding.features = vec!["x".into(), "y".into()];
        c.attributes = vec!["v".into()];
        c.attribute.insert("v".into(), crate::service::config::AttributeOverride { bins: Some(1), ..Default::default() });
        c.epsilon = super::super::config::EpsilonSetting::Value(10.0);
        run_pipeline(&c).unwrap()
    }

    #[test]
    fn single_triangle_structure() {
        let svg = export_svg(&triangle_doc(), "v", &SvgOptions::default()).unwrap();
        assert_eq!(svg.matches("<polygon").count(), 1);
        assert_eq!(svg.matches("<circle").count(), 3);
        assert!(svg.contains("fill-opacity=\"0.5\""));
    }

    #[test]
    fn unknown_attribute() {
        assert_eq!(
            export_svg(&triangle_doc(), "w", &SvgOptions::default()).unwrap_err(),
            SvgError::UnknownAttribute("w".into())
        );
    }

    #[test]
    fn escapes_markup() {
        assert_eq!(escape("a<b & \"c\""), "a&lt;b &amp; &quot;c&quot;");
    }
}
