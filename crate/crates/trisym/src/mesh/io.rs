//! Mesh text form and the JSON metadata sidecar.
//!
//! The text form is deliberately plain — a header `nv nt`, then `nv`
//! coordinate lines `x y`, then `nt` index lines `i j k` (0-based,
//! counterclockwise) — so meshes diff cleanly and load anywhere.

use std::fmt::Write as _;

use super::{MeshError, Provenance, TriangleMesh};
use crate::scalar::Real;

impl<R: Real> TriangleMesh<R> {
    /// Renders the mesh in the flat text form, coordinates at full
    /// precision for the scalar type.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.vertices.len(), self.triangles.len());
        for v in &self.vertices {
            let _ = writeln!(out, "{} {}", v.x.to_decimal_string(), v.y.to_decimal_string());
        }
        for t in &self.triangles {
            let _ = writeln!(out, "{} {} {}", t[0], t[1], t[2]);
        }
        out
    }

    /// Parses the flat text form. Vertex indices are bounds-checked and
    /// every triangle must be counterclockwise; provenance is not part of
    /// the text form, so the result is marked [`Provenance::Synthetic`] and
    /// callers holding metadata can overwrite it.
    pub fn from_text(text: &str) -> Result<TriangleMesh<R>, MeshError> {
        let bad = |line: usize, reason: String| MeshError::BadFormat { line, reason };
        let mut lines = text.lines().enumerate();

        let (line, header) = lines
            .next()
            .ok_or_else(|| bad(1, "empty input".into()))?;
        let mut counts = header.split_whitespace();
        let nv: usize = counts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad(line + 1, "header must be 'nv nt'".into()))?;
        let nt: usize = counts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad(line + 1, "header must be 'nv nt'".into()))?;
        if counts.next().is_some() {
            return Err(bad(line + 1, "header must be 'nv nt'".into()));
        }

        let mut vertices = Vec::with_capacity(nv);
        for _ in 0..nv {
            let (line, text) = lines
                .next()
                .ok_or_else(|| bad(0, format!("expected {nv} vertex lines")))?;
            let mut fields = text.split_whitespace();
            let mut scalar = || -> Result<R, MeshError> {
                let s = fields
                    .next()
                    .ok_or_else(|| bad(line + 1, "vertex line must be 'x y'".to_string()))?;
                R::parse_decimal(s).map_err(|e| bad(line + 1, e.to_string()))
            };
            let x = scalar()?;
            let y = scalar()?;
            if fields.next().is_some() {
                return Err(bad(line + 1, "vertex line must be 'x y'".into()));
            }
            vertices.push(crate::geometry::Point2::new(x, y));
        }

        let mut triangles = Vec::with_capacity(nt);
        for _ in 0..nt {
            let (line, text) = lines
                .next()
                .ok_or_else(|| bad(0, format!("expected {nt} triangle lines")))?;
            let mut ids = [0usize; 3];
            let mut fields = text.split_whitespace();
            for id in &mut ids {
                *id = fields
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| bad(line + 1, "triangle line must be 'i j k'".to_string()))?;
                if *id >= nv {
                    return Err(bad(line + 1, format!("vertex index {id} out of range")));
                }
            }
            if fields.next().is_some() {
                return Err(bad(line + 1, "triangle line must be 'i j k'".into()));
            }
            triangles.push(ids);
        }

        let mesh = TriangleMesh {
            vertices,
            triangles,
            provenance: Provenance::Synthetic,
        };
        for t in 0..mesh.triangles.len() {
            if !(mesh.triangle(t).signed_area() > R::zero()) {
                return Err(bad(
                    2 + nv + t,
                    format!("triangle {t} is not counterclockwise"),
                ));
            }
        }
        Ok(mesh)
    }
}

/// The sidecar describing how a serialized mesh was generated. `seed` is
/// meaningful for unstructured provenances and `warp` for structured ones;
/// the others carry `null`.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MeshMetadata {
    pub provenance: Provenance,
    pub k: u32,
    pub seed: Option<u64>,
    pub warp: Option<String>,
}

impl MeshMetadata {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("metadata serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, MeshError> {
        serde_json::from_str(text).map_err(|e| MeshError::BadFormat {
            line: e.line(),
            reason: e.to_string(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::super::unstructured_mesh;
    use super::*;

    #[test]
    fn text_form_round_trips_exactly_in_double() {
        let mesh = unstructured_mesh(1, 5, 21).unwrap();
        let text = mesh.to_text();
        let back = TriangleMesh::<f64>::from_text(&text).unwrap();
        assert_eq!(back.vertices, mesh.vertices);
        assert_eq!(back.triangles, mesh.triangles);
        assert_eq!(back.provenance, Provenance::Synthetic);
    }

    #[test]
    fn malformed_text_is_rejected_with_line_numbers() {
        assert!(matches!(
            TriangleMesh::<f64>::from_text(""),
            Err(MeshError::BadFormat { line: 1, .. })
        ));
        // vertex index out of range on the final line
        let text = "3 1\n0.0 0.0\n1.0 0.0\n0.0 1.0\n0 1 3\n";
        assert!(matches!(
            TriangleMesh::<f64>::from_text(text),
            Err(MeshError::BadFormat { line: 5, .. })
        ));
        // clockwise triangle
        let text = "3 1\n0.0 0.0\n1.0 0.0\n0.0 1.0\n0 2 1\n";
        assert!(TriangleMesh::<f64>::from_text(text).is_err());
        // non-numeric coordinate
        let text = "1 0\nx y\n";
        assert!(matches!(
            TriangleMesh::<f64>::from_text(text),
            Err(MeshError::BadFormat { line: 2, .. })
        ));
    }

    #[test]
    fn metadata_round_trips_through_json() {
        let meta = MeshMetadata {
            provenance: Provenance::Structured,
            k: 3,
            seed: None,
            warp: Some("0.05".to_string()),
        };
        let back = MeshMetadata::from_json(&meta.to_json()).unwrap();
        assert_eq!(back, meta);
        assert!(meta.to_json().contains("\"structured\""));
    }
}
