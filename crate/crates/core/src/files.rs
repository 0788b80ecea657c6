//! On-disk JSON formats for graphs and germs.
//!
//! A graph document looks like
//!
//! ```json
//! {
//!   "minimal_resolution": true,
//!   "vertices": [{"id": 0, "weight": -2}, {"id": 1, "weight": -3}],
//!   "edges": [{"a": 0, "b": 1, "mult": 1}]
//! }
//! ```
//!
//! Vertex ids must be exactly `0..n-1` in order, and unknown keys are
//! rejected. A germ document is the same with an optional `boundary` array;
//! rationals travel as `"p/q"` strings. An empty vertex list denotes a
//! smooth germ.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::discrepancy::{BoundaryCurve, BoundaryData, DiscrepancyError, SurfaceGerm};
use crate::graph::{GraphError, ResolutionGraph};
use crate::rational::{format_rational, parse_rational, ParseRationalError};

#[derive(Debug, Error)]
pub enum FileError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("vertex at position {index} has id {id}; ids must be 0..n-1 in order")]
    VertexIdMismatch { index: usize, id: usize },
    #[error("a smooth germ (no vertices) cannot have edges")]
    EdgesWithoutVertices,
    #[error("boundary curve {curve}: {source}")]
    BadCoefficient {
        curve: usize,
        #[source]
        source: ParseRationalError,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Germ(#[from] DiscrepancyError),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexDoc {
    id: usize,
    weight: i64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    a: usize,
    b: usize,
    mult: u32,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDoc {
    minimal_resolution: bool,
    vertices: Vec<VertexDoc>,
    edges: Vec<EdgeDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoundaryCurveDoc {
    coefficient: String,
    incidences: Vec<u32>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GermDoc {
    minimal_resolution: bool,
    vertices: Vec<VertexDoc>,
    edges: Vec<EdgeDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    boundary: Option<Vec<BoundaryCurveDoc>>,
}

fn build_graph(
    minimal_resolution: bool,
    vertices: &[VertexDoc],
    edges: &[EdgeDoc],
) -> Result<ResolutionGraph, FileError> {
    for (index, v) in vertices.iter().enumerate() {
        if v.id != index {
            return Err(FileError::VertexIdMismatch { index, id: v.id });
        }
    }
    let weights = vertices.iter().map(|v| v.weight).collect();
    let edge_list = edges.iter().map(|e| (e.a, e.b, e.mult)).collect();
    Ok(ResolutionGraph::new(minimal_resolution, weights, edge_list)?)
}

/// Parses a strict graph document (no `boundary` key allowed).
pub fn parse_graph(json: &str) -> Result<ResolutionGraph, FileError> {
    let doc: GraphDoc = serde_json::from_str(json)?;
    build_graph(doc.minimal_resolution, &doc.vertices, &doc.edges)
}

fn build_boundary(docs: &[BoundaryCurveDoc]) -> Result<BoundaryData, FileError> {
    let mut curves = Vec::with_capacity(docs.len());
    for (k, c) in docs.iter().enumerate() {
        let coefficient = parse_rational(&c.coefficient)
            .map_err(|source| FileError::BadCoefficient { curve: k, source })?;
        let curve = BoundaryCurve::new(coefficient, c.incidences.clone()).map_err(|e| match e {
            DiscrepancyError::CoefficientOutOfRange { value, .. } => {
                FileError::Germ(DiscrepancyError::CoefficientOutOfRange { curve: k, value })
            }
            other => FileError::Germ(other),
        })?;
        curves.push(curve);
    }
    Ok(BoundaryData::new(curves))
}

/// Parses a germ document: graph fields plus an optional boundary. An empty
/// vertex list gives a smooth germ.
pub fn parse_germ(json: &str) -> Result<SurfaceGerm, FileError> {
    let doc: GermDoc = serde_json::from_str(json)?;
    let boundary = match &doc.boundary {
        Some(curves) => build_boundary(curves)?,
        None => BoundaryData::empty(),
    };
    if doc.vertices.is_empty() {
        if !doc.edges.is_empty() {
            return Err(FileError::EdgesWithoutVertices);
        }
        return Ok(SurfaceGerm::smooth(boundary)?);
    }
    let graph = build_graph(doc.minimal_resolution, &doc.vertices, &doc.edges)?;
    Ok(SurfaceGerm::singular(graph, boundary)?)
}

fn graph_doc(graph: &ResolutionGraph) -> GraphDoc {
    GraphDoc {
        minimal_resolution: graph.is_minimal_resolution(),
        vertices: (0..graph.vertex_count())
            .map(|id| VertexDoc { id, weight: graph.weight(id) })
            .collect(),
        edges: graph
            .edges()
            .iter()
            .map(|e| EdgeDoc { a: e.a, b: e.b, mult: e.mult })
            .collect(),
    }
}

/// Serializes a graph in the file format (pretty-printed, stable order).
pub fn graph_to_json(graph: &ResolutionGraph) -> String {
    serde_json::to_string_pretty(&graph_doc(graph)).expect("graph serialization cannot fail")
}

/// Serializes a germ in the file format.
pub fn germ_to_json(germ: &SurfaceGerm) -> String {
    let (minimal_resolution, vertices, edges) = match germ.resolution() {
        Some(graph) => {
            let doc = graph_doc(graph);
            (doc.minimal_resolution, doc.vertices, doc.edges)
        }
        None => (true, Vec::new(), Vec::new()),
    };
    let boundary = if germ.boundary().is_empty() {
        None
    } else {
        Some(
            germ.boundary()
                .curves()
                .iter()
                .map(|c| BoundaryCurveDoc {
                    coefficient: format_rational(c.coefficient()),
                    incidences: c.incidences().to_vec(),
                })
                .collect(),
        )
    };
    let doc = GermDoc { minimal_resolution, vertices, edges, boundary };
    serde_json::to_string_pretty(&doc).expect("germ serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    const CHAIN: &str = r#"{
        "minimal_resolution": true,
        "vertices": [{"id": 0, "weight": -3}, {"id": 1, "weight": -2}],
        "edges": [{"a": 0, "b": 1, "mult": 1}]
    }"#;

    #[test]
    fn parse_graph_roundtrip() {
        let g = parse_graph(CHAIN).unwrap();
        assert_eq!(g.weights(), &[-3, -2]);
        assert!(g.is_minimal_resolution());
        let again = parse_graph(&graph_to_json(&g)).unwrap();
        assert_eq!(again, g);
    }

    #[test]
    fn parse_graph_rejects_unknown_keys() {
        let bad = r#"{
            "minimal_resolution": true,
            "vertices": [{"id": 0, "weight": -2}],
            "edges": [],
            "extra": 1
        }"#;
        assert!(matches!(parse_graph(bad), Err(FileError::Json(_))));

        let bad_vertex = r#"{
            "minimal_resolution": true,
            "vertices": [{"id": 0, "weight": -2, "genus": 0}],
            "edges": []
        }"#;
        assert!(matches!(parse_graph(bad_vertex), Err(FileError::Json(_))));
    }

    #[test]
    fn parse_graph_rejects_bad_ids() {
        let bad = r#"{
            "minimal_resolution": true,
            "vertices": [{"id": 1, "weight": -2}],
            "edges": []
        }"#;
        assert!(matches!(
            parse_graph(bad),
            Err(FileError::VertexIdMismatch { index: 0, id: 1 })
        ));
    }

    #[test]
    fn graph_schema_has_no_boundary() {
        let with_boundary = r#"{
            "minimal_resolution": true,
            "vertices": [{"id": 0, "weight": -2}],
            "edges": [],
            "boundary": []
        }"#;
        assert!(matches!(parse_graph(with_boundary), Err(FileError::Json(_))));
        assert!(parse_germ(with_boundary).is_ok());
    }

    #[test]
    fn parse_germ_with_boundary() {
        let text = r#"{
            "minimal_resolution": true,
            "vertices": [{"id": 0, "weight": -3}],
            "edges": [],
            "boundary": [{"coefficient": "1/2", "incidences": [1]}]
        }"#;
        let germ = parse_germ(text).unwrap();
        assert_eq!(germ.boundary().curves().len(), 1);
        assert_eq!(germ.boundary().curves()[0].coefficient(), &ratio(1, 2));
        let again = parse_germ(&germ_to_json(&germ)).unwrap();
        assert_eq!(germ_to_json(&again), germ_to_json(&germ));
    }

    #[test]
    fn parse_smooth_germ() {
        let text = r#"{
            "minimal_resolution": true,
            "vertices": [],
            "edges": [],
            "boundary": [{"coefficient": "3/4", "incidences": []}]
        }"#;
        let germ = parse_germ(text).unwrap();
        assert!(germ.is_smooth());
    }

    #[test]
    fn parse_germ_rejects_coefficient_above_one() {
        let text = r#"{
            "minimal_resolution": true,
            "vertices": [{"id": 0, "weight": -2}],
            "edges": [],
            "boundary": [{"coefficient": "3/2", "incidences": [1]}]
        }"#;
        assert!(matches!(
            parse_germ(text),
            Err(FileError::Germ(DiscrepancyError::CoefficientOutOfRange { .. }))
        ));
    }

    #[test]
    fn parse_germ_rejects_wrong_incidence_length() {
        let text = r#"{
            "minimal_resolution": true,
            "vertices": [{"id": 0, "weight": -2}],
            "edges": [],
            "boundary": [{"coefficient": "1/2", "incidences": [1, 0]}]
        }"#;
        assert!(matches!(
            parse_germ(text),
            Err(FileError::Germ(DiscrepancyError::IncidenceLengthMismatch { .. }))
        ));
    }
}
