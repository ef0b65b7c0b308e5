//! On-disk graph format.
//!
//! ```json
//! { "schema": "mwtree.graph/v1", "n": 2, "s": 1,
//!   "edges": [ { "u": 1, "v": 2, "weight": [[5.0]] } ] }
//! ```
//!
//! Vertices are 1-based. `schema` may be omitted on input; unknown fields are
//! rejected. Edges are stored with `u < v` after ingestion.

use mwtree_core::{DenseMatrix, MatrixWeightedGraph};
use serde::{Deserialize, Serialize};

pub const GRAPH_SCHEMA: &str = "mwtree.graph/v1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub n: usize,
    pub s: usize,
    pub edges: Vec<EdgeRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub u: usize,
    pub v: usize,
    pub weight: Vec<Vec<f64>>,
}

impl GraphFile {
    pub fn from_graph(g: &MatrixWeightedGraph) -> Self {
        Self {
            schema: Some(GRAPH_SCHEMA.to_owned()),
            n: g.n(),
            s: g.s(),
            edges: g
                .edges()
                .iter()
                .map(|e| EdgeRecord {
                    u: e.u,
                    v: e.v,
                    weight: e.weight.to_rows(),
                })
                .collect(),
        }
    }

    /// Parses and validates. Errors carry the JSON path and, for syntax and
    /// type errors, the line and column.
    pub fn parse(text: &str) -> Result<MatrixWeightedGraph, String> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let file: GraphFile = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            if path == "." {
                e.into_inner().to_string()
            } else {
                format!("{path}: {}", e.into_inner())
            }
        })?;
        file.into_graph()
    }

    pub fn into_graph(self) -> Result<MatrixWeightedGraph, String> {
        if let Some(schema) = &self.schema {
            if schema != GRAPH_SCHEMA {
                return Err(format!("schema: expected \"{GRAPH_SCHEMA}\", found \"{schema}\""));
            }
        }
        let mut g = MatrixWeightedGraph::new(self.n, self.s);
        for (i, e) in self.edges.into_iter().enumerate() {
            if e.weight.len() != self.s {
                return Err(format!(
                    "edges[{i}].weight: expected {} rows, found {}",
                    self.s,
                    e.weight.len()
                ));
            }
            if let Some(j) = e.weight.iter().position(|r| r.len() != self.s) {
                return Err(format!(
                    "edges[{i}].weight[{j}]: expected {} entries, found {}",
                    self.s,
                    e.weight[j].len()
                ));
            }
            let w = DenseMatrix::from_rows(&e.weight).map_err(|err| format!("edges[{i}].weight: {err}"))?;
            g.add_edge(e.u, e.v, w);
        }
        let violations = g.validate();
        if !violations.is_empty() {
            let msgs: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
            return Err(format!("invalid graph: {}", msgs.join("; ")));
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use mwtree_core::fixtures;

    #[test]
    fn round_trip() {
        let g = fixtures::asymmetric_path4();
        let text = serde_json::to_string(&GraphFile::from_graph(&g)).unwrap();
        assert_eq!(GraphFile::parse(&text).unwrap(), g);
    }

    #[test]
    fn schema_is_optional_and_orientation_canonical() {
        let g = GraphFile::parse(r#"{"n":2,"s":1,"edges":[{"u":2,"v":1,"weight":[[3]]}]}"#).unwrap();
        assert_eq!(g.edges()[0].endpoints(), (1, 2));
    }

    #[test]
    fn unknown_field_names_path() {
        let err = GraphFile::parse(r#"{"n":2,"s":1,"edges":[{"u":1,"v":2,"w":[[3]]}]}"#).unwrap_err();
        assert!(err.starts_with("edges[0]"), "{err}");
        assert!(err.contains("line 1"), "{err}");
    }

    #[test]
    fn wrong_schema_rejected() {
        let err = GraphFile::parse(r#"{"schema":"other/v9","n":1,"s":1,"edges":[]}"#).unwrap_err();
        assert!(err.starts_with("schema"));
    }

    #[test]
    fn ragged_weight_rejected() {
        let err = GraphFile::parse(r#"{"n":2,"s":2,"edges":[{"u":1,"v":2,"weight":[[1,0],[0]]}]}"#)
            .unwrap_err();
        assert_eq!(err, "edges[0].weight[1]: expected 2 entries, found 1");
    }

    #[test]
    fn validation_failures_reported() {
        let err = GraphFile::parse(r#"{"n":3,"s":1,"edges":[{"u":1,"v":2,"weight":[[1]]}]}"#).unwrap_err();
        assert!(err.contains("not connected"), "{err}");
        let err = GraphFile::parse(r#"{"n":2,"s":1,"edges":[{"u":1,"v":5,"weight":[[1]]}]}"#).unwrap_err();
        assert!(err.contains("out of range"), "{err}");
    }
}
