//! JSON graph schema:
//! `{"vertices":[{"w":0}],"edges":[{"h":[0,1],"dir":0}],"markings":{"1":0}}`.
//! `dir` is `0` when the first endpoint is the source, `1` when the second
//! one is, and `null` for undirected edges.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{GraphError, HalfEdgeGraph, Label};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonVertex {
    pub w: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonEdge {
    pub h: [usize; 2],
    pub dir: Option<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<JsonVertex>,
    pub edges: Vec<JsonEdge>,
    pub markings: BTreeMap<String, usize>,
}

impl From<&HalfEdgeGraph> for GraphJson {
    fn from(g: &HalfEdgeGraph) -> Self {
        GraphJson {
            vertices: g.weights().iter().map(|&w| JsonVertex { w }).collect(),
            edges: g
                .edges()
                .map(|(a, b)| JsonEdge {
                    h: [a, b],
                    dir: g.is_directed().then_some(0),
                })
                .collect(),
            markings: g
                .markings()
                .iter()
                .map(|(l, &v)| (l.to_string(), v))
                .collect(),
        }
    }
}

impl TryFrom<&GraphJson> for HalfEdgeGraph {
    type Error = GraphError;

    fn try_from(j: &GraphJson) -> Result<Self, GraphError> {
        let directed = j.edges.first().is_some_and(|e| e.dir.is_some());
        let mut edges = Vec::with_capacity(j.edges.len());
        for (i, e) in j.edges.iter().enumerate() {
            let [a, b] = e.h;
            let pair = match (directed, e.dir) {
                (false, None) | (true, Some(0)) => (a, b),
                (true, Some(1)) => (b, a),
                (_, Some(d)) if d > 1 => {
                    return Err(GraphError::Invalid(format!(
                        "edge {i}: dir must be 0, 1 or null"
                    )))
                }
                _ => {
                    return Err(GraphError::Invalid(format!(
                        "edge {i}: directed and undirected edges are mixed"
                    )))
                }
            };
            edges.push(pair);
        }
        let mut markings = BTreeMap::new();
        for (label, &v) in &j.markings {
            let l: Label = label.parse().map_err(|_| {
                GraphError::Invalid(format!("marking label {label:?} is not an integer"))
            })?;
            markings.insert(l, v);
        }
        let weights = j.vertices.iter().map(|v| v.w).collect();
        let g = HalfEdgeGraph::new(weights, &edges, directed, markings)?;
        g.validate()?;
        Ok(g)
    }
}

impl HalfEdgeGraph {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&GraphJson::from(self)).expect("graph serializes")
    }

    /// Parses and validates a graph in the JSON schema.
    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let j: GraphJson =
            serde_json::from_str(text).map_err(|e| GraphError::Invalid(e.to_string()))?;
        HalfEdgeGraph::try_from(&j)
    }
}
