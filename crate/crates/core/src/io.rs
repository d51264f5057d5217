//! JSON file formats for graphs and divisors.
//!
//! Graph file:
//!
//! ```json
//! {
//!   "vertices": [{"id": "a", "genus": 1}, {"id": "b"}],
//!   "edges": [["a", "b"], ["a", "b"], ["b", "b"]]
//! }
//! ```
//!
//! `genus` defaults to 0. Repeated pairs are parallel edges and `["v", "v"]`
//! is a loop. A divisor file is a single object mapping vertex ids to
//! integers; vertices that are not mentioned get coefficient 0. Unknown keys
//! are rejected in both formats.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::augmented::AugmentedCurve;
use crate::error::{Error, Result};
use crate::graph::{GraphDivisor, Multigraph};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexSpec {
    pub id: String,
    #[serde(default)]
    pub genus: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSpec {
    pub vertices: Vec<VertexSpec>,
    pub edges: Vec<[String; 2]>,
}

impl GraphSpec {
    pub fn to_curve(&self) -> Result<AugmentedCurve> {
        let ids: Vec<&str> = self.vertices.iter().map(|v| v.id.as_str()).collect();
        let edges: Vec<(&str, &str)> = self.edges.iter().map(|[a, b]| (a.as_str(), b.as_str())).collect();
        let graph = Multigraph::new(&ids, &edges)?;
        AugmentedCurve::new(graph, self.vertices.iter().map(|v| v.genus).collect())
    }

    pub fn from_curve(ac: &AugmentedCurve) -> Self {
        let g = ac.graph();
        GraphSpec {
            vertices: (0..g.vertex_count())
                .map(|v| VertexSpec { id: g.id(v).to_owned(), genus: ac.genus_of(v) })
                .collect(),
            edges: g.edges().iter().map(|&(a, b)| [g.id(a).to_owned(), g.id(b).to_owned()]).collect(),
        }
    }
}

pub fn parse_curve(text: &str) -> Result<AugmentedCurve> {
    let spec: GraphSpec = serde_json::from_str(text).map_err(|e| Error::Parse(format!("graph: {e}")))?;
    spec.to_curve()
}

pub fn parse_divisor(graph: &Multigraph, text: &str) -> Result<GraphDivisor> {
    graph.divisor_from_map(&parse_vertex_map(text)?)
}

/// Parses an `id -> integer` object, as used by divisor and twist files.
pub fn parse_vertex_map(text: &str) -> Result<BTreeMap<String, i64>> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("divisor: {e}")))
}

pub fn curve_to_json(ac: &AugmentedCurve) -> String {
    serde_json::to_string_pretty(&GraphSpec::from_curve(ac)).expect("graph spec serializes")
}
