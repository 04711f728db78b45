//! Colored skeletons and factorization-square tables: the presentation data
//! a k-graph is validated from.
//!
//! JSON wire format (`k`-graph file):
//! ```json
//! {"rank": 2,
//!  "vertices": ["v"],
//!  "edges": [{"id": "b", "color": 1, "src": "v", "tgt": "v"},
//!            {"id": "r", "color": 2, "src": "v", "tgt": "v"}],
//!  "squares": [{"first": ["b", "r"], "second": ["r", "b"]}]}
//! ```
//! A square `{"first": [x, y], "second": [u, w]}` equates the two
//! factorizations of one bi-colored path: `x` then `y` equals `u` then `w`,
//! both read in source-to-range traversal order.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct VertexId(pub u32);

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct EdgeId(pub u32);

/// One edge of the skeleton. As a morphism, `r(e)` is the `tgt` vertex and
/// `s(e)` is the `src` vertex; a path is traversed src-to-tgt edge by edge
/// from its source vertex to its range vertex.
#[derive(Clone, Debug)]
pub struct Edge {
    pub name: String,
    pub color: usize,
    pub src: VertexId,
    pub tgt: VertexId,
}

#[derive(Clone, Debug)]
pub struct Skeleton {
    pub rank: usize,
    pub vertex_names: Vec<String>,
    pub edges: Vec<Edge>,
}

impl Skeleton {
    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v.0 as usize]
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0 as usize]
    }

    /// Range of an edge, as a morphism.
    pub fn range(&self, e: EdgeId) -> VertexId {
        self.edge(e).tgt
    }

    /// Source of an edge, as a morphism.
    pub fn source(&self, e: EdgeId) -> VertexId {
        self.edge(e).src
    }

    pub fn color(&self, e: EdgeId) -> usize {
        self.edge(e).color
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertex_names.len() as u32).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len() as u32).map(EdgeId)
    }

    /// Edges of a given color with range `v` (candidates for extending a path
    /// at its source end are instead found via [`Skeleton::edges_into`]).
    pub fn edges_with_range(&self, v: VertexId, color: usize) -> Vec<EdgeId> {
        self.edge_ids().filter(|&e| self.range(e) == v && self.color(e) == color).collect()
    }

    /// Edges of a given color with source `v`.
    pub fn edges_with_source(&self, v: VertexId, color: usize) -> Vec<EdgeId> {
        self.edge_ids().filter(|&e| self.source(e) == v && self.color(e) == color).collect()
    }

    /// Alias kept close to the traversal picture: edges that can be appended
    /// at the source end of a path ending at `v`.
    pub fn edges_into(&self, v: VertexId, color: usize) -> Vec<EdgeId> {
        self.edges_with_range(v, color)
    }
}

/// The factorization-square table: for composable bi-colored pairs, stored as
/// ordered morphism pairs `(range-end edge, source-end edge)`, the map to the
/// opposite-color-order factorization of the same path.
#[derive(Clone, Debug, Default)]
pub struct SquareTable {
    pub map: BTreeMap<(EdgeId, EdgeId), (EdgeId, EdgeId)>,
}

impl SquareTable {
    /// Rewrite the adjacent pair `x·y` (x at the range end) to the
    /// opposite color order. `None` when the pair is missing from the table.
    pub fn swap(&self, x: EdgeId, y: EdgeId) -> Option<(EdgeId, EdgeId)> {
        self.map.get(&(x, y)).copied()
    }
}

/// Raw graph description as parsed from JSON, prior to validation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphSpec {
    pub rank: usize,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeSpec>,
    #[serde(default)]
    pub squares: Vec<SquareSpec>,
    /// Optional display name used in reports.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EdgeSpec {
    pub id: String,
    pub color: usize,
    pub src: String,
    pub tgt: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SquareSpec {
    /// Composable pair "x then y" in source-to-range traversal order.
    pub first: [String; 2],
    /// The equal pair "u then w" with the two colors in the opposite order.
    pub second: [String; 2],
}
