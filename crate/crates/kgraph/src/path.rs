//! Paths (morphisms) of a k-graph in color-sorted normal form.
//!
//! Edge lists are stored range-to-source: `edges[0]` carries the range
//! vertex, the last edge carries the source. The normal form lists all
//! color-1 edges first, then color-2, and so on; uniqueness is exactly the
//! factorisation property, so two paths are equal iff their structs are.

use crate::degree::Degree;
use crate::skeleton::{EdgeId, Skeleton, VertexId};
use serde::{Deserialize, Serialize};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Path {
    pub range: VertexId,
    pub source: VertexId,
    pub degree: Degree,
    /// Normal-form edge list, range-to-source.
    pub edges: Vec<EdgeId>,
}

impl Path {
    pub fn vertex(skel: &Skeleton, v: VertexId) -> Path {
        Path { range: v, source: v, degree: Degree::zero(skel.rank), edges: Vec::new() }
    }

    pub fn is_vertex(&self) -> bool {
        self.edges.is_empty()
    }

    /// Display in CLI syntax: `v` for vertices, `e1.e2.f` otherwise.
    pub fn display(&self, skel: &Skeleton) -> String {
        if self.is_vertex() {
            skel.vertex_name(self.range).to_string()
        } else {
            self.edges.iter().map(|&e| skel.edge(e).name.clone()).collect::<Vec<_>>().join(".")
        }
    }
}
