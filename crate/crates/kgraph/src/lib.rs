//! Exact computation in finitely-aligned higher-rank graphs (k-graphs):
//! the path category with color-sorted normal forms, boundary path spaces
//! and shift dynamics, the boundary path groupoid with its compact-open
//! bisection calculus, symbolic Kumjian-Pask / Steinberg algebras over a
//! pluggable coefficient ring, and verifiers for continuous orbit
//! equivalence, eventual one-sided conjugacy, stabilization, and two-sided
//! conjugacy.
//!
//! Everything is integer/symbolic and exact at desk scale; verifiers that
//! depend on an unbounded quantifier carry an explicit depth envelope in
//! their verdicts.

pub mod boundary;
pub mod cylinders;
pub mod degree;
pub mod groupoid;
pub mod sampling;
pub mod equivalences;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod hnf;
pub mod par;
pub mod path;
pub mod skeleton;
pub mod steinberg;

pub use degree::{Degree, ExtDegree, ExtEntry, ZVec};
pub use graph::{build_omega, build_omega_ext, KGraph, LambdaMin};
pub use path::Path;
pub use skeleton::{EdgeId, GraphSpec, Skeleton, VertexId};
