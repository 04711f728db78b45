//! Ready-made example graphs used across tests, benches and the docs.

use crate::degree::Degree;
use crate::graph::{build_omega, KGraph};
use crate::skeleton::{EdgeSpec, GraphSpec, SquareSpec};

pub fn spec_t2() -> GraphSpec {
    GraphSpec {
        rank: 2,
        vertices: vec!["v".into()],
        edges: vec![
            EdgeSpec { id: "b".into(), color: 1, src: "v".into(), tgt: "v".into() },
            EdgeSpec { id: "r".into(), color: 2, src: "v".into(), tgt: "v".into() },
        ],
        squares: vec![SquareSpec { first: ["b".into(), "r".into()], second: ["r".into(), "b".into()] }],
        name: Some("t2".into()),
    }
}

/// The 2-torus graph: one vertex, one blue and one red loop, one square.
pub fn t2() -> KGraph {
    KGraph::validate(&spec_t2()).unwrap()
}

pub fn spec_tt2() -> GraphSpec {
    GraphSpec {
        rank: 2,
        vertices: vec!["v".into()],
        edges: vec![
            EdgeSpec { id: "e1".into(), color: 1, src: "v".into(), tgt: "v".into() },
            EdgeSpec { id: "e2".into(), color: 1, src: "v".into(), tgt: "v".into() },
            EdgeSpec { id: "f".into(), color: 2, src: "v".into(), tgt: "v".into() },
        ],
        squares: vec![
            SquareSpec { first: ["e1".into(), "f".into()], second: ["f".into(), "e2".into()] },
            SquareSpec { first: ["e2".into(), "f".into()], second: ["f".into(), "e1".into()] },
        ],
        name: Some("tt2".into()),
    }
}

/// Two blue loops, one red loop, with the swap rule `e1 f = f e2`, `e2 f = f e1`.
pub fn tt2() -> KGraph {
    KGraph::validate(&spec_tt2()).unwrap()
}

pub fn spec_tt2_flip() -> GraphSpec {
    GraphSpec {
        rank: 2,
        vertices: vec!["v".into()],
        edges: vec![
            EdgeSpec { id: "e1".into(), color: 1, src: "v".into(), tgt: "v".into() },
            EdgeSpec { id: "e2".into(), color: 1, src: "v".into(), tgt: "v".into() },
            EdgeSpec { id: "f".into(), color: 2, src: "v".into(), tgt: "v".into() },
        ],
        squares: vec![
            SquareSpec { first: ["e1".into(), "f".into()], second: ["f".into(), "e1".into()] },
            SquareSpec { first: ["e2".into(), "f".into()], second: ["f".into(), "e2".into()] },
        ],
        name: Some("tt2_flip".into()),
    }
}

/// Same skeleton as [`tt2`] but with the product (flip) rule `e_i f = f e_i`.
pub fn tt2_flip() -> KGraph {
    KGraph::validate(&spec_tt2_flip()).unwrap()
}

/// `Ω_{2,(2,2)}`: the 3x3 grid segment, with sources and sinks.
pub fn omega_2_22() -> KGraph {
    build_omega(2, &Degree(vec![2, 2]))
}

pub fn spec_t3() -> GraphSpec {
    GraphSpec {
        rank: 3,
        vertices: vec!["v".into()],
        edges: vec![
            EdgeSpec { id: "a".into(), color: 1, src: "v".into(), tgt: "v".into() },
            EdgeSpec { id: "b".into(), color: 2, src: "v".into(), tgt: "v".into() },
            EdgeSpec { id: "c".into(), color: 3, src: "v".into(), tgt: "v".into() },
        ],
        squares: vec![
            SquareSpec { first: ["a".into(), "b".into()], second: ["b".into(), "a".into()] },
            SquareSpec { first: ["a".into(), "c".into()], second: ["c".into(), "a".into()] },
            SquareSpec { first: ["b".into(), "c".into()], second: ["c".into(), "b".into()] },
        ],
        name: Some("t3".into()),
    }
}

/// The 3-torus graph: the rank-3 fixture exercising the cube condition.
pub fn t3() -> KGraph {
    KGraph::validate(&spec_t3()).unwrap()
}

pub fn spec_t2_prime() -> GraphSpec {
    GraphSpec {
        rank: 2,
        vertices: vec!["v".into()],
        edges: vec![
            EdgeSpec { id: "b2".into(), color: 1, src: "v".into(), tgt: "v".into() },
            EdgeSpec { id: "r2".into(), color: 2, src: "v".into(), tgt: "v".into() },
        ],
        squares: vec![SquareSpec {
            first: ["b2".into(), "r2".into()],
            second: ["r2".into(), "b2".into()],
        }],
        name: Some("t2_prime".into()),
    }
}

/// A renamed copy of [`t2`], the target of the relabeling conjugacy.
pub fn t2_prime() -> KGraph {
    KGraph::validate(&spec_t2_prime()).unwrap()
}

pub fn spec_two_loops() -> GraphSpec {
    GraphSpec {
        rank: 1,
        vertices: vec!["v".into()],
        edges: vec![
            EdgeSpec { id: "a".into(), color: 1, src: "v".into(), tgt: "v".into() },
            EdgeSpec { id: "b".into(), color: 1, src: "v".into(), tgt: "v".into() },
        ],
        squares: vec![],
        name: Some("two_loops".into()),
    }
}

/// 1-graph with two loops at one vertex; aperiodic, with `Per(a^∞) = Z` but
/// `IP(a^∞) = 0`.
pub fn two_loops() -> KGraph {
    KGraph::validate(&spec_two_loops()).unwrap()
}

/// 1-graph with vertices `u`, `v` and two parallel-free edges into `u`,
/// used as the negative exhaustiveness example.
pub fn spec_fork() -> GraphSpec {
    GraphSpec {
        rank: 1,
        vertices: vec!["u".into(), "v".into(), "w".into()],
        edges: vec![
            EdgeSpec { id: "alpha".into(), color: 1, src: "v".into(), tgt: "u".into() },
            EdgeSpec { id: "beta".into(), color: 1, src: "w".into(), tgt: "u".into() },
        ],
        squares: vec![],
        name: Some("fork".into()),
    }
}

pub fn fork() -> KGraph {
    KGraph::validate(&spec_fork()).unwrap()
}

/// The four acceptance fixtures.
pub fn acceptance_fixtures() -> Vec<KGraph> {
    vec![t2(), tt2(), omega_2_22(), t3()]
}
