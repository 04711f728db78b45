//! Deterministic, seeded generation of eventually periodic boundary paths
//! and groupoid arrows for the batch verifiers.

use crate::boundary::{self, BoundaryPath, BoundaryVerdict};
use crate::degree::{Degree, ZVec};
use crate::graph::KGraph;
use crate::groupoid::GElem;
use crate::path::Path;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Closed paths at `v` with degree in `(0, cap]`.
pub fn cycles_at(graph: &KGraph, v: crate::skeleton::VertexId, cap: &Degree) -> Vec<Path> {
    graph
        .enumerate_paths_upto(v, cap)
        .into_iter()
        .filter(|p| !p.degree.is_zero() && p.source == v)
        .collect()
}

/// Eventually periodic boundary paths of the graph: periodic tails over all
/// small cycles, with all small prefixes attached, plus maximal finite paths
/// when the graph has sources. Every candidate passes the boundary-condition
/// verifier before being admitted; the list is deduplicated semantically,
/// seeded-shuffled, and truncated to `count`.
pub fn boundary_samples(graph: &KGraph, seed: u64, count: usize) -> Vec<BoundaryPath> {
    let cap = Degree(vec![2; graph.rank()]);
    let mut candidates: Vec<BoundaryPath> = Vec::new();
    for v in graph.skeleton.vertices() {
        for cyc in cycles_at(graph, v, &cap) {
            let Ok(tail) = BoundaryPath::periodic(graph, cyc) else { continue };
            if !matches!(
                boundary::verify_boundary(graph, &tail, 2),
                Ok(BoundaryVerdict::Verified { .. })
            ) {
                continue;
            }
            candidates.push(tail.clone());
            for w in graph.skeleton.vertices() {
                for pre in graph.enumerate_paths_upto(w, &cap) {
                    if pre.degree.is_zero() || pre.source != v {
                        continue;
                    }
                    if let Ok(x) = boundary::extend(graph, &pre, &tail) {
                        candidates.push(x);
                    }
                }
            }
        }
        // finite maximal paths (graphs with sources)
        if graph.flags.has_sources {
            for p in graph.enumerate_paths_upto(v, &cap) {
                let x = BoundaryPath::finite(graph, p);
                if matches!(
                    boundary::verify_boundary(graph, &x, 2),
                    Ok(BoundaryVerdict::Verified { .. })
                ) {
                    candidates.push(x);
                }
            }
        }
    }
    let mut distinct: Vec<BoundaryPath> = Vec::new();
    for c in candidates {
        if !distinct.iter().any(|d| boundary::eq(graph, d, &c)) {
            distinct.push(c);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    distinct.shuffle(&mut rng);
    distinct.truncate(count);
    distinct
}

/// Groupoid arrows built from sampled tails: for a tail `z` and paths
/// `λ, μ` into `r(z)`, the arrow `(λz, d(λ)-d(μ), μz)`. At least `count`
/// arrows when the graph admits them; deterministic in the seed.
pub fn arrow_samples(graph: &KGraph, seed: u64, count: usize) -> Vec<GElem> {
    let tails = boundary_samples(graph, seed, 16.max(count / 8));
    let cap = Degree(vec![2; graph.rank()]);
    let mut arrows: Vec<GElem> = Vec::new();
    let mut into: Vec<(Path, Path)> = Vec::new();
    for z in &tails {
        let mut legs: Vec<Path> = vec![graph.vertex_path(z.range())];
        for w in graph.skeleton.vertices() {
            legs.extend(
                graph
                    .enumerate_paths_upto(w, &cap)
                    .into_iter()
                    .filter(|p| p.source == z.range() && !p.degree.is_zero()),
            );
        }
        for lam in &legs {
            for mu in &legs {
                into.push((lam.clone(), mu.clone()));
                let x = boundary::extend(graph, lam, z).unwrap();
                let y = boundary::extend(graph, mu, z).unwrap();
                let m: ZVec = lam.degree.to_zvec().sub(&mu.degree.to_zvec());
                let a = GElem::new(graph, x, m, y, (lam.degree.clone(), mu.degree.clone()))
                    .expect("constructed from a shared tail");
                arrows.push(a);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    arrows.shuffle(&mut rng);
    if arrows.len() > count {
        arrows.truncate(count);
    }
    arrows
}
