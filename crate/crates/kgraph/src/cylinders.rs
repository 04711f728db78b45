//! Closed-form calculus of compact-open cylinder sets `Z(λ ∖ G)`.
//!
//! Meets and differences of cylinders stay inside the class: intersecting
//! with `Z(γ)` refines the root through `Λ^min`, and subtracting a plain
//! cylinder only adds exclusions. Differences against exclusion-carrying
//! cylinders expand into finitely many pieces whose roots are strictly
//! deeper, so every operation here is exact and terminating.

use crate::degree::Degree;
use crate::graph::KGraph;
use crate::path::Path;

/// The set `Z(root ∖ exclusions)` in the boundary path space; the exclusion
/// paths live at `s(root)`. An empty piece (exhaustive exclusions) is
/// represented by `None` after canonicalization.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct CylPiece {
    pub root: Path,
    pub exclusions: Vec<Path>,
}

impl CylPiece {
    pub fn plain(root: Path) -> CylPiece {
        CylPiece { root, exclusions: Vec::new() }
    }

    pub fn display(&self, graph: &KGraph) -> String {
        if self.exclusions.is_empty() {
            format!("Z({})", self.root.display(&graph.skeleton))
        } else {
            format!(
                "Z({} \\ {{{}}})",
                self.root.display(&graph.skeleton),
                self.exclusions
                    .iter()
                    .map(|p| p.display(&graph.skeleton))
                    .collect::<Vec<_>>()
                    .join(", ")
            )
        }
    }

    /// Canonical form: drop redundant exclusions, detect emptiness exactly.
    pub fn canonicalize(mut self, graph: &KGraph) -> Option<CylPiece> {
        if self.exclusions.iter().any(|e| e.is_vertex()) {
            return None;
        }
        self.exclusions.sort();
        self.exclusions.dedup();
        // an exclusion extending another is redundant
        let excl = self.exclusions.clone();
        self.exclusions.retain(|e| {
            !excl.iter().any(|other| {
                other != e
                    && other.degree.le(&e.degree)
                    && graph.segment(e, &Degree::zero(graph.rank()), &other.degree).unwrap() == *other
            })
        });
        if graph.is_exhaustive(self.root.source, &self.exclusions).expect("exclusions at source") {
            return None;
        }
        Some(self)
    }
}

/// Tails of `Λ^min(rho, nu)` on the `rho` side: the exclusions a constraint
/// `nu` induces on the continuation after extending by `rho`.
pub fn pullback(graph: &KGraph, rho: &Path, nu: &Path) -> Vec<Path> {
    graph
        .lambda_min(rho, nu)
        .expect("pullback requires a common range")
        .pairs
        .into_iter()
        .map(|(alpha, _)| alpha)
        .collect()
}

fn pullback_all(graph: &KGraph, rho: &Path, nus: &[Path]) -> Vec<Path> {
    let mut out = Vec::new();
    for nu in nus {
        out.extend(pullback(graph, rho, nu));
    }
    out
}

/// `A ∩ B` as a disjoint list of canonical pieces.
pub fn meet(graph: &KGraph, a: &CylPiece, b: &CylPiece) -> Vec<CylPiece> {
    let Ok(lm) = graph.lambda_min(&a.root, &b.root) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for (rho, rho2) in &lm.pairs {
        let root = graph.compose(&a.root, rho).unwrap();
        let mut exclusions = pullback_all(graph, rho, &a.exclusions);
        exclusions.extend(pullback_all(graph, rho2, &b.exclusions));
        if let Some(p) = (CylPiece { root, exclusions }).canonicalize(graph) {
            out.push(p);
        }
    }
    out
}

/// `A ∖ B` as a disjoint list of canonical pieces.
pub fn diff(graph: &KGraph, a: &CylPiece, b: &CylPiece) -> Vec<CylPiece> {
    let Ok(lm) = graph.lambda_min(&a.root, &b.root) else {
        return vec![a.clone()];
    };
    if a.root.range != b.root.range {
        return vec![a.clone()];
    }
    let mut out = Vec::new();
    // pieces that do not extend b.root at all
    let mut base = a.clone();
    base.exclusions.extend(lm.pairs.iter().map(|(rho, _)| rho.clone()));
    if let Some(p) = base.canonicalize(graph) {
        out.push(p);
    }
    // pieces extending b.root whose tail hits one of b's exclusions
    for (rho, rho2) in &lm.pairs {
        let avoid = pullback_all(graph, rho, &a.exclusions);
        let hit = pullback_all(graph, rho2, &b.exclusions);
        let below = graph.compose(&a.root, rho).unwrap();
        for (i, beta) in hit.iter().enumerate() {
            if beta.is_vertex() {
                // hitting a vertex exclusion means all of Z(below) is kept
                if let Some(p) = (CylPiece {
                    root: below.clone(),
                    exclusions: avoid.clone(),
                })
                .canonicalize(graph)
                {
                    out.push(p);
                }
                break;
            }
            let root = graph.compose(&below, beta).unwrap();
            let mut exclusions = pullback_all(graph, beta, &avoid);
            for earlier in &hit[..i] {
                exclusions.extend(pullback(graph, beta, earlier));
            }
            if let Some(p) = (CylPiece { root, exclusions }).canonicalize(graph) {
                out.push(p);
            }
        }
    }
    out
}

/// Subtract a union from a piece.
pub fn diff_many(graph: &KGraph, a: &CylPiece, subtract: &[CylPiece]) -> Vec<CylPiece> {
    let mut acc = vec![a.clone()];
    for b in subtract {
        let mut next = Vec::new();
        for piece in &acc {
            next.extend(diff(graph, piece, b));
        }
        acc = next;
    }
    acc
}

/// Rewrite a list of pieces as a pairwise disjoint list with the same union.
pub fn disjointify(graph: &KGraph, pieces: &[CylPiece]) -> Vec<CylPiece> {
    let mut out: Vec<CylPiece> = Vec::new();
    for p in pieces {
        let Some(p) = p.clone().canonicalize(graph) else { continue };
        let remainder = diff_many(graph, &p, &out);
        out.extend(remainder);
    }
    out
}

/// Is the union of `covered` a superset of `cover_of`? Exact.
pub fn covers(graph: &KGraph, covered: &[CylPiece], cover_of: &CylPiece) -> bool {
    diff_many(graph, cover_of, covered).is_empty()
}

/// Do the two unions coincide? Exact.
pub fn same_union(graph: &KGraph, a: &[CylPiece], b: &[CylPiece]) -> bool {
    a.iter().all(|p| covers(graph, b, p)) && b.iter().all(|p| covers(graph, a, p))
}

/// Does `x` belong to the piece?
pub fn member(
    graph: &KGraph,
    x: &crate::boundary::BoundaryPath,
    piece: &CylPiece,
) -> bool {
    crate::boundary::in_cylinder(graph, x, &piece.root, &piece.exclusions).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::BoundaryPath;
    use crate::fixtures::*;

    fn deg(v: &[u32]) -> Degree {
        Degree(v.to_vec())
    }

    #[test]
    fn meet_refines_through_lambda_min() {
        let g = t2();
        let b = g.path_of_edge(g.edge_by_name("b").unwrap());
        let r = g.path_of_edge(g.edge_by_name("r").unwrap());
        let m = meet(&g, &CylPiece::plain(b.clone()), &CylPiece::plain(r.clone()));
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].root, g.compose(&b, &r).unwrap());
    }

    #[test]
    fn diff_of_whole_space_by_edge() {
        let tt = tt2();
        let v = tt.vertex_by_name("v").unwrap();
        let e1 = tt.path_of_edge(tt.edge_by_name("e1").unwrap());
        let whole = CylPiece::plain(tt.vertex_path(v));
        let d = diff(&tt, &whole, &CylPiece::plain(e1.clone()));
        // Z(v) \ Z(e1) = Z(v \ {e1}), which is nonempty (contains e2...)
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].exclusions, vec![e1.clone()]);
        let e2 = tt.path_of_edge(tt.edge_by_name("e2").unwrap());
        let f = tt.path_of_edge(tt.edge_by_name("f").unwrap());
        let x = BoundaryPath::periodic(&tt, tt.compose(&e2, &f).unwrap()).unwrap();
        assert!(member(&tt, &x, &d[0]));
        let y = BoundaryPath::periodic(&tt, tt.compose(&e1, &f).unwrap()).unwrap();
        assert!(!member(&tt, &y, &d[0]));
    }

    #[test]
    fn diff_is_complement_within_union() {
        // pieces partition: meet(a,b) ∪ diff(a,b) = a, all disjoint
        let tt = tt2();
        let v = tt.vertex_by_name("v").unwrap();
        let e1 = tt.path_of_edge(tt.edge_by_name("e1").unwrap());
        let a = CylPiece::plain(tt.vertex_path(v));
        let b = CylPiece { root: e1.clone(), exclusions: vec![] };
        let inter = meet(&tt, &a, &b);
        let d = diff(&tt, &a, &b);
        let mut rebuilt = inter.clone();
        rebuilt.extend(d.clone());
        assert!(same_union(&tt, &rebuilt, &[a.clone()]));
        // sampled membership check on a few boundary paths
        let f = tt.path_of_edge(tt.edge_by_name("f").unwrap());
        for cyc in [
            tt.compose(&e1, &f).unwrap(),
            tt.compose(&tt.path_of_edge(tt.edge_by_name("e2").unwrap()), &f).unwrap(),
        ] {
            for pre_len in 0..3u32 {
                let mut x = BoundaryPath::periodic(&tt, cyc.clone()).unwrap();
                for _ in 0..pre_len {
                    x = crate::boundary::extend(&tt, &f, &x).unwrap();
                }
                let in_a = member(&tt, &x, &a);
                let in_b = member(&tt, &x, &b);
                let in_meet = inter.iter().filter(|p| member(&tt, &x, p)).count();
                let in_diff = d.iter().filter(|p| member(&tt, &x, p)).count();
                assert_eq!(in_meet + in_diff, usize::from(in_a), "partition of a");
                assert_eq!(in_meet, usize::from(in_a && in_b));
            }
        }
    }

    #[test]
    fn exhaustive_exclusions_collapse_to_empty() {
        let g = t2();
        let v = g.vertex_by_name("v").unwrap();
        let b = g.path_of_edge(g.edge_by_name("b").unwrap());
        let piece = CylPiece { root: g.vertex_path(v), exclusions: vec![b] };
        assert!(piece.canonicalize(&g).is_none());
    }

    #[test]
    fn diff_with_excluded_subtrahend() {
        // Z(v) \ Z(v \ {e1}) should be exactly the e1-cylinder part:
        // paths through e1
        let tt = tt2();
        let v = tt.vertex_by_name("v").unwrap();
        let e1 = tt.path_of_edge(tt.edge_by_name("e1").unwrap());
        let a = CylPiece::plain(tt.vertex_path(v));
        let b = CylPiece { root: tt.vertex_path(v), exclusions: vec![e1.clone()] };
        let d = diff(&tt, &a, &b);
        assert!(same_union(&tt, &d, &[CylPiece::plain(e1)]));
    }

    #[test]
    fn disjointify_overlapping_cylinders() {
        let g = t2();
        let b = g.path_of_edge(g.edge_by_name("b").unwrap());
        let r = g.path_of_edge(g.edge_by_name("r").unwrap());
        let pieces = vec![CylPiece::plain(b.clone()), CylPiece::plain(r.clone())];
        let dj = disjointify(&g, &pieces);
        assert!(same_union(&g, &dj, &pieces));
        // the unique boundary path of T2 must lie in exactly one piece
        let x = BoundaryPath::periodic(&g, g.compose(&b, &r).unwrap()).unwrap();
        let hits = dj.iter().filter(|p| member(&g, &x, p)).count();
        assert_eq!(hits, 1);
    }

    #[test]
    fn omega_cylinders_with_sources() {
        let om = omega_2_22();
        let origin = om.vertex_by_name("0_0").unwrap();
        let e_blue = om.enumerate_paths(origin, &deg(&[1, 0])).pop().unwrap();
        let e_red = om.enumerate_paths(origin, &deg(&[0, 1])).pop().unwrap();
        let m = meet(&om, &CylPiece::plain(e_blue), &CylPiece::plain(e_red));
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].root.degree, deg(&[1, 1]));
    }
}
