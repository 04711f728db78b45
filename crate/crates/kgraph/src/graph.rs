//! Validated k-graphs and the path calculus: composition, degree-wise
//! factorization, path enumeration, minimal common extensions, and
//! exhaustive-set testing.

use crate::degree::Degree;
use crate::error::{PathError, ValidateError};
use crate::path::Path;
use crate::skeleton::{Edge, EdgeId, GraphSpec, Skeleton, SquareTable, VertexId};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// Structural flags computed during validation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFlags {
    pub row_finite: bool,
    pub has_sources: bool,
    pub has_sinks: bool,
    pub finitely_aligned: bool,
    pub finite_vertices: bool,
}

/// A validated finite k-graph presentation.
#[derive(Clone, Debug)]
pub struct KGraph {
    pub skeleton: Skeleton,
    pub squares: SquareTable,
    pub flags: GraphFlags,
    pub name: String,
}

impl KGraph {
    pub fn rank(&self) -> usize {
        self.skeleton.rank
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.skeleton.vertex_names.iter().position(|n| n == name).map(|i| VertexId(i as u32))
    }

    pub fn edge_by_name(&self, name: &str) -> Option<EdgeId> {
        self.skeleton.edges.iter().position(|e| e.name == name).map(|i| EdgeId(i as u32))
    }

    /// Two graphs share a skeleton iff vertices, edge names, colors and
    /// endpoints all agree (factorization rules may differ).
    pub fn same_skeleton(&self, other: &KGraph) -> bool {
        self.skeleton.rank == other.skeleton.rank
            && self.skeleton.vertex_names == other.skeleton.vertex_names
            && self.skeleton.edges.len() == other.skeleton.edges.len()
            && self.skeleton.edges.iter().zip(&other.skeleton.edges).all(|(a, b)| {
                a.name == b.name && a.color == b.color && a.src == b.src && a.tgt == b.tgt
            })
    }

    // ------------------------------------------------------------------
    // Validation
    // ------------------------------------------------------------------

    /// Check the presentation: total bijective square rules with compatible
    /// endpoints, and for rank >= 3 the cube condition on tri-colored paths.
    pub fn validate(spec: &GraphSpec) -> Result<KGraph, ValidateError> {
        let mut vertex_names = Vec::new();
        for v in &spec.vertices {
            if vertex_names.contains(v) {
                return Err(ValidateError::DuplicateVertex(v.clone()));
            }
            vertex_names.push(v.clone());
        }
        let vid = |name: &str| -> Option<VertexId> {
            vertex_names.iter().position(|n| n == name).map(|i| VertexId(i as u32))
        };
        let mut edges = Vec::new();
        let mut edge_names = BTreeSet::new();
        for e in &spec.edges {
            if !edge_names.insert(e.id.clone()) {
                return Err(ValidateError::DuplicateEdge(e.id.clone()));
            }
            if e.color == 0 || e.color > spec.rank {
                return Err(ValidateError::ColorOutOfRange(e.id.clone(), e.color, spec.rank));
            }
            let src = vid(&e.src)
                .ok_or_else(|| ValidateError::UnknownVertex(e.src.clone(), e.id.clone()))?;
            let tgt = vid(&e.tgt)
                .ok_or_else(|| ValidateError::UnknownVertex(e.tgt.clone(), e.id.clone()))?;
            edges.push(Edge { name: e.id.clone(), color: e.color - 1, src, tgt });
        }
        let skeleton = Skeleton { rank: spec.rank, vertex_names, edges };
        let eid = |name: &str| -> Result<EdgeId, ValidateError> {
            skeleton
                .edges
                .iter()
                .position(|e| e.name == name)
                .map(|i| EdgeId(i as u32))
                .ok_or_else(|| ValidateError::UnknownEdge(name.to_string()))
        };

        // Build the square table. A spec square {first:[a,b], second:[c,d]}
        // gives, in morphism order (range end first), the keys
        // (b,a) <-> (d,c): both are factorizations of one bi-colored path.
        let mut table: BTreeMap<(EdgeId, EdgeId), (EdgeId, EdgeId)> = BTreeMap::new();
        for sq in &spec.squares {
            let a = eid(&sq.first[0])?;
            let b = eid(&sq.first[1])?;
            let c = eid(&sq.second[0])?;
            let d = eid(&sq.second[1])?;
            let (ca, cb, cc, cd) =
                (skeleton.color(a), skeleton.color(b), skeleton.color(c), skeleton.color(d));
            if ca == cb || ca != cd || cb != cc {
                return Err(ValidateError::SquareColors(
                    format!("{}.{}", sq.first[0], sq.first[1]),
                    format!("{}.{}", sq.second[0], sq.second[1]),
                ));
            }
            // composability within each pair ("a then b": tgt(a) = src(b))
            // and equality of endpoints across the two pairs
            if skeleton.edge(a).tgt != skeleton.edge(b).src
                || skeleton.edge(c).tgt != skeleton.edge(d).src
                || skeleton.edge(b).tgt != skeleton.edge(d).tgt
                || skeleton.edge(a).src != skeleton.edge(c).src
            {
                return Err(ValidateError::EndpointMismatch(
                    format!("{}.{}", sq.first[0], sq.first[1]),
                    format!("{}.{}", sq.second[0], sq.second[1]),
                ));
            }
            for (key, val) in [((b, a), (d, c)), ((d, c), (b, a))] {
                if table.insert(key, val).is_some() {
                    return Err(ValidateError::NonBijectiveRule(format!(
                        "{}.{}",
                        skeleton.edge(key.0).name,
                        skeleton.edge(key.1).name
                    )));
                }
            }
        }
        // Totality: every composable bi-colored morphism pair must be a key.
        for x in skeleton.edge_ids() {
            for y in skeleton.edge_ids() {
                if skeleton.color(x) != skeleton.color(y)
                    && skeleton.source(x) == skeleton.range(y)
                    && !table.contains_key(&(x, y))
                {
                    return Err(ValidateError::MissingRule(
                        skeleton.edge(y).name.clone(),
                        skeleton.edge(x).name.clone(),
                    ));
                }
            }
        }
        // Bijectivity: swapping twice must return the original pair, and all
        // endpoint data of the image must match the preimage.
        for (&(x, y), &(u, w)) in &table {
            if table.get(&(u, w)) != Some(&(x, y)) {
                return Err(ValidateError::NonBijectiveRule(format!(
                    "{}.{}",
                    skeleton.edge(u).name,
                    skeleton.edge(w).name
                )));
            }
            if skeleton.range(x) != skeleton.range(u) || skeleton.source(y) != skeleton.source(w) {
                return Err(ValidateError::EndpointMismatch(
                    skeleton.edge(x).name.clone(),
                    skeleton.edge(u).name.clone(),
                ));
            }
        }
        let squares = SquareTable { map: table };

        let mut graph = KGraph {
            name: spec.name.clone().unwrap_or_else(|| "graph".to_string()),
            skeleton,
            squares,
            flags: GraphFlags {
                row_finite: true,
                has_sources: false,
                has_sinks: false,
                finitely_aligned: true,
                finite_vertices: true,
            },
        };

        if graph.rank() >= 3 {
            graph.check_cube_condition()?;
        }

        // Flags: a finite skeleton is always row-finite; sources and sinks
        // are detected color-wise on the skeleton.
        let mut has_sources = false;
        let mut has_sinks = false;
        for v in graph.skeleton.vertices() {
            for c in 0..graph.rank() {
                if graph.skeleton.edges_with_range(v, c).is_empty() {
                    has_sources = true;
                }
                if graph.skeleton.edges_with_source(v, c).is_empty() {
                    has_sinks = true;
                }
            }
        }
        graph.flags.has_sources = has_sources;
        graph.flags.has_sinks = has_sinks;
        // Finite alignment certificate: Lambda^min is finite on all edge
        // pairs; deeper pairs follow from the factorisation property.
        for x in graph.skeleton.edge_ids() {
            for y in graph.skeleton.edge_ids() {
                let (px, py) = (graph.path_of_edge(x), graph.path_of_edge(y));
                if px.range == py.range {
                    let _ = graph.lambda_min(&px, &py).expect("same range");
                }
            }
        }
        Ok(graph)
    }

    /// Cube condition: from every composable tri-colored descending triple,
    /// the two normalization routes agree. These triples are exactly the
    /// critical pairs of the adjacent-swap rewriting system.
    fn check_cube_condition(&self) -> Result<(), ValidateError> {
        let skel = &self.skeleton;
        for z in skel.edge_ids() {
            for y in skel.edge_ids() {
                if skel.source(z) != skel.range(y) || skel.color(z) <= skel.color(y) {
                    continue;
                }
                for x in skel.edge_ids() {
                    if skel.source(y) != skel.range(x) || skel.color(y) <= skel.color(x) {
                        continue;
                    }
                    // route A: swap (z,y) first; route B: swap (y,x) first
                    let ra = self.cube_route(&[z, y, x], &[0, 1, 0]);
                    let rb = self.cube_route(&[z, y, x], &[1, 0, 1]);
                    match (ra, rb) {
                        (Some(a), Some(b)) if a == b => {}
                        _ => {
                            return Err(ValidateError::CubeConditionFailure(format!(
                                "{}.{}.{}",
                                skel.edge(z).name,
                                skel.edge(y).name,
                                skel.edge(x).name
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn cube_route(&self, edges: &[EdgeId; 3], positions: &[usize; 3]) -> Option<Vec<EdgeId>> {
        let mut w = edges.to_vec();
        for &p in positions {
            let (a, b) = self.squares.swap(w[p], w[p + 1])?;
            w[p] = a;
            w[p + 1] = b;
        }
        Some(w)
    }

    // ------------------------------------------------------------------
    // Normal forms and factorization
    // ------------------------------------------------------------------

    pub fn vertex_path(&self, v: VertexId) -> Path {
        Path::vertex(&self.skeleton, v)
    }

    pub fn path_of_edge(&self, e: EdgeId) -> Path {
        let mut d = Degree::zero(self.rank());
        d.0[self.skeleton.color(e)] = 1;
        Path {
            range: self.skeleton.range(e),
            source: self.skeleton.source(e),
            degree: d,
            edges: vec![e],
        }
    }

    fn degree_of_edges(&self, edges: &[EdgeId]) -> Degree {
        let mut d = Degree::zero(self.rank());
        for &e in edges {
            d.0[self.skeleton.color(e)] += 1;
        }
        d
    }

    /// Rearrange a composable range-to-source edge list so its color word
    /// becomes `target`; the factorisation property makes the result unique.
    fn refactor(&self, edges: &[EdgeId], target: &[usize]) -> Vec<EdgeId> {
        debug_assert_eq!(edges.len(), target.len());
        let mut w = edges.to_vec();
        for pos in 0..w.len() {
            if self.skeleton.color(w[pos]) == target[pos] {
                continue;
            }
            let j = (pos + 1..w.len())
                .find(|&j| self.skeleton.color(w[j]) == target[pos])
                .expect("target color word must be a permutation of the edge colors");
            for i in (pos..j).rev() {
                let (a, b) = self
                    .squares
                    .swap(w[i], w[i + 1])
                    .expect("validated graph has a total square table");
                w[i] = a;
                w[i + 1] = b;
            }
        }
        w
    }

    fn ascending_color_word(&self, d: &Degree) -> Vec<usize> {
        let mut out = Vec::with_capacity(d.total() as usize);
        for (c, &n) in d.0.iter().enumerate() {
            out.extend(std::iter::repeat(c).take(n as usize));
        }
        out
    }

    /// Build a path from a composable range-to-source edge list, normalizing.
    pub fn path_from_edges(&self, edges: &[EdgeId]) -> Result<Path, PathError> {
        if edges.is_empty() {
            panic!("use vertex_path for degree-zero paths");
        }
        for pair in edges.windows(2) {
            if self.skeleton.source(pair[0]) != self.skeleton.range(pair[1]) {
                return Err(PathError::EndpointMismatch(
                    self.skeleton.vertex_name(self.skeleton.source(pair[0])).into(),
                    self.skeleton.vertex_name(self.skeleton.range(pair[1])).into(),
                ));
            }
        }
        let degree = self.degree_of_edges(edges);
        let target = self.ascending_color_word(&degree);
        let w = self.refactor(edges, &target);
        Ok(Path {
            range: self.skeleton.range(w[0]),
            source: self.skeleton.source(*w.last().unwrap()),
            degree,
            edges: w,
        })
    }

    /// Composition `λμ` with `s(λ) = r(μ)`; degree adds.
    pub fn compose(&self, lambda: &Path, mu: &Path) -> Result<Path, PathError> {
        if lambda.source != mu.range {
            return Err(PathError::EndpointMismatch(
                self.skeleton.vertex_name(lambda.source).into(),
                self.skeleton.vertex_name(mu.range).into(),
            ));
        }
        if lambda.is_vertex() {
            return Ok(mu.clone());
        }
        if mu.is_vertex() {
            return Ok(lambda.clone());
        }
        let mut edges = lambda.edges.clone();
        edges.extend_from_slice(&mu.edges);
        self.path_from_edges(&edges)
    }

    /// The unique segment `λ(m, n)` for `m ≤ n ≤ d(λ)`.
    pub fn segment(&self, lambda: &Path, m: &Degree, n: &Degree) -> Result<Path, PathError> {
        if !(m.le(n) && n.le(&lambda.degree)) {
            return Err(PathError::DegreeOutOfRange(m.clone(), n.clone(), lambda.degree.clone()));
        }
        let (_, tail) = self.split(lambda, m);
        let (mid, _) = self.split(&tail, &n.sub(m));
        Ok(mid)
    }

    /// Split `λ = μν` at degree `m`, returning `(μ, ν)` in normal form.
    pub fn split(&self, lambda: &Path, m: &Degree) -> (Path, Path) {
        debug_assert!(m.le(&lambda.degree));
        if m.is_zero() {
            return (self.vertex_path(lambda.range), lambda.clone());
        }
        if *m == lambda.degree {
            return (lambda.clone(), self.vertex_path(lambda.source));
        }
        let mut target = self.ascending_color_word(m);
        target.extend(self.ascending_color_word(&lambda.degree.sub(m)));
        let w = self.refactor(&lambda.edges, &target);
        let cut = m.total() as usize;
        let head = &w[..cut];
        let tail = &w[cut..];
        let mid_vertex = self.skeleton.source(head[cut - 1]);
        let mu = Path {
            range: lambda.range,
            source: mid_vertex,
            degree: m.clone(),
            edges: head.to_vec(),
        };
        let nu = Path {
            range: mid_vertex,
            source: lambda.source,
            degree: lambda.degree.sub(m),
            edges: tail.to_vec(),
        };
        (mu, nu)
    }

    // ------------------------------------------------------------------
    // Enumeration
    // ------------------------------------------------------------------

    /// All of `vΛ^n` in normal form, ordered deterministically.
    pub fn enumerate_paths(&self, v: VertexId, n: &Degree) -> Vec<Path> {
        let word = self.ascending_color_word(n);
        let mut out = Vec::new();
        // DFS over normal-form edge lists; every color-ascending composable
        // list is the normal form of exactly one path.
        let mut stack: Vec<(Vec<EdgeId>, VertexId)> = vec![(Vec::new(), v)];
        while let Some((prefix, at)) = stack.pop() {
            if prefix.len() == word.len() {
                let source = at;
                out.push(Path {
                    range: v,
                    source,
                    degree: n.clone(),
                    edges: prefix,
                });
                continue;
            }
            let color = word[prefix.len()];
            for e in self.skeleton.edges_into(at, color) {
                let mut next = prefix.clone();
                next.push(e);
                stack.push((next, self.skeleton.source(e)));
            }
        }
        out.sort();
        out
    }

    /// All paths `vΛ^{≤ cap}` (every degree in the box `[0, cap]`).
    pub fn enumerate_paths_upto(&self, v: VertexId, cap: &Degree) -> Vec<Path> {
        let mut out = Vec::new();
        for d in cap.box_iter() {
            out.extend(self.enumerate_paths(v, &d));
        }
        out
    }

    // ------------------------------------------------------------------
    // Minimal common extensions
    // ------------------------------------------------------------------

    /// `MCE(λ, μ)` and `Λ^min(λ, μ)`; requires `r(λ) = r(μ)`.
    pub fn lambda_min(&self, lambda: &Path, mu: &Path) -> Result<LambdaMin, PathError> {
        if lambda.range != mu.range {
            return Err(PathError::RangeMismatch(
                self.skeleton.vertex_name(lambda.range).into(),
                self.skeleton.vertex_name(mu.range).into(),
            ));
        }
        let top = lambda.degree.join(&mu.degree);
        let ext = top.sub(&lambda.degree);
        let mut mce = Vec::new();
        let mut pairs = Vec::new();
        for rho in self.enumerate_paths(lambda.source, &ext) {
            let tau = self.compose(lambda, &rho).expect("endpoints match");
            if self.segment(&tau, &Degree::zero(self.rank()), &mu.degree).unwrap() == *mu {
                let tail_mu = self.segment(&tau, &mu.degree, &top).unwrap();
                mce.push(tau);
                pairs.push((rho, tail_mu));
            }
        }
        Ok(LambdaMin { mce, pairs })
    }

    // ------------------------------------------------------------------
    // Exhaustive sets
    // ------------------------------------------------------------------

    /// Exact exhaustiveness test for `E ⊆ vΛ`.
    ///
    /// A witness against exhaustiveness is a path λ ∈ vΛ with
    /// `Λ^min(λ, μ) = ∅` for every μ ∈ E. Witnesses are closed under
    /// extension, and the set of complementary tails
    /// `Ob(λ) = ∪_μ {ρ : (ρ, τ) ∈ Λ^min(λ, μ)}` evolves edge by edge through
    /// a finite state space, so a depth-first search with memoization decides
    /// the question exactly, sources and cycles included.
    pub fn is_exhaustive(&self, v: VertexId, paths: &[Path]) -> Result<bool, PathError> {
        for p in paths {
            if p.range != v {
                return Err(PathError::RangeMismatch(
                    self.skeleton.vertex_name(v).into(),
                    self.skeleton.vertex_name(p.range).into(),
                ));
            }
        }
        if paths.is_empty() {
            // the empty set misses the vertex path itself
            return Ok(false);
        }
        let start: BTreeSet<Path> = paths.iter().cloned().collect();
        let mut seen: BTreeSet<(VertexId, BTreeSet<Path>)> = BTreeSet::new();
        let mut stack = vec![(v, start)];
        while let Some((at, obligations)) = stack.pop() {
            if obligations.is_empty() {
                return Ok(false);
            }
            if !seen.insert((at, obligations.clone())) {
                continue;
            }
            for c in 0..self.rank() {
                for e in self.skeleton.edges_into(at, c) {
                    let pe = self.path_of_edge(e);
                    let mut next: BTreeSet<Path> = BTreeSet::new();
                    for rho in &obligations {
                        if rho.is_vertex() {
                            // the vertex obligation is met by every path
                            next.insert(self.vertex_path(self.skeleton.source(e)));
                            continue;
                        }
                        for (alpha, _) in self.lambda_min(&pe, rho).expect("same range").pairs {
                            next.insert(alpha);
                        }
                    }
                    stack.push((self.skeleton.source(e), next));
                }
            }
        }
        Ok(true)
    }

    /// Minimal exhaustive subsets of `vΛ^{≤ cap}`, used by relation (KP4)
    /// and the boundary-condition verifier. Candidates are screened with the
    /// exact exhaustiveness test; minimality means no single removal stays
    /// exhaustive.
    pub fn minimal_exhaustive_sets(&self, v: VertexId, cap: &Degree) -> Vec<Vec<Path>> {
        let pool: Vec<Path> =
            self.enumerate_paths_upto(v, cap).into_iter().filter(|p| !p.is_vertex()).collect();
        let mut out: Vec<Vec<Path>> = Vec::new();
        // full degree-n slices first: cheap and usually exhaustive
        let mut candidates: Vec<Vec<Path>> = Vec::new();
        for d in cap.box_iter() {
            if d.is_zero() {
                continue;
            }
            let slice = self.enumerate_paths(v, &d);
            if !slice.is_empty() {
                candidates.push(slice);
            }
        }
        // all subsets of the edge pool when small enough
        let edge_pool: Vec<Path> =
            pool.iter().filter(|p| p.degree.total() == 1).cloned().collect();
        if edge_pool.len() <= 12 {
            for mask in 1u32..(1 << edge_pool.len()) {
                let set: Vec<Path> = (0..edge_pool.len())
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| edge_pool[i].clone())
                    .collect();
                candidates.push(set);
            }
        }
        for cand in candidates {
            if !self.is_exhaustive(v, &cand).unwrap() {
                continue;
            }
            // shrink to a minimal exhaustive subset
            let mut set = cand;
            loop {
                let mut shrunk = false;
                for i in 0..set.len() {
                    let mut smaller = set.clone();
                    smaller.remove(i);
                    if !smaller.is_empty() && self.is_exhaustive(v, &smaller).unwrap() {
                        set = smaller;
                        shrunk = true;
                        break;
                    }
                }
                if !shrunk {
                    break;
                }
            }
            set.sort();
            if !out.contains(&set) {
                out.push(set);
            }
        }
        out.sort();
        out
    }

    /// Report the cached structural flags.
    pub fn graph_properties(&self) -> GraphFlags {
        self.flags
    }
}

/// Result of [`KGraph::lambda_min`].
#[derive(Clone, Debug)]
pub struct LambdaMin {
    /// Minimal common extensions, each of degree `d(λ) ∨ d(μ)`.
    pub mce: Vec<Path>,
    /// Pairs `(ρ, τ)` with `λρ = μτ ∈ MCE(λ, μ)`, aligned with `mce`.
    pub pairs: Vec<(Path, Path)>,
}

/// `build_omega` over an extended degree; infinite entries are rejected here
/// because `Ω_{k,∞}` only exists virtually in the stabilization layer.
pub fn build_omega_ext(k: usize, m: &crate::degree::ExtDegree) -> Result<KGraph, PathError> {
    let mut fin = Vec::with_capacity(k);
    for e in &m.0 {
        match e {
            crate::degree::ExtEntry::Fin(n) => fin.push(*n),
            crate::degree::ExtEntry::Inf => return Err(PathError::InfiniteDegreeUnsupportedHere),
        }
    }
    Ok(build_omega(k, &Degree(fin)))
}

/// The k-graph `Ω_{k,m} = {(p,q) : p ≤ q ≤ m}` for finite `m`, presented by
/// its skeleton. Vertex `p` is named `p0_p1_..`, the color-`i` edge at `p`
/// goes from source `p+e_i` to range `p`.
pub fn build_omega(k: usize, m: &Degree) -> KGraph {
    assert_eq!(m.rank(), k);
    let vname = |p: &Degree| p.0.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("_");
    let points = m.box_iter();
    let vertices: Vec<String> = points.iter().map(|p| vname(p)).collect();
    let mut edges = Vec::new();
    for p in &points {
        for i in 0..k {
            let q = {
                let mut q = p.clone();
                q.0[i] += 1;
                q
            };
            if q.le(m) {
                edges.push(crate::skeleton::EdgeSpec {
                    id: format!("x{}_{}", i + 1, vname(p)),
                    color: i + 1,
                    src: vname(&q),
                    tgt: vname(p),
                });
            }
        }
    }
    let mut squares = Vec::new();
    for p in &points {
        for i in 0..k {
            for j in (i + 1)..k {
                let mut top = p.clone();
                top.0[i] += 1;
                top.0[j] += 1;
                if !top.le(m) {
                    continue;
                }
                let mut pi = p.clone();
                pi.0[i] += 1;
                let mut pj = p.clone();
                pj.0[j] += 1;
                // "first": color-i edge at p then color-j edge at p+e_i,
                // traversal source-to-range, equals color-j then color-i.
                squares.push(crate::skeleton::SquareSpec {
                    first: [format!("x{}_{}", j + 1, vname(&pi)), format!("x{}_{}", i + 1, vname(p))],
                    second: [format!("x{}_{}", i + 1, vname(&pj)), format!("x{}_{}", j + 1, vname(p))],
                });
            }
        }
    }
    let spec = GraphSpec {
        rank: k,
        vertices,
        edges,
        squares,
        name: Some(format!("omega_{k}_{m:?}")),
    };
    KGraph::validate(&spec).expect("omega presentation is always valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::skeleton::SquareSpec;

    fn deg(v: &[u32]) -> Degree {
        Degree(v.to_vec())
    }

    #[test]
    fn t2_validates_with_expected_flags() {
        let g = t2();
        assert!(g.flags.row_finite);
        assert!(!g.flags.has_sources);
        assert!(!g.flags.has_sinks);
        assert!(g.flags.finitely_aligned);
    }

    #[test]
    fn tt2_validates() {
        // both square sets have two members and the swap is a bijection
        let g = tt2();
        assert_eq!(g.squares.map.len(), 4);
        assert!(!g.flags.has_sources);
        assert!(!g.flags.has_sinks);
    }

    #[test]
    fn tt2_corrupt_rule_rejected_as_nonbijective() {
        let mut spec = spec_tt2();
        // e1 f = f e2 and e2 f = f e2: the pair f·e2 is hit twice
        spec.squares[1].second = ["f".into(), "e2".into()];
        match KGraph::validate(&spec) {
            Err(ValidateError::NonBijectiveRule(_)) => {}
            other => panic!("expected NonBijectiveRule, got {other:?}"),
        }
    }

    #[test]
    fn missing_rule_detected() {
        let mut spec = spec_tt2();
        spec.squares.pop();
        match KGraph::validate(&spec) {
            Err(ValidateError::MissingRule(_, _)) => {}
            other => panic!("expected MissingRule, got {other:?}"),
        }
    }

    #[test]
    fn compose_t2_examples() {
        let g = t2();
        let b = g.path_of_edge(g.edge_by_name("b").unwrap());
        let r = g.path_of_edge(g.edge_by_name("r").unwrap());
        let br = g.compose(&b, &r).unwrap();
        assert_eq!(br.degree, deg(&[1, 1]));
        assert_eq!(br.display(&g.skeleton), "b.r");
        // r then b normalizes to the same square
        let rb = g.compose(&r, &b).unwrap();
        assert_eq!(br, rb);
    }

    #[test]
    fn compose_tt2_swap() {
        let g = tt2();
        let f = g.path_of_edge(g.edge_by_name("f").unwrap());
        let e1 = g.path_of_edge(g.edge_by_name("e1").unwrap());
        let fe1 = g.compose(&f, &e1).unwrap();
        assert_eq!(fe1.display(&g.skeleton), "e2.f");
    }

    #[test]
    fn segment_examples() {
        let g = t2();
        let b = g.path_of_edge(g.edge_by_name("b").unwrap());
        let r = g.path_of_edge(g.edge_by_name("r").unwrap());
        let br = g.compose(&b, &r).unwrap();
        assert_eq!(g.segment(&br, &deg(&[0, 0]), &deg(&[1, 0])).unwrap(), b);
        assert_eq!(g.segment(&br, &deg(&[0, 0]), &deg(&[0, 0])).unwrap(), g.vertex_path(br.range));

        let tt = tt2();
        let e1 = tt.path_of_edge(tt.edge_by_name("e1").unwrap());
        let f = tt.path_of_edge(tt.edge_by_name("f").unwrap());
        let e1f = tt.compose(&e1, &f).unwrap();
        // blue part of the red-first factorization of e1·f is e2
        let blue_tail = tt.segment(&e1f, &deg(&[0, 1]), &deg(&[1, 1])).unwrap();
        assert_eq!(blue_tail.display(&tt.skeleton), "e2");
    }

    #[test]
    fn segment_error_out_of_range() {
        let g = t2();
        let b = g.path_of_edge(g.edge_by_name("b").unwrap());
        assert!(matches!(
            g.segment(&b, &deg(&[0, 0]), &deg(&[2, 0])),
            Err(PathError::DegreeOutOfRange(_, _, _))
        ));
    }

    #[test]
    fn enumerate_counts() {
        let g = t2();
        let v = g.vertex_by_name("v").unwrap();
        assert_eq!(g.enumerate_paths(v, &deg(&[2, 1])).len(), 1);

        let tt = tt2();
        let v = tt.vertex_by_name("v").unwrap();
        assert_eq!(tt.enumerate_paths(v, &deg(&[1, 1])).len(), 2);

        let om = omega_2_22();
        let origin = om.vertex_by_name("0_0").unwrap();
        assert_eq!(om.enumerate_paths(origin, &deg(&[1, 1])).len(), 1);
    }

    #[test]
    fn lambda_min_examples() {
        // Omega is a lattice: one MCE
        let om = omega_2_22();
        let origin = om.vertex_by_name("0_0").unwrap();
        let lam = om.enumerate_paths(origin, &deg(&[1, 0])).pop().unwrap();
        let mu = om.enumerate_paths(origin, &deg(&[0, 1])).pop().unwrap();
        let lm = om.lambda_min(&lam, &mu).unwrap();
        assert_eq!(lm.mce.len(), 1);
        assert_eq!(lm.pairs.len(), 1);

        // T2: MCE(b, r) = {br}, Lambda^min = {(r, b)}
        let g = t2();
        let b = g.path_of_edge(g.edge_by_name("b").unwrap());
        let r = g.path_of_edge(g.edge_by_name("r").unwrap());
        let lm = g.lambda_min(&b, &r).unwrap();
        assert_eq!(lm.mce, vec![g.compose(&b, &r).unwrap()]);
        assert_eq!(lm.pairs, vec![(r.clone(), b.clone())]);

        // TT2: Lambda^min(e1, f) = {(f, e2)}
        let tt = tt2();
        let e1 = tt.path_of_edge(tt.edge_by_name("e1").unwrap());
        let f = tt.path_of_edge(tt.edge_by_name("f").unwrap());
        let e2 = tt.path_of_edge(tt.edge_by_name("e2").unwrap());
        let lm = tt.lambda_min(&e1, &f).unwrap();
        assert_eq!(lm.pairs, vec![(f.clone(), e2.clone())]);
    }

    #[test]
    fn lambda_min_range_mismatch() {
        let om = omega_2_22();
        let a = om.vertex_path(om.vertex_by_name("0_0").unwrap());
        let b = om.vertex_path(om.vertex_by_name("1_0").unwrap());
        assert!(matches!(om.lambda_min(&a, &b), Err(PathError::RangeMismatch(_, _))));
    }

    #[test]
    fn exhaustive_examples() {
        let g = t2();
        let v = g.vertex_by_name("v").unwrap();
        let b = g.path_of_edge(g.edge_by_name("b").unwrap());
        assert!(g.is_exhaustive(v, &[b]).unwrap());

        // in TT2 a single blue edge misses the other blue edge: no common
        // extension of e1 and e2 can exist at degree (1,0)
        let tt = tt2();
        let v = tt.vertex_by_name("v").unwrap();
        let e1 = tt.path_of_edge(tt.edge_by_name("e1").unwrap());
        let e2 = tt.path_of_edge(tt.edge_by_name("e2").unwrap());
        assert!(tt.lambda_min(&e2, &e1).unwrap().mce.is_empty());
        assert!(!tt.is_exhaustive(v, &[e1.clone()]).unwrap());
        assert!(tt.is_exhaustive(v, &[e1, e2]).unwrap());

        // fork: {alpha} misses beta entirely
        let fk = fork();
        let u = fk.vertex_by_name("u").unwrap();
        let alpha = fk.path_of_edge(fk.edge_by_name("alpha").unwrap());
        assert!(!fk.is_exhaustive(u, &[alpha]).unwrap());

        // empty set misses the vertex itself
        assert!(!fk.is_exhaustive(u, &[]).unwrap());
    }

    #[test]
    fn exhaustive_needs_witness_beyond_joined_degree() {
        // 2-graph where {the only color-2 edge at u} is not exhaustive
        // because the color-1 edge admits no common extension; the witness
        // has degree (1,0), not <= N = (0,1).
        let spec = GraphSpec {
            rank: 2,
            vertices: vec!["u".into(), "v".into(), "w".into()],
            edges: vec![
                crate::skeleton::EdgeSpec { id: "a".into(), color: 1, src: "v".into(), tgt: "u".into() },
                crate::skeleton::EdgeSpec { id: "b".into(), color: 2, src: "w".into(), tgt: "u".into() },
            ],
            squares: vec![],
            name: None,
        };
        let g = KGraph::validate(&spec).unwrap();
        let u = g.vertex_by_name("u").unwrap();
        let b = g.path_of_edge(g.edge_by_name("b").unwrap());
        assert!(!g.is_exhaustive(u, &[b]).unwrap());
    }

    #[test]
    fn omega_properties() {
        let om = omega_2_22();
        assert_eq!(om.skeleton.vertex_count(), 9);
        assert!(om.flags.row_finite);
        assert!(om.flags.has_sources);
        assert!(om.flags.has_sinks);
        // (2,2) is a source: no color-1 edge with that range
        let top = om.vertex_by_name("2_2").unwrap();
        assert!(om.enumerate_paths(top, &deg(&[1, 0])).is_empty());
        // |Lambda^{(1,1)}| = 4
        let total: usize =
            om.skeleton.vertices().map(|v| om.enumerate_paths(v, &deg(&[1, 1])).len()).sum();
        assert_eq!(total, 4);
    }

    #[test]
    fn omega_counts_small() {
        let om = build_omega(2, &deg(&[1, 1]));
        assert_eq!(om.skeleton.vertex_count(), 4);
        let morphisms: usize = om
            .skeleton
            .vertices()
            .map(|v| {
                deg(&[1, 1]).box_iter().iter().map(|d| om.enumerate_paths(v, d).len()).sum::<usize>()
            })
            .sum();
        assert_eq!(morphisms, 9);

        let line = build_omega(1, &deg(&[3]));
        assert_eq!(line.skeleton.vertex_count(), 4);
        assert_eq!(line.skeleton.edges.len(), 3);
    }

    #[test]
    fn t3_cube_condition_holds() {
        let g = t3();
        assert_eq!(g.rank(), 3);
    }

    #[test]
    fn inconsistent_cube_rejected() {
        // two edges in colors 1 and 2, one in color 3; the 1-2 rule twists
        // one pair while the 1-3 rule swaps, so the two normalization routes
        // of the descending triple c.b0.a0 land on different words
        let spec = GraphSpec {
            rank: 3,
            vertices: vec!["v".into()],
            edges: vec![
                crate::skeleton::EdgeSpec { id: "a0".into(), color: 1, src: "v".into(), tgt: "v".into() },
                crate::skeleton::EdgeSpec { id: "a1".into(), color: 1, src: "v".into(), tgt: "v".into() },
                crate::skeleton::EdgeSpec { id: "b0".into(), color: 2, src: "v".into(), tgt: "v".into() },
                crate::skeleton::EdgeSpec { id: "b1".into(), color: 2, src: "v".into(), tgt: "v".into() },
                crate::skeleton::EdgeSpec { id: "c".into(), color: 3, src: "v".into(), tgt: "v".into() },
            ],
            squares: vec![
                SquareSpec { first: ["a0".into(), "b0".into()], second: ["b1".into(), "a0".into()] },
                SquareSpec { first: ["a0".into(), "b1".into()], second: ["b0".into(), "a0".into()] },
                SquareSpec { first: ["a1".into(), "b0".into()], second: ["b0".into(), "a1".into()] },
                SquareSpec { first: ["a1".into(), "b1".into()], second: ["b1".into(), "a1".into()] },
                SquareSpec { first: ["a0".into(), "c".into()], second: ["c".into(), "a1".into()] },
                SquareSpec { first: ["a1".into(), "c".into()], second: ["c".into(), "a0".into()] },
                SquareSpec { first: ["b0".into(), "c".into()], second: ["c".into(), "b0".into()] },
                SquareSpec { first: ["b1".into(), "c".into()], second: ["c".into(), "b1".into()] },
            ],
            name: None,
        };
        match KGraph::validate(&spec) {
            Err(ValidateError::CubeConditionFailure(_)) => {}
            other => panic!("expected CubeConditionFailure, got {other:?}"),
        }
    }

    #[test]
    fn factorization_roundtrip_exhaustive() {
        for g in [t2(), tt2(), omega_2_22()] {
            for v in g.skeleton.vertices() {
                for lam in g.enumerate_paths_upto(v, &deg(&[2, 2])) {
                    for m in lam.degree.box_iter() {
                        let (mu, nu) = g.split(&lam, &m);
                        assert_eq!(g.compose(&mu, &nu).unwrap(), lam);
                        assert_eq!(mu.degree.add(&nu.degree), lam.degree);
                        // uniqueness: the splitting is the stored segment
                        assert_eq!(g.segment(&lam, &Degree::zero(g.rank()), &m).unwrap(), mu);
                        assert_eq!(g.segment(&lam, &m, &lam.degree).unwrap(), nu);
                    }
                }
            }
        }
    }

    #[test]
    fn lambda_min_symmetry_and_degree() {
        for g in [t2(), tt2(), omega_2_22()] {
            for v in g.skeleton.vertices() {
                let paths = g.enumerate_paths_upto(v, &deg(&[1, 1]));
                for lam in &paths {
                    for mu in &paths {
                        let ab = g.lambda_min(lam, mu).unwrap();
                        let ba = g.lambda_min(mu, lam).unwrap();
                        let mut swapped: Vec<_> =
                            ba.pairs.iter().map(|(r, t)| (t.clone(), r.clone())).collect();
                        let mut orig = ab.pairs.clone();
                        swapped.sort();
                        orig.sort();
                        assert_eq!(orig, swapped);
                        for tau in &ab.mce {
                            assert_eq!(tau.degree, lam.degree.join(&mu.degree));
                        }
                    }
                }
            }
        }
    }
}
