//! Boundary-space homeomorphisms in evaluable form: range-vertex bijections
//! between `Ω_{k,∞}` spaces, edge relabelings, the same-skeleton staircase
//! refactoring between rank-2 graphs, and stabilization embeddings.

use super::space::{Pt, Space};
use crate::boundary::BoundaryPath;
use crate::degree::{graded_lex_rank, graded_lex_unrank, Degree};
use crate::error::EquivError;
use crate::graph::KGraph;
use crate::path::Path;
use crate::skeleton::EdgeId;
use std::collections::BTreeMap;
use std::sync::Arc;

/// A bijection `N^{k1} → N^{k2}`: finitely many explicit overrides on top of
/// the graded-lexicographic enumeration (or a coordinate permutation when
/// the ranks agree).
#[derive(Clone, Debug)]
pub enum PhiMap {
    GradedLex { k1: usize, k2: usize },
    CoordPerm { perm: Vec<usize> },
    Table { k1: usize, k2: usize, rule: Vec<(Degree, Degree)> },
}

impl PhiMap {
    pub fn validate(&self) -> Result<(), EquivError> {
        match self {
            PhiMap::GradedLex { .. } => Ok(()),
            PhiMap::CoordPerm { perm } => {
                let mut seen = vec![false; perm.len()];
                for &p in perm {
                    if p >= perm.len() || seen[p] {
                        return Err(EquivError::NotBijective(format!("permutation {perm:?}")));
                    }
                    seen[p] = true;
                }
                Ok(())
            }
            PhiMap::Table { k1, k2, rule } => {
                let mut dom: Vec<&Degree> = rule.iter().map(|(a, _)| a).collect();
                let mut img: Vec<&Degree> = rule.iter().map(|(_, b)| b).collect();
                dom.sort();
                img.sort();
                let dl = dom.len();
                let il = img.len();
                dom.dedup();
                img.dedup();
                if dom.len() != dl || img.len() != il {
                    return Err(EquivError::NotBijective("table rows collide".into()));
                }
                for (a, b) in rule {
                    if a.rank() != *k1 || b.rank() != *k2 {
                        return Err(EquivError::NotBijective("table rank mismatch".into()));
                    }
                }
                Ok(())
            }
        }
    }

    pub fn ranks(&self) -> (usize, usize) {
        match self {
            PhiMap::GradedLex { k1, k2 } => (*k1, *k2),
            PhiMap::CoordPerm { perm } => (perm.len(), perm.len()),
            PhiMap::Table { k1, k2, .. } => (*k1, *k2),
        }
    }

    pub fn eval(&self, p: &Degree) -> Degree {
        match self {
            PhiMap::GradedLex { k2, .. } => graded_lex_unrank(*k2, graded_lex_rank(p)),
            PhiMap::CoordPerm { perm } => {
                Degree(perm.iter().map(|&i| p.0[i]).collect())
            }
            PhiMap::Table { k2, rule, .. } => {
                if let Some((_, b)) = rule.iter().find(|(a, _)| a == p) {
                    return b.clone();
                }
                // enumeration of the complement of the rule domain onto the
                // complement of the rule range, order-preserving in rank
                let r = graded_lex_rank(p);
                let holes_before =
                    rule.iter().filter(|(a, _)| graded_lex_rank(a) < r).count() as u64;
                let mut pos = r - holes_before;
                let occupied: Vec<u64> = rule.iter().map(|(_, b)| graded_lex_rank(b)).collect();
                let mut idx = 0u64;
                loop {
                    if !occupied.contains(&idx) {
                        if pos == 0 {
                            return graded_lex_unrank(*k2, idx);
                        }
                        pos -= 1;
                    }
                    idx += 1;
                }
            }
        }
    }

    pub fn inverse(&self) -> PhiMap {
        match self {
            PhiMap::GradedLex { k1, k2 } => PhiMap::GradedLex { k1: *k2, k2: *k1 },
            PhiMap::CoordPerm { perm } => {
                let mut inv = vec![0; perm.len()];
                for (i, &p) in perm.iter().enumerate() {
                    inv[p] = i;
                }
                PhiMap::CoordPerm { perm: inv }
            }
            PhiMap::Table { k1, k2, rule } => PhiMap::Table {
                k1: *k2,
                k2: *k1,
                rule: rule.iter().map(|(a, b)| (b.clone(), a.clone())).collect(),
            },
        }
    }
}

/// Edge relabeling along a skeleton isomorphism; squares must map to
/// squares, so the relabeling commutes with normal forms and shifts.
#[derive(Clone, Debug)]
pub struct RelabelMap {
    pub from: Arc<KGraph>,
    pub to: Arc<KGraph>,
    pub edges: BTreeMap<EdgeId, EdgeId>,
}

impl RelabelMap {
    pub fn new(
        from: Arc<KGraph>,
        to: Arc<KGraph>,
        edges: BTreeMap<EdgeId, EdgeId>,
    ) -> Result<RelabelMap, EquivError> {
        if from.rank() != to.rank() {
            return Err(EquivError::RankMismatch(from.rank(), to.rank()));
        }
        if edges.len() != from.skeleton.edges.len()
            || from.skeleton.edges.len() != to.skeleton.edges.len()
        {
            return Err(EquivError::NotBijective("edge map must be a bijection".into()));
        }
        let mut seen = vec![false; to.skeleton.edges.len()];
        for (&e, &img) in &edges {
            if seen[img.0 as usize] {
                return Err(EquivError::NotBijective("edge hit twice".into()));
            }
            seen[img.0 as usize] = true;
            if from.skeleton.color(e) != to.skeleton.color(img) {
                return Err(EquivError::SkeletonMismatch("colors differ".into()));
            }
        }
        // squares map to squares
        for (&(x, y), &(u, w)) in &from.squares.map {
            let key = (edges[&x], edges[&y]);
            let val = (edges[&u], edges[&w]);
            if to.squares.map.get(&key) != Some(&val) {
                return Err(EquivError::SkeletonMismatch(format!(
                    "square {}.{} is not preserved",
                    from.skeleton.edge(x).name,
                    from.skeleton.edge(y).name
                )));
            }
        }
        Ok(RelabelMap { from, to, edges })
    }

    /// Relabeling by matching edge names (graphs that are copies of each
    /// other under a name map like `b -> b2`).
    pub fn by_name(
        from: Arc<KGraph>,
        to: Arc<KGraph>,
        names: &[(&str, &str)],
    ) -> Result<RelabelMap, EquivError> {
        let mut edges = BTreeMap::new();
        for (a, b) in names {
            let ea = from
                .edge_by_name(a)
                .ok_or_else(|| EquivError::SkeletonMismatch(format!("no edge {a}")))?;
            let eb = to
                .edge_by_name(b)
                .ok_or_else(|| EquivError::SkeletonMismatch(format!("no edge {b}")))?;
            edges.insert(ea, eb);
        }
        RelabelMap::new(from, to, edges)
    }

    pub fn path(&self, p: &Path) -> Path {
        if p.is_vertex() {
            return self.to.vertex_path(p.range);
        }
        let edges: Vec<EdgeId> = p.edges.iter().map(|e| self.edges[e]).collect();
        self.to.path_from_edges(&edges).expect("relabeling preserves composability")
    }

    pub fn bp(&self, x: &BoundaryPath) -> BoundaryPath {
        BoundaryPath::new(&self.to, self.path(&x.prefix), self.path(&x.cycle))
            .expect("relabeling preserves closedness")
    }

    pub fn inverse(&self) -> RelabelMap {
        RelabelMap {
            from: self.to.clone(),
            to: self.from.clone(),
            edges: self.edges.iter().map(|(&a, &b)| (b, a)).collect(),
        }
    }
}

// ---------------------------------------------------------------------
// Same-skeleton staircase refactoring (rank 2)
// ---------------------------------------------------------------------

/// The alternating skeleton word of a boundary path: at each step the walk
/// takes one edge, preferring to alternate colors, and records it. A path
/// is uniquely determined by this word, and the word makes sense in any
/// graph over the same skeleton.
fn staircase_word_finite(g: &KGraph, p: &Path) -> Vec<EdgeId> {
    let x = BoundaryPath::finite(g, p.clone());
    staircase_steps(g, &x, p.degree.total() as usize).into_iter().map(|(_, e)| e).collect()
}

/// Walk `steps` staircase steps along `x`, returning positions and edges.
fn staircase_steps(g: &KGraph, x: &BoundaryPath, steps: usize) -> Vec<(Degree, EdgeId)> {
    let k = x.rank();
    assert_eq!(k, 2);
    let mut pos = Degree::zero(k);
    let mut last: Option<usize> = None;
    let mut out = Vec::new();
    for _ in 0..steps {
        let prefer: Vec<usize> = match last {
            None => vec![0, 1],
            Some(c) => vec![1 - c, c],
        };
        let mut stepped = false;
        for c in prefer {
            let next = pos.add(&Degree::unit(k, c));
            if x.degree.ge_degree(&next) {
                let seg = x.segment(g, &pos, &next).unwrap();
                out.push((pos.clone(), seg.edges[0]));
                pos = next;
                last = Some(c);
                stepped = true;
                break;
            }
        }
        if !stepped {
            break;
        }
    }
    out
}

/// The same-skeleton homeomorphism `∂Λ_1 → ∂Λ_2` of rank-2 graphs: re-read
/// the alternating skeleton word of the input under the target graph's
/// factorization rules.
#[derive(Clone, Debug)]
pub struct SameSkeletonMap {
    pub from: Arc<KGraph>,
    pub to: Arc<KGraph>,
}

impl SameSkeletonMap {
    pub fn new(from: Arc<KGraph>, to: Arc<KGraph>) -> Result<SameSkeletonMap, EquivError> {
        if from.rank() != 2 || to.rank() != 2 {
            return Err(EquivError::RankUnsupported);
        }
        if !from.same_skeleton(&to) {
            return Err(EquivError::SkeletonMismatch(format!(
                "{} vs {}",
                from.name, to.name
            )));
        }
        Ok(SameSkeletonMap { from, to })
    }

    pub fn inverse(&self) -> SameSkeletonMap {
        SameSkeletonMap { from: self.to.clone(), to: self.from.clone() }
    }

    /// Image of a finite path: same skeleton word, recomposed in the target.
    pub fn path(&self, p: &Path) -> Path {
        if p.is_vertex() {
            return self.to.vertex_path(p.range);
        }
        let word = staircase_word_finite(&self.from, p);
        self.to.path_from_edges(&word).expect("skeleton word is composable")
    }

    /// Image of an eventually periodic boundary path. The staircase walk on
    /// the periodic tail moves through finitely many reduced states, so the
    /// output is again eventually periodic (with a possibly longer cycle).
    pub fn bp(&self, x: &BoundaryPath) -> Result<BoundaryPath, EquivError> {
        let g = &self.from;
        if x.cycle.is_vertex() {
            let word = staircase_word_finite(g, &x.prefix);
            let p = if word.is_empty() {
                self.to.vertex_path(x.prefix.range)
            } else {
                self.to.path_from_edges(&word).unwrap()
            };
            return Ok(BoundaryPath::finite(&self.to, p));
        }
        // Walk with cycle detection on the shifted path: σ^pos(x) past the
        // prefix is purely periodic, hence determined by its degree-c
        // window, so the walk states take finitely many values.
        let pre = &x.prefix.degree;
        let cyc = &x.cycle.degree;
        let mut pos = Degree::zero(2);
        let mut last: Option<usize> = None;
        let mut word: Vec<EdgeId> = Vec::new();
        let mut seen: Vec<(BoundaryPath, Option<usize>, usize)> = Vec::new();
        let window_count = {
            let per_vertex: usize = g
                .skeleton
                .vertices()
                .map(|v| g.enumerate_paths(v, cyc).len())
                .sum();
            per_vertex.max(1)
        };
        let budget = 8 * (window_count + 2) * ((pre.total() + cyc.total() + 2) as usize);
        for _ in 0..budget {
            // states are meaningful once the walk is past the prefix
            if pre.le(&pos) {
                let shifted = crate::boundary::shift(g, x, &pos).unwrap();
                if let Some((_, _, start)) = seen
                    .iter()
                    .find(|(s, l, _)| *l == last && crate::boundary::eq(g, s, &shifted))
                {
                    // periodic chunk found
                    let (pre_word, cyc_word) = word.split_at(*start);
                    let prefix = if pre_word.is_empty() {
                        self.to.vertex_path(x.prefix.range)
                    } else {
                        self.to.path_from_edges(pre_word).unwrap()
                    };
                    let cycle = self.to.path_from_edges(cyc_word).unwrap();
                    return BoundaryPath::new(&self.to, prefix, cycle)
                        .map_err(|e| EquivError::NotEvaluable(e.to_string()));
                }
                seen.push((shifted, last, word.len()));
            }
            let prefer: Vec<usize> = match last {
                None => vec![0, 1],
                Some(c) => vec![1 - c, c],
            };
            let mut stepped = false;
            for c in prefer {
                let next = pos.add(&Degree::unit(2, c));
                if x.degree.ge_degree(&next) {
                    let seg = x.segment(g, &pos, &next).unwrap();
                    word.push(seg.edges[0]);
                    pos = next;
                    last = Some(c);
                    stepped = true;
                    break;
                }
            }
            if !stepped {
                break;
            }
        }
        Err(EquivError::NotEvaluable("staircase period not found within budget".into()))
    }
}

// ---------------------------------------------------------------------
// The homeomorphism wrapper
// ---------------------------------------------------------------------

/// A homeomorphism between boundary spaces, in one of the evaluable forms.
#[derive(Clone, Debug)]
pub enum BoundaryMap {
    Identity { space: Space },
    OmegaBijection { phi: PhiMap },
    Relabel { map: RelabelMap },
    SameSkeleton { map: SameSkeletonMap },
    /// `x ↦ μ_0 x`: the unit-corner embedding `∂Λ → ∂(SΛ)`. Not surjective;
    /// orbit checks run forward-only on it.
    StabEmbed { graph: Arc<KGraph> },
}

impl BoundaryMap {
    pub fn source(&self) -> Space {
        match self {
            BoundaryMap::Identity { space } => space.clone(),
            BoundaryMap::OmegaBijection { phi } => Space::OmegaInf(phi.ranks().0),
            BoundaryMap::Relabel { map } => Space::Fin(map.from.clone()),
            BoundaryMap::SameSkeleton { map } => Space::Fin(map.from.clone()),
            BoundaryMap::StabEmbed { graph } => Space::Fin(graph.clone()),
        }
    }

    pub fn target(&self) -> Space {
        match self {
            BoundaryMap::Identity { space } => space.clone(),
            BoundaryMap::OmegaBijection { phi } => Space::OmegaInf(phi.ranks().1),
            BoundaryMap::Relabel { map } => Space::Fin(map.to.clone()),
            BoundaryMap::SameSkeleton { map } => Space::Fin(map.to.clone()),
            BoundaryMap::StabEmbed { graph } => Space::Stab(graph.clone()),
        }
    }

    pub fn eval(&self, pt: &Pt) -> Result<Pt, EquivError> {
        Ok(match (self, pt) {
            (BoundaryMap::Identity { .. }, p) => p.clone(),
            (BoundaryMap::OmegaBijection { phi }, Pt::Omega(p)) => Pt::Omega(phi.eval(p)),
            (BoundaryMap::Relabel { map }, Pt::Fin(x)) => Pt::Fin(map.bp(x)),
            (BoundaryMap::SameSkeleton { map }, Pt::Fin(x)) => Pt::Fin(map.bp(x)?),
            (BoundaryMap::StabEmbed { graph }, Pt::Fin(x)) => {
                Pt::Stab(Degree::zero(graph.rank()), x.clone())
            }
            _ => return Err(EquivError::NotEvaluable("point outside the map's source".into())),
        })
    }

    /// Explicit inverse data, when the map is invertible.
    pub fn inverse(&self) -> Option<BoundaryMap> {
        match self {
            BoundaryMap::Identity { space } => Some(BoundaryMap::Identity { space: space.clone() }),
            BoundaryMap::OmegaBijection { phi } => {
                Some(BoundaryMap::OmegaBijection { phi: phi.inverse() })
            }
            BoundaryMap::Relabel { map } => Some(BoundaryMap::Relabel { map: map.inverse() }),
            BoundaryMap::SameSkeleton { map } => {
                Some(BoundaryMap::SameSkeleton { map: map.inverse() })
            }
            BoundaryMap::StabEmbed { .. } => None,
        }
    }
}
