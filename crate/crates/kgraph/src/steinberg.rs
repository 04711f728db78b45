//! Symbolic Steinberg / Kumjian-Pask algebra of the boundary path groupoid
//! over a pluggable commutative coefficient ring.
//!
//! Elements are finite linear combinations of indicator functions of basis
//! bisections, kept in a normal form with pairwise disjoint supports, so
//! equality is exact: an element is zero iff its term list is empty.

use crate::degree::{Degree, ZVec};
use crate::error::AlgebraError;
use crate::graph::KGraph;
use crate::groupoid::{
    bisection_diff, bisection_meet, bisection_product, BasisBisection,
};
use crate::par::maybe_par_map;
use crate::path::Path;
use num::{BigInt, BigRational};
use serde::Serialize;
use std::fmt;

/// Commutative ring with unit, presented as an object so that runtime
/// parameters (a modulus) travel with it.
pub trait CoeffRing: Clone + PartialEq + fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn name(&self) -> String;
    /// Metadata recorded in reports; the identities verified here do not
    /// depend on it.
    fn reduced_indecomposable(&self) -> bool;
}

/// The integers.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntRing;

impl CoeffRing for IntRing {
    type Elem = BigInt;
    fn zero(&self) -> BigInt {
        BigInt::from(0)
    }
    fn one(&self) -> BigInt {
        BigInt::from(1)
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        *a == BigInt::from(0)
    }
    fn name(&self) -> String {
        "Z".into()
    }
    fn reduced_indecomposable(&self) -> bool {
        true
    }
}

/// The rationals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatRing;

impl CoeffRing for RatRing {
    type Elem = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::from(BigInt::from(0))
    }
    fn one(&self) -> BigRational {
        BigRational::from(BigInt::from(1))
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        *a == self.zero()
    }
    fn name(&self) -> String {
        "Q".into()
    }
    fn reduced_indecomposable(&self) -> bool {
        true
    }
}

/// The integers modulo `n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModRing {
    pub n: u64,
}

impl CoeffRing for ModRing {
    type Elem = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.n
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.n
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a * b) % self.n
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.n - a % self.n) % self.n
    }
    fn is_zero(&self, a: &u64) -> bool {
        a % self.n == 0
    }
    fn name(&self) -> String {
        format!("Z/{}", self.n)
    }
    fn reduced_indecomposable(&self) -> bool {
        // reduced iff squarefree, indecomposable iff a prime power
        let mut n = self.n;
        let mut p = 2;
        let mut primes = Vec::new();
        while p * p <= n {
            if n % p == 0 {
                let mut e = 0;
                while n % p == 0 {
                    n /= p;
                    e += 1;
                }
                primes.push((p, e));
            }
            p += 1;
        }
        if n > 1 {
            primes.push((n, 1));
        }
        primes.len() == 1 && primes[0].1 == 1
    }
}

/// A Steinberg-algebra element in disjoint-support normal form.
#[derive(Clone, Debug)]
pub struct AlgebraElement<R: CoeffRing> {
    pub ring: R,
    pub graph_name: String,
    pub terms: Vec<(R::Elem, BasisBisection)>,
}

impl<R: CoeffRing> AlgebraElement<R> {
    pub fn zero(graph: &KGraph, ring: R) -> Self {
        AlgebraElement { ring, graph_name: graph.name.clone(), terms: Vec::new() }
    }

    /// The generator `s_λ` (indicator of `Z(λ *_s s(λ))`).
    pub fn generator(graph: &KGraph, ring: R, lam: &Path) -> Self {
        let one = ring.one();
        let mut out = Self::zero(graph, ring);
        out.terms.push((one, BasisBisection::generator(graph, lam.clone())));
        out
    }

    /// The ghost generator `s_{λ*}` (indicator of `Z(s(λ) *_s λ)`).
    pub fn ghost(graph: &KGraph, ring: R, lam: &Path) -> Self {
        let one = ring.one();
        let mut out = Self::zero(graph, ring);
        out.terms.push((one, BasisBisection::generator(graph, lam.clone()).star()));
        out
    }

    /// Indicator of an arbitrary basis bisection.
    pub fn indicator(graph: &KGraph, ring: R, set: BasisBisection) -> Self {
        let one = ring.one();
        let mut out = Self::zero(graph, ring);
        out.terms.push((one, set));
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn compatible(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.graph_name != other.graph_name {
            return Err(AlgebraError::GraphMismatch);
        }
        if self.ring != other.ring {
            return Err(AlgebraError::RingMismatch);
        }
        Ok(())
    }

    /// Rebuild the disjoint normal form from an arbitrary term list.
    fn normalize(graph: &KGraph, ring: &R, terms: Vec<(R::Elem, BasisBisection)>) -> Vec<(R::Elem, BasisBisection)> {
        let mut out: Vec<(R::Elem, BasisBisection)> = Vec::new();
        for (coeff, piece) in terms {
            Self::insert(graph, ring, &mut out, coeff, piece);
        }
        out.retain(|(c, _)| !ring.is_zero(c));
        out.sort_by(|a, b| a.1.cmp(&b.1));
        out
    }

    fn insert(
        graph: &KGraph,
        ring: &R,
        out: &mut Vec<(R::Elem, BasisBisection)>,
        coeff: R::Elem,
        piece: BasisBisection,
    ) {
        if ring.is_zero(&coeff) {
            return;
        }
        for i in 0..out.len() {
            if out[i].1.lag() != piece.lag() {
                continue;
            }
            let inter = bisection_meet(graph, &piece, &out[i].1);
            if inter.is_empty() {
                continue;
            }
            let (oc, ob) = out.remove(i);
            for p in bisection_diff(graph, &ob, &piece) {
                out.push((oc.clone(), p));
            }
            let sum = ring.add(&oc, &coeff);
            for p in &inter {
                if !ring.is_zero(&sum) {
                    out.push((sum.clone(), p.clone()));
                }
            }
            for p in bisection_diff(graph, &piece, &ob) {
                Self::insert(graph, ring, out, coeff.clone(), p);
            }
            return;
        }
        out.push((coeff, piece));
    }

    pub fn add(&self, graph: &KGraph, other: &Self) -> Result<Self, AlgebraError> {
        self.compatible(other)?;
        let mut terms = self.terms.clone();
        terms.extend(other.terms.clone());
        Ok(AlgebraElement {
            ring: self.ring.clone(),
            graph_name: self.graph_name.clone(),
            terms: Self::normalize(graph, &self.ring, terms),
        })
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for (c, _) in &mut out.terms {
            *c = self.ring.neg(c);
        }
        out
    }

    pub fn sub(&self, graph: &KGraph, other: &Self) -> Result<Self, AlgebraError> {
        self.add(graph, &other.neg())
    }

    pub fn scalar_mul(&self, c: &R::Elem) -> Self {
        let mut out = self.clone();
        for (coeff, _) in &mut out.terms {
            *coeff = self.ring.mul(coeff, c);
        }
        out.terms.retain(|(coeff, _)| !self.ring.is_zero(coeff));
        out
    }

    /// Convolution product; supports multiply through the bisection product.
    pub fn mul(&self, graph: &KGraph, other: &Self) -> Result<Self, AlgebraError> {
        self.compatible(other)?;
        let mut terms = Vec::new();
        for (ca, pa) in &self.terms {
            for (cb, pb) in &other.terms {
                let c = self.ring.mul(ca, cb);
                for piece in bisection_product(graph, pa, pb) {
                    terms.push((c.clone(), piece));
                }
            }
        }
        Ok(AlgebraElement {
            ring: self.ring.clone(),
            graph_name: self.graph_name.clone(),
            terms: Self::normalize(graph, &self.ring, terms),
        })
    }

    /// The involution: coefficients fixed (built-in rings carry the identity
    /// involution), supports transposed.
    pub fn star(&self) -> Self {
        let mut out = self.clone();
        for (_, p) in &mut out.terms {
            *p = p.star();
        }
        out.terms.sort_by(|a, b| a.1.cmp(&b.1));
        out
    }

    pub fn eq(&self, graph: &KGraph, other: &Self) -> Result<bool, AlgebraError> {
        Ok(self.sub(graph, other)?.is_zero())
    }

    /// The grade-`n` component of the `Z^k` grading.
    pub fn grade_component(&self, n: &ZVec) -> Self {
        let mut out = self.clone();
        out.terms.retain(|(_, p)| p.lag() == *n);
        out
    }

    /// In the diagonal iff every support lies in the unit space.
    pub fn is_diagonal(&self) -> bool {
        self.terms.iter().all(|(_, p)| p.lam == p.mu)
    }
}

// ---------------------------------------------------------------------
// Kumjian-Pask relation verification
// ---------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct RelationResult {
    pub relation: String,
    pub checked: usize,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct KpReport {
    pub graph: String,
    pub ring: String,
    pub ring_reduced_indecomposable: bool,
    pub depth: u32,
    pub relations: Vec<RelationResult>,
    pub passed: bool,
}

impl KpReport {
    pub fn first_failure(&self) -> Option<AlgebraError> {
        self.relations.iter().find(|r| !r.failures.is_empty()).map(|r| {
            AlgebraError::RelationFailure {
                relation: r.relation.clone(),
                witness: r.failures[0].clone(),
            }
        })
    }
}

/// Verify (KP1)-(KP4) as exact identities of algebra elements over all
/// paths of degree at most `depth` in each coordinate.
pub fn verify_kp<R: CoeffRing>(graph: &KGraph, ring: R, depth: u32) -> KpReport {
    verify_kp_with(graph, ring, depth, &|lam, mu| {
        graph.lambda_min(lam, mu).map(|lm| lm.pairs).unwrap_or_default()
    })
}

/// Relation verification with an injectable `Λ^min` table for (KP3); the
/// production path passes the graph's own, tests pass corrupted tables.
pub fn verify_kp_with<R: CoeffRing>(
    graph: &KGraph,
    ring: R,
    depth: u32,
    lmin: &(dyn Fn(&Path, &Path) -> Vec<(Path, Path)> + Sync),
) -> KpReport {
    let cap = Degree(vec![depth; graph.rank()]);
    let vertices: Vec<_> = graph.skeleton.vertices().collect();
    let all_paths: Vec<Path> =
        vertices.iter().flat_map(|&v| graph.enumerate_paths_upto(v, &cap)).collect();
    let gen = |lam: &Path| AlgebraElement::generator(graph, ring.clone(), lam);
    let ghost = |lam: &Path| AlgebraElement::ghost(graph, ring.clone(), lam);

    let mut relations = Vec::new();

    // (KP1): vertex idempotents, mutually orthogonal
    {
        let pairs: Vec<(Path, Path)> = vertices
            .iter()
            .flat_map(|&v| vertices.iter().map(move |&w| (v, w)))
            .map(|(v, w)| (graph.vertex_path(v), graph.vertex_path(w)))
            .collect();
        let failures: Vec<String> = maybe_par_map(&pairs, |(v, w)| {
            let sv = gen(v);
            let sw = gen(w);
            let prod = sv.mul(graph, &sw).unwrap();
            let expect = if v == w { sv.clone() } else { AlgebraElement::zero(graph, ring.clone()) };
            if !prod.eq(graph, &expect).unwrap() {
                Some(format!(
                    "s_{} s_{} != {}",
                    v.display(&graph.skeleton),
                    w.display(&graph.skeleton),
                    if v == w { "itself" } else { "0" }
                ))
            } else {
                None
            }
        })
        .into_iter()
        .flatten()
        .collect();
        relations.push(RelationResult { relation: "KP1".into(), checked: pairs.len(), failures });
    }

    // (KP2): multiplicativity on composable pairs, path and ghost sides
    {
        let pairs: Vec<(Path, Path)> = all_paths
            .iter()
            .flat_map(|lam| {
                all_paths.iter().filter(|mu| lam.source == mu.range).map(move |mu| (lam.clone(), mu.clone()))
            })
            .collect();
        let failures: Vec<String> = maybe_par_map(&pairs, |(lam, mu)| {
            let compo = graph.compose(lam, mu).unwrap();
            let lhs = gen(lam).mul(graph, &gen(mu)).unwrap();
            if !lhs.eq(graph, &gen(&compo)).unwrap() {
                return Some(format!(
                    "s_{} s_{} != s_{}",
                    lam.display(&graph.skeleton),
                    mu.display(&graph.skeleton),
                    compo.display(&graph.skeleton)
                ));
            }
            let lhs_ghost = ghost(mu).mul(graph, &ghost(lam)).unwrap();
            if !lhs_ghost.eq(graph, &ghost(&compo)).unwrap() {
                return Some(format!(
                    "s_{}* s_{}* != s_{}*",
                    mu.display(&graph.skeleton),
                    lam.display(&graph.skeleton),
                    compo.display(&graph.skeleton)
                ));
            }
            None
        })
        .into_iter()
        .flatten()
        .collect();
        relations.push(RelationResult { relation: "KP2".into(), checked: pairs.len(), failures });
    }

    // (KP3): s_{λ*} s_μ = Σ_{(α,β) ∈ Λ^min(λ,μ)} s_α s_{β*}
    {
        let pairs: Vec<(Path, Path)> = all_paths
            .iter()
            .flat_map(|lam| all_paths.iter().map(move |mu| (lam.clone(), mu.clone())))
            .collect();
        let failures: Vec<String> = maybe_par_map(&pairs, |(lam, mu)| {
            let lhs = ghost(lam).mul(graph, &gen(mu)).unwrap();
            let mut rhs = AlgebraElement::zero(graph, ring.clone());
            if lam.range == mu.range {
                for (alpha, beta) in lmin(lam, mu) {
                    let term = gen(&alpha).mul(graph, &ghost(&beta)).unwrap();
                    rhs = rhs.add(graph, &term).unwrap();
                }
            }
            if !lhs.eq(graph, &rhs).unwrap() {
                Some(format!(
                    "s_{}* s_{} != sum over Lambda^min",
                    lam.display(&graph.skeleton),
                    mu.display(&graph.skeleton)
                ))
            } else {
                None
            }
        })
        .into_iter()
        .flatten()
        .collect();
        relations.push(RelationResult { relation: "KP3".into(), checked: pairs.len(), failures });
    }

    // (KP4): Π_{λ ∈ E} (s_v - s_λ s_{λ*}) = 0 over minimal exhaustive sets
    {
        let unit_cap = Degree(vec![1; graph.rank()]);
        let jobs: Vec<(Path, Vec<Path>)> = vertices
            .iter()
            .flat_map(|&v| {
                graph
                    .minimal_exhaustive_sets(v, &unit_cap)
                    .into_iter()
                    .map(move |e| (graph.vertex_path(v), e))
            })
            .collect();
        let failures: Vec<String> = maybe_par_map(&jobs, |(v, e)| {
            let sv = gen(v);
            let mut prod = sv.clone();
            for lam in e {
                let range_proj = gen(lam).mul(graph, &ghost(lam)).unwrap();
                let factor = sv.sub(graph, &range_proj).unwrap();
                prod = prod.mul(graph, &factor).unwrap();
            }
            if !prod.is_zero() {
                Some(format!(
                    "product over E = {{{}}} at {} is nonzero",
                    e.iter().map(|p| p.display(&graph.skeleton)).collect::<Vec<_>>().join(", "),
                    v.display(&graph.skeleton)
                ))
            } else {
                None
            }
        })
        .into_iter()
        .flatten()
        .collect();
        relations.push(RelationResult { relation: "KP4".into(), checked: jobs.len(), failures });
    }

    let passed = relations.iter().all(|r| r.failures.is_empty());
    KpReport {
        graph: graph.name.clone(),
        ring: ring.name(),
        ring_reduced_indecomposable: ring.reduced_indecomposable(),
        depth,
        relations,
        passed,
    }
}
