//! Boundary spaces a continuous orbit equivalence can connect: the boundary
//! path space of a finite k-graph, that of its (virtual) stabilization, and
//! the virtual `Ω_{k,∞}` whose boundary paths are just their range vertices.

use crate::boundary::{self, BoundaryPath};
use crate::degree::{Degree, ExtDegree, ZVec};
use crate::error::{BoundaryError, EquivError};
use crate::graph::KGraph;
use crate::hnf::Lattice;
use std::sync::Arc;

#[derive(Clone, Debug)]
pub enum Space {
    Fin(Arc<KGraph>),
    /// Boundary space of the stabilization `SΛ`, handled virtually as pairs
    /// `(tail, x)` for the path `μ_tail · x`.
    Stab(Arc<KGraph>),
    /// `∂Ω_{k,∞}`: one boundary path per vertex of `N^k`.
    OmegaInf(usize),
}

#[derive(Clone, Debug)]
pub enum Pt {
    Fin(BoundaryPath),
    Stab(Degree, BoundaryPath),
    Omega(Degree),
}

impl Space {
    pub fn rank(&self) -> usize {
        match self {
            Space::Fin(g) | Space::Stab(g) => g.rank(),
            Space::OmegaInf(k) => *k,
        }
    }

    pub fn graph(&self) -> Option<&KGraph> {
        match self {
            Space::Fin(g) | Space::Stab(g) => Some(g),
            Space::OmegaInf(_) => None,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Space::Fin(g) => g.name.clone(),
            Space::Stab(g) => format!("S({})", g.name),
            Space::OmegaInf(k) => format!("omega_{k}_inf"),
        }
    }

    pub fn degree_of(&self, pt: &Pt) -> ExtDegree {
        match (self, pt) {
            (Space::Fin(_), Pt::Fin(x)) => x.degree.clone(),
            (Space::Stab(_), Pt::Stab(n, x)) => x.degree.add(n),
            (Space::OmegaInf(k), Pt::Omega(_)) => ExtDegree::all_infinite(*k),
            _ => panic!("point does not belong to this space"),
        }
    }

    pub fn shift(&self, pt: &Pt, m: &Degree) -> Result<Pt, BoundaryError> {
        if !self.degree_of(pt).ge_degree(m) {
            return Err(BoundaryError::DegreeExceeded(m.clone()));
        }
        Ok(match (self, pt) {
            (Space::Fin(g), Pt::Fin(x)) => Pt::Fin(boundary::shift(g, x, m)?),
            (Space::Stab(g), Pt::Stab(n, x)) => {
                let eaten = Degree(
                    m.0.iter().zip(&n.0).map(|(&a, &b)| a.min(b)).collect(),
                );
                let tail = n.sub(&eaten);
                let into = m.sub(&eaten);
                Pt::Stab(tail, boundary::shift(g, x, &into)?)
            }
            (Space::OmegaInf(_), Pt::Omega(p)) => Pt::Omega(p.add(m)),
            _ => panic!("point does not belong to this space"),
        })
    }

    pub fn eq(&self, a: &Pt, b: &Pt) -> bool {
        match (self, a, b) {
            (Space::Fin(g), Pt::Fin(x), Pt::Fin(y)) => boundary::eq(g, x, y),
            (Space::Stab(g), Pt::Stab(n, x), Pt::Stab(m, y)) => n == m && boundary::eq(g, x, y),
            (Space::OmegaInf(_), Pt::Omega(p), Pt::Omega(q)) => p == q,
            _ => false,
        }
    }

    /// `Per(x)`; for stabilized points the attached tail does not change
    /// periodicity.
    pub fn per_group(&self, pt: &Pt) -> Lattice {
        match (self, pt) {
            (Space::Fin(g), Pt::Fin(x)) => boundary::per_group(g, x),
            (Space::Stab(g), Pt::Stab(_, x)) => boundary::per_group(g, x),
            (Space::OmegaInf(k), Pt::Omega(_)) => Lattice::trivial(*k),
            _ => panic!("point does not belong to this space"),
        }
    }

    pub fn ip_group(&self, pt: &Pt, depth: usize) -> Lattice {
        match (self, pt) {
            (Space::Fin(g), Pt::Fin(x)) => boundary::ip_group(g, x, depth).group,
            (Space::Stab(g), Pt::Stab(_, x)) => boundary::ip_group(g, x, depth).group,
            (Space::OmegaInf(k), Pt::Omega(_)) => Lattice::trivial(*k),
            _ => panic!("point does not belong to this space"),
        }
    }

    /// Search slack for lag-cocycle minimization: the horizon past which
    /// shifted copies of the point repeat.
    pub fn search_slack(&self, pt: &Pt) -> Degree {
        match (self, pt) {
            (Space::Fin(_), Pt::Fin(x)) => x.prefix.degree.add(&x.cycle.degree.scale(2)),
            (Space::Stab(_), Pt::Stab(n, x)) => {
                n.add(&x.prefix.degree).add(&x.cycle.degree.scale(2))
            }
            (Space::OmegaInf(k), Pt::Omega(_)) => Degree::zero(*k),
            _ => panic!("point does not belong to this space"),
        }
    }

    pub fn display(&self, pt: &Pt) -> String {
        match (self, pt) {
            (Space::Fin(g), Pt::Fin(x)) => display_bp(g, x),
            (Space::Stab(g), Pt::Stab(n, x)) => format!("mu_{n:?}.{}", display_bp(g, x)),
            (Space::OmegaInf(_), Pt::Omega(p)) => format!("omega@{p:?}"),
            _ => "<foreign point>".into(),
        }
    }
}

pub fn display_bp(g: &KGraph, x: &BoundaryPath) -> String {
    format!(
        "prefix={};cycle={}",
        x.prefix.display(&g.skeleton),
        x.cycle.display(&g.skeleton)
    )
}

/// Arrow of the boundary path groupoid of a [`Space`].
#[derive(Clone, Debug)]
pub struct SArrow {
    pub x: Pt,
    pub m: ZVec,
    pub y: Pt,
    pub witness: (Degree, Degree),
}

impl SArrow {
    pub fn new(space: &Space, x: Pt, m: ZVec, y: Pt, witness: (Degree, Degree)) -> Result<SArrow, EquivError> {
        let (p, q) = &witness;
        if p.to_zvec().sub(&q.to_zvec()) != m {
            return Err(EquivError::WitnessDisagreement("lag vs witness pair".into()));
        }
        let sx = space
            .shift(&x, p)
            .map_err(|e| EquivError::WitnessDisagreement(e.to_string()))?;
        let sy = space
            .shift(&y, q)
            .map_err(|e| EquivError::WitnessDisagreement(e.to_string()))?;
        if !space.eq(&sx, &sy) {
            return Err(EquivError::WitnessDisagreement("shifts disagree".into()));
        }
        Ok(SArrow { x, m, y, witness })
    }

    pub fn unit(space: &Space, x: Pt) -> SArrow {
        let zero = Degree::zero(space.rank());
        SArrow::new(space, x.clone(), ZVec::zero(space.rank()), x, (zero.clone(), zero))
            .expect("units are arrows")
    }

    pub fn eq(&self, space: &Space, other: &SArrow) -> bool {
        self.m == other.m && space.eq(&self.x, &other.x) && space.eq(&self.y, &other.y)
    }

    pub fn inverse(&self, space: &Space) -> SArrow {
        SArrow::new(
            space,
            self.y.clone(),
            self.m.neg(),
            self.x.clone(),
            (self.witness.1.clone(), self.witness.0.clone()),
        )
        .expect("inverse of an arrow")
    }

    pub fn compose(&self, space: &Space, other: &SArrow) -> Result<SArrow, EquivError> {
        if !space.eq(&self.y, &other.x) {
            return Err(EquivError::WitnessDisagreement("arrows not composable".into()));
        }
        let (p1, q1) = &self.witness;
        let (p2, q2) = &other.witness;
        let l = q1.join(p2);
        SArrow::new(
            space,
            self.x.clone(),
            self.m.add(&other.m),
            other.y.clone(),
            (p1.add(&l.sub(q1)), q2.add(&l.sub(p2))),
        )
    }
}

/// Space-level lag cocycle: the lexicographically least `l ≥ m ∨ 0` with
/// `σ^l x = σ^{l-m} y`, searched inside the witness-plus-slack box.
pub fn l_cocycle(space: &Space, a: &SArrow) -> Degree {
    let n_pos = a.m.pos_part();
    let slack = space.search_slack(&a.x).join(&space.search_slack(&a.y));
    let upper_raw = a.witness.0.join(&n_pos).add(&slack);
    let upper = space
        .degree_of(&a.x)
        .clamp(&upper_raw)
        .meet(&space.degree_of(&a.y).add(&n_pos).clamp(&upper_raw));
    let mut hits: Vec<Degree> = Vec::new();
    for l in upper.box_iter() {
        if !n_pos.le(&l) {
            continue;
        }
        let Some(l_minus) = l.to_zvec().sub(&a.m).to_degree() else { continue };
        if !space.degree_of(&a.x).ge_degree(&l) || !space.degree_of(&a.y).ge_degree(&l_minus) {
            continue;
        }
        let sx = space.shift(&a.x, &l).unwrap();
        let sy = space.shift(&a.y, &l_minus).unwrap();
        if space.eq(&sx, &sy) {
            hits.push(l);
        }
    }
    debug_assert!(!hits.is_empty());
    let minimal: Vec<&Degree> =
        hits.iter().filter(|l| !hits.iter().any(|o| o != *l && o.le(l))).collect();
    minimal.into_iter().min_by(|a, b| a.lex_cmp(b)).unwrap().clone()
}
