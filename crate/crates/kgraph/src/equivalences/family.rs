//! Families of continuous cocycles for a boundary homeomorphism: for each
//! requested degree `m`, locally constant maps `f_m, g_m` on the source
//! space (and `i_n, j_n` on the target when the map is invertible).

use super::maps::PhiMap;
use super::space::{Pt, Space};
use crate::cylinders::{self, CylPiece};
use crate::degree::Degree;
use crate::error::EquivError;
use std::collections::BTreeMap;

/// A locally constant `N^{k'}`-valued map on a boundary space.
#[derive(Clone, Debug)]
pub enum LocallyConstant {
    /// Finite list of disjoint cylinders with constant values; evaluation
    /// takes the first matching cylinder.
    Cylinders(Vec<(CylPiece, Degree)>),
    /// On `∂Ω_{k,∞}`: `x ↦ φ(r(x) + offset)`.
    OmegaPhi { phi: PhiMap, offset: Degree },
    Constant(Degree),
}

impl LocallyConstant {
    pub fn eval(&self, space: &Space, pt: &Pt) -> Result<Degree, EquivError> {
        match (self, pt) {
            (LocallyConstant::Constant(v), _) => Ok(v.clone()),
            (LocallyConstant::OmegaPhi { phi, offset }, Pt::Omega(p)) => {
                Ok(phi.eval(&p.add(offset)))
            }
            (LocallyConstant::Cylinders(rows), Pt::Fin(x)) => {
                let g = space.graph().expect("cylinder rows need a graph");
                for (piece, value) in rows {
                    if cylinders::member(g, x, piece) {
                        return Ok(value.clone());
                    }
                }
                Err(EquivError::CoverGap(space.display(pt)))
            }
            _ => Err(EquivError::CoverGap(space.display(pt))),
        }
    }
}

/// The pair `(f_m, g_m)` at one degree.
#[derive(Clone, Debug)]
pub struct FamilyFG {
    pub f: LocallyConstant,
    pub g: LocallyConstant,
}

/// A family of continuous cocycles for a homeomorphism `h`.
#[derive(Clone, Debug)]
pub struct CocycleFamily {
    /// Forward rows on the source space, per degree `m`.
    pub forward: BTreeMap<Degree, FamilyFG>,
    /// Backward rows `(i_n, j_n)` on the target space, when `h` has inverse
    /// data.
    pub backward: Option<BTreeMap<Degree, FamilyFG>>,
}

impl CocycleFamily {
    pub fn f(&self, space: &Space, m: &Degree, x: &Pt) -> Result<Degree, EquivError> {
        let row = self
            .forward
            .get(m)
            .ok_or_else(|| EquivError::CoverGap(format!("no forward row at degree {m:?}")))?;
        row.f.eval(space, x)
    }

    pub fn g(&self, space: &Space, m: &Degree, x: &Pt) -> Result<Degree, EquivError> {
        let row = self
            .forward
            .get(m)
            .ok_or_else(|| EquivError::CoverGap(format!("no forward row at degree {m:?}")))?;
        row.g.eval(space, x)
    }

    pub fn i(&self, space: &Space, n: &Degree, y: &Pt) -> Result<Degree, EquivError> {
        let rows = self
            .backward
            .as_ref()
            .ok_or_else(|| EquivError::CoverGap("no backward rows".into()))?;
        let row = rows
            .get(n)
            .ok_or_else(|| EquivError::CoverGap(format!("no backward row at degree {n:?}")))?;
        row.f.eval(space, y)
    }

    pub fn j(&self, space: &Space, n: &Degree, y: &Pt) -> Result<Degree, EquivError> {
        let rows = self
            .backward
            .as_ref()
            .ok_or_else(|| EquivError::CoverGap("no backward rows".into()))?;
        let row = rows
            .get(n)
            .ok_or_else(|| EquivError::CoverGap(format!("no backward row at degree {n:?}")))?;
        row.g.eval(space, y)
    }

    /// Identity family: `f = 0`, `g_m = m` over the degree box.
    pub fn identity(space: &Space, cap: &Degree, with_backward: bool) -> CocycleFamily {
        let k = space.rank();
        let mut forward = BTreeMap::new();
        for m in cap.box_iter() {
            forward.insert(
                m.clone(),
                FamilyFG {
                    f: LocallyConstant::Constant(Degree::zero(k)),
                    g: LocallyConstant::Constant(m),
                },
            );
        }
        let backward = with_backward.then(|| forward.clone());
        CocycleFamily { forward, backward }
    }

    /// Exact structural validation of cylinder rows: within each row the
    /// cylinders must be pairwise disjoint and cover `∂Λ^{≥ m}`.
    pub fn validate(&self, source: &Space, target: &Space) -> Result<(), EquivError> {
        for (m, row) in &self.forward {
            validate_rows(source, m, &row.f)?;
            validate_rows(source, m, &row.g)?;
        }
        if let Some(back) = &self.backward {
            for (n, row) in back {
                validate_rows(target, n, &row.f)?;
                validate_rows(target, n, &row.g)?;
            }
        }
        Ok(())
    }
}

fn validate_rows(space: &Space, m: &Degree, lc: &LocallyConstant) -> Result<(), EquivError> {
    let LocallyConstant::Cylinders(rows) = lc else { return Ok(()) };
    let g = space.graph().expect("cylinder rows need a graph");
    for (i, (a, _)) in rows.iter().enumerate() {
        for (b, _) in rows.iter().skip(i + 1) {
            if !cylinders::meet(g, a, b).is_empty() {
                return Err(EquivError::WitnessDisagreement(format!(
                    "family cylinders overlap: {} and {}",
                    a.display(g),
                    b.display(g)
                )));
            }
        }
    }
    // coverage of ∂Λ^{≥m}: every Z(λ), λ ∈ Λ^m, is inside the union
    let pieces: Vec<CylPiece> = rows.iter().map(|(p, _)| p.clone()).collect();
    for v in g.skeleton.vertices() {
        for lam in g.enumerate_paths(v, m) {
            if !cylinders::covers(g, &pieces, &CylPiece::plain(lam.clone())) {
                return Err(EquivError::CoverGap(format!(
                    "row at {m:?} misses Z({})",
                    lam.display(&g.skeleton)
                )));
            }
        }
    }
    Ok(())
}
