//! Continuous orbit equivalence machinery: boundary-space homeomorphisms
//! with cocycle families, the verifiers for the orbit/coherence/periodicity
//! /grading identities, eventual one-sided conjugacy, and the induced
//! groupoid homomorphisms.

pub mod checks;
pub mod family;
pub mod maps;
pub mod space;

#[cfg(test)]
mod tests;

pub use checks::{
    check_arrow_map, check_coe, check_eventual_conjugacy, check_graded,
    check_period_preserving, cocycles_from_iso, induced_groupoid_hom, is_aperiodic,
    AperiodicityVerdict, ArrowMap, CheckBlock, CheckReport, SpaceFunctor,
};
pub use family::{CocycleFamily, FamilyFG, LocallyConstant};
pub use maps::{BoundaryMap, PhiMap, RelabelMap, SameSkeletonMap};
pub use space::{l_cocycle as space_l_cocycle, Pt, SArrow, Space};

pub use checks::omega_coe;
