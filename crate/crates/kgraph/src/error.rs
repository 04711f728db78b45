//! Error types, grouped by the layer that raises them.

use crate::degree::Degree;
use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ValidateError {
    #[error("unknown vertex `{0}` referenced by edge `{1}`")]
    UnknownVertex(String, String),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(String),
    #[error("duplicate vertex name `{0}`")]
    DuplicateVertex(String),
    #[error("edge `{0}` has color {1}, outside 1..={2}")]
    ColorOutOfRange(String, usize, usize),
    #[error("square references unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("missing factorization rule for composable pair `{0}` then `{1}`")]
    MissingRule(String, String),
    #[error("non-bijective factorization rule: `{0}` paired more than once")]
    NonBijectiveRule(String),
    #[error("square endpoint mismatch at `{0}`/`{1}`")]
    EndpointMismatch(String, String),
    #[error("square colors invalid at `{0}`/`{1}` (need the two colors in opposite orders)")]
    SquareColors(String, String),
    #[error("cube condition fails on tri-colored path `{0}`")]
    CubeConditionFailure(String),
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum PathError {
    #[error("endpoint mismatch: s(left) = `{0}` but r(right) = `{1}`")]
    EndpointMismatch(String, String),
    #[error("degree out of range: need {0:?} <= {1:?} <= {2:?}")]
    DegreeOutOfRange(Degree, Degree, Degree),
    #[error("range mismatch: r = `{0}` vs `{1}`")]
    RangeMismatch(String, String),
    #[error("Omega with infinite entries is only handled virtually in the stabilization layer")]
    InfiniteDegreeUnsupportedHere,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum BoundaryError {
    #[error("shift degree {0:?} exceeds the path degree")]
    DegreeExceeded(Degree),
    #[error("endpoint mismatch: s(path) = `{0}` but r(boundary path) = `{1}`")]
    EndpointMismatch(String, String),
    #[error("cycle must be a closed loop at the prefix source")]
    CycleNotClosed,
    #[error("cycle degree must be zero on finite coordinates and positive on infinite ones")]
    CycleDegreeInvalid,
    #[error("not a boundary path: at inner degree {0:?} the exhaustive set {{{1}}} is missed")]
    NotABoundaryPath(Degree, String),
    #[error("exclusion set is exhaustive, so the cylinder is empty")]
    ExhaustiveG,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum GroupoidError {
    #[error("arrows not composable: source of the first differs from range of the second")]
    NotComposable,
    #[error("invalid arrow: no witness pair (p,q) with the claimed lag")]
    InvalidArrow,
    #[error("shift images differ: {0}")]
    ImageMismatch(String),
    #[error("injectivity of the shift on the given set fails: {0}")]
    InjectivityUnverifiable(String),
    #[error("functor does not respect a factorization square: {0}")]
    FunctorSquare(String),
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("elements live over different graphs")]
    GraphMismatch,
    #[error("elements live over different rings")]
    RingMismatch,
    #[error("relation {relation} fails: {witness}")]
    RelationFailure { relation: String, witness: String },
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum EquivError {
    #[error("no cylinder of the cocycle family matches {0}")]
    CoverGap(String),
    #[error("two witnesses for one arrow disagree: {0}")]
    WitnessDisagreement(String),
    #[error("cylinder partition did not stabilize within depth {0}")]
    PartitionNotStabilized(usize),
    #[error("ranks differ: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("graphs do not share a skeleton: {0}")]
    SkeletonMismatch(String),
    #[error("same-skeleton construction is only available for rank 2")]
    RankUnsupported,
    #[error("the given rule is not a bijection: {0}")]
    NotBijective(String),
    #[error("map not evaluable on this input: {0}")]
    NotEvaluable(String),
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum TwoSidedError {
    #[error("graph violates the standing hypotheses (row-finite, finitely many vertices, no sinks or sources): {0}")]
    HypothesesViolated(String),
    #[error("block code tables disagree on overlapping windows: {0}")]
    WindowInconsistency(String),
    #[error("partition data inconsistent with the window equivalence classes: {0}")]
    EquivalenceClassMismatch(String),
}
