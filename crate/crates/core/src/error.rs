use thiserror::Error;

use crate::commensurate::FixedLocus;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed half-edge structure at flag {flag}: {reason}")]
    Malformed { flag: usize, reason: String },
    #[error("flag {flag} does not exist")]
    UnknownFlag { flag: usize },

    #[error("half-edge {flag} has a zero vector")]
    ZeroVector { flag: usize },
    #[error("half-edge {flag} and its twin carry vectors that are not equal up to sign")]
    BadTwinVector { flag: usize },
    #[error("face containing half-edge {face} does not close up")]
    NonClosedFace { face: usize },
    #[error("corner at half-edge {flag} is not convex")]
    NonConvexCorner { flag: usize },
    #[error("vertex at half-edge {vertex} is a simple pole but not a puncture")]
    PoleNotPunctured { vertex: usize },
    #[error("vertex at half-edge {vertex} has an inconsistent status: {reason}")]
    BadStatus { vertex: usize, reason: String },
    #[error("surface is not connected")]
    Disconnected,
    #[error("type condition 3g-3+p > 0 fails (genus {genus}, {punctures} punctures)")]
    TypeConditionViolated { genus: i64, punctures: usize },
    #[error("Gauss-Bonnet fails: sum of (2 - a) is {lhs}, 2(V-E+F) is {rhs}")]
    GaussBonnet { lhs: i64, rhs: i64 },

    #[error("matrix determinant must be positive")]
    NonPositiveDeterminant,
    #[error("split parameter must lie strictly between 0 and 1")]
    DegenerateSplit,
    #[error("chord between corners {from} and {to} of face {face} is an existing edge or degenerate")]
    ChordIsExistingEdge { face: usize, from: usize, to: usize },
    #[error("point is not strictly inside face {face}")]
    PointNotInterior { face: usize },

    #[error("map is not equivariant at source flag {flag}")]
    NotEquivariant { flag: usize },
    #[error("vector mismatch at source flag {flag}")]
    VectorMismatch { flag: usize },
    #[error("gluing sign inconsistent at source flag {flag}")]
    SignInconsistency { flag: usize },
    #[error("local degree rule violated at source vertex {vertex}: {rule}")]
    LocalDegreeViolation { vertex: usize, rule: String },
    #[error("degree mismatch: {reason}")]
    DegreeMismatch { reason: String },
    #[error("surfaces do not share half-edge combinatorics")]
    StructureMismatch,
    #[error("coverings have different targets")]
    TargetMismatch,
    #[error("coverings have different sources")]
    SourceMismatch,

    #[error("partition needs refinement at {} fixed loci", .0.len())]
    RefinementNeeded(Vec<FixedLocus>),
    #[error("vertex class containing flag {flag} mixes incompatible statuses")]
    StatusClash { flag: usize },
    #[error("refinement loop exceeded {rounds} rounds")]
    IterationLimitExceeded { rounds: usize },
    #[error("partition is not a valid flag partition: {reason}")]
    InvalidPartition { reason: String },

    #[error("derivative does not match edge vectors at flag {flag}")]
    DerivativeMismatch { flag: usize },
    #[error("derivative has determinant {det}; descent needs determinant 1")]
    NotAreaPreserving { det: String },
    #[error("automorphism does not preserve vertex data at flag {flag}")]
    StatusBroken { flag: usize },
    #[error("pushed-forward differential is not symmetric at power {power}")]
    NotSymmetricUnderPowers { power: usize },
    #[error("degree {degree} exceeds the enumeration cap {cap}")]
    DegreeCapExceeded { degree: usize, cap: usize },
    #[error("monodromy data invalid: {reason}")]
    BadMonodromy { reason: String },
}
