//! Crate-wide error type.
//!
//! Structural misuse (bad ids, malformed paths, precondition violations)
//! surfaces as ordinary variants. `Invariant` is different: it reports that an
//! internal consistency check failed mid-algorithm, which indicates a bug, not
//! bad input.

use thiserror::Error;

use crate::augment::WalkViolation;
use crate::digraph::{EdgeId, VertexId};
use crate::waves::WaveViolation;

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum Error {
    #[error("source and sink must differ")]
    SourceEqualsSink,
    #[error("vertex {0} is out of range")]
    UnknownVertex(VertexId),
    #[error("edge {0} does not exist in this digraph")]
    UnknownEdge(EdgeId),
    #[error("edge id {0} declared twice")]
    DuplicateEdgeId(EdgeId),
    #[error("invalid cut: {0}")]
    InvalidCut(&'static str),
    #[error("paths must contain at least one edge")]
    EmptyPath,
    #[error("edge {at} does not continue the previous edge")]
    DisconnectedPath { at: EdgeId },
    #[error("path visits vertex {at} twice")]
    PathRepeatsVertex { at: VertexId },
    #[error("edge {0} appears in two paths")]
    PathsShareEdge(EdgeId),
    #[error("edge set is not a union of s\u{2192}t paths: stuck at vertex {at}")]
    MalformedAugmentation { at: VertexId },
    #[error("inner cut is not contained in the outer cut")]
    CutNotNested,
    #[error("edge set is dependent where an independent set is required")]
    DependentSet,
    #[error("edge {0} is outside the oracle's ground set")]
    NotInGround(EdgeId),
    #[error("matroid ground at vertex {vertex} does not match its in-edges")]
    GroundMismatch { vertex: VertexId },
    #[error("edge {0} belongs to two per-vertex grounds")]
    OverlappingGrounds(EdgeId),
    #[error("precondition violated: {0}")]
    Precondition(&'static str),
    #[error("{what} size {actual} exceeds the exhaustive-check limit {limit}")]
    GuardExceeded { what: &'static str, limit: usize, actual: usize },
    #[error("invalid augmenting walk: {0}")]
    InvalidWalk(WalkViolation),
    #[error("invalid wave: {0}")]
    InvalidWave(WaveViolation),
    #[error("wave is not maximal")]
    NonMaximalWave,
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}
