//! Edge-disjoint s→t paths under per-vertex matroid constraints.
//!
//! An instance is a finite digraph together with one matroid per vertex on
//! that vertex's in-edges. A path system is *independent* when its paths are
//! pairwise edge-disjoint and the union of their edges is independent in the
//! direct sum of the vertex matroids. The library provides:
//!
//! * [`solver`] — an augmenting-walk engine computing a maximum independent
//!   s→t path system with a matching cut certificate,
//! * [`waves`] — a second engine that reaches the same maximum through
//!   blocking waves and arborescence growth, auditing its own invariants,
//! * [`oracle`] — exhaustive ground truth for desk-scale instances,
//! * [`matroid`] / [`digraph`] — the supporting notions: matroid oracles and
//!   their minors, cuts, contractions, greedy path decomposition.
//!
//! Determinism is a design rule throughout: every search breaks ties by
//! ascending id, so equal inputs give byte-equal outputs.

use std::collections::BTreeMap;
use std::sync::Arc;

pub mod set;

pub mod error;

pub mod digraph;

pub mod matroid;

pub mod augment;

pub mod solver;

pub mod waves;

pub mod oracle;

pub use digraph::{Cut, Digraph, Edge, EdgeId, EdgeSet, Path, PathSystem, VertexId, VertexSet};
pub use error::Error;
pub use matroid::{DirectSumMatroid, MatroidOracle, VertexMatroid};
pub use oracle::Guards;
pub use solver::{solve, Certificate};
pub use waves::{proof_solve, ContractedSystem, Wave};

use matroid::FreeMatroid;
use set::Id;

/// A digraph plus one matroid per vertex over exactly that vertex's in-edges.
///
/// Construction strips matroid loops (elements no independent set can use):
/// the digraph loses those edges and every block is restricted accordingly,
/// so the engines never have to special-case them. The stripped set is
/// reported back to the caller.
#[derive(Clone)]
pub struct Instance {
    digraph: Arc<Digraph>,
    matroid: Arc<DirectSumMatroid>,
}

impl Instance {
    pub fn new(
        digraph: Digraph,
        matroid: DirectSumMatroid,
    ) -> Result<(Self, EdgeSet), Error> {
        if matroid.blocks().len() != digraph.vertex_count() {
            return Err(Error::Precondition("one matroid block per vertex required"));
        }
        for v in digraph.vertices() {
            if *matroid.block(v.index()).ground() != digraph.in_edge_set(v) {
                return Err(Error::GroundMismatch { vertex: v });
            }
        }
        let loops = matroid::loops(&matroid);
        let (digraph, matroid) = if loops.is_empty() {
            (digraph, matroid)
        } else {
            let keep = digraph.edge_set().difference(&loops);
            (digraph.sub_digraph(&keep), matroid.restricted(&keep))
        };
        let instance =
            Instance { digraph: Arc::new(digraph), matroid: Arc::new(matroid) };
        Ok((instance, loops))
    }

    /// The unconstrained instance: a free matroid at every vertex.
    pub fn all_free(digraph: Digraph) -> Self {
        Self::from_vertex_matroids(digraph, BTreeMap::new())
            .expect("free blocks always match and have no loops")
            .0
    }

    /// Builds the direct sum from explicit per-vertex matroids, defaulting
    /// every unmentioned vertex to a free matroid on its in-edges.
    pub fn from_vertex_matroids(
        digraph: Digraph,
        mut overrides: BTreeMap<VertexId, VertexMatroid>,
    ) -> Result<(Self, EdgeSet), Error> {
        let blocks = digraph
            .vertices()
            .map(|v| {
                overrides
                    .remove(&v)
                    .unwrap_or_else(|| VertexMatroid::Free(FreeMatroid::new(digraph.in_edge_set(v))))
            })
            .collect();
        if let Some(v) = overrides.into_keys().next() {
            return Err(Error::UnknownVertex(v));
        }
        Self::new(digraph, DirectSumMatroid::new(blocks)?)
    }

    pub fn digraph(&self) -> &Digraph {
        &self.digraph
    }

    pub fn matroid(&self) -> &DirectSumMatroid {
        &self.matroid
    }

    pub(crate) fn digraph_arc(&self) -> Arc<Digraph> {
        self.digraph.clone()
    }

    pub(crate) fn matroid_arc(&self) -> Arc<DirectSumMatroid> {
        self.matroid.clone()
    }
}
