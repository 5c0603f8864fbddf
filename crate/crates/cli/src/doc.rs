//! JSON documents for instances and certificates.
//!
//! An instance document names its vertices; the dense internal ids are the
//! declaration positions, and edge ids must be exactly 0..edges.len() (in any
//! declaration order). The canonical byte form of a document is its compact
//! serialization with sorted map keys, and the instance hash is the SHA-256
//! of that form, so certificates stay checkable against re-formatted files.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use matroid_menger::digraph::{EdgeId, VertexId};
use matroid_menger::matroid::{
    FreeMatroid, Gf2Matroid, GraphicMatroid, PartitionMatroid, UniformMatroid,
};
use matroid_menger::set::Id;
use matroid_menger::solver::{verification_transcript, Certificate, CertificateViolation};
use matroid_menger::{Digraph, EdgeSet, Instance, VertexMatroid, VertexSet};

pub const DOCUMENT_VERSION: u32 = 1;

/// A validation or parse failure, as a machine-readable kind plus a located
/// human message.
#[derive(Debug)]
pub struct DocError {
    kind: &'static str,
    message: String,
}

impl DocError {
    pub fn new(kind: &'static str, message: impl Into<String>) -> Self {
        DocError { kind, message: message.into() }
    }

    fn schema(message: impl Into<String>) -> Self {
        DocError::new("schema", message)
    }

    pub fn kind(&self) -> &'static str {
        self.kind
    }

    pub fn message(&self) -> &str {
        &self.message
    }
}

impl fmt::Display for DocError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub version: u32,
    pub vertices: Vec<String>,
    pub s: String,
    pub t: String,
    pub edges: Vec<EdgeDocument>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub matroids: BTreeMap<String, MatroidSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct EdgeDocument {
    pub id: u32,
    pub tail: String,
    pub head: String,
}

/// Per-vertex matroid descriptions. Free and uniform matroids take their
/// ground implicitly (the vertex's in-edges); the explicit families must
/// mention exactly those edges.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum MatroidSpec {
    Free,
    Uniform {
        rank: usize,
    },
    Partition {
        blocks: Vec<BlockSpec>,
    },
    /// Binary columns keyed by decimal edge id, written as bitstrings whose
    /// character i is row i.
    Gf2 {
        columns: BTreeMap<String, String>,
    },
    /// Edges of an auxiliary undirected graph, keyed by decimal edge id;
    /// independent = acyclic there.
    Graphic {
        aux_edges: BTreeMap<String, (u32, u32)>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct BlockSpec {
    pub edges: Vec<u32>,
    pub cap: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct CertificateDocument {
    pub version: u32,
    pub engine: String,
    pub instance_hash: String,
    pub paths: Vec<Vec<u32>>,
    pub cut: Vec<String>,
    pub cover: Vec<u32>,
    pub transcript: Vec<TranscriptEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct TranscriptEntry {
    pub clause: String,
    pub pass: bool,
}

/// A realized instance together with the naming needed to render output.
pub struct NamedInstance {
    pub instance: Instance,
    /// Vertex id → declared name.
    pub names: Vec<String>,
    /// Matroid loop edges removed during construction.
    pub stripped: EdgeSet,
    /// `sha256:<hex>` over the canonical document bytes.
    pub hash: String,
}

impl NamedInstance {
    pub fn name_of(&self, v: VertexId) -> &str {
        &self.names[v.index()]
    }
}

pub fn parse_instance_document(text: &str) -> Result<InstanceDocument, DocError> {
    let doc: InstanceDocument =
        serde_json::from_str(text).map_err(|e| DocError::new("json", e.to_string()))?;
    if doc.version != DOCUMENT_VERSION {
        return Err(DocError::schema(format!(
            "unsupported document version {} (expected {DOCUMENT_VERSION})",
            doc.version
        )));
    }
    Ok(doc)
}

pub fn parse_certificate_document(text: &str) -> Result<CertificateDocument, DocError> {
    let doc: CertificateDocument =
        serde_json::from_str(text).map_err(|e| DocError::new("json", e.to_string()))?;
    if doc.version != DOCUMENT_VERSION {
        return Err(DocError::schema(format!(
            "unsupported document version {} (expected {DOCUMENT_VERSION})",
            doc.version
        )));
    }
    Ok(doc)
}

/// The canonical bytes: compact JSON with the struct field order and sorted
/// map keys, exactly as this crate serializes.
pub fn canonical_bytes<T: Serialize>(doc: &T) -> String {
    serde_json::to_string(doc).expect("documents serialize infallibly")
}

pub fn instance_hash(doc: &InstanceDocument) -> String {
    let digest = Sha256::digest(canonical_bytes(doc).as_bytes());
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

/// Pretty serialization for files and stdout, newline-terminated.
pub fn render<T: Serialize>(doc: &T) -> String {
    let mut out = serde_json::to_string_pretty(doc).expect("documents serialize infallibly");
    out.push('\n');
    out
}

/// Validates the document and builds the in-memory instance: referential
/// integrity, dense edge ids, matroid grounds covering exactly the in-edges.
pub fn realize_instance(doc: &InstanceDocument) -> Result<NamedInstance, DocError> {
    let hash = instance_hash(doc);

    let mut index_of: BTreeMap<&str, u32> = BTreeMap::new();
    for (i, name) in doc.vertices.iter().enumerate() {
        if name.is_empty() {
            return Err(DocError::schema("vertex names must be nonempty"));
        }
        if index_of.insert(name, i as u32).is_some() {
            return Err(DocError::schema(format!("duplicate vertex name {name:?}")));
        }
    }
    let vertex = |name: &str, role: &str| -> Result<u32, DocError> {
        index_of.get(name).copied().ok_or_else(|| {
            DocError::schema(format!("{role} references unknown vertex {name:?}"))
        })
    };
    let s = vertex(&doc.s, "s")?;
    let t = vertex(&doc.t, "t")?;
    if s == t {
        return Err(DocError::schema("s and t must be distinct vertices"));
    }

    let m = doc.edges.len();
    let mut pairs: Vec<Option<(u32, u32)>> = vec![None; m];
    for e in &doc.edges {
        let slot = pairs.get_mut(e.id as usize).ok_or_else(|| {
            DocError::schema(format!("edge ids must be dense 0..{m}: found id {}", e.id))
        })?;
        if slot.is_some() {
            return Err(DocError::schema(format!("duplicate edge id {}", e.id)));
        }
        let tail = vertex(&e.tail, &format!("edge {}", e.id))?;
        let head = vertex(&e.head, &format!("edge {}", e.id))?;
        *slot = Some((tail, head));
    }
    let pairs: Vec<(u32, u32)> = pairs.into_iter().map(|p| p.expect("all slots filled")).collect();

    let digraph =
        Digraph::new(doc.vertices.len(), VertexId(s), VertexId(t), &pairs)
            .map_err(|e| DocError::schema(e.to_string()))?;

    let mut overrides: BTreeMap<VertexId, VertexMatroid> = BTreeMap::new();
    for (name, spec) in &doc.matroids {
        let v = VertexId(vertex(name, "matroid entry")?);
        overrides.insert(v, build_matroid(name, spec, &digraph, v)?);
    }

    let (instance, stripped) = Instance::from_vertex_matroids(digraph, overrides)
        .map_err(|e| DocError::schema(e.to_string()))?;
    Ok(NamedInstance { instance, names: doc.vertices.clone(), stripped, hash })
}

fn edge_key(key: &str, name: &str) -> Result<u32, DocError> {
    key.parse().map_err(|_| {
        DocError::schema(format!("matroid at {name:?} has a non-numeric edge key {key:?}"))
    })
}

fn build_matroid(
    name: &str,
    spec: &MatroidSpec,
    d: &Digraph,
    v: VertexId,
) -> Result<VertexMatroid, DocError> {
    let ground = d.in_edge_set(v);
    // The explicit families declare their elements; both directions of a
    // mismatch get their own message.
    let check_ground = |declared: &BTreeSet<u32>| -> Result<(), DocError> {
        for e in ground.iter() {
            if !declared.contains(&e.0) {
                return Err(DocError::schema(format!(
                    "uncovered in-edge: edge {} enters {name:?} but the matroid does not mention it",
                    e.0
                )));
            }
        }
        for &e in declared {
            if !ground.contains(EdgeId(e)) {
                return Err(DocError::schema(format!(
                    "edge {e} does not enter {name:?} but its matroid mentions it"
                )));
            }
        }
        Ok(())
    };

    match spec {
        MatroidSpec::Free => Ok(VertexMatroid::Free(FreeMatroid::new(ground))),
        MatroidSpec::Uniform { rank } => {
            Ok(VertexMatroid::Uniform(UniformMatroid::new(ground, *rank)))
        }
        MatroidSpec::Partition { blocks } => {
            let declared: BTreeSet<u32> =
                blocks.iter().flat_map(|b| b.edges.iter().copied()).collect();
            let mentioned: usize = blocks.iter().map(|b| b.edges.len()).sum();
            if mentioned != declared.len() {
                return Err(DocError::schema(format!(
                    "partition blocks at {name:?} mention an edge twice"
                )));
            }
            check_ground(&declared)?;
            let blocks: Vec<(EdgeSet, usize)> = blocks
                .iter()
                .filter(|b| !b.edges.is_empty())
                .map(|b| (b.edges.iter().map(|&e| EdgeId(e)).collect(), b.cap))
                .collect();
            let partition = PartitionMatroid::new(blocks)
                .map_err(|e| DocError::schema(format!("partition at {name:?}: {e}")))?;
            Ok(VertexMatroid::Partition(partition))
        }
        MatroidSpec::Gf2 { columns } => {
            let mut parsed = BTreeMap::new();
            for (key, bits) in columns {
                let e = edge_key(key, name)?;
                if bits.is_empty() || bits.len() > 64 || bits.bytes().any(|b| b != b'0' && b != b'1')
                {
                    return Err(DocError::schema(format!(
                        "gf2 column for edge {e} at {name:?} must be a bitstring of 1..=64 chars"
                    )));
                }
                let value = bits
                    .bytes()
                    .enumerate()
                    .filter(|&(_, b)| b == b'1')
                    .fold(0u64, |acc, (i, _)| acc | 1 << i);
                parsed.insert(EdgeId(e), value);
            }
            check_ground(&parsed.keys().map(|e| e.0).collect())?;
            Ok(VertexMatroid::Gf2(Gf2Matroid::new(parsed)))
        }
        MatroidSpec::Graphic { aux_edges } => {
            let mut ends: BTreeMap<EdgeId, (u32, u32)> = BTreeMap::new();
            for (key, &uv) in aux_edges {
                ends.insert(EdgeId(edge_key(key, name)?), uv);
            }
            check_ground(&ends.keys().map(|e| e.0).collect())?;
            Ok(VertexMatroid::Graphic(GraphicMatroid::new(ends)))
        }
    }
}

/// Renders a solver certificate: path edges in traversal order, the cut as
/// sorted vertex names, and the reproducible verification transcript.
pub fn certificate_document(
    named: &NamedInstance,
    engine: &str,
    cert: &Certificate,
) -> CertificateDocument {
    let id_paths: Vec<Vec<EdgeId>> =
        cert.paths.iter().map(|p| p.edges().to_vec()).collect();
    let transcript = verification_transcript(
        named.instance.digraph(),
        named.instance.matroid(),
        &id_paths,
        cert.cut.set(),
        &cert.cover,
    )
    .into_iter()
    .map(|(clause, pass)| TranscriptEntry { clause: clause.to_string(), pass })
    .collect();

    let mut cut: Vec<String> =
        cert.cut.set().iter().map(|v| named.name_of(v).to_string()).collect();
    cut.sort();

    CertificateDocument {
        version: DOCUMENT_VERSION,
        engine: engine.to_string(),
        instance_hash: named.hash.clone(),
        paths: id_paths.iter().map(|p| p.iter().map(|e| e.0).collect()).collect(),
        cut,
        cover: cert.cover.iter().map(|e| e.0).collect(),
        transcript,
    }
}

/// Untyped certificate material for the clause-by-clause auditor. Unknown
/// vertex names are mapped to fresh out-of-range ids so the cut-shape clause
/// reports them rather than this parser.
pub fn raw_material(
    doc: &CertificateDocument,
    named: &NamedInstance,
) -> (Vec<Vec<EdgeId>>, VertexSet, EdgeSet) {
    let paths: Vec<Vec<EdgeId>> = doc
        .paths
        .iter()
        .map(|p| p.iter().map(|&e| EdgeId(e)).collect())
        .collect();
    let mut fresh = named.names.len() as u32;
    let cut: VertexSet = doc
        .cut
        .iter()
        .map(|name| match named.names.iter().position(|n| n == name) {
            Some(i) => VertexId(i as u32),
            None => {
                fresh += 1;
                VertexId(fresh - 1)
            }
        })
        .collect();
    let cover: EdgeSet = doc.cover.iter().map(|&e| EdgeId(e)).collect();
    (paths, cut, cover)
}

/// The transcript label of the clause a violation belongs to.
pub fn clause_name(violation: &CertificateViolation) -> &'static str {
    match violation {
        CertificateViolation::InvalidPath { .. } => "paths-valid",
        CertificateViolation::SharedEdge { .. } => "edge-disjoint",
        CertificateViolation::DependentPaths => "independence",
        CertificateViolation::BadCut(_) => "cut-shape",
        CertificateViolation::EscapingEdge { .. } => "out-condition",
        CertificateViolation::CoverMembership { .. } => "cover-membership",
        CertificateViolation::SpanCondition { .. } => "span-condition",
        CertificateViolation::CountMismatch { .. } => "count-condition",
    }
}

/// Result object for `verify`: the failed clause (if any) and the full
/// non-short-circuiting transcript.
#[derive(Serialize)]
pub struct VerifyOutcome {
    pub verified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clause: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    pub transcript: Vec<TranscriptEntry>,
}

/// Result object for `oracle`.
#[derive(Serialize)]
pub struct OracleDocument {
    pub max_paths: usize,
    pub best_system: Vec<Vec<u32>>,
    pub min_cut_rank: usize,
    pub best_cut: Vec<String>,
    pub duality_holds: bool,
}

/// Result objects for `axioms`.
#[derive(Serialize)]
pub struct AxiomsDocument {
    pub all_pass: bool,
    pub results: Vec<AxiomResult>,
}

#[derive(Serialize)]
pub struct AxiomResult {
    pub vertex: String,
    pub result: String,
}
