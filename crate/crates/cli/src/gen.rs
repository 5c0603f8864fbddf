//! Seeded random instance documents, byte-stable across runs and platforms.
//!
//! Stability contract: all randomness comes from `ChaCha8Rng::seed_from_u64`
//! through raw `next_u32` draws reduced by modulo, in a fixed order — first
//! the edge endpoints (tail, then head, per edge), then per vertex in id
//! order a family roll followed by that family's own draws. Nothing else
//! consumes the stream, so equal parameters give equal documents forever.

use std::collections::BTreeMap;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::doc::{BlockSpec, EdgeDocument, InstanceDocument, MatroidSpec, DOCUMENT_VERSION};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Family {
    Free,
    Uniform,
    Partition,
    Gf2,
    Graphic,
}

impl Family {
    pub fn parse(name: &str) -> Option<Family> {
        match name {
            "free" => Some(Family::Free),
            "uniform" => Some(Family::Uniform),
            "partition" => Some(Family::Partition),
            "gf2" => Some(Family::Gf2),
            "graphic" => Some(Family::Graphic),
            _ => None,
        }
    }
}

pub struct GenParams {
    pub seed: u64,
    pub vertices: u32,
    pub edges: u32,
    pub families: Vec<Family>,
}

fn pick(rng: &mut ChaCha8Rng, bound: u32) -> u32 {
    debug_assert!(bound > 0);
    rng.next_u32() % bound
}

/// Vertex 0 is "s", the last vertex is "t", the rest are "v1", "v2", …
fn names(n: u32) -> Vec<String> {
    (0..n)
        .map(|i| {
            if i == 0 {
                "s".to_string()
            } else if i == n - 1 {
                "t".to_string()
            } else {
                format!("v{i}")
            }
        })
        .collect()
}

pub fn generate(p: &GenParams) -> InstanceDocument {
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let n = p.vertices;
    let names = names(n);

    // Self-loop-free endpoints: the raw head ranges over n-1 values and is
    // skewed past the tail.
    let mut edges = Vec::new();
    for id in 0..p.edges {
        let tail = pick(&mut rng, n);
        let raw = pick(&mut rng, n - 1);
        let head = raw + u32::from(raw >= tail);
        edges.push(EdgeDocument {
            id,
            tail: names[tail as usize].clone(),
            head: names[head as usize].clone(),
        });
    }

    let mut in_edges: Vec<Vec<u32>> = vec![Vec::new(); n as usize];
    for e in &edges {
        let head = names.iter().position(|x| *x == e.head).expect("generated name");
        in_edges[head].push(e.id);
    }

    // Roughly 30% of vertices draw a family from the menu; the rest stay
    // free. GF(2) columns use dimension ≤ 4 to make dependencies frequent.
    let mut matroids = BTreeMap::new();
    for v in 0..n as usize {
        let roll = pick(&mut rng, 10);
        if roll >= 3 || p.families.is_empty() {
            continue;
        }
        let family = p.families[pick(&mut rng, p.families.len() as u32) as usize];
        let ground = &in_edges[v];
        let k = ground.len() as u32;
        let spec = match family {
            Family::Free => None,
            Family::Uniform => {
                Some(MatroidSpec::Uniform { rank: pick(&mut rng, k + 1) as usize })
            }
            Family::Partition => {
                if k == 0 {
                    None
                } else {
                    let split = pick(&mut rng, k + 1) as usize;
                    let mut blocks = Vec::new();
                    for half in [&ground[..split], &ground[split..]] {
                        if !half.is_empty() {
                            blocks.push(BlockSpec {
                                edges: half.to_vec(),
                                cap: pick(&mut rng, 3) as usize,
                            });
                        }
                    }
                    Some(MatroidSpec::Partition { blocks })
                }
            }
            Family::Gf2 => {
                let dim = 1 + pick(&mut rng, 4);
                let mut columns = BTreeMap::new();
                for &e in ground {
                    let value = pick(&mut rng, 1 << dim);
                    let bits: String = (0..dim)
                        .map(|i| if value >> i & 1 == 1 { '1' } else { '0' })
                        .collect();
                    columns.insert(e.to_string(), bits);
                }
                Some(MatroidSpec::Gf2 { columns })
            }
            Family::Graphic => {
                let nodes = 2 + pick(&mut rng, 3);
                let mut aux_edges = BTreeMap::new();
                for &e in ground {
                    let u = pick(&mut rng, nodes);
                    let w = pick(&mut rng, nodes);
                    aux_edges.insert(e.to_string(), (u, w));
                }
                Some(MatroidSpec::Graphic { aux_edges })
            }
        };
        if let Some(spec) = spec {
            matroids.insert(names[v].clone(), spec);
        }
    }

    InstanceDocument {
        version: DOCUMENT_VERSION,
        vertices: names.clone(),
        s: names[0].clone(),
        t: names[n as usize - 1].clone(),
        edges,
        matroids,
    }
}
