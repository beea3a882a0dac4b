//! Signed graph core: an undirected simple graph whose edges carry a sign in
//! {-1, +1}, plus the seeded train/test edge split used by every experiment.
//!
//! Edges are stored canonically (`u < v`, sorted lexicographically), which makes
//! serialized edge lists and downstream RNG consumption deterministic.

use crate::error::{Error, Result};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// One undirected signed edge with canonical endpoint order `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignedEdge {
    pub u: u32,
    pub v: u32,
    /// -1 or +1.
    pub sign: i8,
}

impl SignedEdge {
    /// Canonicalizes endpoint order; signs are validated by the graph builders.
    pub fn new(a: u32, b: u32, sign: i8) -> Self {
        let (u, v) = if a <= b { (a, b) } else { (b, a) };
        SignedEdge { u, v, sign }
    }
}

/// Undirected simple signed graph over nodes `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedGraph {
    n: usize,
    edges: Vec<SignedEdge>,
}

/// Per-node adjacency view, split by sign. Neighbor lists are sorted.
#[derive(Debug, Clone)]
pub struct Adjacency {
    pub pos: Vec<Vec<u32>>,
    pub neg: Vec<Vec<u32>>,
}

impl SignedGraph {
    /// Builds a graph from `(u, v, sign)` triples.
    ///
    /// Validates that ids lie in `0..n`, there are no self-loops, every sign is
    /// -1 or +1, and no unordered pair appears twice. Edges are canonicalized
    /// and sorted.
    pub fn from_edge_list(n: usize, triples: &[(u32, u32, i8)]) -> Result<Self> {
        let mut edges = Vec::with_capacity(triples.len());
        for &(a, b, s) in triples {
            if a as usize >= n {
                return Err(Error::NodeOutOfRange { id: a, n });
            }
            if b as usize >= n {
                return Err(Error::NodeOutOfRange { id: b, n });
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            if s != 1 && s != -1 {
                return Err(Error::BadSign(s as i32));
            }
            edges.push(SignedEdge::new(a, b, s));
        }
        edges.sort_by_key(|e| (e.u, e.v));
        for w in edges.windows(2) {
            if w[0].u == w[1].u && w[0].v == w[1].v {
                return Err(Error::DuplicateEdge {
                    u: w[0].u,
                    v: w[0].v,
                });
            }
        }
        Ok(SignedGraph { n, edges })
    }

    /// Builder for edges already known to be canonical, sorted and unique
    /// (generator/perturbation output). Debug-asserts the invariant.
    pub(crate) fn from_canonical(n: usize, edges: Vec<SignedEdge>) -> Self {
        debug_assert!(edges
            .windows(2)
            .all(|w| (w[0].u, w[0].v) < (w[1].u, w[1].v)));
        debug_assert!(edges.iter().all(|e| e.u < e.v && (e.v as usize) < n));
        SignedGraph { n, edges }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[SignedEdge] {
        &self.edges
    }

    pub fn positive_count(&self) -> usize {
        self.edges.iter().filter(|e| e.sign > 0).count()
    }

    pub fn negative_count(&self) -> usize {
        self.edges.len() - self.positive_count()
    }

    /// Fraction of positive edges, `|E+| / m`. Zero for an empty graph.
    pub fn positive_ratio(&self) -> f64 {
        if self.edges.is_empty() {
            0.0
        } else {
            self.positive_count() as f64 / self.edges.len() as f64
        }
    }

    /// Sorted sign-split neighbor lists for every node.
    pub fn adjacency(&self) -> Adjacency {
        let mut pos = vec![Vec::new(); self.n];
        let mut neg = vec![Vec::new(); self.n];
        for e in &self.edges {
            let (lists, _) = if e.sign > 0 {
                (&mut pos, ())
            } else {
                (&mut neg, ())
            };
            lists[e.u as usize].push(e.v);
            lists[e.v as usize].push(e.u);
        }
        // Canonical edge order inserts neighbors of u in increasing v, but v's
        // list sees u out of order; sort both for binary-search lookups.
        for l in pos.iter_mut().chain(neg.iter_mut()) {
            l.sort_unstable();
        }
        Adjacency { pos, neg }
    }

    /// Membership lookup table keyed by canonical pair, value is the sign.
    pub fn sign_map(&self) -> std::collections::HashMap<(u32, u32), i8> {
        self.edges.iter().map(|e| ((e.u, e.v), e.sign)).collect()
    }
}

/// A seeded train/test partition of a graph's edges.
///
/// The training side is itself a [`SignedGraph`] (structure *and* labels for
/// fitting); the test side keeps only held-out labeled pairs.
#[derive(Debug, Clone)]
pub struct EdgeSplit {
    pub train: SignedGraph,
    pub test: Vec<SignedEdge>,
    pub ratio: f64,
    pub seed: u64,
}

/// Randomly partitions edges into train/test with `|train| = round(ratio * m)`.
///
/// The shuffle is ChaCha-seeded; both sides come back in canonical sorted
/// order, so the split is reproducible byte-for-byte.
pub fn split_edges(g: &SignedGraph, ratio: f64, seed: u64) -> Result<EdgeSplit> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::OutOfRange {
            what: "split ratio",
            range: "(0, 1)",
            got: ratio,
        });
    }
    let m = g.edge_count();
    if m < 2 {
        return Err(Error::DegenerateGraph {
            action: "split edges",
            missing: "at least two edges",
        });
    }
    let train_m = ((ratio * m as f64).round() as usize).clamp(1, m - 1);
    let mut idx: Vec<usize> = (0..m).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    idx.shuffle(&mut rng);
    let mut train: Vec<SignedEdge> = idx[..train_m].iter().map(|&i| g.edges[i]).collect();
    let mut test: Vec<SignedEdge> = idx[train_m..].iter().map(|&i| g.edges[i]).collect();
    train.sort_by_key(|e| (e.u, e.v));
    test.sort_by_key(|e| (e.u, e.v));
    Ok(EdgeSplit {
        train: SignedGraph::from_canonical(g.n, train),
        test,
        ratio,
        seed,
    })
}
