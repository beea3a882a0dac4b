//! Controlled perturbations of signed graphs: sign flips, link deletions and
//! link additions, each with an exact accounting receipt.
//!
//! Every perturbation changes an *exact* number of edges, `round(gamma * basis)`,
//! where the basis is the count the noise level is measured against:
//!
//! - flip / delete with polarity `all`: the full edge count `m`; polarity
//!   `positive` / `negative`: the count of edges with that sign;
//! - add (any polarity): always `m` — the added volume is measured against the
//!   original edge count, and polarity `all` splits additions between signs by
//!   the graph's positive ratio.
//!
//! Targets are chosen by a seeded shuffle-then-take, so replaying a
//! [`NoiseSpec`] reproduces the perturbation bit-for-bit. Additions are drawn
//! by rejection sampling over node pairs and never touch an existing edge.

use crate::error::{Error, Result};
use crate::graph::{SignedEdge, SignedGraph};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseKind {
    Flip,
    Delete,
    Add,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarity {
    All,
    Positive,
    Negative,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub kind: NoiseKind,
    pub polarity: Polarity,
    pub gamma: f64,
    pub seed: u64,
}

/// Node/edge tallies of one graph, as recorded in receipts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphStats {
    pub n: usize,
    pub m: usize,
    pub positive: usize,
    pub negative: usize,
}

impl GraphStats {
    pub fn of(g: &SignedGraph) -> Self {
        GraphStats {
            n: g.node_count(),
            m: g.edge_count(),
            positive: g.positive_count(),
            negative: g.negative_count(),
        }
    }
}

/// Exact record of what a perturbation did.
///
/// `changed_positive` / `changed_negative` split `changed` by sign: the prior
/// sign for flips and deletions, the inserted sign for additions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationReceipt {
    pub kind: NoiseKind,
    pub polarity: Polarity,
    pub gamma_requested: f64,
    pub seed: u64,
    /// Denominator of the noise-level identity.
    pub basis: usize,
    pub changed: usize,
    pub changed_positive: usize,
    pub changed_negative: usize,
    /// `changed / basis` (0 when the basis is empty).
    pub gamma_realized: f64,
    pub before: GraphStats,
    pub after: GraphStats,
}

impl PerturbationReceipt {
    /// Re-derives every receipt field from the actual graph pair and compares.
    ///
    /// This is the replay check: the count identity `changed = round(gamma *
    /// basis)`, the realized noise level, and the before/after arithmetic all
    /// have to hold, and the edge-set diff must match the recorded tallies.
    pub fn verify_against(&self, before: &SignedGraph, after: &SignedGraph) -> Result<()> {
        let fail = |field: &'static str, expected: i64, got: i64| {
            Err(Error::ManifestMismatch {
                field,
                expected,
                got,
            })
        };
        if GraphStats::of(before) != self.before {
            return fail("before stats", self.before.m as i64, before.edge_count() as i64);
        }
        if GraphStats::of(after) != self.after {
            return fail("after stats", self.after.m as i64, after.edge_count() as i64);
        }
        let want_changed = (self.gamma_requested * self.basis as f64).round() as usize;
        if self.changed != want_changed {
            return fail("changed", want_changed as i64, self.changed as i64);
        }
        let want_gamma = if self.basis == 0 {
            0.0
        } else {
            self.changed as f64 / self.basis as f64
        };
        if (self.gamma_realized - want_gamma).abs() > 1e-12 {
            return fail("gamma_realized", (want_gamma * 1e9) as i64, (self.gamma_realized * 1e9) as i64);
        }

        let b = before.sign_map();
        let a = after.sign_map();
        let (mut flips_p, mut flips_n) = (0usize, 0usize);
        let (mut dels_p, mut dels_n) = (0usize, 0usize);
        let (mut adds_p, mut adds_n) = (0usize, 0usize);
        for (&k, &s) in &b {
            match a.get(&k) {
                Some(&t) if t == s => {}
                Some(_) => {
                    if s > 0 {
                        flips_p += 1
                    } else {
                        flips_n += 1
                    }
                }
                None => {
                    if s > 0 {
                        dels_p += 1
                    } else {
                        dels_n += 1
                    }
                }
            }
        }
        for (&k, &t) in &a {
            if !b.contains_key(&k) {
                if t > 0 {
                    adds_p += 1
                } else {
                    adds_n += 1
                }
            }
        }
        let (got_p, got_n, spurious) = match self.kind {
            NoiseKind::Flip => (flips_p, flips_n, dels_p + dels_n + adds_p + adds_n),
            NoiseKind::Delete => (dels_p, dels_n, flips_p + flips_n + adds_p + adds_n),
            NoiseKind::Add => (adds_p, adds_n, flips_p + flips_n + dels_p + dels_n),
        };
        if spurious != 0 {
            return fail("untouched edges", 0, spurious as i64);
        }
        if got_p != self.changed_positive {
            return fail("changed_positive", self.changed_positive as i64, got_p as i64);
        }
        if got_n != self.changed_negative {
            return fail("changed_negative", self.changed_negative as i64, got_n as i64);
        }
        if got_p + got_n != self.changed {
            return fail("changed total", self.changed as i64, (got_p + got_n) as i64);
        }
        Ok(())
    }
}

fn check_gamma(gamma: f64, kind: NoiseKind) -> Result<()> {
    let ok = match kind {
        // Can't flip or delete more edges than the basis holds.
        NoiseKind::Flip | NoiseKind::Delete => (0.0..=1.0).contains(&gamma),
        NoiseKind::Add => gamma >= 0.0 && gamma.is_finite(),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            what: "noise level gamma",
            range: "[0, 1] (flip/delete) or [0, inf) (add)",
            got: gamma,
        })
    }
}

fn eligible(polarity: Polarity, sign: i8) -> bool {
    match polarity {
        Polarity::All => true,
        Polarity::Positive => sign > 0,
        Polarity::Negative => sign < 0,
    }
}

/// Seeded choice of `count` distinct indices out of `pool`.
fn pick(pool: Vec<usize>, count: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut pool = pool;
    pool.shuffle(rng);
    pool.truncate(count);
    pool
}

fn receipt(
    spec: &NoiseSpec,
    basis: usize,
    changed_positive: usize,
    changed_negative: usize,
    before: GraphStats,
    after: GraphStats,
) -> PerturbationReceipt {
    let changed = changed_positive + changed_negative;
    PerturbationReceipt {
        kind: spec.kind,
        polarity: spec.polarity,
        gamma_requested: spec.gamma,
        seed: spec.seed,
        basis,
        changed,
        changed_positive,
        changed_negative,
        gamma_realized: if basis == 0 {
            0.0
        } else {
            changed as f64 / basis as f64
        },
        before,
        after,
    }
}

/// Inverts the sign of `round(gamma * basis)` eligible edges.
pub fn flip_signs(
    g: &SignedGraph,
    gamma: f64,
    polarity: Polarity,
    seed: u64,
) -> Result<(SignedGraph, PerturbationReceipt)> {
    check_gamma(gamma, NoiseKind::Flip)?;
    let spec = NoiseSpec {
        kind: NoiseKind::Flip,
        polarity,
        gamma,
        seed,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool: Vec<usize> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| eligible(polarity, e.sign))
        .map(|(i, _)| i)
        .collect();
    let basis = pool.len();
    let count = (gamma * basis as f64).round() as usize;
    let targets: HashSet<usize> = pick(pool, count, &mut rng).into_iter().collect();

    let mut edges = g.edges().to_vec();
    let (mut cp, mut cn) = (0usize, 0usize);
    for (i, e) in edges.iter_mut().enumerate() {
        if targets.contains(&i) {
            if e.sign > 0 {
                cp += 1
            } else {
                cn += 1
            }
            e.sign = -e.sign;
        }
    }
    let before = GraphStats::of(g);
    let out = SignedGraph::from_canonical(g.node_count(), edges);
    let after = GraphStats::of(&out);
    Ok((out, receipt(&spec, basis, cp, cn, before, after)))
}

/// Removes `round(gamma * basis)` eligible edges.
pub fn delete_links(
    g: &SignedGraph,
    gamma: f64,
    polarity: Polarity,
    seed: u64,
) -> Result<(SignedGraph, PerturbationReceipt)> {
    check_gamma(gamma, NoiseKind::Delete)?;
    let spec = NoiseSpec {
        kind: NoiseKind::Delete,
        polarity,
        gamma,
        seed,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool: Vec<usize> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| eligible(polarity, e.sign))
        .map(|(i, _)| i)
        .collect();
    let basis = pool.len();
    let count = (gamma * basis as f64).round() as usize;
    let targets: HashSet<usize> = pick(pool, count, &mut rng).into_iter().collect();

    let (mut cp, mut cn) = (0usize, 0usize);
    let mut kept = Vec::with_capacity(g.edge_count() - count);
    for (i, e) in g.edges().iter().enumerate() {
        if targets.contains(&i) {
            if e.sign > 0 {
                cp += 1
            } else {
                cn += 1
            }
        } else {
            kept.push(*e);
        }
    }
    let before = GraphStats::of(g);
    let out = SignedGraph::from_canonical(g.node_count(), kept);
    let after = GraphStats::of(&out);
    Ok((out, receipt(&spec, basis, cp, cn, before, after)))
}

/// Inserts `round(gamma * m)` brand-new edges (never over an existing pair).
///
/// Polarity `all` makes `round(count * positive_ratio)` of them positive and
/// the rest negative; `positive` / `negative` inserts only that sign. New
/// pairs come from uniform rejection sampling over non-edges.
pub fn add_links(
    g: &SignedGraph,
    gamma: f64,
    polarity: Polarity,
    seed: u64,
) -> Result<(SignedGraph, PerturbationReceipt)> {
    check_gamma(gamma, NoiseKind::Add)?;
    let spec = NoiseSpec {
        kind: NoiseKind::Add,
        polarity,
        gamma,
        seed,
    };
    let n = g.node_count();
    let basis = g.edge_count();
    let count = (gamma * basis as f64).round() as usize;
    let capacity = n * (n - 1) / 2 - basis;
    if count > capacity {
        return Err(Error::InvalidInput(format!(
            "cannot add {count} edges: only {capacity} free node pairs"
        )));
    }
    let want_pos = match polarity {
        Polarity::All => (count as f64 * g.positive_ratio()).round() as usize,
        Polarity::Positive => count,
        Polarity::Negative => 0,
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut occupied: HashSet<(u32, u32)> =
        g.edges().iter().map(|e| (e.u, e.v)).collect();
    let mut edges = g.edges().to_vec();
    for i in 0..count {
        let (u, v) = loop {
            let a = rng.gen_range(0..n as u32);
            let b = rng.gen_range(0..n as u32);
            if a == b {
                continue;
            }
            let key = (a.min(b), a.max(b));
            if occupied.insert(key) {
                break key;
            }
        };
        let sign = if i < want_pos { 1 } else { -1 };
        edges.push(SignedEdge { u, v, sign });
    }
    edges.sort_by_key(|e| (e.u, e.v));
    let before = GraphStats::of(g);
    let out = SignedGraph::from_canonical(n, edges);
    let after = GraphStats::of(&out);
    Ok((out, receipt(&spec, basis, want_pos, count - want_pos, before, after)))
}

/// Applies whichever perturbation the spec names.
pub fn perturb(g: &SignedGraph, spec: &NoiseSpec) -> Result<(SignedGraph, PerturbationReceipt)> {
    match spec.kind {
        NoiseKind::Flip => flip_signs(g, spec.gamma, spec.polarity, spec.seed),
        NoiseKind::Delete => delete_links(g, spec.gamma, spec.polarity, spec.seed),
        NoiseKind::Add => add_links(g, spec.gamma, spec.polarity, spec.seed),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// 10 edges, 7 positive / 3 negative, on 8 nodes.
    fn toy() -> SignedGraph {
        SignedGraph::from_edge_list(
            8,
            &[
                (0, 1, 1),
                (0, 2, 1),
                (1, 2, -1),
                (1, 3, 1),
                (2, 4, 1),
                (3, 4, -1),
                (4, 5, 1),
                (5, 6, 1),
                (5, 7, -1),
                (6, 7, 1),
            ],
        )
        .unwrap()
    }

    /// A line graph with prescribed m and positive count, for count arithmetic
    /// at benchmark scale without bundling any dataset.
    fn line_graph(m: usize, positive: usize) -> SignedGraph {
        let edges: Vec<SignedEdge> = (0..m)
            .map(|i| SignedEdge {
                u: i as u32,
                v: i as u32 + 1,
                sign: if i < positive { 1 } else { -1 },
            })
            .collect();
        SignedGraph::from_canonical(m + 1, edges)
    }

    #[test]
    fn flip_counts_by_hand() {
        let g = toy();
        let (out, r) = flip_signs(&g, 0.2, Polarity::All, 3).unwrap();
        assert_eq!(r.basis, 10);
        assert_eq!(r.changed, 2); // round(0.2 * 10)
        assert_eq!(out.edge_count(), 10);
        assert!((r.gamma_realized - 0.2).abs() < 1e-12);
        r.verify_against(&g, &out).unwrap();

        // Polarity-restricted flip measures gamma against that sign's count.
        let (out, r) = flip_signs(&g, 0.25, Polarity::Negative, 3).unwrap();
        assert_eq!((r.basis, r.changed), (3, 1)); // round(0.25 * 3)
        assert_eq!(out.positive_count(), 8);
        r.verify_against(&g, &out).unwrap();
    }

    #[test]
    fn delete_counts_by_hand() {
        let g = toy();
        let (out, r) = delete_links(&g, 0.4, Polarity::All, 5).unwrap();
        assert_eq!(r.changed, 4);
        assert_eq!(out.edge_count(), 6);
        r.verify_against(&g, &out).unwrap();

        let (out, r) = delete_links(&g, 0.4, Polarity::Positive, 5).unwrap();
        assert_eq!((r.basis, r.changed), (7, 3)); // round(0.4 * 7)
        assert_eq!(out.positive_count(), 4);
        assert_eq!(out.negative_count(), 3);
        r.verify_against(&g, &out).unwrap();
    }

    #[test]
    fn add_counts_by_hand() {
        let g = toy();
        // round(0.25 * 10) = 3 additions; positive split round(3 * 0.7) = 2.
        let (out, r) = add_links(&g, 0.25, Polarity::All, 9).unwrap();
        assert_eq!(r.changed, 3);
        assert_eq!((r.changed_positive, r.changed_negative), (2, 1));
        assert_eq!(out.edge_count(), 13);
        r.verify_against(&g, &out).unwrap();

        let (out, r) = add_links(&g, 0.2, Polarity::Negative, 9).unwrap();
        assert_eq!((r.changed_positive, r.changed_negative), (0, 2));
        assert_eq!(out.negative_count(), 5);
        r.verify_against(&g, &out).unwrap();
    }

    /// Count arithmetic at the scale of a real rating network: 14,145 edges of
    /// which 12,729 positive; adding 20% must insert 2,829 edges split
    /// 2,546 positive / 283 negative by the positive ratio.
    #[test]
    fn add_split_at_benchmark_scale() {
        let g = line_graph(14_145, 12_729);
        let (out, r) = add_links(&g, 0.2, Polarity::All, 1).unwrap();
        assert_eq!(r.changed, 2_829);
        assert_eq!(r.changed_positive, 2_546);
        assert_eq!(r.changed_negative, 283);
        assert_eq!(out.edge_count(), 16_974);
        r.verify_against(&g, &out).unwrap();

        // Deleting 10% of positive links measures against the positive count.
        let (_, r) = delete_links(&g, 0.1, Polarity::Positive, 1).unwrap();
        assert_eq!((r.basis, r.changed), (12_729, 1_273));
    }

    #[test]
    fn additions_never_touch_existing_pairs() {
        let g = toy();
        let before = g.sign_map();
        let (out, _) = add_links(&g, 1.5, Polarity::All, 2).unwrap();
        for e in out.edges() {
            if let Some(&s) = before.get(&(e.u, e.v)) {
                assert_eq!(s, e.sign, "existing edge modified");
            }
        }
        assert!(add_links(&g, 10_000.0, Polarity::All, 2).is_err(), "over capacity");
    }

    #[test]
    fn determinism_and_gamma_zero() {
        let g = toy();
        for kind in [NoiseKind::Flip, NoiseKind::Delete, NoiseKind::Add] {
            let spec = NoiseSpec {
                kind,
                polarity: Polarity::All,
                gamma: 0.3,
                seed: 77,
            };
            let (a, ra) = perturb(&g, &spec).unwrap();
            let (b, rb) = perturb(&g, &spec).unwrap();
            assert_eq!(a, b);
            assert_eq!(ra, rb);
            let (c, _) = perturb(&g, &NoiseSpec { seed: 78, ..spec }).unwrap();
            assert_ne!(a, c, "{kind:?} ignored the seed");

            let (d, rd) = perturb(&g, &NoiseSpec { gamma: 0.0, ..spec }).unwrap();
            assert_eq!(&d, &g);
            assert_eq!(rd.changed, 0);
        }
    }

    #[test]
    fn gamma_validation() {
        let g = toy();
        assert!(flip_signs(&g, 1.2, Polarity::All, 0).is_err());
        assert!(flip_signs(&g, -0.1, Polarity::All, 0).is_err());
        assert!(delete_links(&g, f64::NAN, Polarity::All, 0).is_err());
        assert!(add_links(&g, f64::INFINITY, Polarity::All, 0).is_err());
    }

    proptest! {
        // Receipts replay exactly for random graphs, specs and noise levels.
        #[test]
        fn receipts_replay(
            seed in any::<u64>(),
            gamma in prop::sample::select(vec![0.1f64, 0.2, 0.25, 0.4]),
            kind_ix in 0usize..3,
            pol_ix in 0usize..3,
        ) {
            use rand::Rng as _;
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xbeef);
            let n = rng.gen_range(6..40);
            let mut triples = Vec::new();
            for u in 0..n as u32 {
                for v in (u + 1)..n as u32 {
                    if rng.gen_bool(0.3) {
                        triples.push((u, v, if rng.gen_bool(0.6) { 1i8 } else { -1 }));
                    }
                }
            }
            prop_assume!(triples.len() >= 4);
            let g = SignedGraph::from_edge_list(n, &triples).unwrap();
            let spec = NoiseSpec {
                kind: [NoiseKind::Flip, NoiseKind::Delete, NoiseKind::Add][kind_ix],
                polarity: [Polarity::All, Polarity::Positive, Polarity::Negative][pol_ix],
                gamma,
                seed,
            };
            let (out, r) = perturb(&g, &spec).unwrap();
            prop_assert!(r.verify_against(&g, &out).is_ok());
        }
    }
}
