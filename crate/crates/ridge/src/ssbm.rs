//! Signed stochastic block model generator.
//!
//! Nodes are assigned to `k` communities whose sizes are linearly spaced with a
//! max/min ratio of `rho` and rounded to sum to `n`. Every unordered pair is
//! linked independently with probability `p`; intra-community edges are
//! positive, inter-community edges negative, and each realized sign is flipped
//! with probability `sign_flip`. All randomness is ChaCha-seeded, so a config
//! is a complete description of the sample.

use crate::error::{Error, Result};
use crate::graph::{SignedEdge, SignedGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SsbmConfig {
    pub n: usize,
    /// Number of communities.
    pub k: usize,
    /// Independent link probability for every node pair.
    pub p: f64,
    /// Ratio of largest to smallest community size.
    pub rho: f64,
    /// Probability of inverting a realized edge sign.
    pub sign_flip: f64,
    pub seed: u64,
}

/// A generated sample: the graph plus the ground-truth community of each node.
#[derive(Debug, Clone)]
pub struct SsbmSample {
    pub graph: SignedGraph,
    pub communities: Vec<u32>,
}

impl SsbmConfig {
    fn validate(&self) -> Result<()> {
        if self.k == 0 || self.k > self.n {
            return Err(Error::InvalidInput(format!(
                "need 1 <= k <= n, got k={} n={}",
                self.k, self.n
            )));
        }
        for (what, v, lo, hi) in [
            ("p", self.p, 0.0, 1.0),
            ("sign_flip", self.sign_flip, 0.0, 1.0),
        ] {
            if !(lo..=hi).contains(&v) {
                return Err(Error::OutOfRange {
                    what: if what == "p" { "link probability" } else { "sign flip probability" },
                    range: "[0, 1]",
                    got: v,
                });
            }
        }
        if self.rho < 1.0 {
            return Err(Error::OutOfRange {
                what: "size ratio rho",
                range: "[1, inf)",
                got: self.rho,
            });
        }
        Ok(())
    }
}

/// Community sizes: linearly spaced from `a` to `rho * a` with `a` chosen so
/// the exact sum is `n`, then rounded by largest fractional remainder.
pub fn community_sizes(n: usize, k: usize, rho: f64) -> Vec<usize> {
    if k == 1 {
        return vec![n];
    }
    let a = 2.0 * n as f64 / (k as f64 * (1.0 + rho));
    let exact: Vec<f64> = (0..k)
        .map(|i| a * (1.0 + (rho - 1.0) * i as f64 / (k - 1) as f64))
        .collect();
    let mut sizes: Vec<usize> = exact.iter().map(|&x| x.floor() as usize).collect();
    let mut short = n - sizes.iter().sum::<usize>();
    // Hand the leftover units to the largest fractional parts, index-stable.
    let mut by_frac: Vec<usize> = (0..k).collect();
    by_frac.sort_by(|&i, &j| {
        let (fi, fj) = (exact[i].fract(), exact[j].fract());
        fj.partial_cmp(&fi).unwrap().then(i.cmp(&j))
    });
    for &i in by_frac.iter().cycle() {
        if short == 0 {
            break;
        }
        sizes[i] += 1;
        short -= 1;
    }
    sizes
}

/// Draws one signed SBM sample.
///
/// Pair iteration is `u < v` in index order; each pair consumes one presence
/// draw and, if linked, one flip draw — so the edge *set* for a given seed is
/// identical across `sign_flip` values.
pub fn ssbm_generate(cfg: &SsbmConfig) -> Result<SsbmSample> {
    cfg.validate()?;
    let sizes = community_sizes(cfg.n, cfg.k, cfg.rho);
    let mut communities = Vec::with_capacity(cfg.n);
    for (c, &s) in sizes.iter().enumerate() {
        communities.extend(std::iter::repeat(c as u32).take(s));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut edges = Vec::new();
    for u in 0..cfg.n as u32 {
        for v in (u + 1)..cfg.n as u32 {
            // Explicit uniform draws (not gen_bool) so the stream advances by
            // exactly one draw per pair plus one per realized edge, for any
            // probability value including 0 and 1.
            if rng.gen::<f64>() < cfg.p {
                let mut sign: i8 = if communities[u as usize] == communities[v as usize] {
                    1
                } else {
                    -1
                };
                if rng.gen::<f64>() < cfg.sign_flip {
                    sign = -sign;
                }
                edges.push(SignedEdge { u, v, sign });
            }
        }
    }
    Ok(SsbmSample {
        graph: SignedGraph::from_canonical(cfg.n, edges),
        communities,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_for_the_benchmark_shape() {
        // n=500, k=5, rho=1.5 lands exactly on 80..120 in steps of 10.
        assert_eq!(community_sizes(500, 5, 1.5), vec![80, 90, 100, 110, 120]);
        // Rounding case worked by hand: a=8/3, exact [2.67, 3.33, 4.0].
        assert_eq!(community_sizes(10, 3, 1.5), vec![3, 3, 4]);
        assert_eq!(community_sizes(7, 1, 2.0), vec![7]);
    }

    #[test]
    fn sizes_always_sum_to_n_with_ratio_near_rho() {
        for (n, k, rho) in [(100, 5, 1.5), (501, 4, 2.0), (33, 7, 1.2), (1000, 9, 3.0)] {
            let s = community_sizes(n, k, rho);
            assert_eq!(s.iter().sum::<usize>(), n);
            assert!(s.windows(2).all(|w| w[0] <= w[1]));
            let ratio = *s.last().unwrap() as f64 / s[0] as f64;
            assert!((ratio - rho).abs() < 0.35, "ratio {ratio} vs rho {rho}");
        }
    }

    fn cfg(sign_flip: f64, seed: u64) -> SsbmConfig {
        SsbmConfig {
            n: 200,
            k: 4,
            p: 0.08,
            rho: 1.5,
            sign_flip,
            seed,
        }
    }

    #[test]
    fn clean_sample_signs_follow_communities() {
        let s = ssbm_generate(&cfg(0.0, 11)).unwrap();
        for e in s.graph.edges() {
            let intra = s.communities[e.u as usize] == s.communities[e.v as usize];
            assert_eq!(e.sign > 0, intra);
        }
    }

    #[test]
    fn same_seed_same_sample_and_flip_only_touches_signs() {
        let a = ssbm_generate(&cfg(0.0, 5)).unwrap();
        let b = ssbm_generate(&cfg(0.0, 5)).unwrap();
        assert_eq!(a.graph, b.graph);

        // sign_flip=1 inverts every sign but keeps the identical edge set.
        let c = ssbm_generate(&cfg(1.0, 5)).unwrap();
        assert_eq!(a.graph.edge_count(), c.graph.edge_count());
        for (x, y) in a.graph.edges().iter().zip(c.graph.edges()) {
            assert_eq!((x.u, x.v), (y.u, y.v));
            assert_eq!(x.sign, -y.sign);
        }

        let d = ssbm_generate(&cfg(0.0, 6)).unwrap();
        assert_ne!(a.graph, d.graph);
    }

    #[test]
    fn edge_count_tracks_pair_probability() {
        let s = ssbm_generate(&SsbmConfig {
            n: 300,
            k: 3,
            p: 0.05,
            rho: 1.5,
            sign_flip: 0.1,
            seed: 42,
        })
        .unwrap();
        let pairs: f64 = 300.0 * 299.0 / 2.0;
        let expect = 0.05 * pairs;
        let got = s.graph.edge_count() as f64;
        // 4 sigma of Binomial(pairs, p).
        let sigma = (pairs * 0.05 * 0.95).sqrt();
        assert!((got - expect).abs() < 4.0 * sigma, "{got} vs {expect}");
    }

    #[test]
    fn config_validation() {
        assert!(ssbm_generate(&SsbmConfig { k: 0, ..cfg(0.0, 1) }).is_err());
        assert!(ssbm_generate(&SsbmConfig { p: 1.5, ..cfg(0.0, 1) }).is_err());
        assert!(ssbm_generate(&SsbmConfig { rho: 0.5, ..cfg(0.0, 1) }).is_err());
        assert!(ssbm_generate(&SsbmConfig { sign_flip: -0.1, ..cfg(0.0, 1) }).is_err());
    }
}
