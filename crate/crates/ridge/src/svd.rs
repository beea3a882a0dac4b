//! Node feature initialization via randomized truncated SVD of the signed
//! adjacency matrix.
//!
//! The adjacency never materializes densely: the range finder only needs
//! `A * X` products, which stream over the edge list (`A` is symmetric with
//! entries in {-1, +1}). A Gaussian sketch followed by QR re-orthonormalized
//! power iterations captures the dominant subspace; the small projected matrix
//! is decomposed exactly and lifted back. Feature rows are `U_d * Sigma_d` by
//! default (`U_d` alone is available as a config switch).
//!
//! Singular vectors are sign-normalized — the largest-magnitude entry of every
//! left singular vector is made positive — so features are unique and
//! reproducible across runs, not just up to column sign.

use crate::error::{Error, Result};
use crate::graph::SignedGraph;
use nalgebra::DMatrix;
use ndarray::Array2;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

/// Which product the feature rows carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureScale {
    /// `X = U_d * Sigma_d` (default): feature magnitude tracks spectral weight.
    USigma,
    /// Bare orthonormal columns `X = U_d`.
    U,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SvdConfig {
    /// Feature dimension `d`.
    pub dim: usize,
    /// Extra sketch columns beyond `d`.
    pub oversample: usize,
    /// QR-stabilized power iterations on the sketch.
    pub power_iters: usize,
    pub scale: FeatureScale,
    pub seed: u64,
}

impl SvdConfig {
    pub fn new(dim: usize, seed: u64) -> Self {
        SvdConfig {
            dim,
            oversample: 10,
            power_iters: 2,
            scale: FeatureScale::USigma,
            seed,
        }
    }
}

/// SVD-derived node features plus the spectrum that produced them.
#[derive(Debug, Clone)]
pub struct FeatureMatrix {
    /// `n x d`, row per node.
    pub x: Array2<f64>,
    /// Leading singular values, length `d`, non-increasing.
    pub singular_values: Vec<f64>,
    pub config: SvdConfig,
}

/// `Y = A * X` streamed over the edge list; `A` symmetric signed adjacency.
fn adj_mul(g: &SignedGraph, x: &DMatrix<f64>) -> DMatrix<f64> {
    let mut y = DMatrix::zeros(x.nrows(), x.ncols());
    for e in g.edges() {
        let s = e.sign as f64;
        let (u, v) = (e.u as usize, e.v as usize);
        for c in 0..x.ncols() {
            y[(u, c)] += s * x[(v, c)];
            y[(v, c)] += s * x[(u, c)];
        }
    }
    y
}

fn thin_q(y: DMatrix<f64>) -> DMatrix<f64> {
    let qr = y.qr();
    qr.q()
}

/// Full decomposition used by [`truncated_svd_features`] and by tests that
/// need the right factor: returns `(U, sigma, V)` with `A ~= U diag(sigma) V^T`.
pub fn truncated_svd(g: &SignedGraph, cfg: &SvdConfig) -> Result<(DMatrix<f64>, Vec<f64>, DMatrix<f64>)> {
    let n = g.node_count();
    if cfg.dim == 0 || cfg.dim > n {
        return Err(Error::InvalidInput(format!(
            "feature dim must lie in 1..={n}, got {}",
            cfg.dim
        )));
    }
    if g.edge_count() == 0 {
        // Zero operator: zero features, zero spectrum.
        return Ok((
            DMatrix::zeros(n, cfg.dim),
            vec![0.0; cfg.dim],
            DMatrix::zeros(n, cfg.dim),
        ));
    }
    let l = (cfg.dim + cfg.oversample).min(n);

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let omega = DMatrix::from_fn(n, l, |_, _| StandardNormal.sample(&mut rng));
    let mut q = thin_q(adj_mul(g, &omega));
    for _ in 0..cfg.power_iters {
        // A is symmetric, so one A-multiply per half-step; QR keeps it stable.
        q = thin_q(adj_mul(g, &q));
        q = thin_q(adj_mul(g, &q));
    }

    // B^T = A * Q  (n x l), so B = (A Q)^T = Q^T A.
    let bt = adj_mul(g, &q);
    let svd = bt.transpose().svd(true, true);
    let u_b = svd.u.as_ref().expect("left vectors requested");
    let v_t = svd.v_t.as_ref().expect("right vectors requested");

    let mut u = &q * u_b.columns(0, cfg.dim);
    let sigma: Vec<f64> = svd.singular_values.iter().take(cfg.dim).cloned().collect();
    let mut v = v_t.rows(0, cfg.dim).transpose();

    // Deterministic sign: largest-|.| entry of each left vector goes positive.
    for c in 0..cfg.dim {
        let col = u.column(c);
        let mut best = 0usize;
        for r in 1..n {
            if col[r].abs() > col[best].abs() {
                best = r;
            }
        }
        if col[best] < 0.0 {
            for r in 0..n {
                u[(r, c)] = -u[(r, c)];
            }
            for r in 0..v.nrows() {
                v[(r, c)] = -v[(r, c)];
            }
        }
    }
    Ok((u, sigma, v))
}

/// Spectral node features of a signed graph.
pub fn truncated_svd_features(g: &SignedGraph, cfg: &SvdConfig) -> Result<FeatureMatrix> {
    let (u, sigma, _) = truncated_svd(g, cfg)?;
    let n = g.node_count();
    let mut x = Array2::zeros((n, cfg.dim));
    for r in 0..n {
        for c in 0..cfg.dim {
            x[(r, c)] = match cfg.scale {
                FeatureScale::USigma => u[(r, c)] * sigma[c],
                FeatureScale::U => u[(r, c)],
            };
        }
    }
    Ok(FeatureMatrix {
        x,
        singular_values: sigma,
        config: *cfg,
    })
}
