//! Balance-aware signed graph convolutional encoder and its edge heads.
//!
//! Every node carries two states: a *balanced* vector `b` (information arriving
//! along walks with an even number of negative edges) and an *unbalanced*
//! vector `u` (odd count). Layer 1 reads raw features through positive and
//! negative neighborhoods separately; deeper layers route by balance theory —
//! a friend's balanced state and a foe's unbalanced state both feed `b`
//! (friend-of-friend, foe-of-foe), the two cross combinations feed `u`. The
//! final embedding is the concatenation `[b || u]`.
//!
//! Neighborhood terms are means over the *kept* neighbors of a (possibly
//! gated) edge set; nodes whose neighborhood is empty contribute zero vectors.
//! Aggregation compiles to [`IncidencePlan`]s so the same code serves the full
//! training graph, a sampled clean subgraph, and eval-mode thresholded graphs.
//!
//! The sampler that scores edges for denoising is *not* a separate network: it
//! runs these same weights (same storage) over the raw noisy graph, and its
//! scores are sigmoid-squashed endpoint dot products.

use crate::autodiff::{IncidencePlan, Tape, Tx};
use crate::error::{Error, Result};
use crate::graph::SignedGraph;
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncoderConfig {
    /// Input feature width `d`.
    pub in_dim: usize,
    /// Final embedding width `h` (= balanced + unbalanced halves). Even.
    pub hidden: usize,
    /// Convolution depth `L`.
    pub layers: usize,
}

impl EncoderConfig {
    pub fn validate(&self) -> Result<()> {
        if self.hidden == 0 || self.hidden % 2 != 0 {
            return Err(Error::InvalidInput(format!(
                "hidden width must be even and positive, got {}",
                self.hidden
            )));
        }
        if self.in_dim == 0 || self.layers == 0 {
            return Err(Error::InvalidInput(
                "encoder needs in_dim >= 1 and layers >= 1".into(),
            ));
        }
        Ok(())
    }

    fn half(&self) -> usize {
        self.hidden / 2
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Layer {
    w_b: Array2<f64>,
    bias_b: Array2<f64>,
    w_u: Array2<f64>,
    bias_u: Array2<f64>,
}

/// All trainable encoder weights, including the edge-representation map and
/// the sign classifier head.
#[derive(Debug, Clone, PartialEq)]
pub struct EncoderParams {
    config: EncoderConfig,
    layers: Vec<Layer>,
    /// `[z_i || z_j] -> r_e`, width `2h -> 2h`.
    w_pre: Array2<f64>,
    b_pre: Array2<f64>,
    /// `z_e -> class logits`, width `h -> 2` (index 0 = positive).
    w_cls: Array2<f64>,
    b_cls: Array2<f64>,
}

fn glorot(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Array2<f64> {
    let s = (6.0 / (rows + cols) as f64).sqrt();
    Array2::from_shape_fn((rows, cols), |_| rng.gen_range(-s..s))
}

impl EncoderParams {
    /// Glorot-uniform initialization, fully determined by the seed.
    pub fn init(config: EncoderConfig, seed: u64) -> Result<Self> {
        config.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let hb = config.half();
        let mut layers = Vec::with_capacity(config.layers);
        for l in 0..config.layers {
            // Layer 1 reads [neighbor-mean(x) || x]; deeper layers read
            // [mean(own) || mean(cross) || self], each hb wide.
            let in_w = if l == 0 { 2 * config.in_dim } else { 3 * hb };
            layers.push(Layer {
                w_b: glorot(in_w, hb, &mut rng),
                bias_b: Array2::zeros((1, hb)),
                w_u: glorot(in_w, hb, &mut rng),
                bias_u: Array2::zeros((1, hb)),
            });
        }
        let h = config.hidden;
        Ok(EncoderParams {
            config,
            layers,
            w_pre: glorot(2 * h, 2 * h, &mut rng),
            b_pre: Array2::zeros((1, 2 * h)),
            w_cls: glorot(h, 2, &mut rng),
            b_cls: Array2::zeros((1, 2)),
        })
    }

    pub fn config(&self) -> &EncoderConfig {
        &self.config
    }

    /// Visits every parameter tensor in a fixed, documented order:
    /// per layer (w_b, bias_b, w_u, bias_u), then w_pre, b_pre, w_cls, b_cls.
    /// The optimizer, checkpoints and gradient flattening all rely on it.
    pub fn visit(&self, mut f: impl FnMut(&Array2<f64>)) {
        for l in &self.layers {
            f(&l.w_b);
            f(&l.bias_b);
            f(&l.w_u);
            f(&l.bias_u);
        }
        f(&self.w_pre);
        f(&self.b_pre);
        f(&self.w_cls);
        f(&self.b_cls);
    }

    pub fn visit_mut(&mut self, mut f: impl FnMut(&mut Array2<f64>)) {
        for l in &mut self.layers {
            f(&mut l.w_b);
            f(&mut l.bias_b);
            f(&mut l.w_u);
            f(&mut l.bias_u);
        }
        f(&mut self.w_pre);
        f(&mut self.b_pre);
        f(&mut self.w_cls);
        f(&mut self.b_cls);
    }

    pub fn flat(&self) -> Vec<f64> {
        let mut v = Vec::new();
        self.visit(|t| v.extend(t.iter()));
        v
    }

    pub fn assign_flat(&mut self, flat: &[f64]) {
        let mut at = 0;
        self.visit_mut(|t| {
            let len = t.len();
            for (slot, &x) in t.iter_mut().zip(&flat[at..at + len]) {
                *slot = x;
            }
            at += len;
        });
        assert_eq!(at, flat.len(), "flat parameter length mismatch");
    }

    /// Registers every tensor on a tape as differentiable leaves.
    pub fn watch(&self, tape: &mut Tape) -> EncoderTx {
        let mut layers = Vec::with_capacity(self.layers.len());
        for l in &self.layers {
            layers.push(LayerTx {
                w_b: tape.leaf(l.w_b.clone()),
                bias_b: tape.leaf(l.bias_b.clone()),
                w_u: tape.leaf(l.w_u.clone()),
                bias_u: tape.leaf(l.bias_u.clone()),
            });
        }
        EncoderTx {
            config: self.config,
            layers,
            w_pre: tape.leaf(self.w_pre.clone()),
            b_pre: tape.leaf(self.b_pre.clone()),
            w_cls: tape.leaf(self.w_cls.clone()),
            b_cls: tape.leaf(self.b_cls.clone()),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct LayerTx {
    w_b: Tx,
    bias_b: Tx,
    w_u: Tx,
    bias_u: Tx,
}

/// Tape handles of all watched encoder weights for one forward/backward pass.
#[derive(Debug, Clone)]
pub struct EncoderTx {
    config: EncoderConfig,
    layers: Vec<LayerTx>,
    w_pre: Tx,
    b_pre: Tx,
    w_cls: Tx,
    b_cls: Tx,
}

impl EncoderTx {
    /// Leaves in the same order as [`EncoderParams::visit`].
    pub fn leaves(&self) -> Vec<Tx> {
        let mut v = Vec::new();
        for l in &self.layers {
            v.extend([l.w_b, l.bias_b, l.w_u, l.bias_u]);
        }
        v.extend([self.w_pre, self.b_pre, self.w_cls, self.b_cls]);
        v
    }
}

/// Positive- and negative-neighborhood aggregation schedules for one edge set,
/// with mean normalization by *kept* degree baked into the entry weights.
#[derive(Debug, Clone)]
pub struct SignedPlans {
    pub pos: Arc<IncidencePlan>,
    pub neg: Arc<IncidencePlan>,
}

impl SignedPlans {
    /// Plans over a full (ungated) graph.
    pub fn from_graph(g: &SignedGraph) -> Self {
        let gates = vec![1.0; g.edge_count()];
        Self::gated(g.node_count(), g.edges(), &gates)
    }

    /// Plans over a gated edge list. `gate[e] > 0.5` counts edge `e` as kept
    /// for mean normalization; every incidence still gets an entry (weighted
    /// by the kept-degree of its endpoint) so gate gradients flow even into
    /// currently-dropped edges of surviving neighborhoods.
    pub fn gated(n: usize, edges: &[crate::graph::SignedEdge], gate: &[f64]) -> Self {
        assert_eq!(edges.len(), gate.len());
        let mut kept_pos = vec![0usize; n];
        let mut kept_neg = vec![0usize; n];
        for (e, &g) in edges.iter().zip(gate) {
            if g > 0.5 {
                let k = if e.sign > 0 { &mut kept_pos } else { &mut kept_neg };
                k[e.u as usize] += 1;
                k[e.v as usize] += 1;
            }
        }
        let mut pos = IncidencePlan {
            out_rows: n,
            entries: Vec::new(),
        };
        let mut neg = IncidencePlan {
            out_rows: n,
            entries: Vec::new(),
        };
        for (ix, e) in edges.iter().enumerate() {
            let (plan, kept) = if e.sign > 0 {
                (&mut pos, &kept_pos)
            } else {
                (&mut neg, &kept_neg)
            };
            for (dst, src) in [(e.u, e.v), (e.v, e.u)] {
                let w = 1.0 / kept[dst as usize].max(1) as f64;
                plan.entries.push((dst, src, ix as u32, w));
            }
        }
        SignedPlans {
            pos: Arc::new(pos),
            neg: Arc::new(neg),
        }
    }
}

/// Runs the signed convolution stack; returns the `n x h` embedding `[b || u]`.
///
/// `gates` is the per-edge keep tensor matching the plan's gate indices, or
/// `None` for an ungated pass.
pub fn encode_nodes(
    tape: &mut Tape,
    params: &EncoderTx,
    features: Tx,
    plans: &SignedPlans,
    gates: Option<Tx>,
) -> Tx {
    let (_, d) = tape.shape(features);
    assert_eq!(d, params.config.in_dim, "feature width vs encoder in_dim");

    // Layer 1: positive and negative neighborhoods of the raw features.
    let agg_p = tape.incidence_agg(features, gates, plans.pos.clone());
    let agg_n = tape.incidence_agg(features, gates, plans.neg.clone());
    let in_b = tape.concat_cols(&[agg_p, features]);
    let in_u = tape.concat_cols(&[agg_n, features]);
    let l0 = &params.layers[0];
    let mut b = affine_tanh(tape, in_b, l0.w_b, l0.bias_b);
    let mut u = affine_tanh(tape, in_u, l0.w_u, l0.bias_u);

    // Deeper layers: balanced walks extend through friends, flip through foes.
    for l in &params.layers[1..] {
        let b_p = tape.incidence_agg(b, gates, plans.pos.clone());
        let u_n = tape.incidence_agg(u, gates, plans.neg.clone());
        let u_p = tape.incidence_agg(u, gates, plans.pos.clone());
        let b_n = tape.incidence_agg(b, gates, plans.neg.clone());
        let in_b = tape.concat_cols(&[b_p, u_n, b]);
        let in_u = tape.concat_cols(&[u_p, b_n, u]);
        b = affine_tanh(tape, in_b, l.w_b, l.bias_b);
        u = affine_tanh(tape, in_u, l.w_u, l.bias_u);
    }
    tape.concat_cols(&[b, u])
}

fn affine_tanh(tape: &mut Tape, x: Tx, w: Tx, bias: Tx) -> Tx {
    let h = tape.matmul(x, w);
    let h = tape.broadcast_add_row(h, bias);
    tape.tanh(h)
}

/// Variational edge representation: `mu` and `sigma` heads plus the sample
/// `z = mu + sigma * eps` (pass `eps = None` for the deterministic eval path
/// `z = mu`).
pub struct EdgeRepresentation {
    pub mu: Tx,
    pub sigma: Tx,
    pub z: Tx,
}

/// Builds edge representations for the pairs `(us[i], vs[i])`.
///
/// Each edge's raw vector is a learned map of the concatenated endpoint
/// embeddings (order-sensitive: `[z_u || z_v]`); its first half parameterizes
/// the mean, the softplus of its second half the spread.
pub fn edge_representation(
    tape: &mut Tape,
    params: &EncoderTx,
    z_nodes: Tx,
    us: Arc<Vec<u32>>,
    vs: Arc<Vec<u32>>,
    eps: Option<&Array2<f64>>,
) -> EdgeRepresentation {
    let h = params.config.hidden;
    let zu = tape.gather_rows(z_nodes, us);
    let zv = tape.gather_rows(z_nodes, vs);
    let cat = tape.concat_cols(&[zu, zv]);
    let r = tape.matmul(cat, params.w_pre);
    let r = tape.broadcast_add_row(r, params.b_pre);
    let mu = tape.slice_cols(r, 0, h);
    let sigma_raw = tape.slice_cols(r, h, 2 * h);
    let sigma = tape.softplus(sigma_raw);
    let z = match eps {
        Some(e) => {
            let ec = tape.constant(e.clone());
            let noise = tape.mul(sigma, ec);
            tape.add(mu, noise)
        }
        None => mu,
    };
    EdgeRepresentation { mu, sigma, z }
}

/// Sign logits for edge representations; column 0 is the positive class.
pub fn classify_edges(tape: &mut Tape, params: &EncoderTx, z_edges: Tx) -> Tx {
    let l = tape.matmul(z_edges, params.w_cls);
    tape.broadcast_add_row(l, params.b_cls)
}

/// Sampler keep-probabilities for the pairs `(us[i], vs[i])`: the sigmoid of
/// clamped endpoint dot products, one column. Runs on whatever embedding is
/// passed in — the sampler *is* the encoder applied to the noisy graph.
pub fn sampler_scores(
    tape: &mut Tape,
    z_nodes: Tx,
    us: Arc<Vec<u32>>,
    vs: Arc<Vec<u32>>,
) -> Tx {
    let zu = tape.gather_rows(z_nodes, us);
    let zv = tape.gather_rows(z_nodes, vs);
    let prod = tape.mul(zu, zv);
    let dot = tape.row_sum(prod);
    // +-30 keeps p, log(p) and log(1-p) all finite in f64.
    let dot = tape.clamp(dot, -30.0, 30.0);
    tape.sigmoid(dot)
}
