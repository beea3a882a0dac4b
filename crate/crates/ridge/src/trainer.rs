//! Joint input/target denoising under an information-bottleneck objective.
//!
//! Each epoch rebuilds a fresh gradient tape and optimizes three terms:
//!
//! * a classification loss over a *sampled* subset of training labels,
//!   averaged over the labels the sampler currently trusts;
//! * a Bernoulli KL pulling the per-edge keep probabilities toward a global
//!   keep-rate prior `tau`, which prices structural edits of the graph;
//! * a Gaussian KL pulling the variational edge representations toward a
//!   standard normal, which bottlenecks how much of the (noisy) graph each
//!   edge code can carry.
//!
//! The same encoder weights drive both the sampler pass (over the full noisy
//! training graph) and the main pass (over the sampled clean subgraph), so
//! cleaning pressure and classification pressure shape one set of parameters.
//! Discrete keep/drop decisions ride a straight-through estimator; input
//! features are blended against a per-epoch column bootstrap through a
//! learnable mask. At eval time every stochastic piece collapses to its
//! deterministic counterpart (hard mask, thresholded edges, mean codes).

use crate::autodiff::{SteMode, Tape, Tx};
use crate::encoder::{
    classify_edges, edge_representation, encode_nodes, sampler_scores, EncoderConfig,
    EncoderParams, EncoderTx, SignedPlans,
};
use crate::error::{Error, Result};
use crate::graph::{SignedEdge, SignedGraph};
use ndarray::{Array2, Axis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Initial mask logit: sigmoid(2) ~ 0.88, so training starts near the
/// identity blend and eval's hard threshold starts at "keep everything".
const MASK_INIT_LOGIT: f64 = 2.0;

/// Which parts of the objective are active.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// Full objective: classification + both KL terms.
    Full,
    /// Drop the keep-rate prior on the sampler (alpha = 0).
    WithoutKlY,
    /// Drop the representation bottleneck (beta = 0).
    WithoutKlG,
    /// Drop both KL terms; sampling machinery still runs.
    WithoutBoth,
    /// Plain signed GCN: no mask, no sampling, deterministic codes,
    /// cross-entropy over every training label.
    Baseline,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RidgeConfig {
    /// Node embedding width (balanced + unbalanced halves). Even.
    pub hidden: usize,
    /// Encoder depth.
    pub layers: usize,
    /// Keep-rate prior for the edge sampler, in (0, 1).
    pub tau: f64,
    /// Weight of the sampler keep-rate KL.
    pub alpha: f64,
    /// Weight of the edge-representation KL.
    pub beta: f64,
    /// Adam step size.
    pub lr: f64,
    pub epochs: usize,
    pub seed: u64,
    pub variant: Variant,
}

impl Default for RidgeConfig {
    fn default() -> Self {
        RidgeConfig {
            hidden: 64,
            layers: 4,
            tau: 0.8,
            alpha: 1.0,
            beta: 0.001,
            lr: 0.01,
            epochs: 1000,
            seed: 0,
            variant: Variant::Full,
        }
    }
}

impl RidgeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.hidden == 0 || self.hidden % 2 != 0 {
            return Err(Error::InvalidInput(format!(
                "hidden must be even and positive, got {}",
                self.hidden
            )));
        }
        if self.layers == 0 || self.epochs == 0 {
            return Err(Error::InvalidInput("layers and epochs must be >= 1".into()));
        }
        if !(self.tau > 0.0 && self.tau < 1.0) {
            return Err(Error::OutOfRange {
                what: "tau",
                range: "(0, 1)",
                got: self.tau,
            });
        }
        for (name, v) in [("alpha", self.alpha), ("beta", self.beta)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::OutOfRange {
                    what: name,
                    range: "[0, inf)",
                    got: v,
                });
            }
        }
        if !(self.lr.is_finite() && self.lr > 0.0) {
            return Err(Error::OutOfRange {
                what: "lr",
                range: "(0, inf)",
                got: self.lr,
            });
        }
        Ok(())
    }

    fn eff_alpha(&self) -> f64 {
        match self.variant {
            Variant::Full | Variant::WithoutKlG => self.alpha,
            _ => 0.0,
        }
    }

    fn eff_beta(&self) -> f64 {
        match self.variant {
            Variant::Full | Variant::WithoutKlY => self.beta,
            _ => 0.0,
        }
    }
}

/// Loss-term values recorded once per epoch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpochTrace {
    pub epoch: usize,
    /// Weighted objective actually optimized.
    pub total: f64,
    pub cls: f64,
    pub kl_y: f64,
    pub kl_g: f64,
    /// Training labels the sampler kept this epoch.
    pub kept_labels: usize,
}

/// A trained model: weights, the learned feature mask, and its loss history.
#[derive(Debug, Clone)]
pub struct RidgeModel {
    pub config: RidgeConfig,
    pub params: EncoderParams,
    /// Per-entry feature keep logits, `n x d`.
    pub mask_logits: Array2<f64>,
    pub trace: Vec<EpochTrace>,
}

/// Immutable per-fit tensors derived from the training graph.
struct TrainSet {
    edges: Vec<SignedEdge>,
    us: Arc<Vec<u32>>,
    vs: Arc<Vec<u32>>,
    /// `m x 1` indicator of the positive class per training edge.
    ind_pos: Array2<f64>,
    ind_neg: Array2<f64>,
    plans_full: SignedPlans,
    n: usize,
    m: usize,
}

impl TrainSet {
    fn build(g: &SignedGraph) -> TrainSet {
        let edges = g.edges().to_vec();
        let m = edges.len();
        let us = Arc::new(edges.iter().map(|e| e.u).collect::<Vec<_>>());
        let vs = Arc::new(edges.iter().map(|e| e.v).collect::<Vec<_>>());
        let mut ind_pos = Array2::zeros((m, 1));
        let mut ind_neg = Array2::zeros((m, 1));
        for (i, e) in edges.iter().enumerate() {
            if e.sign > 0 {
                ind_pos[(i, 0)] = 1.0;
            } else {
                ind_neg[(i, 0)] = 1.0;
            }
        }
        TrainSet {
            us,
            vs,
            ind_pos,
            ind_neg,
            plans_full: SignedPlans::from_graph(g),
            n: g.node_count(),
            m,
            edges,
        }
    }
}

/// Stochastic ingredients drawn once per epoch, in a fixed order, so a
/// training step is a deterministic function of (parameters, noise).
struct EpochNoise {
    /// Per-column row bootstrap of the features, the mask's "replaced by"
    /// reference.
    x_r: Array2<f64>,
    draws_a: Vec<f64>,
    draws_y: Vec<f64>,
    /// Reparameterization noise, `m x hidden`.
    eps: Array2<f64>,
}

impl EpochNoise {
    fn sample(rng: &mut ChaCha8Rng, x: &Array2<f64>, m: usize, hidden: usize) -> EpochNoise {
        let (n, d) = x.dim();
        let mut x_r = Array2::zeros((n, d));
        for j in 0..d {
            for i in 0..n {
                x_r[(i, j)] = x[(rng.gen_range(0..n), j)];
            }
        }
        let draws_a = (0..m).map(|_| rng.gen::<f64>()).collect();
        let draws_y = (0..m).map(|_| rng.gen::<f64>()).collect();
        let eps = Array2::from_shape_fn((m, hidden), |_| rng.sample(StandardNormal));
        EpochNoise {
            x_r,
            draws_a,
            draws_y,
            eps,
        }
    }
}

/// Tape handles of the per-epoch objective and its recorded pieces.
struct LossParts {
    total: Tx,
    cls: Tx,
    kl_y: Option<Tx>,
    kl_g: Option<Tx>,
    kept_labels: usize,
}

/// Blend true features against the bootstrap reference through the sigmoid
/// mask: masked dimensions fade toward the reference column distribution.
/// The mask is one logit per feature dimension (a `1 x d` row), shared by
/// every node, broadcast up to `n x d` through a ones-column product.
fn masked_features(tape: &mut Tape, mask_tx: Tx, x: &Array2<f64>, x_r: &Array2<f64>) -> Tx {
    let xc = tape.constant(x.clone());
    let xr = tape.constant(x_r.clone());
    let m_row = tape.sigmoid(mask_tx);
    let ones = tape.constant(Array2::ones((x.nrows(), 1)));
    let m = tape.matmul(ones, m_row);
    let diff = tape.sub(xc, xr);
    let keep = tape.mul(diff, m);
    tape.add(xr, keep)
}

/// Per-edge cross entropy of two-class logits, clamped for stability.
/// Column 0 is the positive class.
fn cross_entropy_rows(tape: &mut Tape, logits: Tx, ind_pos: &Array2<f64>, ind_neg: &Array2<f64>) -> Tx {
    let l = tape.clamp(logits, -20.0, 20.0);
    let lp = tape.slice_cols(l, 0, 1);
    let ln = tape.slice_cols(l, 1, 2);
    let ep = tape.exp(lp);
    let en = tape.exp(ln);
    let se = tape.add(ep, en);
    let lse = tape.log(se);
    let ip = tape.constant(ind_pos.clone());
    let in_ = tape.constant(ind_neg.clone());
    let pick_p = tape.mul(ip, lp);
    let pick_n = tape.mul(in_, ln);
    let picked = tape.add(pick_p, pick_n);
    tape.sub(lse, picked)
}

/// Mean over rows of KL(Bernoulli(p) || Bernoulli(tau)).
fn bernoulli_kl_mean(tape: &mut Tape, p: Tx, tau: f64) -> Tx {
    let log_p = tape.log(p);
    let neg_p = tape.scale(p, -1.0);
    let one_m_p = tape.add_scalar(neg_p, 1.0);
    let log_1mp = tape.log(one_m_p);
    let a = tape.add_scalar(log_p, -tau.ln());
    let b = tape.add_scalar(log_1mp, -(1.0 - tau).ln());
    let ta = tape.mul(p, a);
    let tb = tape.mul(one_m_p, b);
    let kl = tape.add(ta, tb);
    tape.mean(kl)
}

/// Mean over rows of KL(N(mu, diag sigma^2) || N(0, I)) =
/// (1/2) sum_k (mu_k^2 + sigma_k^2 - ln sigma_k^2 - 1).
fn gauss_kl_mean(tape: &mut Tape, mu: Tx, sigma: Tx) -> Tx {
    let (_, h) = tape.shape(mu);
    let mu2 = tape.square(mu);
    let s2 = tape.square(sigma);
    let log_s = tape.log(sigma);
    let two_log_s = tape.scale(log_s, 2.0);
    let quad = tape.add(mu2, s2);
    let inner = tape.sub(quad, two_log_s);
    let inner = tape.add_scalar(inner, -1.0);
    let per_edge = tape.row_sum(inner);
    debug_assert!(h > 0);
    let mean = tape.mean(per_edge);
    tape.scale(mean, 0.5)
}

/// Evaluates the sampler keep-rate penalty, mean over rows of
/// KL(Bernoulli(p) || Bernoulli(tau)), exactly as the objective builds it.
#[doc(hidden)]
pub fn bernoulli_kl_mean_value(p: &[f64], tau: f64) -> f64 {
    let mut tape = Tape::new();
    let col = Array2::from_shape_vec((p.len(), 1), p.to_vec()).expect("column");
    let t = tape.constant(col);
    let kl = bernoulli_kl_mean(&mut tape, t, tau);
    tape.scalar(kl)
}

/// Evaluates the representation bottleneck, mean over rows of
/// KL(N(mu, diag sigma^2) || N(0, I)), exactly as the objective builds it.
#[doc(hidden)]
pub fn gauss_kl_mean_value(mu: &Array2<f64>, sigma: &Array2<f64>) -> f64 {
    let mut tape = Tape::new();
    let tm = tape.constant(mu.clone());
    let ts = tape.constant(sigma.clone());
    let kl = gauss_kl_mean(&mut tape, tm, ts);
    tape.scalar(kl)
}

/// Builds the epoch objective on `tape`. `ste` selects whether discrete
/// keep/drop decisions pass gradients straight through (training) or detach
/// (used by the finite-difference harness, which can only probe the smooth
/// part of the objective).
fn build_loss(
    tape: &mut Tape,
    ptx: &EncoderTx,
    mask_tx: Option<Tx>,
    ts: &TrainSet,
    x: &Array2<f64>,
    noise: &EpochNoise,
    cfg: &RidgeConfig,
    ste: SteMode,
) -> LossParts {
    if cfg.variant == Variant::Baseline {
        let xc = tape.constant(x.clone());
        let z = encode_nodes(tape, ptx, xc, &ts.plans_full, None);
        let rep = edge_representation(tape, ptx, z, ts.us.clone(), ts.vs.clone(), None);
        let logits = classify_edges(tape, ptx, rep.mu);
        let ce = cross_entropy_rows(tape, logits, &ts.ind_pos, &ts.ind_neg);
        let cls = tape.mean(ce);
        return LossParts {
            total: cls,
            cls,
            kl_y: None,
            kl_g: None,
            kept_labels: ts.m,
        };
    }

    let xc = masked_features(tape, mask_tx.expect("mask required"), x, &noise.x_r);

    // Sampler pass: same weights, full noisy graph.
    let z_phi = encode_nodes(tape, ptx, xc, &ts.plans_full, None);
    let p = sampler_scores(tape, z_phi, ts.us.clone(), ts.vs.clone());
    let p_vals: Vec<f64> = tape.value(p).column(0).to_vec();

    // Label subset: if the sampler would discard every label, trust its
    // single most-confident edge so the classification term stays defined.
    let mut draws_y = noise.draws_y.clone();
    if !draws_y.iter().zip(&p_vals).any(|(d, pv)| d < pv) {
        let top = (0..p_vals.len())
            .max_by(|&a, &b| p_vals[a].total_cmp(&p_vals[b]))
            .expect("nonempty training edges");
        draws_y[top] = -1.0;
    }
    let gate_y = tape.ste_gate(p, Some(&draws_y), ste);
    let gate_a = tape.ste_gate(p, Some(&noise.draws_a), ste);
    let ga_vals: Vec<f64> = tape.value(gate_a).column(0).to_vec();
    let kept_labels = tape.value(gate_y).iter().filter(|&&g| g > 0.5).count();

    // Main pass: sampled clean subgraph, mean-normalized by kept degrees.
    let plans_c = SignedPlans::gated(ts.n, &ts.edges, &ga_vals);
    let z = encode_nodes(tape, ptx, xc, &plans_c, Some(gate_a));
    let rep = edge_representation(tape, ptx, z, ts.us.clone(), ts.vs.clone(), Some(&noise.eps));
    let logits = classify_edges(tape, ptx, rep.z);
    let ce = cross_entropy_rows(tape, logits, &ts.ind_pos, &ts.ind_neg);
    let ce_kept = tape.mul(ce, gate_y);
    let ce_sum = tape.sum(ce_kept);
    // The label count is the sum of the gates and stays on the tape, so the
    // straight-through gradient on each keep decision is mean-centered:
    // keeping an easier-than-average label lowers the loss, keeping a
    // harder-than-average one raises it. A detached count would instead push
    // every gate toward zero. The fallback above guarantees the count >= 1.
    let count = tape.sum(gate_y);
    let cls = tape.div(ce_sum, count);

    let kl_y = bernoulli_kl_mean(tape, p, cfg.tau);
    let kl_g = gauss_kl_mean(tape, rep.mu, rep.sigma);

    let wy = tape.scale(kl_y, cfg.eff_alpha());
    let wg = tape.scale(kl_g, cfg.eff_beta());
    let t = tape.add(cls, wy);
    let total = tape.add(t, wg);
    LossParts {
        total,
        cls,
        kl_y: Some(kl_y),
        kl_g: Some(kl_g),
        kept_labels,
    }
}

struct Adam {
    m: Vec<f64>,
    v: Vec<f64>,
    t: u64,
}

impl Adam {
    fn new(len: usize) -> Adam {
        Adam {
            m: vec![0.0; len],
            v: vec![0.0; len],
            t: 0,
        }
    }

    fn step(&mut self, theta: &mut [f64], grad: &[f64], lr: f64) {
        const B1: f64 = 0.9;
        const B2: f64 = 0.999;
        const EPS: f64 = 1e-8;
        self.t += 1;
        let c1 = 1.0 - B1.powi(self.t as i32);
        let c2 = 1.0 - B2.powi(self.t as i32);
        for i in 0..theta.len() {
            let g = grad[i];
            self.m[i] = B1 * self.m[i] + (1.0 - B1) * g;
            self.v[i] = B2 * self.v[i] + (1.0 - B2) * g * g;
            let mh = self.m[i] / c1;
            let vh = self.v[i] / c2;
            theta[i] -= lr * mh / (vh.sqrt() + EPS);
        }
    }
}

/// Trains a model on a (typically noisy) training graph with node features.
pub fn fit(cfg: &RidgeConfig, train: &SignedGraph, x: &Array2<f64>) -> Result<RidgeModel> {
    cfg.validate()?;
    if train.edge_count() == 0 {
        return Err(Error::DegenerateGraph {
            action: "train",
            missing: "edges",
        });
    }
    if x.nrows() != train.node_count() {
        return Err(Error::ShapeMismatch {
            op: "fit",
            detail: format!(
                "features have {} rows for {} nodes",
                x.nrows(),
                train.node_count()
            ),
        });
    }
    let d = x.ncols();
    if d == 0 {
        return Err(Error::InvalidInput("features need at least one column".into()));
    }

    let enc_cfg = EncoderConfig {
        in_dim: d,
        hidden: cfg.hidden,
        layers: cfg.layers,
    };
    let mut params = EncoderParams::init(enc_cfg, cfg.seed)?;
    let mut mask = Array2::from_elem((1, d), MASK_INIT_LOGIT);
    let ts = TrainSet::build(train);
    let baseline = cfg.variant == Variant::Baseline;

    let enc_len = params.flat().len();
    let mask_len = mask.len();
    let mut opt = Adam::new(enc_len + mask_len);
    // Distinct stream from the one Glorot init consumed.
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut trace = Vec::with_capacity(cfg.epochs);

    for epoch in 0..cfg.epochs {
        let noise = if baseline {
            None
        } else {
            Some(EpochNoise::sample(&mut rng, x, ts.m, cfg.hidden))
        };
        let mut tape = Tape::new();
        let ptx = params.watch(&mut tape);
        let mask_tx = (!baseline).then(|| tape.leaf(mask.clone()));
        let parts = match &noise {
            Some(nz) => build_loss(&mut tape, &ptx, mask_tx, &ts, x, nz, cfg, SteMode::Identity),
            None => {
                // Baseline ignores the noise bundle entirely.
                let dummy = EpochNoise {
                    x_r: Array2::zeros((0, 0)),
                    draws_a: Vec::new(),
                    draws_y: Vec::new(),
                    eps: Array2::zeros((0, 0)),
                };
                build_loss(&mut tape, &ptx, None, &ts, x, &dummy, cfg, SteMode::Identity)
            }
        };

        let cls_v = tape.scalar(parts.cls);
        let kl_y_v = parts.kl_y.map(|t| tape.scalar(t)).unwrap_or(0.0);
        let kl_g_v = parts.kl_g.map(|t| tape.scalar(t)).unwrap_or(0.0);
        let total_v = tape.scalar(parts.total);
        for (term, v) in [
            ("cls", cls_v),
            ("kl_y", kl_y_v),
            ("kl_g", kl_g_v),
            ("total", total_v),
        ] {
            if !v.is_finite() {
                return Err(Error::NonFiniteLoss { term, epoch });
            }
        }
        trace.push(EpochTrace {
            epoch,
            total: total_v,
            cls: cls_v,
            kl_y: kl_y_v,
            kl_g: kl_g_v,
            kept_labels: parts.kept_labels,
        });

        let grads = tape.backward(parts.total);
        let mut flat_g = Vec::with_capacity(enc_len + mask_len);
        for leaf in ptx.leaves() {
            flat_g.extend(grads.of(leaf, &tape));
        }
        match mask_tx {
            Some(mt) => flat_g.extend(grads.of(mt, &tape)),
            None => flat_g.extend(std::iter::repeat(0.0).take(mask_len)),
        }

        let mut theta = params.flat();
        theta.extend(mask.iter());
        opt.step(&mut theta, &flat_g, cfg.lr);
        params.assign_flat(&theta[..enc_len]);
        for (slot, v) in mask.iter_mut().zip(&theta[enc_len..]) {
            *slot = *v;
        }
    }

    Ok(RidgeModel {
        config: *cfg,
        params,
        mask_logits: mask,
        trace,
    })
}

/// Finite-difference audit of the full objective at freshly initialized
/// parameters: gates detached (the smooth part is what FD can probe), one
/// frozen noise draw, every encoder weight and mask logit checked.
///
/// Exposed for the test suite; not part of the training API.
#[doc(hidden)]
pub fn full_loss_grad_check(
    cfg: &RidgeConfig,
    train: &SignedGraph,
    x: &Array2<f64>,
    noise_seed: u64,
    h: f64,
) -> Result<crate::autodiff::check::GradCheckReport> {
    cfg.validate()?;
    let (n, d) = x.dim();
    if n != train.node_count() || d == 0 {
        return Err(Error::ShapeMismatch {
            op: "full_loss_grad_check",
            detail: format!("features {n}x{d} for {} nodes", train.node_count()),
        });
    }
    let enc_cfg = EncoderConfig {
        in_dim: d,
        hidden: cfg.hidden,
        layers: cfg.layers,
    };
    let base = EncoderParams::init(enc_cfg, cfg.seed)?;
    let ts = TrainSet::build(train);
    let mut rng = ChaCha8Rng::seed_from_u64(noise_seed);
    let noise = EpochNoise::sample(&mut rng, x, ts.m, cfg.hidden);

    let enc_len = base.flat().len();
    let run = |theta: &[f64]| -> (f64, Vec<f64>, Vec<f64>) {
        let mut p = EncoderParams::init(enc_cfg, cfg.seed).expect("validated");
        p.assign_flat(&theta[..enc_len]);
        let mask = Array2::from_shape_vec((1, d), theta[enc_len..].to_vec()).expect("mask shape");
        let mut tape = Tape::new();
        let ptx = p.watch(&mut tape);
        let mask_tx = tape.leaf(mask);
        let parts = build_loss(
            &mut tape,
            &ptx,
            Some(mask_tx),
            &ts,
            x,
            &noise,
            cfg,
            SteMode::Detach,
        );
        let loss = tape.scalar(parts.total);
        let grads = tape.backward(parts.total);
        let mut flat_g = Vec::new();
        for leaf in ptx.leaves() {
            flat_g.extend(grads.of(leaf, &tape));
        }
        flat_g.extend(grads.of(mask_tx, &tape));
        let z_phi = {
            let xt = masked_features(&mut tape, mask_tx, x, &noise.x_r);
            encode_nodes(&mut tape, &ptx, xt, &ts.plans_full, None)
        };
        let pr = sampler_scores(&mut tape, z_phi, ts.us.clone(), ts.vs.clone());
        let pv = tape.value(pr).column(0).to_vec();
        (loss, flat_g, pv)
    };

    let mut theta = base.flat();
    theta.extend(std::iter::repeat(MASK_INIT_LOGIT).take(d));
    let (_, analytic, p_vals) = run(&theta);
    // The probe must not flip any sampled gate, or FD and the detached
    // gradient measure different discrete programs.
    for (dr, p) in noise
        .draws_a
        .iter()
        .chain(&noise.draws_y)
        .zip(p_vals.iter().cycle())
    {
        if (dr - p).abs() <= 1e-3 {
            return Err(Error::InvalidInput(format!(
                "noise seed {noise_seed} puts a gate draw within 1e-3 of its keep probability; pick another seed"
            )));
        }
    }
    Ok(crate::autodiff::check::grad_check(
        &theta,
        |t| run(t).0,
        &analytic,
        h,
    ))
}

impl RidgeModel {
    /// Rebuilds a model from checkpointed pieces, validating shapes.
    pub fn from_parts(
        config: RidgeConfig,
        encoder_flat: &[f64],
        mask_logits: Array2<f64>,
        trace: Vec<EpochTrace>,
    ) -> Result<RidgeModel> {
        config.validate()?;
        if mask_logits.nrows() != 1 {
            return Err(Error::Checkpoint(format!(
                "feature mask must be a single row of per-dimension logits, got {} rows",
                mask_logits.nrows()
            )));
        }
        let d = mask_logits.ncols();
        let enc_cfg = EncoderConfig {
            in_dim: d,
            hidden: config.hidden,
            layers: config.layers,
        };
        let mut params = EncoderParams::init(enc_cfg, 0)?;
        if params.flat().len() != encoder_flat.len() {
            return Err(Error::Checkpoint(format!(
                "encoder weight count {} does not match config ({} expected)",
                encoder_flat.len(),
                params.flat().len()
            )));
        }
        params.assign_flat(encoder_flat);
        Ok(RidgeModel {
            config,
            params,
            mask_logits,
            trace,
        })
    }

    /// Deterministic eval-time features: the same sigmoid mixing as training,
    /// with the bootstrap reference replaced by its expectation (the column
    /// mean) — train and eval see the same feature distribution.
    fn eval_features(&self, x: &Array2<f64>) -> Array2<f64> {
        if self.config.variant == Variant::Baseline {
            return x.clone();
        }
        let means = x.mean_axis(Axis(0)).expect("nonempty features");
        let mut xc = x.clone();
        for ((_, j), v) in xc.indexed_iter_mut() {
            let m = 1.0 / (1.0 + (-self.mask_logits[(0, j)]).exp());
            *v = means[j] + (*v - means[j]) * m;
        }
        xc
    }

    /// Runs the deterministic eval forward: scores every training edge with
    /// the sampler, keeps those at or above 1/2, re-encodes over the kept
    /// subgraph. Returns node embeddings and the per-edge keep decisions.
    fn eval_embedding(
        &self,
        train: &SignedGraph,
        x: &Array2<f64>,
    ) -> Result<(Tape, EncoderTx, Tx, Vec<bool>)> {
        if x.nrows() != train.node_count() {
            return Err(Error::ShapeMismatch {
                op: "predict",
                detail: format!(
                    "features have {} rows for {} nodes",
                    x.nrows(),
                    train.node_count()
                ),
            });
        }
        let xc = self.eval_features(x);
        let mut tape = Tape::new();
        let ptx = self.params.watch(&mut tape);
        let xt = tape.constant(xc);

        let kept: Vec<bool> = if self.config.variant == Variant::Baseline {
            vec![true; train.edge_count()]
        } else {
            let plans_full = SignedPlans::from_graph(train);
            let z_phi = encode_nodes(&mut tape, &ptx, xt, &plans_full, None);
            let us = Arc::new(train.edges().iter().map(|e| e.u).collect::<Vec<_>>());
            let vs = Arc::new(train.edges().iter().map(|e| e.v).collect::<Vec<_>>());
            let p = sampler_scores(&mut tape, z_phi, us, vs);
            tape.value(p).column(0).iter().map(|&pv| pv >= 0.5).collect()
        };

        let kept_edges: Vec<SignedEdge> = train
            .edges()
            .iter()
            .zip(&kept)
            .filter(|(_, &k)| k)
            .map(|(e, _)| *e)
            .collect();
        let plans = SignedPlans::gated(
            train.node_count(),
            &kept_edges,
            &vec![1.0; kept_edges.len()],
        );
        let z = encode_nodes(&mut tape, &ptx, xt, &plans, None);
        Ok((tape, ptx, z, kept))
    }

    /// Probability that each query pair carries a positive sign.
    pub fn predict(
        &self,
        train: &SignedGraph,
        x: &Array2<f64>,
        queries: &[(u32, u32)],
    ) -> Result<Vec<f64>> {
        let n = train.node_count() as u32;
        for &(u, v) in queries {
            if u >= n || v >= n {
                return Err(Error::NodeOutOfRange {
                    id: u.max(v),
                    n: train.node_count(),
                });
            }
        }
        let (mut tape, ptx, z, _) = self.eval_embedding(train, x)?;
        let us = Arc::new(queries.iter().map(|q| q.0).collect::<Vec<_>>());
        let vs = Arc::new(queries.iter().map(|q| q.1).collect::<Vec<_>>());
        let rep = edge_representation(&mut tape, &ptx, z, us, vs, None);
        let logits = classify_edges(&mut tape, &ptx, rep.z);
        let lv = tape.value(logits);
        Ok(lv
            .rows()
            .into_iter()
            .map(|r| {
                let (lp, ln) = (r[0], r[1]);
                1.0 / (1.0 + (ln - lp).exp())
            })
            .collect())
    }

    /// The training subgraph the converged sampler keeps at eval time.
    pub fn denoised_train_graph(
        &self,
        train: &SignedGraph,
        x: &Array2<f64>,
    ) -> Result<SignedGraph> {
        let (_, _, _, kept) = self.eval_embedding(train, x)?;
        let edges: Vec<SignedEdge> = train
            .edges()
            .iter()
            .zip(&kept)
            .filter(|(_, &k)| k)
            .map(|(e, _)| *e)
            .collect();
        Ok(SignedGraph::from_canonical(train.node_count(), edges))
    }
}
