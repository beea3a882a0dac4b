//! End-to-end robustness experiments: inject noise, split edges, build
//! spectral features, train, score held-out sign prediction.
//!
//! A run is fully determined by (graph, spec, seed): sub-seeds for the noise
//! pass, the split, the feature sketch and the model are derived from the run
//! seed with fixed offsets. Multi-seed sweeps can fan out over OS threads;
//! results are aggregated in seed order, so reports are identical for any
//! thread count.
//!
//! Two protocol orders are supported. `PerturbThenSplit` corrupts the whole
//! graph before the train/test cut, modeling noise baked into the data at
//! collection time. `SplitThenPerturb` corrupts only the training portion and
//! keeps test labels clean, isolating how training-time corruption degrades
//! generalization — the right protocol for controlled robustness curves.

use crate::balance::balance_degree;
use crate::error::{Error, Result};
use crate::graph::{split_edges, SignedGraph};
use crate::metrics::{evaluate, mean_std, MetricsReport};
use crate::noise::{perturb, NoiseSpec, PerturbationReceipt};
use crate::svd::{truncated_svd_features, SvdConfig};
use crate::trainer::{fit, EpochTrace, RidgeConfig};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseOrder {
    /// Corrupt the full graph, then split. Test labels may be corrupted.
    PerturbThenSplit,
    /// Split first, corrupt only the training graph. Test labels stay clean.
    SplitThenPerturb,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentSpec {
    /// Noise to inject, or `None` to run on the graph as given.
    pub noise: Option<NoiseSpec>,
    pub order: NoiseOrder,
    /// Fraction of edges used for training, in (0, 1).
    pub split_ratio: f64,
    /// Spectral feature width.
    pub feature_dim: usize,
    /// Model settings; the per-run seed overrides `model.seed`.
    pub model: RidgeConfig,
    /// One full run per seed.
    pub seeds: Vec<u64>,
    /// OS threads to fan runs over (1 = sequential). Never changes results.
    pub threads: usize,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.split_ratio > 0.0 && self.split_ratio < 1.0) {
            return Err(Error::OutOfRange {
                what: "split_ratio",
                range: "(0, 1)",
                got: self.split_ratio,
            });
        }
        if self.feature_dim == 0 {
            return Err(Error::InvalidInput("feature_dim must be >= 1".into()));
        }
        if self.seeds.is_empty() {
            return Err(Error::InvalidInput("at least one seed is required".into()));
        }
        if self.threads == 0 {
            return Err(Error::InvalidInput("threads must be >= 1".into()));
        }
        self.model.validate()
    }
}

/// Everything observed in one seeded run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunResult {
    pub seed: u64,
    pub metrics: MetricsReport,
    /// Receipt of the injected noise, when any was requested.
    pub receipt: Option<PerturbationReceipt>,
    /// Triangle balance of the (possibly noisy) training graph, when it has
    /// triangles.
    pub balance_train: Option<f64>,
    /// Triangle balance of the subgraph the converged sampler keeps.
    pub balance_denoised: Option<f64>,
    /// Fraction of training edges the converged sampler keeps.
    pub kept_edge_fraction: f64,
    pub trace: Vec<EpochTrace>,
}

/// Mean and sample standard deviation over seeds for one metric.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Aggregate {
    pub mean: f64,
    pub std: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub runs: Vec<RunResult>,
    pub auc: Aggregate,
    pub binary_f1: Aggregate,
    pub macro_f1: Aggregate,
    pub micro_f1: Aggregate,
}

fn aggregate(values: Vec<f64>) -> Aggregate {
    let (mean, std) = mean_std(&values);
    Aggregate { mean, std }
}

/// One seed's full output: the observed result plus every artifact needed to
/// persist or re-score the run.
#[derive(Debug, Clone)]
pub struct SeedRun {
    pub result: RunResult,
    pub model: crate::trainer::RidgeModel,
    /// Training graph the model actually saw (after any noise).
    pub train: SignedGraph,
    /// Held-out edges, ids shared with `train`.
    pub test: Vec<crate::graph::SignedEdge>,
    pub features: crate::svd::FeatureMatrix,
}

/// Runs one seed of the protocol, keeping the trained model and intermediate
/// data alongside the scored result.
pub fn run_seed(graph: &SignedGraph, spec: &ExperimentSpec, seed: u64) -> Result<SeedRun> {
    // Independent sub-streams per stage, all derived from the run seed.
    let noise_seed = seed ^ 0x6e6f_6973_655f_7331;
    let split_seed = seed ^ 0x7370_6c69_745f_7332;
    let svd_seed = seed ^ 0x7376_645f_7365_6533;

    let (train, test, receipt) = match (&spec.noise, spec.order) {
        (None, _) => {
            let s = split_edges(graph, spec.split_ratio, split_seed)?;
            (s.train, s.test, None)
        }
        (Some(nz), NoiseOrder::PerturbThenSplit) => {
            let mut nz = nz.clone();
            nz.seed = noise_seed;
            let (noisy, receipt) = perturb(graph, &nz)?;
            let s = split_edges(&noisy, spec.split_ratio, split_seed)?;
            (s.train, s.test, Some(receipt))
        }
        (Some(nz), NoiseOrder::SplitThenPerturb) => {
            let s = split_edges(graph, spec.split_ratio, split_seed)?;
            let mut nz = nz.clone();
            nz.seed = noise_seed;
            let (noisy_train, receipt) = perturb(&s.train, &nz)?;
            (noisy_train, s.test, Some(receipt))
        }
    };

    let dim = spec.feature_dim.min(train.node_count());
    let features = truncated_svd_features(&train, &SvdConfig::new(dim, svd_seed))?;

    let mut model_cfg = spec.model;
    model_cfg.seed = seed;
    let model = fit(&model_cfg, &train, &features.x)?;

    let queries: Vec<(u32, u32)> = test.iter().map(|e| (e.u, e.v)).collect();
    let probs = model.predict(&train, &features.x, &queries)?;
    let labels: Vec<i8> = test.iter().map(|e| e.sign).collect();
    let metrics = evaluate(&probs, &labels)?;

    let denoised = model.denoised_train_graph(&train, &features.x)?;
    let kept_edge_fraction = denoised.edge_count() as f64 / train.edge_count().max(1) as f64;
    let result = RunResult {
        seed,
        metrics,
        receipt,
        balance_train: balance_degree(&train).ok(),
        balance_denoised: balance_degree(&denoised).ok(),
        kept_edge_fraction,
        trace: model.trace.clone(),
    };
    Ok(SeedRun {
        result,
        model,
        train,
        test,
        features,
    })
}

fn run_one(graph: &SignedGraph, spec: &ExperimentSpec, seed: u64) -> Result<RunResult> {
    run_seed(graph, spec, seed).map(|r| r.result)
}

fn fan_out<T, F>(spec: &ExperimentSpec, run: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync,
{
    let seeds = &spec.seeds;
    let mut slots: Vec<Option<Result<T>>> = Vec::new();
    slots.resize_with(seeds.len(), || None);

    if spec.threads == 1 || seeds.len() == 1 {
        for (slot, &seed) in slots.iter_mut().zip(seeds) {
            *slot = Some(run(seed));
        }
    } else {
        // Round-robin static assignment: worker w takes seeds w, w+T, w+2T...
        // Results land in per-seed slots, so ordering is thread-independent.
        let workers = spec.threads.min(seeds.len());
        let mut buckets: Vec<Vec<(usize, &mut Option<Result<T>>)>> = Vec::new();
        buckets.resize_with(workers, Vec::new);
        for (i, slot) in slots.iter_mut().enumerate() {
            buckets[i % workers].push((i, slot));
        }
        let run = &run;
        std::thread::scope(|scope| {
            for bucket in buckets {
                scope.spawn(move || {
                    for (i, slot) in bucket {
                        *slot = Some(run(seeds[i]));
                    }
                });
            }
        });
    }

    let mut out = Vec::with_capacity(seeds.len());
    for slot in slots {
        out.push(slot.expect("every seed slot filled")?);
    }
    Ok(out)
}

/// Aggregates per-seed results into the cross-seed report.
pub fn summarize(runs: Vec<RunResult>) -> ExperimentReport {
    let pick = |f: fn(&MetricsReport) -> f64| aggregate(runs.iter().map(|r| f(&r.metrics)).collect());
    ExperimentReport {
        auc: pick(|m| m.auc),
        binary_f1: pick(|m| m.binary_f1),
        macro_f1: pick(|m| m.macro_f1),
        micro_f1: pick(|m| m.micro_f1),
        runs,
    }
}

/// Like [`run_experiment`], but hands back every seed's artifacts (model,
/// splits, features) alongside its result.
pub fn run_experiment_runs(graph: &SignedGraph, spec: &ExperimentSpec) -> Result<Vec<SeedRun>> {
    spec.validate()?;
    fan_out(spec, |seed| run_seed(graph, spec, seed))
}

/// Runs the spec once per seed and aggregates test metrics across seeds.
pub fn run_experiment(graph: &SignedGraph, spec: &ExperimentSpec) -> Result<ExperimentReport> {
    spec.validate()?;
    Ok(summarize(fan_out(spec, |seed| run_one(graph, spec, seed))?))
}
