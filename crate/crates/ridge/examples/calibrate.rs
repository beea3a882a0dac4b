//! Scratch calibration harness for the acceptance-scale SSBM protocol.
use ridge::experiment::*;
use ridge::noise::{NoiseKind, NoiseSpec, Polarity};
use ridge::ssbm::{ssbm_generate, SsbmConfig};
use ridge::trainer::{RidgeConfig, Variant};
use std::time::Instant;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let variant = match args.get(1).map(|s| s.as_str()).unwrap_or("full") {
        "baseline" => Variant::Baseline,
        "wo_y" => Variant::WithoutKlY,
        "wo_g" => Variant::WithoutKlG,
        "wo_both" => Variant::WithoutBoth,
        _ => Variant::Full,
    };
    let seeds: Vec<u64> = args
        .get(2)
        .map(|s| s.split(',').map(|x| x.parse().unwrap()).collect())
        .unwrap_or_else(|| vec![1]);
    let epochs: usize = args.get(3).map(|s| s.parse().unwrap()).unwrap_or(1000);
    let gamma: f64 = args.get(4).map(|s| s.parse().unwrap()).unwrap_or(0.20);
    let alpha: f64 = args.get(5).map(|s| s.parse().unwrap()).unwrap_or(1.0);
    let beta: f64 = args.get(6).map(|s| s.parse().unwrap()).unwrap_or(0.01);
    let dim: usize = args.get(7).map(|s| s.parse().unwrap()).unwrap_or(64);
    let split: f64 = args.get(8).map(|s| s.parse().unwrap()).unwrap_or(0.85);

    let graph = ssbm_generate(&SsbmConfig {
        n: 500,
        k: 5,
        p: 0.05,
        rho: 1.5,
        sign_flip: 0.05,
        seed: 20260822,
    })
    .unwrap()
    .graph;
    eprintln!(
        "graph: n={} m={} (+{} -{})",
        graph.node_count(),
        graph.edge_count(),
        graph.positive_count(),
        graph.negative_count()
    );

    let spec = ExperimentSpec {
        noise: Some(NoiseSpec {
            kind: NoiseKind::Flip,
            polarity: Polarity::All,
            gamma,
            seed: 0,
        }),
        order: NoiseOrder::SplitThenPerturb,
        split_ratio: split,
        feature_dim: dim,
        model: RidgeConfig {
            epochs,
            variant,
            alpha,
            beta,
            ..RidgeConfig::default()
        },
        seeds,
        threads: 1,
    };
    let t = Instant::now();
    let report = run_experiment(&graph, &spec).unwrap();
    eprintln!("elapsed: {:.1}s", t.elapsed().as_secs_f64());
    for r in &report.runs {
        // Largest rise between consecutive 100-epoch window means of the
        // min-max-normalized classification loss after the burn-in.
        let cls: Vec<f64> = r.trace.iter().map(|e| e.cls).collect();
        let (lo, hi) = cls
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
                (a.min(v), b.max(v))
            });
        let span = (hi - lo).max(1e-12);
        let norm: Vec<f64> = cls.iter().map(|v| (v - lo) / span).collect();
        let wmeans: Vec<f64> = if norm.len() > 200 {
            norm[200..]
                .chunks(100)
                .map(|w| w.iter().sum::<f64>() / w.len() as f64)
                .collect()
        } else {
            vec![]
        };
        let max_rise = wmeans
            .windows(2)
            .map(|p| p[1] - p[0])
            .fold(f64::NEG_INFINITY, f64::max);
        eprintln!(
            "  seed {}: f1={:.4} auc={:.4} kept={:.3} D3_train={:.4} D3_denoised={:.4} max_window_rise={:.4}",
            r.seed,
            r.metrics.binary_f1,
            r.metrics.auc,
            r.kept_edge_fraction,
            r.balance_train.unwrap_or(f64::NAN),
            r.balance_denoised.unwrap_or(f64::NAN),
            max_rise
        );
    }
    println!(
        "variant={:?} gamma={gamma} alpha={alpha} beta={beta}: binary_f1 = {:.4} +/- {:.4}, auc = {:.4}",
        variant, report.binary_f1.mean, report.binary_f1.std, report.auc.mean
    );
}
