//! Scratch diagnostic: does the converged sampler drop flipped edges?
use ridge::graph::split_edges;
use ridge::metrics::evaluate;
use ridge::noise::{perturb, NoiseKind, NoiseSpec, Polarity};
use ridge::ssbm::{ssbm_generate, SsbmConfig};
use ridge::svd::{truncated_svd_features, SvdConfig};
use ridge::trainer::{fit, RidgeConfig, Variant};
use std::collections::HashMap;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let seed: u64 = args.get(1).map(|s| s.parse().unwrap()).unwrap_or(1);
    let epochs: usize = args.get(2).map(|s| s.parse().unwrap()).unwrap_or(1000);
    let gamma: f64 = args.get(3).map(|s| s.parse().unwrap()).unwrap_or(0.20);
    let alpha: f64 = args.get(4).map(|s| s.parse().unwrap()).unwrap_or(1.0);
    let beta: f64 = args.get(5).map(|s| s.parse().unwrap()).unwrap_or(0.01);
    let variant = match args.get(6).map(|s| s.as_str()).unwrap_or("full") {
        "baseline" => Variant::Baseline,
        "wo_y" => Variant::WithoutKlY,
        "wo_g" => Variant::WithoutKlG,
        "wo_both" => Variant::WithoutBoth,
        _ => Variant::Full,
    };

    let graph = ssbm_generate(&SsbmConfig {
        n: 500, k: 5, p: 0.05, rho: 1.5, sign_flip: 0.05, seed: 20260822,
    }).unwrap().graph;

    let noise_seed = seed ^ 0x6e6f_6973_655f_7331;
    let split_seed = seed ^ 0x7370_6c69_745f_7332;
    let svd_seed = seed ^ 0x7376_645f_7365_6533;

    let s = split_edges(&graph, 0.85, split_seed).unwrap();
    let clean_train = s.train;
    let (noisy_train, _rec) = perturb(&clean_train, &NoiseSpec {
        kind: NoiseKind::Flip, polarity: Polarity::All, gamma, seed: noise_seed,
    }).unwrap();

    let clean_sign: HashMap<(u32, u32), i8> =
        clean_train.edges().iter().map(|e| ((e.u, e.v), e.sign)).collect();
    let flipped: Vec<bool> = noisy_train.edges().iter()
        .map(|e| clean_sign[&(e.u, e.v)] != e.sign).collect();
    let n_flipped = flipped.iter().filter(|&&f| f).count();

    let dim = 64usize.min(noisy_train.node_count());
    let features = truncated_svd_features(&noisy_train, &SvdConfig::new(dim, svd_seed)).unwrap();

    let cfg = RidgeConfig { epochs, alpha, beta, variant, seed, ..RidgeConfig::default() };
    let model = fit(&cfg, &noisy_train, &features.x).unwrap();

    // Drop audit.
    let denoised = model.denoised_train_graph(&noisy_train, &features.x).unwrap();
    let kept: std::collections::HashSet<(u32, u32)> =
        denoised.edges().iter().map(|e| (e.u, e.v)).collect();
    let mut dropped_flipped = 0usize;
    let mut dropped_total = 0usize;
    let mut dropped_obs_pos = 0usize;
    let mut kept_flipped = 0usize;
    for (e, &fl) in noisy_train.edges().iter().zip(&flipped) {
        if kept.contains(&(e.u, e.v)) {
            if fl { kept_flipped += 1; }
        } else {
            dropped_total += 1;
            if fl { dropped_flipped += 1; }
            if e.sign > 0 { dropped_obs_pos += 1; }
        }
    }
    let m = noisy_train.edge_count();
    println!("train m={m}, flipped={n_flipped} ({:.1}%)", 100.0 * n_flipped as f64 / m as f64);
    println!(
        "dropped {dropped_total} ({:.1}%): {dropped_flipped} were flipped (precision {:.3}), flip recall {:.3}; {dropped_obs_pos} dropped were observed-positive",
        100.0 * dropped_total as f64 / m as f64,
        dropped_flipped as f64 / dropped_total.max(1) as f64,
        dropped_flipped as f64 / n_flipped.max(1) as f64,
    );
    println!("kept flipped: {kept_flipped}");
    // Chance rate: dropping uniformly would catch flips at the flip rate.
    println!("chance drop precision would be {:.3}", n_flipped as f64 / m as f64);

    // Test-set scoring: threshold sensitivity.
    let queries: Vec<(u32, u32)> = s.test.iter().map(|e| (e.u, e.v)).collect();
    let labels: Vec<i8> = s.test.iter().map(|e| e.sign).collect();
    let probs = model.predict(&noisy_train, &features.x, &queries).unwrap();
    let metrics = evaluate(&probs, &labels).unwrap();
    let pred_pos = probs.iter().filter(|&&p| p >= 0.5).count();
    let true_pos = labels.iter().filter(|&&l| l > 0).count();
    println!(
        "test: auc={:.4} f1@0.5={:.4} acc={:.4}; predicted-positive {} vs actual {} (of {})",
        metrics.auc, metrics.binary_f1, metrics.accuracy, pred_pos, true_pos, labels.len()
    );
    let mut best = (0.0f64, 0.5f64);
    for t in 1..100 {
        let thr = t as f64 / 100.0;
        let (mut tp, mut fp, mut fnn) = (0f64, 0f64, 0f64);
        for (&p, &l) in probs.iter().zip(&labels) {
            let pp = p >= thr;
            match (pp, l > 0) {
                (true, true) => tp += 1.0,
                (true, false) => fp += 1.0,
                (false, true) => fnn += 1.0,
                _ => {}
            }
        }
        let f1 = 2.0 * tp / (2.0 * tp + fp + fnn).max(1.0);
        if f1 > best.0 { best = (f1, thr); }
    }
    println!("best-threshold f1 = {:.4} at {:.2}", best.0, best.1);
    // Per-class precision/recall at 0.5 on the positive class.
    let (mut tp, mut fp, mut fnn) = (0f64, 0f64, 0f64);
    for (&p, &l) in probs.iter().zip(&labels) {
        match (p >= 0.5, l > 0) {
            (true, true) => tp += 1.0,
            (true, false) => fp += 1.0,
            (false, true) => fnn += 1.0,
            _ => {}
        }
    }
    println!(
        "positive class at 0.5: precision {:.4} recall {:.4}",
        tp / (tp + fp).max(1.0),
        tp / (tp + fnn).max(1.0)
    );
    // Mask audit.
    let kept_cols = model.mask_logits.iter().filter(|&&l| l >= 0.0).count();
    let (mn, mx) = model
        .mask_logits
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let mean = model.mask_logits.mean().unwrap();
    println!(
        "mask logits: {kept_cols}/{} above 0, range [{mn:.2}, {mx:.2}], mean {mean:.2}",
        model.mask_logits.len()
    );
}
