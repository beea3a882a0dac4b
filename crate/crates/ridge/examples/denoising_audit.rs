//! Does the edge sampler actually find the corrupted edges?
//!
//! With synthetic noise the ground truth is known, so the converged keep/drop
//! decisions can be audited directly: what fraction of dropped edges were
//! really flipped (precision), and what fraction of flips got dropped
//! (recall), against the chance rate.

use ridge::graph::split_edges;
use ridge::noise::{perturb, NoiseKind, NoiseSpec, Polarity};
use ridge::ssbm::{ssbm_generate, SsbmConfig};
use ridge::svd::{truncated_svd_features, SvdConfig};
use ridge::trainer::{fit, RidgeConfig};
use std::collections::{HashMap, HashSet};

fn main() {
    let graph = ssbm_generate(&SsbmConfig {
        n: 200,
        k: 2,
        p: 0.1,
        rho: 1.0,
        sign_flip: 0.0,
        seed: 12,
    })
    .unwrap()
    .graph;
    let split = split_edges(&graph, 0.85, 5).unwrap();
    let clean = split.train;
    let gamma = 0.2;
    let (noisy, _) = perturb(
        &clean,
        &NoiseSpec {
            kind: NoiseKind::Flip,
            polarity: Polarity::All,
            gamma,
            seed: 71,
        },
    )
    .unwrap();

    let clean_sign: HashMap<(u32, u32), i8> =
        clean.edges().iter().map(|e| ((e.u, e.v), e.sign)).collect();
    let flipped: HashSet<(u32, u32)> = noisy
        .edges()
        .iter()
        .filter(|e| clean_sign[&(e.u, e.v)] != e.sign)
        .map(|e| (e.u, e.v))
        .collect();

    let features = truncated_svd_features(&noisy, &SvdConfig::new(32, 2)).unwrap();
    let cfg = RidgeConfig {
        hidden: 32,
        layers: 2,
        epochs: 400,
        seed: 3,
        ..RidgeConfig::default()
    };
    let model = fit(&cfg, &noisy, &features.x).unwrap();

    let kept: HashSet<(u32, u32)> = model
        .denoised_train_graph(&noisy, &features.x)
        .unwrap()
        .edges()
        .iter()
        .map(|e| (e.u, e.v))
        .collect();

    let dropped: Vec<(u32, u32)> = noisy
        .edges()
        .iter()
        .map(|e| (e.u, e.v))
        .filter(|k| !kept.contains(k))
        .collect();
    let dropped_flipped = dropped.iter().filter(|k| flipped.contains(*k)).count();

    let m = noisy.edge_count();
    println!(
        "{} of {} training edges were flipped ({:.0}%)",
        flipped.len(),
        m,
        100.0 * gamma
    );
    println!(
        "sampler dropped {} edges; {} of them were flipped",
        dropped.len(),
        dropped_flipped
    );
    if !dropped.is_empty() {
        let precision = dropped_flipped as f64 / dropped.len() as f64;
        let recall = dropped_flipped as f64 / flipped.len() as f64;
        println!(
            "drop precision {precision:.3} (chance would be {:.3}), flip recall {recall:.3}",
            flipped.len() as f64 / m as f64
        );
        assert!(
            precision > flipped.len() as f64 / m as f64,
            "dropping should beat chance"
        );
    }
}
