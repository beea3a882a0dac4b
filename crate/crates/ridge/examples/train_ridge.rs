//! One end-to-end training run on a corrupted graph.
//!
//! Generates a planted-community signed graph, flips 20% of the training
//! signs, trains the denoising model, and reports held-out sign prediction
//! plus what the converged edge sampler chose to keep.

use ridge::graph::split_edges;
use ridge::metrics::evaluate;
use ridge::noise::{perturb, NoiseKind, NoiseSpec, Polarity};
use ridge::ssbm::{ssbm_generate, SsbmConfig};
use ridge::svd::{truncated_svd_features, SvdConfig};
use ridge::trainer::{fit, RidgeConfig};

fn main() {
    let graph = ssbm_generate(&SsbmConfig {
        n: 150,
        k: 2,
        p: 0.12,
        rho: 1.0,
        sign_flip: 0.02,
        seed: 8,
    })
    .unwrap()
    .graph;

    let split = split_edges(&graph, 0.85, 21).unwrap();
    let (train, receipt) = perturb(
        &split.train,
        &NoiseSpec {
            kind: NoiseKind::Flip,
            polarity: Polarity::All,
            gamma: 0.2,
            seed: 33,
        },
    )
    .unwrap();
    println!(
        "train: {} edges, {} signs flipped; test: {} clean edges",
        train.edge_count(),
        receipt.changed,
        split.test.len()
    );

    let features = truncated_svd_features(&train, &SvdConfig::new(32, 13)).unwrap();
    let cfg = RidgeConfig {
        hidden: 32,
        layers: 2,
        epochs: 400,
        seed: 1,
        ..RidgeConfig::default()
    };
    let model = fit(&cfg, &train, &features.x).unwrap();

    for e in model.trace.iter().step_by(100).chain([model.trace.last().unwrap()]) {
        println!(
            "epoch {:>4}: total {:.4}  cls {:.4}  kl_y {:.4}  kl_g {:.4}  labels kept {}",
            e.epoch, e.total, e.cls, e.kl_y, e.kl_g, e.kept_labels
        );
    }

    let queries: Vec<(u32, u32)> = split.test.iter().map(|e| (e.u, e.v)).collect();
    let labels: Vec<i8> = split.test.iter().map(|e| e.sign).collect();
    let probs = model.predict(&train, &features.x, &queries).unwrap();
    let m = evaluate(&probs, &labels).unwrap();
    println!(
        "\nheld-out: auc {:.4}  binary-f1 {:.4}  accuracy {:.4}",
        m.auc, m.binary_f1, m.accuracy
    );

    let denoised = model.denoised_train_graph(&train, &features.x).unwrap();
    println!(
        "sampler keeps {}/{} training edges at evaluation",
        denoised.edge_count(),
        train.edge_count()
    );
}
