//! Finite-difference audit of the reverse-mode tape.
//!
//! Checks a composite expression touching the main primitives, then the full
//! training objective on a small graph — encoder weights, variational heads,
//! feature-mask logits, the lot — against central differences.

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ridge::autodiff::check::grad_check;
use ridge::autodiff::Tape;
use ridge::ssbm::{ssbm_generate, SsbmConfig};
use ridge::svd::{truncated_svd_features, SvdConfig};
use ridge::trainer::{full_loss_grad_check, RidgeConfig};

fn main() {
    // A scalar program exercising add/mul/div/exp/log/tanh/sigmoid/matmul...
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let a0 = Array2::from_shape_fn((4, 3), |_| rng.gen_range(-1.0..1.0));
    let b0 = Array2::from_shape_fn((3, 5), |_| rng.gen_range(-1.0..1.0));
    let theta: Vec<f64> = a0.iter().chain(b0.iter()).copied().collect();

    let run = |t: &[f64]| {
        let a = Array2::from_shape_vec((4, 3), t[..12].to_vec()).unwrap();
        let b = Array2::from_shape_vec((3, 5), t[12..].to_vec()).unwrap();
        let mut tape = Tape::new();
        let ta = tape.leaf(a);
        let tb = tape.leaf(b);
        let prod = tape.matmul(ta, tb);
        let th = tape.tanh(prod);
        let sg = tape.sigmoid(th);
        let ex = tape.exp(sg);
        let shifted = tape.add_scalar(ex, 1.5);
        let lg = tape.log(shifted);
        let den = tape.add_scalar(sg, 2.0);
        let quot = tape.div(lg, den);
        let loss = tape.sum(quot);
        let v = tape.scalar(loss);
        let grads = tape.backward(loss);
        let mut g: Vec<f64> = grads.of(ta, &tape).into_iter().collect();
        g.extend(grads.of(tb, &tape));
        (v, g)
    };
    let (_, analytic) = run(&theta);
    let report = grad_check(&theta, |t| run(t).0, &analytic, 1e-5);
    println!(
        "composite expression: {} coordinates, max relative error {:.2e}",
        report.checked, report.max_rel_err
    );
    assert!(report.passes(1e-4));

    // The full objective on an 8-node graph. Discrete keep/drop draws are
    // detached so finite differences see the smooth program.
    let g = ssbm_generate(&SsbmConfig {
        n: 8,
        k: 2,
        p: 0.6,
        rho: 1.0,
        sign_flip: 0.1,
        seed: 9,
    })
    .unwrap()
    .graph;
    let x = truncated_svd_features(&g, &SvdConfig::new(3, 1)).unwrap().x;
    let cfg = RidgeConfig {
        hidden: 6,
        layers: 2,
        epochs: 1,
        seed: 4,
        ..RidgeConfig::default()
    };
    let report = full_loss_grad_check(&cfg, &g, &x, 77, 1e-5).unwrap();
    println!(
        "full objective: {} parameters, max relative error {:.2e}",
        report.checked, report.max_rel_err
    );
    assert!(report.passes(1e-4));
    println!("all gradients match central differences");
}
