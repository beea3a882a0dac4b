//! Robust representation learning on signed graphs under structure and label noise.
//!
//! The crate trains a signed graph convolutional encoder while *jointly denoising*
//! its two inputs: the adjacency structure and the edge-sign labels. A sampler
//! network (sharing weights with the encoder) scores every observed edge, keeps a
//! clean subset of structure and labels via straight-through Bernoulli gates, and
//! two KL regularizers keep the kept-rate honest and the edge representations
//! compressed. Everything runs on a small reverse-mode autodiff tape written for
//! this crate — no deep-learning framework involved.
//!
//! What lives where:
//!
//! - [`graph`] — signed graphs, edge splits; [`balance`] — triangle census and
//!   balance degree; [`ssbm`] — signed stochastic block model generator.
//! - [`noise`] — sign-flip / deletion / addition perturbations with receipts.
//! - [`svd`] — randomized truncated SVD node features.
//! - [`autodiff`] — tensors, tape, gradients, finite-difference checking.
//! - [`encoder`] — the 4-layer balance-aware signed GCN and edge heads.
//! - [`trainer`] — feature masking, substructure sampling, the three-term loss,
//!   Adam, [`trainer::fit`] / [`trainer::predict`].
//! - [`metrics`] — AUC and the F1 family; [`experiment`] — noise-sweep runner.
//! - [`dataset`] / [`config`] / [`io`] — soc-sign ingestion, manifests, strict
//!   TOML experiment configs, atomic artifact writers.
//!
//! The `examples/` directory is the front door: each major capability has a
//! runnable demo (`cargo run --example train_ridge`, `--example balance_analysis`,
//! ...). A thin `ridge` binary exposes the same flows as subcommands for
//! scripting.

#![deny(unsafe_code)]

pub mod autodiff;
pub mod balance;
pub mod config;
pub mod dataset;
pub mod encoder;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod io;
pub mod metrics;
pub mod noise;
pub mod ssbm;
pub mod svd;
pub mod trainer;

pub use error::{Error, Result};
pub use graph::{EdgeSplit, SignedEdge, SignedGraph};
