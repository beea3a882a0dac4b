//! Command-line front end. Every subcommand is a thin wrapper over the
//! library; the runnable examples are the richer tour.

use clap::{Parser, Subcommand, ValueEnum};
use ridge::balance::{balance_degree, triangle_census};
use ridge::config::ExperimentConfig;
use ridge::dataset::{ingest_soc_sign, DatasetManifest};
use ridge::error::Result;
use ridge::experiment::{run_experiment_runs, summarize, SeedRun};
use ridge::graph::SignedGraph;
use ridge::io;
use ridge::metrics::evaluate;
use ridge::noise::{perturb, NoiseKind, NoiseSpec, Polarity};
use ridge::ssbm::{ssbm_generate, SsbmConfig};
use ridge::svd::{truncated_svd_features, FeatureScale, SvdConfig};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "ridge",
    version,
    about = "Robust signed-graph learning: ingest, perturb, train, evaluate"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Flip,
    Delete,
    Add,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolarityArg {
    All,
    Positive,
    Negative,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScaleArg {
    /// Feature rows are U * Sigma.
    USigma,
    /// Bare orthonormal U columns.
    U,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a raw rating file (source,target,rating rows) into the
    /// canonical signed edge CSV.
    Ingest {
        /// Raw input file.
        #[arg(long)]
        input: PathBuf,
        /// Canonical edge CSV to write.
        #[arg(long)]
        out: PathBuf,
        /// Manifest to verify the ingested graph against.
        #[arg(long)]
        manifest: Option<PathBuf>,
        /// Where to write the ingestion report as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Where to write the compact-id -> original-id map as CSV.
        #[arg(long)]
        ids: Option<PathBuf>,
    },
    /// Corrupt an edge list with seeded sign flips, deletions or additions.
    Perturb {
        #[arg(long)]
        edges: PathBuf,
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Corruption rate in [0, 1].
        #[arg(long)]
        gamma: f64,
        /// Restrict flips/deletions to one sign class.
        #[arg(long, value_enum, default_value = "all")]
        polarity: PolarityArg,
        #[arg(long)]
        seed: u64,
        /// Perturbed edge CSV to write.
        #[arg(long)]
        out: PathBuf,
        /// Where to write the perturbation receipt as JSON.
        #[arg(long)]
        receipt: Option<PathBuf>,
    },
    /// Compute truncated-SVD node features for an edge list.
    Features {
        #[arg(long)]
        edges: PathBuf,
        /// Feature dimension.
        #[arg(long)]
        dim: usize,
        #[arg(long, value_enum, default_value = "u-sigma")]
        scale: ScaleArg,
        /// Extra sketch columns.
        #[arg(long, default_value_t = 10)]
        oversample: usize,
        /// Subspace power iterations.
        #[arg(long, default_value_t = 2)]
        power_iters: usize,
        #[arg(long)]
        seed: u64,
        /// Feature CSV to write.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the full multi-seed protocol from a TOML config, writing a report
    /// and per-seed artifacts (splits, features, checkpoint, loss trace).
    Train {
        #[arg(long)]
        config: PathBuf,
        /// Override the config's output directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Score a trained checkpoint on held-out edges.
    Eval {
        #[arg(long)]
        checkpoint: PathBuf,
        /// Training edge CSV the checkpoint was fit on.
        #[arg(long)]
        train_edges: PathBuf,
        /// Feature CSV the checkpoint was fit with.
        #[arg(long)]
        features: PathBuf,
        /// Edge CSV with held-out signed edges to score.
        #[arg(long)]
        test_edges: PathBuf,
        /// Where to write metrics JSON (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Triangle census and degree of balance of an edge list.
    Balance {
        #[arg(long)]
        edges: PathBuf,
        /// Emit JSON instead of prose.
        #[arg(long)]
        json: bool,
    },
    /// Generate a signed stochastic block model graph.
    Ssbm {
        #[arg(long)]
        n: usize,
        /// Number of communities.
        #[arg(long)]
        k: usize,
        /// Edge probability.
        #[arg(long)]
        p: f64,
        /// Largest-to-smallest community size ratio.
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
        /// Probability of inverting each edge sign.
        #[arg(long, default_value_t = 0.0)]
        sign_flip: f64,
        #[arg(long)]
        seed: u64,
        /// Edge CSV to write.
        #[arg(long)]
        out: PathBuf,
        /// Where to write the node,community CSV.
        #[arg(long)]
        communities: Option<PathBuf>,
    },
    /// Sweep the noise rate and report metric degradation per gamma.
    Bench {
        /// Config with a [noise] section; its gamma is swept.
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated gamma values.
        #[arg(long, default_value = "0.0,0.1,0.2,0.3,0.4")]
        gammas: String,
        /// Curve CSV to write.
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Ingest {
            input,
            out,
            manifest,
            report,
            ids,
        } => {
            let ds = ingest_soc_sign(&input)?;
            if let Some(mpath) = manifest {
                DatasetManifest::load(&mpath)?.verify(&ds.graph)?;
                println!("manifest ok: {}", mpath.display());
            }
            io::write_edges_csv(&out, &ds.graph)?;
            if let Some(rpath) = report {
                io::write_json(&rpath, &ds.report)?;
            }
            if let Some(ipath) = ids {
                let mut text = String::from("compact,original\n");
                for (compact, original) in ds.original_ids.iter().enumerate() {
                    text.push_str(&format!("{compact},{original}\n"));
                }
                io::atomic_write(&ipath, text.as_bytes())?;
            }
            let r = &ds.report;
            println!(
                "{} rows -> {} nodes, {} edges ({} +, {} -)",
                r.rows, r.nodes, r.edges, r.positive, r.negative
            );
            println!(
                "dropped: {} zero-rated, {} self-loops, {} duplicates, {} conflicting pairs ({} reciprocal merges)",
                r.zero_ratings_dropped,
                r.self_loops_dropped,
                r.duplicate_rows_dropped,
                r.conflicts_dropped,
                r.reciprocals_merged
            );
            Ok(())
        }
        Command::Perturb {
            edges,
            kind,
            gamma,
            polarity,
            seed,
            out,
            receipt,
        } => {
            let g = io::read_edges_csv(&edges)?;
            let spec = NoiseSpec {
                kind: match kind {
                    KindArg::Flip => NoiseKind::Flip,
                    KindArg::Delete => NoiseKind::Delete,
                    KindArg::Add => NoiseKind::Add,
                },
                polarity: match polarity {
                    PolarityArg::All => Polarity::All,
                    PolarityArg::Positive => Polarity::Positive,
                    PolarityArg::Negative => Polarity::Negative,
                },
                gamma,
                seed,
            };
            let (noisy, rec) = perturb(&g, &spec)?;
            io::write_edges_csv(&out, &noisy)?;
            if let Some(rpath) = receipt {
                io::write_json(&rpath, &rec)?;
            }
            println!(
                "{} edges -> {} edges ({} changed, realized gamma {:.4})",
                rec.before.m, rec.after.m, rec.changed, rec.gamma_realized
            );
            Ok(())
        }
        Command::Features {
            edges,
            dim,
            scale,
            oversample,
            power_iters,
            seed,
            out,
        } => {
            let g = io::read_edges_csv(&edges)?;
            let cfg = SvdConfig {
                dim,
                oversample,
                power_iters,
                scale: match scale {
                    ScaleArg::USigma => FeatureScale::USigma,
                    ScaleArg::U => FeatureScale::U,
                },
                seed,
            };
            let f = truncated_svd_features(&g, &cfg)?;
            io::write_features_csv(&out, &f.x, &f.singular_values)?;
            let head: Vec<String> = f
                .singular_values
                .iter()
                .take(4)
                .map(|s| format!("{s:.3}"))
                .collect();
            println!(
                "{} x {} features; leading singular values: {}",
                f.x.nrows(),
                f.x.ncols(),
                head.join(", ")
            );
            Ok(())
        }
        Command::Train { config, out_dir } => {
            let cfg_dir = config
                .parent()
                .filter(|p| !p.as_os_str().is_empty())
                .map(Path::to_path_buf)
                .unwrap_or_else(|| PathBuf::from("."));
            let mut cfg = ExperimentConfig::load(&config)?;
            if let Some(dir) = out_dir {
                cfg.out_dir = dir;
            }
            let graph = cfg.load_graph(&cfg_dir)?;
            println!(
                "graph: {} nodes, {} edges; {} seed(s), {} thread(s)",
                graph.node_count(),
                graph.edge_count(),
                cfg.seeds.len(),
                cfg.threads
            );
            let spec = cfg.to_spec();
            let runs = run_experiment_runs(&graph, &spec)?;
            for run in &runs {
                write_seed_artifacts(&cfg.out_dir, run)?;
                let m = &run.result.metrics;
                println!(
                    "seed {:>3}: auc {:.4}  binary-f1 {:.4}  kept {:.3}",
                    run.result.seed, m.auc, m.binary_f1, run.result.kept_edge_fraction
                );
            }
            let report = summarize(runs.into_iter().map(|r| r.result).collect());
            io::write_json(&cfg.out_dir.join("report.json"), &report)?;
            println!(
                "auc {:.4} +/- {:.4}   binary-f1 {:.4} +/- {:.4}",
                report.auc.mean, report.auc.std, report.binary_f1.mean, report.binary_f1.std
            );
            println!("report: {}", cfg.out_dir.join("report.json").display());
            Ok(())
        }
        Command::Eval {
            checkpoint,
            train_edges,
            features,
            test_edges,
            out,
        } => {
            let model = io::read_checkpoint(&checkpoint)?;
            let train = io::read_edges_csv(&train_edges)?;
            let (x, _) = io::read_features_csv(&features)?;
            let test = io::read_edges_csv(&test_edges)?;
            let queries: Vec<(u32, u32)> = test.edges().iter().map(|e| (e.u, e.v)).collect();
            let labels: Vec<i8> = test.edges().iter().map(|e| e.sign).collect();
            let probs = model.predict(&train, &x, &queries)?;
            let metrics = evaluate(&probs, &labels)?;
            let text = serde_json::to_string_pretty(&metrics).expect("metrics serialize");
            match out {
                Some(path) => {
                    io::atomic_write(&path, text.as_bytes())?;
                    println!(
                        "auc {:.4}  binary-f1 {:.4}  -> {}",
                        metrics.auc,
                        metrics.binary_f1,
                        path.display()
                    );
                }
                None => println!("{text}"),
            }
            Ok(())
        }
        Command::Balance { edges, json } => {
            let g = io::read_edges_csv(&edges)?;
            let census = triangle_census(&g);
            let degree = balance_degree(&g).ok();
            if json {
                let payload = serde_json::json!({
                    "nodes": g.node_count(),
                    "edges": g.edge_count(),
                    "positive": g.positive_count(),
                    "negative": g.negative_count(),
                    "triangles": census.total,
                    "balanced_triangles": census.balanced,
                    "balance_degree": degree,
                });
                println!("{}", serde_json::to_string_pretty(&payload).expect("json"));
            } else {
                println!(
                    "{} nodes, {} edges ({} +, {} -)",
                    g.node_count(),
                    g.edge_count(),
                    g.positive_count(),
                    g.negative_count()
                );
                match degree {
                    Some(d) => println!(
                        "{} triangles, {} balanced -> degree of balance {:.4}",
                        census.total, census.balanced, d
                    ),
                    None => println!("no triangles"),
                }
            }
            Ok(())
        }
        Command::Ssbm {
            n,
            k,
            p,
            rho,
            sign_flip,
            seed,
            out,
            communities,
        } => {
            let sample = ssbm_generate(&SsbmConfig {
                n,
                k,
                p,
                rho,
                sign_flip,
                seed,
            })?;
            io::write_edges_csv(&out, &sample.graph)?;
            if let Some(cpath) = communities {
                let mut text = String::from("node,community\n");
                for (node, c) in sample.communities.iter().enumerate() {
                    text.push_str(&format!("{node},{c}\n"));
                }
                io::atomic_write(&cpath, text.as_bytes())?;
            }
            let g = &sample.graph;
            println!(
                "{} nodes, {} edges ({} +, {} -) -> {}",
                g.node_count(),
                g.edge_count(),
                g.positive_count(),
                g.negative_count(),
                out.display()
            );
            Ok(())
        }
        Command::Bench {
            config,
            gammas,
            out,
        } => {
            let cfg_dir = config
                .parent()
                .filter(|p| !p.as_os_str().is_empty())
                .map(Path::to_path_buf)
                .unwrap_or_else(|| PathBuf::from("."));
            let cfg = ExperimentConfig::load(&config)?;
            let Some(noise) = cfg.noise else {
                return Err(ridge::error::Error::InvalidInput(
                    "bench needs a [noise] section whose gamma it can sweep".into(),
                ));
            };
            let gammas = parse_gammas(&gammas)?;
            let graph = cfg.load_graph(&cfg_dir)?;
            let mut lines =
                vec!["gamma,auc_mean,auc_std,binary_f1_mean,binary_f1_std,macro_f1_mean,micro_f1_mean,kept_mean".to_string()];
            println!("gamma     auc              binary-f1        kept");
            for &gamma in &gammas {
                let mut spec = cfg.to_spec();
                let nz = NoiseSpec {
                    gamma,
                    ..noise.to_spec()
                };
                spec.noise = Some(nz);
                let report = ridge::experiment::run_experiment(&graph, &spec)?;
                let kept = ridge::metrics::mean_std(
                    &report
                        .runs
                        .iter()
                        .map(|r| r.kept_edge_fraction)
                        .collect::<Vec<_>>(),
                )
                .0;
                lines.push(format!(
                    "{gamma},{},{},{},{},{},{},{}",
                    report.auc.mean,
                    report.auc.std,
                    report.binary_f1.mean,
                    report.binary_f1.std,
                    report.macro_f1.mean,
                    report.micro_f1.mean,
                    kept
                ));
                println!(
                    "{gamma:<9} {:.4} +/- {:.4}  {:.4} +/- {:.4}  {kept:.3}",
                    report.auc.mean, report.auc.std, report.binary_f1.mean, report.binary_f1.std
                );
            }
            io::atomic_write(&out, (lines.join("\n") + "\n").as_bytes())?;
            println!("curve: {}", out.display());
            Ok(())
        }
    }
}

fn parse_gammas(s: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let g: f64 = part.parse().map_err(|_| {
            ridge::error::Error::InvalidInput(format!("bad gamma {part:?} in --gammas"))
        })?;
        if !(0.0..=1.0).contains(&g) {
            return Err(ridge::error::Error::OutOfRange {
                what: "gamma",
                range: "[0, 1]",
                got: g,
            });
        }
        out.push(g);
    }
    if out.is_empty() {
        return Err(ridge::error::Error::InvalidInput(
            "--gammas lists no values".into(),
        ));
    }
    Ok(out)
}

fn write_seed_artifacts(out_dir: &Path, run: &SeedRun) -> Result<()> {
    let dir = out_dir.join(format!("seed_{}", run.result.seed));
    io::write_edges_csv(&dir.join("train_edges.csv"), &run.train)?;
    let test_graph = test_edges_graph(run)?;
    io::write_edges_csv(&dir.join("test_edges.csv"), &test_graph)?;
    io::write_features_csv(
        &dir.join("features.csv"),
        &run.features.x,
        &run.features.singular_values,
    )?;
    io::write_checkpoint(&dir.join("model.ckpt"), &run.model)?;
    io::write_trace_csv(&dir.join("trace.csv"), &run.result.trace)?;
    io::write_json(&dir.join("run.json"), &run.result)?;
    Ok(())
}

/// The held-out edges as a graph over the same node ids as the train split.
fn test_edges_graph(run: &SeedRun) -> Result<SignedGraph> {
    let triples: Vec<(u32, u32, i8)> = run.test.iter().map(|e| (e.u, e.v, e.sign)).collect();
    SignedGraph::from_edge_list(run.train.node_count(), &triples)
}
