//! Ingesting a raw trust-network export.
//!
//! Runs the bundled fixture (or a file you pass as the first argument)
//! through the full cleaning pipeline — sign thresholding, self-loop and
//! duplicate removal, reciprocal-pair resolution — and prints the account of
//! every dropped row.

use ridge::balance::balance_degree;
use ridge::dataset::{ingest_soc_sign, DatasetManifest};
use std::path::{Path, PathBuf};

fn main() {
    let arg = std::env::args().nth(1).map(PathBuf::from);
    let fixture = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/trust_fixture.csv");
    let path = arg.unwrap_or(fixture);

    let ds = ingest_soc_sign(&path).unwrap();
    let r = &ds.report;
    println!("{}", path.display());
    println!(
        "  {} data rows -> {} nodes, {} edges ({} positive, {} negative)",
        r.rows, r.nodes, r.edges, r.positive, r.negative
    );
    println!("  dropped {} zero-rated rows", r.zero_ratings_dropped);
    println!("  dropped {} self-loops", r.self_loops_dropped);
    println!("  dropped {} repeat ratings (first kept)", r.duplicate_rows_dropped);
    println!(
        "  merged {} agreeing reciprocal pairs, dropped {} conflicting ones",
        r.reciprocals_merged, r.conflicts_dropped
    );
    if let Ok(d3) = balance_degree(&ds.graph) {
        println!("  degree of balance: {d3:.4}");
    }

    // Compact ids are assigned by first appearance; the original ids ride
    // along for joining back to the source data.
    let shown = ds.original_ids.len().min(5);
    println!(
        "  id map (first {shown}): {:?}",
        &ds.original_ids[..shown]
    );

    // A manifest next to the file pins what ingestion must produce.
    let manifest_path = path.with_extension("json");
    if manifest_path.exists() {
        let manifest = DatasetManifest::load(&manifest_path).unwrap();
        manifest.verify(&ds.graph).unwrap();
        println!("  matches manifest {:?}", manifest.name);
    }
}
