//! Ingestion of raw weighted signed edge lists (trust networks exported as
//! `source,target,rating[,timestamp]` rows) into canonical signed graphs.
//!
//! Resolution rules, applied in reading order:
//!
//! * node ids are compacted to `0..n` by first appearance in any data row,
//!   source before target, including rows later dropped — a node mentioned
//!   only by a zero-rated or conflicting row still exists (isolated);
//! * ratings: `r > 0` becomes `+1`, `r < 0` becomes `-1`, `r = 0` carries no
//!   sign and the row is dropped (counted);
//! * self-referential rows are dropped (counted);
//! * repeats of the same *ordered* pair keep the first row's sign and drop
//!   the rest (counted), so later re-ratings never override earlier ones;
//! * a reciprocal pair rated in both directions merges into one undirected
//!   edge when the signs agree, and is dropped entirely (counted) when they
//!   conflict — a disputed tie has no defensible sign.
//!
//! Fields may be separated by commas or whitespace; header rows, blank lines
//! and `#`/`%` comments are skipped.

use crate::error::{Error, Result};
use crate::graph::SignedGraph;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fs;
use std::path::Path;

/// What ingestion saw and dropped, plus the resulting graph's shape.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestReport {
    pub nodes: usize,
    pub edges: usize,
    pub positive: usize,
    pub negative: usize,
    /// Syntactically valid data rows read (before any dropping).
    pub rows: usize,
    pub zero_ratings_dropped: usize,
    pub self_loops_dropped: usize,
    pub duplicate_rows_dropped: usize,
    /// Reciprocal ratings that agreed and were merged into one edge.
    pub reciprocals_merged: usize,
    /// Reciprocal pairs with conflicting signs, dropped entirely.
    pub conflicts_dropped: usize,
}

/// A parsed dataset: the canonical graph, the ingestion report, and the
/// original node id for each compact id.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub graph: SignedGraph,
    pub report: IngestReport,
    pub original_ids: Vec<i64>,
}

fn is_header_or_comment(line: &str) -> bool {
    let t = line.trim();
    if t.is_empty() || t.starts_with('#') || t.starts_with('%') {
        return true;
    }
    // A header row has a non-numeric first field.
    let first = t
        .split([',', ' ', '\t'])
        .find(|f| !f.is_empty())
        .unwrap_or("");
    first.parse::<f64>().is_err()
}

/// Parses soc-sign-style text into a canonical undirected signed graph.
pub fn ingest_soc_sign_text(text: &str, origin: &str) -> Result<Dataset> {
    let mut compact: HashMap<i64, u32> = HashMap::new();
    let mut original_ids: Vec<i64> = Vec::new();
    let mut id_of = |raw: i64, original_ids: &mut Vec<i64>| -> u32 {
        *compact.entry(raw).or_insert_with(|| {
            original_ids.push(raw);
            (original_ids.len() - 1) as u32
        })
    };

    let mut report = IngestReport {
        nodes: 0,
        edges: 0,
        positive: 0,
        negative: 0,
        rows: 0,
        zero_ratings_dropped: 0,
        self_loops_dropped: 0,
        duplicate_rows_dropped: 0,
        reciprocals_merged: 0,
        conflicts_dropped: 0,
    };

    // First surviving sign per ordered pair.
    let mut directed: HashMap<(u32, u32), i8> = HashMap::new();
    // Ordered-pair first-appearance order, for deterministic reciprocal
    // resolution independent of hash iteration.
    let mut order: Vec<(u32, u32)> = Vec::new();

    for (ix, raw) in text.lines().enumerate() {
        if is_header_or_comment(raw) {
            continue;
        }
        let line = ix + 1;
        let fields: Vec<&str> = raw
            .split([',', ' ', '\t'])
            .filter(|f| !f.is_empty())
            .collect();
        if fields.len() < 3 {
            return Err(Error::Parse {
                path: origin.into(),
                line,
                msg: format!("expected source,target,rating; got {} fields", fields.len()),
            });
        }
        let src: i64 = fields[0].parse().map_err(|_| Error::Parse {
            path: origin.into(),
            line,
            msg: format!("bad source id {:?}", fields[0]),
        })?;
        let dst: i64 = fields[1].parse().map_err(|_| Error::Parse {
            path: origin.into(),
            line,
            msg: format!("bad target id {:?}", fields[1]),
        })?;
        let rating: f64 = fields[2].parse().map_err(|_| Error::Parse {
            path: origin.into(),
            line,
            msg: format!("bad rating {:?}", fields[2]),
        })?;
        if !rating.is_finite() {
            return Err(Error::Parse {
                path: origin.into(),
                line,
                msg: "non-finite rating".into(),
            });
        }
        report.rows += 1;
        let u = id_of(src, &mut original_ids);
        let v = id_of(dst, &mut original_ids);

        if rating == 0.0 {
            report.zero_ratings_dropped += 1;
            continue;
        }
        if u == v {
            report.self_loops_dropped += 1;
            continue;
        }
        let sign: i8 = if rating > 0.0 { 1 } else { -1 };
        match directed.entry((u, v)) {
            std::collections::hash_map::Entry::Occupied(_) => {
                report.duplicate_rows_dropped += 1;
            }
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(sign);
                order.push((u, v));
            }
        }
    }

    // Merge reciprocal directions in first-appearance order.
    let mut triples: Vec<(u32, u32, i8)> = Vec::new();
    for &(u, v) in &order {
        let Some(&sign) = directed.get(&(u, v)) else {
            continue; // already consumed or dropped by its reciprocal
        };
        match directed.get(&(v, u)).copied() {
            Some(back) if back == sign => {
                report.reciprocals_merged += 1;
                directed.remove(&(v, u));
                triples.push((u, v, sign));
            }
            Some(_) => {
                report.conflicts_dropped += 1;
                directed.remove(&(v, u));
                directed.remove(&(u, v));
            }
            None => triples.push((u, v, sign)),
        }
    }

    let graph = SignedGraph::from_edge_list(original_ids.len(), &triples)?;
    report.nodes = graph.node_count();
    report.edges = graph.edge_count();
    report.positive = graph.positive_count();
    report.negative = graph.negative_count();
    Ok(Dataset {
        graph,
        report,
        original_ids,
    })
}

pub fn ingest_soc_sign(path: &Path) -> Result<Dataset> {
    let text = fs::read_to_string(path)?;
    ingest_soc_sign_text(&text, &path.display().to_string())
}

/// Shape a dataset is expected to have after ingestion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedStats {
    pub nodes: usize,
    pub edges: usize,
    pub positive: usize,
    pub negative: usize,
    /// Total triangles, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triangles: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub balanced_triangles: Option<u64>,
}

/// Sidecar metadata pinning what a dataset file must ingest to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetManifest {
    pub name: String,
    /// Dataset file path, relative to the manifest's directory.
    pub file: String,
    pub expected: ExpectedStats,
}

impl DatasetManifest {
    pub fn load(path: &Path) -> Result<DatasetManifest> {
        crate::io::read_json(path)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        crate::io::write_json(path, self)
    }

    /// The dataset file's location, resolved against the manifest's directory.
    pub fn resolve_file(&self, manifest_path: &Path) -> std::path::PathBuf {
        match manifest_path.parent() {
            Some(dir) => dir.join(&self.file),
            None => Path::new(&self.file).to_path_buf(),
        }
    }

    /// Checks an ingested graph against the pinned stats.
    pub fn verify(&self, g: &SignedGraph) -> Result<()> {
        let checks = [
            ("nodes", self.expected.nodes, g.node_count()),
            ("edges", self.expected.edges, g.edge_count()),
            ("positive", self.expected.positive, g.positive_count()),
            ("negative", self.expected.negative, g.negative_count()),
        ];
        for (field, expected, got) in checks {
            if expected != got {
                return Err(Error::ManifestMismatch {
                    field,
                    expected: expected as i64,
                    got: got as i64,
                });
            }
        }
        if self.expected.triangles.is_some() || self.expected.balanced_triangles.is_some() {
            let census = crate::balance::triangle_census(g);
            if let Some(t) = self.expected.triangles {
                if census.total != t {
                    return Err(Error::ManifestMismatch {
                        field: "triangles",
                        expected: t as i64,
                        got: census.total as i64,
                    });
                }
            }
            if let Some(b) = self.expected.balanced_triangles {
                if census.balanced != b {
                    return Err(Error::ManifestMismatch {
                        field: "balanced_triangles",
                        expected: b as i64,
                        got: census.balanced as i64,
                    });
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Hand-counted fixture exercising every resolution rule.
    ///
    /// Data rows and their fates:
    ///   10 -> 20  rating  3.0   edge (10,20,+)
    ///   20 -> 30  rating -2.0   edge (20,30,-)
    ///   30 -> 10  rating  0.0   zero rating, dropped; node 30 already known
    ///   40 -> 40  rating  5.0   self loop, dropped; node 40 registered
    ///   10 -> 20  rating -9.0   duplicate ordered pair, dropped (first wins)
    ///   20 -> 10  rating  1.0   reciprocal of (10,20,+), agrees: merged
    ///   30 -> 50  rating -1.0   edge (30,50,-) ... until its reciprocal:
    ///   50 -> 30  rating  4.0   conflict! both directions dropped
    ///   60 -> 10  rating -0.5   edge (60,10,-)
    ///
    /// Node first-appearance order: 10, 20, 30, 40, 50, 60 -> compact 0..6.
    /// Final undirected edges (compact ids): (0,1,+), (1,2,-), (0,5,-).
    const FIXTURE: &str = "\
source,target,rating,time
# trust network export
10,20,3.0,1000
20 30 -2.0 1001
30,10,0.0,1002
40,40,5.0,1003
10,20,-9.0,1004
20,10,1.0,1005
30\t50\t-1.0\t1006
50,30,4.0,1007
60,10,-0.5,1008
";

    #[test]
    fn ingest_applies_every_rule_as_counted_by_hand() {
        let ds = ingest_soc_sign_text(FIXTURE, "fixture").unwrap();
        let r = &ds.report;
        assert_eq!(r.rows, 9);
        assert_eq!(r.zero_ratings_dropped, 1);
        assert_eq!(r.self_loops_dropped, 1);
        assert_eq!(r.duplicate_rows_dropped, 1);
        assert_eq!(r.reciprocals_merged, 1);
        assert_eq!(r.conflicts_dropped, 1);
        assert_eq!(r.nodes, 6);
        assert_eq!(r.edges, 3);
        assert_eq!(r.positive, 1);
        assert_eq!(r.negative, 2);

        assert_eq!(ds.original_ids, vec![10, 20, 30, 40, 50, 60]);
        let got: Vec<(u32, u32, i8)> = ds
            .graph
            .edges()
            .iter()
            .map(|e| (e.u, e.v, e.sign))
            .collect();
        assert_eq!(got, vec![(0, 1, 1), (0, 5, -1), (1, 2, -1)]);
    }

    #[test]
    fn first_rating_wins_over_later_rerating() {
        // Same ordered pair rated +, then -: the + survives.
        let ds = ingest_soc_sign_text("1,2,5\n1,2,-5\n", "t").unwrap();
        assert_eq!(ds.graph.edges()[0].sign, 1);
        assert_eq!(ds.report.duplicate_rows_dropped, 1);

        // Ordered duplicates resolve before reciprocal comparison: the
        // surviving (1,2,+) then conflicts with (2,1,-).
        let ds = ingest_soc_sign_text("1,2,5\n1,2,-5\n2,1,-1\n", "t").unwrap();
        assert_eq!(ds.graph.edge_count(), 0);
        assert_eq!(ds.report.conflicts_dropped, 1);
        assert_eq!(ds.report.nodes, 2);
    }

    #[test]
    fn isolated_nodes_from_dropped_rows_still_count() {
        let ds = ingest_soc_sign_text("1,2,1\n3,4,0\n", "t").unwrap();
        assert_eq!(ds.report.nodes, 4);
        assert_eq!(ds.report.edges, 1);
    }

    #[test]
    fn rating_magnitude_does_not_matter_only_sign() {
        let ds = ingest_soc_sign_text("1,2,0.001\n2,3,-10\n3,4,10\n", "t").unwrap();
        assert_eq!(ds.report.positive, 2);
        assert_eq!(ds.report.negative, 1);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = ingest_soc_sign_text("1,2,1\n1,two,1\n", "somewhere").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("somewhere:2"), "got {msg}");

        let err = ingest_soc_sign_text("1,2\n", "t").unwrap_err();
        assert!(err.to_string().contains("2 fields"), "got {err}");

        assert!(ingest_soc_sign_text("1,2,inf\n", "t").is_err());
    }

    #[test]
    fn header_detection_is_not_fooled_by_numeric_rows() {
        // No header at all: first row is data.
        let ds = ingest_soc_sign_text("7,8,1\n", "t").unwrap();
        assert_eq!(ds.report.rows, 1);
        // Percent comments and blank lines are skipped.
        let ds = ingest_soc_sign_text("% comment\n\n7,8,1\n", "t").unwrap();
        assert_eq!(ds.report.rows, 1);
    }

    #[test]
    fn manifest_verify_matches_and_mismatches() {
        let ds = ingest_soc_sign_text(FIXTURE, "fixture").unwrap();
        let manifest = DatasetManifest {
            name: "fixture".into(),
            file: "fixture.csv".into(),
            expected: ExpectedStats {
                nodes: 6,
                edges: 3,
                positive: 1,
                negative: 2,
                triangles: Some(0),
                balanced_triangles: None,
            },
        };
        manifest.verify(&ds.graph).unwrap();

        let mut wrong = manifest.clone();
        wrong.expected.edges = 4;
        let err = wrong.verify(&ds.graph).unwrap_err();
        assert!(matches!(err, Error::ManifestMismatch { field: "edges", .. }));
    }

    #[test]
    fn bundled_fixture_matches_its_manifest() {
        let mpath = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/trust_fixture.json");
        let manifest = DatasetManifest::load(&mpath).unwrap();
        let ds = ingest_soc_sign(&manifest.resolve_file(&mpath)).unwrap();
        manifest.verify(&ds.graph).unwrap();
        // The messy rows are all represented: every drop rule fires.
        let r = &ds.report;
        assert!(r.zero_ratings_dropped > 0);
        assert!(r.self_loops_dropped > 0);
        assert!(r.duplicate_rows_dropped > 0);
        assert!(r.reciprocals_merged > 0);
        assert!(r.conflicts_dropped > 0);
        // Nodes mentioned only by zero-rated rows survive as isolated nodes.
        assert!(ds.report.nodes > 70);
    }

    #[test]
    fn manifest_json_roundtrip_and_file_resolution() {
        let dir = tempfile::tempdir().unwrap();
        let mpath = dir.path().join("meta/alpha.json");
        let manifest = DatasetManifest {
            name: "alpha".into(),
            file: "../raw/alpha.csv".into(),
            expected: ExpectedStats {
                nodes: 1,
                edges: 0,
                positive: 0,
                negative: 0,
                triangles: None,
                balanced_triangles: None,
            },
        };
        manifest.save(&mpath).unwrap();
        let back = DatasetManifest::load(&mpath).unwrap();
        assert_eq!(back, manifest);
        assert_eq!(
            back.resolve_file(&mpath),
            dir.path().join("meta/../raw/alpha.csv")
        );
    }
}
