//! On-disk formats: canonical edge lists, feature matrices, loss traces,
//! JSON reports, and binary model checkpoints.
//!
//! Every writer goes through [`atomic_write`]: content lands in a temp file
//! in the destination directory and is renamed into place, so readers never
//! observe a half-written file and an interrupted run leaves the previous
//! version intact.

use crate::error::{Error, Result};
use crate::graph::SignedGraph;
use crate::trainer::{EpochTrace, RidgeConfig, RidgeModel};
use ndarray::Array2;
use serde::{de::DeserializeOwned, Deserialize, Serialize};
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

/// Writes `bytes` to `path` via a same-directory temp file and rename,
/// creating parent directories as needed.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let parent = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    fs::create_dir_all(parent)?;
    let stem = path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into());
    let tmp = parent.join(format!(
        ".{stem}.{}.{}.tmp",
        std::process::id(),
        TMP_COUNTER.fetch_add(1, Ordering::Relaxed)
    ));
    let write = (|| -> Result<()> {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        Ok(())
    })();
    if let Err(e) = write {
        let _ = fs::remove_file(&tmp);
        return Err(e);
    }
    if let Err(e) = fs::rename(&tmp, path) {
        let _ = fs::remove_file(&tmp);
        return Err(e.into());
    }
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    atomic_write(path, s.as_bytes())
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        line,
        msg: msg.into(),
    }
}

/// Canonical edge list: a `# nodes=N` header (isolated trailing nodes would
/// otherwise be lost), a column header, then one sorted `u,v,sign` row per
/// undirected edge.
pub fn write_edges_csv(path: &Path, g: &SignedGraph) -> Result<()> {
    let mut s = String::with_capacity(16 * g.edge_count() + 32);
    let _ = writeln!(s, "# nodes={}", g.node_count());
    s.push_str("u,v,sign\n");
    for e in g.edges() {
        let _ = writeln!(s, "{},{},{}", e.u, e.v, e.sign);
    }
    atomic_write(path, s.as_bytes())
}

pub fn read_edges_csv(path: &Path) -> Result<SignedGraph> {
    let text = fs::read_to_string(path)?;
    let mut n: Option<usize> = None;
    let mut triples = Vec::new();
    for (ix, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(v) = rest.trim().strip_prefix("nodes=") {
                n = Some(
                    v.trim()
                        .parse()
                        .map_err(|_| parse_err(path, ix + 1, "bad nodes= header"))?,
                );
            }
            continue;
        }
        if line == "u,v,sign" {
            continue;
        }
        let mut parts = line.split(',').map(str::trim);
        let (u, v, s) = match (parts.next(), parts.next(), parts.next(), parts.next()) {
            (Some(u), Some(v), Some(s), None) => (u, v, s),
            _ => return Err(parse_err(path, ix + 1, "expected u,v,sign")),
        };
        let u: u32 = u
            .parse()
            .map_err(|_| parse_err(path, ix + 1, "bad node id"))?;
        let v: u32 = v
            .parse()
            .map_err(|_| parse_err(path, ix + 1, "bad node id"))?;
        let s: i8 = s.parse().map_err(|_| parse_err(path, ix + 1, "bad sign"))?;
        triples.push((u, v, s));
    }
    let n = n.ok_or_else(|| parse_err(path, 0, "missing '# nodes=' header"))?;
    SignedGraph::from_edge_list(n, &triples)
}

/// Feature matrix CSV: `# rows=N cols=D` header, optional
/// `# singular_values=...` provenance, then one row of `cols` floats per node.
pub fn write_features_csv(path: &Path, x: &Array2<f64>, singular_values: &[f64]) -> Result<()> {
    let (n, d) = x.dim();
    let mut s = String::new();
    let _ = writeln!(s, "# rows={n} cols={d}");
    if !singular_values.is_empty() {
        let vals: Vec<String> = singular_values.iter().map(|v| format!("{v:.17e}")).collect();
        let _ = writeln!(s, "# singular_values={}", vals.join(","));
    }
    for i in 0..n {
        let row: Vec<String> = (0..d).map(|j| format!("{:.17e}", x[(i, j)])).collect();
        let _ = writeln!(s, "{}", row.join(","));
    }
    atomic_write(path, s.as_bytes())
}

pub fn read_features_csv(path: &Path) -> Result<(Array2<f64>, Vec<f64>)> {
    let text = fs::read_to_string(path)?;
    let mut shape: Option<(usize, usize)> = None;
    let mut singular_values = Vec::new();
    let mut rows: Vec<f64> = Vec::new();
    let mut seen_rows = 0usize;
    for (ix, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let rest = rest.trim();
            if let Some(v) = rest.strip_prefix("rows=") {
                // "rows=N cols=D"
                let mut it = v.split_whitespace();
                let r: usize = it
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| parse_err(path, ix + 1, "bad rows="))?;
                let c: usize = it
                    .next()
                    .and_then(|t| t.strip_prefix("cols="))
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| parse_err(path, ix + 1, "bad cols="))?;
                shape = Some((r, c));
            } else if let Some(v) = rest.strip_prefix("singular_values=") {
                for t in v.split(',') {
                    singular_values.push(
                        t.trim()
                            .parse()
                            .map_err(|_| parse_err(path, ix + 1, "bad singular value"))?,
                    );
                }
            }
            continue;
        }
        let (r, c) = shape.ok_or_else(|| parse_err(path, ix + 1, "data before header"))?;
        let before = rows.len();
        for t in line.split(',') {
            rows.push(
                t.trim()
                    .parse()
                    .map_err(|_| parse_err(path, ix + 1, "bad float"))?,
            );
        }
        if rows.len() - before != c {
            return Err(parse_err(path, ix + 1, format!("expected {c} columns")));
        }
        seen_rows += 1;
        if seen_rows > r {
            return Err(parse_err(path, ix + 1, "more rows than declared"));
        }
    }
    let (r, c) = shape.ok_or_else(|| parse_err(path, 0, "missing '# rows=' header"))?;
    if seen_rows != r {
        return Err(parse_err(path, 0, format!("expected {r} rows, got {seen_rows}")));
    }
    let x = Array2::from_shape_vec((r, c), rows).expect("shape checked");
    Ok((x, singular_values))
}

/// Loss trace CSV with one row per epoch.
pub fn write_trace_csv(path: &Path, trace: &[EpochTrace]) -> Result<()> {
    let mut s = String::from("epoch,total,cls,kl_y,kl_g,kept_labels\n");
    for t in trace {
        let _ = writeln!(
            s,
            "{},{:.17e},{:.17e},{:.17e},{:.17e},{}",
            t.epoch, t.total, t.cls, t.kl_y, t.kl_g, t.kept_labels
        );
    }
    atomic_write(path, s.as_bytes())
}

pub fn read_trace_csv(path: &Path) -> Result<Vec<EpochTrace>> {
    let text = fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (ix, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with("epoch,") {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 6 {
            return Err(parse_err(path, ix + 1, "expected 6 columns"));
        }
        let bad = |what: &str| parse_err(path, ix + 1, format!("bad {what}"));
        out.push(EpochTrace {
            epoch: parts[0].parse().map_err(|_| bad("epoch"))?,
            total: parts[1].parse().map_err(|_| bad("total"))?,
            cls: parts[2].parse().map_err(|_| bad("cls"))?,
            kl_y: parts[3].parse().map_err(|_| bad("kl_y"))?,
            kl_g: parts[4].parse().map_err(|_| bad("kl_g"))?,
            kept_labels: parts[5].parse().map_err(|_| bad("kept_labels"))?,
        });
    }
    Ok(out)
}

const CKPT_MAGIC: &[u8; 8] = b"RIDGEM01";

#[derive(Serialize, Deserialize)]
struct CkptHeader {
    config: RidgeConfig,
    nodes: usize,
    feature_dim: usize,
    encoder_len: usize,
    trace: Vec<EpochTrace>,
}

/// Binary checkpoint: magic, little-endian u64 header length, JSON header,
/// then encoder weights and mask logits as little-endian f64.
pub fn write_checkpoint(path: &Path, model: &RidgeModel) -> Result<()> {
    let flat = model.params.flat();
    let header = CkptHeader {
        config: model.config,
        nodes: model.mask_logits.nrows(),
        feature_dim: model.mask_logits.ncols(),
        encoder_len: flat.len(),
        trace: model.trace.clone(),
    };
    let hjson = serde_json::to_vec(&header)?;
    let mut bytes = Vec::with_capacity(
        CKPT_MAGIC.len() + 8 + hjson.len() + 8 * (flat.len() + model.mask_logits.len()),
    );
    bytes.extend_from_slice(CKPT_MAGIC);
    bytes.extend_from_slice(&(hjson.len() as u64).to_le_bytes());
    bytes.extend_from_slice(&hjson);
    for v in flat.iter().chain(model.mask_logits.iter()) {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    atomic_write(path, &bytes)
}

pub fn read_checkpoint(path: &Path) -> Result<RidgeModel> {
    let bytes = fs::read(path)?;
    let fail = |msg: &str| Error::Checkpoint(format!("{}: {msg}", path.display()));
    if bytes.len() < CKPT_MAGIC.len() + 8 || &bytes[..CKPT_MAGIC.len()] != CKPT_MAGIC {
        return Err(fail("not a checkpoint file"));
    }
    let mut at = CKPT_MAGIC.len();
    let hlen = u64::from_le_bytes(bytes[at..at + 8].try_into().expect("8 bytes")) as usize;
    at += 8;
    if bytes.len() < at + hlen {
        return Err(fail("truncated header"));
    }
    let header: CkptHeader = serde_json::from_slice(&bytes[at..at + hlen])
        .map_err(|e| fail(&format!("bad header: {e}")))?;
    at += hlen;
    let want = header.encoder_len + header.nodes * header.feature_dim;
    let have = (bytes.len() - at) / 8;
    if bytes.len() - at != want * 8 {
        return Err(fail(&format!("expected {want} weights, found {have}")));
    }
    let mut vals = Vec::with_capacity(want);
    for chunk in bytes[at..].chunks_exact(8) {
        vals.push(f64::from_le_bytes(chunk.try_into().expect("8 bytes")));
    }
    let mask = Array2::from_shape_vec(
        (header.nodes, header.feature_dim),
        vals[header.encoder_len..].to_vec(),
    )
    .expect("size checked");
    RidgeModel::from_parts(header.config, &vals[..header.encoder_len], mask, header.trace)
}
