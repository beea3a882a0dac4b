//! Link-sign evaluation metrics: AUC and the F1 family.
//!
//! AUC is the Mann-Whitney statistic computed from average ranks, so tied
//! scores contribute 1/2 a win — identical to enumerating all
//! positive/negative pairs. F1 scores threshold the positive-class
//! probability at 0.5: `binary` is the positive class alone, `macro` averages
//! both per-class F1s, `micro` pools counts (which for single-label binary
//! classification equals accuracy). Zero-denominator precision/recall/F1
//! collapse to 0 by convention.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// One evaluation's scores.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub auc: f64,
    pub binary_f1: f64,
    pub macro_f1: f64,
    pub micro_f1: f64,
    pub accuracy: f64,
    pub positives: usize,
    pub negatives: usize,
}

fn validate(scores: &[f64], labels: &[i8]) -> Result<(usize, usize)> {
    if scores.len() != labels.len() {
        return Err(Error::ShapeMismatch {
            op: "metrics",
            detail: format!("{} scores vs {} labels", scores.len(), labels.len()),
        });
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::InvalidInput("non-finite score".into()));
    }
    if let Some(&l) = labels.iter().find(|&&l| l != 1 && l != -1) {
        return Err(Error::BadSign(l as i32));
    }
    let pos = labels.iter().filter(|&&l| l > 0).count();
    Ok((pos, labels.len() - pos))
}

/// Area under the ROC curve via the rank-sum form of Mann-Whitney U.
///
/// `labels` are -1/+1; `scores` are any monotone confidence for the positive
/// class. Errors when either class is absent (AUC undefined).
pub fn auc(scores: &[f64], labels: &[i8]) -> Result<f64> {
    let (pos, neg) = validate(scores, labels)?;
    if pos == 0 || neg == 0 {
        return Err(Error::DegenerateGraph {
            action: "compute AUC",
            missing: "both label classes",
        });
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].partial_cmp(&scores[b]).unwrap());

    // Average ranks over tie groups, then sum ranks of the positives.
    let mut rank_sum_pos = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        let avg_rank = (i + j + 2) as f64 / 2.0; // ranks are 1-based
        for &ix in &order[i..=j] {
            if labels[ix] > 0 {
                rank_sum_pos += avg_rank;
            }
        }
        i = j + 1;
    }
    let u = rank_sum_pos - (pos * (pos + 1)) as f64 / 2.0;
    Ok(u / (pos as f64 * neg as f64))
}

fn f1(tp: usize, fp: usize, fn_: usize) -> f64 {
    let denom = 2 * tp + fp + fn_;
    if denom == 0 {
        0.0
    } else {
        2.0 * tp as f64 / denom as f64
    }
}

/// Thresholds positive-class probabilities at 0.5 and reports the F1 family.
pub fn f1_family(prob_positive: &[f64], labels: &[i8]) -> Result<MetricsReport> {
    let (pos, neg) = validate(prob_positive, labels)?;
    let (mut tp, mut fp, mut tn, mut fn_) = (0usize, 0usize, 0usize, 0usize);
    for (&p, &l) in prob_positive.iter().zip(labels) {
        match (p >= 0.5, l > 0) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fn_ += 1,
            (false, false) => tn += 1,
        }
    }
    let binary = f1(tp, fp, fn_);
    // The negative class's F1 swaps the roles of the two classes.
    let negative_f1 = f1(tn, fn_, fp);
    let accuracy = (tp + tn) as f64 / labels.len().max(1) as f64;
    // Micro-F1 pools TP/FP/FN over both classes; in single-label binary
    // classification every error is one FP and one FN, so it equals accuracy.
    let micro = f1(tp + tn, fp + fn_, fn_ + fp);
    let report = MetricsReport {
        auc: f64::NAN, // filled by `evaluate`
        binary_f1: binary,
        macro_f1: 0.5 * (binary + negative_f1),
        micro_f1: micro,
        accuracy,
        positives: pos,
        negatives: neg,
    };
    Ok(report)
}

/// Full report: AUC plus the thresholded F1 family.
pub fn evaluate(prob_positive: &[f64], labels: &[i8]) -> Result<MetricsReport> {
    let mut report = f1_family(prob_positive, labels)?;
    report.auc = auc(prob_positive, labels)?;
    Ok(report)
}

/// Sample mean and standard deviation (n-1 denominator) of a slice.
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (xs.len() - 1) as f64;
    (mean, var.sqrt())
}
