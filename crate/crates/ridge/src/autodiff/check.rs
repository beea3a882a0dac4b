//! Central finite-difference gradient checking.
//!
//! The checker is generic over "loss as a function of a flat parameter
//! vector": callers flatten whatever structure they differentiate (a single
//! op input, or every weight in the model) into `theta`, rebuild the forward
//! pass inside the closure, and hand over the analytic gradient to compare
//! against `(f(x + h e_k) - f(x - h e_k)) / 2h` coordinate by coordinate.

/// Outcome of a finite-difference sweep.
#[derive(Debug, Clone)]
pub struct GradCheckReport {
    pub max_rel_err: f64,
    /// Flat index of the worst coordinate.
    pub worst_index: usize,
    pub checked: usize,
}

impl GradCheckReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_rel_err < tol
    }
}

/// Compares `analytic` against central finite differences of `loss` at
/// `theta`, with step `h`.
///
/// Relative error per coordinate is `|fd - g| / max(|fd|, |g|, 1e-6)`; the
/// floor keeps genuinely-zero gradients (saturated clamps, dead paths) from
/// dividing by zero. The `loss` closure must be deterministic — any internal
/// randomness has to be frozen by the caller.
pub fn grad_check(
    theta: &[f64],
    mut loss: impl FnMut(&[f64]) -> f64,
    analytic: &[f64],
    h: f64,
) -> GradCheckReport {
    assert_eq!(theta.len(), analytic.len(), "gradient length mismatch");
    let mut probe = theta.to_vec();
    let mut report = GradCheckReport {
        max_rel_err: 0.0,
        worst_index: 0,
        checked: theta.len(),
    };
    for k in 0..theta.len() {
        let orig = probe[k];
        probe[k] = orig + h;
        let up = loss(&probe);
        probe[k] = orig - h;
        let down = loss(&probe);
        probe[k] = orig;
        let fd = (up - down) / (2.0 * h);
        let g = analytic[k];
        let rel = (fd - g).abs() / fd.abs().max(g.abs()).max(1e-6);
        if rel > report.max_rel_err {
            report.max_rel_err = rel;
            report.worst_index = k;
        }
    }
    report
}
