//! Reverse-mode automatic differentiation on a Wengert tape.
//!
//! Every operation appends one node holding its value and the indices of its
//! inputs, so node order *is* a topological order. [`Tape::backward`] walks the
//! list once in reverse, accumulating adjoints across fan-out; each node is
//! visited exactly once. Everything is dense `f64` on two-dimensional arrays
//! (scalars are 1x1, vectors are column matrices).
//!
//! Two deliberately non-smooth pieces live behind explicit custom ops instead
//! of being hidden inside smooth primitives:
//!
//! - [`Tape::ste_gate`] — hard Bernoulli/threshold keep-gates whose backward is
//!   the straight-through identity (or nothing, in [`SteMode::Detach`], which
//!   exists so finite-difference checks can isolate the smooth part);
//! - [`Tape::incidence_agg`] — gated sparse neighbor aggregation over a
//!   prebuilt [`IncidencePlan`], the only sparse operation the encoder needs.
//!
//! A tape is single-threaded and lives for one forward/backward pass.

pub mod check;

pub use check::{grad_check, GradCheckReport};

use ndarray::{Array2, Axis};
use std::sync::Arc;

/// Handle to a tape node. Valid only for the tape that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Tx(usize);

/// How a straight-through gate behaves in backward.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SteMode {
    /// Backward passes the upstream adjoint through unchanged.
    Identity,
    /// Backward drops the path entirely (for gradient checking).
    Detach,
}

/// Sparse gather-sum schedule: `out[row] += weight * gate[gate_ix] * x[src]`.
///
/// Built once per epoch from a (possibly gated) adjacency; `weight` carries the
/// 1/degree normalization of a neighborhood mean, with the degree of *kept*
/// neighbors treated as a constant.
#[derive(Debug, Clone, Default)]
pub struct IncidencePlan {
    pub out_rows: usize,
    /// (out_row, src_row, gate_ix, weight) per contribution.
    pub entries: Vec<(u32, u32, u32, f64)>,
}

enum Op {
    Leaf,
    Constant,
    MatMul(Tx, Tx),
    Add(Tx, Tx),
    Sub(Tx, Tx),
    Mul(Tx, Tx),
    Div(Tx, Tx),
    Scale(Tx, f64),
    AddScalar(Tx),
    ConcatCols(Vec<Tx>),
    SliceCols(Tx, usize, usize),
    GatherRows(Tx, Arc<Vec<u32>>),
    Sum(Tx),
    Mean(Tx),
    RowSum(Tx),
    Sigmoid(Tx),
    Tanh(Tx),
    Softplus(Tx),
    Log(Tx),
    Exp(Tx),
    Square(Tx),
    BroadcastAddRow(Tx, Tx),
    Clamp(Tx, f64, f64),
    SteGate(Tx, SteMode),
    IncidenceAgg {
        x: Tx,
        gates: Option<Tx>,
        plan: Arc<IncidencePlan>,
    },
}

struct Node {
    value: Array2<f64>,
    op: Op,
}

/// Gradient tape. Append-only; freshly constructed per forward/backward pass.
#[derive(Default)]
pub struct Tape {
    nodes: Vec<Node>,
}

/// Gradients by tape node, produced by [`Tape::backward`].
pub struct Grads {
    by_node: Vec<Option<Array2<f64>>>,
}

impl Grads {
    /// Adjoint of a node; zeros if the loss never reached it.
    pub fn of(&self, t: Tx, tape: &Tape) -> Array2<f64> {
        match &self.by_node[t.0] {
            Some(g) => g.clone(),
            None => Array2::zeros(tape.nodes[t.0].value.raw_dim()),
        }
    }

    pub fn take(&mut self, t: Tx) -> Option<Array2<f64>> {
        self.by_node[t.0].take()
    }
}

fn stable_sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

fn stable_softplus(x: f64) -> f64 {
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

impl Tape {
    pub fn new() -> Self {
        Tape::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn value(&self, t: Tx) -> &Array2<f64> {
        &self.nodes[t.0].value
    }

    pub fn shape(&self, t: Tx) -> (usize, usize) {
        let d = self.nodes[t.0].value.dim();
        (d.0, d.1)
    }

    /// Scalar value of a 1x1 node (loss terms).
    pub fn scalar(&self, t: Tx) -> f64 {
        assert_eq!(self.shape(t), (1, 1), "scalar() on non-scalar node");
        self.nodes[t.0].value[(0, 0)]
    }

    fn push(&mut self, value: Array2<f64>, op: Op) -> Tx {
        self.nodes.push(Node { value, op });
        Tx(self.nodes.len() - 1)
    }

    /// Differentiable leaf (parameter).
    pub fn leaf(&mut self, value: Array2<f64>) -> Tx {
        self.push(value, Op::Leaf)
    }

    /// Non-differentiable input.
    pub fn constant(&mut self, value: Array2<f64>) -> Tx {
        self.push(value, Op::Constant)
    }

    pub fn matmul(&mut self, a: Tx, b: Tx) -> Tx {
        let (ar, ac) = self.shape(a);
        let (br, bc) = self.shape(b);
        assert_eq!(ac, br, "matmul {ar}x{ac} . {br}x{bc}");
        let v = self.nodes[a.0].value.dot(&self.nodes[b.0].value);
        self.push(v, Op::MatMul(a, b))
    }

    pub fn add(&mut self, a: Tx, b: Tx) -> Tx {
        assert_eq!(self.shape(a), self.shape(b), "add shapes differ");
        let v = &self.nodes[a.0].value + &self.nodes[b.0].value;
        self.push(v, Op::Add(a, b))
    }

    pub fn sub(&mut self, a: Tx, b: Tx) -> Tx {
        assert_eq!(self.shape(a), self.shape(b), "sub shapes differ");
        let v = &self.nodes[a.0].value - &self.nodes[b.0].value;
        self.push(v, Op::Sub(a, b))
    }

    pub fn mul(&mut self, a: Tx, b: Tx) -> Tx {
        assert_eq!(self.shape(a), self.shape(b), "mul shapes differ");
        let v = &self.nodes[a.0].value * &self.nodes[b.0].value;
        self.push(v, Op::Mul(a, b))
    }

    /// Elementwise quotient. The caller is responsible for keeping the
    /// denominator away from zero.
    pub fn div(&mut self, a: Tx, b: Tx) -> Tx {
        assert_eq!(self.shape(a), self.shape(b), "div shapes differ");
        let v = &self.nodes[a.0].value / &self.nodes[b.0].value;
        self.push(v, Op::Div(a, b))
    }

    pub fn scale(&mut self, a: Tx, c: f64) -> Tx {
        let v = &self.nodes[a.0].value * c;
        self.push(v, Op::Scale(a, c))
    }

    pub fn add_scalar(&mut self, a: Tx, c: f64) -> Tx {
        let v = &self.nodes[a.0].value + c;
        self.push(v, Op::AddScalar(a))
    }

    /// Column-wise concatenation of matrices with equal row counts.
    pub fn concat_cols(&mut self, parts: &[Tx]) -> Tx {
        assert!(!parts.is_empty());
        let rows = self.shape(parts[0]).0;
        let cols: usize = parts.iter().map(|&p| self.shape(p).1).sum();
        let mut v = Array2::zeros((rows, cols));
        let mut at = 0;
        for &p in parts {
            let (r, c) = self.shape(p);
            assert_eq!(r, rows, "concat_cols row mismatch");
            v.slice_mut(ndarray::s![.., at..at + c])
                .assign(&self.nodes[p.0].value);
            at += c;
        }
        self.push(v, Op::ConcatCols(parts.to_vec()))
    }

    /// Contiguous column slice `[from, to)`.
    pub fn slice_cols(&mut self, a: Tx, from: usize, to: usize) -> Tx {
        let (_, c) = self.shape(a);
        assert!(from < to && to <= c, "slice_cols {from}..{to} of {c}");
        let v = self.nodes[a.0].value.slice(ndarray::s![.., from..to]).to_owned();
        self.push(v, Op::SliceCols(a, from, to))
    }

    /// Row gather: output row i is input row `rows[i]`. Rows may repeat;
    /// backward scatter-adds.
    pub fn gather_rows(&mut self, a: Tx, rows: Arc<Vec<u32>>) -> Tx {
        let (r, c) = self.shape(a);
        let mut v = Array2::zeros((rows.len(), c));
        for (i, &s) in rows.iter().enumerate() {
            assert!((s as usize) < r, "gather_rows row {s} of {r}");
            v.row_mut(i).assign(&self.nodes[a.0].value.row(s as usize));
        }
        self.push(v, Op::GatherRows(a, rows))
    }

    /// Sum of all entries, as a 1x1 node.
    pub fn sum(&mut self, a: Tx) -> Tx {
        let s = self.nodes[a.0].value.sum();
        self.push(Array2::from_elem((1, 1), s), Op::Sum(a))
    }

    /// Mean of all entries, as a 1x1 node.
    pub fn mean(&mut self, a: Tx) -> Tx {
        let v = &self.nodes[a.0].value;
        let m = v.sum() / v.len() as f64;
        self.push(Array2::from_elem((1, 1), m), Op::Mean(a))
    }

    /// Per-row sum: (m x d) -> (m x 1).
    pub fn row_sum(&mut self, a: Tx) -> Tx {
        let v = self.nodes[a.0]
            .value
            .sum_axis(Axis(1))
            .insert_axis(Axis(1));
        self.push(v, Op::RowSum(a))
    }

    pub fn sigmoid(&mut self, a: Tx) -> Tx {
        let v = self.nodes[a.0].value.mapv(stable_sigmoid);
        self.push(v, Op::Sigmoid(a))
    }

    pub fn tanh(&mut self, a: Tx) -> Tx {
        let v = self.nodes[a.0].value.mapv(f64::tanh);
        self.push(v, Op::Tanh(a))
    }

    pub fn softplus(&mut self, a: Tx) -> Tx {
        let v = self.nodes[a.0].value.mapv(stable_softplus);
        self.push(v, Op::Softplus(a))
    }

    pub fn log(&mut self, a: Tx) -> Tx {
        let v = self.nodes[a.0].value.mapv(f64::ln);
        self.push(v, Op::Log(a))
    }

    pub fn exp(&mut self, a: Tx) -> Tx {
        let v = self.nodes[a.0].value.mapv(f64::exp);
        self.push(v, Op::Exp(a))
    }

    pub fn square(&mut self, a: Tx) -> Tx {
        let v = self.nodes[a.0].value.mapv(|x| x * x);
        self.push(v, Op::Square(a))
    }

    /// `(n x d) + (1 x d)` with the row broadcast down every row.
    pub fn broadcast_add_row(&mut self, a: Tx, row: Tx) -> Tx {
        let (_, ac) = self.shape(a);
        let (rr, rc) = self.shape(row);
        assert_eq!((rr, rc), (1, ac), "broadcast_add_row wants 1x{ac}");
        let v = &self.nodes[a.0].value + &self.nodes[row.0].value;
        self.push(v, Op::BroadcastAddRow(a, row))
    }

    /// Clamp to `[lo, hi]`; gradient passes only strictly inside the interval.
    pub fn clamp(&mut self, a: Tx, lo: f64, hi: f64) -> Tx {
        let v = self.nodes[a.0].value.mapv(|x| x.clamp(lo, hi));
        self.push(v, Op::Clamp(a, lo, hi))
    }

    /// Straight-through keep-gate.
    ///
    /// Forward emits hard 0/1 gates: `1[draw < p]` given per-entry uniform
    /// `draws`, or `1[p >= 0.5]` when `draws` is `None` (threshold mode).
    /// Backward is the straight-through identity (or nothing under
    /// [`SteMode::Detach`]).
    pub fn ste_gate(&mut self, p: Tx, draws: Option<&[f64]>, mode: SteMode) -> Tx {
        let pv = &self.nodes[p.0].value;
        let v = match draws {
            Some(u) => {
                assert_eq!(u.len(), pv.len(), "ste_gate draw count");
                let mut out = Array2::zeros(pv.raw_dim());
                for (o, (x, &d)) in out.iter_mut().zip(pv.iter().zip(u.iter())) {
                    *o = if d < *x { 1.0 } else { 0.0 };
                }
                out
            }
            None => pv.mapv(|x| if x >= 0.5 { 1.0 } else { 0.0 }),
        };
        self.push(v, Op::SteGate(p, mode))
    }

    /// Gated sparse aggregation over an incidence plan; see [`IncidencePlan`].
    pub fn incidence_agg(&mut self, x: Tx, gates: Option<Tx>, plan: Arc<IncidencePlan>) -> Tx {
        let (_, d) = self.shape(x);
        let mut out = Array2::zeros((plan.out_rows, d));
        {
            let xv = &self.nodes[x.0].value;
            let gv = gates.map(|g| &self.nodes[g.0].value);
            for &(o, s, gi, w) in &plan.entries {
                let gate = gv.map_or(1.0, |g| g[(gi as usize, 0)]);
                if gate == 0.0 {
                    continue;
                }
                let coef = w * gate;
                let src = xv.row(s as usize);
                out.row_mut(o as usize).scaled_add(coef, &src);
            }
        }
        self.push(out, Op::IncidenceAgg { x, gates, plan })
    }

    /// Reverse pass from a scalar loss node. Visits each recorded node at most
    /// once, in reverse construction order, accumulating adjoints across
    /// fan-out.
    pub fn backward(&mut self, loss: Tx) -> Grads {
        assert_eq!(self.shape(loss), (1, 1), "backward seeds a scalar");
        let mut g: Vec<Option<Array2<f64>>> = (0..self.nodes.len()).map(|_| None).collect();
        g[loss.0] = Some(Array2::from_elem((1, 1), 1.0));

        macro_rules! accum {
            ($slot:expr, $delta:expr) => {{
                let d = $delta;
                match &mut g[$slot] {
                    Some(a) => *a += &d,
                    None => g[$slot] = Some(d),
                }
            }};
        }

        for i in (0..=loss.0).rev() {
            let Some(dy) = g[i].take() else { continue };
            match &self.nodes[i].op {
                Op::Leaf | Op::Constant => {
                    g[i] = Some(dy); // keep for the caller
                    continue;
                }
                Op::MatMul(a, b) => {
                    let (a, b) = (*a, *b);
                    let da = dy.dot(&self.nodes[b.0].value.t());
                    let db = self.nodes[a.0].value.t().dot(&dy);
                    accum!(a.0, da);
                    accum!(b.0, db);
                }
                Op::Add(a, b) => {
                    let (a, b) = (*a, *b);
                    accum!(a.0, dy.clone());
                    accum!(b.0, dy);
                }
                Op::Sub(a, b) => {
                    let (a, b) = (*a, *b);
                    accum!(a.0, dy.clone());
                    accum!(b.0, -dy);
                }
                Op::Mul(a, b) => {
                    let (a, b) = (*a, *b);
                    let da = &dy * &self.nodes[b.0].value;
                    let db = dy * &self.nodes[a.0].value;
                    accum!(a.0, da);
                    accum!(b.0, db);
                }
                Op::Div(a, b) => {
                    let (a, b) = (*a, *b);
                    let bv = &self.nodes[b.0].value;
                    let da = &dy / bv;
                    // d(a/b)/db = -a/b^2 = -y/b
                    let db = -(&dy * &self.nodes[i].value) / bv;
                    accum!(a.0, da);
                    accum!(b.0, db);
                }
                Op::Scale(a, c) => {
                    let (a, c) = (*a, *c);
                    accum!(a.0, dy * c);
                }
                Op::AddScalar(a) => {
                    let a = *a;
                    accum!(a.0, dy);
                }
                Op::ConcatCols(parts) => {
                    let parts = parts.clone();
                    let mut at = 0;
                    for p in parts {
                        let c = self.shape(p).1;
                        let d = dy.slice(ndarray::s![.., at..at + c]).to_owned();
                        accum!(p.0, d);
                        at += c;
                    }
                }
                Op::SliceCols(a, from, to) => {
                    let (a, from, to) = (*a, *from, *to);
                    let mut d = Array2::zeros(self.nodes[a.0].value.raw_dim());
                    d.slice_mut(ndarray::s![.., from..to]).assign(&dy);
                    accum!(a.0, d);
                }
                Op::GatherRows(a, rows) => {
                    let a = *a;
                    let rows = rows.clone();
                    let mut d = Array2::zeros(self.nodes[a.0].value.raw_dim());
                    for (i, &s) in rows.iter().enumerate() {
                        d.row_mut(s as usize).scaled_add(1.0, &dy.row(i));
                    }
                    accum!(a.0, d);
                }
                Op::Sum(a) => {
                    let a = *a;
                    let d = Array2::from_elem(self.nodes[a.0].value.raw_dim(), dy[(0, 0)]);
                    accum!(a.0, d);
                }
                Op::Mean(a) => {
                    let a = *a;
                    let len = self.nodes[a.0].value.len() as f64;
                    let d = Array2::from_elem(self.nodes[a.0].value.raw_dim(), dy[(0, 0)] / len);
                    accum!(a.0, d);
                }
                Op::RowSum(a) => {
                    let a = *a;
                    let dim = self.nodes[a.0].value.raw_dim();
                    let mut d = Array2::zeros(dim);
                    for (mut row, dv) in d.rows_mut().into_iter().zip(dy.column(0).iter()) {
                        row.fill(*dv);
                    }
                    accum!(a.0, d);
                }
                Op::Sigmoid(a) => {
                    let a = *a;
                    let y = &self.nodes[i].value;
                    let d = dy * &(y * &(1.0 - y));
                    accum!(a.0, d);
                }
                Op::Tanh(a) => {
                    let a = *a;
                    let y = &self.nodes[i].value;
                    let d = dy * &y.mapv(|t| 1.0 - t * t);
                    accum!(a.0, d);
                }
                Op::Softplus(a) => {
                    // y = softplus(x): dy/dx = sigmoid(x) = 1 - exp(-y).
                    let a = *a;
                    let y = &self.nodes[i].value;
                    let d = dy * &y.mapv(|t| 1.0 - (-t).exp());
                    accum!(a.0, d);
                }
                Op::Log(a) => {
                    let a = *a;
                    let d = dy / &self.nodes[a.0].value;
                    accum!(a.0, d);
                }
                Op::Exp(a) => {
                    let a = *a;
                    let d = dy * &self.nodes[i].value;
                    accum!(a.0, d);
                }
                Op::Square(a) => {
                    let a = *a;
                    let d = dy * &(2.0 * &self.nodes[a.0].value);
                    accum!(a.0, d);
                }
                Op::BroadcastAddRow(a, row) => {
                    let (a, row) = (*a, *row);
                    let dr = dy.sum_axis(Axis(0)).insert_axis(Axis(0));
                    accum!(a.0, dy);
                    accum!(row.0, dr);
                }
                Op::Clamp(a, lo, hi) => {
                    let (a, lo, hi) = (*a, *lo, *hi);
                    let x = &self.nodes[a.0].value;
                    let mask = x.mapv(|v| if v > lo && v < hi { 1.0 } else { 0.0 });
                    accum!(a.0, dy * &mask);
                }
                Op::SteGate(p, mode) => {
                    let (p, mode) = (*p, *mode);
                    if mode == SteMode::Identity {
                        accum!(p.0, dy);
                    }
                }
                Op::IncidenceAgg { x, gates, plan } => {
                    let (x, gates, plan) = (*x, *gates, plan.clone());
                    let mut dx = Array2::zeros(self.nodes[x.0].value.raw_dim());
                    let mut dg = gates.map(|g| Array2::zeros(self.nodes[g.0].value.raw_dim()));
                    for &(o, s, gi, w) in &plan.entries {
                        let gate = gates.map_or(1.0, |g| self.nodes[g.0].value[(gi as usize, 0)]);
                        if gate != 0.0 {
                            dx.row_mut(s as usize)
                                .scaled_add(w * gate, &dy.row(o as usize));
                        }
                        if let Some(dg) = dg.as_mut() {
                            let dot = dy
                                .row(o as usize)
                                .iter()
                                .zip(self.nodes[x.0].value.row(s as usize).iter())
                                .map(|(a, b)| a * b)
                                .sum::<f64>();
                            dg[(gi as usize, 0)] += w * dot;
                        }
                    }
                    accum!(x.0, dx);
                    if let (Some(g), Some(dg)) = (gates, dg) {
                        accum!(g.0, dg);
                    }
                }
            }
        }
        Grads { by_node: g }
    }
}
