//! Soft-margin kernel SVM trained by SMO-style dual coordinate optimization.
//!
//! Working pairs are chosen by maximal violation with a second-order choice
//! of the partner index (the standard libsvm-style selection); the dual
//! outputs `u_i = sum_j alpha_j y_j K(x_j, x_i)` are cached and updated
//! incrementally, and kernel rows live in an LRU cache. Retraining on a
//! grown training set can warm-start from the previous round's (alpha, u).

use crate::data::{Dataset, Label};
use crate::error::{Error, Result};
use crate::victims::{FittedModel, Kernel, KernelKind, Matrix, ModelParams, VictimSpec, WarmState};
use std::collections::HashMap;
use std::rc::Rc;

const BOUND_EPS: f64 = 1e-12;
/// Kernel-row cache budget in f64 entries (256 MB).
const CACHE_ENTRIES: usize = 32 * 1024 * 1024;

#[derive(Debug, Clone)]
pub(crate) struct SvmParams {
    pub kernel: Kernel,
    pub sv: Matrix,
    /// alpha_i * y_i per support vector.
    pub coef: Vec<f64>,
    /// Indices of the support vectors in the originating training set.
    pub sv_indices: Vec<usize>,
    pub bias: f64,
    /// Collapsed weight vector, linear kernel only: w = sum coef_i sv_i.
    pub weights: Option<Vec<f64>>,
    /// Single-precision copy of the support vectors for the query hot path.
    pub(crate) sv32: Vec<f32>,
}

impl SvmParams {
    pub(crate) fn finish(&mut self) {
        self.sv32 = self.sv.data.iter().map(|&v| v as f32).collect();
        if self.kernel.kind != KernelKind::Linear {
            return;
        }
        let d = self.sv.cols;
        let mut w = vec![0.0; d];
        for (i, c) in self.coef.iter().enumerate() {
            for (wk, xk) in w.iter_mut().zip(self.sv.row(i)) {
                *wk += c * xk;
            }
        }
        self.weights = Some(w);
    }

    pub fn decision_value(&self, x: &[f64]) -> f64 {
        if let Some(w) = &self.weights {
            return w.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() + self.bias;
        }
        let d = self.sv.cols;
        let x32: Vec<f32> = x.iter().map(|&v| v as f32).collect();
        let mut s = self.bias;
        for (i, c) in self.coef.iter().enumerate() {
            s += c * self.kernel.eval_f32(&self.sv32[i * d..(i + 1) * d], &x32);
        }
        s
    }
}

struct RowCache<'a> {
    x: &'a Matrix,
    kernel: &'a Kernel,
    map: HashMap<usize, (Rc<Vec<f64>>, u64)>,
    capacity: usize,
    tick: u64,
}

impl<'a> RowCache<'a> {
    fn new(x: &'a Matrix, kernel: &'a Kernel) -> Self {
        RowCache {
            x,
            kernel,
            map: HashMap::new(),
            capacity: (CACHE_ENTRIES / x.rows.max(1)).max(16),
            tick: 0,
        }
    }

    fn fetch(&mut self, i: usize) -> Rc<Vec<f64>> {
        self.tick += 1;
        if let Some((row, stamp)) = self.map.get_mut(&i) {
            *stamp = self.tick;
            return row.clone();
        }
        let xi = self.x.row(i);
        let row: Vec<f64> = (0..self.x.rows)
            .map(|j| self.kernel.eval(xi, self.x.row(j)))
            .collect();
        let row = Rc::new(row);
        if self.map.len() >= self.capacity {
            if let Some(&k) = self
                .map
                .iter()
                .min_by_key(|(_, (_, stamp))| *stamp)
                .map(|(k, _)| k)
            {
                self.map.remove(&k);
            }
        }
        self.map.insert(i, (row.clone(), self.tick));
        row
    }
}

struct SmoOutcome {
    alpha: Vec<f64>,
    u: Vec<f64>,
    bias: f64,
    converged: bool,
}

#[inline]
fn in_up(y: f64, a: f64, c: f64) -> bool {
    (y > 0.0 && a < c - BOUND_EPS) || (y < 0.0 && a > BOUND_EPS)
}

#[inline]
fn in_low(y: f64, a: f64, c: f64) -> bool {
    (y < 0.0 && a < c - BOUND_EPS) || (y > 0.0 && a > BOUND_EPS)
}

fn smo_train(
    x: &Matrix,
    y: &[f64],
    kernel: &Kernel,
    c: f64,
    tol: f64,
    iter_cap: usize,
    warm: Option<(&[f64], &[f64])>,
) -> SmoOutcome {
    let n = x.rows;
    let mut alpha = vec![0.0; n];
    let mut u = vec![0.0; n];
    if let Some((a0, u0)) = warm {
        for (t, &a) in a0.iter().enumerate() {
            alpha[t] = a.clamp(0.0, c);
        }
        u[..u0.len()].copy_from_slice(u0);
        // Outputs for the rows appended since the previous fit.
        for t in u0.len()..n {
            let xt = x.row(t);
            let mut s = 0.0;
            for (j, &a) in alpha.iter().enumerate() {
                if a > BOUND_EPS {
                    s += a * y[j] * kernel.eval(x.row(j), xt);
                }
            }
            u[t] = s;
        }
    }

    let diag: Vec<f64> = (0..n).map(|i| kernel.eval_self(x.row(i))).collect();
    let mut cache = RowCache::new(x, kernel);
    let mut converged = false;
    let mut iters = 0usize;

    loop {
        // Maximal violating pair: i maximizes g = y - u over I_up, the stop
        // rule compares it with the minimum over I_low.
        let mut i_best = usize::MAX;
        let mut g_max = f64::NEG_INFINITY;
        let mut g_min = f64::INFINITY;
        for t in 0..n {
            let g = y[t] - u[t];
            if in_up(y[t], alpha[t], c) && g > g_max {
                g_max = g;
                i_best = t;
            }
            if in_low(y[t], alpha[t], c) && g < g_min {
                g_min = g;
            }
        }
        if i_best == usize::MAX || g_max - g_min <= tol {
            converged = true;
            break;
        }
        if iters >= iter_cap {
            break;
        }

        let i = i_best;
        let row_i = cache.fetch(i);

        // Second-order partner: maximize b^2/a over violating I_low members.
        let mut j_best = usize::MAX;
        let mut best_score = f64::NEG_INFINITY;
        for t in 0..n {
            if !in_low(y[t], alpha[t], c) {
                continue;
            }
            let g = y[t] - u[t];
            if g >= g_max {
                continue;
            }
            let b_it = g_max - g;
            let a_it = (diag[i] + diag[t] - 2.0 * row_i[t]).max(1e-12);
            let score = b_it * b_it / a_it;
            if score > best_score {
                best_score = score;
                j_best = t;
            }
        }
        if j_best == usize::MAX {
            converged = true;
            break;
        }
        let j = j_best;
        let row_j = cache.fetch(j);

        let (yi, yj) = (y[i], y[j]);
        let (ai_old, aj_old) = (alpha[i], alpha[j]);
        let eta = (diag[i] + diag[j] - 2.0 * row_i[j]).max(1e-12);
        let e_i = u[i] - yi;
        let e_j = u[j] - yj;
        let (lo, hi) = if yi * yj < 0.0 {
            ((aj_old - ai_old).max(0.0), (c + aj_old - ai_old).min(c))
        } else {
            ((ai_old + aj_old - c).max(0.0), (ai_old + aj_old).min(c))
        };
        let aj = (aj_old + yj * (e_i - e_j) / eta).clamp(lo, hi);
        if (aj - aj_old).abs() < 1e-14 {
            // The most violating pair cannot move; no further progress.
            break;
        }
        let ai = ai_old + yi * yj * (aj_old - aj);
        alpha[i] = ai.clamp(0.0, c);
        alpha[j] = aj;
        let dyi = (alpha[i] - ai_old) * yi;
        let dyj = (aj - aj_old) * yj;
        for t in 0..n {
            u[t] += dyi * row_i[t] + dyj * row_j[t];
        }
        iters += 1;
    }

    // Bias from the free support vectors, else the midpoint of the bounds.
    let mut free_sum = 0.0;
    let mut free_cnt = 0usize;
    for t in 0..n {
        if alpha[t] > BOUND_EPS && alpha[t] < c - BOUND_EPS {
            free_sum += y[t] - u[t];
            free_cnt += 1;
        }
    }
    let bias = if free_cnt > 0 {
        free_sum / free_cnt as f64
    } else {
        let mut up = f64::NEG_INFINITY;
        let mut low = f64::INFINITY;
        for t in 0..n {
            let g = y[t] - u[t];
            if in_up(y[t], alpha[t], c) {
                up = up.max(g);
            }
            if in_low(y[t], alpha[t], c) {
                low = low.min(g);
            }
        }
        if up.is_finite() && low.is_finite() {
            (up + low) / 2.0
        } else {
            0.0
        }
    };

    SmoOutcome {
        alpha,
        u,
        bias,
        converged,
    }
}

pub(crate) fn labels_to_signs(train: &Dataset) -> Vec<f64> {
    train
        .samples
        .iter()
        .map(|s| if s.label == Label::Abnormal { 1.0 } else { -1.0 })
        .collect()
}

pub(crate) fn fit(
    train: &Dataset,
    spec: &VictimSpec,
    warm: Option<(&[f64], &[f64])>,
) -> Result<(SvmParams, WarmState, bool)> {
    let d = train.dim();
    let kernel = spec.resolve_kernel(d);
    let x = Matrix::from_rows(train.samples.iter().map(|s| s.features.as_slice()), d);
    let y = labels_to_signs(train);
    let iter_cap = spec.smo_pass_cap.saturating_mul(train.len());
    let out = smo_train(&x, &y, &kernel, spec.c, spec.tol, iter_cap, warm);

    let mut sv_rows: Vec<&[f64]> = Vec::new();
    let mut coef = Vec::new();
    let mut sv_indices = Vec::new();
    for (t, &a) in out.alpha.iter().enumerate() {
        if a > BOUND_EPS {
            sv_rows.push(x.row(t));
            coef.push(a * y[t]);
            sv_indices.push(t);
        }
    }
    let mut params = SvmParams {
        kernel,
        sv: Matrix::from_rows(sv_rows.iter().copied(), d),
        coef,
        sv_indices,
        bias: out.bias,
        weights: None,
        sv32: Vec::new(),
    };
    params.finish();
    let warm_next = WarmState::Svm {
        alpha: out.alpha,
        outputs: out.u,
    };
    Ok((params, warm_next, out.converged))
}

/// Fraction of training points whose KKT conditions hold within the model's
/// tolerance. Decision values are recomputed from the stored support vectors,
/// independently of the optimizer's internal caches.
pub fn kkt_satisfied_fraction(model: &FittedModel, train: &Dataset) -> Result<f64> {
    let p = match &model.params {
        ModelParams::Svm(p) => p,
        _ => {
            return Err(Error::Config(
                "KKT check only applies to SVM models".into(),
            ))
        }
    };
    let c = model.spec.c;
    let tol = model.spec.tol;
    let mut alpha_of = HashMap::new();
    for (k, &t) in p.sv_indices.iter().enumerate() {
        alpha_of.insert(t, p.coef[k].abs());
    }
    let mut ok = 0usize;
    for (t, s) in train.samples.iter().enumerate() {
        let yt = if s.label == Label::Abnormal { 1.0 } else { -1.0 };
        let m = yt * model.decision_value(&s.features)?;
        let a = alpha_of.get(&t).copied().unwrap_or(0.0);
        let satisfied = if a <= BOUND_EPS {
            m >= 1.0 - tol
        } else if a >= c - BOUND_EPS {
            m <= 1.0 + tol
        } else {
            (m - 1.0).abs() <= tol
        };
        if satisfied {
            ok += 1;
        }
    }
    Ok(ok as f64 / train.len() as f64)
}
