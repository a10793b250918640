//! Kernel functions shared by the SVM and LSSVM victims.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelKind {
    Linear,
    Rbf,
    Poly,
    Sigmoid,
}

impl KernelKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            KernelKind::Linear => "linear",
            KernelKind::Rbf => "rbf",
            KernelKind::Poly => "poly",
            KernelKind::Sigmoid => "sigmoid",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "linear" => Some(KernelKind::Linear),
            "rbf" => Some(KernelKind::Rbf),
            "poly" => Some(KernelKind::Poly),
            "sigmoid" => Some(KernelKind::Sigmoid),
            _ => None,
        }
    }
}

/// A fully resolved kernel: k(x,z) in {x.z, exp(-gamma |x-z|^2),
/// (gamma x.z + coef0)^degree, tanh(gamma x.z + coef0)}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kernel {
    pub kind: KernelKind,
    pub gamma: f64,
    pub coef0: f64,
    pub degree: u32,
}

#[inline]
pub(crate) fn dot_f32(a: &[f32], b: &[f32]) -> f32 {
    debug_assert_eq!(a.len(), b.len());
    let mut s = 0.0f32;
    for i in 0..a.len() {
        s += a[i] * b[i];
    }
    s
}

#[inline]
pub(crate) fn sq_dist_f32(a: &[f32], b: &[f32]) -> f32 {
    debug_assert_eq!(a.len(), b.len());
    let mut s = 0.0f32;
    for i in 0..a.len() {
        let d = a[i] - b[i];
        s += d * d;
    }
    s
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut s = 0.0;
    for i in 0..a.len() {
        s += a[i] * b[i];
    }
    s
}

#[inline]
fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut s = 0.0;
    for i in 0..a.len() {
        let d = a[i] - b[i];
        s += d * d;
    }
    s
}

impl Kernel {
    #[inline]
    pub fn eval(&self, a: &[f64], b: &[f64]) -> f64 {
        match self.kind {
            KernelKind::Linear => dot(a, b),
            KernelKind::Rbf => (-self.gamma * sq_dist(a, b)).exp(),
            KernelKind::Poly => (self.gamma * dot(a, b) + self.coef0).powi(self.degree as i32),
            KernelKind::Sigmoid => (self.gamma * dot(a, b) + self.coef0).tanh(),
        }
    }

    /// Single-precision evaluation for the prediction hot path.
    #[inline]
    pub(crate) fn eval_f32(&self, a: &[f32], b: &[f32]) -> f64 {
        match self.kind {
            KernelKind::Linear => dot_f32(a, b) as f64,
            KernelKind::Rbf => (-self.gamma * sq_dist_f32(a, b) as f64).exp(),
            KernelKind::Poly => {
                (self.gamma * dot_f32(a, b) as f64 + self.coef0).powi(self.degree as i32)
            }
            KernelKind::Sigmoid => (self.gamma * dot_f32(a, b) as f64 + self.coef0).tanh(),
        }
    }

    /// Kernel value of a point with itself.
    #[inline]
    pub fn eval_self(&self, a: &[f64]) -> f64 {
        match self.kind {
            KernelKind::Linear => dot(a, a),
            KernelKind::Rbf => 1.0,
            KernelKind::Poly => (self.gamma * dot(a, a) + self.coef0).powi(self.degree as i32),
            KernelKind::Sigmoid => (self.gamma * dot(a, a) + self.coef0).tanh(),
        }
    }
}
