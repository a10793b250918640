//! The adversary: boundary pattern detection, batched edge-pattern
//! generation, budgeted chronic poisoning and the BASIC/RANDOM baselines.
//!
//! Everything here sees the victim only through [`LabelOracle`]; decision
//! values never cross this boundary.
//!
//! [`LabelOracle`]: crate::victims::LabelOracle

mod baselines;
mod batch;
mod bpd;
mod chronic;

pub use baselines::{baseline_basic, baseline_random};
pub use batch::{bebp, enforce_budget, strict_budget_cap};
pub use bpd::bpd;
pub use chronic::{chronic_attack, chronic_with_method, ChronicRun, InjectionMethod, RoundOutcome};

use crate::data::Label;
use crate::error::{Error, Result};
use crate::geometry::EdgePattern;

/// Adversary capability parameters.
#[derive(Debug, Clone)]
pub struct AttackConfig {
    /// Poisoning ratio: every injection stays strictly below `eta` times the
    /// training-set size.
    pub eta: f64,
    /// Iteration budget of each boundary walk.
    pub max_iters: usize,
    /// Initial shifting step.
    pub step: f64,
    /// Boundary-witness probe distance (defaults to `step`).
    pub epsilon: f64,
    /// Batch size L for batched edge detection; `None` derives
    /// `max(50, n/10)` from the normal-labelled training count.
    pub batch_size: Option<usize>,
    /// Number of poisoning rounds.
    pub rounds: usize,
    pub epd_k: usize,
    pub epd_tau: f64,
    pub seed: u64,
    /// Upper bound on boundary walks per round; batches whose union of edge
    /// points exceeds it are uniformly subsampled before walking.
    pub max_edge_points: Option<usize>,
    /// When set, `eta` bounds the cumulative injection against the initial
    /// training size instead of each round against the current size.
    pub cumulative_budget: bool,
}

impl AttackConfig {
    pub fn new(seed: u64) -> Self {
        AttackConfig {
            eta: 0.07,
            max_iters: 60,
            step: 0.05,
            epsilon: 0.05,
            batch_size: None,
            rounds: 15,
            epd_k: 10,
            epd_tau: 0.5,
            seed,
            max_edge_points: Some(800),
            cumulative_budget: false,
        }
    }

    pub fn validated(self) -> Result<Self> {
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return Err(Error::Bound(format!("eta = {} outside (0,1)", self.eta)));
        }
        if self.max_iters == 0 {
            return Err(Error::Bound("max_iters must be at least 1".into()));
        }
        if self.step <= 0.0 {
            return Err(Error::Bound(format!("step = {} must be > 0", self.step)));
        }
        if self.epsilon <= 0.0 {
            return Err(Error::Bound(format!(
                "epsilon = {} must be > 0",
                self.epsilon
            )));
        }
        if self.epd_k == 0 {
            return Err(Error::Bound("epd_k must be at least 1".into()));
        }
        if !(self.epd_tau > 0.0 && self.epd_tau <= 1.0) {
            return Err(Error::Bound(format!(
                "epd_tau = {} outside (0,1]",
                self.epd_tau
            )));
        }
        if let Some(l) = self.batch_size {
            if l <= self.epd_k {
                return Err(Error::Bound(format!(
                    "batch_size = {l} must exceed epd_k = {}",
                    self.epd_k
                )));
            }
        }
        if self.max_edge_points == Some(0) {
            return Err(Error::Bound("max_edge_points must be at least 1".into()));
        }
        Ok(self)
    }

    /// Effective batch size for a normal-labelled pool of `n` points.
    pub fn effective_batch_size(&self, n: usize) -> usize {
        self.batch_size.unwrap_or_else(|| (n / 10).max(50))
    }

    /// Derives the per-round RNG stream seed.
    pub(crate) fn round_seed(&self, round: usize) -> u64 {
        self.seed ^ (round as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
    }
}

/// One step of a boundary walk: the position *before* stepping, the step
/// size, the direction sign and the oracle's answer at the position.
#[derive(Debug, Clone)]
pub struct ShiftStep {
    pub position: Vec<f64>,
    pub step: f64,
    pub direction: i8,
    pub label: Label,
}

/// The full walk record of one edge point.
#[derive(Debug, Clone)]
pub struct ShiftTrace {
    pub edge: EdgePattern,
    pub steps: Vec<ShiftStep>,
}

/// A generated adversarial sample: always injected with a Normal label; the
/// originating edge pattern is kept for audit (baselines have none).
#[derive(Debug, Clone)]
pub struct AdvSample {
    pub features: Vec<f64>,
    pub source: Option<EdgePattern>,
}

/// A round's worth of adversarial samples.
#[derive(Debug, Clone)]
pub struct AdversarialBatch {
    pub samples: Vec<AdvSample>,
    /// The poisoning round that produced this batch (1-based; round 0 is the
    /// clean baseline).
    pub round: usize,
    pub warning: Option<String>,
}

impl AdversarialBatch {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Bitwise coordinate key for exact-equality deduplication.
pub(crate) fn bit_key(v: &[f64]) -> Vec<u64> {
    v.iter().map(|x| x.to_bits()).collect()
}
