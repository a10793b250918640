//! The chronic poisoning loop: generate a budgeted batch against the current
//! model, append it to the training data with Normal labels, retrain and
//! evaluate, round after round.

use super::batch::{bebp, enforce_cap, strict_budget_cap};
use super::{baseline_basic, baseline_random, AdversarialBatch, AttackConfig};
use crate::data::{Dataset, Label, LabeledSample, Origin};
use crate::error::Result;
use crate::eval::{round_report, RoundReport};
use crate::victims::{fit_warm, FittedModel, LabelOracle, VictimSpec, WarmState};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InjectionMethod {
    Bebp,
    Basic,
    Random,
}

impl InjectionMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            InjectionMethod::Bebp => "BEBP",
            InjectionMethod::Basic => "BASIC",
            InjectionMethod::Random => "RANDOM",
        }
    }
}

/// One poisoning round: the model in force after the round, its evaluation,
/// and the batch that was injected (None for the clean round 0).
#[derive(Debug, Clone)]
pub struct RoundOutcome {
    pub round: usize,
    pub model: FittedModel,
    pub report: RoundReport,
    pub batch: Option<AdversarialBatch>,
}

#[derive(Debug, Clone)]
pub struct ChronicRun {
    pub victim: String,
    pub method: InjectionMethod,
    /// Round 0 (clean baseline) through round r.
    pub rounds: Vec<RoundOutcome>,
    pub final_train: Dataset,
    pub oracle_queries: u64,
}

/// Runs the chronic poisoning attack with the batched edge-pattern injector.
pub fn chronic_attack(
    train0: &Dataset,
    spec: &VictimSpec,
    cfg: &AttackConfig,
    eval_sets: &[(String, Dataset)],
) -> Result<ChronicRun> {
    chronic_with_method(InjectionMethod::Bebp, train0, spec, cfg, eval_sets)
}

/// Same loop with a pluggable injector, used for baseline comparisons. The
/// budget rule is identical for every method.
pub fn chronic_with_method(
    method: InjectionMethod,
    train0: &Dataset,
    spec: &VictimSpec,
    cfg: &AttackConfig,
    eval_sets: &[(String, Dataset)],
) -> Result<ChronicRun> {
    let cfg = cfg.clone().validated()?;
    let mut train = train0.clone();
    let (mut model, mut warm) = fit_warm(spec, &train, &WarmState::None)?;

    let mut rounds = Vec::with_capacity(cfg.rounds + 1);
    let mut warnings0 = Vec::new();
    if model.convergence_warning {
        warnings0.push("optimizer hit its iteration cap".to_string());
    }
    rounds.push(RoundOutcome {
        round: 0,
        model: model.clone(),
        report: round_report(0, &model, eval_sets, 0, train.len(), warnings0)?,
        batch: None,
    });

    let cumulative_cap = strict_budget_cap(cfg.eta, train0.len());
    let mut injected_total = 0usize;
    let mut oracle_queries = 0u64;

    for i in 0..cfg.rounds {
        let seed = cfg.round_seed(i);
        let cap = if cfg.cumulative_budget {
            cumulative_cap.saturating_sub(injected_total)
        } else {
            strict_budget_cap(cfg.eta, train.len())
        };

        let raw = if cap == 0 {
            AdversarialBatch {
                samples: Vec::new(),
                round: 0,
                warning: Some("budget cap is 0; nothing injected".into()),
            }
        } else {
            let oracle = LabelOracle::from_model(&model);
            let batch = match method {
                InjectionMethod::Bebp => {
                    let normals = train.normal_points()?;
                    bebp(&normals, &oracle, &cfg, seed)?
                }
                InjectionMethod::Basic => baseline_basic(&train, cap, seed)?,
                InjectionMethod::Random => {
                    baseline_random(&train, &oracle, cap, train.dim(), seed)?
                }
            };
            oracle_queries += oracle.query_count();
            batch
        };

        let mut batch = enforce_cap(raw, cap, seed ^ 0x517c_c1b7_2722_0a95);
        batch.round = i + 1;
        let injected = batch.len();
        injected_total += injected;

        let mut warnings: Vec<String> = Vec::new();
        if let Some(w) = &batch.warning {
            warnings.push(w.clone());
        }
        if injected == 0 {
            // An empty round proceeds with the model unchanged.
            warnings.push("empty adversarial batch; model carried over".into());
        } else {
            for s in &batch.samples {
                train.samples.push(LabeledSample {
                    features: s.features.clone(),
                    label: Label::Normal,
                    category: "adversarial".into(),
                    origin: Origin::Adversarial,
                });
            }
            let (next_model, next_warm) = fit_warm(spec, &train, &warm)?;
            model = next_model;
            warm = next_warm;
        }
        if model.convergence_warning {
            warnings.push("optimizer hit its iteration cap".to_string());
        }

        rounds.push(RoundOutcome {
            round: i + 1,
            model: model.clone(),
            report: round_report(i + 1, &model, eval_sets, injected, train.len(), warnings)?,
            batch: Some(batch),
        });
    }

    Ok(ChronicRun {
        victim: spec.label(),
        method,
        rounds,
        final_train: train,
        oracle_queries,
    })
}
