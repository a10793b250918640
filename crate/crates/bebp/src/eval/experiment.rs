//! The repetition/aggregation harness: run a chronic attack per victim per
//! repetition seed, aggregate means and standard deviations per round, and
//! drive the eta sweep and baseline comparison protocols on shared seeds.

use super::RoundReport;
use crate::attack::{chronic_with_method, AttackConfig, InjectionMethod};
use crate::data::Dataset;
use crate::error::Result;
use crate::victims::VictimSpec;

/// One repetition's data: a training split plus named evaluation sets.
pub struct RepData {
    pub train: Dataset,
    pub eval_sets: Vec<(String, Dataset)>,
}

/// Supplies the data for a repetition seed. Must be deterministic in the
/// seed.
pub type DataProvider<'a> = dyn Fn(u64) -> Result<RepData> + 'a;

/// Cross-repetition aggregate of one eval set at one round.
#[derive(Debug, Clone)]
pub struct SetAggregate {
    pub dataset: String,
    pub acc_mean: f64,
    pub acc_std: f64,
    /// Mean/std over the repetitions where DR was defined.
    pub dr_mean: Option<f64>,
    pub dr_std: Option<f64>,
    pub dr_defined: usize,
}

#[derive(Debug, Clone)]
pub struct RoundAggregate {
    pub round: usize,
    pub sets: Vec<SetAggregate>,
    pub injected_mean: f64,
    pub train_size_mean: f64,
}

#[derive(Debug, Clone)]
pub struct VictimResult {
    pub victim: String,
    /// Per-repetition round sequences (round 0 through r).
    pub reps: Vec<Vec<RoundReport>>,
    pub aggregate: Vec<RoundAggregate>,
    /// (repetition index, error) for repetitions that failed.
    pub failures: Vec<(usize, String)>,
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub victims: Vec<VictimResult>,
    pub rep_seeds: Vec<u64>,
    pub eta: f64,
    pub rounds: usize,
    pub method: InjectionMethod,
    /// False when any repetition failed; aggregates then cover the completed
    /// repetitions only.
    pub complete: bool,
}

/// Derives the per-repetition root seeds from a base seed.
pub fn rep_seeds(base: u64, reps: usize) -> Vec<u64> {
    (0..reps)
        .map(|i| base.wrapping_add((i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)))
        .collect()
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Recomputes the aggregate rows from raw per-repetition reports.
pub fn aggregate_rounds(reps: &[Vec<RoundReport>]) -> Vec<RoundAggregate> {
    if reps.is_empty() {
        return Vec::new();
    }
    let rounds = reps.iter().map(|r| r.len()).min().unwrap_or(0);
    let set_names: Vec<String> = reps[0][0].sets.iter().map(|s| s.dataset.clone()).collect();
    let mut out = Vec::with_capacity(rounds);
    for round in 0..rounds {
        let mut sets = Vec::with_capacity(set_names.len());
        for name in &set_names {
            let accs: Vec<f64> = reps
                .iter()
                .filter_map(|r| r[round].set(name).map(|s| s.acc))
                .collect();
            let drs: Vec<f64> = reps
                .iter()
                .filter_map(|r| r[round].set(name).and_then(|s| s.dr))
                .collect();
            let (acc_mean, acc_std) = mean_std(&accs);
            let (dr_mean, dr_std) = if drs.is_empty() {
                (None, None)
            } else {
                let (m, s) = mean_std(&drs);
                (Some(m), Some(s))
            };
            sets.push(SetAggregate {
                dataset: name.clone(),
                acc_mean,
                acc_std,
                dr_mean,
                dr_std,
                dr_defined: drs.len(),
            });
        }
        let injected: Vec<f64> = reps.iter().map(|r| r[round].injected as f64).collect();
        let train: Vec<f64> = reps.iter().map(|r| r[round].train_size as f64).collect();
        out.push(RoundAggregate {
            round,
            sets,
            injected_mean: mean_std(&injected).0,
            train_size_mean: mean_std(&train).0,
        });
    }
    out
}

fn run_method(
    method: InjectionMethod,
    victims: &[VictimSpec],
    cfg: &AttackConfig,
    repetitions: usize,
    provider: &DataProvider,
) -> Result<ExperimentResult> {
    let seeds = rep_seeds(cfg.seed, repetitions);
    let mut victim_results = Vec::with_capacity(victims.len());
    let mut complete = true;
    for spec in victims {
        let mut reps: Vec<Vec<RoundReport>> = Vec::with_capacity(repetitions);
        let mut failures = Vec::new();
        for (ri, &seed) in seeds.iter().enumerate() {
            let outcome = provider(seed).and_then(|data| {
                let rep_cfg = AttackConfig {
                    seed,
                    ..cfg.clone()
                };
                chronic_with_method(method, &data.train, spec, &rep_cfg, &data.eval_sets)
            });
            match outcome {
                Ok(run) => reps.push(run.rounds.into_iter().map(|r| r.report).collect()),
                Err(e) => {
                    log::warn!("repetition {ri} of {} failed: {e}", spec.label());
                    failures.push((ri, e.to_string()));
                    complete = false;
                }
            }
        }
        let aggregate = aggregate_rounds(&reps);
        victim_results.push(VictimResult {
            victim: spec.label(),
            reps,
            aggregate,
            failures,
        });
    }
    Ok(ExperimentResult {
        victims: victim_results,
        rep_seeds: seeds,
        eta: cfg.eta,
        rounds: cfg.rounds,
        method,
        complete,
    })
}

/// Runs the full protocol: per repetition seed, draw data, run the chronic
/// attack, record per-round reports; aggregate across repetitions.
pub fn run_experiment(
    victims: &[VictimSpec],
    cfg: &AttackConfig,
    repetitions: usize,
    provider: &DataProvider,
) -> Result<ExperimentResult> {
    run_method(InjectionMethod::Bebp, victims, cfg, repetitions, provider)
}

/// Paired sweep: identical repetition seeds across eta values, isolating the
/// effect of the poisoning ratio.
pub fn sweep_eta(
    victims: &[VictimSpec],
    cfg: &AttackConfig,
    repetitions: usize,
    etas: &[f64],
    provider: &DataProvider,
) -> Result<Vec<(f64, ExperimentResult)>> {
    let mut out = Vec::with_capacity(etas.len());
    for &eta in etas {
        let cfg_eta = AttackConfig { eta, ..cfg.clone() };
        out.push((
            eta,
            run_experiment(victims, &cfg_eta, repetitions, provider)?,
        ));
    }
    Ok(out)
}

/// Runs BEBP, BASIC and RANDOM under identical seeds and budgets against one
/// victim.
pub fn compare_baselines(
    victim: &VictimSpec,
    cfg: &AttackConfig,
    repetitions: usize,
    provider: &DataProvider,
) -> Result<Vec<(InjectionMethod, ExperimentResult)>> {
    let victims = [victim.clone()];
    let mut out = Vec::new();
    for method in [
        InjectionMethod::Bebp,
        InjectionMethod::Basic,
        InjectionMethod::Random,
    ] {
        out.push((
            method,
            run_method(method, &victims, cfg, repetitions, provider)?,
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{apply_normalize, fit_normalize, make_moons};

    fn moons_provider(n: usize) -> impl Fn(u64) -> Result<RepData> {
        move |seed: u64| {
            let train = make_moons(n, 0.2, seed).unwrap();
            let eval = make_moons(n, 0.2, seed ^ 0xABCD).unwrap();
            let params = fit_normalize(&train);
            Ok(RepData {
                train: apply_normalize(&params, &train)?,
                eval_sets: vec![("evaluating".into(), apply_normalize(&params, &eval)?)],
            })
        }
    }

    #[test]
    fn zero_rounds_single_rep_reports_clean_models_only() {
        let provider = moons_provider(60);
        let cfg = AttackConfig {
            rounds: 0,
            ..AttackConfig::new(5)
        };
        let res = run_experiment(
            &[VictimSpec::gaussian_nb(), VictimSpec::logreg()],
            &cfg,
            1,
            &provider,
        )
        .unwrap();
        assert!(res.complete);
        assert_eq!(res.victims.len(), 2);
        for v in &res.victims {
            assert_eq!(v.reps.len(), 1);
            assert_eq!(v.reps[0].len(), 1);
            assert_eq!(v.reps[0][0].injected, 0);
        }
    }

    #[test]
    fn aggregates_match_recomputation_from_raw_reports() {
        let provider = moons_provider(80);
        let cfg = AttackConfig {
            rounds: 2,
            max_iters: 10,
            ..AttackConfig::new(7)
        };
        let res = run_experiment(&[VictimSpec::gaussian_nb()], &cfg, 3, &provider).unwrap();
        let v = &res.victims[0];
        let again = aggregate_rounds(&v.reps);
        assert_eq!(v.aggregate.len(), again.len());
        for (a, b) in v.aggregate.iter().zip(&again) {
            assert_eq!(a.round, b.round);
            for (x, y) in a.sets.iter().zip(&b.sets) {
                assert_eq!(x.acc_mean.to_bits(), y.acc_mean.to_bits());
                assert_eq!(x.acc_std.to_bits(), y.acc_std.to_bits());
                assert_eq!(x.dr_mean.map(f64::to_bits), y.dr_mean.map(f64::to_bits));
            }
        }
    }

    #[test]
    fn single_eta_sweep_equals_run_experiment() {
        let provider = moons_provider(60);
        let cfg = AttackConfig {
            rounds: 1,
            max_iters: 8,
            ..AttackConfig::new(9)
        };
        let sweep = sweep_eta(
            &[VictimSpec::gaussian_nb()],
            &cfg,
            2,
            &[cfg.eta],
            &provider,
        )
        .unwrap();
        let single = run_experiment(&[VictimSpec::gaussian_nb()], &cfg, 2, &provider).unwrap();
        assert_eq!(sweep.len(), 1);
        let a = &sweep[0].1.victims[0].aggregate;
        let b = &single.victims[0].aggregate;
        for (x, y) in a.iter().zip(b.iter()) {
            assert_eq!(
                x.sets[0].acc_mean.to_bits(),
                y.sets[0].acc_mean.to_bits()
            );
        }
    }

    #[test]
    fn experiment_is_deterministic_for_fixed_seeds() {
        let provider = moons_provider(70);
        let cfg = AttackConfig {
            rounds: 2,
            max_iters: 10,
            ..AttackConfig::new(21)
        };
        let a = run_experiment(&[VictimSpec::logreg()], &cfg, 2, &provider).unwrap();
        let b = run_experiment(&[VictimSpec::logreg()], &cfg, 2, &provider).unwrap();
        for (ra, rb) in a.victims[0].reps.iter().zip(&b.victims[0].reps) {
            for (x, y) in ra.iter().zip(rb) {
                assert_eq!(x.injected, y.injected);
                assert_eq!(x.sets[0].acc.to_bits(), y.sets[0].acc.to_bits());
            }
        }
    }
}
