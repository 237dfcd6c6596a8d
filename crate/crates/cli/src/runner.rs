//! Orchestration: exact analysis, the tree/operator cross-check gate, and
//! sharded Monte Carlo sampling.

use unsharp_core::montecarlo::{estimate_correlation, sample_range, shard_ranges};
use unsharp_core::{
    conditional_statistics, leaf_probabilities, outcome_distribution, MeasurementTree,
    OutcomeRecord, RngSpec, SelectionSpec,
};

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::report::{
    CorrelationRow, DistributionRow, EstimateRow, MonteCarloReport, ResultsReport,
    SelectionReport,
};

/// Every run re-derives the distribution through the optical tree; exact
/// and sampled results are only reported if both routes agree to this
/// tolerance.
pub const CROSS_CHECK_TOL: f64 = 1e-10;

/// Run the full analysis. Monte Carlo sampling is skipped when
/// `include_monte_carlo` is false or `sampling.shots` is zero.
pub fn run_experiment(
    config: &ExperimentConfig,
    include_monte_carlo: bool,
) -> Result<ResultsReport, CliError> {
    let distribution = outcome_distribution(&config.initial_state, &config.settings)?;

    let tree = MeasurementTree::from_settings(&config.settings)?;
    let tree_distribution = leaf_probabilities(&tree, &config.initial_state)?;
    let deviation = distribution
        .probabilities()
        .iter()
        .zip(tree_distribution.probabilities())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if deviation > CROSS_CHECK_TOL {
        return Err(CliError::CrossCheck { deviation });
    }

    let exact_distribution = config.outputs.emit_distribution.then(|| {
        distribution
            .iter()
            .map(|(outcomes, probability)| DistributionRow {
                outcomes: outcomes.to_symbols(),
                probability,
            })
            .collect()
    });

    let mut exact_correlations = Vec::with_capacity(config.outputs.subsets.len());
    for subset in &config.outputs.subsets {
        exact_correlations.push(CorrelationRow {
            subset: one_based(subset),
            value: distribution.calibrated_mean(subset)?,
        });
    }

    let selection = match &config.selection {
        SelectionSpec::None => None,
        spec => {
            let mut conditional_means = Vec::with_capacity(config.outputs.subsets.len());
            let mut acceptance = None;
            for subset in &config.outputs.subsets {
                let stats =
                    conditional_statistics(&config.initial_state, &config.settings, spec, subset)?;
                acceptance.get_or_insert(stats.acceptance);
                conditional_means.push(CorrelationRow {
                    subset: one_based(subset),
                    value: stats.mean,
                });
            }
            let acceptance = match acceptance {
                Some(a) => a,
                // No subsets requested; probe with the first stage to still
                // report the acceptance rate.
                None => {
                    conditional_statistics(&config.initial_state, &config.settings, spec, &[0])?
                        .acceptance
                }
            };
            Some(SelectionReport {
                mode: selection_mode(spec).into(),
                acceptance,
                conditional_means,
            })
        }
    };

    let monte_carlo = if include_monte_carlo && config.sampling.shots > 0 {
        let records = sample_sharded(config);
        let etas = config.etas();
        let mut estimates = Vec::with_capacity(config.outputs.subsets.len());
        for subset in &config.outputs.subsets {
            let estimate = estimate_correlation(&records, subset, &etas)?;
            estimates.push(EstimateRow {
                subset: one_based(subset),
                mean: estimate.mean,
                stderr: estimate.stderr,
                count: estimate.count,
                acceptance: estimate.acceptance,
            });
        }
        Some(MonteCarloReport {
            shots: config.sampling.shots,
            seed: config.sampling.seed,
            shards: config.sampling.shards,
            estimates,
        })
    } else {
        None
    };

    Ok(ResultsReport {
        exact_distribution,
        exact_correlations,
        selection,
        monte_carlo,
        tree_cross_check: deviation,
    })
}

fn selection_mode(spec: &SelectionSpec) -> &'static str {
    match spec {
        SelectionSpec::None => "none",
        SelectionSpec::Postselect(_) => "postselect",
        SelectionSpec::Reselect => "reselect",
    }
}

fn one_based(subset: &[usize]) -> Vec<usize> {
    subset.iter().map(|&k| k + 1).collect()
}

/// Sample all shards, spreading them over at most `SIM_THREADS` worker
/// threads (default: available parallelism). Records are merged in shard
/// order, so the result is identical for any worker or shard count.
fn sample_sharded(config: &ExperimentConfig) -> Vec<OutcomeRecord> {
    let base = RngSpec {
        seed: config.sampling.seed,
        stream: 0,
    };
    let ranges = shard_ranges(config.sampling.shots, config.sampling.shards);
    let workers = worker_count().min(ranges.len()).max(1);

    if workers == 1 {
        return ranges
            .into_iter()
            .flat_map(|range| {
                sample_range(
                    &config.initial_state,
                    &config.settings,
                    &config.selection,
                    range,
                    &base,
                )
            })
            .collect();
    }

    let mut shard_records: Vec<Vec<OutcomeRecord>> = vec![Vec::new(); ranges.len()];
    std::thread::scope(|scope| {
        let mut handles = Vec::with_capacity(workers);
        for worker in 0..workers {
            let ranges = &ranges;
            let base = &base;
            handles.push(scope.spawn(move || {
                let mut produced = Vec::new();
                let mut shard = worker;
                while shard < ranges.len() {
                    let records = sample_range(
                        &config.initial_state,
                        &config.settings,
                        &config.selection,
                        ranges[shard].clone(),
                        base,
                    );
                    produced.push((shard, records));
                    shard += workers;
                }
                produced
            }));
        }
        for handle in handles {
            for (shard, records) in handle.join().expect("sampling worker panicked") {
                shard_records[shard] = records;
            }
        }
    });
    shard_records.into_iter().flatten().collect()
}

fn worker_count() -> usize {
    if let Ok(value) = std::env::var("SIM_THREADS") {
        if let Ok(threads) = value.trim().parse::<usize>() {
            return threads.max(1);
        }
    }
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_experiment;

    fn base_config(extra: &str) -> ExperimentConfig {
        let text = format!(
            r#"{{
                "initial_state": {{ "alpha": [0.7071067811865476, 0.0],
                                    "beta": [0.7071067811865476, 0.0] }},
                "settings": [
                    {{ "bloch": [0.0, 0.0, 1.0], "eta": 0.3 }},
                    {{ "bloch": [1.0, 0.0, 0.0], "eta": 0.2 }}
                ],
                "outputs": {{ "subsets": [[1], [1, 2]], "emit_distribution": true }}
                {extra}
            }}"#
        );
        parse_experiment(&text).unwrap()
    }

    #[test]
    fn exact_run_reports_distribution_and_correlations() {
        let report = run_experiment(&base_config(""), false).unwrap();
        let rows = report.exact_distribution.unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[0].outcomes, "++");
        let total: f64 = rows.iter().map(|r| r.probability).sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!(report.tree_cross_check <= CROSS_CHECK_TOL);
        // First measurement along z on |D>: mean 0.
        assert!(report.exact_correlations[0].value.abs() < 1e-12);
        assert_eq!(report.exact_correlations[1].subset, vec![1, 2]);
        assert!(report.selection.is_none());
        assert!(report.monte_carlo.is_none());
    }

    #[test]
    fn sampling_is_reproducible_across_shard_counts() {
        let one = base_config(r#", "sampling": { "shots": 4000, "seed": 11, "shards": 1 }"#);
        let many = base_config(r#", "sampling": { "shots": 4000, "seed": 11, "shards": 7 }"#);
        let a = run_experiment(&one, true).unwrap();
        let b = run_experiment(&many, true).unwrap();
        let (a, b) = (a.monte_carlo.unwrap(), b.monte_carlo.unwrap());
        for (x, y) in a.estimates.iter().zip(&b.estimates) {
            assert_eq!(x.mean.to_bits(), y.mean.to_bits());
            assert_eq!(x.stderr.to_bits(), y.stderr.to_bits());
            assert_eq!(x.count, y.count);
        }
    }

    #[test]
    fn monte_carlo_mean_tracks_exact_value() {
        let config = base_config(r#", "sampling": { "shots": 200000, "seed": 3, "shards": 4 }"#);
        let report = run_experiment(&config, true).unwrap();
        let mc = report.monte_carlo.unwrap();
        for (estimate, exact) in mc.estimates.iter().zip(&report.exact_correlations) {
            assert!(
                (estimate.mean - exact.value).abs() < 5.0 * estimate.stderr.max(1e-3),
                "estimate {} too far from exact {}",
                estimate.mean,
                exact.value
            );
        }
    }

    #[test]
    fn reselection_reports_acceptance_and_conditional_means() {
        let config = base_config(r#", "selection": { "mode": "reselect" }"#);
        let report = run_experiment(&config, false).unwrap();
        let selection = report.selection.unwrap();
        assert_eq!(selection.mode, "reselect");
        assert!(selection.acceptance > 0.0 && selection.acceptance <= 1.0);
        assert_eq!(selection.conditional_means.len(), 2);
    }
}
