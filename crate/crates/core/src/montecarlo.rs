//! Stochastic simulation of single-photon runs: stage-by-stage conditional
//! collapse, calibrated estimators, and reproducible parallel streams.
//!
//! Every sample owns its own ChaCha substream: sample `i` of a run draws
//! from stream `base.stream + i` of the seeded generator. Shards therefore
//! cover contiguous sample ranges, and the merged record sequence is
//! bit-identical for any shard count.

use alloc::vec::Vec;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::measurement::{kraus_for, MeasurementSetting};
use crate::outcome::{Outcome, OutcomeString};
use crate::qubit::{Operator2, PolState};
use crate::selection::SelectionSpec;
use crate::{ETA_MIN, ETA_SHARP};

/// Seed and substream base for a reproducible run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngSpec {
    pub seed: u64,
    pub stream: u64,
}

impl RngSpec {
    pub fn new(seed: u64) -> Self {
        Self { seed, stream: 0 }
    }
}

/// One sampled run: the unsharp outcomes plus the final projective result
/// when a selection is active (always `true` without selection).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutcomeRecord {
    pub outcomes: OutcomeString,
    pub selected: bool,
}

/// Sample statistics of a calibrated estimator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub count: u64,
    pub acceptance: f64,
}

/// Per-stage operators precomputed once per batch.
struct StagePlan {
    m_plus: Operator2,
    m_minus: Operator2,
}

struct RunPlan {
    stages: Vec<StagePlan>,
    selector: Option<Operator2>,
}

impl RunPlan {
    fn new(state: &PolState, settings: &[MeasurementSetting], selection: &SelectionSpec) -> Self {
        let stages = settings
            .iter()
            .map(|s| StagePlan {
                m_plus: crate::measurement::measurement_operator(s, Outcome::Plus),
                m_minus: crate::measurement::measurement_operator(s, Outcome::Minus),
            })
            .collect();
        let selector = selection.final_state(state).map(|f| {
            let sigma = f.projector() - f.orthogonal().projector();
            kraus_for(&sigma, ETA_SHARP, Outcome::Plus)
        });
        Self { stages, selector }
    }

    fn sample(&self, state: &PolState, rng: &mut impl RngCore) -> OutcomeRecord {
        let mut current = *state;
        let mut outcomes = Vec::with_capacity(self.stages.len());
        for stage in &self.stages {
            let plus_branch = stage.m_plus.apply(&current);
            let p_plus = plus_branch.norm_sqr();
            if uniform(rng) < p_plus {
                outcomes.push(Outcome::Plus);
                current = plus_branch.scale((1.0 / libm::sqrt(p_plus)).into());
            } else {
                outcomes.push(Outcome::Minus);
                let minus_branch = stage.m_minus.apply(&current);
                let p_minus = minus_branch.norm_sqr();
                current = minus_branch.scale((1.0 / libm::sqrt(p_minus)).into());
            }
        }
        let selected = match &self.selector {
            None => true,
            Some(projector) => uniform(rng) < projector.apply(&current).norm_sqr(),
        };
        OutcomeRecord {
            outcomes: OutcomeString::new(outcomes),
            selected,
        }
    }
}

/// Uniform in `[0, 1)` from the top 53 bits of a draw.
fn uniform(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Sample a single run, drawing each outcome from its conditional law and
/// then the projective selection stage.
pub fn sample_run(
    state: &PolState,
    settings: &[MeasurementSetting],
    selection: &SelectionSpec,
    rng: &mut impl RngCore,
) -> OutcomeRecord {
    RunPlan::new(state, settings, selection).sample(state, rng)
}

/// Sample the global index range `[start, end)`; sample `i` uses substream
/// `base.stream + i`. Shards calling this on disjoint ranges reproduce
/// exactly the records of a single sequential pass.
pub fn sample_range(
    state: &PolState,
    settings: &[MeasurementSetting],
    selection: &SelectionSpec,
    range: core::ops::Range<u64>,
    base: &RngSpec,
) -> Vec<OutcomeRecord> {
    let plan = RunPlan::new(state, settings, selection);
    let template = ChaCha8Rng::seed_from_u64(base.seed);
    let mut records = Vec::with_capacity((range.end - range.start) as usize);
    for i in range {
        let mut rng = template.clone();
        rng.set_stream(base.stream.wrapping_add(i));
        records.push(plan.sample(state, &mut rng));
    }
    records
}

/// Sample `shots` runs sequentially; equals [`run_shards`] with one shard.
pub fn sample_runs(
    state: &PolState,
    settings: &[MeasurementSetting],
    selection: &SelectionSpec,
    shots: u64,
    base: &RngSpec,
) -> Vec<OutcomeRecord> {
    sample_range(state, settings, selection, 0..shots, base)
}

/// Contiguous sample-index ranges for `shards` shards; earlier shards take
/// the remainder.
pub fn shard_ranges(shots: u64, shards: u64) -> Vec<core::ops::Range<u64>> {
    let shards = shards.max(1);
    let per_shard = shots / shards;
    let remainder = shots % shards;
    let mut ranges = Vec::with_capacity(shards as usize);
    let mut start = 0;
    for j in 0..shards {
        let len = per_shard + u64::from(j < remainder);
        ranges.push(start..start + len);
        start += len;
    }
    ranges
}

/// Partition `shots` across `shards` substream ranges and merge the records
/// in shard order. The merged sequence is independent of the shard count.
pub fn run_shards(
    state: &PolState,
    settings: &[MeasurementSetting],
    selection: &SelectionSpec,
    shots: u64,
    base: &RngSpec,
    shards: u64,
) -> Vec<OutcomeRecord> {
    let mut records = Vec::with_capacity(shots as usize);
    for range in shard_ranges(shots, shards) {
        records.extend(sample_range(state, settings, selection, range, base));
    }
    records
}

/// Calibrated product mean over `subset` (0-based) with the plain i.i.d.
/// standard error, computed over the selected records only.
pub fn estimate_correlation(
    records: &[OutcomeRecord],
    subset: &[usize],
    etas: &[f64],
) -> Result<Estimate> {
    if subset.is_empty() {
        return Err(Error::LengthMismatch {
            expected: 1,
            got: 0,
        });
    }
    let mut inv_sines = Vec::with_capacity(subset.len());
    for &k in subset {
        if k >= etas.len() {
            return Err(Error::LengthMismatch {
                expected: etas.len(),
                got: k + 1,
            });
        }
        if etas[k] <= ETA_MIN {
            return Err(Error::ZeroSharpness);
        }
        inv_sines.push((k, 1.0 / libm::sin(2.0 * etas[k])));
    }

    let total = records.len() as u64;
    let mut count = 0u64;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for record in records {
        if !record.selected {
            continue;
        }
        let mut value = 1.0;
        for &(k, inv) in &inv_sines {
            value *= record.outcomes.get(k).sign() * inv;
        }
        count += 1;
        sum += value;
        sum_sq += value * value;
    }
    if count == 0 {
        return Err(Error::EmptySample);
    }
    let mean = sum / count as f64;
    let variance = (sum_sq / count as f64 - mean * mean).max(0.0);
    let stderr = if count > 1 {
        libm::sqrt(variance * count as f64 / (count as f64 - 1.0)) / libm::sqrt(count as f64)
    } else {
        0.0
    };
    Ok(Estimate {
        mean,
        stderr,
        count,
        acceptance: if total == 0 {
            0.0
        } else {
            count as f64 / total as f64
        },
    })
}

/// Empirical frequencies per outcome string, in lexicographic index order.
pub fn outcome_frequencies(records: &[OutcomeRecord], levels: usize) -> Vec<f64> {
    let mut counts = alloc::vec![0u64; 1 << levels];
    for record in records {
        counts[record.outcomes.index()] += 1;
    }
    let total = records.len().max(1) as f64;
    counts.into_iter().map(|c| c as f64 / total).collect()
}
