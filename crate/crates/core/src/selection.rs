//! Postselection and reselection statistics: anomalous means, anomalous
//! second-order correlations, and their weak-measurement limits.
//!
//! Conditioning appends a projective stage (`eta = pi/4`) in the basis
//! `{|f>, |f_perp>}` after the unsharp sequence and keeps only the runs
//! where that stage yields `+`. The postselected mean of a single unsharp
//! measurement and the reselected second-order correlation both admit
//! closed forms, which the exact-enumeration route reproduces.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::measurement::{kraus_for, MeasurementSetting};
use crate::outcome::{Outcome, OutcomeString};
use crate::qubit::{bloch_observable, expectation, BlochVector, PolState};
use crate::{ETA_MIN, ETA_SHARP};

const ZERO_OVERLAP_SQ: f64 = 1e-30;

/// How to condition the statistics of a measurement sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SelectionSpec {
    /// Keep everything; no projective stage is appended.
    None,
    /// Keep runs where a final projective measurement yields `final_state`.
    Postselect(PolState),
    /// Postselection with the final state equal to the initial state.
    Reselect,
}

impl SelectionSpec {
    /// The final state conditioned on, given the initial state.
    pub fn final_state(&self, initial: &PolState) -> Option<PolState> {
        match self {
            SelectionSpec::None => None,
            SelectionSpec::Postselect(f) => Some(*f),
            SelectionSpec::Reselect => Some(*initial),
        }
    }
}

/// Complex weak value `<f|sigma|i> / <f|i>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakValue {
    pub value: crate::qubit::C64,
}

impl WeakValue {
    pub fn re(&self) -> f64 {
        self.value.re
    }

    pub fn norm_sqr(&self) -> f64 {
        self.value.norm_sqr()
    }
}

/// Weak value of `sigma_n` between initial state `i` and final state `f`.
/// Its real part is the `eta -> 0` limit of the postselected mean and may
/// lie outside the spectrum `+-1`.
pub fn weak_value(i: &PolState, f: &PolState, n: &BlochVector) -> Result<WeakValue> {
    let overlap = f.inner(i);
    if overlap.norm_sqr() < ZERO_OVERLAP_SQ {
        return Err(Error::OrthogonalSelection);
    }
    let numerator = f.inner(&bloch_observable(n).apply(i));
    Ok(WeakValue {
        value: numerator / overlap,
    })
}

/// Postselected mean of one unsharp measurement of `sigma_n`:
///
/// ```text
/// Re(wv) / (cos^2(eta) + |wv|^2 sin^2(eta))
/// ```
///
/// Valid for every sharpness; converges to `Re(wv)` as `eta -> 0`.
pub fn postselected_mean(i: &PolState, f: &PolState, n: &BlochVector, eta: f64) -> Result<f64> {
    if eta <= ETA_MIN || eta > ETA_SHARP {
        return Err(Error::ZeroSharpness);
    }
    let wv = weak_value(i, f, n)?;
    let cos = libm::cos(eta);
    let sin = libm::sin(eta);
    Ok(wv.re() / (cos * cos + wv.norm_sqr() * sin * sin))
}

/// Reselected second-order correlation of two identical unsharp
/// measurements of `sigma_n`:
///
/// ```text
/// (1 + <sigma>^2) / (2 - sin^2(2 eta) (1 - <sigma>^2))
/// ```
///
/// Tends to `(1 + <sigma>^2) / 2` as `eta -> 0`.
pub fn reselected_correlation(i: &PolState, n: &BlochVector, eta: f64) -> Result<f64> {
    if eta <= ETA_MIN || eta > ETA_SHARP {
        return Err(Error::ZeroSharpness);
    }
    let mean = expectation(i, &bloch_observable(n))?;
    let sin2 = libm::sin(2.0 * eta);
    Ok((1.0 + mean * mean) / (2.0 - sin2 * sin2 * (1.0 - mean * mean)))
}

/// Conditional statistics of a measurement sequence by exact enumeration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalStats {
    /// Calibrated product mean over the requested subset, conditioned on
    /// successful selection.
    pub mean: f64,
    /// Probability that the final projective stage yields `+`.
    pub acceptance: f64,
}

/// Exact conditional calibrated mean and acceptance rate.
///
/// Appends a projective stage in the basis `{|f>, |f_perp>}` (the
/// projective PPBS level is a plain PBS), enumerates all outcome strings,
/// conditions on the final outcome `+`, and averages the calibrated
/// product over `subset` (0-based indices into the unsharp stages).
///
/// With [`SelectionSpec::None`] no stage is appended and the unconditioned
/// mean is returned with acceptance 1.
pub fn conditional_statistics(
    state: &PolState,
    settings: &[MeasurementSetting],
    selection: &SelectionSpec,
    subset: &[usize],
) -> Result<ConditionalStats> {
    if subset.is_empty() {
        return Err(Error::LengthMismatch {
            expected: 1,
            got: 0,
        });
    }
    let mut inv_sines = Vec::with_capacity(subset.len());
    for &k in subset {
        if k >= settings.len() {
            return Err(Error::LengthMismatch {
                expected: settings.len(),
                got: k + 1,
            });
        }
        let eta = settings[k].eta();
        if eta <= ETA_MIN {
            return Err(Error::ZeroSharpness);
        }
        inv_sines.push((k, 1.0 / libm::sin(2.0 * eta)));
    }

    // Projective selection operator sigma = |f><f| - |f_perp><f_perp|;
    // its eta = pi/4 Kraus operator for outcome + is |f><f|.
    let selector = selection.final_state(state).map(|f| {
        let sigma = f.projector() - f.orthogonal().projector();
        kraus_for(&sigma, ETA_SHARP, Outcome::Plus)
    });

    let n = settings.len();
    let mut accepted = 0.0;
    let mut weighted = 0.0;
    for index in 0..(1usize << n) {
        let outcomes = OutcomeString::from_index(index, n);
        let mut branch = *state;
        for (s, &nu) in settings.iter().zip(outcomes.iter()) {
            branch = crate::measurement::measurement_operator(s, nu).apply(&branch);
        }
        if let Some(projector) = &selector {
            branch = projector.apply(&branch);
        }
        let p = branch.norm_sqr();
        accepted += p;
        let mut product = p;
        for &(k, inv) in &inv_sines {
            product *= outcomes.get(k).sign() * inv;
        }
        weighted += product;
    }

    if accepted < ZERO_OVERLAP_SQ {
        return Err(Error::OrthogonalSelection);
    }
    Ok(ConditionalStats {
        mean: weighted / accepted,
        acceptance: accepted,
    })
}
