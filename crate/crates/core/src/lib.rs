//! Sequential unsharp measurements of photon polarization.
//!
//! The crate models binary-outcome unsharp (and, in the low-sharpness limit,
//! weak) polarization measurements three ways and cross-checks them against
//! each other:
//!
//! * [`measurement`] — the abstract measurement-operator formalism: effects,
//!   Kraus operators, sequential composition, exact outcome distributions,
//!   calibrated correlation functions and their sharpness-independent
//!   closed form.
//! * [`ppbs`] — the concrete optical realization as an N-level binary tree
//!   of partially polarizing beam splitters (PPBSs) with pre/post wave-plate
//!   rotations; path amplitudes reproduce the operator formalism.
//! * [`montecarlo`] — seeded stochastic sampling of single-photon runs with
//!   calibrated estimators and standard errors.
//!
//! [`selection`] adds postselection and reselection conditioning, including
//! the anomalous postselected mean and the anomalous reselected second-order
//! correlation.
//!
//! The crate is `no_std` (with `alloc`); all types are immutable values and
//! all operations are pure functions.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod measurement;
pub mod montecarlo;
pub mod outcome;
pub mod ppbs;
pub mod qubit;
pub mod selection;

pub use error::Error;
pub use measurement::{
    apply_measurement, calibrate, correlation, correlation_closed_form, effect,
    joint_probability, measurement_operator, outcome_distribution, sequential_operator,
    MeasurementSetting, OutcomeDistribution,
};
pub use montecarlo::{Estimate, OutcomeRecord, RngSpec};
pub use outcome::{Outcome, OutcomeString};
pub use ppbs::{
    chi_to_coefficients, closed_form_z_probability, leaf_probabilities, ppbs_unitary, propagate,
    MeasurementTree, PathState, Polarization, PpbsElement, TreeLevel,
};
pub use qubit::{
    bloch_observable, bloch_rotation, expectation, pauli, BlochVector, Operator2, PauliAxis,
    PolState, C64,
};
pub use selection::{
    conditional_statistics, postselected_mean, reselected_correlation, weak_value,
    ConditionalStats, SelectionSpec, WeakValue,
};

/// Tolerance for exact-algebra identities (normalization, unitarity,
/// hermiticity of constructed operators).
pub const NORM_TOL: f64 = 1e-12;

/// Tolerance for operator-level identities; same scale as [`NORM_TOL`].
pub const OP_TOL: f64 = 1e-12;

/// Looser tolerance applied to user-supplied inputs (decimal Bloch vectors,
/// hand-entered operators).
pub const INPUT_TOL: f64 = 1e-9;

/// Smallest sharpness accepted by calibration; Eq-style rescaling by
/// `1/sin(2η)` diverges at `η = 0`.
pub const ETA_MIN: f64 = 1e-9;

/// Sharpness of a projective measurement, `η = π/4`.
pub const ETA_SHARP: f64 = core::f64::consts::FRAC_PI_4;

/// Maximum number of sequential measurement levels for exact enumeration
/// (2^N outcome strings).
pub const N_MAX: usize = 20;
