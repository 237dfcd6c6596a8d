//! Unsharp measurement operators, sequential composition, exact outcome
//! distributions, calibration, and correlation functions.
//!
//! A single unsharp measurement of the polarization along Bloch direction
//! `n` with sharpness `eta` has effects
//!
//! ```text
//! E_(+/-) = (I +/- sin(2 eta) sigma_n) / 2
//! ```
//!
//! and measurement (Kraus) operators
//!
//! ```text
//! M_(+/-) = sqrt(E_(+/-)) = (cos(eta) +/- sin(eta) sigma_n) / sqrt(2).
//! ```
//!
//! Sequential measurements compose by ordered operator products; the raw
//! outcomes `nu = +/-1` are calibrated by `1/sin(2 eta)` so that means and
//! correlations reproduce quantum expectation values independently of the
//! sharpness.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::outcome::{Outcome, OutcomeString};
use crate::qubit::{bloch_observable, expectation, BlochVector, Operator2, PolState};
use crate::{ETA_MIN, ETA_SHARP, INPUT_TOL, N_MAX};

/// One unsharp measurement: Bloch direction plus sharpness `eta` in
/// `[0, pi/4]`. The unsharpness `chi = pi/4 - eta` is derived on demand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementSetting {
    n: BlochVector,
    eta: f64,
}

impl MeasurementSetting {
    pub fn new(n: BlochVector, eta: f64) -> Result<Self> {
        if !(0.0..=ETA_SHARP + INPUT_TOL).contains(&eta) {
            return Err(Error::EtaRange { eta });
        }
        Ok(Self {
            n,
            eta: eta.min(ETA_SHARP),
        })
    }

    /// Setting specified by unsharpness `chi = pi/4 - eta`.
    pub fn from_chi(n: BlochVector, chi: f64) -> Result<Self> {
        if !(0.0..=ETA_SHARP + INPUT_TOL).contains(&chi) {
            return Err(Error::ChiRange { chi });
        }
        Self::new(n, ETA_SHARP - chi.min(ETA_SHARP))
    }

    /// Projective measurement, `eta = pi/4`.
    pub fn sharp(n: BlochVector) -> Self {
        Self { n, eta: ETA_SHARP }
    }

    pub fn direction(&self) -> &BlochVector {
        &self.n
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Unsharpness `chi = pi/4 - eta`.
    pub fn chi(&self) -> f64 {
        ETA_SHARP - self.eta
    }

    pub fn observable(&self) -> Operator2 {
        bloch_observable(&self.n)
    }
}

/// Kraus operator `(cos(eta) + nu sin(eta) sigma) / sqrt(2)` for an
/// arbitrary involutory observable `sigma`.
///
/// Shared with the selection module, where `sigma` is built from a
/// projector pair rather than a Bloch direction.
pub(crate) fn kraus_for(sigma: &Operator2, eta: f64, nu: Outcome) -> Operator2 {
    let inv_sqrt2 = core::f64::consts::FRAC_1_SQRT_2;
    (Operator2::identity().scale(libm::cos(eta)) + sigma.scale(nu.sign() * libm::sin(eta)))
        .scale(inv_sqrt2)
}

/// Effect `(I + nu sin(2 eta) sigma) / 2`.
pub(crate) fn effect_for(sigma: &Operator2, eta: f64, nu: Outcome) -> Operator2 {
    (Operator2::identity() + sigma.scale(nu.sign() * libm::sin(2.0 * eta))).scale(0.5)
}

/// Measurement operator `M_nu` of a setting.
pub fn measurement_operator(s: &MeasurementSetting, nu: Outcome) -> Operator2 {
    kraus_for(&s.observable(), s.eta, nu)
}

/// Effect `E_nu = M_nu^2` of a setting.
pub fn effect(s: &MeasurementSetting, nu: Outcome) -> Operator2 {
    effect_for(&s.observable(), s.eta, nu)
}

/// One collapse step: returns the updated normalized state and the outcome
/// probability `<psi|E_nu|psi>`.
pub fn apply_measurement(
    state: &PolState,
    s: &MeasurementSetting,
    nu: Outcome,
) -> Result<(PolState, f64)> {
    let branch = measurement_operator(s, nu).apply(state);
    let probability = branch.norm_sqr();
    if probability < 1e-30 {
        return Err(Error::ImpossibleOutcome { probability });
    }
    let updated = branch.scale((1.0 / libm::sqrt(probability)).into());
    Ok((updated, probability.min(1.0)))
}

/// Ordered product `M^(N)_{nu_N} ... M^(1)_{nu_1}`; the first measurement is
/// applied rightmost.
pub fn sequential_operator(
    settings: &[MeasurementSetting],
    outcomes: &OutcomeString,
) -> Result<Operator2> {
    check_lengths(settings, outcomes)?;
    let mut product = Operator2::identity();
    for (s, &nu) in settings.iter().zip(outcomes.iter()) {
        product = measurement_operator(s, nu) * product;
    }
    Ok(product)
}

/// Joint probability `|| M_{nu_1...nu_N} |psi> ||^2`.
pub fn joint_probability(
    state: &PolState,
    settings: &[MeasurementSetting],
    outcomes: &OutcomeString,
) -> Result<f64> {
    Ok(sequential_operator(settings, outcomes)?
        .apply(state)
        .norm_sqr())
}

fn check_lengths(settings: &[MeasurementSetting], outcomes: &OutcomeString) -> Result<()> {
    if settings.len() != outcomes.len() {
        return Err(Error::LengthMismatch {
            expected: settings.len(),
            got: outcomes.len(),
        });
    }
    if settings.is_empty() {
        return Err(Error::LengthMismatch {
            expected: 1,
            got: 0,
        });
    }
    Ok(())
}

/// Exact joint distribution over all `2^N` outcome strings.
///
/// Iteration order is lexicographic with `+` before `-`, first measurement
/// most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    probabilities: Vec<f64>,
    settings: Vec<MeasurementSetting>,
}

impl OutcomeDistribution {
    pub(crate) fn from_parts(
        probabilities: Vec<f64>,
        settings: Vec<MeasurementSetting>,
    ) -> Self {
        debug_assert_eq!(probabilities.len(), 1 << settings.len());
        Self {
            probabilities,
            settings,
        }
    }

    pub fn levels(&self) -> usize {
        self.settings.len()
    }

    pub fn settings(&self) -> &[MeasurementSetting] {
        &self.settings
    }

    pub fn probability(&self, outcomes: &OutcomeString) -> f64 {
        self.probabilities[outcomes.index()]
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn iter(&self) -> impl Iterator<Item = (OutcomeString, f64)> + '_ {
        let n = self.levels();
        self.probabilities
            .iter()
            .enumerate()
            .map(move |(i, &p)| (OutcomeString::from_index(i, n), p))
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    /// Calibrated product mean over a 0-based index subset:
    /// `sum_strings p * prod_{k in subset} nu_k / sin(2 eta_k)`.
    pub fn calibrated_mean(&self, subset: &[usize]) -> Result<f64> {
        if subset.is_empty() {
            return Err(Error::LengthMismatch {
                expected: 1,
                got: 0,
            });
        }
        let mut factors = Vec::with_capacity(subset.len());
        for &k in subset {
            if k >= self.levels() {
                return Err(Error::LengthMismatch {
                    expected: self.levels(),
                    got: k + 1,
                });
            }
            factors.push((k, 1.0 / checked_sin_2eta(self.settings[k].eta())?));
        }
        let mut mean = 0.0;
        for (string, p) in self.iter() {
            let mut weight = p;
            for &(k, inv) in &factors {
                weight *= string.get(k).sign() * inv;
            }
            mean += weight;
        }
        Ok(mean)
    }
}

/// All `2^N` joint probabilities of a measurement sequence.
pub fn outcome_distribution(
    state: &PolState,
    settings: &[MeasurementSetting],
) -> Result<OutcomeDistribution> {
    let n = settings.len();
    if n > N_MAX {
        return Err(Error::TooManyLevels { levels: n });
    }
    if n == 0 {
        return Err(Error::LengthMismatch {
            expected: 1,
            got: 0,
        });
    }
    // Branch recursively instead of re-multiplying the operator product for
    // every string: 2^(N+1) state applications instead of N * 2^N products.
    let mut branches = Vec::with_capacity(1 << n);
    branches.push(*state);
    for s in settings {
        let m_plus = measurement_operator(s, Outcome::Plus);
        let m_minus = measurement_operator(s, Outcome::Minus);
        let mut next = Vec::with_capacity(branches.len() * 2);
        for b in &branches {
            next.push(m_plus.apply(b));
            next.push(m_minus.apply(b));
        }
        branches = next;
    }
    // Branch order: the last measurement alternates fastest, so position i
    // already equals the lexicographic string index (first outcome most
    // significant, + = 0).
    let probabilities = branches.iter().map(|b| b.norm_sqr()).collect();
    Ok(OutcomeDistribution::from_parts(
        probabilities,
        settings.to_vec(),
    ))
}

fn checked_sin_2eta(eta: f64) -> Result<f64> {
    if eta <= ETA_MIN {
        return Err(Error::ZeroSharpness);
    }
    Ok(libm::sin(2.0 * eta))
}

/// Calibrated measured value `nu / sin(2 eta)`.
pub fn calibrate(nu: Outcome, eta: f64) -> Result<f64> {
    Ok(nu.sign() / checked_sin_2eta(eta)?)
}

/// m-th order correlation function over a 0-based index subset, by exact
/// enumeration of the joint distribution.
pub fn correlation(
    state: &PolState,
    settings: &[MeasurementSetting],
    subset: &[usize],
) -> Result<f64> {
    outcome_distribution(state, settings)?.calibrated_mean(subset)
}

/// Sharpness-independent closed form of the full N-th order correlation:
///
/// * even N: `(n1.n2)(n3.n4)...`
/// * odd N:  `<psi|sigma_1|psi> (n2.n3)(n4.n5)...`
///
/// The nested-anticommutator route `2^-N <psi|{sigma_1,{sigma_2,...}}|psi>`
/// is evaluated alongside and the two are asserted to agree.
pub fn correlation_closed_form(state: &PolState, directions: &[BlochVector]) -> f64 {
    assert!(!directions.is_empty());
    let bloch_form = if directions.len() % 2 == 0 {
        directions
            .chunks(2)
            .map(|pair| pair[0].dot(&pair[1]))
            .product()
    } else {
        let lead = expectation(state, &bloch_observable(&directions[0]))
            .expect("bloch observable is Hermitian");
        lead * directions[1..]
            .chunks(2)
            .map(|pair| pair[0].dot(&pair[1]))
            .product::<f64>()
    };

    let mut nested = Operator2::identity();
    for n in directions.iter().rev() {
        nested = bloch_observable(n).anticommutator(&nested);
    }
    let scale = libm::pow(2.0, -(directions.len() as f64));
    let anticommutator_form = expectation(state, &nested.scale(scale))
        .expect("nested anticommutator of Hermitian operators is Hermitian");

    assert!(
        libm::fabs(bloch_form - anticommutator_form) <= 1e-12,
        "closed-form routes disagree: {bloch_form} vs {anticommutator_form}",
    );
    bloch_form
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubit::{pauli, PauliAxis, C64};
    use crate::NORM_TOL;
    use alloc::vec;
    use approx::assert_abs_diff_eq;
    use core::f64::consts::{FRAC_PI_4, FRAC_PI_8};

    fn z_setting(eta: f64) -> MeasurementSetting {
        MeasurementSetting::new(BlochVector::z_axis(), eta).unwrap()
    }

    fn x_setting(eta: f64) -> MeasurementSetting {
        MeasurementSetting::new(BlochVector::x_axis(), eta).unwrap()
    }

    #[test]
    fn setting_stores_eta_derives_chi() {
        let s = z_setting(0.1);
        assert_abs_diff_eq!(s.chi(), FRAC_PI_4 - 0.1, epsilon = 1e-15);
        assert!(MeasurementSetting::new(BlochVector::z_axis(), 1.0).is_err());
        assert!(MeasurementSetting::new(BlochVector::z_axis(), -0.1).is_err());
        let from_chi = MeasurementSetting::from_chi(BlochVector::z_axis(), 0.1).unwrap();
        assert_abs_diff_eq!(from_chi.eta(), FRAC_PI_4 - 0.1, epsilon = 1e-15);
    }

    #[test]
    fn measurement_operator_projective_limit() {
        let m = measurement_operator(&z_setting(FRAC_PI_4), Outcome::Plus);
        let projector = Operator2::diag(C64::new(1.0, 0.0), C64::new(0.0, 0.0));
        assert!(m.max_abs_diff(&projector) < NORM_TOL);
    }

    #[test]
    fn measurement_operator_no_measurement_limit() {
        let inv_sqrt2 = core::f64::consts::FRAC_1_SQRT_2;
        for nu in [Outcome::Plus, Outcome::Minus] {
            let m = measurement_operator(&z_setting(0.0), nu);
            assert!(m.max_abs_diff(&Operator2::identity().scale(inv_sqrt2)) < NORM_TOL);
        }
    }

    #[test]
    fn measurement_operator_half_sharp() {
        let m = measurement_operator(&z_setting(FRAC_PI_8), Outcome::Minus);
        let inv_sqrt2 = core::f64::consts::FRAC_1_SQRT_2;
        let a = (libm::cos(FRAC_PI_8) - libm::sin(FRAC_PI_8)) * inv_sqrt2;
        let d = (libm::cos(FRAC_PI_8) + libm::sin(FRAC_PI_8)) * inv_sqrt2;
        assert_abs_diff_eq!(m.entries[0][0].re, a, epsilon = NORM_TOL);
        assert_abs_diff_eq!(m.entries[1][1].re, d, epsilon = NORM_TOL);
        assert_abs_diff_eq!(a, 0.38268, epsilon = 1e-5);
        assert_abs_diff_eq!(d, 0.92388, epsilon = 1e-5);
    }

    #[test]
    fn effect_examples() {
        let e = effect(&z_setting(FRAC_PI_4), Outcome::Plus);
        assert!(e.max_abs_diff(&Operator2::diag(C64::new(1.0, 0.0), C64::new(0.0, 0.0))) < NORM_TOL);

        for nu in [Outcome::Plus, Outcome::Minus] {
            let e = effect(&z_setting(0.0), nu);
            assert!(e.max_abs_diff(&Operator2::identity().scale(0.5)) < NORM_TOL);
        }

        let e = effect(&z_setting(FRAC_PI_8), Outcome::Plus);
        let half_sqrt2 = core::f64::consts::SQRT_2 / 2.0;
        assert_abs_diff_eq!(e.entries[0][0].re, (1.0 + half_sqrt2) / 2.0, epsilon = NORM_TOL);
        assert_abs_diff_eq!(e.entries[1][1].re, (1.0 - half_sqrt2) / 2.0, epsilon = NORM_TOL);
        assert_abs_diff_eq!(e.entries[0][0].re, 0.85355, epsilon = 1e-5);
    }

    #[test]
    fn effects_close_and_square_root_law() {
        let s = z_setting(0.3);
        let closure = effect(&s, Outcome::Plus) + effect(&s, Outcome::Minus);
        assert!(closure.max_abs_diff(&Operator2::identity()) < NORM_TOL);
        for nu in [Outcome::Plus, Outcome::Minus] {
            let m = measurement_operator(&s, nu);
            assert!((m * m).max_abs_diff(&effect(&s, nu)) < NORM_TOL);
        }
    }

    #[test]
    fn apply_measurement_examples() {
        let (state, p) =
            apply_measurement(&PolState::horizontal(), &z_setting(FRAC_PI_4), Outcome::Plus)
                .unwrap();
        assert_abs_diff_eq!(p, 1.0, epsilon = NORM_TOL);
        assert_abs_diff_eq!(state.overlap(&PolState::horizontal()), 1.0, epsilon = NORM_TOL);

        let (state, p) =
            apply_measurement(&PolState::diagonal(), &z_setting(FRAC_PI_4), Outcome::Plus)
                .unwrap();
        assert_abs_diff_eq!(p, 0.5, epsilon = NORM_TOL);
        assert_abs_diff_eq!(state.overlap(&PolState::horizontal()), 1.0, epsilon = NORM_TOL);

        let (state, p) =
            apply_measurement(&PolState::diagonal(), &z_setting(FRAC_PI_8), Outcome::Plus)
                .unwrap();
        assert_abs_diff_eq!(p, 0.5, epsilon = NORM_TOL);
        let expected =
            PolState::from_reals(libm::cos(FRAC_PI_8), libm::sin(FRAC_PI_8)).unwrap();
        assert_abs_diff_eq!(state.overlap(&expected), 1.0, epsilon = NORM_TOL);
    }

    #[test]
    fn apply_measurement_impossible_outcome() {
        let err = apply_measurement(&PolState::vertical(), &z_setting(FRAC_PI_4), Outcome::Plus)
            .unwrap_err();
        assert!(matches!(err, Error::ImpossibleOutcome { .. }));
    }

    #[test]
    fn sequential_operator_single_reduces() {
        let s = z_setting(0.2);
        let seq =
            sequential_operator(&[s], &OutcomeString::parse("+").unwrap()).unwrap();
        assert!(seq.max_abs_diff(&measurement_operator(&s, Outcome::Plus)) < NORM_TOL);
    }

    #[test]
    fn sequential_operator_projector_idempotence() {
        let s = z_setting(FRAC_PI_4);
        let seq =
            sequential_operator(&[s, s], &OutcomeString::parse("++").unwrap()).unwrap();
        let projector = Operator2::diag(C64::new(1.0, 0.0), C64::new(0.0, 0.0));
        assert!(seq.max_abs_diff(&projector) < NORM_TOL);
    }

    #[test]
    fn sequential_operator_ordering_and_hermiticity() {
        let settings = [z_setting(FRAC_PI_8), x_setting(FRAC_PI_8)];
        let outcomes = OutcomeString::parse("+-").unwrap();
        let seq = sequential_operator(&settings, &outcomes).unwrap();
        let by_hand = measurement_operator(&settings[1], Outcome::Minus)
            * measurement_operator(&settings[0], Outcome::Plus);
        assert!(seq.max_abs_diff(&by_hand) < NORM_TOL);
        // Products of non-commuting Kraus operators are not Hermitian.
        assert!(!seq.is_hermitian(1e-6));
    }

    #[test]
    fn sequential_operator_length_mismatch() {
        let err = sequential_operator(&[z_setting(0.2)], &OutcomeString::parse("++").unwrap())
            .unwrap_err();
        assert!(matches!(err, Error::LengthMismatch { .. }));
    }

    #[test]
    fn joint_probability_single_setting() {
        let eta = 0.3;
        let p = joint_probability(
            &PolState::horizontal(),
            &[z_setting(eta)],
            &OutcomeString::parse("+").unwrap(),
        )
        .unwrap();
        assert_abs_diff_eq!(p, (1.0 + libm::sin(2.0 * eta)) / 2.0, epsilon = NORM_TOL);
    }

    #[test]
    fn joint_probability_all_z_product_form() {
        // |H>, all-z settings, all +: prod cos^2(chi_k).
        let chis = [0.2, 0.5, 0.7];
        let settings: Vec<_> = chis
            .iter()
            .map(|&chi| MeasurementSetting::from_chi(BlochVector::z_axis(), chi).unwrap())
            .collect();
        let p = joint_probability(
            &PolState::horizontal(),
            &settings,
            &OutcomeString::parse("+++").unwrap(),
        )
        .unwrap();
        let expected: f64 = chis.iter().map(|&chi| libm::cos(chi) * libm::cos(chi)).product();
        assert_abs_diff_eq!(p, expected, epsilon = NORM_TOL);
    }

    #[test]
    fn joint_probability_zero_sharpness_uniform() {
        let settings = [z_setting(0.0), x_setting(0.0), z_setting(0.0)];
        let state = PolState::new(C64::new(0.3, 0.1), C64::new(0.2, -0.9)).unwrap();
        for i in 0..8 {
            let outcomes = OutcomeString::from_index(i, 3);
            let p = joint_probability(&state, &settings, &outcomes).unwrap();
            assert_abs_diff_eq!(p, 0.125, epsilon = NORM_TOL);
        }
    }

    #[test]
    fn distribution_examples() {
        let d = outcome_distribution(&PolState::horizontal(), &[z_setting(FRAC_PI_4)]).unwrap();
        assert_abs_diff_eq!(d.probability(&OutcomeString::parse("+").unwrap()), 1.0, epsilon = NORM_TOL);
        assert_abs_diff_eq!(d.probability(&OutcomeString::parse("-").unwrap()), 0.0, epsilon = NORM_TOL);

        for eta in [0.0, 0.2, FRAC_PI_4] {
            let d = outcome_distribution(&PolState::diagonal(), &[z_setting(eta)]).unwrap();
            assert_abs_diff_eq!(d.probability(&OutcomeString::parse("+").unwrap()), 0.5, epsilon = NORM_TOL);
        }
    }

    #[test]
    fn distribution_two_equal_z_settings_on_diagonal() {
        let eta = 0.23;
        let s = z_setting(eta);
        let d = outcome_distribution(&PolState::diagonal(), &[s, s]).unwrap();
        let (c, sn) = (libm::cos(s.chi()), libm::sin(s.chi()));
        let same = (c * c * c * c + sn * sn * sn * sn) / 2.0;
        let diff = 2.0 * c * c * sn * sn / 2.0;
        assert_abs_diff_eq!(d.probability(&OutcomeString::parse("++").unwrap()), same, epsilon = NORM_TOL);
        assert_abs_diff_eq!(d.probability(&OutcomeString::parse("+-").unwrap()), diff, epsilon = NORM_TOL);
        assert_abs_diff_eq!(d.probability(&OutcomeString::parse("-+").unwrap()), diff, epsilon = NORM_TOL);
        assert_abs_diff_eq!(d.probability(&OutcomeString::parse("--").unwrap()), same, epsilon = NORM_TOL);
        assert_abs_diff_eq!(d.total(), 1.0, epsilon = NORM_TOL);
    }

    #[test]
    fn distribution_rejects_too_many_levels() {
        let settings = vec![z_setting(0.1); N_MAX + 1];
        let err = outcome_distribution(&PolState::horizontal(), &settings).unwrap_err();
        assert!(matches!(err, Error::TooManyLevels { .. }));
    }

    #[test]
    fn calibrate_examples() {
        assert_abs_diff_eq!(calibrate(Outcome::Plus, FRAC_PI_4).unwrap(), 1.0, epsilon = NORM_TOL);
        assert_abs_diff_eq!(
            calibrate(Outcome::Minus, FRAC_PI_8).unwrap(),
            -core::f64::consts::SQRT_2,
            epsilon = NORM_TOL
        );
        assert_eq!(calibrate(Outcome::Plus, 0.0).unwrap_err(), Error::ZeroSharpness);
    }

    #[test]
    fn correlation_all_z_orders() {
        let state = PolState::new(C64::new(0.6, 0.0), C64::new(0.0, 0.8)).unwrap();
        let settings = [z_setting(0.3), z_setting(0.15), z_setting(0.6)];
        let odd = correlation(&state, &settings, &[0]).unwrap();
        assert_abs_diff_eq!(odd, 0.36 - 0.64, epsilon = NORM_TOL);
        let odd3 = correlation(&state, &settings, &[0, 1, 2]).unwrap();
        assert_abs_diff_eq!(odd3, 0.36 - 0.64, epsilon = NORM_TOL);
        let even = correlation(&state, &settings, &[0, 1]).unwrap();
        assert_abs_diff_eq!(even, 1.0, epsilon = NORM_TOL);
    }

    #[test]
    fn correlation_orthogonal_directions() {
        let settings = [z_setting(0.2), x_setting(0.31)];
        let c = correlation(&PolState::diagonal(), &settings, &[0, 1]).unwrap();
        assert_abs_diff_eq!(c, 0.0, epsilon = NORM_TOL);
    }

    #[test]
    fn correlation_zero_sharpness_in_subset_fails() {
        let settings = [z_setting(0.0), z_setting(0.3)];
        let err = correlation(&PolState::diagonal(), &settings, &[0]).unwrap_err();
        assert_eq!(err, Error::ZeroSharpness);
    }

    #[test]
    fn closed_form_examples() {
        let z = BlochVector::z_axis();
        let x = BlochVector::x_axis();
        assert_abs_diff_eq!(
            correlation_closed_form(&PolState::horizontal(), &[z]),
            1.0,
            epsilon = NORM_TOL
        );
        let n = BlochVector::new(0.6, 0.0, 0.8).unwrap();
        assert_abs_diff_eq!(
            correlation_closed_form(&PolState::diagonal(), &[n, n]),
            1.0,
            epsilon = NORM_TOL
        );
        assert_abs_diff_eq!(
            correlation_closed_form(&PolState::horizontal(), &[z, x, x]),
            1.0,
            epsilon = NORM_TOL
        );
    }

    #[test]
    fn closed_form_matches_enumeration() {
        let state = PolState::new(C64::new(0.3, -0.2), C64::new(0.85, 0.1)).unwrap();
        let dirs = [
            BlochVector::new(0.6, 0.0, 0.8).unwrap(),
            BlochVector::x_axis(),
            BlochVector::from_components(1.0, 1.0, 1.0).unwrap(),
        ];
        let settings: Vec<_> = dirs
            .iter()
            .map(|&n| MeasurementSetting::new(n, 0.37).unwrap())
            .collect();
        let enumerated = correlation(&state, &settings, &[0, 1, 2]).unwrap();
        let closed = correlation_closed_form(&state, &dirs);
        assert_abs_diff_eq!(enumerated, closed, epsilon = 1e-10);
    }

    #[test]
    fn pauli_from_setting_observable() {
        let s = z_setting(0.5);
        assert!(s.observable().max_abs_diff(&pauli(PauliAxis::Z)) < NORM_TOL);
    }
}
