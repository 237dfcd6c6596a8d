//! Optical realization of sequential unsharp measurements: partially
//! polarizing beam splitters (PPBSs) arranged in an N-level binary tree.
//!
//! A PPBS acts on the path basis `{|a>, |b>}` with a polarization-dependent
//! 2x2 unitary
//!
//! ```text
//! U_{H/V} = [  sqrt(T) e^{i phi}   sqrt(R) e^{i psi} ]
//!           [ -sqrt(R) e^{-i psi}  sqrt(T) e^{-i phi} ]
//! ```
//!
//! With `T_H = R_V = cos^2(chi)` and `R_H = T_V = sin^2(chi)` a single PPBS
//! realizes the unsharp z-measurement; wave plates before and after it
//! rotate the measured basis to an arbitrary Bloch direction. Transmission
//! extends a path label by `+`, reflection by `-`, and the leaf amplitudes
//! reproduce the sequential measurement operators up to a per-path global
//! phase (reflection contributes a sign from the unitary's second row).

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::measurement::{MeasurementSetting, OutcomeDistribution};
use crate::outcome::{Outcome, OutcomeString};
use crate::qubit::{bloch_rotation, Operator2, PolState, C64};
use crate::N_MAX;

/// One PPBS: transmission coefficients and phases for each polarization.
/// Reflection coefficients are derived, `R = 1 - T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PpbsElement {
    pub t_h: f64,
    pub t_v: f64,
    pub phi_h: f64,
    pub psi_h: f64,
    pub phi_v: f64,
    pub psi_v: f64,
}

/// Polarization component selecting which path unitary applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarization {
    H,
    V,
}

impl PpbsElement {
    /// PPBS with the given transmissions and all phases zero.
    pub fn new(t_h: f64, t_v: f64) -> Result<Self> {
        for value in [t_h, t_v] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::CoefficientRange { value });
            }
        }
        Ok(Self {
            t_h,
            t_v,
            phi_h: 0.0,
            psi_h: 0.0,
            phi_v: 0.0,
            psi_v: 0.0,
        })
    }

    pub fn with_phases(mut self, phi_h: f64, psi_h: f64, phi_v: f64, psi_v: f64) -> Self {
        self.phi_h = phi_h;
        self.psi_h = psi_h;
        self.phi_v = phi_v;
        self.psi_v = psi_v;
        self
    }

    /// PPBS realizing unsharpness `chi`: `T_H = R_V = cos^2(chi)`,
    /// `R_H = T_V = sin^2(chi)`.
    pub fn from_chi(chi: f64) -> Result<Self> {
        let (t_h, _, t_v, _) = chi_to_coefficients(chi)?;
        Self::new(t_h, t_v)
    }

    pub fn r_h(&self) -> f64 {
        1.0 - self.t_h
    }

    pub fn r_v(&self) -> f64 {
        1.0 - self.t_v
    }

    /// Path-basis unitary for one polarization component.
    pub fn unitary(&self, pol: Polarization) -> Operator2 {
        let (t, r, phi, psi) = match pol {
            Polarization::H => (self.t_h, self.r_h(), self.phi_h, self.psi_h),
            Polarization::V => (self.t_v, self.r_v(), self.phi_v, self.psi_v),
        };
        let st = libm::sqrt(t);
        let sr = libm::sqrt(r);
        Operator2::from_rows(
            C64::new(st, 0.0) * phase(phi),
            C64::new(sr, 0.0) * phase(psi),
            C64::new(-sr, 0.0) * phase(-psi),
            C64::new(st, 0.0) * phase(-phi),
        )
    }

    /// Amplitude factors (transmitted, reflected) applied to one
    /// polarization component of a photon entering on port `a`; port `b`
    /// carries vacuum.
    fn branch_factors(&self, pol: Polarization) -> (C64, C64) {
        let u = self.unitary(pol);
        (u.entries[0][0], u.entries[1][0])
    }
}

fn phase(angle: f64) -> C64 {
    C64::new(libm::cos(angle), libm::sin(angle))
}

/// Path-basis unitary of a PPBS for one polarization.
pub fn ppbs_unitary(element: &PpbsElement, pol: Polarization) -> Operator2 {
    element.unitary(pol)
}

/// Transmission/reflection coefficients `(T_H, R_H, T_V, R_V)` realizing
/// unsharpness `chi`.
pub fn chi_to_coefficients(chi: f64) -> Result<(f64, f64, f64, f64)> {
    if !(0.0..=core::f64::consts::FRAC_PI_4 + 1e-9).contains(&chi) {
        return Err(Error::ChiRange { chi });
    }
    let c2 = libm::cos(chi) * libm::cos(chi);
    let s2 = libm::sin(chi) * libm::sin(chi);
    Ok((c2, s2, s2, c2))
}

/// One tree level: a PPBS flanked by the wave-plate rotations that move the
/// measured basis to the level's Bloch direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeLevel {
    pub ppbs: PpbsElement,
    pub pre_rotation: Operator2,
    pub post_rotation: Operator2,
}

/// N-level binary tree of PPBSs. Levels are stored once each (PPBSs on a
/// level are identical); paths are enumerated on demand.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementTree {
    levels: Vec<TreeLevel>,
    settings: Vec<MeasurementSetting>,
}

impl MeasurementTree {
    /// Tree realizing a measurement sequence: level k carries a PPBS with
    /// `chi_k = pi/4 - eta_k`, zero phases, and pre/post rotations
    /// `U(n_k)^dag` / `U(n_k)`.
    pub fn from_settings(settings: &[MeasurementSetting]) -> Result<Self> {
        if settings.len() > N_MAX {
            return Err(Error::TooManyLevels {
                levels: settings.len(),
            });
        }
        let levels = settings
            .iter()
            .map(|s| {
                let rotation = bloch_rotation(s.direction());
                Ok(TreeLevel {
                    ppbs: PpbsElement::from_chi(s.chi())?,
                    pre_rotation: rotation.adjoint(),
                    post_rotation: rotation,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            levels,
            settings: settings.to_vec(),
        })
    }

    pub fn levels(&self) -> &[TreeLevel] {
        &self.levels
    }

    pub fn levels_mut(&mut self) -> &mut [TreeLevel] {
        &mut self.levels
    }

    pub fn settings(&self) -> &[MeasurementSetting] {
        &self.settings
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }
}

/// Unnormalized polarization amplitudes travelling on one labeled path.
#[derive(Debug, Clone, PartialEq)]
pub struct PathState {
    pub label: OutcomeString,
    pub amplitudes: PolState,
}

impl PathState {
    pub fn probability(&self) -> f64 {
        self.amplitudes.norm_sqr()
    }
}

/// Propagate a photon through every level and return the `2^N` leaf path
/// states in lexicographic label order.
pub fn propagate(tree: &MeasurementTree, input: &PolState) -> Result<Vec<PathState>> {
    if tree.depth() > N_MAX {
        return Err(Error::TooManyLevels {
            levels: tree.depth(),
        });
    }
    let mut paths = Vec::with_capacity(1 << tree.depth());
    paths.push(PathState {
        label: OutcomeString::new(Vec::new()),
        amplitudes: *input,
    });
    for level in &tree.levels {
        let (th, rh) = level.ppbs.branch_factors(Polarization::H);
        let (tv, rv) = level.ppbs.branch_factors(Polarization::V);
        let mut next = Vec::with_capacity(paths.len() * 2);
        for path in &paths {
            let rotated = level.pre_rotation.apply(&path.amplitudes);
            let transmitted = PolState::raw(th * rotated.alpha, tv * rotated.beta);
            let reflected = PolState::raw(rh * rotated.alpha, rv * rotated.beta);
            next.push(PathState {
                label: path.label.extended(Outcome::Plus),
                amplitudes: level.post_rotation.apply(&transmitted),
            });
            next.push(PathState {
                label: path.label.extended(Outcome::Minus),
                amplitudes: level.post_rotation.apply(&reflected),
            });
        }
        paths = next;
    }
    Ok(paths)
}

/// Detection probabilities at the leaves, as an [`OutcomeDistribution`].
pub fn leaf_probabilities(
    tree: &MeasurementTree,
    input: &PolState,
) -> Result<OutcomeDistribution> {
    let leaves = propagate(tree, input)?;
    let probabilities = leaves.iter().map(|leaf| leaf.probability()).collect();
    Ok(OutcomeDistribution::from_parts(
        probabilities,
        tree.settings.clone(),
    ))
}

/// Direct product formula for all-z trees: with transmission indicators
/// `t_k`,
///
/// ```text
/// p = |alpha|^2 prod cos^{2 t_k}(chi_k) sin^{2(1-t_k)}(chi_k)
///   + |beta|^2  prod cos^{2(1-t_k)}(chi_k) sin^{2 t_k}(chi_k)
/// ```
///
/// Serves as an independent oracle for the tree and operator routes.
pub fn closed_form_z_probability(
    alpha: C64,
    beta: C64,
    chis: &[f64],
    outcomes: &OutcomeString,
) -> Result<f64> {
    if chis.len() != outcomes.len() {
        return Err(Error::LengthMismatch {
            expected: chis.len(),
            got: outcomes.len(),
        });
    }
    let mut h_product = 1.0;
    let mut v_product = 1.0;
    for (&chi, &nu) in chis.iter().zip(outcomes.iter()) {
        let c2 = libm::cos(chi) * libm::cos(chi);
        let s2 = libm::sin(chi) * libm::sin(chi);
        match nu {
            Outcome::Plus => {
                h_product *= c2;
                v_product *= s2;
            }
            Outcome::Minus => {
                h_product *= s2;
                v_product *= c2;
            }
        }
    }
    Ok(alpha.norm_sqr() * h_product + beta.norm_sqr() * v_product)
}
