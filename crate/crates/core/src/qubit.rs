//! Exact 2x2 complex linear algebra for polarization states, Pauli
//! operators, and Bloch-direction rotations.
//!
//! Everything here is a plain immutable value; operations are pure. States
//! live in the `{|H>, |V>}` basis and are compared only up to global phase
//! (probabilities never see the phase).

use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::{INPUT_TOL, NORM_TOL};

pub type C64 = Complex64;

const ZERO_NORM_SQ: f64 = 1e-30;

/// Polarization state `alpha |H> + beta |V>`.
///
/// Constructors that hand out a "state" normalize; intermediate unnormalized
/// amplitude pairs (branch amplitudes inside a measurement sequence) use the
/// same struct via [`PolState::raw`] and carry their norm explicitly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolState {
    pub alpha: C64,
    pub beta: C64,
}

impl PolState {
    /// Normalized state from raw amplitudes; preserves the global phase.
    pub fn new(alpha: C64, beta: C64) -> Result<Self> {
        let norm_sq = alpha.norm_sqr() + beta.norm_sqr();
        if norm_sq < ZERO_NORM_SQ {
            return Err(Error::ZeroVector);
        }
        let inv = 1.0 / libm::sqrt(norm_sq);
        Ok(Self {
            alpha: alpha * inv,
            beta: beta * inv,
        })
    }

    /// Unnormalized amplitude pair; no invariant attached.
    pub fn raw(alpha: C64, beta: C64) -> Self {
        Self { alpha, beta }
    }

    pub fn from_reals(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(C64::new(alpha, 0.0), C64::new(beta, 0.0))
    }

    /// Horizontal polarization `|H>`.
    pub fn horizontal() -> Self {
        Self::raw(C64::new(1.0, 0.0), C64::new(0.0, 0.0))
    }

    /// Vertical polarization `|V>`.
    pub fn vertical() -> Self {
        Self::raw(C64::new(0.0, 0.0), C64::new(1.0, 0.0))
    }

    /// Diagonal polarization `|D> = (|H> + |V>)/sqrt(2)`.
    pub fn diagonal() -> Self {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        Self::raw(C64::new(h, 0.0), C64::new(h, 0.0))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.alpha.norm_sqr() + self.beta.norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.norm_sqr())
    }

    pub fn is_normalized(&self) -> bool {
        libm::fabs(self.norm_sqr() - 1.0) <= NORM_TOL
    }

    /// Inner product `<self|other>`.
    pub fn inner(&self, other: &Self) -> C64 {
        self.alpha.conj() * other.alpha + self.beta.conj() * other.beta
    }

    pub fn normalized(&self) -> Result<Self> {
        Self::new(self.alpha, self.beta)
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self::raw(self.alpha * factor, self.beta * factor)
    }

    /// Rank-one projector `|self><self|`.
    pub fn projector(&self) -> Operator2 {
        Operator2 {
            entries: [
                [
                    self.alpha * self.alpha.conj(),
                    self.alpha * self.beta.conj(),
                ],
                [self.beta * self.alpha.conj(), self.beta * self.beta.conj()],
            ],
        }
    }

    /// The unique orthogonal state, with phase fixed by making its first
    /// nonzero component real positive.
    pub fn orthogonal(&self) -> Self {
        let raw = Self::raw(-self.beta.conj(), self.alpha.conj());
        let lead = if raw.alpha.norm_sqr() > ZERO_NORM_SQ {
            raw.alpha
        } else {
            raw.beta
        };
        let phase = lead.conj() / C64::new(lead.norm(), 0.0);
        raw.scale(phase)
    }

    /// Overlap magnitude, used for global-phase-insensitive comparison:
    /// two unit states are equal up to phase iff `|<a|b>| = 1`.
    pub fn overlap(&self, other: &Self) -> f64 {
        self.inner(other).norm()
    }

    /// Bloch vector of the (normalized) state.
    pub fn bloch(&self) -> BlochVector {
        let cross = self.alpha.conj() * self.beta;
        BlochVector {
            x: 2.0 * cross.re,
            y: 2.0 * cross.im,
            z: self.alpha.norm_sqr() - self.beta.norm_sqr(),
        }
    }
}

/// Unit direction on the Bloch sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    /// Strict constructor: rejects directions whose norm deviates from one
    /// beyond the input tolerance.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = libm::sqrt(x * x + y * y + z * z);
        if libm::fabs(norm - 1.0) > INPUT_TOL {
            return Err(Error::NonUnitBloch { norm });
        }
        Ok(Self { x, y, z }.renormalized())
    }

    /// Renormalizing constructor for user-supplied decimals.
    pub fn from_components(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm_sq = x * x + y * y + z * z;
        if norm_sq < ZERO_NORM_SQ {
            return Err(Error::ZeroVector);
        }
        Ok(Self { x, y, z }.renormalized())
    }

    fn renormalized(self) -> Self {
        let inv = 1.0 / libm::sqrt(self.x * self.x + self.y * self.y + self.z * self.z);
        Self {
            x: self.x * inv,
            y: self.y * inv,
            z: self.z * inv,
        }
    }

    pub fn x_axis() -> Self {
        Self { x: 1.0, y: 0.0, z: 0.0 }
    }

    pub fn y_axis() -> Self {
        Self { x: 0.0, y: 1.0, z: 0.0 }
    }

    pub fn z_axis() -> Self {
        Self { x: 0.0, y: 0.0, z: 1.0 }
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.dot(self))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

/// 2x2 complex matrix in the `{|H>, |V>}` basis (row-major).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Operator2 {
    pub entries: [[C64; 2]; 2],
}

impl Operator2 {
    pub fn new(entries: [[C64; 2]; 2]) -> Self {
        Self { entries }
    }

    pub fn from_rows(a: C64, b: C64, c: C64, d: C64) -> Self {
        Self {
            entries: [[a, b], [c, d]],
        }
    }

    pub fn identity() -> Self {
        Self::diag(C64::new(1.0, 0.0), C64::new(1.0, 0.0))
    }

    pub fn zero() -> Self {
        Self::diag(C64::new(0.0, 0.0), C64::new(0.0, 0.0))
    }

    pub fn diag(a: C64, d: C64) -> Self {
        let z = C64::new(0.0, 0.0);
        Self {
            entries: [[a, z], [z, d]],
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let m = &self.entries;
        Self {
            entries: [
                [m[0][0].conj(), m[1][0].conj()],
                [m[0][1].conj(), m[1][1].conj()],
            ],
        }
    }

    pub fn scale(&self, factor: f64) -> Self {
        *self * C64::new(factor, 0.0)
    }

    pub fn trace(&self) -> C64 {
        self.entries[0][0] + self.entries[1][1]
    }

    /// Apply to a state; the result is generally unnormalized.
    pub fn apply(&self, state: &PolState) -> PolState {
        let m = &self.entries;
        PolState::raw(
            m[0][0] * state.alpha + m[0][1] * state.beta,
            m[1][0] * state.alpha + m[1][1] * state.beta,
        )
    }

    /// Largest entrywise absolute difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut max = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                let d = (self.entries[i][j] - other.entries[i][j]).norm();
                if d > max {
                    max = d;
                }
            }
        }
        max
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        (self.adjoint() * *self).max_abs_diff(&Self::identity()) <= tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        *self * *other + *other * *self
    }
}

impl Add for Operator2 {
    type Output = Operator2;

    fn add(self, rhs: Operator2) -> Operator2 {
        let mut entries = self.entries;
        for i in 0..2 {
            for j in 0..2 {
                entries[i][j] += rhs.entries[i][j];
            }
        }
        Operator2 { entries }
    }
}

impl Sub for Operator2 {
    type Output = Operator2;

    fn sub(self, rhs: Operator2) -> Operator2 {
        let mut entries = self.entries;
        for i in 0..2 {
            for j in 0..2 {
                entries[i][j] -= rhs.entries[i][j];
            }
        }
        Operator2 { entries }
    }
}

impl Mul for Operator2 {
    type Output = Operator2;

    fn mul(self, rhs: Operator2) -> Operator2 {
        let a = &self.entries;
        let b = &rhs.entries;
        let mut entries = [[C64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                entries[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Operator2 { entries }
    }
}

impl Mul<C64> for Operator2 {
    type Output = Operator2;

    fn mul(self, rhs: C64) -> Operator2 {
        let mut entries = self.entries;
        for i in 0..2 {
            for j in 0..2 {
                entries[i][j] *= rhs;
            }
        }
        Operator2 { entries }
    }
}

impl Neg for Operator2 {
    type Output = Operator2;

    fn neg(self) -> Operator2 {
        self * C64::new(-1.0, 0.0)
    }
}

/// Standard Pauli matrix in the `{|H>, |V>}` basis.
pub fn pauli(axis: PauliAxis) -> Operator2 {
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    match axis {
        PauliAxis::X => Operator2::from_rows(zero, one, one, zero),
        PauliAxis::Y => Operator2::from_rows(zero, -i, i, zero),
        PauliAxis::Z => Operator2::diag(one, -one),
    }
}

/// Observable `sigma_n = n_x sigma_x + n_y sigma_y + n_z sigma_z`.
pub fn bloch_observable(n: &BlochVector) -> Operator2 {
    pauli(PauliAxis::X).scale(n.x) + pauli(PauliAxis::Y).scale(n.y) + pauli(PauliAxis::Z).scale(n.z)
}

/// Unitary `U(n)` with `U sigma_z U^dag = sigma_n`; `cos(theta) = n_z`.
///
/// At the poles the rotation axis is undefined; the convention is identity
/// for `n = +z` and `-i sigma_y` (the limit along `n_y = 0`, `n_x -> 0+`)
/// for `n = -z`.
pub fn bloch_rotation(n: &BlochVector) -> Operator2 {
    if n.z > 1.0 - NORM_TOL {
        return Operator2::identity();
    }
    if n.z < -1.0 + NORM_TOL {
        return pauli(PauliAxis::Y) * C64::new(0.0, -1.0);
    }
    // theta in (0, pi): both half-angle functions are positive.
    let cos_half = libm::sqrt((1.0 + n.z) / 2.0);
    let sin_half = libm::sqrt((1.0 - n.z) / 2.0);
    let sin_theta = libm::sqrt(1.0 - n.z * n.z);
    let axis = (pauli(PauliAxis::Y).scale(n.x) - pauli(PauliAxis::X).scale(n.y))
        .scale(1.0 / sin_theta);
    Operator2::identity().scale(cos_half) + axis * C64::new(0.0, -sin_half)
}

/// Expectation value `<psi|op|psi>` of a Hermitian operator; the (tiny)
/// imaginary residue is discarded.
pub fn expectation(state: &PolState, op: &Operator2) -> Result<f64> {
    let deviation = op.max_abs_diff(&op.adjoint());
    if deviation > INPUT_TOL {
        return Err(Error::NonHermitian { deviation });
    }
    Ok(state.inner(&op.apply(state)).re)
}
