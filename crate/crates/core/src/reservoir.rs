//! The colored reservoir seen by mode `b`.
//!
//! The coupling density is `rho(w) = gamma * Theta(w) * w^s / (1 + (w / omega_m)^4)`.
//! After the cutoff is renormalized away the level-shift function has the closed
//! form
//!
//! ```text
//! K^{R/A}(w) = (gamma * pi / sin(s pi)) * |w|^s * [Theta(w) e^{-/+ i s pi} + Theta(-w)]
//! ```
//!
//! and its continuation to the second Riemann sheet is
//! `K^R_II(z) = gamma * pi * e^{-i s pi} / sin(s pi) * z^s` on the principal branch.
//! The reference frequency of `z^s` is taken to be `omega_b = 1`.
//!
//! Only [`coupling_density`] depends on the cutoff; the renormalized functions
//! use the cutoff-free density `gamma * w^s`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::params::BathParams;

/// Coupling density with the quartic cutoff.
pub fn coupling_density(omega: f64, bath: &BathParams) -> f64 {
    if omega <= 0.0 {
        return 0.0;
    }
    let x = omega / bath.omega_m();
    bath.gamma() * omega.powf(bath.s()) / (1.0 + x * x * x * x)
}

/// Cutoff-free coupling density `gamma * Theta(w) * w^s`.
pub fn renormalized_density(omega: f64, bath: &BathParams) -> f64 {
    if omega <= 0.0 {
        0.0
    } else {
        bath.gamma() * omega.powf(bath.s())
    }
}

/// `gamma * pi / sin(s pi)`.
pub fn prefactor(bath: &BathParams) -> f64 {
    bath.gamma() * PI / (bath.s() * PI).sin()
}

/// Distribution function `F(w) = coth((w - mu) / 2T)`, identically 1 at `T = 0`.
pub fn occupation_factor(omega: f64, bath: &BathParams) -> f64 {
    let t = bath.temperature();
    if t == 0.0 {
        1.0
    } else {
        1.0 / ((omega - bath.mu()) / (2.0 * t)).tanh()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelShift {
    pub retarded: Complex64,
    pub advanced: Complex64,
}

/// Retarded and advanced level-shift functions on the real axis.
pub fn level_shift(omega: f64, bath: &BathParams) -> LevelShift {
    let retarded = retarded_level_shift(omega, bath);
    LevelShift {
        retarded,
        advanced: retarded.conj(),
    }
}

/// `K^R(w)`; the hot path used inside spectra and quadratures.
#[inline]
pub fn retarded_level_shift(omega: f64, bath: &BathParams) -> Complex64 {
    if omega == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let mag = prefactor(bath) * omega.abs().powf(bath.s());
    if omega > 0.0 {
        let phase = bath.s() * PI;
        Complex64::new(mag * phase.cos(), -mag * phase.sin())
    } else {
        Complex64::new(mag, 0.0)
    }
}

/// `z^s` on the principal branch, argument in `(-pi, pi]`.
///
/// A point on the negative real axis maps to argument `+pi` regardless of the
/// sign of its zero imaginary part.
pub fn principal_pow(z: Complex64, s: f64) -> Complex64 {
    if z.re == 0.0 && z.im == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let mut arg = z.im.atan2(z.re);
    if z.im == 0.0 && z.re < 0.0 {
        arg = PI;
    }
    Complex64::from_polar(z.norm().powf(s), s * arg)
}

/// Retarded level shift continued to the second Riemann sheet.
pub fn level_shift_sheet2(z: Complex64, bath: &BathParams) -> Complex64 {
    let phase = Complex64::from_polar(prefactor(bath), -bath.s() * PI);
    phase * principal_pow(z, bath.s())
}

/// `K^A_II(-z*)` with `K^A_II(w) = conj(K^R_II(w))`: the advanced partner
/// evaluated at the mirrored frequency. On the real axis it reduces to
/// `K^A(-omega)`, and it makes the characteristic function obey
/// `det(-z*) = conj(det(z))`.
pub fn mirrored_advanced_sheet2(z: Complex64, bath: &BathParams) -> Complex64 {
    level_shift_sheet2(-z.conj(), bath).conj()
}

/// Decay `Gamma(z)` and frequency shift `Delta(z)` built from the sheet-II
/// level shifts.
pub fn decay_and_shift(z: Complex64, bath: &BathParams) -> (Complex64, Complex64) {
    let kr = level_shift_sheet2(z, bath);
    let ka = mirrored_advanced_sheet2(z, bath);
    let gamma = (kr - ka) / Complex64::new(0.0, 2.0);
    let delta = (kr + ka) * 0.5;
    (gamma, delta)
}

/// Keldysh component `D(w) = 2 pi i rho(w) F(w)` with the cutoff-free density.
#[inline]
pub fn keldysh_noise(omega: f64, bath: &BathParams) -> Complex64 {
    if omega <= 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let rho = renormalized_density(omega, bath);
    Complex64::new(0.0, 2.0 * PI * rho * occupation_factor(omega, bath))
}
