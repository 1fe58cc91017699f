//! Steady-state excitation numbers, the thermalization check, critical
//! exponent fits and the discretized-bath oracle.

mod fit;
mod oracle;

pub use fit::{fit_critical_exponent, ExponentFit, FitWindow};
pub use oracle::{discrete_bath_oracle, OracleOptions};

use std::f64::consts::PI;

use rayon::join;

use crate::error::{Error, Result};
use crate::greens::{self, Mode};
use crate::params::{BathParams, ModelParams, OMEGA_B};
use crate::quadrature::{self, QuadOptions};
use crate::reservoir;

/// Number of decades of breakpoints placed around `omega = 0`.
const ORIGIN_DECADES: u32 = 20;

/// Equal-time anticommutator `C(t=0)` of one mode and its occupation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeOccupation {
    pub mode: Mode,
    /// `C(t=0) = <{x, x^dag}>`.
    pub c0: f64,
    /// `<x^dag x> = (C(t=0) - 1) / 2`.
    pub n: f64,
    pub quadrature_error: f64,
}

/// Occupations of both modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OccupationResult {
    pub n_a: f64,
    pub n_b: f64,
    pub c_a0: f64,
    pub c_b0: f64,
    pub quadrature_error: f64,
}

/// Breakpoints for integrating a correlation spectrum over the real line.
pub fn spectrum_breakpoints(params: &ModelParams, extra: &[f64]) -> Vec<f64> {
    let da = params.delta_a();
    let mut pts = quadrature::decade_points(ORIGIN_DECADES);
    pts.extend([
        f64::NEG_INFINITY,
        0.0,
        da,
        -da,
        3.0 * da,
        -3.0 * da,
        OMEGA_B,
        -OMEGA_B,
        f64::INFINITY,
    ]);
    for &x in extra {
        if x.is_finite() {
            pts.extend([x, -x]);
        }
    }
    pts
}

/// `C(t=0) = int dw/2pi C(w)` for one mode, with optional extra breakpoints
/// (mirrored about the origin), e.g. at `+-Re z_soft`.
pub fn excitation_number_with(mode: Mode, params: &ModelParams, extra: &[f64]) -> Result<ModeOccupation> {
    let y_c = params.critical_coupling();
    if params.y() >= y_c {
        return Err(Error::InvalidParams(format!(
            "excitation numbers need y < y_c = {y_c}, got y = {}",
            params.y()
        )));
    }
    let pts = spectrum_breakpoints(params, extra);
    let r = quadrature::integrate_with_tails(
        |w| Ok(greens::correlation_spectrum(mode, w, params)? / (2.0 * PI)),
        &pts,
        Some(tail_decay(mode, params.bath())),
        &QuadOptions::default(),
    )?;
    Ok(ModeOccupation {
        mode,
        c0: r.value,
        n: 0.5 * (r.value - 1.0),
        quadrature_error: r.error,
    })
}

/// Exponent `delta` of the `|omega|^(-1-delta)` decay of the spectrum.
///
/// The atomic spectrum falls off as `omega^(s-2)` for `s < 1` and as
/// `omega^(-s)` for `s > 1`, which is slow close to the Ohmic point.
fn tail_decay(mode: Mode, bath: &BathParams) -> f64 {
    match mode {
        Mode::Photon => 1.0,
        Mode::Atom => (1.0 - bath.s()).abs().min(1.0),
    }
}

/// Steady-state occupation of one mode (requires `y < y_c`).
pub fn excitation_number(mode: Mode, params: &ModelParams) -> Result<ModeOccupation> {
    excitation_number_with(mode, params, &[])
}

/// Occupations of both modes, evaluated concurrently.
pub fn occupations(params: &ModelParams) -> Result<OccupationResult> {
    let (a, b) = join(
        || excitation_number(Mode::Photon, params),
        || excitation_number(Mode::Atom, params),
    );
    let (a, b) = (a?, b?);
    Ok(OccupationResult {
        n_a: a.n,
        n_b: b.n,
        c_a0: a.c0,
        c_b0: b.c0,
        quadrature_error: a.quadrature_error.max(b.quadrature_error),
    })
}

/// `C_b(t=0)` of the uncoupled atomic mode in contact with the reservoir:
/// `int_0^inf dw rho(w) F(w) / |w - 1 - K^R(w)|^2`.
pub fn thermal_occupation_b(bath: &BathParams) -> Result<f64> {
    let integrand = |w: f64| {
        if w <= 0.0 {
            return Ok(0.0);
        }
        let den = (w - OMEGA_B - reservoir::retarded_level_shift(w, bath)).norm_sqr();
        Ok(reservoir::renormalized_density(w, bath) * reservoir::occupation_factor(w, bath) / den)
    };
    let mut pts: Vec<f64> = quadrature::decade_points(ORIGIN_DECADES)
        .into_iter()
        .filter(|p| *p > 0.0)
        .collect();
    pts.extend([0.0, 2.0, 5.0, f64::INFINITY]);
    let delta = tail_decay(Mode::Atom, bath);
    Ok(quadrature::integrate_with_tails(integrand, &pts, Some(delta), &QuadOptions::default())?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(s: f64, gamma: f64, y_rel: f64) -> ModelParams {
        let p = ModelParams::new(BathParams::zero_temperature(s, gamma).unwrap(), 2.0, 0.5, 0.0).unwrap();
        p.with_y(y_rel * p.critical_coupling()).unwrap()
    }

    #[test]
    fn uncoupled_photon_is_vacuum() {
        let r = excitation_number(Mode::Photon, &params(0.8, 0.1, 0.0)).unwrap();
        assert!(r.n.abs() < 1e-8, "{}", r.n);
        assert!((r.c0 - 1.0).abs() < 1e-8);
    }

    #[test]
    fn weakly_damped_atom_is_vacuum() {
        let r = excitation_number(Mode::Atom, &params(0.6, 0.03, 0.0)).unwrap();
        assert!(r.n.abs() < 0.02, "{}", r.n);
        let direct = thermal_occupation_b(params(0.6, 0.03, 0.0).bath()).unwrap();
        assert!((direct - r.c0).abs() < 1e-7);
    }

    #[test]
    fn rejects_supercritical_coupling() {
        assert!(excitation_number(Mode::Photon, &params(0.8, 0.1, 1.0)).is_err());
    }

    #[test]
    fn near_critical_photon_golden() {
        let r = excitation_number(Mode::Photon, &params(0.8, 0.1, 0.99)).unwrap();
        let golden = 2.620_267_177_681_290_7;
        assert!((r.n - golden).abs() < 1e-6 * golden, "{}", r.n);
    }

    #[test]
    fn thermal_limits() {
        let b = BathParams::zero_temperature(0.6, 0.03).unwrap();
        assert!((thermal_occupation_b(&b).unwrap() - 1.0).abs() < 0.02);
        let hot = BathParams::new(0.6, 0.03, 10.0, 1.0, -1e-9).unwrap();
        let c = thermal_occupation_b(&hot).unwrap();
        let coth = 1.0 / 0.5f64.tanh();
        assert!((c / coth - 1.0).abs() < 0.05, "{c} vs {coth}");
        let strong = BathParams::new(0.6, 0.5, 10.0, 1.0, -1e-9).unwrap();
        assert!(thermal_occupation_b(&strong).unwrap() > coth);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]
        #[test]
        fn anticommutator_identity(s in 0.3f64..1.7, r in 0.0f64..0.95) {
            prop_assume!((s - 1.0).abs() >= 0.1);
            let p = params(s, 0.1, r);
            let o = occupations(&p).unwrap();
            prop_assert!((o.c_a0 - (2.0 * o.n_a + 1.0)).abs() <= o.quadrature_error.max(1e-12));
            prop_assert!((o.c_b0 - (2.0 * o.n_b + 1.0)).abs() <= o.quadrature_error.max(1e-12));
            prop_assert!(o.n_a >= -1e-8);
            if s < 1.0 {
                prop_assert!(o.n_b >= -1e-8);
            }
        }
    }
}
