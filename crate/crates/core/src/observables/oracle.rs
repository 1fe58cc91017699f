//! Brute-force steady state of the bath discretized into explicit modes.
//!
//! The reservoir is replaced by `n_modes` oscillators on the midpoint grid
//! `omega_k = (k + 1/2) d_omega` of `(0, omega_max]` with couplings
//! `g_k^2 = rho(omega_k) d_omega`, using the finite-cutoff density. Two
//! counterterms match this finite system to the renormalized theory:
//!
//! - the bare b frequency absorbs the static shift, `omega_0 = 1 + sum g_k^2 / omega_k`;
//! - a field-strength factor `Z = 1 - gamma omega_m^(s-1) (pi/4) / sin((s-1) pi/4)`
//!   absorbs the linear term of the cutoff remainder. It is realized by the
//!   canonical rescaling `b' = sqrt(Z) b`: frequency `omega_0 / Z`, couplings
//!   `y / sqrt(Z)` and `g_k / sqrt(Z)`.
//!
//! In real quadratures the Hamiltonian is
//! `delta_a/2 (q_a^2 + p_a^2) + w_b/2 (q_b^2 + p_b^2) + y' q_a q_b
//!  + sum_k [omega_k/2 (q_k^2 + p_k^2) + g'_k (q_b q_k + p_b p_k)]`
//! and the cavity loses energy at rate `kappa` on `q_a`, `p_a`. Starting from
//! the vacuum, the covariance obeys `dV/dt = A V + V A^T + D` with
//! `D = kappa` on the two cavity entries. Only the four rows belonging to
//! `(q_a, p_a, q_b, p_b)` are needed; each row `r` of the propagator obeys
//! `dr/dt = r A`, so the diagonal covariance is
//! `V_ii(t) = |r_i(t)|^2 / 2 + kappa int_0^t (r_{i,qa}^2 + r_{i,pa}^2) dt'`.
//! The equations are integrated with RK4 up to a fixed fraction of the bath
//! recurrence time `2 pi / d_omega`, where the occupations have settled while
//! no reflected excitation has returned yet.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::params::{ModelParams, OMEGA_B};
use crate::reservoir;

use super::OccupationResult;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleOptions {
    /// Final time as a fraction of the recurrence time `2 pi / d_omega`.
    pub recurrence_fraction: f64,
    /// RK4 step times the largest frequency of the system.
    pub step_phase: f64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            recurrence_fraction: 0.45,
            step_phase: 0.2,
        }
    }
}

struct Chain {
    delta_a: f64,
    kappa: f64,
    y: f64,
    omega_b: f64,
    omega_k: Vec<f64>,
    g_k: Vec<f64>,
}

// Row layout: [q_a, p_a, q_b, p_b, q_1..q_N, p_1..p_N, accumulated damping term].
impl Chain {
    fn len(&self) -> usize {
        4 + 2 * self.omega_k.len() + 1
    }

    fn deriv(&self, r: &[f64], out: &mut [f64]) {
        let n = self.omega_k.len();
        let (qa, pa, qb, pb) = (r[0], r[1], r[2], r[3]);
        let (qk, pk) = r[4..4 + 2 * n].split_at(n);
        let (dqk, rest) = out[4..].split_at_mut(n);
        let (dpk, dacc) = rest.split_at_mut(n);
        let mut sum_q = 0.0;
        let mut sum_p = 0.0;
        for k in 0..n {
            let (w, g) = (self.omega_k[k], self.g_k[k]);
            sum_q += g * qk[k];
            sum_p += g * pk[k];
            dqk[k] = -g * pb - w * pk[k];
            dpk[k] = g * qb + w * qk[k];
        }
        dacc[0] = self.kappa * (qa * qa + pa * pa);
        out[0] = -self.kappa * qa - self.delta_a * pa - self.y * pb;
        out[1] = self.delta_a * qa - self.kappa * pa;
        out[2] = -self.y * pa - self.omega_b * pb - sum_p;
        out[3] = self.omega_b * qb + sum_q;
    }

    /// Diagonal covariance entry of the quadrature with index `row`.
    fn variance(&self, row: usize, dt: f64, steps: usize) -> f64 {
        let m = self.len();
        let mut r = vec![0.0; m];
        r[row] = 1.0;
        let mut k1 = vec![0.0; m];
        let mut k2 = vec![0.0; m];
        let mut k3 = vec![0.0; m];
        let mut k4 = vec![0.0; m];
        let mut tmp = vec![0.0; m];
        for _ in 0..steps {
            self.deriv(&r, &mut k1);
            for i in 0..m {
                tmp[i] = r[i] + 0.5 * dt * k1[i];
            }
            self.deriv(&tmp, &mut k2);
            for i in 0..m {
                tmp[i] = r[i] + 0.5 * dt * k2[i];
            }
            self.deriv(&tmp, &mut k3);
            for i in 0..m {
                tmp[i] = r[i] + dt * k3[i];
            }
            self.deriv(&tmp, &mut k4);
            for i in 0..m {
                r[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
        }
        let norm: f64 = r[..m - 1].iter().map(|x| x * x).sum();
        0.5 * norm + r[m - 1]
    }
}

/// Field-strength counterterm `Z` of the discretized bath.
pub fn field_strength(params: &ModelParams) -> f64 {
    let b = params.bath();
    let s = b.s();
    1.0 - b.gamma() * b.omega_m().powf(s - 1.0) * (PI / 4.0) / ((s - 1.0) * PI / 4.0).sin()
}

/// Occupations of both modes from the explicit `n_modes`-oscillator bath on
/// `(0, omega_max]`, at zero temperature.
pub fn discrete_bath_oracle(
    params: &ModelParams,
    n_modes: usize,
    omega_max: f64,
    opts: &OracleOptions,
) -> Result<OccupationResult> {
    let bath = params.bath();
    if bath.temperature() != 0.0 {
        return Err(Error::InvalidParams("the oracle covers T = 0 only".into()));
    }
    if n_modes < 500 {
        return Err(Error::InvalidParams(format!("need n_modes >= 500, got {n_modes}")));
    }
    if !(omega_max >= 2.0 * bath.omega_m()) {
        return Err(Error::InvalidParams(format!(
            "need omega_max >= 2 omega_m = {}, got {omega_max}",
            2.0 * bath.omega_m()
        )));
    }
    let y_c = params.critical_coupling();
    if params.y() >= y_c {
        return Err(Error::LyapunovSingular { y: params.y(), y_c });
    }
    let z = field_strength(params);
    if !(z > 0.0) {
        return Err(Error::InvalidParams(format!(
            "field-strength counterterm Z = {z} is not positive; lower gamma or omega_m"
        )));
    }

    let dw = omega_max / n_modes as f64;
    let omega_k: Vec<f64> = (0..n_modes).map(|k| (k as f64 + 0.5) * dw).collect();
    let g2: Vec<f64> = omega_k
        .iter()
        .map(|&w| reservoir::coupling_density(w, bath) * dw)
        .collect();
    let static_shift: f64 = g2.iter().zip(&omega_k).map(|(g, w)| g / w).sum();
    let omega_0 = OMEGA_B + static_shift;
    let chain = Chain {
        delta_a: params.delta_a(),
        kappa: params.kappa(),
        y: params.y() / z.sqrt(),
        omega_b: omega_0 / z,
        g_k: g2.iter().map(|g| (g / z).sqrt()).collect(),
        omega_k,
    };

    let w_top = omega_max.max(chain.omega_b).max(params.delta_a() + params.kappa());
    let t_final = opts.recurrence_fraction * 2.0 * PI / dw;
    let steps = (t_final * w_top / opts.step_phase).ceil() as usize;
    let dt = t_final / steps as f64;

    let v: Vec<f64> = (0..4)
        .into_par_iter()
        .map(|row| chain.variance(row, dt, steps))
        .collect();
    let c_a0 = v[0] + v[1];
    let c_b0 = (v[2] + v[3]) / z;
    Ok(OccupationResult {
        n_a: 0.5 * (c_a0 - 1.0),
        n_b: 0.5 * (c_b0 - 1.0),
        c_a0,
        c_b0,
        quadrature_error: 0.0,
    })
}
