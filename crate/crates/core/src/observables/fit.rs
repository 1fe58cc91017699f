use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::greens::Mode;
use crate::params::ModelParams;

use super::excitation_number;

/// Fits with a larger log-space residual are not reported as converged.
pub const MAX_RESIDUAL: f64 = 0.05;

/// Largest accepted exponent change when the window is halved.
pub const MAX_HALVING_SHIFT: f64 = 0.03;

/// Window in reduced coupling `eps = 1 - y / y_c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitWindow {
    pub eps_min: f64,
    pub eps_max: f64,
}

impl FitWindow {
    pub fn new(eps_min: f64, eps_max: f64) -> Result<Self> {
        if !(eps_min > 0.0 && eps_min < eps_max && eps_max <= 0.1) {
            return Err(Error::InvalidParams(format!(
                "fit window must satisfy 0 < eps_min < eps_max <= 0.1, got ({eps_min}, {eps_max})"
            )));
        }
        Ok(FitWindow { eps_min, eps_max })
    }

    /// `[1e-4, 1e-2]`.
    pub fn default_window() -> Self {
        FitWindow {
            eps_min: 1e-4,
            eps_max: 1e-2,
        }
    }

    /// The window closest to the critical point, `|y - y_c| < 1e-4`, reaching
    /// down to `eps = 1e-12`.
    pub fn near_critical(y_c: f64) -> Self {
        FitWindow {
            eps_min: 1e-12,
            eps_max: 1e-4 / y_c,
        }
    }

    /// Lower half of the window: `(eps_min, eps_min + (eps_max - eps_min) / 2)`.
    pub fn halved(&self) -> Self {
        FitWindow {
            eps_min: self.eps_min,
            eps_max: self.eps_min + 0.5 * (self.eps_max - self.eps_min),
        }
    }

    /// `n` geometrically spaced points from `eps_min` to `eps_max`.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        let r = (self.eps_max / self.eps_min).ln();
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    self.eps_max
                } else {
                    self.eps_min * (r * i as f64 / (n - 1) as f64).exp()
                }
            })
            .collect()
    }
}

/// Power law `n_a = amplitude * eps^(-exponent)` fitted in log-log space.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentFit {
    pub exponent: f64,
    pub amplitude: f64,
    pub window: FitWindow,
    /// Largest absolute deviation of `ln n_a` from the fitted line.
    pub residual: f64,
    pub n_points: usize,
    /// Exponent refitted on the halved window.
    pub halved_exponent: f64,
    pub shift: f64,
    pub converged: bool,
    /// `(eps, n_a)` samples of the full window.
    pub samples: Vec<(f64, f64)>,
}

struct Line {
    slope: f64,
    intercept: f64,
    residual: f64,
}

fn least_squares(samples: &[(f64, f64)]) -> Line {
    let pts: Vec<(f64, f64)> = samples.iter().map(|&(e, n)| (e.ln(), n.ln())).collect();
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let (sxx, sxy) = pts
        .iter()
        .fold((0.0, 0.0), |(a, b), &(x, y)| (a + (x - mx) * (x - mx), b + (x - mx) * (y - my)));
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = pts
        .iter()
        .map(|&(x, y)| (y - (intercept + slope * x)).abs())
        .fold(0.0, f64::max);
    Line {
        slope,
        intercept,
        residual,
    }
}

fn sample(params: &ModelParams, window: &FitWindow, n_points: usize) -> Result<Vec<(f64, f64)>> {
    window
        .grid(n_points)
        .into_par_iter()
        .map(|eps| {
            let p = params.at_reduced_coupling(eps)?;
            Ok((eps, excitation_number(Mode::Photon, &p)?.n))
        })
        .collect()
}

/// Extracts the critical exponent of the photon occupation from a geometric
/// grid of `n_points` reduced couplings in `window`.
///
/// Fails with [`Error::NotDiverging`] when the occupation grows by less than a
/// factor 2 across the window.
pub fn fit_critical_exponent(params_base: &ModelParams, window: FitWindow, n_points: usize) -> Result<ExponentFit> {
    let window = FitWindow::new(window.eps_min, window.eps_max)?;
    if n_points < 8 {
        return Err(Error::InvalidParams(format!("need at least 8 fit points, got {n_points}")));
    }
    let samples = sample(params_base, &window, n_points)?;
    let ratio = samples[0].1 / samples[n_points - 1].1;
    if !(ratio >= 2.0) {
        return Err(Error::NotDiverging { ratio });
    }
    if samples.iter().any(|&(_, n)| !(n > 0.0)) {
        return Err(Error::InvalidParams("occupation must be positive for a log-log fit".into()));
    }
    let line = least_squares(&samples);
    let halved = sample(params_base, &window.halved(), n_points)?;
    let halved_exponent = least_squares(&halved).slope.abs();
    let exponent = line.slope.abs();
    let shift = (exponent - halved_exponent).abs();
    Ok(ExponentFit {
        exponent,
        amplitude: line.intercept.exp(),
        window,
        residual: line.residual,
        n_points,
        halved_exponent,
        shift,
        converged: line.residual < MAX_RESIDUAL && shift < MAX_HALVING_SHIFT,
        samples,
    })
}
