//! Reduced 2x2 Green's-function blocks of the photon-only and atom-only
//! actions, and the correlation spectra built from them.
//!
//! Each block acts on the Nambu pair `(x(omega), x*(-omega))` of one mode after
//! the other mode has been integrated out. The Keldysh block is assembled as
//! `G^K = -G^R D^K G^A`, and the anticommutator spectrum is
//! `C(omega) = i [G^K]_11`.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io;
use crate::params::{ModelParams, OMEGA_B};
use crate::reservoir;

/// Determinant magnitude below which a retarded block counts as singular.
pub const SINGULAR_DET: f64 = 1e-300;

/// Largest tolerated imaginary part of a spectrum value, relative to `max(1, |C|)`.
pub const IMAG_TOLERANCE: f64 = 1e-10;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Cavity mode `a`.
    Photon,
    /// Collective atomic mode `b`, coupled to the reservoir.
    Atom,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Photon => "photon",
            Mode::Atom => "atom",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "photon" | "a" => Ok(Mode::Photon),
            "atom" | "b" => Ok(Mode::Atom),
            other => Err(Error::InvalidParams(format!("unknown mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GreenKind {
    Retarded,
    Advanced,
    Keldysh,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenBlock2x2 {
    pub entries: [[Complex64; 2]; 2],
    pub kind: GreenKind,
    pub omega: f64,
}

impl GreenBlock2x2 {
    pub fn new(entries: [[Complex64; 2]; 2], kind: GreenKind, omega: f64) -> Self {
        GreenBlock2x2 {
            entries,
            kind,
            omega,
        }
    }

    pub fn det(&self) -> Complex64 {
        let e = &self.entries;
        e[0][0] * e[1][1] - e[0][1] * e[1][0]
    }

    /// Cofactor inverse; fails with [`Error::Singular`] when `|det| < 1e-300`.
    pub fn inverse(&self) -> Result<Self> {
        self.inverse_with_det(self.det())
    }

    /// Cofactor inverse using a separately evaluated determinant.
    pub fn inverse_with_det(&self, det: Complex64) -> Result<Self> {
        if det.norm() < SINGULAR_DET || !det.is_finite() {
            return Err(Error::Singular {
                omega: self.omega,
                det: det.norm(),
            });
        }
        let e = &self.entries;
        let inv = 1.0 / det;
        Ok(GreenBlock2x2 {
            entries: [
                [e[1][1] * inv, -e[0][1] * inv],
                [-e[1][0] * inv, e[0][0] * inv],
            ],
            ..*self
        })
    }

    pub fn conj_transpose(&self) -> Self {
        let e = &self.entries;
        let kind = match self.kind {
            GreenKind::Retarded => GreenKind::Advanced,
            GreenKind::Advanced => GreenKind::Retarded,
            GreenKind::Keldysh => GreenKind::Keldysh,
        };
        GreenBlock2x2 {
            entries: [[e[0][0].conj(), e[1][0].conj()], [e[0][1].conj(), e[1][1].conj()]],
            kind,
            omega: self.omega,
        }
    }

    /// True if `M + M^dagger` vanishes to within `tol` relative to the largest entry.
    pub fn is_anti_hermitian(&self, tol: f64) -> bool {
        let h = self.conj_transpose();
        let scale = self
            .entries
            .iter()
            .flatten()
            .fold(1.0f64, |m, z| m.max(z.norm()));
        (0..2).all(|i| (0..2).all(|j| (self.entries[i][j] + h.entries[i][j]).norm() <= tol * scale))
    }
}

impl Mul for GreenBlock2x2 {
    type Output = GreenBlock2x2;

    /// Matrix product; the result keeps the kind of the left operand.
    fn mul(self, rhs: GreenBlock2x2) -> GreenBlock2x2 {
        let (a, b) = (&self.entries, &rhs.entries);
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        GreenBlock2x2 { entries: out, ..self }
    }
}

/// Inverse bare retarded propagator of a single mode.
pub fn bare_inverse_propagator(mode: Mode, omega: f64, params: &ModelParams) -> Complex64 {
    match mode {
        Mode::Photon => Complex64::new(omega - params.delta_a(), params.kappa()),
        Mode::Atom => omega - OMEGA_B - reservoir::retarded_level_shift(omega, params.bath()),
    }
}

/// `K^A(-omega) = conj(K^R(-omega))`.
fn mirrored_advanced(omega: f64, params: &ModelParams) -> Complex64 {
    reservoir::retarded_level_shift(-omega, params.bath()).conj()
}

/// Retarded self-energy induced by integrating out the partner mode.
pub fn self_energy(mode: Mode, omega: f64, params: &ModelParams) -> Complex64 {
    let y2 = params.y() * params.y();
    if y2 == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    match mode {
        Mode::Photon => {
            let plus = bare_inverse_propagator(Mode::Atom, omega, params);
            let minus = -omega - OMEGA_B - mirrored_advanced(omega, params);
            -0.25 * y2 * (1.0 / plus + 1.0 / minus)
        }
        Mode::Atom => {
            let da = params.delta_a();
            let w = Complex64::new(omega, params.kappa());
            -0.5 * y2 * da / (w * w - da * da)
        }
    }
}

/// Bare Keldysh component of the partner mode, `G^K_b` or `G^K_a`.
fn partner_keldysh(mode: Mode, omega: f64, params: &ModelParams) -> Complex64 {
    match mode {
        Mode::Photon => {
            let d = reservoir::keldysh_noise(omega, params.bath());
            if d.im == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            -d / bare_inverse_propagator(Mode::Atom, omega, params).norm_sqr()
        }
        Mode::Atom => {
            let k = params.kappa();
            let x = omega - params.delta_a();
            Complex64::new(0.0, -2.0 * k / (x * x + k * k))
        }
    }
}

/// Noise transferred from the partner mode: `d(omega)` for the photon block,
/// `g(omega)` for the atom block.
pub fn noise_kernel(mode: Mode, omega: f64, params: &ModelParams) -> Complex64 {
    let y2 = params.y() * params.y();
    if y2 == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    -0.25 * y2 * (partner_keldysh(mode, omega, params) + partner_keldysh(mode, -omega, params))
}

/// `[G^R]^{-1}` of the reduced action.
pub fn inverse_retarded_block(mode: Mode, omega: f64, params: &ModelParams) -> GreenBlock2x2 {
    let sigma = self_energy(mode, omega, params);
    let (d11, d22) = match mode {
        Mode::Photon => {
            let g = bare_inverse_propagator(Mode::Photon, omega, params);
            let minus = Complex64::new(-omega - params.delta_a(), -params.kappa());
            (g, minus)
        }
        Mode::Atom => (
            bare_inverse_propagator(Mode::Atom, omega, params),
            -omega - OMEGA_B - mirrored_advanced(omega, params),
        ),
    };
    GreenBlock2x2::new(
        [[d11 + sigma, sigma], [sigma, d22 + sigma]],
        GreenKind::Retarded,
        omega,
    )
}

/// Determinant of `[G^R]^{-1}`, arranged so that the near-cancellation close to
/// the critical point happens only in the exactly computable static part
/// `(y_c - y)(y_c + y)`.
pub fn retarded_det(mode: Mode, omega: f64, params: &ModelParams) -> Complex64 {
    let (y, y_c) = (params.y(), params.critical_coupling());
    let (da, k) = (params.delta_a(), params.kappa());
    let gap = (y_c - y) * (y_c + y);
    let w = Complex64::new(omega, k);
    // alpha = 1 + (omega - 1 - K^R(omega)), beta = 1 + (-omega - 1 - K^A(-omega))
    let alpha = omega - reservoir::retarded_level_shift(omega, params.bath());
    let beta = -omega - mirrored_advanced(omega, params);
    let shift = Complex64::new(-omega * omega, -2.0 * k * omega);
    match mode {
        Mode::Photon => {
            // delta_a (y_c^2 - y^2) - omega^2 - 2 i kappa omega - 2 delta_a (Sigma - Sigma(0))
            let u = alpha - 1.0;
            let v = beta - 1.0;
            let d_sigma = -0.25 * y * y * (alpha / u + beta / v);
            da * gap + shift - 2.0 * da * d_sigma
        }
        Mode::Atom => {
            let sigma = self_energy(Mode::Atom, omega, params);
            let den = w * w - da * da;
            let d_sigma = -0.5 * y * y * da * shift / (den * (-k * k - da * da));
            gap / (y_c * y_c) + alpha * beta - alpha - beta + sigma * (alpha + beta) - 2.0 * d_sigma
        }
    }
}

pub fn retarded_block(mode: Mode, omega: f64, params: &ModelParams) -> Result<GreenBlock2x2> {
    inverse_retarded_block(mode, omega, params).inverse_with_det(retarded_det(mode, omega, params))
}

pub fn advanced_block(mode: Mode, omega: f64, params: &ModelParams) -> Result<GreenBlock2x2> {
    Ok(retarded_block(mode, omega, params)?.conj_transpose())
}

/// Keldysh kernel `D^K` of the reduced action.
pub fn keldysh_kernel(mode: Mode, omega: f64, params: &ModelParams) -> GreenBlock2x2 {
    let n = noise_kernel(mode, omega, params);
    let (d11, d22) = match mode {
        Mode::Photon => {
            let k = Complex64::new(0.0, 2.0 * params.kappa());
            (k, k)
        }
        Mode::Atom => (
            reservoir::keldysh_noise(omega, params.bath()),
            reservoir::keldysh_noise(-omega, params.bath()),
        ),
    };
    GreenBlock2x2::new([[d11 + n, n], [n, d22 + n]], GreenKind::Keldysh, omega)
}

/// `G^K = -G^R D^K G^A`.
pub fn keldysh_block(mode: Mode, omega: f64, params: &ModelParams) -> Result<GreenBlock2x2> {
    let gr = retarded_block(mode, omega, params)?;
    let dk = keldysh_kernel(mode, omega, params);
    let mut gk = gr * dk * gr.conj_transpose();
    for z in gk.entries.iter_mut().flatten() {
        *z = -*z;
    }
    gk.kind = GreenKind::Keldysh;
    Ok(gk)
}

/// Anticommutator power spectrum `C(omega)` of the chosen mode.
pub fn correlation_spectrum(mode: Mode, omega: f64, params: &ModelParams) -> Result<f64> {
    let gk = keldysh_block(mode, omega, params)?;
    let c = I * gk.entries[0][0];
    if c.im.abs() > IMAG_TOLERANCE * c.re.abs().max(1.0) {
        return Err(Error::NonRealSpectrum {
            omega,
            imag: c.im,
        });
    }
    Ok(c.re)
}

/// A sampled correlation spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub mode: Mode,
    pub samples: Vec<(f64, f64)>,
    pub params: ModelParams,
}

impl Spectrum {
    /// Evaluates `C(omega)` on `grid` (must be strictly increasing) in parallel.
    ///
    /// Values in `[-1e-10, 0)` are rounding noise and are stored as 0.
    pub fn compute(mode: Mode, params: &ModelParams, grid: &[f64]) -> Result<Self> {
        if grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParams(
                "spectrum grid must be strictly increasing".into(),
            ));
        }
        let samples = grid
            .par_iter()
            .map(|&w| {
                let c = correlation_spectrum(mode, w, params)?;
                if c < -IMAG_TOLERANCE {
                    return Err(Error::NonRealSpectrum { omega: w, imag: c });
                }
                Ok((w, c.max(0.0)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Spectrum {
            mode,
            samples,
            params: *params,
        })
    }

    /// Default frequency grid: `n_linear` points across `[-3 delta_a, 3 delta_a]`
    /// merged with a logarithmic grid of 10 points per decade on both sides of
    /// the origin, from `1e-8` up to 1.
    pub fn default_grid(params: &ModelParams, n_linear: usize) -> Vec<f64> {
        let span = 3.0 * params.delta_a();
        let n = n_linear.max(2);
        let mut grid: Vec<f64> = (0..n)
            .map(|i| -span + 2.0 * span * i as f64 / (n - 1) as f64)
            .collect();
        for k in 0..=80 {
            let w = 10f64.powf(-8.0 + k as f64 / 10.0);
            grid.push(w);
            grid.push(-w);
        }
        grid.push(0.0);
        grid.sort_by(f64::total_cmp);
        grid.dedup_by(|a, b| (*a - *b).abs() < 1e-12 * a.abs().max(1e-300));
        grid
    }

    /// Local maxima of the sampled values, as grid frequencies.
    pub fn peaks(&self) -> Vec<f64> {
        self.samples
            .windows(3)
            .filter(|w| w[1].1 > w[0].1 && w[1].1 >= w[2].1)
            .map(|w| w[1].0)
            .collect()
    }

    /// CSV with a parameter comment block and header `omega,value`.
    pub fn to_csv(&self) -> String {
        let mut comments = vec![format!("mode = \"{}\"", self.mode)];
        comments.extend(io::params_lines(&self.params));
        let rows = self.samples.iter().map(|&(w, v)| vec![w, v]);
        io::csv(&comments, &["omega", "value"], rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::BathParams;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn params(s: f64, y: f64) -> ModelParams {
        ModelParams::new(BathParams::zero_temperature(s, 0.1).unwrap(), 2.0, 0.5, y).unwrap()
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1.0)
    }

    #[test]
    fn bare_propagator_examples() {
        let p = params(0.8, 0.0);
        assert_eq!(bare_inverse_propagator(Mode::Photon, 2.0, &p), Complex64::new(0.0, 0.5));
        assert_eq!(bare_inverse_propagator(Mode::Atom, 0.0, &p), Complex64::new(-1.0, 0.0));
        let g = bare_inverse_propagator(Mode::Atom, 1.0, &p);
        let cot = (0.8 * PI).cos() / (0.8 * PI).sin();
        assert!(close(g, Complex64::new(-0.1 * PI * cot, 0.1 * PI), 1e-14));
        assert!(close(g, Complex64::new(0.432_403_1, 0.314_159_3), 1e-6));
    }

    #[test]
    fn self_energy_examples() {
        let p = params(0.8, 0.0);
        assert_eq!(self_energy(Mode::Photon, 0.3, &p).norm(), 0.0);
        assert_eq!(self_energy(Mode::Atom, 0.3, &p).norm(), 0.0);
        let p = params(0.8, 1.0);
        // -(1/2) * 2 / ((0.5i)^2 - 4) = 1 / 4.25
        let atom = self_energy(Mode::Atom, 0.0, &p);
        assert!(close(atom, Complex64::new(1.0 / 4.25, 0.0), 1e-15));
        let photon = self_energy(Mode::Photon, 0.0, &p);
        assert!(close(photon, Complex64::new(0.5, 0.0), 1e-15));
    }

    #[test]
    fn noise_kernel_examples() {
        let p = params(0.8, 0.0);
        assert_eq!(noise_kernel(Mode::Atom, 0.4, &p).norm(), 0.0);
        assert_eq!(noise_kernel(Mode::Photon, 0.4, &p).norm(), 0.0);
        let p = params(0.8, 1.0);
        // i kappa y^2 / (delta_a^2 + kappa^2)
        let g = noise_kernel(Mode::Atom, 0.0, &p);
        assert!(close(g, Complex64::new(0.0, 0.5 / 4.25), 1e-15));
        assert!((g.im - 0.117_647).abs() < 1e-6);
        // At T = 0 only the positive-frequency term survives.
        for w in [0.7, -0.7] {
            let d = noise_kernel(Mode::Photon, w, &p);
            let wp: f64 = f64::abs(w);
            let rho = 0.1 * wp.powf(0.8);
            let den = bare_inverse_propagator(Mode::Atom, wp, &p).norm_sqr();
            let single = Complex64::new(0.0, 0.25 * 2.0 * PI * rho / den);
            assert!(close(d, single, 1e-14));
        }
    }

    #[test]
    fn uncoupled_photon_is_lorentzian() {
        let p = params(0.8, 0.0);
        assert!((correlation_spectrum(Mode::Photon, 2.0, &p).unwrap() - 4.0).abs() < 1e-14);
        for w in [-5.0, -1.0, 0.0, 0.3, 2.5, 7.0] {
            let c = correlation_spectrum(Mode::Photon, w, &p).unwrap();
            let l = 1.0 / ((w - 2.0) * (w - 2.0) + 0.25);
            assert!((c - l).abs() < 1e-14);
        }
    }

    #[test]
    fn uncoupled_atom_matches_scalar_form() {
        let p = params(0.8, 0.0);
        for i in 1..1000 {
            let w = -4.0 + 8.0 * i as f64 / 1000.0;
            let c = correlation_spectrum(Mode::Atom, w, &p).unwrap();
            let rho = if w > 0.0 { 0.1 * w.powf(0.8) } else { 0.0 };
            let scalar = 2.0 * PI * rho / bare_inverse_propagator(Mode::Atom, w, &p).norm_sqr();
            assert!((c - scalar).abs() < 1e-10 * scalar.max(1.0));
        }
        let small = correlation_spectrum(Mode::Atom, 1e-10, &p).unwrap();
        assert!(small < 1e-7);
    }

    /// The photon spectrum written as a single scalar expression.
    fn photon_scalar(w: f64, p: &ModelParams) -> f64 {
        let (da, k) = (p.delta_a(), p.kappa());
        let sigma = self_energy(Mode::Photon, w, p);
        let d = noise_kernel(Mode::Photon, w, p);
        let a = Complex64::new(w - da, k) + sigma;
        let b = Complex64::new(-w - da, -k) + sigma;
        let det = a * b - sigma * sigma;
        let ik = Complex64::new(0.0, 2.0 * k);
        // -[G^R D^K G^A]_11 with G^R = [[b, -s], [-s, a]] / det
        let r = [b / det, -sigma / det];
        let dk = [[ik + d, d], [d, ik + d]];
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..2 {
            for j in 0..2 {
                acc += r[i] * dk[i][j] * r[j].conj();
            }
        }
        (I * -acc).re
    }

    #[test]
    fn photon_matrix_product_matches_scalar_form() {
        for s in [0.6, 0.8, 1.2] {
            let p = params(s, 0.5 * p_crit());
            for i in 0..1000 {
                let w = -6.0 + 12.0 * (i as f64 + 0.5) / 1000.0;
                let c = correlation_spectrum(Mode::Photon, w, &p).unwrap();
                let sc = photon_scalar(w, &p);
                assert!((c - sc).abs() < 1e-10 * sc.max(1.0));
            }
        }
    }

    fn p_crit() -> f64 {
        (4.25f64 / 2.0).sqrt()
    }

    #[test]
    fn accurate_determinant_matches_cofactor_form() {
        for s in [0.4, 0.8, 1.3] {
            for r in [0.0, 0.3, 0.9] {
                let p = params(s, r * p_crit());
                for i in 0..200 {
                    let w = -5.0 + 10.0 * (i as f64 + 0.37) / 200.0;
                    for mode in [Mode::Photon, Mode::Atom] {
                        let direct = inverse_retarded_block(mode, w, &p).det();
                        let stable = retarded_det(mode, w, &p);
                        assert!((direct - stable).norm() < 1e-12 * direct.norm().max(1.0), "{mode} {w}");
                    }
                }
            }
        }
    }

    #[test]
    fn determinant_is_resolved_near_criticality() {
        let y_c = p_crit();
        for eps in [1e-6, 1e-9, 1e-12] {
            let p = params(0.8, y_c * (1.0 - eps));
            let gap = p.delta_a() * (y_c - p.y()) * (y_c + p.y());
            for mode in [Mode::Photon, Mode::Atom] {
                let d = retarded_det(mode, 0.0, &p);
                let expect = if mode == Mode::Photon { gap } else { gap / (p.delta_a() * y_c * y_c) };
                assert!((d - expect).norm() <= 1e-14 * expect, "{mode} {eps}: {d} vs {expect}");
            }
        }
    }

    #[test]
    fn singular_at_criticality() {
        let p = params(0.8, p_crit());
        let det = inverse_retarded_block(Mode::Photon, 0.0, &p).det();
        assert!(det.norm() < 1e-14);
        let gk = GreenBlock2x2::new([[Complex64::new(0.0, 0.0); 2]; 2], GreenKind::Retarded, 0.0);
        assert!(matches!(gk.inverse(), Err(Error::Singular { .. })));
    }

    #[test]
    fn default_grid_is_increasing_and_reaches_small_steps() {
        let grid = Spectrum::default_grid(&params(0.8, 0.0), 601);
        assert!(grid.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(grid[0], -6.0);
        assert_eq!(*grid.last().unwrap(), 6.0);
        let min_step = grid.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        assert!(min_step <= 1e-8 + 1e-20);
        assert!(grid.contains(&0.0));
    }

    #[test]
    fn spectrum_rejects_unsorted_grid() {
        let r = Spectrum::compute(Mode::Photon, &params(0.8, 0.0), &[0.0, 1.0, 0.5]);
        assert!(matches!(r, Err(Error::InvalidParams(_))));
    }

    fn exponent() -> impl Strategy<Value = f64> {
        (0.05f64..1.95).prop_filter("integer", |s| (s - s.round()).abs() >= 1e-3)
    }

    proptest! {
        #[test]
        fn advanced_is_conjugate_transpose(s in exponent(), r in 0.0f64..0.98, w in -8.0f64..8.0, atom in any::<bool>()) {
            let p = params(s, r * p_crit());
            let mode = if atom { Mode::Atom } else { Mode::Photon };
            let gr = retarded_block(mode, w, &p).unwrap();
            let ga = advanced_block(mode, w, &p).unwrap();
            prop_assert_eq!(ga.kind, GreenKind::Advanced);
            for i in 0..2 {
                for j in 0..2 {
                    prop_assert_eq!(ga.entries[i][j], gr.entries[j][i].conj());
                }
            }
            let gk = keldysh_block(mode, w, &p).unwrap();
            prop_assert!(gk.is_anti_hermitian(1e-12));
            prop_assert!(keldysh_kernel(mode, w, &p).is_anti_hermitian(1e-12));
        }

        #[test]
        fn spectrum_is_real_and_non_negative(s in exponent(), r in 0.0f64..0.999, w in -8.0f64..8.0, atom in any::<bool>()) {
            let p = params(s, r * p_crit());
            let mode = if atom { Mode::Atom } else { Mode::Photon };
            let c = correlation_spectrum(mode, w, &p).unwrap();
            prop_assert!(c >= -1e-10);
        }

        #[test]
        fn self_energy_symmetry(s in exponent(), r in 0.0f64..0.999, w in -8.0f64..8.0, atom in any::<bool>()) {
            let p = params(s, r * p_crit());
            let mode = if atom { Mode::Atom } else { Mode::Photon };
            let a = self_energy(mode, w, &p);
            let b = self_energy(mode, -w, &p).conj();
            prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1.0));
        }

        #[test]
        fn atom_zero_frequency_is_periodic_in_s(s in 0.05f64..0.95, r in 0.0f64..0.99) {
            prop_assume!((s - s.round()).abs() >= 1e-3);
            let a = correlation_spectrum(Mode::Atom, 0.0, &params(s, r * p_crit())).unwrap();
            let b = correlation_spectrum(Mode::Atom, 0.0, &params(s + 1.0, r * p_crit())).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }
    }
}
