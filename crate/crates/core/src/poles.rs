//! Characteristic frequencies on the second Riemann sheet and the soft-mode
//! branch.
//!
//! The characteristic function is
//!
//! ```text
//! det(z) = [(z + i kappa)^2 - delta_a^2] [(z - i Gamma(z))^2 - (1 + Delta(z))^2]
//!          - y^2 delta_a (1 + Delta(z))
//! ```
//!
//! with `K^A_II(w) = conj(K^R_II(w))` entering `Gamma` and `Delta` at `w = -z*`.
//! It is analytic in the open lower half plane and obeys
//! `det(-conj z) = conj(det(z))`, so poles come in pairs `z`, `-conj z` and the
//! function is real on the imaginary axis.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::io;
use crate::params::{ModelParams, OMEGA_B};
use crate::reservoir;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub const MAX_ITERATIONS: usize = 200;

/// Convergence threshold on `|det|`, relative to the magnitude of its terms at the guess.
pub const RESIDUAL_TOLERANCE: f64 = 1e-11;

/// Characteristic function for given decay `gamma_z` and shift `delta_z`.
pub fn det_with_shift(z: Complex64, params: &ModelParams, gamma_z: Complex64, delta_z: Complex64) -> Complex64 {
    let (photon, atom, coupling) = det_terms(z, params, gamma_z, delta_z);
    photon * atom - coupling
}

fn det_terms(
    z: Complex64,
    params: &ModelParams,
    gamma_z: Complex64,
    delta_z: Complex64,
) -> (Complex64, Complex64, Complex64) {
    let da = params.delta_a();
    let zp = z + I * params.kappa();
    let zb = z - I * gamma_z;
    let wb = OMEGA_B + delta_z;
    let y2 = params.y() * params.y();
    (zp * zp - da * da, zb * zb - wb * wb, y2 * da * wb)
}

pub fn characteristic_det(z: Complex64, params: &ModelParams) -> Complex64 {
    let (g, d) = reservoir::decay_and_shift(z, params.bath());
    det_with_shift(z, params, g, d)
}

/// Size of the individual terms of the characteristic function at `z`
/// before any cancellation; the natural scale for its rounding error.
pub fn det_scale(z: Complex64, params: &ModelParams) -> f64 {
    let (g, d) = reservoir::decay_and_shift(z, params.bath());
    let da = params.delta_a();
    let zp = z + I * params.kappa();
    let photon = zp.norm_sqr() + da * da;
    let atom = (z - I * g).norm_sqr() + (OMEGA_B + d).norm_sqr();
    photon * atom + params.y() * params.y() * da * (OMEGA_B + d).norm()
}

/// Closed-form critical coupling `sqrt((delta_a^2 + kappa^2) omega_b / delta_a)`.
pub fn critical_coupling(params: &ModelParams) -> f64 {
    params.critical_coupling()
}

#[derive(Debug, Clone, Copy)]
struct Iterate {
    z: Complex64,
    f: Complex64,
}

fn derivative<F>(f: &F, z: Complex64) -> Complex64
where
    F: Fn(Complex64) -> Complex64,
{
    let h = 1e-7 * z.norm().max(1e-30);
    (f(z + h) - f(z - h)) / (2.0 * h)
}

fn check_branch(z: Complex64) -> Result<()> {
    if z.im > 0.0 || (z.im == 0.0 && z.re < 0.0) || !z.is_finite() {
        return Err(Error::BranchCrossing { z });
    }
    Ok(())
}

/// Takes a step of at most `dz` from `cur`, halving it until the iterate
/// stays in the closed lower half plane and `|f|` decreases.
fn damped<F>(f: &F, cur: Iterate, dz: Complex64) -> Option<Iterate>
where
    F: Fn(Complex64) -> Complex64,
{
    let mut step = dz;
    for _ in 0..40 {
        let z = cur.z + step;
        if z.im <= 0.0 && !(z.im == 0.0 && z.re < 0.0) {
            let fz = f(z);
            if fz.is_finite() && fz.norm() < cur.f.norm() {
                return Some(Iterate { z, f: fz });
            }
        }
        step *= 0.5;
    }
    None
}

fn muller_step(p: [Iterate; 3]) -> Option<Complex64> {
    let [a, b, c] = p;
    let h1 = b.z - a.z;
    let h2 = c.z - b.z;
    if h1.norm() == 0.0 || h2.norm() == 0.0 || (h1 + h2).norm() == 0.0 {
        return None;
    }
    let d1 = (b.f - a.f) / h1;
    let d2 = (c.f - b.f) / h2;
    let a2 = (d2 - d1) / (h2 + h1);
    let b2 = a2 * h2 + d2;
    let disc = (b2 * b2 - 4.0 * c.f * a2).sqrt();
    let den = if (b2 + disc).norm() >= (b2 - disc).norm() {
        b2 + disc
    } else {
        b2 - disc
    };
    if den.norm() == 0.0 {
        return None;
    }
    Some(-2.0 * c.f / den)
}

/// Damped Newton iteration on `f` with a Muller fallback on stagnation.
///
/// Converges when `|f(z)| <= tol`, or when the step has shrunk to rounding
/// level while `|f(z)| <= 1e3 tol`.
pub fn find_root<F>(f: F, guess: Complex64, tol: f64) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    check_branch(guess)?;
    let mut cur = Iterate { z: guess, f: f(guess) };
    let mut history: Vec<Iterate> = vec![cur];
    for _ in 0..MAX_ITERATIONS {
        if cur.f.norm() <= tol {
            return Ok(cur.z);
        }
        let df = derivative(&f, cur.z);
        let newton = if df.norm() > 0.0 && df.is_finite() {
            damped(&f, cur, -cur.f / df)
        } else {
            None
        };
        let next = match newton {
            Some(n) => Some(n),
            None if history.len() >= 3 => {
                let k = history.len();
                muller_step([history[k - 3], history[k - 2], history[k - 1]])
                    .and_then(|dz| damped(&f, cur, dz))
            }
            None => None,
        };
        let Some(next) = next else {
            if cur.f.norm() <= 1e3 * tol {
                return Ok(cur.z);
            }
            return Err(Error::NoConvergence {
                iterations: history.len(),
                last: cur.z,
                residual: cur.f.norm(),
            });
        };
        let step = (next.z - cur.z).norm();
        cur = next;
        history.push(cur);
        if step <= 4.0 * f64::EPSILON * cur.z.norm() && cur.f.norm() <= 1e3 * tol {
            return Ok(cur.z);
        }
    }
    if cur.f.norm() <= tol {
        return Ok(cur.z);
    }
    Err(Error::NoConvergence {
        iterations: MAX_ITERATIONS,
        last: cur.z,
        residual: cur.f.norm(),
    })
}

/// Root of the characteristic function near `guess`.
pub fn find_pole(guess: Complex64, params: &ModelParams) -> Result<Complex64> {
    let tol = RESIDUAL_TOLERANCE * det_scale(guess, params);
    find_root(|z| characteristic_det(z, params), guess, tol)
}

/// `|det(-conj z)|` relative to the term scale at `z`.
pub fn pair_residual(z: Complex64, params: &ModelParams) -> f64 {
    let mirror = -z.conj();
    characteristic_det(mirror, params).norm() / det_scale(mirror, params)
}

/// First-order estimate `1 + K^R(1)` of the dressed bare-b pole.
pub fn bare_b_seed(params: &ModelParams) -> Complex64 {
    OMEGA_B + reservoir::retarded_level_shift(OMEGA_B, params.bath())
}

/// The soft mode traced as a function of coupling.
#[derive(Debug, Clone, PartialEq)]
pub struct SoftModeBranch {
    pub points: Vec<(f64, Complex64)>,
    pub bifurcation_y: Option<f64>,
    pub params: ModelParams,
}

impl SoftModeBranch {
    /// Coupling at which `Im z` reaches zero, linearly extrapolated from the
    /// last two points.
    pub fn critical_y_estimate(&self) -> Option<f64> {
        let n = self.points.len();
        if n < 2 {
            return None;
        }
        let (y1, z1) = self.points[n - 2];
        let (y2, z2) = self.points[n - 1];
        let slope = (z2.im - z1.im) / (y2 - y1);
        if slope == 0.0 || !slope.is_finite() {
            return None;
        }
        Some(y2 - z2.im / slope)
    }

    pub fn to_csv(&self) -> String {
        let mut comments = io::params_lines(&self.params);
        comments.push(format!(
            "bifurcation_y = {}",
            self.bifurcation_y.map_or("nan".to_string(), io::fmt_f64)
        ));
        let rows = self.points.iter().map(|&(y, z)| vec![y, z.re, z.im]);
        io::csv(&comments, &["y", "re_z", "im_z"], rows)
    }
}

/// After the pole pair has collided, the next imaginary-axis pole is searched
/// in `[AXIS_SCAN_DEPTH, 1 + AXIS_SCAN_HEADROOM]` times the previous decay rate.
const AXIS_SCAN_DEPTH: f64 = 1e-6;
const AXIS_SCAN_HEADROOM: f64 = 0.05;

/// A pole counts as lying on the imaginary axis once `|Re z| < AXIS_TOL |z|`.
const AXIS_TOL: f64 = 1e-6;

/// Largest accepted distance between predictor and corrector, relative to `|z|`.
const MAX_JUMP: f64 = 0.2;

fn golden_min<G: Fn(f64) -> f64>(g: &G, mut a: f64, mut b: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    for _ in 0..200 {
        if gc < 0.0 {
            return c;
        }
        if gd < 0.0 {
            return d;
        }
        if b - a <= 4.0 * f64::EPSILON * b {
            break;
        }
        if gc < gd {
            b = d;
            d = c;
            gd = gc;
            c = b - r * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + r * (b - a);
            gd = g(d);
        }
    }
    if gc < gd { c } else { d }
}

fn reflect(z: Complex64) -> Complex64 {
    if z.re < 0.0 {
        -z.conj()
    } else {
        z
    }
}

struct Tracer<'a> {
    base: &'a ModelParams,
    on_axis: bool,
}

impl Tracer<'_> {
    fn complex_step(&self, params: &ModelParams, pred: Complex64) -> Result<Complex64> {
        let z = reflect(find_pole(pred, params)?);
        let on_axis = z.re.abs() <= AXIS_TOL * z.norm();
        if on_axis || (z - pred).norm() > MAX_JUMP * pred.norm().max(1e-12) {
            return Err(Error::NoConvergence {
                iterations: 0,
                last: z,
                residual: characteristic_det(z, params).norm(),
            });
        }
        Ok(z)
    }

    /// Smallest root of the real function `tau -> det(-i tau)`: a geometric
    /// scan below the previous decay rate finds the first sign change, which
    /// bisection then refines.
    fn axis_step(&self, params: &ModelParams, last: Complex64) -> Result<Complex64> {
        let f = |tau: f64| characteristic_det(Complex64::new(0.0, -tau), params).re;
        let top = -last.im * (1.0 + AXIS_SCAN_HEADROOM);
        let n: usize = 600;
        let lo = top * AXIS_SCAN_DEPTH;
        let ratio = (top / lo).powf(1.0 / n as f64);
        let sign = f(lo).signum();
        let grid: Vec<f64> = (0..=n).map(|k| lo * ratio.powi(k as i32)).collect();
        let g = |t: f64| sign * f(t);
        let mut bracket = None;
        let mut lowest = (0, f64::INFINITY);
        for k in 1..=n {
            let v = g(grid[k]);
            if v < 0.0 {
                bracket = Some((grid[k - 1], grid[k]));
                break;
            }
            if v < lowest.1 {
                lowest = (k, v);
            }
        }
        if bracket.is_none() && lowest.0 > 0 {
            // Two roots closer than the grid spacing show up as a dip of |f|.
            let k = lowest.0;
            let t = golden_min(&g, grid[k - 1], grid[(k + 1).min(n)]);
            if g(t) < 0.0 {
                bracket = Some((grid[k - 1], t));
            }
        }
        let Some((mut a, mut b)) = bracket else {
            return Err(Error::NoConvergence {
                iterations: n,
                last,
                residual: characteristic_det(last, params).norm(),
            });
        };
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if g(mid) >= 0.0 {
                a = mid;
            } else {
                b = mid;
            }
        }
        Ok(Complex64::new(0.0, -0.5 * (a + b)))
    }

    fn solve(&self, y: f64, pred: Complex64, last: Complex64) -> Result<Complex64> {
        let params = self.base.with_y(y)?;
        if self.on_axis {
            self.axis_step(&params, last)
        } else {
            self.complex_step(&params, pred)
        }
    }
}

/// Follows the soft mode along `y_grid` (strictly increasing, within `[0, y_c)`).
///
/// The branch starts from the dressed bare-b pole at `y = 0` and continues
/// with adaptive steps, using each converged pole as the seed of the next.
/// Once the complex pair collides on the imaginary axis the upper of the two
/// imaginary-axis poles is followed. Poles are reported with `Re z >= 0`.
pub fn trace_soft_mode(params_base: &ModelParams, y_grid: &[f64]) -> Result<SoftModeBranch> {
    let y_c = params_base.critical_coupling();
    if y_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParams("y grid must be strictly increasing".into()));
    }
    if y_grid.iter().any(|&y| !(0.0..y_c).contains(&y)) {
        return Err(Error::InvalidParams(format!(
            "y grid must lie within [0, y_c) with y_c = {y_c}"
        )));
    }
    let wrap = |y: f64, e: Error| Error::Continuation {
        y,
        source: Box::new(e),
    };

    let start = params_base.with_y(0.0)?;
    let z0 = reflect(find_pole(bare_b_seed(&start), &start).map_err(|e| wrap(0.0, e))?);
    let mut tracer = Tracer {
        base: params_base,
        on_axis: z0.re.abs() <= AXIS_TOL * z0.norm(),
    };
    let mut bifurcation_y = None;
    let mut prev: Option<(f64, Complex64)> = None;
    let mut cur = (0.0, z0);
    let floor = 1e-6 * y_c;
    let mut points = Vec::with_capacity(y_grid.len());

    for &target in y_grid {
        let mut dy = target - cur.0;
        while cur.0 < target {
            let y = (cur.0 + dy).min(target);
            let h = y - cur.0;
            let pred = match prev {
                Some((yp, zp)) if cur.0 > yp => cur.1 + (cur.1 - zp) * (h / (cur.0 - yp)),
                _ => cur.1,
            };
            let pred = Complex64::new(if tracer.on_axis { 0.0 } else { pred.re.max(0.0) }, pred.im.min(0.0));
            match tracer.solve(y, pred, cur.1) {
                Ok(z) => {
                    prev = Some(cur);
                    cur = (y, z);
                    dy = (2.0 * h).min(target - cur.0).max(h);
                }
                Err(e) => {
                    if h > floor {
                        dy = 0.5 * h;
                    } else if !tracer.on_axis {
                        // The pair has collided between cur.0 and y.
                        tracer.on_axis = true;
                        bifurcation_y = Some(cur.0 + 0.5 * h);
                        prev = None;
                        dy = h;
                    } else {
                        return Err(wrap(y, e));
                    }
                }
            }
        }
        if target == 0.0 {
            cur = (0.0, z0);
        }
        points.push((target, cur.1));
    }
    Ok(SoftModeBranch {
        points,
        bifurcation_y,
        params: *params_base,
    })
}
