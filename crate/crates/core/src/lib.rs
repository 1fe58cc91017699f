//! Steady-state numerics for the driven-dissipative Dicke model with a colored reservoir.
//!
//! In the normal phase the model reduces to two coupled bosonic modes: a cavity
//! mode `a` (detuning `delta_a`, Markovian decay `kappa`) and a low-frequency
//! mode `b` (frequency fixed to 1) that couples to a bath with power-law
//! coupling density `gamma * omega^s`. All quantities are in natural units
//! `hbar = k_B = omega_b = 1`.
//!
//! - [`reservoir`]: coupling density, renormalized level-shift function on the
//!   real axis and on the second Riemann sheet, thermal noise kernel.
//! - [`greens`]: reduced 2x2 retarded/Keldysh blocks and correlation spectra.
//! - [`poles`]: characteristic frequencies, soft-mode continuation, critical coupling.
//! - [`observables`]: excitation numbers, thermalization check, exponent fits and
//!   an independent discretized-bath oracle.
//! - [`cli`]: figure-reproduction driver writing CSV and SVG artifacts.

pub mod cli;
pub mod error;
pub mod greens;
pub mod io;
pub mod observables;
pub mod params;
pub mod poles;
pub mod quadrature;
pub mod reservoir;

pub use error::{Error, Result};
pub use greens::{GreenBlock2x2, GreenKind, Mode, Spectrum};
pub use observables::{ExponentFit, ModeOccupation, OccupationResult};
pub use params::{BathParams, ModelParams};
pub use poles::SoftModeBranch;

pub use num_complex::Complex64;
