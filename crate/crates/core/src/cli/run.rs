//! Command implementations. Each command returns its artifacts in memory;
//! [`write_artifacts`] puts them on disk.

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::greens::{Mode, Spectrum};
use crate::io::{self, Plot};
use crate::observables::{self, FitWindow, OracleOptions};
use crate::poles;

use super::config::{Cell, Command, RunConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

pub fn run(cfg: &RunConfig) -> Result<Vec<Artifact>> {
    match cfg.command {
        Command::Spectrum => spectrum(cfg),
        Command::Softmode => softmode(cfg),
        Command::Sweep => sweep(cfg),
        Command::Exponent => exponent(cfg),
        Command::Thermal => thermal(cfg),
        Command::OracleCheck => oracle_check(cfg),
    }
}

pub fn write_artifacts(dir: &Path, artifacts: &[Artifact]) -> std::io::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    artifacts
        .iter()
        .map(|a| {
            let path = dir.join(&a.name);
            std::fs::write(&path, &a.contents)?;
            Ok(path)
        })
        .collect()
}

fn comments(cfg: &RunConfig, extra: &[String]) -> Vec<String> {
    let mut c = cfg.to_lines();
    c.extend_from_slice(extra);
    c
}

fn y_c(cfg: &RunConfig) -> Result<f64> {
    let cell = cfg.cells()[0];
    Ok(cfg.model(&cell, 0.0)?.critical_coupling())
}

/// `n` geometric points from `lo` to `hi`, both included.
fn geometric(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let r = (hi / lo).ln();
    (0..n)
        .map(|i| if i + 1 == n { hi } else { lo * (r * i as f64 / (n - 1) as f64).exp() })
        .collect()
}

fn push_svg(out: &mut Vec<Artifact>, cfg: &RunConfig, stem: &str, plot: Plot) {
    if cfg.emit_svg {
        out.push(Artifact {
            name: format!("{stem}.svg"),
            contents: plot.render(),
        });
    }
}

fn spectrum(cfg: &RunConfig) -> Result<Vec<Artifact>> {
    let y_c = y_c(cfg)?;
    let cells = cfg.cells();
    let per_cell: Vec<Vec<Spectrum>> = cells
        .par_iter()
        .map(|cell| {
            cfg.y
                .iter()
                .map(|&y| {
                    let p = cfg.model(cell, y * y_c)?;
                    Spectrum::compute(cfg.mode, &p, &Spectrum::default_grid(&p, cfg.spectrum_points))
                })
                .collect()
        })
        .collect::<Result<_>>()?;

    let mut out = Vec::new();
    for (cell, spectra) in cells.iter().zip(per_cell) {
        let stem = format!("spectrum_{}_{}", cfg.mode, cell.tag());
        let mut plot = Plot::new(&format!("C(omega), {}", cfg.mode), "omega", "C(omega)").log_y(true);
        for (&y, sp) in cfg.y.iter().zip(&spectra) {
            let extra = [cell.comment(), format!("y/y_c={y}")];
            let rows = sp.samples.iter().map(|&(w, c)| vec![w, c]);
            out.push(Artifact {
                name: format!("{stem}_y{y}.csv"),
                contents: io::csv(&comments(cfg, &extra), &["omega", "value"], rows),
            });
            plot = plot.with_series(&format!("y = {y} y_c"), sp.samples.clone());
        }
        push_svg(&mut out, cfg, &stem, plot);
    }
    Ok(out)
}

fn softmode(cfg: &RunConfig) -> Result<Vec<Artifact>> {
    let y_c = y_c(cfg)?;
    let n = cfg.points;
    let top = 1.0 - cfg.eps_max;
    let mut grid: Vec<f64> = (0..n).map(|i| top * i as f64 / (n - 1) as f64).collect();
    grid.extend(geometric(cfg.eps_min, cfg.eps_max, n).iter().rev().skip(1).map(|e| 1.0 - e));
    let grid: Vec<f64> = grid.iter().map(|r| r * y_c).collect();

    let cells = cfg.cells();
    let branches: Vec<poles::SoftModeBranch> = cells
        .par_iter()
        .map(|cell| poles::trace_soft_mode(&cfg.model(cell, 0.0)?, &grid))
        .collect::<Result<_>>()?;

    let mut out = Vec::new();
    for (cell, b) in cells.iter().zip(&branches) {
        let stem = format!("softmode_{}", cell.tag());
        let bif = b.bifurcation_y.map_or("none".to_string(), |y| io::fmt_f64(y / y_c));
        let extra = [cell.comment(), format!("bifurcation y/y_c: {bif}")];
        let rows = b.points.iter().map(|&(y, z)| vec![y, z.re, z.im]);
        out.push(Artifact {
            name: format!("{stem}.csv"),
            contents: io::csv(&comments(cfg, &extra), &["y", "re_z", "im_z"], rows),
        });
        let plot = Plot::new(&format!("soft mode, s = {}", cell.s), "y / y_c", "z")
            .with_series("Re z", b.points.iter().map(|&(y, z)| (y / y_c, z.re)).collect())
            .with_series("Im z", b.points.iter().map(|&(y, z)| (y / y_c, z.im)).collect());
        push_svg(&mut out, cfg, &stem, plot);
    }
    Ok(out)
}

fn sweep(cfg: &RunConfig) -> Result<Vec<Artifact>> {
    let eps = geometric(cfg.eps_min, cfg.eps_max, cfg.points);
    let cells = cfg.cells();
    let tables: Vec<Vec<Vec<f64>>> = cells
        .iter()
        .map(|cell| {
            let base = cfg.model(cell, 0.0)?;
            eps.par_iter()
                .map(|&e| {
                    let r = observables::occupations(&base.at_reduced_coupling(e)?)?;
                    Ok(vec![e, r.n_a, r.n_b])
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let mut out = Vec::new();
    for (cell, rows) in cells.iter().zip(tables) {
        let stem = format!("sweep_{}", cell.tag());
        let plot = Plot::new(&format!("occupations, s = {}", cell.s), "1 - y/y_c", "n")
            .log_x(true)
            .log_y(true)
            .with_series("n_a", rows.iter().map(|r| (r[0], r[1])).collect())
            .with_series("n_b", rows.iter().map(|r| (r[0], r[2])).collect());
        out.push(Artifact {
            name: format!("{stem}.csv"),
            contents: io::csv(&comments(cfg, &[cell.comment()]), &["eps", "n_a", "n_b"], rows),
        });
        push_svg(&mut out, cfg, &stem, plot);
    }
    Ok(out)
}

/// Cells that share everything except `s`, in first-appearance order.
fn groups_over_s(cfg: &RunConfig) -> Vec<Cell> {
    let mut out: Vec<Cell> = Vec::new();
    for c in cfg.cells() {
        let key = Cell { s: f64::NAN, ..c };
        if !out.iter().any(|o| o.gamma == c.gamma && o.temperature == c.temperature && o.mu == c.mu) {
            out.push(key);
        }
    }
    out
}

fn exponent(cfg: &RunConfig) -> Result<Vec<Artifact>> {
    let window = FitWindow::new(cfg.eps_min, cfg.eps_max)?;
    let mut out = Vec::new();
    for group in groups_over_s(cfg) {
        let rows: Vec<Vec<f64>> = cfg
            .s
            .par_iter()
            .map(|&s| {
                let base = cfg.model(&Cell { s, ..group }, 0.0)?;
                match observables::fit_critical_exponent(&base, window, cfg.points) {
                    Ok(fit) => Ok(vec![s, fit.exponent, fit.residual]),
                    Err(Error::NotDiverging { .. }) => Ok(vec![s, 0.0, f64::NAN]),
                    Err(e) => Err(e),
                }
            })
            .collect::<Result<_>>()?;
        let stem = format!(
            "exponent_gamma{}_T{}_mu{}",
            group.gamma, group.temperature, group.mu
        );
        let extra = [format!(
            "cell gamma={} temperature={} mu={}",
            group.gamma, group.temperature, group.mu
        )];
        let plot = Plot::new("critical exponent", "s", "exponent")
            .with_series("exponent", rows.iter().map(|r| (r[0], r[1])).collect());
        out.push(Artifact {
            name: format!("{stem}.csv"),
            contents: io::csv(&comments(cfg, &extra), &["s", "exponent", "residual"], rows),
        });
        push_svg(&mut out, cfg, &stem, plot);
    }
    Ok(out)
}

fn thermal(cfg: &RunConfig) -> Result<Vec<Artifact>> {
    let mut groups: Vec<Cell> = Vec::new();
    for c in cfg.cells() {
        if !groups.iter().any(|g| g.s == c.s && g.gamma == c.gamma && g.mu == c.mu) {
            groups.push(Cell { temperature: f64::NAN, ..c });
        }
    }
    let mut out = Vec::new();
    for group in groups {
        let rows: Vec<Vec<f64>> = cfg
            .temperature
            .par_iter()
            .map(|&t| {
                let p = cfg.model(&Cell { temperature: t, ..group }, 0.0)?;
                Ok(vec![t, observables::thermal_occupation_b(p.bath())?])
            })
            .collect::<Result<_>>()?;
        let stem = format!("thermal_s{}_gamma{}_mu{}", group.s, group.gamma, group.mu);
        let extra = [format!("cell s={} gamma={} mu={}", group.s, group.gamma, group.mu)];
        let coth: Vec<(f64, f64)> = rows
            .iter()
            .map(|r| (r[0], if r[0] > 0.0 { 1.0 / (0.5 / r[0]).tanh() } else { 1.0 }))
            .collect();
        let plot = Plot::new(&format!("C_b(0), gamma = {}", group.gamma), "T", "C_b(0)")
            .with_series("C_b(0)", rows.iter().map(|r| (r[0], r[1])).collect())
            .with_series("coth(1/2T)", coth);
        out.push(Artifact {
            name: format!("{stem}.csv"),
            contents: io::csv(&comments(cfg, &extra), &["T", "c_b0"], rows),
        });
        push_svg(&mut out, cfg, &stem, plot);
    }
    Ok(out)
}

fn oracle_check(cfg: &RunConfig) -> Result<Vec<Artifact>> {
    let y_c = y_c(cfg)?;
    let jobs: Vec<(Cell, f64)> = cfg
        .cells()
        .into_iter()
        .flat_map(|c| cfg.y.iter().map(move |&y| (c, y)))
        .collect();
    let opts = OracleOptions::default();
    let rows: Vec<Vec<f64>> = jobs
        .par_iter()
        .map(|&(cell, y)| {
            let p = cfg.model(&cell, y * y_c)?;
            let keldysh = observables::excitation_number(Mode::Photon, &p)?.n;
            let oracle = observables::discrete_bath_oracle(&p, cfg.n_modes, cfg.omega_max, &opts)?.n_a;
            let rel = if oracle != 0.0 { (keldysh - oracle) / oracle } else { f64::NAN };
            Ok(vec![cell.s, cell.gamma, y, keldysh, oracle, rel])
        })
        .collect::<Result<_>>()?;
    Ok(vec![Artifact {
        name: "oracle_check.csv".into(),
        contents: io::csv(
            &comments(cfg, &[]),
            &["s", "gamma", "y", "n_keldysh", "n_oracle", "rel_diff"],
            rows,
        ),
    }])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_endpoints() {
        let g = geometric(1e-4, 1e-2, 5);
        assert_eq!(g.len(), 5);
        assert!((g[0] - 1e-4).abs() < 1e-18);
        assert_eq!(g[4], 1e-2);
        assert!((g[2] - 1e-3).abs() < 1e-15);
    }

    #[test]
    fn spectrum_artifacts_are_reproducible() {
        let mut cfg = RunConfig::defaults(Command::Spectrum);
        cfg.spectrum_points = 41;
        cfg.emit_svg = true;
        let a = run(&cfg).unwrap();
        assert_eq!(a.len(), 4);
        assert!(a[0].name.starts_with("spectrum_photon_s0.8_gamma0.1_T0_mu0_y0"));
        assert!(a[3].name.ends_with(".svg"));
        assert_eq!(a, run(&cfg).unwrap());
    }
}
