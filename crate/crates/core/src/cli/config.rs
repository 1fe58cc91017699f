//! Run configuration: defaults, TOML files, embedded CSV headers and flag overrides.

use std::fmt;
use std::path::Path;

use serde::Deserialize;

use crate::greens::Mode;
use crate::io::fmt_f64;
use crate::params::{BathParams, ModelParams, INTEGER_EXPONENT_GAP};

/// Chemical potential used for `mu = 0` cells at finite temperature.
pub const MU_ZERO_MINUS: f64 = -1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Spectrum,
    Softmode,
    Sweep,
    Exponent,
    Thermal,
    OracleCheck,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Softmode => "softmode",
            Command::Sweep => "sweep",
            Command::Exponent => "exponent",
            Command::Thermal => "thermal",
            Command::OracleCheck => "oracle-check",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            Command::Spectrum,
            Command::Softmode,
            Command::Sweep,
            Command::Exponent,
            Command::Thermal,
            Command::OracleCheck,
        ]
        .into_iter()
        .find(|c| c.name() == s)
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Fully resolved configuration of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub mode: Mode,
    pub delta_a: f64,
    pub kappa: f64,
    pub omega_m: f64,
    pub gamma: Vec<f64>,
    pub s: Vec<f64>,
    pub temperature: Vec<f64>,
    pub mu: Vec<f64>,
    /// Couplings in units of `y_c`.
    pub y: Vec<f64>,
    pub eps_min: f64,
    pub eps_max: f64,
    pub points: usize,
    pub spectrum_points: usize,
    pub n_modes: usize,
    pub omega_max: f64,
    pub emit_svg: bool,
}

impl RunConfig {
    pub fn defaults(command: Command) -> Self {
        RunConfig {
            command,
            mode: Mode::Photon,
            delta_a: 2.0,
            kappa: 0.5,
            omega_m: 10.0,
            gamma: vec![0.1],
            s: vec![0.8],
            temperature: vec![0.0],
            mu: vec![0.0],
            y: vec![0.0, 0.5, 0.99],
            eps_min: 1e-4,
            eps_max: 1e-2,
            points: 20,
            spectrum_points: 1201,
            n_modes: 2000,
            omega_max: 20.0,
            emit_svg: false,
        }
    }

    /// `key = value` lines that [`PartialConfig::parse`] reads back unchanged.
    pub fn to_lines(&self) -> Vec<String> {
        let list = |v: &[f64]| format!("[{}]", v.iter().map(|x| fmt_f64(*x)).collect::<Vec<_>>().join(", "));
        vec![
            format!("command = \"{}\"", self.command),
            format!("mode = \"{}\"", self.mode),
            format!("delta_a = {}", fmt_f64(self.delta_a)),
            format!("kappa = {}", fmt_f64(self.kappa)),
            format!("omega_m = {}", fmt_f64(self.omega_m)),
            format!("gamma = {}", list(&self.gamma)),
            format!("s = {}", list(&self.s)),
            format!("temperature = {}", list(&self.temperature)),
            format!("mu = {}", list(&self.mu)),
            format!("y = {}", list(&self.y)),
            format!("eps_min = {}", fmt_f64(self.eps_min)),
            format!("eps_max = {}", fmt_f64(self.eps_max)),
            format!("points = {}", self.points),
            format!("spectrum_points = {}", self.spectrum_points),
            format!("n_modes = {}", self.n_modes),
            format!("omega_max = {}", fmt_f64(self.omega_max)),
            format!("emit_svg = {}", self.emit_svg),
        ]
    }

    pub fn apply(&mut self, p: PartialConfig) -> Result<(), String> {
        if let Some(c) = p.command {
            let c = Command::parse(&c).ok_or_else(|| format!("unknown command '{c}'"))?;
            if c != self.command {
                return Err(format!(
                    "config was written for '{c}' but the '{}' command was requested",
                    self.command
                ));
            }
        }
        if let Some(m) = p.mode {
            self.mode = m.parse().map_err(|e: crate::Error| e.to_string())?;
        }
        macro_rules! set {
            ($($f:ident),*) => { $(if let Some(v) = p.$f { self.$f = v.into(); })* };
        }
        set!(delta_a, kappa, omega_m, gamma, s, temperature, mu, y, eps_min, eps_max);
        set!(points, spectrum_points, n_modes, omega_max, emit_svg);
        Ok(())
    }

    /// Bath cells in output order: `s` outermost, then `gamma`, `T`, `mu`.
    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for &s in &self.s {
            for &gamma in &self.gamma {
                for &temperature in &self.temperature {
                    for &mu in &self.mu {
                        out.push(Cell {
                            s,
                            gamma,
                            temperature,
                            mu,
                        });
                    }
                }
            }
        }
        out
    }

    pub fn model(&self, cell: &Cell, y: f64) -> crate::Result<ModelParams> {
        let mu = if cell.temperature > 0.0 && cell.mu == 0.0 {
            MU_ZERO_MINUS
        } else {
            cell.mu
        };
        let bath = BathParams::new(cell.s, cell.gamma, self.omega_m, cell.temperature, mu)?;
        ModelParams::new(bath, self.delta_a, self.kappa, y)
    }

    pub fn validate(&self) -> Result<(), String> {
        for (name, v) in [
            ("gamma", &self.gamma),
            ("s", &self.s),
            ("temperature", &self.temperature),
            ("mu", &self.mu),
            ("y", &self.y),
        ] {
            if v.is_empty() {
                return Err(format!("'{name}' must not be empty"));
            }
        }
        for cell in self.cells() {
            self.model(&cell, 0.0).map_err(|e| e.to_string())?;
        }
        if self.y.iter().any(|&y| !(0.0..1.0).contains(&y)) {
            return Err("every y must satisfy 0 <= y/y_c < 1".into());
        }
        if !(self.eps_min > 0.0 && self.eps_min < self.eps_max && self.eps_max < 1.0) {
            return Err(format!(
                "need 0 < eps_min < eps_max < 1, got ({}, {})",
                self.eps_min, self.eps_max
            ));
        }
        let min_points = if self.command == Command::Exponent { 8 } else { 2 };
        if self.points < min_points {
            return Err(format!("'points' must be >= {min_points}, got {}", self.points));
        }
        match self.command {
            Command::Exponent if self.eps_max > 0.1 => {
                Err(format!("exponent fits need eps_max <= 0.1, got {}", self.eps_max))
            }
            Command::Spectrum if self.spectrum_points < 2 => Err("'spectrum_points' must be >= 2".into()),
            Command::OracleCheck => {
                if self.temperature.iter().any(|&t| t != 0.0) {
                    return Err("oracle-check covers T = 0 only".into());
                }
                if self.n_modes < 500 {
                    return Err(format!("'n_modes' must be >= 500, got {}", self.n_modes));
                }
                if !(self.omega_max >= 2.0 * self.omega_m) {
                    return Err("'omega_max' must be >= 2 omega_m".into());
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub s: f64,
    pub gamma: f64,
    pub temperature: f64,
    pub mu: f64,
}

impl Cell {
    /// File-name fragment, e.g. `s0.8_gamma0.1_T0_mu0`.
    pub fn tag(&self) -> String {
        format!("s{}_gamma{}_T{}_mu{}", self.s, self.gamma, self.temperature, self.mu)
    }

    pub fn comment(&self) -> String {
        format!(
            "cell s={} gamma={} temperature={} mu={}",
            self.s, self.gamma, self.temperature, self.mu
        )
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(f64),
    Many(Vec<f64>),
}

impl From<OneOrMany> for Vec<f64> {
    fn from(v: OneOrMany) -> Self {
        match v {
            OneOrMany::One(x) => vec![x],
            OneOrMany::Many(v) => v,
        }
    }
}

/// Settings read from a config file or a CSV header; unset keys keep their value.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    pub command: Option<String>,
    pub mode: Option<String>,
    pub delta_a: Option<f64>,
    pub kappa: Option<f64>,
    pub omega_m: Option<f64>,
    pub gamma: Option<OneOrMany>,
    pub s: Option<OneOrMany>,
    pub temperature: Option<OneOrMany>,
    pub mu: Option<OneOrMany>,
    pub y: Option<OneOrMany>,
    pub eps_min: Option<f64>,
    pub eps_max: Option<f64>,
    pub points: Option<usize>,
    pub spectrum_points: Option<usize>,
    pub n_modes: Option<usize>,
    pub omega_max: Option<f64>,
    pub emit_svg: Option<bool>,
}

impl PartialConfig {
    /// Parses a TOML config, or the `# key = value` header of a CSV artifact.
    pub fn parse(text: &str) -> Result<Self, String> {
        let is_csv = text.lines().next().is_some_and(|l| l.starts_with("# "));
        let body = if is_csv {
            text.lines()
                .filter_map(|l| l.strip_prefix("# "))
                .filter(|l| l.contains(" = "))
                .collect::<Vec<_>>()
                .join("\n")
        } else {
            text.to_string()
        };
        toml::from_str(&body).map_err(|e| e.to_string())
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        Self::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}

/// Expands `start:stop:step` (both ends inclusive).
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [a, b, step] = parts.as_slice() else {
        return Err(format!("expected start:stop:step, got '{spec}'"));
    };
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("'{t}': {e}"));
    let (a, b, step) = (num(a)?, num(b)?, num(step)?);
    if !(step > 0.0 && b >= a && a.is_finite() && b.is_finite()) {
        return Err(format!("grid '{spec}' needs step > 0 and stop >= start"));
    }
    let n = ((b - a) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| ((a + i as f64 * step) * 1e12).round() / 1e12).collect())
}

/// Drops grid points that fall inside the excluded band around integers.
pub fn drop_integer_exponents(grid: Vec<f64>) -> (Vec<f64>, Vec<f64>) {
    grid.into_iter()
        .partition(|s| (s - s.round()).abs() >= INTEGER_EXPONENT_GAP)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_expansion() {
        let g = parse_grid("0.2:1.8:0.1").unwrap();
        assert_eq!(g.len(), 17);
        assert_eq!(g[1], 0.3);
        assert_eq!(g[16], 1.8);
        let (kept, dropped) = drop_integer_exponents(g);
        assert_eq!(dropped, vec![1.0]);
        assert_eq!(kept.len(), 16);
        assert!(parse_grid("1:0:0.1").is_err());
        assert!(parse_grid("0.1:0.2").is_err());
    }

    #[test]
    fn lines_round_trip() {
        let mut c = RunConfig::defaults(Command::Thermal);
        c.temperature = vec![0.5, 1.0, 2.0];
        c.emit_svg = true;
        let csv = crate::io::csv(&c.to_lines(), &["T", "c_b0"], [vec![0.5, 1.0]]);
        let mut back = RunConfig::defaults(Command::Thermal);
        back.apply(PartialConfig::parse(&csv).unwrap()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn command_mismatch_is_rejected() {
        let c = RunConfig::defaults(Command::Sweep);
        let text = c.to_lines().join("\n");
        let mut other = RunConfig::defaults(Command::Exponent);
        assert!(other.apply(PartialConfig::parse(&text).unwrap()).is_err());
    }

    #[test]
    fn scalars_accepted_for_lists() {
        let p = PartialConfig::parse("s = 0.6\ngamma = [0.03, 0.5]\ndelta_a = 2\n").unwrap();
        let mut c = RunConfig::defaults(Command::Thermal);
        c.apply(p).unwrap();
        assert_eq!(c.s, vec![0.6]);
        assert_eq!(c.gamma, vec![0.03, 0.5]);
        assert_eq!(c.delta_a, 2.0);
        assert!(PartialConfig::parse("bogus = 1\n").is_err());
    }

    #[test]
    fn validation() {
        let mut c = RunConfig::defaults(Command::Sweep);
        assert!(c.validate().is_ok());
        c.s = vec![1.0];
        assert!(c.validate().is_err());
        c.s = vec![0.8];
        c.y = vec![1.0];
        assert!(c.validate().is_err());
        let mut c = RunConfig::defaults(Command::OracleCheck);
        c.temperature = vec![1.0];
        assert!(c.validate().is_err());
        let mut c = RunConfig::defaults(Command::Thermal);
        c.temperature = vec![1.0];
        assert!(c.validate().is_ok());
    }
}
