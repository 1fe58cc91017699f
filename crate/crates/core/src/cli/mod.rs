//! Command-line driver.

pub mod config;
pub mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

pub use config::{Cell, Command, PartialConfig, RunConfig};
pub use run::{run, write_artifacts, Artifact};

/// Environment variable holding the worker-thread count.
pub const WORKERS_ENV: &str = "COLORED_DICKE_WORKERS";

pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "colored-dicke", version, about = "Open Dicke model with a colored reservoir")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandArg,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum CommandArg {
    /// Correlation spectrum C(omega) for each y in the list.
    Spectrum,
    /// Soft-mode pole traced from y = 0 towards y_c.
    Softmode,
    /// Occupations n_a, n_b on a geometric grid of eps = 1 - y/y_c.
    Sweep,
    /// Critical exponent of n_a for each bath exponent s.
    Exponent,
    /// Atomic zero-time correlation C_b(0) at y = 0 for each temperature.
    Thermal,
    /// Keldysh n_a against the discretized-bath oracle.
    OracleCheck,
}

impl From<CommandArg> for Command {
    fn from(c: CommandArg) -> Self {
        match c {
            CommandArg::Spectrum => Command::Spectrum,
            CommandArg::Softmode => Command::Softmode,
            CommandArg::Sweep => Command::Sweep,
            CommandArg::Exponent => Command::Exponent,
            CommandArg::Thermal => Command::Thermal,
            CommandArg::OracleCheck => Command::OracleCheck,
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// TOML config file, or a CSV artifact whose header holds the config.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Directory receiving the artifacts.
    #[arg(long, global = true, default_value = "out")]
    pub output_dir: PathBuf,
    /// Also write SVG plots.
    #[arg(long, global = true)]
    pub svg: bool,
    /// Spectrum mode: photon or atom.
    #[arg(long, global = true)]
    pub mode: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub delta_a: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub kappa: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub omega_m: Option<f64>,
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub gamma: Option<Vec<f64>>,
    /// Bath exponents, comma separated.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "s_grid")]
    pub s: Option<Vec<f64>>,
    /// Bath exponents as start:stop:step; integer values are skipped.
    #[arg(long, global = true)]
    pub s_grid: Option<String>,
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "t_grid")]
    pub temperature: Option<Vec<f64>>,
    /// Temperatures as start:stop:step.
    #[arg(long, global = true)]
    pub t_grid: Option<String>,
    /// Chemical potentials; mu = 0 at T > 0 is evaluated at mu = -1e-9.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub mu: Option<Vec<f64>>,
    /// Couplings in units of y_c.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub y: Option<Vec<f64>>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub eps_min: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub eps_max: Option<f64>,
    /// Points on the eps grid.
    #[arg(long, global = true)]
    pub points: Option<usize>,
    /// Points on the linear part of the spectrum grid.
    #[arg(long, global = true)]
    pub spectrum_points: Option<usize>,
    /// Bath modes of the oracle.
    #[arg(long, global = true)]
    pub n_modes: Option<usize>,
    /// Upper bath frequency of the oracle.
    #[arg(long, global = true)]
    pub omega_max: Option<f64>,
}

impl Flags {
    fn into_partial(self) -> Result<PartialConfig, String> {
        let s = match self.s_grid {
            Some(g) => {
                let (kept, dropped) = config::drop_integer_exponents(config::parse_grid(&g)?);
                for s in dropped {
                    eprintln!("skipping integer bath exponent s = {s}");
                }
                Some(kept)
            }
            None => self.s,
        };
        let temperature = match self.t_grid {
            Some(g) => Some(config::parse_grid(&g)?),
            None => self.temperature,
        };
        let many = |v: Option<Vec<f64>>| v.map(config::OneOrMany::Many);
        Ok(PartialConfig {
            command: None,
            mode: self.mode,
            delta_a: self.delta_a,
            kappa: self.kappa,
            omega_m: self.omega_m,
            gamma: many(self.gamma),
            s: many(s),
            temperature: many(temperature),
            mu: many(self.mu),
            y: many(self.y),
            eps_min: self.eps_min,
            eps_max: self.eps_max,
            points: self.points,
            spectrum_points: self.spectrum_points,
            n_modes: self.n_modes,
            omega_max: self.omega_max,
            emit_svg: self.svg.then_some(true),
        })
    }
}

/// Defaults, then the config file, then flags.
pub fn resolve(command: Command, flags: Flags) -> Result<RunConfig, String> {
    let mut cfg = RunConfig::defaults(command);
    if let Some(path) = &flags.config {
        cfg.apply(PartialConfig::load(path)?)?;
    }
    cfg.apply(flags.into_partial()?)?;
    cfg.validate()?;
    Ok(cfg)
}

fn init_workers() -> Result<(), String> {
    let Ok(v) = std::env::var(WORKERS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("{WORKERS_ENV} must be a positive integer, got '{v}'"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

/// Exit status for a library error: bad input or numerical failure.
pub fn exit_code(e: &crate::Error) -> u8 {
    if e.is_validation() {
        EXIT_VALIDATION
    } else {
        EXIT_NUMERICAL
    }
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    let output_dir = cli.flags.output_dir.clone();
    let cfg = match init_workers().and_then(|_| resolve(cli.command.into(), cli.flags)) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_VALIDATION);
        }
    };
    let artifacts = match run(&cfg) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    match write_artifacts(&output_dir, &artifacts) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: writing {}: {e}", output_dir.display());
            ExitCode::FAILURE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Error;

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::InvalidParams("x".into())), 2);
        assert_eq!(exit_code(&Error::IntegerExponent { s: 1.0 }), 2);
        let q = Error::QuadratureFailure {
            error: 1.0,
            tolerance: 1e-6,
            subdivisions: 20000,
        };
        assert_eq!(exit_code(&q), 3);
        assert_eq!(exit_code(&Error::LyapunovSingular { y: 2.0, y_c: 1.0 }), 3);
    }

    #[test]
    fn flags_override_config_file() {
        let dir = std::env::temp_dir().join(format!("colored-dicke-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.toml");
        std::fs::write(&path, "kappa = 1.5\ns = [0.6, 0.7]\n").unwrap();
        let flags = Flags {
            config: Some(path),
            kappa: Some(0.25),
            ..Flags::default()
        };
        let cfg = resolve(Command::Sweep, flags).unwrap();
        assert_eq!(cfg.kappa, 0.25);
        assert_eq!(cfg.s, vec![0.6, 0.7]);
        assert_eq!(cfg.delta_a, 2.0);
        std::fs::remove_dir_all(dir).unwrap();
    }
}
