//! Validated parameter sets. Construction is the only place invariants are
//! checked; every downstream operation assumes a valid set.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Frequency of the low-frequency mode `b`; it sets the unit of energy.
pub const OMEGA_B: f64 = 1.0;

/// Half-width of the excluded band around integer bath exponents.
pub const INTEGER_EXPONENT_GAP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBath", into = "RawBath")]
pub struct BathParams {
    s: f64,
    gamma: f64,
    omega_m: f64,
    temperature: f64,
    mu: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct RawBath {
    s: f64,
    gamma: f64,
    omega_m: f64,
    temperature: f64,
    mu: f64,
}

impl TryFrom<RawBath> for BathParams {
    type Error = Error;

    fn try_from(raw: RawBath) -> Result<Self> {
        BathParams::new(raw.s, raw.gamma, raw.omega_m, raw.temperature, raw.mu)
    }
}

impl From<BathParams> for RawBath {
    fn from(b: BathParams) -> Self {
        RawBath {
            s: b.s,
            gamma: b.gamma,
            omega_m: b.omega_m,
            temperature: b.temperature,
            mu: b.mu,
        }
    }
}

fn finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("{name} must be finite, got {v}")))
    }
}

impl BathParams {
    pub fn new(s: f64, gamma: f64, omega_m: f64, temperature: f64, mu: f64) -> Result<Self> {
        for (name, v) in [
            ("s", s),
            ("gamma", gamma),
            ("omega_m", omega_m),
            ("temperature", temperature),
            ("mu", mu),
        ] {
            finite(name, v)?;
        }
        if !(s > 0.0 && s < 2.0) {
            return Err(Error::InvalidParams(format!(
                "bath exponent must satisfy 0 < s < 2, got {s}"
            )));
        }
        if (s - s.round()).abs() < INTEGER_EXPONENT_GAP {
            return Err(Error::IntegerExponent { s });
        }
        if gamma <= 0.0 {
            return Err(Error::InvalidParams(format!("gamma must be > 0, got {gamma}")));
        }
        if omega_m <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "omega_m must be > 0, got {omega_m}"
            )));
        }
        if temperature < 0.0 {
            return Err(Error::InvalidParams(format!(
                "temperature must be >= 0, got {temperature}"
            )));
        }
        if mu > 0.0 {
            return Err(Error::InvalidParams(format!("mu must be <= 0, got {mu}")));
        }
        if temperature > 0.0 && mu >= 0.0 {
            return Err(Error::InvalidParams(
                "a finite-temperature bath needs mu < 0".to_string(),
            ));
        }
        Ok(BathParams {
            s,
            gamma,
            omega_m,
            temperature,
            mu,
        })
    }

    /// Zero-temperature bath with cutoff `omega_m = 10`.
    pub fn zero_temperature(s: f64, gamma: f64) -> Result<Self> {
        Self::new(s, gamma, 10.0, 0.0, 0.0)
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn omega_m(&self) -> f64 {
        self.omega_m
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn with_s(&self, s: f64) -> Result<Self> {
        Self::new(s, self.gamma, self.omega_m, self.temperature, self.mu)
    }

    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        Self::new(self.s, gamma, self.omega_m, self.temperature, self.mu)
    }

    pub fn with_omega_m(&self, omega_m: f64) -> Result<Self> {
        Self::new(self.s, self.gamma, omega_m, self.temperature, self.mu)
    }

    pub fn with_thermal(&self, temperature: f64, mu: f64) -> Result<Self> {
        Self::new(self.s, self.gamma, self.omega_m, temperature, mu)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawModel", into = "RawModel")]
pub struct ModelParams {
    bath: BathParams,
    delta_a: f64,
    kappa: f64,
    y: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct RawModel {
    bath: BathParams,
    delta_a: f64,
    kappa: f64,
    y: f64,
}

impl TryFrom<RawModel> for ModelParams {
    type Error = Error;

    fn try_from(raw: RawModel) -> Result<Self> {
        ModelParams::new(raw.bath, raw.delta_a, raw.kappa, raw.y)
    }
}

impl From<ModelParams> for RawModel {
    fn from(m: ModelParams) -> Self {
        RawModel {
            bath: m.bath,
            delta_a: m.delta_a,
            kappa: m.kappa,
            y: m.y,
        }
    }
}

impl ModelParams {
    pub fn new(bath: BathParams, delta_a: f64, kappa: f64, y: f64) -> Result<Self> {
        for (name, v) in [("delta_a", delta_a), ("kappa", kappa), ("y", y)] {
            finite(name, v)?;
        }
        if delta_a <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "delta_a must be > 0, got {delta_a}"
            )));
        }
        if kappa < 0.0 {
            return Err(Error::InvalidParams(format!("kappa must be >= 0, got {kappa}")));
        }
        if y < 0.0 {
            return Err(Error::InvalidParams(format!("y must be >= 0, got {y}")));
        }
        Ok(ModelParams {
            bath,
            delta_a,
            kappa,
            y,
        })
    }

    pub fn bath(&self) -> &BathParams {
        &self.bath
    }

    pub fn delta_a(&self) -> f64 {
        self.delta_a
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn with_y(&self, y: f64) -> Result<Self> {
        Self::new(self.bath, self.delta_a, self.kappa, y)
    }

    pub fn with_bath(&self, bath: BathParams) -> Result<Self> {
        Self::new(bath, self.delta_a, self.kappa, self.y)
    }

    /// Closed-form critical coupling `sqrt((delta_a^2 + kappa^2) omega_b / delta_a)`.
    pub fn critical_coupling(&self) -> f64 {
        ((self.delta_a * self.delta_a + self.kappa * self.kappa) * OMEGA_B / self.delta_a).sqrt()
    }

    /// Copy with `y = (1 - eps) * y_c`.
    pub fn at_reduced_coupling(&self, eps: f64) -> Result<Self> {
        self.with_y((1.0 - eps) * self.critical_coupling())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_integer_exponents() {
        assert!(matches!(
            BathParams::zero_temperature(1.0005, 0.1),
            Err(Error::IntegerExponent { .. })
        ));
        assert!(matches!(
            BathParams::zero_temperature(0.0004, 0.1),
            Err(Error::IntegerExponent { .. })
        ));
        assert!(BathParams::zero_temperature(1.0011, 0.1).is_ok());
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(BathParams::zero_temperature(2.2, 0.1).is_err());
        assert!(BathParams::zero_temperature(0.5, 0.0).is_err());
        assert!(BathParams::new(0.5, 0.1, 10.0, -1.0, 0.0).is_err());
        assert!(BathParams::new(0.5, 0.1, 10.0, 1.0, 0.0).is_err());
        assert!(BathParams::new(0.5, 0.1, 10.0, 1.0, -0.01).is_ok());
        assert!(BathParams::new(0.5, 0.1, 10.0, 0.0, 0.2).is_err());
        let bath = BathParams::zero_temperature(0.8, 0.1).unwrap();
        assert!(ModelParams::new(bath, 0.0, 0.5, 0.0).is_err());
        assert!(ModelParams::new(bath, 2.0, -0.5, 0.0).is_err());
        assert!(ModelParams::new(bath, 2.0, 0.5, -1.0).is_err());
        assert!(ModelParams::new(bath, 2.0, 0.5, f64::NAN).is_err());
    }

    #[test]
    fn critical_coupling_values() {
        let bath = BathParams::zero_temperature(0.8, 0.1).unwrap();
        let p = ModelParams::new(bath, 2.0, 0.5, 0.0).unwrap();
        assert!((p.critical_coupling() - (4.25f64 / 2.0).sqrt()).abs() < 1e-15);
        let p = ModelParams::new(bath, 2.0, 2.0, 0.0).unwrap();
        assert!((p.critical_coupling() - 2.0).abs() < 1e-15);
        let p = ModelParams::new(bath, 3.0, 0.0, 0.0).unwrap();
        assert!((p.critical_coupling() - 3.0f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn deserialization_validates() {
        let ok: std::result::Result<BathParams, _> =
            toml::from_str("s = 0.8\ngamma = 0.1\nomega_m = 10.0\ntemperature = 0.0\nmu = 0.0\n");
        assert!(ok.is_ok());
        let bad: std::result::Result<BathParams, _> =
            toml::from_str("s = 1.0\ngamma = 0.1\nomega_m = 10.0\ntemperature = 0.0\nmu = 0.0\n");
        assert!(bad.is_err());
    }
}
