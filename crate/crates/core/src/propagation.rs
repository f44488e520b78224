//! Path loss and received power.
//!
//! Three large-scale models are built in:
//!
//! * [`PathLossModel::Fspl`]: free-space loss, `20 log10(4 pi d / lambda)`.
//! * [`PathLossModel::LogDistance`]: `PL0 + 10 n log10(d / d0)`, defined only
//!   for `d >= d0`.
//! * [`PathLossModel::TwoSlope`]: free space up to `d0`, log-distance with
//!   exponent `n` beyond it.
//!
//! Log-normal shadowing is added by the caller through an explicit unit-normal
//! draw so every stochastic result is reproducible from a seed.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Offset between dBm and dBW.
pub const DBM_PER_DBW: f64 = 30.0;

/// Carrier frequency in MHz.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Frequency(f64);

impl Frequency {
    pub fn from_mhz(mhz: f64) -> Result<Self> {
        if mhz.is_finite() && mhz > 0.0 {
            Ok(Frequency(mhz))
        } else {
            Err(Error::domain(format!(
                "frequency must be positive, got {mhz} MHz"
            )))
        }
    }

    pub fn mhz(self) -> f64 {
        self.0
    }

    pub fn hz(self) -> f64 {
        self.0 * 1e6
    }

    pub fn wavelength_m(self) -> f64 {
        SPEED_OF_LIGHT / self.hz()
    }
}

impl TryFrom<f64> for Frequency {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        Frequency::from_mhz(v)
    }
}

impl From<Frequency> for f64 {
    fn from(f: Frequency) -> f64 {
        f.0
    }
}

/// Non-negative distance in meters.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Distance(f64);

impl Distance {
    pub fn from_m(m: f64) -> Result<Self> {
        if m.is_finite() && m >= 0.0 {
            Ok(Distance(m))
        } else {
            Err(Error::domain(format!(
                "distance must be non-negative, got {m} m"
            )))
        }
    }

    pub fn m(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Distance {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        Distance::from_m(v)
    }
}

impl From<Distance> for f64 {
    fn from(d: Distance) -> f64 {
        d.0
    }
}

/// Unit tag for power values crossing an API boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PowerUnit {
    #[serde(rename = "dBm")]
    Dbm,
    #[serde(rename = "dBW")]
    Dbw,
}

/// A power level, stored in dBm.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct PowerLevel(f64);

impl PowerLevel {
    pub fn dbm(value: f64) -> Self {
        PowerLevel(value)
    }

    pub fn dbw(value: f64) -> Self {
        PowerLevel(value + DBM_PER_DBW)
    }

    pub fn new(value: f64, unit: PowerUnit) -> Self {
        match unit {
            PowerUnit::Dbm => Self::dbm(value),
            PowerUnit::Dbw => Self::dbw(value),
        }
    }

    pub fn as_dbm(self) -> f64 {
        self.0
    }

    pub fn as_dbw(self) -> f64 {
        self.0 - DBM_PER_DBW
    }

    pub fn in_unit(self, unit: PowerUnit) -> f64 {
        match unit {
            PowerUnit::Dbm => self.as_dbm(),
            PowerUnit::Dbw => self.as_dbw(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathLossModel {
    Fspl,
    LogDistance,
    TwoSlope,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropagationParams {
    pub model: PathLossModel,
    /// Reference distance in meters. Ignored by the free-space model.
    #[serde(rename = "d0_m", default = "default_d0")]
    pub d0: f64,
    /// Reference path loss at `d0` in dB. When absent, free-space loss at
    /// `d0` is used.
    #[serde(rename = "pl0_db", default, skip_serializing_if = "Option::is_none")]
    pub pl0: Option<f64>,
    /// Path-loss exponent.
    #[serde(default = "default_exponent")]
    pub n: f64,
    /// Shadowing standard deviation in dB.
    #[serde(rename = "sigma_db", default)]
    pub sigma: f64,
}

fn default_d0() -> f64 {
    1.0
}

fn default_exponent() -> f64 {
    2.0
}

impl PropagationParams {
    pub fn fspl() -> Self {
        PropagationParams {
            model: PathLossModel::Fspl,
            d0: 1.0,
            pl0: None,
            n: 2.0,
            sigma: 0.0,
        }
    }

    pub fn log_distance(d0: f64, n: f64) -> Self {
        PropagationParams {
            model: PathLossModel::LogDistance,
            d0,
            pl0: None,
            n,
            sigma: 0.0,
        }
    }

    pub fn two_slope(d0: f64, n: f64) -> Self {
        PropagationParams {
            model: PathLossModel::TwoSlope,
            ..Self::log_distance(d0, n)
        }
    }

    pub fn with_pl0(mut self, pl0: f64) -> Self {
        self.pl0 = Some(pl0);
        self
    }

    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.sigma = sigma;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma.is_finite() && self.sigma >= 0.0) {
            return Err(Error::domain(format!(
                "sigma must be >= 0, got {}",
                self.sigma
            )));
        }
        match self.model {
            PathLossModel::Fspl => {
                if self.n != 2.0 || self.sigma != 0.0 {
                    return Err(Error::domain(
                        "free-space model requires n = 2 and sigma = 0; use log_distance for shadowing",
                    ));
                }
            }
            PathLossModel::LogDistance | PathLossModel::TwoSlope => {
                if !(self.d0.is_finite() && self.d0 > 0.0) {
                    return Err(Error::domain(format!(
                        "d0 must be positive, got {}",
                        self.d0
                    )));
                }
                if !(self.n.is_finite() && self.n >= 1.0) {
                    return Err(Error::domain(format!(
                        "path-loss exponent must be >= 1, got {}",
                        self.n
                    )));
                }
            }
        }
        if let Some(pl0) = self.pl0 {
            if !pl0.is_finite() {
                return Err(Error::domain("pl0 must be finite"));
            }
        }
        Ok(())
    }

    /// Effective exponent: 2 for free space.
    pub fn exponent(&self) -> f64 {
        match self.model {
            PathLossModel::Fspl => 2.0,
            _ => self.n,
        }
    }

    /// Reference loss at `d0`, falling back to free space.
    pub fn resolved_pl0(&self, f: Frequency) -> Result<f64> {
        match self.pl0 {
            Some(v) => Ok(v),
            None => fspl(Distance::from_m(self.d0)?, f),
        }
    }
}

/// Free-space path loss in dB.
pub fn fspl(d: Distance, f: Frequency) -> Result<f64> {
    if d.m() <= 0.0 {
        return Err(Error::domain("free-space path loss undefined at d = 0"));
    }
    Ok(20.0 * (4.0 * PI * d.m() / f.wavelength_m()).log10())
}

/// Large-scale average path loss in dB.
pub fn mean_path_loss(d: Distance, p: &PropagationParams, f: Frequency) -> Result<f64> {
    p.validate()?;
    match p.model {
        PathLossModel::Fspl => fspl(d, f),
        PathLossModel::TwoSlope if d.m() < p.d0 => fspl(d, f),
        PathLossModel::LogDistance if d.m() < p.d0 => Err(Error::domain(format!(
            "d = {} m lies inside the reference distance d0 = {} m of the log-distance model",
            d.m(),
            p.d0
        ))),
        PathLossModel::LogDistance | PathLossModel::TwoSlope => {
            let pl0 = p.resolved_pl0(f)?;
            Ok(pl0 + 10.0 * p.n * (d.m() / p.d0).log10())
        }
    }
}

/// Mean path loss plus `sigma * draw`, where `draw` is a unit-normal sample.
pub fn shadowed_path_loss(
    d: Distance,
    p: &PropagationParams,
    f: Frequency,
    draw: f64,
) -> Result<f64> {
    let mean = mean_path_loss(d, p, f)?;
    if p.sigma == 0.0 {
        return Ok(mean);
    }
    Ok(mean + p.sigma * draw)
}

pub fn received_power(pt: PowerLevel, pl: f64) -> PowerLevel {
    PowerLevel::dbm(pt.as_dbm() - pl)
}
