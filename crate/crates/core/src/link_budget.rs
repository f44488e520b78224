//! Receiver noise power and minimum receiver input power, following the
//! usual DTV planning procedure `Pn = F + 10 log10(k T0 B)`.

use serde::Serialize;

use crate::propagation::DBM_PER_DBW;
use crate::{Error, Result};

/// Boltzmann constant, J/K (exact SI value).
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Reference noise temperature, K.
pub const T0_KELVIN: f64 = 290.0;

/// Noise bandwidth of an 8 MHz DVB-T channel, Hz.
pub const DVB_T_8MHZ_BANDWIDTH_HZ: f64 = 7.61e6;

/// Receiver noise figure assumed for consumer DTV receivers, dB.
pub const DEFAULT_NOISE_FIGURE_DB: f64 = 7.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinkBudget {
    pub noise_figure_db: f64,
    pub bandwidth_hz: f64,
    pub required_cn_db: f64,
    pub noise_power_dbw: f64,
    pub min_input_dbm: f64,
}

impl LinkBudget {
    pub fn new(noise_figure_db: f64, bandwidth_hz: f64, required_cn_db: f64) -> Result<Self> {
        let noise_power_dbw = noise_power(noise_figure_db, bandwidth_hz)?;
        Ok(LinkBudget {
            noise_figure_db,
            bandwidth_hz,
            required_cn_db,
            noise_power_dbw,
            min_input_dbm: noise_power_dbw + required_cn_db + DBM_PER_DBW,
        })
    }
}

/// Receiver noise input power in dBW.
pub fn noise_power(noise_figure_db: f64, bandwidth_hz: f64) -> Result<f64> {
    if !(bandwidth_hz.is_finite() && bandwidth_hz > 0.0) {
        return Err(Error::domain(format!(
            "bandwidth must be positive, got {bandwidth_hz} Hz"
        )));
    }
    if !noise_figure_db.is_finite() {
        return Err(Error::domain("noise figure must be finite"));
    }
    Ok(noise_figure_db + 10.0 * (BOLTZMANN * T0_KELVIN * bandwidth_hz).log10())
}

/// Minimum receiver input power in dBm for a required C/N.
pub fn min_input_power(
    noise_figure_db: f64,
    bandwidth_hz: f64,
    required_cn_db: f64,
) -> Result<f64> {
    Ok(LinkBudget::new(noise_figure_db, bandwidth_hz, required_cn_db)?.min_input_dbm)
}
