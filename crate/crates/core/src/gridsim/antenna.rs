use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::{Error, Result};

/// Half-wave dipole gain over isotropic, dB.
pub const DBD_TO_DBI: f64 = 2.15;

/// Width of the transition between main and back lobe, degrees.
pub const TAPER_DEG: f64 = 10.0;

/// Transmit antenna pattern, relative to the main-lobe gain already folded
/// into the transmitter's ERP.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Antenna {
    Omni,
    /// Flat main lobe of `beamwidth_deg` centred on `bearing_deg` (clockwise
    /// from +y), flat back lobe at `-front_to_back_db`, joined by a
    /// raised-cosine taper in dB over [`TAPER_DEG`].
    Directive {
        bearing_deg: f64,
        beamwidth_deg: f64,
        front_to_back_db: f64,
    },
}

impl Antenna {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Antenna::Omni => Ok(()),
            Antenna::Directive {
                bearing_deg,
                beamwidth_deg,
                front_to_back_db,
            } => {
                if !(beamwidth_deg > 0.0 && beamwidth_deg < 360.0) {
                    return Err(Error::InvalidScenario(format!(
                        "beamwidth must lie in (0, 360) degrees, got {beamwidth_deg}"
                    )));
                }
                if !(bearing_deg.is_finite()
                    && front_to_back_db.is_finite()
                    && front_to_back_db >= 0.0)
                {
                    return Err(Error::InvalidScenario(
                        "directive antenna needs a finite bearing and a non-negative front-to-back ratio".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    /// Gain towards `bearing_deg` relative to the main lobe, dB (<= 0).
    pub fn relative_gain_db(&self, bearing_deg: f64) -> f64 {
        match *self {
            Antenna::Omni => 0.0,
            Antenna::Directive {
                bearing_deg: boresight,
                beamwidth_deg,
                front_to_back_db,
            } => {
                let off = angular_offset_deg(bearing_deg, boresight);
                let half = beamwidth_deg / 2.0;
                if off <= half {
                    0.0
                } else if off >= half + TAPER_DEG {
                    -front_to_back_db
                } else {
                    let t = (off - half) / TAPER_DEG;
                    -front_to_back_db * (1.0 - (PI * t).cos()) / 2.0
                }
            }
        }
    }
}

/// Compass bearing from `(x0, y0)` to `(x1, y1)`: degrees clockwise from +y.
pub fn bearing_deg(x0: f64, y0: f64, x1: f64, y1: f64) -> f64 {
    let b = (x1 - x0).atan2(y1 - y0).to_degrees();
    if b < 0.0 {
        b + 360.0
    } else {
        b
    }
}

/// Absolute angular separation in [0, 180].
fn angular_offset_deg(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(360.0);
    if d > 180.0 {
        360.0 - d
    } else {
        d
    }
}
