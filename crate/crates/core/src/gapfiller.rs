//! Capture of an on-channel repeater (gap filler).
//!
//! The attacker aims a directive antenna at the repeater's receive antenna.
//! The capture succeeds when the rogue signal exceeds the broadcaster's by the
//! required threshold while the composite input stays inside the repeater's
//! accepted input window; the repeater then re-radiates the rogue service
//! over its own coverage area.

use serde::{Deserialize, Serialize};

use crate::ccpr::{self, CcprKey, Channel, CodeRate, Modulation, Source, TransmissionMode};
use crate::gridsim::{self, ClassStats, Polygon, Scenario, DBD_TO_DBI};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GapFillerSpec {
    pub input_min_dbm: f64,
    pub input_max_dbm: f64,
    pub rx_antenna_gain_dbd: f64,
    pub output_erp_dbm: f64,
    pub mode: TransmissionMode,
}

impl Default for GapFillerSpec {
    /// 11 dBd receive antenna, 42 dBm output ERP, -77..-7 dBm input window,
    /// carrying DVB-T 64-QAM 2/3.
    fn default() -> Self {
        GapFillerSpec {
            input_min_dbm: -77.0,
            input_max_dbm: -7.0,
            rx_antenna_gain_dbd: 11.0,
            output_erp_dbm: 42.0,
            mode: TransmissionMode::dvb_t(Modulation::Qam64, CodeRate::R2_3),
        }
    }
}

impl GapFillerSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.input_min_dbm < self.input_max_dbm) {
            return Err(crate::Error::domain(format!(
                "gap-filler input window is empty: [{}, {}] dBm",
                self.input_min_dbm, self.input_max_dbm
            )));
        }
        Ok(())
    }
}

/// Signal levels at the repeater input.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapFillerAttackInput {
    /// Broadcaster at the gap-filler input.
    pub p_rbv_dbm: f64,
    /// Attacker at the gap-filler input.
    pub p_rav_dbm: f64,
    /// Broadcaster at the attacker's receive antenna; informational only.
    pub p_rba_dbm: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Success,
    InsufficientMargin,
    Saturation,
    BelowSensitivity,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Assessment {
    pub verdict: Verdict,
    pub margin_db: f64,
    pub combined_input_dbm: f64,
}

/// Where the capture threshold comes from.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Threshold {
    /// Minimum C/N of the repeater's mode on a Ricean channel (M1 values).
    #[default]
    CarrierToNoise,
    /// A co-channel protection ratio from the table.
    Ccpr {
        channel: Channel,
        source: Source,
    },
    Fixed(f64),
}

impl Threshold {
    pub fn resolve(self, mode: TransmissionMode) -> Result<f64> {
        match self {
            Threshold::CarrierToNoise => {
                Ok(ccpr::require(CcprKey::new(mode, Channel::Ricean, Source::M1))?.db())
            }
            Threshold::Ccpr { channel, source } => {
                Ok(ccpr::require(CcprKey::new(mode, channel, source))?.db())
            }
            Threshold::Fixed(v) => Ok(v),
        }
    }
}

/// Sum of two powers in linear units, dBm.
pub fn power_sum_dbm(a_dbm: f64, b_dbm: f64) -> f64 {
    let (hi, lo) = if a_dbm >= b_dbm {
        (a_dbm, b_dbm)
    } else {
        (b_dbm, a_dbm)
    };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + 10.0 * (1.0 + 10f64.powf((lo - hi) / 10.0)).log10()
}

/// The input window is judged on the composite level the repeater amplifies.
pub fn evaluate(spec: &GapFillerSpec, input: &GapFillerAttackInput, alpha_db: f64) -> Assessment {
    let margin_db = input.p_rav_dbm - input.p_rbv_dbm;
    let combined = power_sum_dbm(input.p_rav_dbm, input.p_rbv_dbm);
    let verdict = if combined > spec.input_max_dbm {
        Verdict::Saturation
    } else if combined < spec.input_min_dbm {
        Verdict::BelowSensitivity
    } else if margin_db >= alpha_db {
        Verdict::Success
    } else {
        Verdict::InsufficientMargin
    };
    Assessment {
        verdict,
        margin_db,
        combined_input_dbm: combined,
    }
}

/// Location of the repeater's receive antenna inside a grid scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapFillerSite {
    pub x_m: f64,
    pub y_m: f64,
    pub rx_antenna_gain_dbd: f64,
}

/// Mean input levels at the repeater for a scenario whose rogue transmitter is
/// the attacker. `attacker_rx_gain_dbd` is the gain of the antenna the
/// attacker uses to pick up the broadcast.
pub fn input_levels(
    s: &Scenario,
    site: &GapFillerSite,
    attacker_rx_gain_dbd: f64,
) -> Result<GapFillerAttackInput> {
    s.validate()?;
    let rx = site.rx_antenna_gain_dbd + DBD_TO_DBI;
    let reg = s.regular();
    let rogue = s.rogue();
    Ok(GapFillerAttackInput {
        p_rbv_dbm: s.mean_received_dbm(reg, site.x_m, site.y_m)? + rx,
        p_rav_dbm: s.mean_received_dbm(rogue, site.x_m, site.y_m)? + rx,
        p_rba_dbm: Some(
            s.mean_received_dbm(reg, rogue.x_m, rogue.y_m)? + attacker_rx_gain_dbd + DBD_TO_DBI,
        ),
    })
}

/// Collateral damage at the repeater's input frequency: class statistics of
/// the attacker's direct emission against end users of the main transmitter.
pub fn downstream_interference(s: &Scenario, region: Option<&Polygon>) -> Result<ClassStats> {
    let map = gridsim::simulate(s)?;
    gridsim::statistics(&map, region)
}
