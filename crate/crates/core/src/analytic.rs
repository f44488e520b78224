//! Closed-form attack geometry.
//!
//! With the regular signal taken as constant over the attacked area, a
//! receiver at distance `d` from the rogue transmitter decodes the rogue
//! signal while `Pt,rogue - PL(d) >= Pr,reg + alpha_rogue`, and decodes the
//! regular signal again once `Pr,reg >= Pt,rogue - PL(d) + alpha_reg`. The
//! first bound gives the controlled radius, the second the radius of the
//! affected disc; the annulus between them is the mush zone.

use serde::Serialize;
use std::f64::consts::PI;

use crate::propagation::{self, Distance, Frequency, PathLossModel, PropagationParams};
use crate::{Error, Result};

/// Wanted-over-unwanted reception test. The threshold is inclusive.
pub fn can_receive(pr_wanted_dbm: f64, pr_unwanted_dbm: f64, alpha_wanted_db: f64) -> bool {
    pr_wanted_dbm >= pr_unwanted_dbm + alpha_wanted_db
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttackGeometry {
    pub pt_rogue_dbm: f64,
    /// Regular-signal level, assumed constant over the attacked area.
    pub pr_reg_dbm: f64,
    pub alpha_rogue_db: f64,
    pub alpha_reg_db: f64,
    pub params: PropagationParams,
    pub frequency: Frequency,
}

impl AttackGeometry {
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if !(self.alpha_rogue_db >= 0.0 && self.alpha_reg_db >= 0.0) {
            return Err(Error::domain("protection ratios must be non-negative"));
        }
        if !(self.pt_rogue_dbm.is_finite() && self.pr_reg_dbm.is_finite()) {
            return Err(Error::domain("powers must be finite"));
        }
        Ok(())
    }

    /// Non-fatal oddities worth surfacing to a user.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.pr_reg_dbm >= self.pt_rogue_dbm {
            w.push(format!(
                "regular level {} dBm is not below the rogue transmit power {} dBm",
                self.pr_reg_dbm, self.pt_rogue_dbm
            ));
        }
        w
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AreaReport {
    pub d_rogue_m: f64,
    pub a_rogue_m2: f64,
    pub d_reg_m: f64,
    pub radius_ratio: f64,
    pub controlled_fraction: f64,
    pub mush_fraction: f64,
}

/// Largest distance at which the mean path loss stays within `budget_db`.
///
/// Under the log-distance model a distance inside `d0` is reported as
/// [`Error::BelowReferenceDistance`] instead of being clamped.
pub fn range_for_loss(budget_db: f64, params: &PropagationParams, f: Frequency) -> Result<f64> {
    params.validate()?;
    let free_space = |loss: f64| f.wavelength_m() / (4.0 * PI) * 10f64.powf(loss / 20.0);
    match params.model {
        PathLossModel::Fspl => Ok(free_space(budget_db)),
        PathLossModel::LogDistance => {
            let pl0 = params.resolved_pl0(f)?;
            let d = params.d0 * 10f64.powf((budget_db - pl0) / (10.0 * params.n));
            if d < params.d0 {
                Err(Error::BelowReferenceDistance {
                    d_rogue: d,
                    d0: params.d0,
                })
            } else {
                Ok(d)
            }
        }
        PathLossModel::TwoSlope => {
            let pl0 = params.resolved_pl0(f)?;
            if budget_db >= pl0 {
                Ok(params.d0 * 10f64.powf((budget_db - pl0) / (10.0 * params.n)))
            } else {
                // an explicit pl0 above free space leaves a step at d0
                Ok(free_space(budget_db).min(params.d0))
            }
        }
    }
}

/// Maximum distance from the rogue transmitter at which it is decodable.
pub fn max_attack_radius(g: &AttackGeometry) -> Result<f64> {
    g.validate()?;
    range_for_loss(
        g.pt_rogue_dbm - g.pr_reg_dbm - g.alpha_rogue_db,
        &g.params,
        g.frequency,
    )
}

/// The same radius written directly in terms of wavelength, for a
/// log-distance model whose reference loss is free space at `d0`:
/// `d0 (lambda / (4 pi d0))^(2/n) 10^((Pt - Pr - alpha) / (10 n))`.
pub fn max_attack_radius_free_space_reference(
    pt_rogue_dbm: f64,
    pr_reg_dbm: f64,
    alpha_rogue_db: f64,
    n: f64,
    d0: f64,
    f: Frequency,
) -> f64 {
    d0 * (f.wavelength_m() / (4.0 * PI * d0)).powf(2.0 / n)
        * 10f64.powf((pt_rogue_dbm - pr_reg_dbm - alpha_rogue_db) / (10.0 * n))
}

/// Radius of the affected disc: beyond it the regular signal regains its
/// protection ratio over the rogue one.
pub fn affected_radius(g: &AttackGeometry) -> Result<f64> {
    g.validate()?;
    let budget = g.pt_rogue_dbm - g.pr_reg_dbm + g.alpha_reg_db;
    range_for_loss(budget, &g.params, g.frequency)
}

pub fn controlled_area(d_rogue_m: f64) -> f64 {
    PI * d_rogue_m * d_rogue_m
}

/// Rogue transmit power needed to control a disc of radius `d_rogue_m`.
pub fn required_power(d_rogue_m: f64, g: &AttackGeometry) -> Result<f64> {
    g.validate()?;
    let pl = propagation::mean_path_loss(Distance::from_m(d_rogue_m)?, &g.params, g.frequency)?;
    Ok(g.pr_reg_dbm + g.alpha_rogue_db + pl)
}

/// `d_rogue / d_reg = 10^(-(alpha_rogue + alpha_reg) / (10 n))`.
pub fn radius_ratio(alpha_rogue_db: f64, alpha_reg_db: f64, n: f64) -> Result<f64> {
    check_exponent(n)?;
    Ok(10f64.powf(-(alpha_rogue_db + alpha_reg_db) / (10.0 * n)))
}

/// `A_controlled / A_affected = 10^(-(alpha_rogue + alpha_reg) / (5 n))`.
pub fn area_fraction(alpha_rogue_db: f64, alpha_reg_db: f64, n: f64) -> Result<f64> {
    check_exponent(n)?;
    Ok(10f64.powf(-(alpha_rogue_db + alpha_reg_db) / (5.0 * n)))
}

/// How many times larger the mush zone is than the controlled area.
pub fn mush_multiple(controlled_fraction: f64) -> f64 {
    1.0 / controlled_fraction - 1.0
}

fn check_exponent(n: f64) -> Result<()> {
    if n.is_finite() && n >= 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "path-loss exponent must be >= 1, got {n}"
        )))
    }
}

/// Controlled and affected radii plus the derived area split.
pub fn area_report(g: &AttackGeometry) -> Result<AreaReport> {
    let d_rogue = max_attack_radius(g)?;
    let d_reg = affected_radius(g)?;
    let radius_ratio = d_rogue / d_reg;
    let controlled_fraction = radius_ratio * radius_ratio;
    Ok(AreaReport {
        d_rogue_m: d_rogue,
        a_rogue_m2: controlled_area(d_rogue),
        d_reg_m: d_reg,
        radius_ratio,
        controlled_fraction,
        mush_fraction: 1.0 - controlled_fraction,
    })
}
