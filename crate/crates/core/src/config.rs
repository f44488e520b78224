//! JSON configuration for grid simulations.
//!
//! A config file has five sections: `scenario`, `propagation`, `ccpr`,
//! `linkbudget` and `output`. Unknown keys are rejected everywhere. The
//! document resolves into a [`Scenario`] by looking up protection ratios for
//! each transmitter's mode and deriving the noise floor from the link budget.

use serde::{Deserialize, Serialize};
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use crate::ccpr::{self, CcprKey, Channel, Source};
use crate::gridsim::{
    self, ClassStats, GridMap, GridSpec, Polygon, RasterFormat, Scenario, ShadowingMode,
    Transmitter, DEFAULT_MAX_CELLS,
};
use crate::link_budget::{self, DEFAULT_NOISE_FIGURE_DB, DVB_T_8MHZ_BANDWIDTH_HZ};
use crate::propagation::{Frequency, PathLossModel, PropagationParams};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub scenario: ScenarioSection,
    pub propagation: PropagationSection,
    #[serde(default)]
    pub ccpr: CcprSection,
    #[serde(default)]
    pub linkbudget: LinkBudgetSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSection {
    pub frequency_mhz: f64,
    pub transmitters: Vec<Transmitter>,
    pub grid: GridSpec,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub shadowing: ShadowingMode,
    #[serde(default = "default_location_pct")]
    pub location_variability_pct: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constant_pr_reg_dbm: Option<f64>,
    #[serde(default = "default_max_cells")]
    pub max_cells: u64,
}

fn default_location_pct() -> f64 {
    95.0
}

fn default_max_cells() -> u64 {
    DEFAULT_MAX_CELLS
}

/// Terrain-model inputs. Parsed and kept, but no built-in model uses them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct LongleyRiceInputs {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub permittivity: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conductivity_s_per_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface_refractivity: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub climate: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_variability_pct: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropagationSection {
    pub model: PathLossModel,
    #[serde(default = "default_d0")]
    pub d0_m: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pl0_db: Option<f64>,
    #[serde(default = "default_n")]
    pub n: f64,
    #[serde(default)]
    pub sigma_db: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub longley_rice: Option<LongleyRiceInputs>,
}

fn default_d0() -> f64 {
    1.0
}

fn default_n() -> f64 {
    2.0
}

impl PropagationSection {
    pub fn params(&self) -> PropagationParams {
        PropagationParams {
            model: self.model,
            d0: self.d0_m,
            pl0: self.pl0_db,
            n: self.n,
            sigma: self.sigma_db,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CcprSection {
    #[serde(default = "default_channel")]
    pub channel: Channel,
    #[serde(default = "default_source")]
    pub source: Source,
    /// Replaces the table value for the regular transmitter's mode.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_reg_db: Option<f64>,
    /// Replaces the table value for the rogue transmitter's mode.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_rogue_db: Option<f64>,
}

fn default_channel() -> Channel {
    Channel::Ricean
}

fn default_source() -> Source {
    Source::M1
}

impl Default for CcprSection {
    fn default() -> Self {
        CcprSection {
            channel: default_channel(),
            source: default_source(),
            alpha_reg_db: None,
            alpha_rogue_db: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkBudgetSection {
    /// When false, the no-service class is never assigned.
    #[serde(default = "yes")]
    pub enabled: bool,
    #[serde(default = "default_nf")]
    pub noise_figure_db: f64,
    #[serde(default = "default_bw")]
    pub bandwidth_hz: f64,
    /// Defaults to the measured minimum C/N of the regular transmitter's mode.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub required_cn_db: Option<f64>,
}

fn yes() -> bool {
    true
}

fn default_nf() -> f64 {
    DEFAULT_NOISE_FIGURE_DB
}

fn default_bw() -> f64 {
    DVB_T_8MHZ_BANDWIDTH_HZ
}

impl Default for LinkBudgetSection {
    fn default() -> Self {
        LinkBudgetSection {
            enabled: true,
            noise_figure_db: DEFAULT_NOISE_FIGURE_DB,
            bandwidth_hz: DVB_T_8MHZ_BANDWIDTH_HZ,
            required_cn_db: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raster: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raster_format: Option<RasterFormat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stats: Option<PathBuf>,
    /// Area of interest for the statistics, in grid coordinates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<Polygon>,
}

/// Values that can be set from the command line on top of a config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub resolution_m: Option<f64>,
    pub frequency_mhz: Option<f64>,
    pub n: Option<f64>,
    pub sigma_db: Option<f64>,
    pub alpha_reg_db: Option<f64>,
    pub alpha_rogue_db: Option<f64>,
    pub noise_figure_db: Option<f64>,
    pub location_variability_pct: Option<f64>,
    pub shadowing: Option<ShadowingMode>,
    pub max_cells: Option<u64>,
    pub raster: Option<PathBuf>,
    pub raster_format: Option<RasterFormat>,
    pub stats: Option<PathBuf>,
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Json {
            what: "config".into(),
            source: e,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn apply(&mut self, o: &Overrides) {
        let s = &mut self.scenario;
        if let Some(v) = o.seed {
            s.seed = v;
        }
        if let Some(v) = o.resolution_m {
            s.grid.resolution_m = v;
        }
        if let Some(v) = o.frequency_mhz {
            s.frequency_mhz = v;
        }
        if let Some(v) = o.location_variability_pct {
            s.location_variability_pct = v;
        }
        if let Some(v) = o.shadowing {
            s.shadowing = v;
        }
        if let Some(v) = o.max_cells {
            s.max_cells = v;
        }
        if let Some(v) = o.n {
            self.propagation.n = v;
        }
        if let Some(v) = o.sigma_db {
            self.propagation.sigma_db = v;
        }
        if let Some(v) = o.alpha_reg_db {
            self.ccpr.alpha_reg_db = Some(v);
        }
        if let Some(v) = o.alpha_rogue_db {
            self.ccpr.alpha_rogue_db = Some(v);
        }
        if let Some(v) = o.noise_figure_db {
            self.linkbudget.noise_figure_db = v;
        }
        if let Some(v) = &o.raster {
            self.output.raster = Some(v.clone());
        }
        if let Some(v) = o.raster_format {
            self.output.raster_format = Some(v);
        }
        if let Some(v) = &o.stats {
            self.output.stats = Some(v.clone());
        }
    }

    /// Build the simulation scenario, resolving table values.
    pub fn scenario(&self) -> Result<Scenario> {
        let sc = &self.scenario;
        let frequency = Frequency::from_mhz(sc.frequency_mhz)?;
        let find = |role: gridsim::Role| {
            sc.transmitters
                .iter()
                .find(|t| t.role == role)
                .ok_or_else(|| Error::Config(format!("no {role:?} transmitter").to_lowercase()))
        };
        let regular = find(gridsim::Role::Regular)?;
        let rogue = find(gridsim::Role::Rogue)?;
        let table = |t: &Transmitter| -> Result<f64> {
            Ok(ccpr::require(CcprKey::new(t.mode, self.ccpr.channel, self.ccpr.source))?.db())
        };
        let alpha_reg_db = match self.ccpr.alpha_reg_db {
            Some(v) => v,
            None => table(regular)?,
        };
        let alpha_rogue_db = match self.ccpr.alpha_rogue_db {
            Some(v) => v,
            None => table(rogue)?,
        };
        let lb = &self.linkbudget;
        let noise_floor_dbm = if lb.enabled {
            let cn = match lb.required_cn_db {
                Some(v) => v,
                None => {
                    ccpr::require(CcprKey::new(regular.mode, self.ccpr.channel, Source::M1))?.db()
                }
            };
            link_budget::min_input_power(lb.noise_figure_db, lb.bandwidth_hz, cn)?
        } else {
            f64::NEG_INFINITY
        };
        let s = Scenario {
            transmitters: sc.transmitters.clone(),
            frequency,
            propagation: self.propagation.params(),
            alpha_reg_db,
            alpha_rogue_db,
            noise_floor_dbm,
            grid: sc.grid,
            seed: sc.seed,
            shadowing: sc.shadowing,
            location_variability_pct: sc.location_variability_pct,
            constant_pr_reg_dbm: sc.constant_pr_reg_dbm,
            max_cells: sc.max_cells,
        };
        s.validate()?;
        Ok(s)
    }

    fn raster_format(&self) -> RasterFormat {
        if let Some(f) = self.output.raster_format {
            return f;
        }
        match self.output.raster.as_ref().and_then(|p| p.extension()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => RasterFormat::Csv,
            _ => RasterFormat::Pgm,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimulationRun {
    pub map: GridMap,
    pub stats: ClassStats,
}

/// Simulate, compute statistics and write whatever outputs the config names.
/// `threads = 0` uses the global pool.
pub fn run(cfg: &Config, threads: usize) -> Result<SimulationRun> {
    let scenario = cfg.scenario()?;
    let map = gridsim::simulate_with_threads(&scenario, threads)?;
    let stats = gridsim::statistics(&map, cfg.output.region.as_ref())?;
    if let Some(path) = &cfg.output.raster {
        gridsim::write_raster(&map, path, cfg.raster_format())?;
    }
    if let Some(path) = &cfg.output.stats {
        let f = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(f);
        std::io::Write::write_all(&mut w, stats.to_json().as_bytes())
            .and_then(|_| std::io::Write::write_all(&mut w, b"\n"))
            .and_then(|_| std::io::Write::flush(&mut w))
            .map_err(|e| Error::io(path, e))?;
    }
    Ok(SimulationRun { map, stats })
}
