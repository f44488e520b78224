//! Rasterized two-transmitter coverage simulation.
//!
//! Every cell of a rectangular grid receives the regular and the rogue signal
//! (ERP, antenna pattern and path loss from each transmitter) and is assigned
//! one [`CellClass`]. The simulation is deterministic for a given scenario:
//! shadowing draws are derived from the scenario seed, the transmitter id and
//! the cell index, so cells can be evaluated in any order on any number of
//! threads.

mod antenna;
mod raster;
mod stats;

pub use antenna::{bearing_deg, Antenna, DBD_TO_DBI, TAPER_DEG};
pub use raster::{read_csv, write_csv, write_pgm, write_raster, CsvCell, RasterFormat, CSV_HEADER};
pub use stats::{max_class_distance, statistics, ClassStats, Polygon};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::analytic::can_receive;
use crate::ccpr::TransmissionMode;
use crate::propagation::{self, Distance, Frequency, PropagationParams};
use crate::{Error, Result};

pub const DEFAULT_MAX_CELLS: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Regular,
    Rogue,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Transmitter {
    pub id: String,
    pub role: Role,
    pub x_m: f64,
    pub y_m: f64,
    pub erp_dbm: f64,
    #[serde(default = "omni")]
    pub antenna: Antenna,
    /// Free-form note such as "rooftop, 5 m a.g.l.".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub height_tag: Option<String>,
    pub mode: TransmissionMode,
    /// Overrides the scenario-wide propagation model for this transmitter.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub propagation: Option<PropagationParams>,
}

fn omni() -> Antenna {
    Antenna::Omni
}

impl Transmitter {
    /// Isotropic-equivalent main-lobe power.
    pub fn eirp_dbm(&self) -> f64 {
        self.erp_dbm + DBD_TO_DBI
    }
}

/// How log-normal shadowing enters the classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ShadowingMode {
    /// Mean path loss only.
    #[default]
    Mean,
    /// Independent normal draw per cell and transmitter.
    Random,
    /// Subtract `z * sigma` from each signal, `z` being the standard normal
    /// quantile of the location-variability percentage.
    Margin,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(default)]
    pub origin_x_m: f64,
    #[serde(default)]
    pub origin_y_m: f64,
    pub width_m: f64,
    pub height_m: f64,
    pub resolution_m: f64,
}

impl GridSpec {
    pub fn dims(&self) -> (usize, usize) {
        let nx = (self.width_m / self.resolution_m).ceil().max(1.0) as usize;
        let ny = (self.height_m / self.resolution_m).ceil().max(1.0) as usize;
        (nx, ny)
    }

    /// Square grid of side `2 * half_width_m` centred on `(cx, cy)`.
    pub fn centered(cx: f64, cy: f64, half_width_m: f64, resolution_m: f64) -> Self {
        GridSpec {
            origin_x_m: cx - half_width_m,
            origin_y_m: cy - half_width_m,
            width_m: 2.0 * half_width_m,
            height_m: 2.0 * half_width_m,
            resolution_m,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub transmitters: Vec<Transmitter>,
    pub frequency: Frequency,
    pub propagation: PropagationParams,
    pub alpha_reg_db: f64,
    pub alpha_rogue_db: f64,
    /// Minimum usable input power; `-inf` disables the no-service class.
    pub noise_floor_dbm: f64,
    pub grid: GridSpec,
    pub seed: u64,
    #[serde(default)]
    pub shadowing: ShadowingMode,
    #[serde(default = "default_location_pct")]
    pub location_variability_pct: f64,
    /// Replace the regular transmitter's field by a constant level.
    #[serde(default)]
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

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        let regulars = self
            .transmitters
            .iter()
            .filter(|t| t.role == Role::Regular)
            .count();
        let rogues = self
            .transmitters
            .iter()
            .filter(|t| t.role == Role::Rogue)
            .count();
        if regulars != 1 || rogues != 1 || self.transmitters.len() != 2 {
            return Err(Error::InvalidScenario(format!(
                "need exactly one regular and one rogue transmitter, got {regulars} regular / {rogues} rogue / {} total",
                self.transmitters.len()
            )));
        }
        for t in &self.transmitters {
            if !(t.erp_dbm.is_finite() && t.x_m.is_finite() && t.y_m.is_finite()) {
                return Err(Error::InvalidScenario(format!(
                    "transmitter '{}' has non-finite fields",
                    t.id
                )));
            }
            t.antenna.validate()?;
            self.params_for(t).validate()?;
        }
        self.propagation.validate()?;
        let g = &self.grid;
        if !(g.resolution_m.is_finite() && g.resolution_m > 0.0) {
            return Err(Error::InvalidScenario(
                "grid resolution must be positive".into(),
            ));
        }
        if !(g.width_m > 0.0 && g.height_m > 0.0 && g.width_m.is_finite() && g.height_m.is_finite())
        {
            return Err(Error::InvalidScenario(
                "grid extent must be positive".into(),
            ));
        }
        if !(self.alpha_reg_db >= 0.0 && self.alpha_rogue_db >= 0.0) {
            return Err(Error::InvalidScenario(
                "protection ratios must be non-negative".into(),
            ));
        }
        if self.noise_floor_dbm.is_nan() {
            return Err(Error::InvalidScenario("noise floor is NaN".into()));
        }
        if !(self.location_variability_pct > 0.0 && self.location_variability_pct < 100.0) {
            return Err(Error::InvalidScenario(
                "location variability must lie in (0, 100) %".into(),
            ));
        }
        let (nx, ny) = g.dims();
        let cells = nx as u64 * ny as u64;
        if cells > self.max_cells {
            return Err(Error::CellCapExceeded {
                cells,
                cap: self.max_cells,
            });
        }
        Ok(())
    }

    pub fn regular(&self) -> &Transmitter {
        self.transmitters
            .iter()
            .find(|t| t.role == Role::Regular)
            .expect("validated scenario has a regular transmitter")
    }

    pub fn rogue(&self) -> &Transmitter {
        self.transmitters
            .iter()
            .find(|t| t.role == Role::Rogue)
            .expect("validated scenario has a rogue transmitter")
    }

    pub fn params_for<'a>(&'a self, t: &'a Transmitter) -> &'a PropagationParams {
        t.propagation.as_ref().unwrap_or(&self.propagation)
    }

    fn margin_quantile(&self) -> f64 {
        Normal::new(0.0, 1.0)
            .expect("unit normal")
            .inverse_cdf(self.location_variability_pct / 100.0)
    }

    /// Mean received power from `t` at `(x, y)` without shadowing, dBm.
    pub fn mean_received_dbm(&self, t: &Transmitter, x: f64, y: f64) -> Result<f64> {
        let d = (x - t.x_m).hypot(y - t.y_m);
        let pl =
            propagation::mean_path_loss(Distance::from_m(d)?, self.params_for(t), self.frequency)?;
        Ok(t.eirp_dbm() + t.antenna.relative_gain_db(bearing_deg(t.x_m, t.y_m, x, y)) - pl)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CellClass {
    Regular,
    Rogue,
    MushRogueStronger,
    MushRegularStronger,
    NoService,
}

impl CellClass {
    pub const ALL: [CellClass; 5] = [
        CellClass::Regular,
        CellClass::Rogue,
        CellClass::MushRogueStronger,
        CellClass::MushRegularStronger,
        CellClass::NoService,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CellClass::Regular => "regular",
            CellClass::Rogue => "rogue",
            CellClass::MushRogueStronger => "mush_rogue_stronger",
            CellClass::MushRegularStronger => "mush_regular_stronger",
            CellClass::NoService => "no_service",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        CellClass::ALL.into_iter().find(|c| c.name() == s)
    }

    /// PGM gray level.
    pub fn gray(self) -> u8 {
        match self {
            CellClass::Regular => 200,
            CellClass::Rogue => 60,
            CellClass::MushRogueStronger => 20,
            CellClass::MushRegularStronger => 100,
            CellClass::NoService => 255,
        }
    }

    pub fn is_mush(self) -> bool {
        matches!(
            self,
            CellClass::MushRogueStronger | CellClass::MushRegularStronger
        )
    }
}

/// Three-way classification with the mush zone split by the stronger signal.
/// Thresholds are inclusive; rogue reception is tested first.
pub fn classify(
    pr_reg_dbm: f64,
    pr_rogue_dbm: f64,
    alpha_reg_db: f64,
    alpha_rogue_db: f64,
    noise_floor_dbm: f64,
) -> CellClass {
    if can_receive(pr_rogue_dbm, pr_reg_dbm, alpha_rogue_db) && pr_rogue_dbm >= noise_floor_dbm {
        CellClass::Rogue
    } else if can_receive(pr_reg_dbm, pr_rogue_dbm, alpha_reg_db) && pr_reg_dbm >= noise_floor_dbm {
        CellClass::Regular
    } else if pr_reg_dbm.max(pr_rogue_dbm) < noise_floor_dbm {
        CellClass::NoService
    } else if pr_rogue_dbm >= pr_reg_dbm {
        CellClass::MushRogueStronger
    } else {
        CellClass::MushRegularStronger
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub pr_reg_dbm: f64,
    pub pr_rogue_dbm: f64,
    pub class: CellClass,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridMap {
    pub nx: usize,
    pub ny: usize,
    /// Row-major, row 0 at the lowest y.
    pub cells: Vec<Cell>,
    pub scenario: Scenario,
    pub seed: u64,
}

impl GridMap {
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn cell(&self, i: usize, j: usize) -> &Cell {
        &self.cells[self.index(i, j)]
    }

    pub fn center(&self, i: usize, j: usize) -> (f64, f64) {
        cell_center(&self.scenario.grid, i, j)
    }

    pub fn centers(&self) -> impl Iterator<Item = ((f64, f64), &Cell)> + '_ {
        self.cells
            .iter()
            .enumerate()
            .map(move |(k, c)| (self.center(k % self.nx, k / self.nx), c))
    }
}

fn cell_center(g: &GridSpec, i: usize, j: usize) -> (f64, f64) {
    (
        g.origin_x_m + (i as f64 + 0.5) * g.resolution_m,
        g.origin_y_m + (j as f64 + 0.5) * g.resolution_m,
    )
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01B3)
    })
}

/// Unit-normal shadowing draw for one transmitter at one cell.
pub fn shadow_draw(seed: u64, transmitter_id: &str, cell_index: u64) -> f64 {
    keyed_draw(seed, fnv1a(transmitter_id), cell_index)
}

fn keyed_draw(seed: u64, tx_key: u64, cell_index: u64) -> f64 {
    let key = splitmix64(seed ^ splitmix64(tx_key ^ splitmix64(cell_index)));
    let mut rng = ChaCha8Rng::seed_from_u64(key);
    StandardNormal.sample(&mut rng)
}

struct Source<'a> {
    tx: &'a Transmitter,
    params: &'a PropagationParams,
    eirp: f64,
    tx_key: u64,
}

impl<'a> Source<'a> {
    fn new(s: &'a Scenario, tx: &'a Transmitter) -> Self {
        Source {
            tx,
            params: s.params_for(tx),
            eirp: tx.eirp_dbm(),
            tx_key: fnv1a(&tx.id),
        }
    }

    fn received(
        &self,
        s: &Scenario,
        x: f64,
        y: f64,
        cell_index: u64,
        margin_z: f64,
    ) -> Result<f64> {
        let floor = s.grid.resolution_m / 2.0;
        let d = (x - self.tx.x_m).hypot(y - self.tx.y_m).max(floor);
        let mut pl = propagation::mean_path_loss(Distance::from_m(d)?, self.params, s.frequency)?;
        let sigma = self.params.sigma;
        if sigma > 0.0 {
            match s.shadowing {
                ShadowingMode::Mean => {}
                ShadowingMode::Random => pl += sigma * keyed_draw(s.seed, self.tx_key, cell_index),
                ShadowingMode::Margin => pl += margin_z * sigma,
            }
        }
        let gain = self
            .tx
            .antenna
            .relative_gain_db(bearing_deg(self.tx.x_m, self.tx.y_m, x, y));
        Ok(self.eirp + gain - pl)
    }
}

/// Run the simulation on the global rayon pool.
pub fn simulate(s: &Scenario) -> Result<GridMap> {
    s.validate()?;
    let (nx, ny) = s.grid.dims();
    let margin_z = s.margin_quantile();
    let reg = Source::new(s, s.regular());
    let rogue = Source::new(s, s.rogue());

    let cells = (0..nx * ny)
        .into_par_iter()
        .map(|k| {
            let (x, y) = cell_center(&s.grid, k % nx, k / nx);
            let pr_reg = match s.constant_pr_reg_dbm {
                Some(level) => match s.shadowing {
                    ShadowingMode::Margin => level - margin_z * reg.params.sigma,
                    _ => level,
                },
                None => reg.received(s, x, y, k as u64, margin_z)?,
            };
            let pr_rogue = rogue.received(s, x, y, k as u64, margin_z)?;
            Ok(Cell {
                pr_reg_dbm: pr_reg,
                pr_rogue_dbm: pr_rogue,
                class: classify(
                    pr_reg,
                    pr_rogue,
                    s.alpha_reg_db,
                    s.alpha_rogue_db,
                    s.noise_floor_dbm,
                ),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(GridMap {
        nx,
        ny,
        cells,
        scenario: s.clone(),
        seed: s.seed,
    })
}

/// Run the simulation on a dedicated pool of `threads` workers (0 = rayon's
/// default pool).
pub fn simulate_with_threads(s: &Scenario, threads: usize) -> Result<GridMap> {
    if threads == 0 {
        return simulate(s);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidScenario(format!("cannot start worker pool: {e}")))?;
    pool.install(|| simulate(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{self, AttackGeometry};
    use crate::ccpr::{CodeRate, Modulation};

    const MODE: TransmissionMode = TransmissionMode::dvb_t(Modulation::Qam16, CodeRate::R2_3);

    fn tx(id: &str, role: Role, x: f64, y: f64, erp: f64) -> Transmitter {
        Transmitter {
            id: id.into(),
            role,
            x_m: x,
            y_m: y,
            erp_dbm: erp,
            antenna: Antenna::Omni,
            height_tag: None,
            mode: MODE,
            propagation: None,
        }
    }

    /// Rogue at the origin radiating 30 dBm isotropic against a constant
    /// -50 dBm regular level at 500 MHz.
    fn oracle_scenario(resolution: f64, half_width: f64) -> Scenario {
        Scenario {
            transmitters: vec![
                tx("broadcaster", Role::Regular, 50_000.0, 0.0, 60.0),
                tx("rogue", Role::Rogue, 0.0, 0.0, 30.0 - DBD_TO_DBI),
            ],
            frequency: Frequency::from_mhz(500.0).unwrap(),
            propagation: PropagationParams::fspl(),
            alpha_reg_db: 10.0,
            alpha_rogue_db: 10.0,
            noise_floor_dbm: f64::NEG_INFINITY,
            grid: GridSpec::centered(0.0, 0.0, half_width, resolution),
            seed: 1,
            shadowing: ShadowingMode::Mean,
            location_variability_pct: 95.0,
            constant_pr_reg_dbm: Some(-50.0),
            max_cells: DEFAULT_MAX_CELLS,
        }
    }

    #[test]
    fn classify_rules() {
        assert_eq!(classify(-70.0, -47.0, 15.0, 15.0, -90.0), CellClass::Rogue);
        assert_eq!(
            classify(-47.0, -70.0, 15.0, 15.0, -90.0),
            CellClass::Regular
        );
        assert_eq!(
            classify(-60.0, -55.0, 10.0, 10.0, -90.0),
            CellClass::MushRogueStronger
        );
        assert_eq!(
            classify(-55.0, -60.0, 10.0, 10.0, -90.0),
            CellClass::MushRegularStronger
        );
        assert_eq!(
            classify(-95.0, -99.0, 10.0, 10.0, -90.0),
            CellClass::NoService
        );
        // exact threshold counts as reception
        assert_eq!(classify(-60.0, -50.0, 10.0, 10.0, -90.0), CellClass::Rogue);
        // equal strength resolves to the rogue-stronger mush subclass
        assert_eq!(
            classify(-60.0, -60.0, 10.0, 10.0, -90.0),
            CellClass::MushRogueStronger
        );
        // rogue strong enough over the regular signal but under the floor
        assert_eq!(
            classify(-120.0, -95.0, 10.0, 10.0, -90.0),
            CellClass::NoService
        );
    }

    #[test]
    fn rogue_disc_matches_analytic_radius() {
        let g = AttackGeometry {
            pt_rogue_dbm: 30.0,
            pr_reg_dbm: -50.0,
            alpha_rogue_db: 10.0,
            alpha_reg_db: 10.0,
            params: PropagationParams::fspl(),
            frequency: Frequency::from_mhz(500.0).unwrap(),
        };
        let d_rogue = analytic::max_attack_radius(&g).unwrap();
        let d_reg = analytic::affected_radius(&g).unwrap();
        let res = d_rogue / 20.0;
        let map = simulate(&oracle_scenario(res, 1.1 * d_reg)).unwrap();
        let r = max_class_distance(&map, CellClass::Rogue, (0.0, 0.0)).unwrap();
        assert!((r - d_rogue).abs() <= res, "{r} vs {d_rogue}");
        let st = statistics(&map, None).unwrap();
        let frac = st.counts.rogue as f64 / (st.counts.rogue + st.counts.mush()) as f64;
        let expected = analytic::area_fraction(10.0, 10.0, 2.0).unwrap();
        assert!((frac - expected).abs() / expected < 0.1, "{frac}");
    }

    #[test]
    fn ring_order_by_distance() {
        let map = simulate(&oracle_scenario(10.0, 1700.0)).unwrap();
        let rank = |c: CellClass| match c {
            CellClass::Rogue => 0,
            CellClass::MushRogueStronger | CellClass::MushRegularStronger => 1,
            CellClass::Regular => 2,
            CellClass::NoService => 3,
        };
        let mut by_dist: Vec<(f64, u8)> = map
            .centers()
            .map(|((x, y), c)| (x.hypot(y), rank(c.class)))
            .collect();
        by_dist.sort_by(|a, b| a.0.total_cmp(&b.0));
        assert!(by_dist.windows(2).all(|w| w[0].1 <= w[1].1));
        assert!(by_dist.iter().any(|p| p.1 == 0));
        assert!(by_dist.iter().any(|p| p.1 == 1));
        assert!(by_dist.iter().any(|p| p.1 == 2));
    }

    #[test]
    fn weak_rogue_leaves_no_trace() {
        let mut s = oracle_scenario(20.0, 1000.0);
        s.transmitters[1].erp_dbm = 30.0 - 200.0;
        let map = simulate(&s).unwrap();
        assert!(map.cells.iter().all(|c| c.class == CellClass::Regular));
    }

    #[test]
    fn colocated_twins_are_all_mush() {
        let mut s = oracle_scenario(25.0, 500.0);
        s.constant_pr_reg_dbm = None;
        s.transmitters[0].x_m = 0.0;
        s.transmitters[0].erp_dbm = s.transmitters[1].erp_dbm;
        let map = simulate(&s).unwrap();
        assert!(map
            .cells
            .iter()
            .all(|c| c.class == CellClass::MushRogueStronger));
    }

    #[test]
    fn deterministic_under_shadowing() {
        let mut s = oracle_scenario(30.0, 900.0);
        s.propagation = PropagationParams::two_slope(10.0, 2.5).with_sigma(6.0);
        s.shadowing = ShadowingMode::Random;
        s.constant_pr_reg_dbm = None;
        let a = simulate_with_threads(&s, 1).unwrap();
        let b = simulate_with_threads(&s, 3).unwrap();
        assert_eq!(a, b);
        s.seed = 2;
        let c = simulate(&s).unwrap();
        assert_ne!(a.cells, c.cells);
    }

    #[test]
    fn shadow_draw_is_keyed() {
        assert_eq!(shadow_draw(9, "a", 3), shadow_draw(9, "a", 3));
        assert_ne!(shadow_draw(9, "a", 3), shadow_draw(9, "b", 3));
        assert_ne!(shadow_draw(9, "a", 3), shadow_draw(9, "a", 4));
        assert_ne!(shadow_draw(9, "a", 3), shadow_draw(10, "a", 3));
    }

    #[test]
    fn margin_mode_shifts_both_signals() {
        let mut s = oracle_scenario(50.0, 500.0);
        s.constant_pr_reg_dbm = None;
        s.propagation = PropagationParams::two_slope(10.0, 3.0).with_sigma(5.5);
        let mean = simulate(&s).unwrap();
        s.shadowing = ShadowingMode::Margin;
        let margin = simulate(&s).unwrap();
        let shift = 1.644_853_626_951_472_2 * 5.5;
        for (a, b) in mean.cells.iter().zip(margin.cells.iter()) {
            assert!((a.pr_rogue_dbm - b.pr_rogue_dbm - shift).abs() < 1e-6);
            assert!((a.pr_reg_dbm - b.pr_reg_dbm - shift).abs() < 1e-6);
        }
    }

    #[test]
    fn transmitter_cell_uses_distance_floor() {
        let s = oracle_scenario(10.0, 50.0);
        let map = simulate(&s).unwrap();
        let f = Frequency::from_mhz(500.0).unwrap();
        let floor_loss = propagation::fspl(Distance::from_m(5.0).unwrap(), f).unwrap();
        let max_pr = map
            .cells
            .iter()
            .map(|c| c.pr_rogue_dbm)
            .fold(f64::MIN, f64::max);
        assert!(max_pr <= 30.0 - floor_loss + 1e-9);
    }

    #[test]
    fn scenario_validation() {
        let mut s = oracle_scenario(10.0, 100.0);
        s.max_cells = 10;
        assert!(matches!(simulate(&s), Err(Error::CellCapExceeded { .. })));
        let mut s = oracle_scenario(10.0, 100.0);
        s.transmitters[0].role = Role::Rogue;
        assert!(matches!(simulate(&s), Err(Error::InvalidScenario(_))));
        let mut s = oracle_scenario(10.0, 100.0);
        s.grid.resolution_m = 0.0;
        assert!(simulate(&s).is_err());
        let mut s = oracle_scenario(10.0, 100.0);
        s.transmitters[0].erp_dbm = f64::INFINITY;
        assert!(simulate(&s).is_err());
        // log-distance cannot evaluate cells inside d0
        let mut s = oracle_scenario(10.0, 100.0);
        s.propagation = PropagationParams::log_distance(50.0, 3.0);
        assert!(matches!(simulate(&s), Err(Error::Domain(_))));
    }
}
