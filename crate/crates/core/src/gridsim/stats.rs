use serde::{Deserialize, Serialize};

use super::{CellClass, GridMap};
use crate::{Error, Result};

/// Simple polygon in grid coordinates (meters). The ring is closed implicitly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polygon(pub Vec<[f64; 2]>);

impl Polygon {
    pub fn rectangle(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        Polygon(vec![[x0, y0], [x1, y0], [x1, y1], [x0, y1]])
    }

    /// Even-odd ray casting.
    pub fn contains(&self, x: f64, y: f64) -> bool {
        let pts = &self.0;
        let mut inside = false;
        let mut j = pts.len().wrapping_sub(1);
        for i in 0..pts.len() {
            let [xi, yi] = pts[i];
            let [xj, yj] = pts[j];
            if (yi > y) != (yj > y) && x < (xj - xi) * (y - yi) / (yj - yi) + xi {
                inside = !inside;
            }
            j = i;
        }
        inside
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClassCounts {
    pub regular: u64,
    pub rogue: u64,
    pub mush_rogue_stronger: u64,
    pub mush_regular_stronger: u64,
    pub no_service: u64,
}

impl ClassCounts {
    pub fn mush(&self) -> u64 {
        self.mush_rogue_stronger + self.mush_regular_stronger
    }

    pub fn total(&self) -> u64 {
        self.regular + self.rogue + self.mush() + self.no_service
    }

    fn add(&mut self, c: CellClass) {
        match c {
            CellClass::Regular => self.regular += 1,
            CellClass::Rogue => self.rogue += 1,
            CellClass::MushRogueStronger => self.mush_rogue_stronger += 1,
            CellClass::MushRegularStronger => self.mush_regular_stronger += 1,
            CellClass::NoService => self.no_service += 1,
        }
    }
}

/// Location percentages per class. Serializes to the stats JSON document.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassStats {
    pub regular_pct: f64,
    pub rogue_pct: f64,
    pub mush_pct: f64,
    pub mush_rogue_stronger_pct: f64,
    pub mush_regular_stronger_pct: f64,
    pub no_service_pct: f64,
    #[serde(skip)]
    pub counts: ClassCounts,
}

impl ClassStats {
    pub fn from_counts(counts: ClassCounts) -> Result<Self> {
        let total = counts.total();
        if total == 0 {
            return Err(Error::EmptyRegion);
        }
        let pct = |n: u64| 100.0 * n as f64 / total as f64;
        Ok(ClassStats {
            regular_pct: pct(counts.regular),
            rogue_pct: pct(counts.rogue),
            mush_pct: pct(counts.mush()),
            mush_rogue_stronger_pct: pct(counts.mush_rogue_stronger),
            mush_regular_stronger_pct: pct(counts.mush_regular_stronger),
            no_service_pct: pct(counts.no_service),
            counts,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("stats serialize")
    }
}

/// Class percentages over the whole map or over the cells whose centres fall
/// inside `region`.
pub fn statistics(m: &GridMap, region: Option<&Polygon>) -> Result<ClassStats> {
    let mut counts = ClassCounts::default();
    for ((x, y), cell) in m.centers() {
        if region.map_or(true, |r| r.contains(x, y)) {
            counts.add(cell.class);
        }
    }
    ClassStats::from_counts(counts)
}

/// Largest distance from `from` to the centre of a cell of class `class`.
pub fn max_class_distance(m: &GridMap, class: CellClass, from: (f64, f64)) -> Option<f64> {
    m.centers()
        .filter(|(_, c)| c.class == class)
        .map(|((x, y), _)| (x - from.0).hypot(y - from.1))
        .max_by(f64::total_cmp)
}

#[cfg(test)]
mod tests {
    use super::super::{Cell, Scenario};
    use super::*;

    fn map_of(classes: &[CellClass], nx: usize, scenario: Scenario) -> GridMap {
        GridMap {
            nx,
            ny: classes.len() / nx,
            cells: classes
                .iter()
                .map(|c| Cell {
                    pr_reg_dbm: -60.0,
                    pr_rogue_dbm: -70.0,
                    class: *c,
                })
                .collect(),
            seed: scenario.seed,
            scenario,
        }
    }

    fn scenario(nx: usize, ny: usize) -> Scenario {
        use crate::ccpr::*;
        use crate::gridsim::*;
        use crate::propagation::*;
        let mode = TransmissionMode::dvb_t(Modulation::Qpsk, CodeRate::R1_2);
        let t = |id: &str, role| Transmitter {
            id: id.into(),
            role,
            x_m: 0.0,
            y_m: 0.0,
            erp_dbm: 0.0,
            antenna: Antenna::Omni,
            height_tag: None,
            mode,
            propagation: None,
        };
        Scenario {
            transmitters: vec![t("a", Role::Regular), t("b", Role::Rogue)],
            frequency: Frequency::from_mhz(500.0).unwrap(),
            propagation: PropagationParams::fspl(),
            alpha_reg_db: 1.0,
            alpha_rogue_db: 1.0,
            noise_floor_dbm: -90.0,
            grid: GridSpec {
                origin_x_m: 0.0,
                origin_y_m: 0.0,
                width_m: nx as f64,
                height_m: ny as f64,
                resolution_m: 1.0,
            },
            seed: 0,
            shadowing: ShadowingMode::Mean,
            location_variability_pct: 95.0,
            constant_pr_reg_dbm: None,
            max_cells: 100,
        }
    }

    #[test]
    fn all_regular() {
        let m = map_of(&[CellClass::Regular; 6], 3, scenario(3, 2));
        let s = statistics(&m, None).unwrap();
        assert_eq!((s.regular_pct, s.rogue_pct, s.mush_pct), (100.0, 0.0, 0.0));
    }

    #[test]
    fn mixed_and_single_cell_region() {
        use CellClass::*;
        let classes = [
            Regular,
            Rogue,
            MushRogueStronger,
            MushRegularStronger,
            NoService,
            Regular,
        ];
        let m = map_of(&classes, 3, scenario(3, 2));
        let s = statistics(&m, None).unwrap();
        let sum = s.regular_pct + s.rogue_pct + s.mush_pct + s.no_service_pct;
        assert!((sum - 100.0).abs() < 1e-9);
        assert!(
            (s.mush_pct - s.mush_rogue_stronger_pct - s.mush_regular_stronger_pct).abs() < 1e-12
        );
        assert!((s.regular_pct - 100.0 / 3.0).abs() < 1e-9);
        // cell (1, 0) has its centre at (1.5, 0.5)
        let r = Polygon::rectangle(1.1, 0.1, 1.9, 0.9);
        let one = statistics(&m, Some(&r)).unwrap();
        assert_eq!(one.rogue_pct, 100.0);
        let outside = Polygon::rectangle(10.0, 10.0, 11.0, 11.0);
        assert!(matches!(
            statistics(&m, Some(&outside)),
            Err(Error::EmptyRegion)
        ));
    }

    #[test]
    fn polygon_contains() {
        let tri = Polygon(vec![[0.0, 0.0], [10.0, 0.0], [0.0, 10.0]]);
        assert!(tri.contains(1.0, 1.0));
        assert!(!tri.contains(6.0, 6.0));
        assert!(!tri.contains(-1.0, 1.0));
    }

    #[test]
    fn json_keys() {
        let m = map_of(&[CellClass::Regular; 4], 2, scenario(2, 2));
        let v: serde_json::Value =
            serde_json::from_str(&statistics(&m, None).unwrap().to_json()).unwrap();
        let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        keys.sort();
        assert_eq!(
            keys,
            [
                "mush_pct",
                "mush_regular_stronger_pct",
                "mush_rogue_stronger_pct",
                "no_service_pct",
                "regular_pct",
                "rogue_pct"
            ]
        );
    }
}
