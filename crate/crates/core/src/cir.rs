//! Classification of geolocated channel impulse responses.
//!
//! In a single frequency network every transmitter shows up as a path in the
//! receiver's impulse response. Replaying one transmitter's signal with an
//! added delay (an "echo") produces a second path whose relative power decides
//! whether the replay controls the location. The records carry per-path delay
//! and power relative to the strongest path.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::io::BufRead;

use crate::analytic::can_receive;
use crate::ccpr::TransmissionMode;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathComponent {
    pub delay_us: f64,
    /// Power relative to the strongest path; the strongest one is 0 dB.
    pub rel_db: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImpulseResponseRecord {
    pub lat: f64,
    pub lon: f64,
    pub paths: Vec<PathComponent>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<TransmissionMode>,
}

impl ImpulseResponseRecord {
    pub fn validate(&self) -> Result<()> {
        if !(self.lat.is_finite() && (-90.0..=90.0).contains(&self.lat)) {
            return Err(Error::InvalidRecord(format!(
                "latitude out of range: {}",
                self.lat
            )));
        }
        if !(self.lon.is_finite() && (-180.0..=180.0).contains(&self.lon)) {
            return Err(Error::InvalidRecord(format!(
                "longitude out of range: {}",
                self.lon
            )));
        }
        if self.paths.is_empty() {
            return Err(Error::InvalidRecord("record has no paths".into()));
        }
        for p in &self.paths {
            if !(p.delay_us.is_finite() && p.delay_us >= 0.0) {
                return Err(Error::InvalidRecord(format!(
                    "negative or non-finite delay {}",
                    p.delay_us
                )));
            }
            if !p.rel_db.is_finite() {
                return Err(Error::InvalidRecord("non-finite path power".into()));
            }
        }
        let max = self
            .paths
            .iter()
            .map(|p| p.rel_db)
            .fold(f64::NEG_INFINITY, f64::max);
        if max != 0.0 {
            return Err(Error::InvalidRecord(format!(
                "powers must be relative to the strongest path (max is {max} dB, expected 0)"
            )));
        }
        Ok(())
    }

    /// Copy with every path shifted so that the strongest sits at 0 dB.
    pub fn normalized(&self) -> Self {
        let max = self
            .paths
            .iter()
            .map(|p| p.rel_db)
            .fold(f64::NEG_INFINITY, f64::max);
        let mut r = self.clone();
        for p in &mut r.paths {
            p.rel_db -= max;
        }
        r
    }
}

/// Parse newline-delimited JSON records; blank lines are skipped.
pub fn read_ndjson<R: BufRead>(reader: R) -> Result<Vec<ImpulseResponseRecord>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io("<impulse responses>", e))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: ImpulseResponseRecord = serde_json::from_str(&line).map_err(|e| Error::Json {
            what: format!("impulse response record on line {}", i + 1),
            source: e,
        })?;
        rec.validate()?;
        out.push(rec);
    }
    Ok(out)
}

/// How to decide which path is the replayed original and which is the echo.
#[derive(Debug, Clone, PartialEq)]
pub enum AssignmentPolicy {
    LabelMatch {
        original: String,
        echo: String,
    },
    /// The original is the path closest to `original_delay_us`; the echo is
    /// the single later path within `window_us` of `original + echo_delay_us`.
    DelayWindow {
        original_delay_us: f64,
        echo_delay_us: f64,
        window_us: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PathAssignment {
    pub original_index: usize,
    pub echo_index: usize,
    pub original_rel_db: f64,
    pub echo_rel_db: f64,
}

impl PathAssignment {
    /// Echo power over original power.
    pub fn margin_db(&self) -> f64 {
        self.echo_rel_db - self.original_rel_db
    }
}

pub fn assign(rec: &ImpulseResponseRecord, policy: &AssignmentPolicy) -> Result<PathAssignment> {
    if rec.paths.len() < 2 {
        return Err(Error::InsufficientPaths(rec.paths.len()));
    }
    let (oi, ei) = match policy {
        AssignmentPolicy::LabelMatch { original, echo } => {
            let find = |name: &str| -> Result<usize> {
                let hits: Vec<usize> = rec
                    .paths
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| p.label.as_deref() == Some(name))
                    .map(|(i, _)| i)
                    .collect();
                match hits.as_slice() {
                    [i] => Ok(*i),
                    [] => Err(Error::EchoNotFound(format!("no path labelled {name:?}"))),
                    _ => Err(Error::AmbiguousAssignment(format!(
                        "{} paths labelled {name:?}",
                        hits.len()
                    ))),
                }
            };
            (find(original)?, find(echo)?)
        }
        AssignmentPolicy::DelayWindow {
            original_delay_us,
            echo_delay_us,
            window_us,
        } => {
            let mut by_dist: Vec<(usize, f64)> = rec
                .paths
                .iter()
                .enumerate()
                .map(|(i, p)| (i, (p.delay_us - original_delay_us).abs()))
                .collect();
            by_dist.sort_by(|a, b| a.1.total_cmp(&b.1));
            if by_dist.len() > 1 && by_dist[0].1 == by_dist[1].1 {
                return Err(Error::AmbiguousAssignment(format!(
                    "two paths equally close to {original_delay_us} us"
                )));
            }
            let oi = by_dist[0].0;
            let expected = rec.paths[oi].delay_us + echo_delay_us;
            let echoes: Vec<usize> = rec
                .paths
                .iter()
                .enumerate()
                .filter(|(i, p)| {
                    *i != oi
                        && p.delay_us > rec.paths[oi].delay_us
                        && (p.delay_us - expected).abs() <= *window_us
                })
                .map(|(i, _)| i)
                .collect();
            match echoes.as_slice() {
                [ei] => (oi, *ei),
                [] => {
                    return Err(Error::EchoNotFound(format!(
                        "no path within {window_us} us of {expected} us"
                    )))
                }
                _ => {
                    return Err(Error::AmbiguousAssignment(format!(
                        "{} paths within {window_us} us of {expected} us",
                        echoes.len()
                    )))
                }
            }
        }
    };
    if oi == ei {
        return Err(Error::AmbiguousAssignment(
            "original and echo resolve to the same path".into(),
        ));
    }
    Ok(PathAssignment {
        original_index: oi,
        echo_index: ei,
        original_rel_db: rec.paths[oi].rel_db,
        echo_rel_db: rec.paths[ei].rel_db,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointClass {
    Controlled,
    MushEchoStronger,
    MushOriginalStronger,
    Regular,
}

impl PointClass {
    /// Property value written to GeoJSON.
    pub fn name(self) -> &'static str {
        match self {
            PointClass::Controlled => "controlled",
            PointClass::MushEchoStronger => "mush_echo",
            PointClass::MushOriginalStronger => "mush_original",
            PointClass::Regular => "regular",
        }
    }

    /// Suggested map colour: red, dark gray, light gray, green.
    pub fn color(self) -> &'static str {
        match self {
            PointClass::Controlled => "#d7191c",
            PointClass::MushEchoStronger => "#555555",
            PointClass::MushOriginalStronger => "#bbbbbb",
            PointClass::Regular => "#1a9641",
        }
    }
}

/// Classify a location from its echo-over-original margin. A zero margin with
/// neither signal decodable counts as echo-stronger mush.
pub fn classify_margin(margin_db: f64, alpha_rogue_db: f64, alpha_reg_db: f64) -> PointClass {
    if can_receive(margin_db, 0.0, alpha_rogue_db) {
        PointClass::Controlled
    } else if can_receive(0.0, margin_db, alpha_reg_db) {
        PointClass::Regular
    } else if margin_db >= 0.0 {
        PointClass::MushEchoStronger
    } else {
        PointClass::MushOriginalStronger
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassifiedPoint {
    pub lat: f64,
    pub lon: f64,
    pub class: PointClass,
    pub margin_db: f64,
}

pub fn classify_record(
    rec: &ImpulseResponseRecord,
    policy: &AssignmentPolicy,
    alpha_rogue_db: f64,
    alpha_reg_db: f64,
) -> Result<ClassifiedPoint> {
    rec.validate()?;
    let a = assign(rec, policy)?;
    let margin = a.margin_db();
    Ok(ClassifiedPoint {
        lat: rec.lat,
        lon: rec.lon,
        class: classify_margin(margin, alpha_rogue_db, alpha_reg_db),
        margin_db: margin,
    })
}

/// GeoJSON FeatureCollection of classified points, coordinates as [lon, lat].
pub fn to_geojson(points: &[ClassifiedPoint]) -> Value {
    let features: Vec<Value> = points
        .iter()
        .map(|p| {
            json!({
                "type": "Feature",
                "geometry": {"type": "Point", "coordinates": [p.lon, p.lat]},
                "properties": {
                    "class": p.class.name(),
                    "margin_db": p.margin_db,
                    "color": p.class.color(),
                },
            })
        })
        .collect();
    json!({"type": "FeatureCollection", "features": features})
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(delay_us: f64, rel_db: f64, label: &str) -> PathComponent {
        PathComponent {
            delay_us,
            rel_db,
            label: Some(label.into()),
        }
    }

    /// Four paths: two SFN transmitters and the replay of each.
    fn berlin() -> ImpulseResponseRecord {
        ImpulseResponseRecord {
            lat: 52.5219,
            lon: 13.4132,
            paths: vec![
                path(0.0, -21.0, "alex"),
                path(31.0, -25.5, "schaef"),
                path(100.0, 0.0, "alex_echo"),
                path(131.0, -4.5, "schaef_echo"),
            ],
            mode: None,
        }
    }

    fn labels() -> AssignmentPolicy {
        AssignmentPolicy::LabelMatch {
            original: "alex".into(),
            echo: "alex_echo".into(),
        }
    }

    #[test]
    fn strong_echo_controls() {
        let p = classify_record(&berlin(), &labels(), 14.1, 14.1).unwrap();
        assert_eq!(p.class, PointClass::Controlled);
        assert_eq!(p.margin_db, 21.0);
    }

    #[test]
    fn margin_classes() {
        assert_eq!(classify_margin(14.1, 14.1, 14.1), PointClass::Controlled);
        assert_eq!(
            classify_margin(5.0, 14.1, 14.1),
            PointClass::MushEchoStronger
        );
        assert_eq!(
            classify_margin(0.0, 14.1, 14.1),
            PointClass::MushEchoStronger
        );
        assert_eq!(
            classify_margin(-5.0, 14.1, 14.1),
            PointClass::MushOriginalStronger
        );
        assert_eq!(classify_margin(-14.1, 14.1, 14.1), PointClass::Regular);
    }

    #[test]
    fn delay_window_policy() {
        let pol = AssignmentPolicy::DelayWindow {
            original_delay_us: 0.0,
            echo_delay_us: 100.0,
            window_us: 5.0,
        };
        let a = assign(&berlin(), &pol).unwrap();
        assert_eq!((a.original_index, a.echo_index), (0, 2));
        let wide = AssignmentPolicy::DelayWindow {
            original_delay_us: 0.0,
            echo_delay_us: 115.0,
            window_us: 20.0,
        };
        assert!(matches!(
            assign(&berlin(), &wide),
            Err(Error::AmbiguousAssignment(_))
        ));
        let off = AssignmentPolicy::DelayWindow {
            original_delay_us: 0.0,
            echo_delay_us: 60.0,
            window_us: 5.0,
        };
        assert!(matches!(
            assign(&berlin(), &off),
            Err(Error::EchoNotFound(_))
        ));
    }

    #[test]
    fn single_path_rejected() {
        let mut r = berlin();
        r.paths.truncate(1);
        r.paths[0].rel_db = 0.0;
        assert!(matches!(
            assign(&r, &labels()),
            Err(Error::InsufficientPaths(1))
        ));
    }

    #[test]
    fn duplicate_labels_are_ambiguous() {
        let mut r = berlin();
        r.paths[1].label = Some("alex".into());
        assert!(matches!(
            assign(&r, &labels()),
            Err(Error::AmbiguousAssignment(_))
        ));
    }

    #[test]
    fn validation() {
        let mut r = berlin();
        r.paths[2].rel_db = -1.0;
        assert!(matches!(r.validate(), Err(Error::InvalidRecord(_))));
        assert!(r.normalized().validate().is_ok());
        let mut r = berlin();
        r.paths[0].delay_us = -1.0;
        assert!(r.validate().is_err());
    }

    #[test]
    fn ndjson_round_trip() {
        let line = serde_json::to_string(&berlin()).unwrap();
        let text = format!("{line}\n\n{line}\n");
        let recs = read_ndjson(text.as_bytes()).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[0], berlin());
        let bad = r#"{"lat": 1, "lon": 2, "paths": [], "extra": 1}"#;
        assert!(read_ndjson(bad.as_bytes()).is_err());
    }

    #[test]
    fn mode_field_parses() {
        let line = r#"{"lat":52.5,"lon":13.4,"paths":[{"delay_us":0,"rel_db":0},{"delay_us":100,"rel_db":-3}],"mode":"DVB-T 16QAM 2/3"}"#;
        let r = read_ndjson(line.as_bytes()).unwrap();
        assert_eq!(r[0].mode.unwrap().to_string(), "DVB-T 16QAM 2/3");
    }

    /// Structural check written against the GeoJSON format itself.
    fn check_geojson(v: &Value) {
        assert_eq!(v["type"], "FeatureCollection");
        for f in v["features"].as_array().unwrap() {
            assert_eq!(f["type"], "Feature");
            assert_eq!(f["geometry"]["type"], "Point");
            let c = f["geometry"]["coordinates"].as_array().unwrap();
            assert_eq!(c.len(), 2);
            let (lon, lat) = (c[0].as_f64().unwrap(), c[1].as_f64().unwrap());
            assert!((-180.0..=180.0).contains(&lon) && (-90.0..=90.0).contains(&lat));
            assert!(f["properties"]["class"].is_string());
            assert!(f["properties"]["margin_db"].is_number());
        }
    }

    #[test]
    fn geojson_shape() {
        let p = classify_record(&berlin(), &labels(), 14.1, 14.1).unwrap();
        let v = to_geojson(&[p]);
        check_geojson(&v);
        assert_eq!(v["features"][0]["geometry"]["coordinates"][0], 13.4132);
        assert_eq!(v["features"][0]["properties"]["class"], "controlled");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn shifting_all_paths_keeps_class(o in -40.0f64..0.0, e in -40.0f64..0.0, shift in -30.0f64..30.0,
                                               ar in 0.0f64..25.0, ag in 0.0f64..25.0) {
                let mk = |o: f64, e: f64| ImpulseResponseRecord {
                    lat: 0.0, lon: 0.0,
                    paths: vec![path(0.0, o, "o"), path(50.0, e, "e")],
                    mode: None,
                };
                let pol = AssignmentPolicy::LabelMatch { original: "o".into(), echo: "e".into() };
                let a = assign(&mk(o, e), &pol).unwrap();
                let b = assign(&mk(o + shift, e + shift), &pol).unwrap();
                prop_assert_eq!(classify_margin(a.margin_db(), ar, ag), classify_margin(b.margin_db(), ar, ag));
            }

            #[test]
            fn agrees_with_can_receive(m in -40.0f64..40.0, ar in 0.0f64..25.0, ag in 0.0f64..25.0) {
                let c = classify_margin(m, ar, ag);
                prop_assert_eq!(c == PointClass::Controlled, can_receive(m, 0.0, ar));
                if c == PointClass::Regular {
                    prop_assert!(can_receive(0.0, m, ag));
                }
            }
        }
    }
}
