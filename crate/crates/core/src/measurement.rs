//! Virtual stepped-power protection ratio measurement.
//!
//! A fixed reference transmitter stands in for the regular broadcast while a
//! rogue transmitter starts well above it and is stepped down. At every step
//! the controller watches the receiver's lock status; holding lock on the
//! rogue signal for the whole dwell counts as a successful capture. The
//! estimated protection ratio is the smallest rogue-over-reference ratio that
//! still captured the receiver.
//!
//! Time is logical: one tick is one second of receiver observation.

use serde::Serialize;
use std::fmt;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Signal {
    Rogue,
    Regular,
}

/// Observed state at one power step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LockState {
    Rogue,
    Mush,
    Regular,
}

impl fmt::Display for LockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LockState::Rogue => "rogue",
            LockState::Mush => "mush",
            LockState::Regular => "regular",
        })
    }
}

/// Anything that reports which signal it is locked to, one tick at a time.
pub trait Receiver {
    fn reset(&mut self);
    /// Advance one tick with the given rogue-over-regular power ratio.
    fn tick(&mut self, rogue_over_regular_db: f64) -> Option<Signal>;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReceiverModel {
    /// Ratio the rogue signal needs over the regular one.
    pub ccpr_rogue_db: f64,
    /// Ratio the regular signal needs over the rogue one.
    pub ccpr_regular_db: f64,
    /// Ticks spent acquiring before lock is reported.
    pub lock_acquire_ticks: u32,
    /// Extra ratio needed to acquire (not to hold) a lock.
    pub hysteresis_db: f64,
}

impl ReceiverModel {
    pub fn symmetric(ccpr_db: f64) -> Self {
        ReceiverModel {
            ccpr_rogue_db: ccpr_db,
            ccpr_regular_db: ccpr_db,
            lock_acquire_ticks: 0,
            hysteresis_db: 0.0,
        }
    }

    pub fn receiver(&self) -> ThresholdReceiver {
        ThresholdReceiver {
            model: *self,
            locked: None,
            acquiring: None,
        }
    }

    fn decodable(&self, sig: Signal, ratio_db: f64, extra_db: f64) -> bool {
        match sig {
            Signal::Rogue => ratio_db >= self.ccpr_rogue_db + extra_db,
            Signal::Regular => -ratio_db >= self.ccpr_regular_db + extra_db,
        }
    }
}

/// Deterministic threshold receiver with optional acquisition delay and
/// re-lock hysteresis.
#[derive(Debug, Clone)]
pub struct ThresholdReceiver {
    model: ReceiverModel,
    locked: Option<Signal>,
    acquiring: Option<(Signal, u32)>,
}

impl Receiver for ThresholdReceiver {
    fn reset(&mut self) {
        self.locked = None;
        self.acquiring = None;
    }

    fn tick(&mut self, ratio_db: f64) -> Option<Signal> {
        let m = self.model;
        if let Some(sig) = self.locked {
            if m.decodable(sig, ratio_db, 0.0) {
                return Some(sig);
            }
            self.locked = None;
        }
        let candidate = [Signal::Rogue, Signal::Regular]
            .into_iter()
            .find(|s| m.decodable(*s, ratio_db, m.hysteresis_db));
        let Some(sig) = candidate else {
            self.acquiring = None;
            return None;
        };
        let spent = match self.acquiring {
            Some((s, n)) if s == sig => n,
            _ => 0,
        };
        if spent >= m.lock_acquire_ticks {
            self.locked = Some(sig);
            self.acquiring = None;
            Some(sig)
        } else {
            self.acquiring = Some((sig, spent + 1));
            None
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementRun {
    pub p_fixed_dbm: f64,
    pub p_start_dbm: f64,
    pub step_db: f64,
    /// Consecutive locked ticks required at a step.
    pub dwell_ticks: u32,
    /// Ticks allowed at each step before the dwell window starts.
    pub settle_ticks: u32,
    pub max_steps: usize,
}

impl MeasurementRun {
    pub fn new(p_fixed_dbm: f64, p_start_dbm: f64) -> Self {
        MeasurementRun {
            p_fixed_dbm,
            p_start_dbm,
            step_db: 1.0,
            dwell_ticks: 10,
            settle_ticks: 0,
            max_steps: 10_000,
        }
    }

    pub fn with_step(mut self, step_db: f64) -> Self {
        self.step_db = step_db;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step_db.is_finite() && self.step_db > 0.0) {
            return Err(Error::domain(format!(
                "step must be positive, got {}",
                self.step_db
            )));
        }
        if self.dwell_ticks == 0 {
            return Err(Error::domain("dwell must be at least one tick"));
        }
        if !(self.p_fixed_dbm.is_finite() && self.p_start_dbm.is_finite()) {
            return Err(Error::domain("powers must be finite"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceEntry {
    pub step_index: usize,
    pub p_rogue_dbm: f64,
    pub ratio_db: f64,
    pub state: LockState,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimatedCcpr {
    pub estimate_db: f64,
    /// Number of mush steps times the step size.
    pub mush_width_db: f64,
    pub trace: Vec<TraceEntry>,
}

pub const TRACE_CSV_HEADER: &str = "step_index,p_rogue_dbm,ratio_db,state";

impl EstimatedCcpr {
    pub fn trace_csv(&self) -> String {
        let mut s = format!("{TRACE_CSV_HEADER}\n");
        for e in &self.trace {
            s.push_str(&format!(
                "{},{},{},{}\n",
                e.step_index, e.p_rogue_dbm, e.ratio_db, e.state
            ));
        }
        s
    }
}

fn observe<R: Receiver + ?Sized>(rx: &mut R, ratio_db: f64, cfg: &MeasurementRun) -> LockState {
    for _ in 0..cfg.settle_ticks {
        rx.tick(ratio_db);
    }
    let first = rx.tick(ratio_db);
    let held = (1..cfg.dwell_ticks).all(|_| rx.tick(ratio_db) == first);
    match (first, held) {
        (Some(Signal::Rogue), true) => LockState::Rogue,
        (Some(Signal::Regular), true) => LockState::Regular,
        _ => LockState::Mush,
    }
}

/// Round to a 1e-9 dB grid so that stepped levels such as 22.3 - 20 * 0.5
/// land on the intended decimal value.
fn snap(db: f64) -> f64 {
    (db * 1e9).round() / 1e9
}

/// Step the rogue power down until the receiver locks back onto the
/// reference, and report the smallest ratio that held a rogue lock.
pub fn run_measurement<R: Receiver + ?Sized>(
    rx: &mut R,
    cfg: &MeasurementRun,
) -> Result<EstimatedCcpr> {
    cfg.validate()?;
    rx.reset();
    let mut trace = Vec::new();
    for k in 0..cfg.max_steps {
        let p_rogue = snap(cfg.p_start_dbm - k as f64 * cfg.step_db);
        let ratio = snap(p_rogue - cfg.p_fixed_dbm);
        let state = observe(rx, ratio, cfg);
        trace.push(TraceEntry {
            step_index: k,
            p_rogue_dbm: p_rogue,
            ratio_db: ratio,
            state,
        });
        if k == 0 && state != LockState::Rogue {
            return Err(Error::TransitionNotObserved(format!(
                "receiver not locked to the rogue signal at the starting ratio of {ratio} dB"
            )));
        }
        if state == LockState::Regular {
            let estimate = trace
                .iter()
                .take_while(|e| e.state == LockState::Rogue)
                .last()
                .map(|e| e.ratio_db)
                .expect("first step is a rogue lock");
            let mush = trace.iter().filter(|e| e.state == LockState::Mush).count();
            return Ok(EstimatedCcpr {
                estimate_db: estimate,
                mush_width_db: mush as f64 * cfg.step_db,
                trace,
            });
        }
    }
    Err(Error::TransitionNotObserved(format!(
        "regular signal never re-acquired within {} steps",
        cfg.max_steps
    )))
}

/// Sequence of observed states of a completed run.
pub fn three_state_trace(run: &EstimatedCcpr) -> Vec<LockState> {
    run.trace.iter().map(|e| e.state).collect()
}

/// True when the states follow Rogue* Mush* Regular*.
pub fn is_monotone(states: &[LockState]) -> bool {
    states.windows(2).all(|w| w[0] <= w[1])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RepeatSummary {
    pub repeats: usize,
    pub min_db: f64,
    pub median_db: f64,
    pub max_db: f64,
}

/// Repeat the measurement on freshly reset receivers.
pub fn run_repeated<R: Receiver + ?Sized>(
    rx: &mut R,
    cfg: &MeasurementRun,
    repeats: usize,
) -> Result<(RepeatSummary, EstimatedCcpr)> {
    if repeats == 0 {
        return Err(Error::domain("repeats must be at least 1"));
    }
    let mut estimates = Vec::with_capacity(repeats);
    let mut last = None;
    for _ in 0..repeats {
        let r = run_measurement(rx, cfg)?;
        estimates.push(r.estimate_db);
        last = Some(r);
    }
    estimates.sort_by(f64::total_cmp);
    let n = estimates.len();
    let median = if n % 2 == 1 {
        estimates[n / 2]
    } else {
        (estimates[n / 2 - 1] + estimates[n / 2]) / 2.0
    };
    Ok((
        RepeatSummary {
            repeats,
            min_db: estimates[0],
            median_db: median,
            max_db: estimates[n - 1],
        },
        last.expect("at least one run"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Ground truth by sweeping the model at 0.01 dB granularity: the lowest
    /// ratio at which a freshly started receiver reports a rogue lock.
    fn brute_force_threshold(model: &ReceiverModel, lo: f64, hi: f64) -> f64 {
        let mut best = f64::NAN;
        let steps = ((hi - lo) / 0.01).round() as i64;
        for k in (0..=steps).rev() {
            let r = lo + k as f64 * 0.01;
            let mut rx = model.receiver();
            if rx.tick(r) == Some(Signal::Rogue) {
                best = r;
            } else {
                break;
            }
        }
        best
    }

    #[test]
    fn sweep_oracle_agrees_with_model_threshold() {
        let m = ReceiverModel::symmetric(10.0);
        let t = brute_force_threshold(&m, 0.0, 30.0);
        assert!((t - 10.0).abs() < 0.01 + 1e-9, "{t}");
    }

    #[test]
    fn one_db_steps() {
        let m = ReceiverModel::symmetric(10.0);
        let cfg = MeasurementRun::new(-60.0, -60.0 + 20.0);
        let r = run_measurement(&mut m.receiver(), &cfg).unwrap();
        assert!(
            r.estimate_db >= 10.0 && r.estimate_db < 11.0,
            "{}",
            r.estimate_db
        );
    }

    #[test]
    fn tenth_db_steps() {
        let m = ReceiverModel::symmetric(10.0);
        let cfg = MeasurementRun::new(-60.0, -40.0).with_step(0.1);
        let r = run_measurement(&mut m.receiver(), &cfg).unwrap();
        assert!(
            r.estimate_db >= 10.0 - 1e-9 && r.estimate_db < 10.1,
            "{}",
            r.estimate_db
        );
    }

    #[test]
    fn start_at_threshold_locks_immediately() {
        let m = ReceiverModel::symmetric(10.0);
        let cfg = MeasurementRun::new(-60.0, -50.0);
        let r = run_measurement(&mut m.receiver(), &cfg).unwrap();
        assert_eq!(r.trace[0].state, LockState::Rogue);
        assert_eq!(r.estimate_db, 10.0);
    }

    #[test]
    fn decimal_steps_hit_the_threshold_exactly() {
        let m = ReceiverModel::symmetric(12.3);
        let cfg = MeasurementRun::new(-60.0, -37.7).with_step(0.5);
        let r = run_measurement(&mut m.receiver(), &cfg).unwrap();
        assert_eq!(r.estimate_db, 12.3);
    }

    #[test]
    fn start_too_low_is_reported() {
        let m = ReceiverModel::symmetric(10.0);
        let cfg = MeasurementRun::new(-60.0, -55.0);
        assert!(matches!(
            run_measurement(&mut m.receiver(), &cfg),
            Err(Error::TransitionNotObserved(_))
        ));
    }

    #[test]
    fn exhausted_steps_are_reported() {
        let m = ReceiverModel::symmetric(10.0);
        let mut cfg = MeasurementRun::new(-60.0, -40.0);
        cfg.max_steps = 15;
        assert!(matches!(
            run_measurement(&mut m.receiver(), &cfg),
            Err(Error::TransitionNotObserved(_))
        ));
    }

    #[test]
    fn symmetric_sweep_shows_all_states() {
        let m = ReceiverModel::symmetric(8.0);
        let cfg = MeasurementRun::new(-60.0, -40.0);
        let r = run_measurement(&mut m.receiver(), &cfg).unwrap();
        let states = three_state_trace(&r);
        assert!(is_monotone(&states));
        for s in [LockState::Rogue, LockState::Mush, LockState::Regular] {
            assert!(states.contains(&s));
        }
        assert!((r.mush_width_db - 16.0).abs() <= 1.0);
    }

    #[test]
    fn coarse_step_may_skip_mush() {
        let m = ReceiverModel::symmetric(2.0);
        let cfg = MeasurementRun::new(-60.0, -50.0).with_step(5.0);
        let r = run_measurement(&mut m.receiver(), &cfg).unwrap();
        let states = three_state_trace(&r);
        assert!(is_monotone(&states));
        // ratios 10, 5, 0, -5: the 4 dB mush window holds only the 0 dB step
        assert_eq!(
            states,
            [
                LockState::Rogue,
                LockState::Rogue,
                LockState::Mush,
                LockState::Regular
            ]
        );
        let cfg = MeasurementRun::new(-60.0, -57.5).with_step(5.0);
        let states = three_state_trace(&run_measurement(&mut m.receiver(), &cfg).unwrap());
        assert_eq!(states, [LockState::Rogue, LockState::Regular]);
    }

    #[test]
    fn zero_ccpr_never_mush() {
        let m = ReceiverModel::symmetric(0.0);
        let cfg = MeasurementRun::new(-60.0, -50.0).with_step(0.5);
        let r = run_measurement(&mut m.receiver(), &cfg).unwrap();
        assert!(!three_state_trace(&r).contains(&LockState::Mush));
    }

    #[test]
    fn hysteresis_widens_mush_on_reacquire() {
        let mut m = ReceiverModel::symmetric(5.0);
        m.hysteresis_db = 3.0;
        let cfg = MeasurementRun::new(-60.0, -40.0);
        let r = run_measurement(&mut m.receiver(), &cfg).unwrap();
        assert_eq!(r.estimate_db, 5.0);
        // regular needs 5 + 3 dB to re-acquire: ratios 4..-7 are mush
        assert_eq!(r.mush_width_db, 12.0);
    }

    #[test]
    fn acquisition_delay_is_absorbed_by_settle_time() {
        let mut m = ReceiverModel::symmetric(6.0);
        m.lock_acquire_ticks = 3;
        let mut cfg = MeasurementRun::new(-60.0, -40.0);
        assert!(run_measurement(&mut m.receiver(), &cfg).is_err());
        cfg.settle_ticks = 3;
        let r = run_measurement(&mut m.receiver(), &cfg).unwrap();
        assert_eq!(r.estimate_db, 6.0);
        assert!(is_monotone(&three_state_trace(&r)));
    }

    #[test]
    fn repeats_are_identical_for_deterministic_model() {
        let m = ReceiverModel::symmetric(12.3);
        let cfg = MeasurementRun::new(-60.0, -35.0);
        let (s, _) = run_repeated(&mut m.receiver(), &cfg, 10).unwrap();
        assert_eq!(s.min_db, s.max_db);
        assert_eq!(s.median_db, s.min_db);
        assert_eq!(s.min_db, 13.0);
    }

    #[test]
    fn trace_csv_format() {
        let m = ReceiverModel::symmetric(1.0);
        let cfg = MeasurementRun::new(-60.0, -58.0);
        let r = run_measurement(&mut m.receiver(), &cfg).unwrap();
        let csv = r.trace_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], TRACE_CSV_HEADER);
        assert_eq!(lines[1], "0,-58,2,rogue");
        assert_eq!(lines.last().unwrap(), &"3,-61,-1,regular");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn quantization_bias_and_monotone_trace(
                truth in 0.0f64..25.0, reg in 0.0f64..25.0,
                step in prop::sample::select(vec![0.1, 0.25, 0.5, 1.0, 3.0]),
                margin in 0.0f64..10.0,
            ) {
                let m = ReceiverModel { ccpr_rogue_db: truth, ccpr_regular_db: reg, lock_acquire_ticks: 0, hysteresis_db: 0.0 };
                let cfg = MeasurementRun::new(-70.0, -70.0 + truth + margin).with_step(step);
                let r = run_measurement(&mut m.receiver(), &cfg).unwrap();
                let bias = r.estimate_db - truth;
                prop_assert!(bias >= -1e-9 && bias < step, "bias {}", bias);
                prop_assert!(is_monotone(&three_state_trace(&r)));
                prop_assert!((r.mush_width_db - (truth + reg)).abs() <= step + 1e-9);
            }
        }
    }
}
