//! Quantitative tooling for co-channel overpowering of terrestrial DVB-T/T2
//! broadcasts.
//!
//! The crate answers questions of the form "how large an area can a rogue
//! on-channel transmitter take over, and how much collateral mush zone does it
//! leave behind?". It bundles:
//!
//! * [`propagation`]: free-space, log-distance and two-slope path loss with
//!   optional log-normal shadowing.
//! * [`ccpr`]: embedded co-channel protection ratio / minimum C/N tables.
//! * [`link_budget`]: receiver noise power and minimum input power.
//! * [`analytic`]: closed-form attack radius, controlled area and mush-zone
//!   geometry.
//! * [`gridsim`]: rasterized two-transmitter coverage simulation with
//!   per-cell classification, statistics and map output.
//! * [`gapfiller`]: feasibility of capturing an on-channel repeater.
//! * [`measurement`]: a virtual stepped-power protection ratio measurement.
//! * [`cir`]: classification of geolocated channel impulse responses.
//! * [`config`] and [`reproduce`]: the JSON scenario format and the built-in
//!   headline checks used by the command-line tool.

pub mod analytic;
pub mod ccpr;
pub mod cir;
pub mod config;
pub mod error;
pub mod gapfiller;
pub mod gridsim;
pub mod link_budget;
pub mod measurement;
pub mod propagation;
pub mod reproduce;

pub use error::{Error, Result};
