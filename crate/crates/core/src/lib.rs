//! Simulation core for the Wheeler three-wheel navigation device.
//!
//! [`model`] holds the UI tree and the 2D scene. [`hnav`] and [`flat`] are the
//! two navigation engines, and [`device`] routes raw inputs to them. [`cost`]
//! and [`movement`] are the analytical models; [`replay`], [`analytics`] and
//! [`protocol`] deal with logs and live sessions.

pub mod analytics;
pub mod cost;
pub mod device;
pub mod event;
pub mod fixtures;
pub mod flat;
pub mod hnav;
pub mod model;
pub mod movement;
pub mod protocol;
pub mod replay;
