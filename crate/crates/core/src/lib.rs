//! Textile defect inspection toolkit.
//!
//! The inspection path runs an RGB fabric image through grayscale conversion,
//! a 7x7 low-pass filter, histogram-peak thresholding and size-based noise
//! removal ([`imaging`]), reduces the surviving defect regions to four scaled
//! geometric features ([`features`]), and classifies them with a step-activation
//! feedforward network whose weights are evolved by a bit-string genetic
//! algorithm ([`gann`]).
//!
//! [`dataset`] provides a seeded synthetic knitted-fabric corpus together with
//! the rotating 53/47 split-and-retrain protocol, and [`experiments`] runs the
//! one-parameter sweeps and writes their CSV reports.

pub mod dataset;
pub mod error;
pub mod experiments;
pub mod features;
pub mod gann;
pub mod imaging;
pub mod seed;

pub use error::{Error, Result};
