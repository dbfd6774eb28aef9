//! Simulation core for airborne plant-to-plant signalling with green leaf
//! volatiles: pulsed emission, stochastic advection-diffusion transport,
//! leaf uptake, and an enzymatic receiver cascade, plus the analysis
//! campaigns built on top.

pub mod analyses;
pub mod channel;
pub mod config;
pub mod error;
pub mod exec;
pub mod loss;
pub mod molecule;
pub mod output;
pub mod receiver;
pub mod rng;
pub mod transmitter;
pub mod units;
pub mod uptake;
pub mod wind;

pub use error::{GlvError, Result};
