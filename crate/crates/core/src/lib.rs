//! Orbital-angular-momentum radio simulator.
//!
//! Link level: uniform circular arrays, the line-of-sight channel between
//! them, and spatial-DFT mode multiplexing. Field level: radiated vortex
//! beams, thin-lens convergence, ring radius and phase winding. Network
//! level: mode-division versus frequency-division multiple access among
//! small cells.

pub mod channel;
pub mod config;
pub mod error;
pub mod field;
pub mod geometry;
pub mod network;
pub mod study;
pub mod transceiver;

pub use error::{Error, Result};
