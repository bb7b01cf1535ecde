//! Mode-division versus frequency-division multiple access among small cells.
//!
//! A drop places small cells on a jittered grid and users by a homogeneous
//! Poisson process, colours the cells with OAM modes (or frequency
//! channels) so that neighbours differ, and scores the downlink spectrum
//! efficiency of one scheduled user per cell. The macrocell carries mode 0
//! in its own layer and never interferes with the small cells.

mod allocation;
mod evaluate;
mod scenario;
mod sweep;

pub use allocation::{allocate_fdma, allocate_modes, conflict_graph, greedy_coloring, Assignment, Scheme};
pub use evaluate::{evaluate_drop, DropOutcome, LinkBudget};
pub use scenario::{generate_scenario, Cell, NetworkConfig, NetworkScenario};
pub use sweep::{run_sweep, SweepAxis, SweepPoint, SweepResult, SWEEP_CSV_HEADER};

use crate::channel::los_channel;
use crate::error::Result;
use crate::geometry::{place_link, LinkGeometry, UcaArray};
use crate::transceiver::effective_mode_channel;

/// Inter-mode leakage used when none is configured.
///
/// Off-diagonal over diagonal mode power for modes −3..=3 on a 16-element,
/// 25 mm, 35 GHz ring pair at 1 m with a lateral offset of one fifth of the
/// radius; see [`calibrate_leakage`].
pub const DEFAULT_LEAKAGE: f64 = 8.417e-3;

/// Leakage factor of a misaligned ring pair: total off-diagonal power of
/// the mode channel divided by its diagonal power.
pub fn calibrate_leakage(array: &UcaArray, geometry: &LinkGeometry, modes: &[i64]) -> Result<f64> {
    let link = place_link(array, array, geometry)?;
    let h = los_channel(&link)?;
    Ok(effective_mode_channel(&h, modes, modes)?.leakage_ratio())
}
