use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

use super::allocation::{allocate_fdma, allocate_modes, Scheme};
use super::evaluate::{evaluate_drop, LinkBudget};
use super::scenario::{generate_scenario, NetworkConfig};

pub const SWEEP_CSV_HEADER: &str = "axis_value,scheme,num_resources,mean_se_bps_hz,ci95_half,drops";

const MIN_DROPS: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepAxis {
    /// Cell-edge SNR in dB.
    Snr,
    /// Users per square meter.
    Density,
    /// Number of modes (or channels) owned by the scheme.
    NumModes,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepPoint {
    pub axis_value: f64,
    pub num_resources: usize,
    pub mean_se: f64,
    pub ci95_half: f64,
    pub drops: usize,
    pub empty_drops: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub axis: SweepAxis,
    pub scheme: Scheme,
    pub points: Vec<SweepPoint>,
}

impl SweepResult {
    pub fn write_csv<W: Write>(&self, mut out: W, with_header: bool) -> std::io::Result<()> {
        if with_header {
            writeln!(out, "{SWEEP_CSV_HEADER}")?;
        }
        for p in &self.points {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                p.axis_value,
                self.scheme.name(),
                p.num_resources,
                p.mean_se,
                p.ci95_half,
                p.drops
            )?;
        }
        Ok(())
    }
}

/// Random stream for one drop, fixed by the master seed and the
/// `(point, drop)` coordinates alone.
pub(crate) fn drop_stream(master_seed: u64, point: usize, drop: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(((point as u64) << 32) | drop as u64);
    rng
}

fn resources_at(axis: SweepAxis, scheme: Scheme, value: f64) -> Result<Scheme> {
    if axis != SweepAxis::NumModes {
        return Ok(scheme);
    }
    if !(value >= 1.0 && value.fract() == 0.0) {
        return Err(Error::invalid("network", format!("resource count {value} is not a positive integer")));
    }
    Ok(scheme.with_resources(value as usize))
}

/// Averages the drop spectrum efficiency at every sweep point.
///
/// Drops run in parallel but are reduced in index order, so the result is
/// identical for any thread count.
pub fn run_sweep(
    config: &NetworkConfig,
    scheme: Scheme,
    axis: SweepAxis,
    points: &[f64],
    drops: usize,
    master_seed: u64,
) -> Result<SweepResult> {
    if drops < MIN_DROPS {
        return Err(Error::invalid("network", format!("need at least {MIN_DROPS} drops, got {drops}")));
    }
    if scheme.resources() == 0 {
        return Err(Error::invalid("network", "scheme needs at least one resource"));
    }
    let mut out = Vec::with_capacity(points.len());
    for (pi, &value) in points.iter().enumerate() {
        let mut cfg = config.clone();
        match axis {
            SweepAxis::Snr => cfg.target_snr_db = value,
            SweepAxis::Density => cfg.user_density = value,
            SweepAxis::NumModes => {}
        }
        cfg.validate()?;
        let scheme = resources_at(axis, scheme, value)?;
        let budget = LinkBudget::from(&cfg);

        let results: Vec<(f64, bool)> = (0..drops)
            .into_par_iter()
            .map(|d| {
                let mut rng = drop_stream(master_seed, pi, d);
                let scenario = generate_scenario(&cfg, &mut rng)?;
                let assignment = match scheme {
                    Scheme::Mdma { modes } => allocate_modes(&scenario, modes, cfg.reuse_distance_m),
                    Scheme::Fdma { channels } => allocate_fdma(&scenario, channels, cfg.reuse_distance_m),
                };
                let o = evaluate_drop(&scenario, &assignment, &budget)?;
                Ok((o.spectrum_efficiency, o.empty))
            })
            .collect::<Result<_>>()?;

        let n = results.len() as f64;
        let mean = results.iter().map(|r| r.0).sum::<f64>() / n;
        let var = results.iter().map(|r| (r.0 - mean).powi(2)).sum::<f64>() / (n - 1.0);
        out.push(SweepPoint {
            axis_value: value,
            num_resources: scheme.resources(),
            mean_se: mean,
            ci95_half: 1.96 * (var / n).sqrt(),
            drops,
            empty_drops: results.iter().filter(|r| r.1).count(),
        });
    }
    Ok(SweepResult {
        axis,
        scheme,
        points: out,
    })
}
