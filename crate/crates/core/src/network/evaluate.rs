use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::SPEED_OF_LIGHT;

use super::allocation::{Assignment, Scheme};
use super::scenario::{NetworkConfig, NetworkScenario};

/// Path loss, noise calibration and leakage for one drop evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinkBudget {
    pub target_snr_db: f64,
    pub leakage: f64,
    pub path_loss_exponent: f64,
    pub cell_edge_m: f64,
    pub carrier_hz: f64,
    /// Transmit power of the cell used for noise calibration.
    pub reference_power_w: f64,
}

impl From<&NetworkConfig> for LinkBudget {
    fn from(c: &NetworkConfig) -> Self {
        Self {
            target_snr_db: c.target_snr_db,
            leakage: c.leakage,
            path_loss_exponent: c.path_loss_exponent,
            cell_edge_m: c.cell_edge_m,
            carrier_hz: c.carrier_hz,
            reference_power_w: c.small_cell_power_w,
        }
    }
}

impl LinkBudget {
    /// Log-distance power gain: free space up to 1 m, exponent beyond.
    /// Distances under 1 m are clamped to the reference distance.
    pub fn path_gain(&self, distance: f64) -> f64 {
        let lambda = SPEED_OF_LIGHT / self.carrier_hz;
        let reference = (lambda / (4.0 * PI)).powi(2);
        reference * distance.max(1.0).powf(-self.path_loss_exponent)
    }

    /// Noise power that puts a cell-edge user exactly at the target SNR.
    pub fn noise_power(&self) -> f64 {
        let snr = 10f64.powf(self.target_snr_db / 10.0);
        self.reference_power_w * self.path_gain(self.cell_edge_m) / snr
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DropOutcome {
    /// SINR (linear) of each scheduled user, keyed by user index.
    pub user_sinr: BTreeMap<usize, f64>,
    /// Spectrum efficiency over the whole system band, bit/s/Hz per cell.
    pub spectrum_efficiency: f64,
    /// Set when the drop had no users at all.
    pub empty: bool,
}

/// Scores one drop.
///
/// Each user attaches to its nearest small cell and each cell serves the
/// first user in its round-robin queue; cells without users stay silent.
/// A co-labelled cell interferes at full power, a differently-labelled one
/// at `leakage` under MDMA and not at all under FDMA.
pub fn evaluate_drop(scenario: &NetworkScenario, assignment: &Assignment, budget: &LinkBudget) -> Result<DropOutcome> {
    let cells = scenario.small_cells.len();
    if assignment.labels.len() != cells {
        return Err(Error::invalid(
            "network",
            format!("assignment covers {} of {cells} cells", assignment.labels.len()),
        ));
    }
    if !(0.0..=1.0).contains(&budget.leakage) {
        return Err(Error::invalid("network", format!("leakage {} outside [0, 1]", budget.leakage)));
    }
    if scenario.users.is_empty() {
        return Ok(DropOutcome {
            user_sinr: BTreeMap::new(),
            spectrum_efficiency: 0.0,
            empty: true,
        });
    }

    let mut scheduled: Vec<Option<usize>> = vec![None; cells];
    for (u, &pos) in scenario.users.iter().enumerate() {
        let c = scenario.serving_cell(pos);
        if scheduled[c].is_none() {
            scheduled[c] = Some(u);
        }
    }

    let cross_label = match assignment.scheme {
        Scheme::Mdma { .. } => budget.leakage,
        Scheme::Fdma { .. } => 0.0,
    };
    let noise = budget.noise_power();
    let received = |cell: usize, user: [f64; 2]| {
        let c = &scenario.small_cells[cell];
        c.power_w * budget.path_gain(NetworkScenario::distance(c.position, user))
    };

    let mut user_sinr = BTreeMap::new();
    let mut rate_sum = 0.0;
    for (c, user) in scheduled.iter().enumerate() {
        let Some(u) = *user else { continue };
        let pos = scenario.users[u];
        let signal = received(c, pos);
        let interference: f64 = scheduled
            .iter()
            .enumerate()
            .filter(|&(other, s)| other != c && s.is_some())
            .map(|(other, _)| {
                let weight = if assignment.labels[other] == assignment.labels[c] {
                    1.0
                } else {
                    cross_label
                };
                weight * received(other, pos)
            })
            .sum();
        let sinr = signal / (interference + noise);
        user_sinr.insert(u, sinr);
        rate_sum += (1.0 + sinr).log2();
    }

    let band_share = match assignment.scheme {
        Scheme::Mdma { .. } => 1.0,
        Scheme::Fdma { channels } => channels as f64,
    };
    Ok(DropOutcome {
        user_sinr,
        spectrum_efficiency: rate_sum / (cells as f64 * band_share),
        empty: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::scenario::Cell;

    fn budget(snr_db: f64, leakage: f64) -> LinkBudget {
        LinkBudget::from(&NetworkConfig {
            target_snr_db: snr_db,
            leakage,
            ..Default::default()
        })
    }

    fn scenario(cells: &[[f64; 2]], users: &[[f64; 2]]) -> NetworkScenario {
        NetworkScenario {
            width: 20.0,
            height: 20.0,
            macro_cell: Cell {
                position: [10.0, 10.0],
                power_w: 10.0,
            },
            small_cells: cells.iter().map(|&position| Cell { position, power_w: 0.1 }).collect(),
            users: users.to_vec(),
            user_density: 0.0,
        }
    }

    fn mdma(labels: &[i64]) -> Assignment {
        Assignment {
            scheme: Scheme::Mdma { modes: labels.len() },
            labels: labels.to_vec(),
        }
    }

    #[test]
    fn calibration_distance_hits_target() {
        let s = scenario(&[[0.0, 0.0]], &[[3.0, 4.0]]);
        let out = evaluate_drop(&s, &mdma(&[1]), &budget(10.0, 0.0)).unwrap();
        let sinr_db = 10.0 * out.user_sinr[&0].log10();
        assert!((sinr_db - 10.0).abs() < 0.01, "{sinr_db}");
    }

    #[test]
    fn orthogonal_modes_have_no_interference() {
        let cells = [[5.0, 5.0], [15.0, 5.0], [5.0, 15.0], [15.0, 15.0]];
        let users = [[4.0, 6.0], [13.0, 5.5], [6.0, 17.0], [15.0, 12.5], [5.0, 5.5]];
        let s = scenario(&cells, &users);
        let b = budget(20.0, 0.0);
        let out = evaluate_drop(&s, &mdma(&[1, 2, 3, 4]), &b).unwrap();
        assert_eq!(out.user_sinr.len(), 4);
        let mut expected = 0.0;
        for (&u, &sinr) in &out.user_sinr {
            let c = s.serving_cell(users[u]);
            let snr = 0.1 * b.path_gain(NetworkScenario::distance(cells[c], users[u])) / b.noise_power();
            assert_eq!(sinr, snr);
            expected += (1.0 + snr).log2();
        }
        assert!((out.spectrum_efficiency - expected / 4.0).abs() < 1e-12);
        // round robin serves the first queued user; user 4 waits
        assert!(!out.user_sinr.contains_key(&4));
    }

    #[test]
    fn symmetric_cochannel_pair() {
        let s = scenario(&[[5.0, 10.0], [15.0, 10.0]], &[[7.0, 10.0], [13.0, 10.0]]);
        let out = evaluate_drop(&s, &mdma(&[1, 1]), &budget(15.0, 0.0)).unwrap();
        let a = out.user_sinr[&0];
        let b = out.user_sinr[&1];
        assert!((a - b).abs() < 1e-9 * a);
        // hand calculation: desired at 2 m, interferer at 8 m, exponent 3
        let bud = budget(15.0, 0.0);
        let sig = 0.1 * bud.path_gain(2.0);
        let int = 0.1 * bud.path_gain(8.0);
        assert!((a - sig / (int + bud.noise_power())).abs() < 1e-9 * a);
    }

    #[test]
    fn leakage_only_hits_other_modes() {
        let s = scenario(&[[5.0, 10.0], [15.0, 10.0]], &[[7.0, 10.0], [13.0, 10.0]]);
        let b = budget(15.0, 0.1);
        let out = evaluate_drop(&s, &mdma(&[1, 2]), &b).unwrap();
        let sig = 0.1 * b.path_gain(2.0);
        let int = 0.1 * 0.1 * b.path_gain(8.0);
        assert!((out.user_sinr[&0] - sig / (int + b.noise_power())).abs() < 1e-9 * out.user_sinr[&0]);
    }

    #[test]
    fn fdma_splits_band_and_isolates_channels() {
        let s = scenario(&[[5.0, 10.0], [15.0, 10.0]], &[[7.0, 10.0], [13.0, 10.0]]);
        let b = budget(15.0, 0.5);
        let a = Assignment {
            scheme: Scheme::Fdma { channels: 2 },
            labels: vec![0, 1],
        };
        let out = evaluate_drop(&s, &a, &b).unwrap();
        let snr = 0.1 * b.path_gain(2.0) / b.noise_power();
        assert!((out.user_sinr[&0] - snr).abs() < 1e-9 * snr);
        let expected = 2.0 * (1.0 + snr).log2() / (2.0 * 2.0);
        assert!((out.spectrum_efficiency - expected).abs() < 1e-12);
    }

    #[test]
    fn empty_drop_is_flagged() {
        let s = scenario(&[[5.0, 5.0]], &[]);
        let out = evaluate_drop(&s, &mdma(&[1]), &budget(10.0, 0.0)).unwrap();
        assert!(out.empty);
        assert_eq!(out.spectrum_efficiency, 0.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        let s = scenario(&[[5.0, 5.0], [6.0, 6.0]], &[[1.0, 1.0]]);
        assert!(evaluate_drop(&s, &mdma(&[1]), &budget(10.0, 0.0)).is_err());
        assert!(evaluate_drop(&s, &mdma(&[1, 2]), &budget(10.0, 1.5)).is_err());
    }
}
