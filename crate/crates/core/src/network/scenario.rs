use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{Error, Result};

const MODULE: &str = "network";

/// Deployment and link-budget parameters shared by every drop.
#[derive(Clone, Debug, PartialEq)]
pub struct NetworkConfig {
    pub area_width_m: f64,
    pub area_height_m: f64,
    pub small_cells: usize,
    /// Users per square meter.
    pub user_density: f64,
    pub small_cell_power_w: f64,
    pub macro_power_w: f64,
    /// Half-width of the uniform jitter applied to each grid site.
    pub jitter_m: f64,
    /// Cells closer than this must not share a resource.
    pub reuse_distance_m: f64,
    pub path_loss_exponent: f64,
    /// Distance at which a user sees exactly the target SNR.
    pub cell_edge_m: f64,
    pub carrier_hz: f64,
    /// Inter-mode leakage factor κ in [0, 1].
    pub leakage: f64,
    pub target_snr_db: f64,
}

impl Default for NetworkConfig {
    fn default() -> Self {
        Self {
            area_width_m: 20.0,
            area_height_m: 20.0,
            small_cells: 4,
            user_density: 0.2,
            small_cell_power_w: 0.1,
            macro_power_w: 10.0,
            jitter_m: 0.5,
            reuse_distance_m: 12.0,
            path_loss_exponent: 3.0,
            cell_edge_m: 5.0,
            carrier_hz: 35e9,
            leakage: super::DEFAULT_LEAKAGE,
            target_snr_db: 10.0,
        }
    }
}

impl NetworkConfig {
    pub fn area(&self) -> f64 {
        self.area_width_m * self.area_height_m
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("area_width_m", self.area_width_m),
            ("area_height_m", self.area_height_m),
            ("small_cell_power_w", self.small_cell_power_w),
            ("macro_power_w", self.macro_power_w),
            ("reuse_distance_m", self.reuse_distance_m),
            ("path_loss_exponent", self.path_loss_exponent),
            ("cell_edge_m", self.cell_edge_m),
            ("carrier_hz", self.carrier_hz),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(MODULE, format!("{name} must be > 0, got {v}")));
            }
        }
        if self.small_cells == 0 {
            return Err(Error::invalid(MODULE, "need at least one small cell"));
        }
        if !(self.user_density >= 0.0 && self.user_density.is_finite()) {
            return Err(Error::invalid(MODULE, "user density must be >= 0"));
        }
        if !(self.jitter_m >= 0.0) {
            return Err(Error::invalid(MODULE, "jitter must be >= 0"));
        }
        if !(0.0..=1.0).contains(&self.leakage) {
            return Err(Error::invalid(MODULE, format!("leakage must lie in [0, 1], got {}", self.leakage)));
        }
        if !self.target_snr_db.is_finite() {
            return Err(Error::invalid(MODULE, "target SNR must be finite"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cell {
    pub position: [f64; 2],
    pub power_w: f64,
}

/// One drop: macrocell overlay, small cells and users in the area.
#[derive(Clone, Debug, PartialEq)]
pub struct NetworkScenario {
    pub width: f64,
    pub height: f64,
    pub macro_cell: Cell,
    pub small_cells: Vec<Cell>,
    pub users: Vec<[f64; 2]>,
    pub user_density: f64,
}

impl NetworkScenario {
    pub fn distance(a: [f64; 2], b: [f64; 2]) -> f64 {
        (a[0] - b[0]).hypot(a[1] - b[1])
    }

    /// Index of the nearest small cell (lowest index on ties).
    pub fn serving_cell(&self, user: [f64; 2]) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (i, c) in self.small_cells.iter().enumerate() {
            let d = Self::distance(user, c.position);
            if d < best_d {
                best = i;
                best_d = d;
            }
        }
        best
    }
}

/// Draws one deployment from `rng`.
///
/// Cells fill a near-square grid row by row, each site jittered uniformly
/// and clamped to the area; the user count is Poisson with mean
/// `density · area` and users are uniform over the area.
pub fn generate_scenario<R: Rng + ?Sized>(config: &NetworkConfig, rng: &mut R) -> Result<NetworkScenario> {
    if !(config.area() > 0.0) {
        return Err(Error::invalid(MODULE, "deployment area must be non-zero"));
    }
    config.validate()?;
    let (w, h) = (config.area_width_m, config.area_height_m);
    let cols = (config.small_cells as f64).sqrt().ceil() as usize;
    let rows = config.small_cells.div_ceil(cols);
    let (sx, sy) = (w / cols as f64, h / rows as f64);

    let mut small_cells = Vec::with_capacity(config.small_cells);
    for k in 0..config.small_cells {
        let (i, j) = (k % cols, k / cols);
        let mut jitter = || {
            if config.jitter_m > 0.0 {
                rng.random_range(-config.jitter_m..=config.jitter_m)
            } else {
                0.0
            }
        };
        let x = ((i as f64 + 0.5) * sx + jitter()).clamp(0.0, w);
        let y = ((j as f64 + 0.5) * sy + jitter()).clamp(0.0, h);
        small_cells.push(Cell {
            position: [x, y],
            power_w: config.small_cell_power_w,
        });
    }

    let mean = config.user_density * config.area();
    let count = if mean > 0.0 {
        Poisson::new(mean)
            .map_err(|e| Error::invalid(MODULE, format!("poisson mean {mean}: {e}")))?
            .sample(rng) as usize
    } else {
        0
    };
    let users = (0..count)
        .map(|_| [rng.random_range(0.0..w), rng.random_range(0.0..h)])
        .collect();

    Ok(NetworkScenario {
        width: w,
        height: h,
        macro_cell: Cell {
            position: [w / 2.0, h / 2.0],
            power_w: config.macro_power_w,
        },
        small_cells,
        users,
        user_density: config.user_density,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn poisson_user_count_mean() {
        let cfg = NetworkConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let drops = 1000;
        let total: usize = (0..drops)
            .map(|_| generate_scenario(&cfg, &mut rng).unwrap().users.len())
            .sum();
        let mean = total as f64 / drops as f64;
        assert!((76.0..=84.0).contains(&mean), "mean users {mean}");
    }

    #[test]
    fn zero_density_has_no_users() {
        let cfg = NetworkConfig {
            user_density: 0.0,
            ..Default::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            assert!(generate_scenario(&cfg, &mut rng).unwrap().users.is_empty());
        }
    }

    #[test]
    fn same_seed_same_scenario() {
        let cfg = NetworkConfig::default();
        let a = generate_scenario(&cfg, &mut ChaCha8Rng::seed_from_u64(42)).unwrap();
        let b = generate_scenario(&cfg, &mut ChaCha8Rng::seed_from_u64(42)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn everything_inside_area() {
        let cfg = NetworkConfig {
            small_cells: 7,
            jitter_m: 3.0,
            ..Default::default()
        };
        let s = generate_scenario(&cfg, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert_eq!(s.small_cells.len(), 7);
        let inside = |p: [f64; 2]| (0.0..=20.0).contains(&p[0]) && (0.0..=20.0).contains(&p[1]);
        assert!(s.small_cells.iter().all(|c| inside(c.position)));
        assert!(s.users.iter().all(|&u| inside(u)));
    }

    #[test]
    fn zero_area_rejected() {
        let cfg = NetworkConfig {
            area_width_m: 0.0,
            ..Default::default()
        };
        assert!(generate_scenario(&cfg, &mut ChaCha8Rng::seed_from_u64(1)).is_err());
    }
}
