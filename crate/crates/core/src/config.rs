//! Flat key-value run configuration.
//!
//! One TOML document fully describes a run. Keys are validated against the
//! selected study: a key that belongs to no study, or to a different one,
//! is rejected by name. Every default is filled in, and the resolved
//! configuration can be written back out and re-parsed to an equal value.

use std::fmt;
use std::str::FromStr;

use toml::{Table, Value};

use crate::channel::FadingKind;
use crate::error::{Error, Result};
use crate::network::{NetworkConfig, SweepAxis, DEFAULT_LEAKAGE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Study {
    Field,
    Link,
    Network,
}

impl Study {
    pub fn as_str(&self) -> &'static str {
        match self {
            Study::Field => "field",
            Study::Link => "link",
            Study::Network => "network",
        }
    }
}

impl fmt::Display for Study {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Study {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "field" => Ok(Study::Field),
            "link" => Ok(Study::Link),
            "network" => Ok(Study::Network),
            other => Err(Error::config("study", format!("unknown study `{other}`; expected field, link or network"))),
        }
    }
}

pub const DEFAULT_SEED: u64 = 1;

#[derive(Clone, Debug, PartialEq)]
pub struct ArrayConfig {
    pub num_elements: usize,
    pub radius_m: f64,
    pub frequency_hz: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FieldConfig {
    pub plane_z_m: f64,
    pub plane_half_width_m: f64,
    pub plane_samples: usize,
    pub modes: Vec<i64>,
    pub lens_z_m: f64,
    pub lens_focal_length_m: f64,
    pub lens_aperture_m: f64,
    pub lens_samples: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinkConfig {
    pub distance_m: f64,
    pub lateral_offsets_m: Vec<f64>,
    pub tilts_rad: Vec<f64>,
    pub rotation_rad: f64,
    pub modes: Vec<i64>,
    pub fading: FadingKind,
    pub k_factor: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NetworkStudyConfig {
    pub network: NetworkConfig,
    pub axis: SweepAxis,
    pub points: Vec<f64>,
    pub mode_counts: Vec<usize>,
    pub fdma_channels: usize,
    pub drops: usize,
}

/// Fully resolved run description.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub study: Study,
    pub seed: u64,
    pub array: Option<ArrayConfig>,
    pub field: Option<FieldConfig>,
    pub link: Option<LinkConfig>,
    pub network: Option<NetworkStudyConfig>,
}

const COMMON_KEYS: &[&str] = &["study", "seed"];
const ARRAY_KEYS: &[&str] = &["num_elements", "radius_m", "frequency_hz"];
const FIELD_KEYS: &[&str] = &[
    "plane_z_m",
    "plane_half_width_m",
    "plane_samples",
    "field_modes",
    "lens_z_m",
    "lens_focal_length_m",
    "lens_aperture_m",
    "lens_samples",
];
const LINK_KEYS: &[&str] = &[
    "distance_m",
    "lateral_offsets_m",
    "tilts_rad",
    "rotation_rad",
    "link_modes",
    "fading",
    "k_factor",
];
const NETWORK_KEYS: &[&str] = &[
    "frequency_hz",
    "area_width_m",
    "area_height_m",
    "small_cells",
    "user_density",
    "small_cell_power_w",
    "macro_power_w",
    "jitter_m",
    "reuse_distance_m",
    "path_loss_exponent",
    "cell_edge_m",
    "leakage",
    "target_snr_db",
    "sweep_axis",
    "sweep_points",
    "mode_counts",
    "fdma_channels",
    "drops",
];

fn allowed_keys(study: Study) -> Vec<&'static str> {
    let mut keys = COMMON_KEYS.to_vec();
    match study {
        Study::Field => {
            keys.extend(ARRAY_KEYS);
            keys.extend(FIELD_KEYS);
        }
        Study::Link => {
            keys.extend(ARRAY_KEYS);
            keys.extend(LINK_KEYS);
        }
        Study::Network => keys.extend(NETWORK_KEYS),
    }
    keys
}

fn is_known(key: &str) -> bool {
    [COMMON_KEYS, ARRAY_KEYS, FIELD_KEYS, LINK_KEYS, NETWORK_KEYS]
        .iter()
        .any(|set| set.contains(&key))
}

/// Typed access to a parsed document, naming the key on every failure.
struct Doc<'a>(&'a Table);

impl Doc<'_> {
    fn f64_opt(&self, key: &str) -> Result<Option<f64>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(Value::Float(v)) => Ok(Some(*v)),
            Some(Value::Integer(v)) => Ok(Some(*v as f64)),
            Some(other) => Err(Error::config(key, format!("expected a number, got {}", other.type_str()))),
        }
    }

    fn i64_opt(&self, key: &str) -> Result<Option<i64>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(Value::Integer(v)) => Ok(Some(*v)),
            Some(other) => Err(Error::config(key, format!("expected an integer, got {}", other.type_str()))),
        }
    }

    fn str_opt(&self, key: &str) -> Result<Option<&str>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s)),
            Some(other) => Err(Error::config(key, format!("expected a string, got {}", other.type_str()))),
        }
    }

    fn array_opt(&self, key: &str) -> Result<Option<&Vec<Value>>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(Value::Array(a)) => Ok(Some(a)),
            Some(other) => Err(Error::config(key, format!("expected an array, got {}", other.type_str()))),
        }
    }

    fn f64_list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        let Some(items) = self.array_opt(key)? else {
            return Ok(None);
        };
        items
            .iter()
            .map(|v| match v {
                Value::Float(x) => Ok(*x),
                Value::Integer(x) => Ok(*x as f64),
                other => Err(Error::config(key, format!("array items must be numbers, got {}", other.type_str()))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Some)
    }

    fn i64_list(&self, key: &str) -> Result<Option<Vec<i64>>> {
        let Some(items) = self.array_opt(key)? else {
            return Ok(None);
        };
        items
            .iter()
            .map(|v| match v {
                Value::Integer(x) => Ok(*x),
                other => Err(Error::config(key, format!("array items must be integers, got {}", other.type_str()))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Some)
    }

    fn f64_req(&self, key: &str, study: Study) -> Result<f64> {
        self.f64_opt(key)?
            .ok_or_else(|| Error::config(key, format!("required for the {study} study")))
    }

    fn count(&self, key: &str, default: Option<usize>, min: usize, study: Study) -> Result<usize> {
        let v = match (self.i64_opt(key)?, default) {
            (Some(v), _) => v,
            (None, Some(d)) => return Ok(d),
            (None, None) => return Err(Error::config(key, format!("required for the {study} study"))),
        };
        if v < min as i64 {
            return Err(Error::config(key, format!("must be >= {min}, got {v}")));
        }
        Ok(v as usize)
    }
}

fn positive(key: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::config(key, format!("must be > 0, got {v}")))
    }
}

fn non_negative(key: &str, v: f64) -> Result<f64> {
    if v >= 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::config(key, format!("must be >= 0, got {v}")))
    }
}

fn non_empty<T>(key: &str, v: Vec<T>) -> Result<Vec<T>> {
    if v.is_empty() {
        Err(Error::config(key, "must not be empty"))
    } else {
        Ok(v)
    }
}

/// Parses a run configuration.
///
/// `study` comes from the command line when given; a `study` key in the
/// document must then agree with it.
pub fn parse_config(text: &str, study: Option<Study>) -> Result<RunConfig> {
    let table: Table = text
        .parse()
        .map_err(|e: toml::de::Error| Error::config("<document>", e.message().to_string()))?;
    let doc = Doc(&table);

    let declared = doc.str_opt("study")?.map(Study::from_str).transpose()?;
    let study = match (declared, study) {
        (Some(d), Some(s)) if d != s => {
            return Err(Error::config("study", format!("document says `{d}` but `{s}` was requested")));
        }
        (Some(d), _) => d,
        (None, Some(s)) => s,
        (None, None) => return Err(Error::config("study", "required")),
    };

    let allowed = allowed_keys(study);
    for key in table.keys() {
        if !allowed.contains(&key.as_str()) {
            let why = if is_known(key) {
                format!("does not apply to the {study} study")
            } else {
                "unknown key".to_string()
            };
            return Err(Error::config(key.as_str(), why));
        }
    }

    let seed = match doc.i64_opt("seed")? {
        None => DEFAULT_SEED,
        Some(v) if v >= 0 => v as u64,
        Some(v) => return Err(Error::config("seed", format!("must be >= 0, got {v}"))),
    };

    let mut cfg = RunConfig {
        study,
        seed,
        array: None,
        field: None,
        link: None,
        network: None,
    };
    match study {
        Study::Field => {
            let array = parse_array(&doc, study)?;
            cfg.field = Some(parse_field(&doc, study)?);
            cfg.array = Some(array);
        }
        Study::Link => {
            let array = parse_array(&doc, study)?;
            cfg.link = Some(parse_link(&doc, study, &array)?);
            cfg.array = Some(array);
        }
        Study::Network => cfg.network = Some(parse_network(&doc)?),
    }
    Ok(cfg)
}

fn parse_array(doc: &Doc, study: Study) -> Result<ArrayConfig> {
    Ok(ArrayConfig {
        num_elements: doc
            .count("num_elements", None, 2, study)
            .map_err(|e| match e {
                Error::Config { key, message } => Error::config(key, format!("element count N {message}")),
                other => other,
            })?,
        radius_m: positive("radius_m", doc.f64_req("radius_m", study)?)?,
        frequency_hz: positive("frequency_hz", doc.f64_req("frequency_hz", study)?)?,
    })
}

fn parse_field(doc: &Doc, study: Study) -> Result<FieldConfig> {
    let plane_z_m = positive("plane_z_m", doc.f64_req("plane_z_m", study)?)?;
    let plane_samples = doc.count("plane_samples", Some(201), 17, study)?;
    let lens_samples = doc.count("lens_samples", Some(81), 17, study)?;
    for (key, n) in [("plane_samples", plane_samples), ("lens_samples", lens_samples)] {
        if n % 2 == 0 {
            return Err(Error::config(key, format!("must be odd so the axis is sampled, got {n}")));
        }
    }
    let lens_z_m = positive("lens_z_m", doc.f64_opt("lens_z_m")?.unwrap_or(0.03))?;
    if lens_z_m >= plane_z_m {
        return Err(Error::config("lens_z_m", format!("must lie before the plane at {plane_z_m} m")));
    }
    Ok(FieldConfig {
        plane_z_m,
        plane_half_width_m: positive("plane_half_width_m", doc.f64_opt("plane_half_width_m")?.unwrap_or(0.06))?,
        plane_samples,
        modes: non_empty("field_modes", doc.i64_list("field_modes")?.unwrap_or_else(|| vec![0, 1, 2, 3]))?,
        lens_z_m,
        lens_focal_length_m: positive("lens_focal_length_m", doc.f64_opt("lens_focal_length_m")?.unwrap_or(0.04))?,
        lens_aperture_m: positive("lens_aperture_m", doc.f64_opt("lens_aperture_m")?.unwrap_or(0.06))?,
        lens_samples,
    })
}

fn parse_link(doc: &Doc, study: Study, array: &ArrayConfig) -> Result<LinkConfig> {
    let a = array.radius_m;
    let offsets = doc
        .f64_list("lateral_offsets_m")?
        .unwrap_or_else(|| vec![0.0, 0.1 * a, 0.2 * a, 0.5 * a]);
    for &o in &offsets {
        non_negative("lateral_offsets_m", o)?;
    }
    let tilts = doc.f64_list("tilts_rad")?.unwrap_or_else(|| vec![0.0]);
    for &t in &tilts {
        if !(t.abs() < std::f64::consts::FRAC_PI_2) {
            return Err(Error::config("tilts_rad", format!("|tilt| must be < pi/2, got {t}")));
        }
    }
    let fading = match doc.str_opt("fading")?.unwrap_or("none") {
        "none" => FadingKind::None,
        "rician" => FadingKind::Rician,
        "rayleigh" => FadingKind::Rayleigh,
        other => return Err(Error::config("fading", format!("expected none, rician or rayleigh, got `{other}`"))),
    };
    let modes = non_empty("link_modes", doc.i64_list("link_modes")?.unwrap_or_else(|| (-3..=3).collect()))?;
    let mut seen = modes.clone();
    seen.sort();
    seen.dedup();
    if seen.len() != modes.len() {
        return Err(Error::config("link_modes", "modes must be distinct"));
    }
    Ok(LinkConfig {
        distance_m: positive("distance_m", doc.f64_req("distance_m", study)?)?,
        lateral_offsets_m: non_empty("lateral_offsets_m", offsets)?,
        tilts_rad: non_empty("tilts_rad", tilts)?,
        rotation_rad: doc.f64_opt("rotation_rad")?.unwrap_or(0.0),
        modes,
        fading,
        k_factor: non_negative("k_factor", doc.f64_opt("k_factor")?.unwrap_or(10.0))?,
    })
}

fn parse_network(doc: &Doc) -> Result<NetworkStudyConfig> {
    let d = NetworkConfig::default();
    let get = |key: &str, default: f64| -> Result<f64> { Ok(doc.f64_opt(key)?.unwrap_or(default)) };
    let network = NetworkConfig {
        area_width_m: positive("area_width_m", get("area_width_m", d.area_width_m)?)?,
        area_height_m: positive("area_height_m", get("area_height_m", d.area_height_m)?)?,
        small_cells: doc.count("small_cells", Some(d.small_cells), 1, Study::Network)?,
        user_density: non_negative("user_density", get("user_density", d.user_density)?)?,
        small_cell_power_w: positive("small_cell_power_w", get("small_cell_power_w", d.small_cell_power_w)?)?,
        macro_power_w: positive("macro_power_w", get("macro_power_w", d.macro_power_w)?)?,
        jitter_m: non_negative("jitter_m", get("jitter_m", d.jitter_m)?)?,
        reuse_distance_m: positive("reuse_distance_m", get("reuse_distance_m", d.reuse_distance_m)?)?,
        path_loss_exponent: positive("path_loss_exponent", get("path_loss_exponent", d.path_loss_exponent)?)?,
        cell_edge_m: positive("cell_edge_m", get("cell_edge_m", d.cell_edge_m)?)?,
        carrier_hz: positive("frequency_hz", get("frequency_hz", d.carrier_hz)?)?,
        leakage: {
            let k = get("leakage", DEFAULT_LEAKAGE)?;
            if !(0.0..=1.0).contains(&k) {
                return Err(Error::config("leakage", format!("must lie in [0, 1], got {k}")));
            }
            k
        },
        target_snr_db: get("target_snr_db", d.target_snr_db)?,
    };
    let axis = match doc.str_opt("sweep_axis")?.unwrap_or("snr") {
        "snr" => SweepAxis::Snr,
        "density" => SweepAxis::Density,
        "num_modes" => SweepAxis::NumModes,
        other => return Err(Error::config("sweep_axis", format!("expected snr, density or num_modes, got `{other}`"))),
    };
    let default_points: Vec<f64> = match axis {
        SweepAxis::Snr => (0..=8).map(|i| 5.0 * i as f64).collect(),
        SweepAxis::Density => vec![0.2, 0.4, 0.6, 0.8, 1.0, 1.2],
        SweepAxis::NumModes => vec![1.0, 2.0, 3.0, 4.0],
    };
    let points = non_empty("sweep_points", doc.f64_list("sweep_points")?.unwrap_or(default_points))?;
    for &p in &points {
        let ok = match axis {
            SweepAxis::Snr => p.is_finite(),
            SweepAxis::Density => p >= 0.0 && p.is_finite(),
            SweepAxis::NumModes => p >= 1.0 && p.fract() == 0.0,
        };
        if !ok {
            return Err(Error::config("sweep_points", format!("value {p} invalid for the {axis:?} axis")));
        }
    }
    let mode_counts = match doc.i64_list("mode_counts")? {
        None => vec![1, 2, 3, 4],
        Some(v) => v
            .into_iter()
            .map(|m| {
                if m >= 1 {
                    Ok(m as usize)
                } else {
                    Err(Error::config("mode_counts", format!("must be >= 1, got {m}")))
                }
            })
            .collect::<Result<_>>()?,
    };
    Ok(NetworkStudyConfig {
        network,
        axis,
        points,
        mode_counts: non_empty("mode_counts", mode_counts)?,
        fdma_channels: doc.count("fdma_channels", Some(2), 1, Study::Network)?,
        drops: doc.count("drops", Some(200), 30, Study::Network)?,
    })
}

impl RunConfig {
    /// The resolved configuration as a flat TOML document.
    pub fn to_toml(&self) -> String {
        let mut t = Table::new();
        let f = |v: f64| Value::Float(v);
        let i = |v: i64| Value::Integer(v);
        let fl = |v: &[f64]| Value::Array(v.iter().map(|&x| Value::Float(x)).collect());
        let il = |v: &[i64]| Value::Array(v.iter().map(|&x| Value::Integer(x)).collect());
        t.insert("study".into(), Value::String(self.study.to_string()));
        t.insert("seed".into(), i(self.seed as i64));
        if let Some(a) = &self.array {
            t.insert("num_elements".into(), i(a.num_elements as i64));
            t.insert("radius_m".into(), f(a.radius_m));
            t.insert("frequency_hz".into(), f(a.frequency_hz));
        }
        if let Some(c) = &self.field {
            t.insert("plane_z_m".into(), f(c.plane_z_m));
            t.insert("plane_half_width_m".into(), f(c.plane_half_width_m));
            t.insert("plane_samples".into(), i(c.plane_samples as i64));
            t.insert("field_modes".into(), il(&c.modes));
            t.insert("lens_z_m".into(), f(c.lens_z_m));
            t.insert("lens_focal_length_m".into(), f(c.lens_focal_length_m));
            t.insert("lens_aperture_m".into(), f(c.lens_aperture_m));
            t.insert("lens_samples".into(), i(c.lens_samples as i64));
        }
        if let Some(c) = &self.link {
            t.insert("distance_m".into(), f(c.distance_m));
            t.insert("lateral_offsets_m".into(), fl(&c.lateral_offsets_m));
            t.insert("tilts_rad".into(), fl(&c.tilts_rad));
            t.insert("rotation_rad".into(), f(c.rotation_rad));
            t.insert("link_modes".into(), il(&c.modes));
            let fading = match c.fading {
                FadingKind::None => "none",
                FadingKind::Rician => "rician",
                FadingKind::Rayleigh => "rayleigh",
            };
            t.insert("fading".into(), Value::String(fading.into()));
            t.insert("k_factor".into(), f(c.k_factor));
        }
        if let Some(c) = &self.network {
            let n = &c.network;
            t.insert("frequency_hz".into(), f(n.carrier_hz));
            t.insert("area_width_m".into(), f(n.area_width_m));
            t.insert("area_height_m".into(), f(n.area_height_m));
            t.insert("small_cells".into(), i(n.small_cells as i64));
            t.insert("user_density".into(), f(n.user_density));
            t.insert("small_cell_power_w".into(), f(n.small_cell_power_w));
            t.insert("macro_power_w".into(), f(n.macro_power_w));
            t.insert("jitter_m".into(), f(n.jitter_m));
            t.insert("reuse_distance_m".into(), f(n.reuse_distance_m));
            t.insert("path_loss_exponent".into(), f(n.path_loss_exponent));
            t.insert("cell_edge_m".into(), f(n.cell_edge_m));
            t.insert("leakage".into(), f(n.leakage));
            t.insert("target_snr_db".into(), f(n.target_snr_db));
            let axis = match c.axis {
                SweepAxis::Snr => "snr",
                SweepAxis::Density => "density",
                SweepAxis::NumModes => "num_modes",
            };
            t.insert("sweep_axis".into(), Value::String(axis.into()));
            t.insert("sweep_points".into(), fl(&c.points));
            let counts: Vec<i64> = c.mode_counts.iter().map(|&m| m as i64).collect();
            t.insert("mode_counts".into(), il(&counts));
            t.insert("fdma_channels".into(), i(c.fdma_channels as i64));
            t.insert("drops".into(), i(c.drops as i64));
        }
        toml::to_string(&t).expect("flat table always serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL_FIELD: &str = "num_elements = 16\nradius_m = 0.025\nfrequency_hz = 35e9\nplane_z_m = 0.1\n";

    #[test]
    fn minimal_field_config_gets_defaults() {
        let cfg = parse_config(MINIMAL_FIELD, Some(Study::Field)).unwrap();
        let a = cfg.array.as_ref().unwrap();
        assert_eq!((a.num_elements, a.radius_m, a.frequency_hz), (16, 0.025, 35e9));
        let f = cfg.field.as_ref().unwrap();
        assert_eq!(f.plane_z_m, 0.1);
        assert_eq!(f.plane_samples, 201);
        assert_eq!(f.plane_half_width_m, 0.06);
        assert_eq!(f.modes, vec![0, 1, 2, 3]);
        assert_eq!(cfg.seed, DEFAULT_SEED);
    }

    #[test]
    fn zero_elements_names_the_key() {
        let text = MINIMAL_FIELD.replace("num_elements = 16", "num_elements = 0");
        let err = parse_config(&text, Some(Study::Field)).unwrap_err().to_string();
        assert!(err.contains("num_elements") && err.contains('N'), "{err}");
    }

    #[test]
    fn unknown_key_rejected_by_name() {
        let err = parse_config(&format!("{MINIMAL_FIELD}foo = 1\n"), Some(Study::Field))
            .unwrap_err()
            .to_string();
        assert!(err.contains("`foo`") && err.contains("unknown"), "{err}");
    }

    #[test]
    fn other_study_key_rejected() {
        let err = parse_config(&format!("{MINIMAL_FIELD}drops = 40\n"), Some(Study::Field))
            .unwrap_err()
            .to_string();
        assert!(err.contains("`drops`"), "{err}");
    }

    #[test]
    fn malformed_number_names_key() {
        let text = MINIMAL_FIELD.replace("radius_m = 0.025", "radius_m = \"wide\"");
        let err = parse_config(&text, Some(Study::Field)).unwrap_err().to_string();
        assert!(err.contains("`radius_m`") && err.contains("number"), "{err}");
    }

    #[test]
    fn missing_required_key() {
        let err = parse_config("num_elements = 16\nradius_m = 0.025\nfrequency_hz = 35e9\n", Some(Study::Field))
            .unwrap_err()
            .to_string();
        assert!(err.contains("`plane_z_m`") && err.contains("required"), "{err}");
    }

    #[test]
    fn study_mismatch_and_absence() {
        assert!(parse_config("study = \"link\"\n", Some(Study::Network)).is_err());
        assert!(parse_config("", None).is_err());
        let cfg = parse_config("study = \"network\"\n", None).unwrap();
        assert_eq!(cfg.study, Study::Network);
        assert!(parse_config("study = \"weather\"\n", None).is_err());
    }

    #[test]
    fn network_defaults() {
        let cfg = parse_config("", Some(Study::Network)).unwrap();
        let n = cfg.network.unwrap();
        assert_eq!(n.network, NetworkConfig::default());
        assert_eq!(n.drops, 200);
        assert_eq!(n.mode_counts, vec![1, 2, 3, 4]);
        assert_eq!(n.fdma_channels, 2);
        assert_eq!(n.points.len(), 9);
    }

    #[test]
    fn out_of_range_values() {
        for (text, key) in [
            ("drops = 10\n", "drops"),
            ("leakage = 2.0\n", "leakage"),
            ("user_density = -1\n", "user_density"),
            ("sweep_axis = \"num_modes\"\nsweep_points = [0.5]\n", "sweep_points"),
        ] {
            let err = parse_config(text, Some(Study::Network)).unwrap_err().to_string();
            assert!(err.contains(&format!("`{key}`")), "{text}: {err}");
        }
    }

    #[test]
    fn resolved_config_round_trips() {
        let link = "num_elements = 8\nradius_m = 0.03\nfrequency_hz = 2.8e10\ndistance_m = 0.7\nfading = \"rician\"\nseed = 77\n";
        for (text, study) in [
            (MINIMAL_FIELD, Study::Field),
            (link, Study::Link),
            ("sweep_axis = \"density\"\nleakage = 0.0\n", Study::Network),
        ] {
            let cfg = parse_config(text, Some(study)).unwrap();
            let again = parse_config(&cfg.to_toml(), None).unwrap();
            assert_eq!(cfg, again);
        }
    }
}
