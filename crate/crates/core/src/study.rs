//! Runs a configured study and writes its CSV artifacts.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::channel::{apply_fading, los_channel, FadingKind, FadingSpec};
use crate::config::{ArrayConfig, FieldConfig, LinkConfig, NetworkStudyConfig, RunConfig, Study};
use crate::error::{Error, Result};
use crate::field::{field_on_plane, lens_and_propagate, phase_winding, ring_radius, FieldGrid, LensSpec, PlaneSpec};
use crate::geometry::{element_positions, place_link, LinkGeometry, Point, UcaArray};
use crate::network::{run_sweep, Scheme, SWEEP_CSV_HEADER};
use crate::transceiver::{effective_mode_channel, mode_weights};

pub const FIELD_SUMMARY_HEADER: &str = "mode,ring_radius_m,peak_intensity,winding";
pub const LINK_LEAKAGE_HEADER: &str = "lateral_offset_m,tilt_rad,rx_mode,tx_mode,power_db";
pub const LINK_SUMMARY_HEADER: &str = "lateral_offset_m,tilt_rad,leakage_db";
pub const RESOLVED_CONFIG_FILE: &str = "resolved_config.toml";

/// Floor for dB values of vanishing leakage.
const DB_FLOOR: f64 = -400.0;

#[derive(Clone, Debug, Default)]
pub struct RunReport {
    pub files: Vec<PathBuf>,
}

/// Writes `name` inside `dir` through a temporary file and a rename.
fn write_atomic<F>(dir: &Path, name: &str, fill: F) -> Result<PathBuf>
where
    F: FnOnce(&mut dyn Write) -> std::io::Result<()>,
{
    let path = dir.join(name);
    let tmp = dir.join(format!(".{name}.tmp"));
    let io = |source| Error::Io {
        path: path.clone(),
        source,
    };
    let file = fs::File::create(&tmp).map_err(io)?;
    let mut w = BufWriter::new(file);
    fill(&mut w).map_err(io)?;
    w.into_inner()
        .map_err(|e| io(e.into_error()))?
        .sync_all()
        .map_err(io)?;
    fs::rename(&tmp, &path).map_err(io)?;
    Ok(path)
}

pub fn run(config: &RunConfig, out_dir: &Path) -> Result<RunReport> {
    fs::create_dir_all(out_dir).map_err(|source| Error::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let mut report = RunReport::default();
    let echo = config.to_toml();
    report
        .files
        .push(write_atomic(out_dir, RESOLVED_CONFIG_FILE, |w| w.write_all(echo.as_bytes()))?);

    let missing = |what: &str| Error::config(what, format!("section missing for the {} study", config.study));
    match config.study {
        Study::Field => {
            let array = config.array.as_ref().ok_or_else(|| missing("array"))?;
            let field = config.field.as_ref().ok_or_else(|| missing("field"))?;
            run_field(array, field, out_dir, &mut report)?;
        }
        Study::Link => {
            let array = config.array.as_ref().ok_or_else(|| missing("array"))?;
            let link = config.link.as_ref().ok_or_else(|| missing("link"))?;
            run_link(array, link, config.seed, out_dir, &mut report)?;
        }
        Study::Network => {
            let net = config.network.as_ref().ok_or_else(|| missing("network"))?;
            run_network(net, config.seed, out_dir, &mut report)?;
        }
    }
    Ok(report)
}

/// Circle used for the winding count: the bright ring, or a few cells out
/// when the beam peaks on axis.
pub fn winding_circle(grid: &FieldGrid) -> Result<f64> {
    Ok(ring_radius(grid)?.max(4.0 * grid.spacing()))
}

fn run_field(array: &ArrayConfig, cfg: &FieldConfig, out: &Path, report: &mut RunReport) -> Result<()> {
    let uca = UcaArray::new(array.num_elements, array.radius_m, array.frequency_hz)?;
    let tx = element_positions(&uca, &Point::zeros(), &Point::z(), 0.0)?;
    let plane = PlaneSpec::new(cfg.plane_z_m, cfg.plane_half_width_m, cfg.plane_samples)?;
    let lens = LensSpec::new(cfg.lens_z_m, cfg.lens_focal_length_m, cfg.lens_aperture_m)?;
    let lens_plane = PlaneSpec::new(cfg.lens_z_m, cfg.lens_aperture_m, cfg.lens_samples)?;

    let mut summary = Vec::new();
    for &l in &cfg.modes {
        let excitation = mode_weights(l, uca.num_elements())?;
        let direct = field_on_plane(&tx, &excitation, uca.carrier(), &plane)?;
        let at_lens = field_on_plane(&tx, &excitation, uca.carrier(), &lens_plane)?;
        let converged = lens_and_propagate(&at_lens, &lens, &plane)?;

        for (grid, tag) in [(&direct, "unconverged"), (&converged, "converged")] {
            let name = format!("field_l{l}_{tag}.csv");
            report.files.push(write_atomic(out, &name, |w| grid.write_csv(w))?);
        }
        let radius = ring_radius(&direct)?;
        let winding = phase_winding(&direct, winding_circle(&direct)?)?;
        summary.push((l, radius, direct.peak_intensity(), winding));
    }
    report.files.push(write_atomic(out, "field_summary.csv", |w| {
        writeln!(w, "{FIELD_SUMMARY_HEADER}")?;
        for (l, r, p, wnd) in &summary {
            writeln!(w, "{l},{r},{p},{wnd}")?;
        }
        Ok(())
    })?);
    Ok(())
}

fn to_db(x: f64) -> f64 {
    if x > 0.0 {
        (10.0 * x.log10()).max(DB_FLOOR)
    } else {
        DB_FLOOR
    }
}

fn run_link(array: &ArrayConfig, cfg: &LinkConfig, seed: u64, out: &Path, report: &mut RunReport) -> Result<()> {
    let uca = UcaArray::new(array.num_elements, array.radius_m, array.frequency_hz)?;
    let fading = match cfg.fading {
        FadingKind::None => FadingSpec::none(),
        FadingKind::Rician => FadingSpec::rician(cfg.k_factor)?,
        FadingKind::Rayleigh => FadingSpec::rayleigh(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    for &tilt in &cfg.tilts_rad {
        for &offset in &cfg.lateral_offsets_m {
            let g = LinkGeometry::new(cfg.distance_m, offset, tilt, cfg.rotation_rad)?;
            let link = place_link(&uca, &uca, &g)?;
            let h = apply_fading(&los_channel(&link)?, &fading, &mut rng);
            let mc = effective_mode_channel(&h, &cfg.modes, &cfg.modes)?;
            for (c, &tx_mode) in cfg.modes.iter().enumerate() {
                let own = mc.entries[(c, c)].norm_sqr();
                for (r, &rx_mode) in cfg.modes.iter().enumerate() {
                    let p = mc.entries[(r, c)].norm_sqr();
                    rows.push((offset, tilt, rx_mode, tx_mode, to_db(p / own)));
                }
            }
            summary.push((offset, tilt, to_db(mc.leakage_ratio())));
        }
    }
    report.files.push(write_atomic(out, "link_leakage.csv", |w| {
        writeln!(w, "{LINK_LEAKAGE_HEADER}")?;
        for (o, t, r, c, db) in &rows {
            writeln!(w, "{o},{t},{r},{c},{db}")?;
        }
        Ok(())
    })?);
    report.files.push(write_atomic(out, "link_summary.csv", |w| {
        writeln!(w, "{LINK_SUMMARY_HEADER}")?;
        for (o, t, db) in &summary {
            writeln!(w, "{o},{t},{db}")?;
        }
        Ok(())
    })?);
    Ok(())
}

fn run_network(cfg: &NetworkStudyConfig, seed: u64, out: &Path, report: &mut RunReport) -> Result<()> {
    let mut schemes: Vec<Scheme> = cfg.mode_counts.iter().map(|&m| Scheme::Mdma { modes: m }).collect();
    schemes.push(Scheme::Fdma {
        channels: cfg.fdma_channels,
    });
    let results = schemes
        .iter()
        .map(|&s| run_sweep(&cfg.network, s, cfg.axis, &cfg.points, cfg.drops, seed))
        .collect::<Result<Vec<_>>>()?;
    report.files.push(write_atomic(out, "network_sweep.csv", |w| {
        writeln!(w, "{SWEEP_CSV_HEADER}")?;
        for r in &results {
            r.write_csv(&mut *w, false)?;
        }
        Ok(())
    })?);
    Ok(())
}
