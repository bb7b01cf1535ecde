//! Radiated field of an excited ring on transverse observation planes.
//!
//! Every element is an isotropic point source and the field at a point is
//! the coherent sum of their spherical waves. A thin lens is a quadratic
//! phase mask with a hard circular aperture; behind it the masked samples
//! are re-radiated with the Rayleigh-Sommerfeld kernel.

use std::f64::consts::{PI, TAU};
use std::io::Write;

use nalgebra::DVector;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::channel::spherical_gain;
use crate::error::{Error, Result};
use crate::geometry::{Point, SPEED_OF_LIGHT};
use crate::transceiver::wrap_phase;

const MODULE: &str = "field";

/// Header of the per-plane CSV export.
pub const GRID_CSV_HEADER: &str = "x_m,y_m,re,im,intensity,phase_rad";

/// Square observation plane centered on the `z` axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlaneSpec {
    pub z: f64,
    pub half_width: f64,
    pub samples_per_axis: usize,
}

impl PlaneSpec {
    pub fn new(z: f64, half_width: f64, samples_per_axis: usize) -> Result<Self> {
        let p = Self {
            z,
            half_width,
            samples_per_axis,
        };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        if !(self.z > 0.0 && self.z.is_finite()) {
            return Err(Error::invalid(MODULE, format!("plane z must be > 0, got {}", self.z)));
        }
        if !(self.half_width > 0.0 && self.half_width.is_finite()) {
            return Err(Error::invalid(MODULE, "plane half-width must be > 0"));
        }
        if self.samples_per_axis < 16 || self.samples_per_axis % 2 == 0 {
            return Err(Error::invalid(
                MODULE,
                format!("samples per axis must be odd and >= 16, got {}", self.samples_per_axis),
            ));
        }
        Ok(())
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.samples_per_axis - 1) as f64
    }

    pub fn axis(&self) -> Vec<f64> {
        let h = self.spacing();
        let mid = (self.samples_per_axis / 2) as f64;
        (0..self.samples_per_axis).map(|i| (i as f64 - mid) * h).collect()
    }
}

/// Complex field samples on a square grid, stored row-major (`y` outer, `x` inner).
#[derive(Clone, Debug, PartialEq)]
pub struct FieldGrid {
    pub values: Vec<Complex64>,
    /// Shared `x` and `y` sample coordinates, meters.
    pub coords: Vec<f64>,
    pub z: f64,
    pub carrier: f64,
}

impl FieldGrid {
    pub fn zeros(plane: &PlaneSpec, carrier: f64) -> Self {
        let n = plane.samples_per_axis;
        Self {
            values: vec![Complex64::new(0.0, 0.0); n * n],
            coords: plane.axis(),
            z: plane.z,
            carrier,
        }
    }

    pub fn size(&self) -> usize {
        self.coords.len()
    }

    pub fn spacing(&self) -> f64 {
        self.coords[1] - self.coords[0]
    }

    pub fn half_width(&self) -> f64 {
        self.coords[self.size() - 1]
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier
    }

    /// Value at column `ix` (x) and row `iy` (y).
    pub fn at(&self, ix: usize, iy: usize) -> Complex64 {
        self.values[iy * self.size() + ix]
    }

    pub fn intensity(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().map(|v| v.norm_sqr())
    }

    pub fn peak_intensity(&self) -> f64 {
        self.intensity().fold(0.0, f64::max)
    }

    pub fn center_intensity(&self) -> f64 {
        let c = self.size() / 2;
        self.at(c, c).norm_sqr()
    }

    /// Bilinear interpolation at `(x, y)`; `None` outside the grid.
    pub fn sample(&self, x: f64, y: f64) -> Option<Complex64> {
        let n = self.size();
        let h = self.spacing();
        let fx = (x - self.coords[0]) / h;
        let fy = (y - self.coords[0]) / h;
        if !(fx >= 0.0 && fy >= 0.0 && fx <= (n - 1) as f64 && fy <= (n - 1) as f64) {
            return None;
        }
        let ix = (fx.floor() as usize).min(n - 2);
        let iy = (fy.floor() as usize).min(n - 2);
        let tx = fx - ix as f64;
        let ty = fy - iy as f64;
        let top = self.at(ix, iy) * (1.0 - tx) + self.at(ix + 1, iy) * tx;
        let bottom = self.at(ix, iy + 1) * (1.0 - tx) + self.at(ix + 1, iy + 1) * tx;
        Some(top * (1.0 - ty) + bottom * ty)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{GRID_CSV_HEADER}")?;
        let n = self.size();
        for iy in 0..n {
            for ix in 0..n {
                let v = self.at(ix, iy);
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    self.coords[ix],
                    self.coords[iy],
                    v.re,
                    v.im,
                    v.norm_sqr(),
                    v.arg()
                )?;
            }
        }
        Ok(())
    }
}

/// Evaluates `f` on every grid point, rows in parallel, preserving a fixed
/// summation order inside each point.
fn fill_grid<F>(plane: &PlaneSpec, carrier: f64, f: F) -> Result<FieldGrid>
where
    F: Fn(Point) -> Result<Complex64> + Sync,
{
    let mut grid = FieldGrid::zeros(plane, carrier);
    let coords = grid.coords.clone();
    let n = coords.len();
    grid.values
        .par_chunks_mut(n)
        .enumerate()
        .try_for_each(|(iy, row)| {
            for (ix, v) in row.iter_mut().enumerate() {
                *v = f(Point::new(coords[ix], coords[iy], plane.z))?;
            }
            Ok(())
        })?;
    Ok(grid)
}

/// Superposes the spherical waves of every driven element on `plane`.
pub fn field_on_plane(
    positions: &[Point],
    excitation: &DVector<Complex64>,
    carrier: f64,
    plane: &PlaneSpec,
) -> Result<FieldGrid> {
    plane.validate()?;
    if positions.len() != excitation.len() {
        return Err(Error::invalid(
            MODULE,
            format!(
                "{} excitations for {} elements",
                excitation.len(),
                positions.len()
            ),
        ));
    }
    let lambda = SPEED_OF_LIGHT / carrier;
    fill_grid(plane, carrier, |p| {
        let mut acc = Complex64::new(0.0, 0.0);
        for (q, e) in positions.iter().zip(excitation.iter()) {
            let r = (p - q).norm();
            if r == 0.0 {
                return Err(Error::degenerate(
                    MODULE,
                    format!("grid point ({}, {}, {}) sits on an element", p.x, p.y, p.z),
                ));
            }
            acc += e * spherical_gain(r, lambda);
        }
        Ok(acc)
    })
}

/// Ideal thin lens: plane position, focal length and hard aperture radius.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LensSpec {
    pub z_lens: f64,
    pub focal_length: f64,
    pub aperture_radius: f64,
}

impl LensSpec {
    pub fn new(z_lens: f64, focal_length: f64, aperture_radius: f64) -> Result<Self> {
        if !(z_lens > 0.0 && focal_length > 0.0 && aperture_radius > 0.0) {
            return Err(Error::invalid(
                MODULE,
                "lens position, focal length and aperture must all be > 0",
            ));
        }
        Ok(Self {
            z_lens,
            focal_length,
            aperture_radius,
        })
    }

    /// Lens-plane sampling that meets the mask Nyquist bound for a grid of
    /// the given half width, rounded up to an odd count.
    pub fn min_samples(&self, half_width: f64, wavelength: f64) -> usize {
        let r = self.aperture_radius.min(half_width * std::f64::consts::SQRT_2);
        let max_step = wavelength * self.focal_length / (2.0 * r);
        let cells = (2.0 * half_width / max_step).floor() as usize + 1;
        let n = cells + 1;
        (if n % 2 == 0 { n + 1 } else { n }).max(17)
    }
}

/// Applies the lens mask to `field_at_lens` and re-radiates onto `plane`.
pub fn lens_and_propagate(field_at_lens: &FieldGrid, lens: &LensSpec, plane: &PlaneSpec) -> Result<FieldGrid> {
    plane.validate()?;
    if (field_at_lens.z - lens.z_lens).abs() > 1e-12 * lens.z_lens.max(1.0) {
        return Err(Error::invalid(
            MODULE,
            format!(
                "input field sampled at z = {} but lens sits at z = {}",
                field_at_lens.z, lens.z_lens
            ),
        ));
    }
    if !(plane.z > lens.z_lens) {
        return Err(Error::invalid(MODULE, "observation plane must lie beyond the lens"));
    }
    let lambda = field_at_lens.wavelength();
    let k = TAU / lambda;
    let h = field_at_lens.spacing();

    // Largest mask phase step between neighbours inside the aperture.
    let r_edge = lens
        .aperture_radius
        .min(field_at_lens.half_width() * std::f64::consts::SQRT_2);
    let step = k * r_edge * h / lens.focal_length;
    if step >= PI {
        return Err(Error::Sampling {
            message: format!("mask phase step {step:.3} rad between samples"),
            required: lens.min_samples(field_at_lens.half_width(), lambda),
        });
    }

    let n = field_at_lens.size();
    let area = h * h;
    let mut sources: Vec<(Point, Complex64)> = Vec::new();
    for iy in 0..n {
        for ix in 0..n {
            let x = field_at_lens.coords[ix];
            let y = field_at_lens.coords[iy];
            let r2 = x * x + y * y;
            let v = field_at_lens.at(ix, iy);
            if r2 > lens.aperture_radius * lens.aperture_radius || v == Complex64::new(0.0, 0.0) {
                continue;
            }
            let mask = Complex64::from_polar(1.0, k * r2 / (2.0 * lens.focal_length));
            sources.push((Point::new(x, y, lens.z_lens), v * mask * area));
        }
    }

    let dz = plane.z - lens.z_lens;
    let scale = 1.0 / TAU;
    fill_grid(plane, field_at_lens.carrier, |p| {
        let mut acc = Complex64::new(0.0, 0.0);
        for (q, s) in &sources {
            let r = (p - q).norm();
            // (1/2π)·(z/R)·(1/R + ik)·exp(−ikR)/R
            let obliquity = dz / r;
            let radial = Complex64::new(1.0 / r, k);
            acc += s * radial * Complex64::from_polar(obliquity / r, -k * r);
        }
        Ok(acc * scale)
    })
}

/// Radius of the brightest ring of the azimuthally averaged intensity.
///
/// Bins are one grid cell wide and centered on multiples of the spacing;
/// only bins that fit inside the grid's inscribed circle are considered.
pub fn ring_radius(grid: &FieldGrid) -> Result<f64> {
    let h = grid.spacing();
    let nbins = (grid.half_width() / h).floor() as usize + 1;
    let mut sum = vec![0.0; nbins];
    let mut count = vec![0usize; nbins];
    let n = grid.size();
    for iy in 0..n {
        for ix in 0..n {
            let r = grid.coords[ix].hypot(grid.coords[iy]);
            let bin = (r / h + 0.5).floor() as usize;
            if bin < nbins {
                sum[bin] += grid.at(ix, iy).norm_sqr();
                count[bin] += 1;
            }
        }
    }
    let mut best = None;
    for (bin, (&s, &c)) in sum.iter().zip(&count).enumerate() {
        if c == 0 {
            continue;
        }
        let mean = s / c as f64;
        if best.is_none_or(|(_, m)| mean > m) {
            best = Some((bin, mean));
        }
    }
    match best {
        Some((bin, mean)) if mean > 0.0 => Ok(bin as f64 * h),
        _ => Err(Error::EmptyField),
    }
}

/// Number of 2π turns the phase makes around a centered circle.
pub fn phase_winding(grid: &FieldGrid, circle_radius: f64) -> Result<i64> {
    let h = grid.spacing();
    if !(circle_radius > 0.0) || circle_radius > grid.half_width() - h {
        return Err(Error::invalid(
            MODULE,
            format!("circle radius {circle_radius} does not fit the grid"),
        ));
    }
    let peak = grid.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return Err(Error::EmptyField);
    }
    // at least 64 samples, and never more than half a cell apart
    let samples = ((TAU * circle_radius / (0.5 * h)).ceil() as usize).max(64);
    let mut total = 0.0;
    let mut prev: Option<f64> = None;
    let mut first = 0.0;
    for s in 0..samples {
        let phi = TAU * s as f64 / samples as f64;
        let v = grid
            .sample(circle_radius * phi.cos(), circle_radius * phi.sin())
            .expect("circle checked to fit the grid");
        if v.norm() < 1e-6 * peak {
            return Err(Error::UndefinedPhase(format!(
                "|E| = {:.3e} at azimuth {phi:.4} rad",
                v.norm()
            )));
        }
        let arg = v.arg();
        match prev {
            Some(p) => total += wrap_phase(arg - p),
            None => first = arg,
        }
        prev = Some(arg);
    }
    total += wrap_phase(first - prev.unwrap_or(first));
    Ok((total / TAU).round() as i64)
}
