//! Line-of-sight channel between two placed rings, with optional fading.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::geometry::{pairwise_distances, PlacedLink, SPEED_OF_LIGHT};

/// Complex element-to-element gains, rows = receive elements, columns = transmit elements.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelMatrix {
    pub entries: DMatrix<Complex64>,
    pub carrier: f64,
}

impl ChannelMatrix {
    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier
    }

    pub fn nrows(&self) -> usize {
        self.entries.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.entries.ncols()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|h| h.norm()).fold(0.0, f64::max)
    }
}

/// Free-space spherical-wave gain over `distance`.
///
/// `λ/(4πd) · exp(−i·2πd/λ)`; shared with the field solver so both use the
/// same propagation kernel.
#[inline]
pub fn spherical_gain(distance: f64, wavelength: f64) -> Complex64 {
    let amplitude = wavelength / (4.0 * PI * distance);
    Complex64::from_polar(amplitude, -TAU * distance / wavelength)
}

pub fn los_channel(link: &PlacedLink) -> Result<ChannelMatrix> {
    let distances = pairwise_distances(link)?;
    let lambda = SPEED_OF_LIGHT / link.carrier();
    let guard = lambda / 10.0;
    if let Some(d) = distances.iter().copied().find(|&d| d <= guard) {
        return Err(Error::ModelDomain(format!(
            "element spacing {d:.3e} m is below lambda/10 = {guard:.3e} m"
        )));
    }
    Ok(ChannelMatrix {
        entries: distances.map(|d| spherical_gain(d, lambda)),
        carrier: link.carrier(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FadingKind {
    None,
    Rician,
    Rayleigh,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FadingSpec {
    pub kind: FadingKind,
    /// Linear Rician K factor; ignored for `None` and `Rayleigh`.
    pub k_factor: f64,
}

impl FadingSpec {
    pub fn none() -> Self {
        Self {
            kind: FadingKind::None,
            k_factor: 0.0,
        }
    }

    pub fn rician(k_factor: f64) -> Result<Self> {
        if !(k_factor >= 0.0) {
            return Err(Error::invalid("channel", format!("K factor must be >= 0, got {k_factor}")));
        }
        Ok(Self {
            kind: FadingKind::Rician,
            k_factor,
        })
    }

    pub fn rayleigh() -> Self {
        Self {
            kind: FadingKind::Rayleigh,
            k_factor: 0.0,
        }
    }

    fn effective_k(&self) -> Option<f64> {
        match self.kind {
            FadingKind::None => None,
            FadingKind::Rician => Some(self.k_factor),
            FadingKind::Rayleigh => Some(0.0),
        }
    }
}

/// One unit-mean-power fading coefficient `sqrt(K/(K+1)) + sqrt(1/(K+1))·z`.
pub fn fading_coefficient<R: Rng + ?Sized>(k_factor: f64, rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    let z = Complex64::new(re, im) * FRAC_1_SQRT_2;
    let los = (k_factor / (k_factor + 1.0)).sqrt();
    let scatter = (1.0 / (k_factor + 1.0)).sqrt();
    Complex64::new(los, 0.0) + z * scatter
}

/// Multiplies every entry by an independent fading coefficient.
///
/// Entries are visited in column-major order, so the same stream state
/// always produces the same matrix.
pub fn apply_fading<R: Rng + ?Sized>(h: &ChannelMatrix, spec: &FadingSpec, rng: &mut R) -> ChannelMatrix {
    let Some(k) = spec.effective_k() else {
        return h.clone();
    };
    let mut out = h.clone();
    for entry in out.entries.iter_mut() {
        *entry *= fading_coefficient(k, rng);
    }
    out
}
