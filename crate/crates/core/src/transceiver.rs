//! OAM mode synthesis and separation on a uniform circular array.
//!
//! Mode `l` drives element `n` with phase `2πln/N`; the weights are scaled
//! by `1/sqrt(N)` so that the set of all `N` modes forms a unitary spatial
//! DFT. Because a ring of `N` samples cannot tell `l` from `l + N`, every
//! order is kept in the alias class `(−⌊N/2⌋, ⌊N/2⌋]`.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::channel::ChannelMatrix;
use crate::error::{Error, Result};

const MODULE: &str = "transceiver";

/// Maps any integer order onto its representative in `(−⌊N/2⌋, ⌊N/2⌋]`.
pub fn canonical_mode(l: i64, num_elements: usize) -> i64 {
    let n = num_elements as i64;
    let half = n / 2;
    let r = l.rem_euclid(n);
    if r > half {
        r - n
    } else {
        r
    }
}

pub fn is_representable(l: i64, num_elements: usize) -> bool {
    canonical_mode(l, num_elements) == l
}

/// All representable orders for an `N`-element ring, ascending.
pub fn representable_modes(num_elements: usize) -> Vec<i64> {
    let n = num_elements as i64;
    let half = n / 2;
    ((half - n + 1)..=half).collect()
}

fn check_elements(num_elements: usize) -> Result<()> {
    if num_elements < 2 {
        return Err(Error::invalid(
            MODULE,
            format!("mode synthesis needs N >= 2 elements, got {num_elements}"),
        ));
    }
    Ok(())
}

/// Unit-norm element weights `exp(i·2πln/N)/sqrt(N)`.
pub fn mode_weights(l: i64, num_elements: usize) -> Result<DVector<Complex64>> {
    check_elements(num_elements)?;
    let l = canonical_mode(l, num_elements);
    let n = num_elements as f64;
    let scale = 1.0 / n.sqrt();
    Ok(DVector::from_iterator(
        num_elements,
        (0..num_elements).map(|k| {
            // reduce l·k mod N before scaling so large products keep full precision
            let step = (l * k as i64).rem_euclid(num_elements as i64) as f64;
            Complex64::from_polar(scale, TAU * step / n)
        }),
    ))
}

/// Symbols carried per OAM order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ModeExcitation {
    entries: BTreeMap<i64, Complex64>,
}

impl ModeExcitation {
    pub fn new<I: IntoIterator<Item = (i64, Complex64)>>(pairs: I) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (l, s) in pairs {
            if entries.insert(l, s).is_some() {
                return Err(Error::invalid(MODULE, format!("mode {l} given twice")));
            }
        }
        Ok(Self { entries })
    }

    pub fn single(l: i64, symbol: Complex64) -> Self {
        Self {
            entries: BTreeMap::from([(l, symbol)]),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.entries.iter().map(|(&l, &s)| (l, s))
    }

    pub fn modes(&self) -> Vec<i64> {
        self.entries.keys().copied().collect()
    }

    pub fn get(&self, l: i64) -> Option<Complex64> {
        self.entries.get(&l).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Superposes the weighted modes into one element-excitation vector.
///
/// Orders outside the alias class are folded into it first; two orders that
/// fold onto the same class are rejected as duplicates.
pub fn multiplex(x: &ModeExcitation, num_elements: usize) -> Result<DVector<Complex64>> {
    check_elements(num_elements)?;
    let mut seen = BTreeMap::new();
    let mut out = DVector::zeros(num_elements);
    for (l, s) in x.iter() {
        let c = canonical_mode(l, num_elements);
        if let Some(prev) = seen.insert(c, l) {
            return Err(Error::invalid(
                MODULE,
                format!("modes {prev} and {l} alias to {c} on a {num_elements}-element ring"),
            ));
        }
        out += mode_weights(c, num_elements)? * s;
    }
    Ok(out)
}

/// Projects the received element samples onto each requested mode.
pub fn demultiplex(y: &DVector<Complex64>, modes: &[i64]) -> Result<BTreeMap<i64, Complex64>> {
    let n = y.len();
    check_elements(n)?;
    modes
        .iter()
        .map(|&l| Ok((l, mode_weights(l, n)?.dotc(y))))
        .collect()
}

/// Channel seen between transmit and receive OAM orders.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeChannel {
    /// Rows follow `rx_modes`, columns follow `tx_modes`.
    pub entries: DMatrix<Complex64>,
    pub rx_modes: Vec<i64>,
    pub tx_modes: Vec<i64>,
}

impl ModeChannel {
    pub fn get(&self, rx_mode: i64, tx_mode: i64) -> Option<Complex64> {
        let r = self.rx_modes.iter().position(|&l| l == rx_mode)?;
        let c = self.tx_modes.iter().position(|&l| l == tx_mode)?;
        Some(self.entries[(r, c)])
    }

    fn split_power(&self) -> (f64, f64) {
        let mut diag = 0.0;
        let mut off = 0.0;
        for (r, lr) in self.rx_modes.iter().enumerate() {
            for (c, lc) in self.tx_modes.iter().enumerate() {
                let p = self.entries[(r, c)].norm_sqr();
                if lr == lc {
                    diag += p;
                } else {
                    off += p;
                }
            }
        }
        (diag, off)
    }

    /// Total power on matching rx/tx orders.
    pub fn diagonal_power(&self) -> f64 {
        self.split_power().0
    }

    /// Total power crossing between different orders.
    pub fn offdiagonal_power(&self) -> f64 {
        self.split_power().1
    }

    /// Off-diagonal over diagonal power (linear).
    pub fn leakage_ratio(&self) -> f64 {
        let (diag, off) = self.split_power();
        off / diag
    }
}

/// Mode-domain channel `w_{l'}^H · H · w_l` for every receive order `l'`
/// and transmit order `l`.
pub fn effective_mode_channel(h: &ChannelMatrix, tx_modes: &[i64], rx_modes: &[i64]) -> Result<ModeChannel> {
    effective_mode_channel_raw(&h.entries, tx_modes, rx_modes)
}

pub(crate) fn effective_mode_channel_raw(
    h: &DMatrix<Complex64>,
    tx_modes: &[i64],
    rx_modes: &[i64],
) -> Result<ModeChannel> {
    let (n_rx, n_tx) = h.shape();
    if n_rx < 2 || n_tx < 2 {
        return Err(Error::invalid(
            MODULE,
            format!("channel {n_rx}x{n_tx} too small for mode weights"),
        ));
    }
    let tx_w: Vec<_> = tx_modes.iter().map(|&l| mode_weights(l, n_tx)).collect::<Result<_>>()?;
    let rx_w: Vec<_> = rx_modes.iter().map(|&l| mode_weights(l, n_rx)).collect::<Result<_>>()?;
    let projected: Vec<DVector<Complex64>> = tx_w.iter().map(|w| h * w).collect();
    let entries = DMatrix::from_fn(rx_modes.len(), tx_modes.len(), |r, c| rx_w[r].dotc(&projected[c]));
    Ok(ModeChannel {
        entries,
        rx_modes: rx_modes.to_vec(),
        tx_modes: tx_modes.to_vec(),
    })
}

/// Equal transmit power on every listed mode, summing to `total`.
pub fn equal_power_split(total: f64, modes: &[i64]) -> BTreeMap<i64, f64> {
    let share = if modes.is_empty() { 0.0 } else { total / modes.len() as f64 };
    modes.iter().map(|&l| (l, share)).collect()
}

/// Per-mode SINR when every transmit mode is active at the given power.
///
/// Only receive orders that are also transmitted get an entry; a mode with
/// no power listed transmits nothing.
pub fn mode_sinr(mc: &ModeChannel, tx_power: &BTreeMap<i64, f64>, noise_power: f64) -> Result<BTreeMap<i64, f64>> {
    if !(noise_power > 0.0) {
        return Err(Error::invalid(MODULE, format!("noise power must be > 0, got {noise_power}")));
    }
    if let Some((l, p)) = tx_power.iter().find(|(_, &p)| !(p >= 0.0)) {
        return Err(Error::invalid(MODULE, format!("power on mode {l} must be >= 0, got {p}")));
    }
    let power = |l: i64| tx_power.get(&l).copied().unwrap_or(0.0);
    let mut out = BTreeMap::new();
    for (r, &wanted) in mc.rx_modes.iter().enumerate() {
        let Some(c) = mc.tx_modes.iter().position(|&l| l == wanted) else {
            continue;
        };
        let signal = power(wanted) * mc.entries[(r, c)].norm_sqr();
        let interference: f64 = mc
            .tx_modes
            .iter()
            .enumerate()
            .filter(|&(_, &l)| l != wanted)
            .map(|(k, &l)| power(l) * mc.entries[(r, k)].norm_sqr())
            .sum();
        out.insert(wanted, signal / (interference + noise_power));
    }
    Ok(out)
}

/// Fourier-series coefficients of `exp(i·l_frac·φ)` on the integer orders.
///
/// `c_m = exp(iπδ)·sin(πδ)/(πδ)` with `δ = l_frac − m`, which is the closed
/// form of the projection integral written so that `δ → 0` stays exact.
pub fn fractional_mode_spectrum(l_frac: f64, modes: &[i64]) -> BTreeMap<i64, Complex64> {
    modes
        .iter()
        .map(|&m| {
            let delta = l_frac - m as f64;
            let x = PI * delta;
            let sinc = if x == 0.0 { 1.0 } else { x.sin() / x };
            (m, Complex64::from_polar(sinc, x))
        })
        .collect()
}

/// Wraps an angle into `(−π, π]`.
pub fn wrap_phase(phase: f64) -> f64 {
    let w = phase.rem_euclid(TAU);
    if w > PI {
        w - TAU
    } else {
        w
    }
}

/// Phase-gradient estimate of the OAM order from two azimuthal samples.
///
/// Unambiguous while `|l·Δφ| < π`.
pub fn estimate_mode_pgm(phase_a: f64, phase_b: f64, azimuth_a: f64, azimuth_b: f64) -> Result<i64> {
    let dphi = azimuth_b - azimuth_a;
    if dphi == 0.0 || !dphi.is_finite() {
        return Err(Error::invalid(MODULE, "sample azimuths must differ"));
    }
    Ok((wrap_phase(phase_b - phase_a) / dphi).round() as i64)
}
