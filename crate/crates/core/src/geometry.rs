//! Uniform circular arrays and transmit/receive placement.
//!
//! The transmit ring always sits at the origin with boresight `+z`. All
//! misalignment (lateral offset, tilt, ring rotation) is applied to the
//! receive ring, so an aligned link is coaxial by construction.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, Rotation3, Unit, Vector3};

use crate::error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

pub type Point = Vector3<f64>;

const MODULE: &str = "geometry";

/// A ring of equally spaced isotropic point elements.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UcaArray {
    num_elements: usize,
    radius: f64,
    carrier: f64,
}

impl UcaArray {
    /// `num_elements` may be 1, which degenerates the ring to a single
    /// element at `(radius, 0, 0)`; mode synthesis still needs at least two.
    pub fn new(num_elements: usize, radius: f64, carrier: f64) -> Result<Self> {
        if num_elements == 0 {
            return Err(Error::invalid(MODULE, "array needs at least one element"));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::invalid(MODULE, format!("radius must be > 0, got {radius}")));
        }
        if !(carrier > 0.0 && carrier.is_finite()) {
            return Err(Error::invalid(MODULE, format!("carrier must be > 0, got {carrier}")));
        }
        Ok(Self {
            num_elements,
            radius,
            carrier,
        })
    }

    pub fn num_elements(&self) -> usize {
        self.num_elements
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn carrier(&self) -> f64 {
        self.carrier
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier
    }

    /// Azimuth of element `n` on the unplaced ring.
    pub fn element_azimuth(&self, n: usize) -> f64 {
        TAU * n as f64 / self.num_elements as f64
    }
}

/// Relative placement of the receive ring.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinkGeometry {
    pub axial_distance: f64,
    pub lateral_offset: f64,
    pub tilt: f64,
    pub rotation: f64,
}

impl LinkGeometry {
    pub fn new(axial_distance: f64, lateral_offset: f64, tilt: f64, rotation: f64) -> Result<Self> {
        let g = Self {
            axial_distance,
            lateral_offset,
            tilt,
            rotation,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn aligned(axial_distance: f64) -> Result<Self> {
        Self::new(axial_distance, 0.0, 0.0, 0.0)
    }

    fn validate(&self) -> Result<()> {
        if !(self.axial_distance > 0.0 && self.axial_distance.is_finite()) {
            return Err(Error::invalid(MODULE, "axial distance must be > 0"));
        }
        if !(self.lateral_offset >= 0.0 && self.lateral_offset.is_finite()) {
            return Err(Error::invalid(MODULE, "lateral offset must be >= 0"));
        }
        if !(self.tilt.abs() < std::f64::consts::FRAC_PI_2) {
            return Err(Error::invalid(MODULE, "tilt must satisfy |tilt| < pi/2"));
        }
        if !self.rotation.is_finite() {
            return Err(Error::invalid(MODULE, "rotation must be finite"));
        }
        Ok(())
    }

    pub fn rx_center(&self) -> Point {
        Point::new(self.lateral_offset, 0.0, self.axial_distance)
    }

    /// Receive normal: `+z` tipped by `tilt` toward `+x`.
    pub fn rx_normal(&self) -> Unit<Point> {
        Unit::new_normalize(Point::new(self.tilt.sin(), 0.0, self.tilt.cos()))
    }
}

/// A transmit/receive pair with every element placed in space.
#[derive(Clone, Debug, PartialEq)]
pub struct PlacedLink {
    pub tx: UcaArray,
    pub rx: UcaArray,
    pub tx_positions: Vec<Point>,
    pub rx_positions: Vec<Point>,
}

impl PlacedLink {
    /// The same link seen from the other end.
    pub fn swapped(&self) -> Self {
        Self {
            tx: self.rx,
            rx: self.tx,
            tx_positions: self.rx_positions.clone(),
            rx_positions: self.tx_positions.clone(),
        }
    }

    /// Applies a rigid motion to every element of both rings.
    pub fn transformed(&self, rotation: &Rotation3<f64>, translation: &Point) -> Self {
        let map = |ps: &[Point]| ps.iter().map(|p| rotation * p + translation).collect();
        Self {
            tx: self.tx,
            rx: self.rx,
            tx_positions: map(&self.tx_positions),
            rx_positions: map(&self.rx_positions),
        }
    }

    pub fn carrier(&self) -> f64 {
        self.tx.carrier()
    }
}

/// Places the elements of `array` on its ring.
///
/// The in-plane frame is the image of `(x, y)` under the smallest rotation
/// taking `+z` onto `normal`; element `n` sits at angle
/// `rotation + 2πn/N` in that frame.
pub fn element_positions(
    array: &UcaArray,
    center: &Point,
    normal: &Point,
    rotation: f64,
) -> Result<Vec<Point>> {
    if (normal.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::invalid(
            MODULE,
            format!("normal must have unit norm, got {}", normal.norm()),
        ));
    }
    let frame = ring_frame(normal);
    let u = frame * Point::x();
    let v = frame * Point::y();
    let a = array.radius();
    Ok((0..array.num_elements())
        .map(|n| {
            let theta = rotation + array.element_azimuth(n);
            center + (u * theta.cos() + v * theta.sin()) * a
        })
        .collect())
}

fn ring_frame(normal: &Point) -> Rotation3<f64> {
    Rotation3::rotation_between(&Point::z(), normal)
        .unwrap_or_else(|| Rotation3::from_axis_angle(&Point::x_axis(), std::f64::consts::PI))
}

pub fn place_link(tx: &UcaArray, rx: &UcaArray, geometry: &LinkGeometry) -> Result<PlacedLink> {
    geometry.validate()?;
    let tx_positions = element_positions(tx, &Point::zeros(), &Point::z(), 0.0)?;
    let rx_positions = element_positions(
        rx,
        &geometry.rx_center(),
        &geometry.rx_normal(),
        geometry.rotation,
    )?;
    Ok(PlacedLink {
        tx: *tx,
        rx: *rx,
        tx_positions,
        rx_positions,
    })
}

/// Distance matrix, rows indexed by receive element, columns by transmit element.
pub fn pairwise_distances(link: &PlacedLink) -> Result<DMatrix<f64>> {
    let rows = link.rx_positions.len();
    let cols = link.tx_positions.len();
    let mut out = DMatrix::zeros(rows, cols);
    for (m, p) in link.rx_positions.iter().enumerate() {
        for (n, q) in link.tx_positions.iter().enumerate() {
            let d = (p - q).norm();
            if d == 0.0 {
                return Err(Error::degenerate(
                    MODULE,
                    format!("rx element {m} coincides with tx element {n}"),
                ));
            }
            out[(m, n)] = d;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn close(a: &Point, b: &Point, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn four_element_unit_ring() {
        let arr = UcaArray::new(4, 1.0, 1e9).unwrap();
        let ps = element_positions(&arr, &Point::zeros(), &Point::z(), 0.0).unwrap();
        let expected = [
            Point::new(1.0, 0.0, 0.0),
            Point::new(0.0, 1.0, 0.0),
            Point::new(-1.0, 0.0, 0.0),
            Point::new(0.0, -1.0, 0.0),
        ];
        for (p, e) in ps.iter().zip(&expected) {
            assert!(close(p, e, 1e-15), "{p:?} vs {e:?}");
        }
    }

    #[test]
    fn sixteen_elements_on_25mm_ring() {
        let arr = UcaArray::new(16, 0.025, 35e9).unwrap();
        let ps = element_positions(&arr, &Point::zeros(), &Point::z(), 0.0).unwrap();
        assert_eq!(ps.len(), 16);
        for p in &ps {
            assert!((p.norm() - 0.025).abs() < 1e-15);
        }
    }

    #[test]
    fn quarter_turn_rotation_shifts_by_one() {
        let arr = UcaArray::new(4, 1.0, 1e9).unwrap();
        let base = element_positions(&arr, &Point::zeros(), &Point::z(), 0.0).unwrap();
        let rot = element_positions(&arr, &Point::zeros(), &Point::z(), FRAC_PI_2).unwrap();
        for n in 0..4 {
            assert!(close(&rot[n], &base[(n + 1) % 4], 1e-15));
        }
    }

    #[test]
    fn non_unit_normal_rejected() {
        let arr = UcaArray::new(4, 1.0, 1e9).unwrap();
        let err = element_positions(&arr, &Point::zeros(), &Point::new(0.0, 0.0, 2.0), 0.0);
        assert!(matches!(err, Err(Error::InvalidArgument { .. })));
    }

    #[test]
    fn antiparallel_normal_still_places_ring() {
        let arr = UcaArray::new(8, 0.5, 1e9).unwrap();
        let ps = element_positions(&arr, &Point::zeros(), &-Point::z(), 0.0).unwrap();
        for p in &ps {
            assert!((p.norm() - 0.5).abs() < 1e-15);
            assert!(p.z.abs() < 1e-15);
        }
    }

    #[test]
    fn aligned_placement_is_coaxial() {
        let arr = UcaArray::new(8, 0.025, 35e9).unwrap();
        let link = place_link(&arr, &arr, &LinkGeometry::aligned(1.0).unwrap()).unwrap();
        let c: Point = link.rx_positions.iter().sum::<Point>() / 8.0;
        assert!(close(&c, &Point::new(0.0, 0.0, 1.0), 1e-15));
        for (p, q) in link.rx_positions.iter().zip(&link.tx_positions) {
            assert!((p.x - q.x).abs() < 1e-15 && (p.y - q.y).abs() < 1e-15);
        }
    }

    #[test]
    fn lateral_offset_moves_rx_center() {
        let g = LinkGeometry::new(1.0, 0.01, 0.0, 0.0).unwrap();
        assert_eq!(g.rx_center(), Point::new(0.01, 0.0, 1.0));
        let arr = UcaArray::new(8, 0.025, 35e9).unwrap();
        let link = place_link(&arr, &arr, &g).unwrap();
        let c: Point = link.rx_positions.iter().sum::<Point>() / 8.0;
        assert!(close(&c, &Point::new(0.01, 0.0, 1.0), 1e-15));
    }

    #[test]
    fn tilt_sets_normal_angle() {
        let g = LinkGeometry::new(1.0, 0.0, 0.1, 0.0).unwrap();
        let angle = g.rx_normal().dot(&Point::z()).acos();
        assert!((angle - 0.1).abs() < 1e-12);
        // the tilted ring stays orthogonal to its normal
        let arr = UcaArray::new(8, 0.025, 35e9).unwrap();
        let link = place_link(&arr, &arr, &g).unwrap();
        for p in &link.rx_positions {
            assert!((p - g.rx_center()).dot(&g.rx_normal()).abs() < 1e-15);
        }
    }

    #[test]
    fn invalid_geometry_rejected() {
        assert!(LinkGeometry::new(0.0, 0.0, 0.0, 0.0).is_err());
        assert!(LinkGeometry::new(1.0, -0.1, 0.0, 0.0).is_err());
        assert!(LinkGeometry::new(1.0, 0.0, FRAC_PI_2, 0.0).is_err());
        assert!(UcaArray::new(0, 1.0, 1.0).is_err());
        assert!(UcaArray::new(4, 0.0, 1.0).is_err());
        assert!(UcaArray::new(4, 1.0, -1.0).is_err());
    }

    #[test]
    fn aligned_distances_are_circulant() {
        let arr = UcaArray::new(8, 0.025, 35e9).unwrap();
        let link = place_link(&arr, &arr, &LinkGeometry::aligned(0.3).unwrap()).unwrap();
        let d = pairwise_distances(&link).unwrap();
        // oracle: closed-form coaxial distance for index difference k
        let oracle = |k: usize| {
            let dphi = TAU * k as f64 / 8.0;
            (0.3f64.powi(2) + 2.0 * 0.025f64.powi(2) * (1.0 - dphi.cos())).sqrt()
        };
        for m in 0..8 {
            for n in 0..8 {
                let k = (m + 8 - n) % 8;
                assert!((d[(m, n)] - oracle(k)).abs() < 1e-12 * oracle(k));
                let shifted = d[((m + 1) % 8, (n + 1) % 8)];
                assert!((d[(m, n)] - shifted).abs() <= 1e-12 * d[(m, n)]);
            }
        }
    }

    #[test]
    fn single_pair_distance() {
        let arr = UcaArray::new(1, 1e-15, 1e9).unwrap();
        let link = place_link(&arr, &arr, &LinkGeometry::aligned(2.0).unwrap()).unwrap();
        let d = pairwise_distances(&link).unwrap();
        assert_eq!(d.shape(), (1, 1));
        assert!((d[(0, 0)] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn lateral_offset_breaks_circulant_structure() {
        let arr = UcaArray::new(8, 0.025, 35e9).unwrap();
        let g = LinkGeometry::new(1.0, 0.01, 0.0, 0.0).unwrap();
        let link = place_link(&arr, &arr, &g).unwrap();
        let d = pairwise_distances(&link).unwrap();
        let worst = (0..8)
            .flat_map(|m| (0..8).map(move |n| (m, n)))
            .map(|(m, n)| (d[(m, n)] - d[((m + 1) % 8, (n + 1) % 8)]).abs())
            .fold(0.0, f64::max);
        assert!(worst > 1e-9, "worst circulant residual {worst}");
    }

    #[test]
    fn coincident_elements_rejected() {
        let arr = UcaArray::new(4, 1.0, 1e9).unwrap();
        let tx = element_positions(&arr, &Point::zeros(), &Point::z(), 0.0).unwrap();
        let link = PlacedLink {
            tx: arr,
            rx: arr,
            tx_positions: tx.clone(),
            rx_positions: tx,
        };
        assert!(matches!(
            pairwise_distances(&link),
            Err(Error::DegenerateGeometry { .. })
        ));
    }
}
