use std::f64::consts::PI;

use num_complex::Complex64;
use vortexlink::field::{field_on_plane, lens_and_propagate, phase_winding, ring_radius, FieldGrid, LensSpec, PlaneSpec};
use vortexlink::geometry::{element_positions, Point, UcaArray};
use vortexlink::transceiver::{estimate_mode_pgm, mode_weights};

const F: f64 = 35e9;

fn array() -> (UcaArray, Vec<Point>) {
    let uca = UcaArray::new(16, 0.025, F).unwrap();
    let pos = element_positions(&uca, &Point::zeros(), &Point::z(), 0.0).unwrap();
    (uca, pos)
}

fn beam(l: i64, plane: &PlaneSpec) -> FieldGrid {
    let (uca, pos) = array();
    field_on_plane(&pos, &mode_weights(l, 16).unwrap(), uca.carrier(), plane).unwrap()
}

fn standard_plane(z: f64) -> PlaneSpec {
    PlaneSpec::new(z, 0.06, 121).unwrap()
}

#[test]
fn fundamental_mode_peaks_on_axis() {
    let g = beam(0, &standard_plane(0.1));
    assert!((g.center_intensity() - g.peak_intensity()).abs() <= 1e-12 * g.peak_intensity());
}

#[test]
fn vortex_modes_are_hollow() {
    for l in 1..=3 {
        let g = beam(l, &standard_plane(0.1));
        assert!(g.center_intensity() < 0.01 * g.peak_intensity(), "l={l}");
    }
}

#[test]
fn winding_matches_mode() {
    let plane = standard_plane(0.1);
    for l in -3..=3 {
        let g = beam(l, &plane);
        let r = ring_radius(&g).unwrap().max(4.0 * g.spacing());
        assert_eq!(phase_winding(&g, r).unwrap(), l);
    }
}

#[test]
fn two_point_estimate_recovers_negative_mode() {
    let g = beam(-3, &standard_plane(0.1));
    let r = ring_radius(&g).unwrap();
    let (a, b): (f64, f64) = (0.3, 0.3 + PI / 8.0);
    let pa = g.sample(r * a.cos(), r * a.sin()).unwrap().arg();
    let pb = g.sample(r * b.cos(), r * b.sin()).unwrap().arg();
    assert_eq!(estimate_mode_pgm(pa, pb, a, b).unwrap(), -3);
}

#[test]
fn field_is_linear_in_excitation() {
    let (uca, pos) = array();
    let plane = PlaneSpec::new(0.1, 0.04, 41).unwrap();
    let w1 = mode_weights(1, 16).unwrap();
    let w2 = mode_weights(-2, 16).unwrap();
    let (a, b) = (Complex64::new(0.7, -0.2), Complex64::new(-1.1, 0.4));
    let sum = &w1 * a + &w2 * b;
    let g1 = field_on_plane(&pos, &w1, uca.carrier(), &plane).unwrap();
    let g2 = field_on_plane(&pos, &w2, uca.carrier(), &plane).unwrap();
    let gs = field_on_plane(&pos, &sum, uca.carrier(), &plane).unwrap();
    let scale = gs.peak_intensity().sqrt();
    for ((x, y), z) in g1.values.iter().zip(&g2.values).zip(&gs.values) {
        assert!((x * a + y * b - z).norm() <= 1e-12 * scale);
    }
}

#[test]
fn ring_radius_ordering_and_divergence() {
    let mut previous: Option<Vec<f64>> = None;
    for z in [0.05, 0.1, 0.2] {
        let plane = PlaneSpec::new(z, 0.1, 161).unwrap();
        let radii: Vec<f64> = (0..=3).map(|l| ring_radius(&beam(l, &plane)).unwrap()).collect();
        for w in radii.windows(2) {
            assert!(w[1] >= w[0], "z={z} {radii:?}");
        }
        if let Some(p) = &previous {
            for l in 1..=3 {
                assert!(radii[l] >= p[l], "l={l} z={z}");
            }
        }
        previous = Some(radii);
    }
}

#[test]
fn peak_intensity_falls_with_mode() {
    let plane = standard_plane(0.1);
    let peaks: Vec<f64> = (0..=3).map(|l| beam(l, &plane).peak_intensity()).collect();
    for w in peaks.windows(2) {
        assert!(w[1] <= w[0], "{peaks:?}");
    }
}

#[test]
fn flat_mask_reproduces_free_space() {
    // An effectively infinite focal length turns the lens into a plain
    // aperture; a wide one should then re-create the direct field.
    let (uca, pos) = array();
    let w = mode_weights(1, 16).unwrap();
    let z_lens = 0.07;
    let lens_plane = PlaneSpec::new(z_lens, 0.2, 267).unwrap();
    let at_lens = field_on_plane(&pos, &w, uca.carrier(), &lens_plane).unwrap();
    let lens = LensSpec::new(z_lens, 1e12, 1.0).unwrap();
    let out_plane = PlaneSpec::new(0.1, 0.03, 21).unwrap();
    let propagated = lens_and_propagate(&at_lens, &lens, &out_plane).unwrap();
    let direct = field_on_plane(&pos, &w, uca.carrier(), &out_plane).unwrap();

    let err: f64 = propagated.values.iter().zip(&direct.values).map(|(a, b)| (a - b).norm_sqr()).sum();
    let norm: f64 = direct.values.iter().map(|v| v.norm_sqr()).sum();
    let rms = (err / norm).sqrt();
    assert!(rms < 0.02, "relative rms {rms}");
}

#[test]
fn lens_concentrates_the_ring() {
    let (uca, pos) = array();
    let plane = PlaneSpec::new(0.1, 0.06, 61).unwrap();
    let lens = LensSpec::new(0.03, 0.04, 0.06).unwrap();
    let lens_plane = PlaneSpec::new(0.03, 0.06, 81).unwrap();
    let l = 2;
    let w = mode_weights(l, 16).unwrap();
    let direct = field_on_plane(&pos, &w, uca.carrier(), &plane).unwrap();
    let at_lens = field_on_plane(&pos, &w, uca.carrier(), &lens_plane).unwrap();
    let converged = lens_and_propagate(&at_lens, &lens, &plane).unwrap();
    assert!(ring_radius(&converged).unwrap() < ring_radius(&direct).unwrap());
    assert!(converged.peak_intensity() > direct.peak_intensity());
}

#[test]
fn undersampled_lens_plane_is_rejected() {
    let (uca, pos) = array();
    let lens = LensSpec::new(0.03, 0.021, 0.06).unwrap();
    let lens_plane = PlaneSpec::new(0.03, 0.06, 81).unwrap();
    let at_lens = field_on_plane(&pos, &mode_weights(1, 16).unwrap(), uca.carrier(), &lens_plane).unwrap();
    let err = lens_and_propagate(&at_lens, &lens, &standard_plane(0.1)).unwrap_err();
    match err {
        vortexlink::Error::Sampling { required, .. } => assert!(required > 81),
        other => panic!("unexpected {other}"),
    }
}
