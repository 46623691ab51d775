use approx::assert_relative_eq;
use curvepipe::geometry::{
    CenterCurve, Frame, RadiusProfile, RadiusSample, SampledCurve, TubeMap, UniformRadius,
};
use nalgebra::{Matrix3, Vector3};
use proptest::prelude::*;

fn helix_point(theta: f64) -> Vector3<f64> {
    Vector3::new(3.0 * theta.cos(), 3.0 * theta.sin(), 4.0 * theta)
}

// (3 cos th, 3 sin th, 4 th) has speed 5, so s = 5 th.
#[test]
fn helix_curvature_and_torsion_from_dense_differences() {
    let h = 1e-3;
    let th = 0.7;
    let c = |k: f64| helix_point(th + k * h);
    let d1 = (c(1.0) - c(-1.0)) / (2.0 * h);
    let d2 = (c(1.0) - 2.0 * c(0.0) + c(-1.0)) / (h * h);
    let d3 = (c(2.0) - 2.0 * c(1.0) + 2.0 * c(-1.0) - c(-2.0)) / (2.0 * h * h * h);
    let cross = d1.cross(&d2);
    let kappa = cross.norm() / d1.norm().powi(3);
    let tau = cross.dot(&d3) / cross.norm_squared();

    let curve = CenterCurve::helix(3.0, 4.0, 20.0).unwrap();
    let f = curve.frenet_frame(5.0 * th).unwrap();
    assert_relative_eq!(f.kappa, kappa, max_relative = 1e-5);
    assert_relative_eq!(f.tau, tau, max_relative = 1e-5);
    assert_relative_eq!(f.kappa, 0.12, epsilon = 1e-15);
    assert_relative_eq!(f.tau, 0.16, epsilon = 1e-15);
    assert_relative_eq!(f.position.coords, helix_point(th), epsilon = 1e-12);
}

fn orthonormal(f: &Frame) -> f64 {
    let m = f.basis();
    (m.transpose() * m - Matrix3::identity()).abs().max()
}

fn frenet_residual(curve: &CenterCurve, s: f64, h: f64) -> f64 {
    let a = curve.frenet_frame(s - h).unwrap();
    let b = curve.frenet_frame(s + h).unwrap();
    let f = curve.frenet_frame(s).unwrap();
    let dt = (b.t - a.t) / (2.0 * h);
    let dn = (b.n - a.n) / (2.0 * h);
    let db = (b.b - a.b) / (2.0 * h);
    [
        (dt - f.n * f.kappa).norm(),
        (dn + f.t * f.kappa - f.b * f.tau).norm(),
        (db + f.n * f.tau).norm(),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

#[test]
fn preset_frames_satisfy_frenet_equations() {
    let curves = [
        CenterCurve::straight(2.0).unwrap(),
        CenterCurve::circular_arc(0.8, 2.0).unwrap(),
        CenterCurve::helix(1.5, 0.7, 4.0).unwrap(),
    ];
    for curve in &curves {
        let coarse = frenet_residual(curve, 1.0, 1e-2);
        let fine = frenet_residual(curve, 1.0, 5e-3);
        assert!(orthonormal(&curve.frenet_frame(1.0).unwrap()) < 1e-12);
        assert!(coarse < 1e-3, "{:?} {coarse}", curve.kind());
        // second order: the residual drops by four when h halves
        if coarse > 1e-12 {
            assert_relative_eq!(coarse / fine, 4.0, max_relative = 0.05);
        }
    }
}

fn helix_samples(n: usize) -> SampledCurve {
    let len = 10.0;
    let s: Vec<f64> = (0..n).map(|i| len * i as f64 / (n - 1) as f64).collect();
    let p = s.iter().map(|s| helix_point(s / 5.0)).collect();
    SampledCurve::new(s, p).unwrap()
}

#[test]
fn sampled_helix_matches_preset() {
    let curve = CenterCurve::sampled(helix_samples(401));
    for s in [2.0, 5.0, 7.5] {
        let f = curve.frenet_frame(s).unwrap();
        assert!(orthonormal(&f) < 1e-12);
        assert_relative_eq!(f.kappa, 0.12, max_relative = 1e-4);
        assert_relative_eq!(f.tau, 0.16, max_relative = 1e-4);
        assert!(f.dkappa.abs() < 1e-3);
        assert!(f.dtau.abs() < 1e-3);
        assert_relative_eq!(f.position.coords, helix_point(s / 5.0), epsilon = 1e-6);
    }
    assert!(frenet_residual(&curve, 5.0, 1e-2) < 1e-3);
}

#[test]
fn sampled_straight_line_is_flat() {
    let s: Vec<f64> = (0..6).map(f64::from).collect();
    let p = s.iter().map(|s| Vector3::new(0.0, *s, 0.0)).collect();
    let curve = CenterCurve::sampled(SampledCurve::new(s, p).unwrap());
    let f = curve.frenet_frame(2.5).unwrap();
    assert_eq!((f.kappa, f.tau), (0.0, 0.0));
    assert!(orthonormal(&f) < 1e-12);
    assert_relative_eq!(f.t, Vector3::y(), epsilon = 1e-12);
}

#[test]
fn moving_wall_time_row() {
    let line = CenterCurve::straight(1.0).unwrap();
    let wall = UniformRadius { r0: 2.0, rate: 0.5 };
    let map = TubeMap::new(0.1, &line, &wall, 0.0, 8).unwrap();
    let inv = map.inverse_jacobian_rows(0.0, 0.5, 0.3, 0.6).unwrap();
    assert_relative_eq!(inv.ds3_dt, -0.6 * 0.5 / 2.0, epsilon = 1e-15);
}

/// A non-uniform moving radius used by the property tests.
fn wobbly(t: f64, s: f64) -> RadiusSample {
    RadiusSample {
        r: 1.0 + 0.2 * (s + t).sin(),
        dr_ds: 0.2 * (s + t).cos(),
        dr_dt: 0.2 * (s + t).cos(),
    }
}

fn map_curve(which: u8) -> CenterCurve {
    match which {
        0 => CenterCurve::straight(3.0).unwrap(),
        1 => CenterCurve::circular_arc(1.3, 3.0).unwrap(),
        _ => CenterCurve::helix(1.1, 0.6, 3.0).unwrap(),
    }
}

proptest! {
    #[test]
    fn jacobian_times_inverse_is_identity(
        which in 0u8..3,
        s1 in 0.0f64..3.0,
        s2 in 0.0f64..std::f64::consts::TAU,
        s3 in 0.05f64..1.0,
        t in 0.0f64..2.0,
        eps in 0.01f64..0.5,
    ) {
        let curve = map_curve(which);
        let map = TubeMap::new(eps, &curve, &wobbly, t, 32).unwrap();
        let j = map.forward_jacobian(t, s1, s2, s3).unwrap();
        let inv = map.inverse_jacobian_rows(t, s1, s2, s3).unwrap().matrix();
        let err = (inv * j - Matrix3::identity()).abs().max();
        prop_assert!(err < 1e-12, "{err}");
    }

    #[test]
    fn physical_point_is_on_the_wall_circle(
        s1 in 0.0f64..3.0,
        s2 in 0.0f64..std::f64::consts::TAU,
        s3 in 0.0f64..1.0,
    ) {
        let curve = map_curve(2);
        let map = TubeMap::new(0.1, &curve, &wobbly, 0.0, 32).unwrap();
        let x = map.map_to_physical(0.0, s1, s2, s3).unwrap();
        let f = curve.frenet_frame(s1).unwrap();
        let d = x - f.position;
        prop_assert!(d.dot(&f.t).abs() < 1e-12);
        let expected = 0.1 * s3 * wobbly(0.0, s1).r;
        prop_assert!((d.norm() - expected).abs() < 1e-12);
    }
}

#[test]
fn eps_series_truncation_error_is_fifth_order() {
    // kappa s3 R = 20 so the truncation error dominates round-off at both eps
    let arc = CenterCurve::circular_arc(0.05, 0.1).unwrap();
    let wall = UniformRadius { r0: 1.0, rate: 0.0 };
    let (s1, s2, s3) = (0.05, 0.0, 1.0);
    let err = |eps: f64| {
        let map = TubeMap::new(eps, &arc, &wall, 0.0, 8).unwrap();
        let exact = map.inverse_jacobian_rows(0.0, s1, s2, s3).unwrap();
        let approx = map.eps_series(0.0, s1, s2, s3, 4).unwrap().evaluate(eps);
        [
            (exact.ds1_dx - approx[0]).norm(),
            (exact.ds2_dx - approx[1]).norm(),
            (exact.ds3_dx - approx[2]).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    };
    let ratio = err(1e-2) / err(1e-3);
    assert!(ratio > 0.5e5 && ratio < 2e5, "{ratio}");
}

#[test]
fn closure_radius_profile() {
    let r = |_t: f64, s: f64| RadiusSample {
        r: 1.0 + s,
        dr_ds: 1.0,
        dr_dt: 0.0,
    };
    assert_eq!(r.radius(0.0, 0.5).r, 1.5);
}
