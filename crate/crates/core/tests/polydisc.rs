use std::f64::consts::PI;

use approx::assert_relative_eq;
use curvepipe::polydisc::{DiscPoly, DiscVector, Phase, PolarForm, Var};
use curvepipe::scalar::{r, Rational};
use proptest::prelude::*;

type P = DiscPoly<Rational>;

fn poly(max_degree: u32) -> impl Strategy<Value = P> {
    prop::collection::vec(
        ((0..=max_degree, 0..=max_degree), -20i64..=20, 1i64..=9),
        0..6,
    )
    .prop_map(move |terms| {
        let mut p = P::zero();
        for ((m, n), num, den) in terms {
            if m + n <= max_degree {
                p.add_term(m, n, r(num, den));
            }
        }
        p
    })
}

proptest! {
    #[test]
    fn ring_laws(a in poly(4), b in poly(4), c in poly(3)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn canonical_form_has_no_zero_terms(a in poly(4), b in poly(4)) {
        let p = &(&a * &b) - &(&b * &a) + a.clone();
        prop_assert!(p.terms().all(|(_, c)| *c != r(0, 1)));
        prop_assert_eq!(p.degree(), a.degree());
    }

    #[test]
    fn product_rule(a in poly(4), b in poly(4)) {
        for v in [Var::Z2, Var::Z3] {
            let lhs = (&a * &b).differentiate(v);
            let rhs = &a.differentiate(v) * &b + &a * &b.differentiate(v);
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn gauss_theorem_for_the_laplacian(a in poly(6)) {
        let inside = a.laplacian().disc_integral().0;
        let flux = a.radial_derivative().restrict_to_boundary().integral_over_pi();
        prop_assert_eq!(inside, flux);
    }

    #[test]
    fn divergence_theorem(a in poly(5), b in poly(5)) {
        let v = DiscVector::new(a, b);
        let inside = v.divergence().disc_integral().0;
        let flux = v.radial_part().restrict_to_boundary().integral_over_pi();
        prop_assert_eq!(inside, flux);
    }

    #[test]
    fn vanishing_factor_kills_boundary_trace(a in poly(4)) {
        prop_assert!((&a * &P::boundary_factor()).restrict_to_boundary().is_zero());
    }

    #[test]
    fn cartesian_polar_round_trip(a in poly(6)) {
        let back = a.polar().to_cartesian().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn radial_times_first_mode_round_trip(coeffs in prop::collection::vec((-9i64..=9, 1i64..=5), 1..5)) {
        // a(s3^2) s3 cos s2
        let mut form: PolarForm<Rational> = PolarForm::default();
        for (j, (num, den)) in coeffs.iter().enumerate() {
            if *num != 0 {
                form.add(1, Phase::Cos, 2 * j as u32 + 1, r(*num, *den));
            }
        }
        let p = form.to_cartesian().unwrap();
        prop_assert_eq!(p.polar(), form);
    }

    #[test]
    fn evaluation_agrees_with_polar(a in poly(5), s3 in 0.0f64..1.0, s2 in 0.0f64..6.3) {
        let f = a.map_coeffs(<Rational as curvepipe::Scalar>::to_f64);
        let direct = f.eval_polar(s3, s2);
        let via = f.polar().on_circle(&s3).eval_f64(s2);
        prop_assert!((direct - via).abs() <= 1e-12 * (1.0 + f.max_abs_coeff()));
    }
}

#[test]
fn laplacian_of_rho_four() {
    let rho2 = P::rho2();
    assert_eq!((&rho2 * &rho2).laplacian(), rho2.scale(&r(16, 1)));
    let p = P::monomial(r(1, 1), 2, 1);
    assert_eq!(p.differentiate(Var::Z2), P::monomial(r(2, 1), 1, 1));
    assert!(P::constant(r(5, 1)).differentiate(Var::Z3).is_zero());
}

/// Gauss-Legendre in s3 times the trapezoid rule in s2 (exact for trig
/// polynomials of low degree).
fn polar_quadrature(f: impl Fn(f64, f64) -> f64) -> f64 {
    const NODES: [(f64, f64); 5] = [
        (0.0, 0.568_888_888_888_888_9),
        (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
        (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
        (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
        (0.906_179_845_938_664, 0.236_926_885_056_189_1),
    ];
    let m = 32;
    let mut acc = 0.0;
    for (x, w) in NODES {
        let s3 = 0.5 * (x + 1.0);
        for j in 0..m {
            let s2 = 2.0 * PI * j as f64 / m as f64;
            acc += 0.5 * w * (2.0 * PI / m as f64) * s3 * f(s3 * s2.cos(), s3 * s2.sin());
        }
    }
    acc
}

#[test]
fn moments_against_quadrature() {
    for (m, n, num, den) in [(0, 0, 1, 1), (2, 0, 1, 4), (2, 2, 1, 24), (4, 0, 1, 8)] {
        let p = P::monomial(r(1, 1), m, n);
        assert_eq!(p.disc_integral().0, r(num, den));
        let q = polar_quadrature(|x, y| x.powi(m as i32) * y.powi(n as i32));
        assert_relative_eq!(q, num as f64 / den as f64 * PI, max_relative = 1e-12);
    }
    assert_eq!(P::monomial(r(1, 1), 3, 2).disc_integral().0, r(0, 1));
}

#[test]
fn double_angle_trace() {
    let t = P::monomial(r(1, 1), 2, 0).restrict_to_boundary();
    assert_eq!(t.mode(0), (r(1, 2), r(0, 1)));
    assert_eq!(t.mode(2), (r(1, 2), r(0, 1)));
    assert_eq!(t.max_mode(), Some(2));
    assert_eq!(P::z2().restrict_to_boundary().mode(1), (r(1, 1), r(0, 1)));
}

#[test]
fn display_is_plain_text() {
    let p = P::from_terms([((2, 1), r(-3, 4)), ((0, 0), r(1, 1))]);
    let s = p.to_string();
    assert!(s.contains("z2^2"), "{s}");
    assert_eq!(P::zero().to_string(), "0");
}
