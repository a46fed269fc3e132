mod common;

use std::f64::consts::{FRAC_PI_2, SQRT_2};

use approx::assert_relative_eq;
use periodic_steiner::families::{
    construct_hexagonal, construct_srs, construct_ths, hex_area_formula, srs_generators, srs_volume_formula,
    ths_generators, ths_volume_formula, Chirality, FamilyKind, HexParams, SrsParams, ThsParams,
};
use periodic_steiner::linalg::{angle, cross3, dot, normalized};
use periodic_steiner::{Network32, Network64};
use proptest::prelude::*;

fn positive() -> impl Strategy<Value = f64> {
    (-1.0f64..1.0).prop_map(|e| 10f64.powf(e))
}

fn six() -> impl Strategy<Value = [f64; 6]> {
    proptest::array::uniform6(positive())
}

fn chirality() -> impl Strategy<Value = Chirality> {
    prop_oneof![Just(Chirality::Positive), Just(Chirality::Negative)]
}

/// Rotation matrix from an axis and angle (Rodrigues).
fn rotation(axis: [f64; 3], theta: f64) -> Vec<Vec<f64>> {
    let a = normalized(&axis).unwrap();
    let (s, c) = theta.sin_cos();
    let k = 1.0 - c;
    vec![
        vec![
            c + a[0] * a[0] * k,
            a[0] * a[1] * k - a[2] * s,
            a[0] * a[2] * k + a[1] * s,
        ],
        vec![
            a[1] * a[0] * k + a[2] * s,
            c + a[1] * a[1] * k,
            a[1] * a[2] * k - a[0] * s,
        ],
        vec![
            a[2] * a[0] * k - a[1] * s,
            a[2] * a[1] * k + a[0] * s,
            c + a[2] * a[2] * k,
        ],
    ]
}

/// Unit normal of the plane spanned by the edges at a degree-3 vertex.
fn tangent_normal(net: &Network64, vertex: usize) -> Vec<f64> {
    let dirs = net.unit_directions(vertex);
    normalized(&cross3(&dirs[0].1, &dirs[1].1)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn srs_formula_matches_determinant(x in six(), c in chirality()) {
        let net = construct_srs(&SrsParams::new(x, c).unwrap()).unwrap();
        assert_relative_eq!(srs_volume_formula(&x), net.volume(), max_relative = 1e-12);
        let g = srs_generators(&x, c);
        for (a, b) in g.iter().zip(net.lattice().generators()) {
            for (u, v) in a.iter().zip(b) {
                prop_assert!((u - v).abs() <= 1e-12 * (1.0 + u.abs()));
            }
        }
        prop_assert!(net.is_steiner(1e-9));
        prop_assert!(net.ratio().unwrap() >= 27.0 / SQRT_2 - 1e-9);
    }

    #[test]
    fn ths_formula_matches_determinant(x in six(), alpha in 0.05f64..3.09) {
        let net = construct_ths(&ThsParams::new(x, alpha).unwrap()).unwrap();
        assert_relative_eq!(ths_volume_formula(&x, alpha), net.volume(), max_relative = 1e-12);
        let g = ths_generators(&x, alpha);
        for (a, b) in g.iter().zip(net.lattice().generators()) {
            for (u, v) in a.iter().zip(b) {
                prop_assert!((u - v).abs() <= 1e-12 * (1.0 + u.abs()));
            }
        }
        prop_assert!(net.is_steiner(1e-9));
        prop_assert!(net.ratio().unwrap() >= 81.0 / 4.0 - 1e-9);
    }

    #[test]
    fn hex_formula_and_bound(x in proptest::array::uniform3(positive())) {
        let net = construct_hexagonal(&HexParams::new(x[0], x[1], x[2]).unwrap()).unwrap();
        assert_relative_eq!(hex_area_formula(&x), net.volume(), max_relative = 1e-12);
        prop_assert!(net.ratio().unwrap() >= 2.0 * 3f64.sqrt() - 1e-9);
    }

    #[test]
    fn scaling_laws(x in six(), c in chirality(), s in 0.1f64..10.0) {
        let net = construct_srs(&SrsParams::new(x, c).unwrap()).unwrap();
        let scaled = net.scaled(s).unwrap();
        assert_relative_eq!(scaled.volume(), s.powi(3) * net.volume(), max_relative = 1e-12);
        assert_relative_eq!(scaled.length(), s * net.length(), max_relative = 1e-12);
        assert_relative_eq!(scaled.ratio().unwrap(), net.ratio().unwrap(), max_relative = 1e-12);
        let bigger = construct_srs(&SrsParams::new(x.map(|v| v * s), c).unwrap()).unwrap();
        assert_relative_eq!(bigger.volume(), s.powi(3) * net.volume(), max_relative = 1e-12);
    }

    #[test]
    fn rigid_motion_invariance(
        x in six(),
        alpha in 0.1f64..3.0,
        axis in proptest::array::uniform3(-1.0f64..1.0),
        theta in -3.1f64..3.1,
        shift in proptest::array::uniform3(-5.0f64..5.0),
    ) {
        prop_assume!(axis.iter().map(|a| a * a).sum::<f64>() > 0.01);
        let net = construct_ths(&ThsParams::new(x, alpha).unwrap()).unwrap();
        let moved = net.transformed(&rotation(axis, theta)).unwrap().translated(&shift).unwrap();
        assert_relative_eq!(moved.length(), net.length(), max_relative = 1e-12);
        assert_relative_eq!(moved.volume(), net.volume(), max_relative = 1e-12);
        prop_assert!(moved.max_balancing_residual() < 1e-9);
    }

    #[test]
    fn srs_tangent_planes_turn_by_arccos_one_third(x in six(), c in chirality()) {
        let net = construct_srs(&SrsParams::new(x, c).unwrap()).unwrap();
        for e in net.graph().edges() {
            let cos = dot(&tangent_normal(&net, e.tail), &tangent_normal(&net, e.head)).abs();
            prop_assert!((cos - 1.0 / 3.0).abs() < 1e-9, "cos = {}", cos);
        }
    }

    #[test]
    fn chirality_preserves_gram_matrix(x in six()) {
        let pos = construct_srs(&SrsParams::new(x, Chirality::Positive).unwrap()).unwrap();
        let neg = construct_srs(&SrsParams::new(x, Chirality::Negative).unwrap()).unwrap();
        for (a, b) in pos.lattice().gram().iter().zip(neg.lattice().gram()) {
            for (u, v) in a.iter().zip(b) {
                prop_assert!((u - v).abs() <= 1e-12 * (1.0 + u.abs()));
            }
        }
        prop_assert!(pos.lattice().signed_volume() * neg.lattice().signed_volume() < 0.0);
    }
}

#[test]
fn ths_tangent_planes_meet_at_alpha() {
    let mut rng = common::rng(3);
    for _ in 0..100 {
        let x = common::lengths::<6>(&mut rng);
        let alpha = common::alpha(&mut rng);
        let net = construct_ths(&ThsParams::new(x, alpha).unwrap()).unwrap();
        let a = angle(&tangent_normal(&net, 1), &tangent_normal(&net, 2));
        let folded = a.min(std::f64::consts::PI - a);
        assert!((folded - alpha.min(std::f64::consts::PI - alpha)).abs() < 1e-9);
    }
}

#[test]
fn equality_cases_hit_the_bounds_exactly() {
    let srs = construct_srs(&SrsParams::new([2.5; 6], Chirality::Negative).unwrap()).unwrap();
    assert_relative_eq!(
        srs.ratio().unwrap(),
        FamilyKind::Srs.ratio_bound(),
        max_relative = 1e-12
    );
    let ths = construct_ths(&ThsParams::new([4.0, 4.0, 4.0, 4.0, 1.5, 0.5], FRAC_PI_2).unwrap()).unwrap();
    assert_relative_eq!(
        ths.ratio().unwrap(),
        FamilyKind::Ths.ratio_bound(),
        max_relative = 1e-12
    );
    let hex = construct_hexagonal(&HexParams::new(0.3, 0.3, 0.3).unwrap()).unwrap();
    assert_relative_eq!(
        hex.ratio().unwrap(),
        FamilyKind::Hexagonal.ratio_bound(),
        max_relative = 1e-12
    );
    // Any departure from equal lengths is strictly worse.
    let off = construct_srs(&SrsParams::new([1.0, 1.0, 1.0, 1.0, 1.0, 1.01], Chirality::Positive).unwrap()).unwrap();
    assert!(off.ratio().unwrap() > FamilyKind::Srs.ratio_bound::<f64>() + 1e-6);
}

#[test]
fn invalid_parameters_are_rejected() {
    assert!(HexParams::new(1.0, 0.0, 1.0).is_err());
    assert!(ThsParams::new([1.0; 6], 0.0).is_err());
    assert!(ThsParams::new([1.0; 6], std::f64::consts::PI).is_err());
    assert!(SrsParams::new([1.0, 1.0, f64::NAN, 1.0, 1.0, 1.0], Chirality::Positive).is_err());
    assert!(Chirality::from_sign(0).is_none());
}

#[test]
fn single_precision_networks() {
    let srs: Network32 = construct_srs(&SrsParams::new([1.0f32; 6], Chirality::Positive).unwrap()).unwrap();
    let bound = 27.0f32 / 2f32.sqrt();
    assert!((srs.ratio().unwrap() - bound).abs() / bound < 1e-5);
    let ths: Network32 =
        construct_ths(&ThsParams::new([1.0f32, 1.0, 1.0, 1.0, 0.25, 0.25], std::f32::consts::FRAC_PI_2).unwrap())
            .unwrap();
    assert!((ths.ratio().unwrap() - 20.25).abs() / 20.25 < 1e-5);
    assert!(ths.max_balancing_residual() < 1e-5);
}
