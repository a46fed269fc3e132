use std::f64::consts::SQRT_2;

use periodic_steiner::homotopy::{
    homotopy_final_length, homotopy_k4_segment_lengths, homotopy_lattice, homotopy_parameter_grid,
};
use periodic_steiner::{homotopy_length_profile, homotopy_network, FamilyKind, HomotopyParams};
use proptest::prelude::*;

fn length_at(xi: f64, t: f64) -> f64 {
    homotopy_network(&HomotopyParams::new(xi, t).unwrap()).unwrap().length()
}

#[test]
fn segment_lengths_are_midpoint_convex() {
    let grid: Vec<f64> = (0..=400).map(|k| k as f64 / 400.0).collect();
    let totals: Vec<f64> = grid
        .iter()
        .map(|&t| homotopy_k4_segment_lengths(t).unwrap().iter().sum())
        .collect();
    for k in 1..grid.len() - 1 {
        assert!(
            2.0 * totals[k] <= totals[k - 1] + totals[k + 1] + 1e-12,
            "t = {}",
            grid[k]
        );
    }
    // Each segment on its own is the norm of an affine path.
    for k in 1..grid.len() - 1 {
        let a = homotopy_k4_segment_lengths(grid[k - 1]).unwrap();
        let b = homotopy_k4_segment_lengths(grid[k]).unwrap();
        let c = homotopy_k4_segment_lengths(grid[k + 1]).unwrap();
        for i in 0..6 {
            assert!(2.0 * b[i] <= a[i] + c[i] + 1e-12);
        }
    }
}

#[test]
fn the_vanishing_segment_opens_from_zero() {
    let at_zero = homotopy_k4_segment_lengths(0.0f64).unwrap();
    assert_eq!(at_zero[1], 0.0);
    assert!(homotopy_k4_segment_lengths(1e-3f64).unwrap()[1] > 0.0);
}

#[test]
fn length_is_constant_on_the_ths_side() {
    let reference = length_at(0.2, 0.0);
    for k in 0..=50 {
        let t = -(k as f64) / 50.0;
        approx::assert_relative_eq!(length_at(0.2, t), reference, max_relative = 1e-13);
    }
    approx::assert_relative_eq!(reference, 4.5, max_relative = 1e-14);
}

#[test]
fn profile_is_nonincreasing_and_ends_at_the_steiner_length() {
    let profile = homotopy_length_profile(0.3f64, 201).unwrap();
    assert_eq!(profile.len(), 201);
    for w in profile.windows(2) {
        assert!(w[1].length <= w[0].length + 1e-12);
        assert_eq!(w[0].volume, w[1].volume);
    }
    let last = profile.last().unwrap();
    assert_eq!(last.t, 1.0);
    approx::assert_relative_eq!(last.length, homotopy_final_length::<f64>(), max_relative = 1e-14);
}

#[test]
fn endpoint_ratio_lies_strictly_between_the_srs_and_ths_bounds() {
    let end = homotopy_network(&HomotopyParams::new(0.25f64, 1.0).unwrap()).unwrap();
    let ratio = end.ratio().unwrap();
    assert!(ratio > 27.0 / SQRT_2 + 1e-6);
    assert!(ratio < 81.0 / 4.0 - 1e-6);
    assert!(end.is_steiner(1e-9));
    assert_eq!(end.graph().degrees(), vec![3; 4]);
}

#[test]
fn lattice_does_not_move() {
    let fixed = homotopy_lattice::<f64>();
    for xi in [0.05, 0.25, 0.45] {
        for t in homotopy_parameter_grid::<f64>(21).unwrap() {
            let net = homotopy_network(&HomotopyParams::new(xi, t).unwrap()).unwrap();
            assert_eq!(net.lattice(), &fixed);
        }
    }
}

#[test]
fn quotient_type_along_the_path() {
    for t in homotopy_parameter_grid::<f64>(11).unwrap() {
        let net = homotopy_network(&HomotopyParams::new(0.2, t).unwrap()).unwrap();
        let kind = FamilyKind::recognize(net.graph());
        if t < 0.0 {
            assert_eq!(kind, Some(FamilyKind::Ths), "t = {t}");
        } else if t > 0.0 {
            assert_eq!(kind, Some(FamilyKind::Srs), "t = {t}");
        } else {
            let mut degrees = net.graph().degrees();
            degrees.sort();
            assert_eq!(degrees, vec![3, 3, 4]);
        }
    }
}

#[test]
fn parameter_grid_hits_both_ends_and_zero() {
    let grid = homotopy_parameter_grid::<f64>(5).unwrap();
    assert_eq!(grid, vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
    for bad in [0, 1, 2, 4, 100] {
        assert!(homotopy_parameter_grid::<f64>(bad).is_err());
    }
}

#[test]
fn parameters_outside_their_ranges_are_rejected() {
    for xi in [0.0, 0.5, -0.1, f64::NAN] {
        assert!(HomotopyParams::new(xi, 0.0).is_err());
        assert!(homotopy_length_profile(xi, 11).is_err());
    }
    for t in [-1.01, 1.01, f64::INFINITY] {
        assert!(HomotopyParams::new(0.2, t).is_err());
    }
    assert!(homotopy_k4_segment_lengths(-0.5f64).is_err());
}

proptest! {
    #[test]
    fn length_never_increases_between_random_parameters(
        xi in 0.01f64..0.49,
        a in -1.0f64..=1.0,
        b in -1.0f64..=1.0,
    ) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(length_at(xi, hi) <= length_at(xi, lo) + 1e-12);
    }
}
