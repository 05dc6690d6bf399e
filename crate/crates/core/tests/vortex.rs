mod common;

use std::f64::consts::PI;
use std::sync::Arc;

use proptest::prelude::*;

use vortex_filaments::fields::{trial_slice, PhaseMode, RadialMode};
use vortex_filaments::vortex::{detect_vortices, flat_norm_0, AtomicMeasure};
use vortex_filaments::{build_grid, DomainSpec, Point2};

use common::flat_norm_lp;

fn atoms(max: usize) -> impl Strategy<Value = Vec<(Point2, f64)>> {
    prop::collection::vec(
        ((-16i32..=16, -16i32..=16), prop_oneof![-3.0..-0.1f64, 0.1..3.0f64]),
        0..=max,
    )
    .prop_map(|v| {
        v.into_iter()
            .map(|((x, y), w)| (Point2::new(x as f64 / 16.0, y as f64 / 16.0), w))
            .collect()
    })
}

fn m(a: &[(Point2, f64)]) -> AtomicMeasure {
    AtomicMeasure::new(a.to_vec()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn flat_norm_matches_linear_program(mu in atoms(4), nu in atoms(4)) {
        let signed: Vec<_> = mu.iter().copied().chain(nu.iter().map(|&(x, w)| (x, -w))).collect();
        let want = flat_norm_lp(&signed);
        let got = flat_norm_0(&m(&mu), &m(&nu));
        prop_assert!((got - want).abs() <= 1e-9 * want.max(1.0), "got {got}, LP {want}");
    }

    #[test]
    fn flat_norm_is_a_norm(a in atoms(3), b in atoms(3), c in atoms(3)) {
        let (ma, mb, mc) = (m(&a), m(&b), m(&c));
        let ab = flat_norm_0(&ma, &mb);
        prop_assert!((ab - flat_norm_0(&mb, &ma)).abs() <= 1e-12);
        prop_assert!(ab <= flat_norm_0(&ma, &mc) + flat_norm_0(&mc, &mb) + 1e-12);
        prop_assert!(flat_norm_0(&ma, &ma).abs() <= 1e-12);
    }
}

#[test]
fn planted_vortices_are_recovered() {
    let grid = Arc::new(build_grid(&DomainSpec::rectangle(1.0, 0.8), 1.0 / 64.0).unwrap());
    let plants = [Point2::new(0.3, 0.2), Point2::new(-0.4, -0.1), Point2::new(0.0, -0.5)];
    let w = trial_slice(&grid, &plants, 0.03, RadialMode::Zeta, PhaseMode::Numeric).unwrap();
    let mu = detect_vortices(&w);
    assert_eq!(mu.len(), 3);
    for p in plants {
        let (x, weight) = mu
            .atoms
            .iter()
            .min_by(|a, b| a.0.dist(p).total_cmp(&b.0.dist(p)))
            .copied()
            .unwrap();
        assert!(x.dist(p) <= 2.0 * grid.spacing());
        assert!((weight - PI).abs() < 1e-12);
    }
}
