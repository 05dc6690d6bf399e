mod common;

use vortex_filaments::laplace::{BoundaryScheme, SolverOptions};
use vortex_filaments::renormalized::{h_origin, kappa_n, solve_h_omega, w_omega, GreenMode};
use vortex_filaments::{build_grid, DomainSpec, Point2};

use common::{disk_green_regular, disk_w};

fn staircase_error(spacing: f64, y: Point2) -> f64 {
    let grid = build_grid(&DomainSpec::disk(1.0), spacing).unwrap();
    let opts = SolverOptions {
        scheme: BoundaryScheme::Staircase,
        ..Default::default()
    };
    let g = solve_h_omega(&grid, y, &opts).unwrap();
    grid.points()
        .zip(&g.values)
        .filter(|(x, _)| grid.domain().contains(*x))
        .map(|(x, v)| (v - disk_green_regular(x, y, 1.0)).abs())
        .fold(0.0, f64::max)
}

#[test]
fn staircase_converges_at_first_order() {
    let y = Point2::new(0.3, -0.2);
    let errs: Vec<f64> = [1.0 / 32.0, 1.0 / 64.0, 1.0 / 128.0]
        .iter()
        .map(|&h| staircase_error(h, y))
        .collect();
    let ratios: Vec<f64> = errs.windows(2).map(|w| w[0] / w[1]).collect();
    let mean = (ratios[0] * ratios[1]).sqrt();
    assert!((1.7..=2.3).contains(&mean), "errors {errs:?}, ratios {ratios:?}");
}

#[test]
fn w_is_symmetric_under_relabeling() {
    let d = DomainSpec::disk(1.0);
    let p = [Point2::new(0.2, 0.1), Point2::new(-0.3, 0.4), Point2::new(0.1, -0.5)];
    let a = w_omega(&d, &p, GreenMode::DiskClosedForm).unwrap();
    let b = w_omega(&d, &[p[2], p[0], p[1]], GreenMode::DiskClosedForm).unwrap();
    assert_eq!(a.to_bits(), b.to_bits());
    assert!((a - disk_w(&p, 1.0)).abs() < 1e-12);
}

#[test]
fn regular_part_grows_toward_the_boundary() {
    let d = DomainSpec::disk(1.0);
    let (mut last, mut last_w) = (f64::NEG_INFINITY, f64::INFINITY);
    for k in 0..8 {
        let c = Point2::new(0.05 * k as f64, 0.0);
        let p = [c + Point2::new(0.0, 0.1), c - Point2::new(0.0, 0.1)];
        let h: f64 = p
            .iter()
            .flat_map(|&a| p.iter().map(move |&b| disk_green_regular(a, b, 1.0)))
            .sum();
        let w = w_omega(&d, &p, GreenMode::DiskClosedForm).unwrap();
        assert!(h > last);
        assert!(w < last_w);
        last = h;
        last_w = w;
    }
}

#[test]
fn rectangle_origin_value_and_kappa() {
    let d = DomainSpec::rectangle(1.0, 1.0);
    let grid = build_grid(&d, 1.0 / 64.0).unwrap();
    let numeric = GreenMode::Numeric {
        grid: &grid,
        options: SolverOptions::default(),
    };
    let h00 = h_origin(&d, numeric).unwrap();
    // The square contains the unit disk and lies inside the disk of radius √2.
    assert!(h00 < 0.0 && h00 > -(2f64.sqrt()).ln());
    let disk = h_origin(&DomainSpec::disk(1.0), GreenMode::DiskClosedForm).unwrap();
    assert_eq!(disk, 0.0);
    assert!((kappa_n(0.0, 2, 1.0, 1.2) - 2.4).abs() < 1e-15);
}
