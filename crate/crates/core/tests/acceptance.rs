//! Acceptance run: twelve numbered criteria, one PASS/FAIL line each.
//!
//! Built with `harness = false`; the process exits non-zero when any
//! criterion fails.

mod common;

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vortex_filaments::expansion::{gamma_sweep, SweepOptions, DEFAULT_EPSILONS};
use vortex_filaments::fields::{
    energy_2d, jacobian_disk_integral, trial_slice, ComplexField2D, PhaseMode, RadialMode,
};
use vortex_filaments::laplace::SolverOptions;
use vortex_filaments::reduced::{
    conserved_quantities, dx_distance, el_residual, g0_energy, g0_gradient, integrate_ode,
    minimize_g0, regularize_fdelta, straight_initial_guess, Convention, EndpointConstraint,
    FilamentConfiguration, LabeledPointSet, MinimizeOptions,
};
use vortex_filaments::renormalized::{
    gamma_constant, solve_h_omega, w_omega, GreenMode, RadialOptions, GAMMA_DEFAULT, GAMMA_EPSILONS,
};
use vortex_filaments::vortex::{
    ball_construction, covered_energy, flat_norm_0, sn_criterion, AtomicMeasure, SN_RADII,
};
use vortex_filaments::{build_grid, r_star, DomainSpec, Point2};

use common::{brute_dx, disk_green_regular, disk_w, finite_difference, flat_norm_lp, symmetric_pair_shooting};

type Check = Result<String, String>;

fn require(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within_budget(elapsed: Duration, limit_s: f64, detail: String) -> Check {
    let t = elapsed.as_secs_f64();
    require(t < limit_s, format!("{detail}; runtime {t:.1} s (limit {limit_s} s)"))
}

fn c1_gamma_rate() -> Check {
    let start = Instant::now();
    let est = gamma_constant(&GAMMA_EPSILONS, &RadialOptions::default()).map_err(|e| e.to_string())?;
    let g: Vec<f64> = est.steps.iter().map(|s| s.gamma_estimate).collect();
    let (d1, d2) = (g[1] - g[0], g[2] - g[1]);
    let ratio = GAMMA_EPSILONS[0] / GAMMA_EPSILONS[1];
    let slope = (d1.abs() / d2.abs()).ln() / ratio.ln();
    let detail = format!("differences {d1:.3e}, {d2:.3e}; log-log slope {slope:.3}; gamma {:.9}", est.gamma);
    if (slope - 2.0).abs() > 0.4 {
        return Err(detail);
    }
    within_budget(start.elapsed(), 60.0, detail)
}

fn c2_disk_green() -> Check {
    let start = Instant::now();
    let grid = build_grid(&DomainSpec::disk(1.0), 1.0 / 128.0).map_err(|e| e.to_string())?;
    let sources = [
        Point2::new(0.4, 0.0),
        Point2::new(0.0, 0.0),
        Point2::new(0.0, -0.6),
        Point2::new(-0.36, 0.48),
        Point2::new(0.2, 0.55),
    ];
    let mut worst: f64 = 0.0;
    for y in sources {
        let data = solve_h_omega(&grid, y, &SolverOptions::default()).map_err(|e| e.to_string())?;
        for (k, x) in grid.points().enumerate() {
            if grid.domain().contains(x) {
                worst = worst.max((data.values[k] - disk_green_regular(x, y, 1.0)).abs());
            }
        }
    }
    let detail = format!("max interior error {worst:.3e} over {} sources (limit 1e-3)", sources.len());
    if worst > 1e-3 {
        return Err(detail);
    }
    within_budget(start.elapsed(), 60.0, detail)
}

fn c3_w_spot() -> Check {
    let d = DomainSpec::disk(1.0);
    let p = [Point2::new(0.5, 0.0), Point2::new(-0.5, 0.0)];
    let oracle = disk_w(&p, 1.0);
    let closed = w_omega(&d, &p, GreenMode::DiskClosedForm).map_err(|e| e.to_string())?;
    let grid = build_grid(&d, 1.0 / 128.0).map_err(|e| e.to_string())?;
    let numeric = w_omega(
        &d,
        &p,
        GreenMode::Numeric {
            grid: &grid,
            options: SolverOptions::default(),
        },
    )
    .map_err(|e| e.to_string())?;
    let e1 = (closed - oracle).abs();
    let e2 = (numeric - oracle).abs();
    require(
        e1 <= 1e-3 && e2 <= 1e-3 && (oracle - 2.0 * PI * (15.0f64 / 16.0).ln()).abs() < 1e-12,
        format!("oracle {oracle:.6}; closed form off by {e1:.2e}, grid solve off by {e2:.2e}"),
    )
}

fn random_configuration(rng: &mut ChaCha8Rng, n: usize, segments: usize) -> FilamentConfiguration {
    let base: Vec<(Point2, Point2, f64, f64)> = (0..n)
        .map(|i| {
            let angle = 2.0 * PI * i as f64 / n as f64 + rng.random_range(-0.3..0.3);
            let r = rng.random_range(0.3..0.6);
            let p = Point2::new(r * angle.cos(), r * angle.sin());
            let drift = Point2::new(rng.random_range(-0.1..0.1), rng.random_range(-0.1..0.1));
            (p, drift, rng.random_range(-0.05..0.05), rng.random_range(1.0..3.0))
        })
        .collect();
    FilamentConfiguration::from_fn(n, 1.0, segments, |i, z| {
        let (p, d, amp, k) = base[i];
        p + d * z + Point2::new(amp * (k * PI * z).sin(), amp * (k * PI * z).cos())
    })
    .unwrap()
}

fn c4_reduced_bvp() -> Check {
    let segments = 256;
    let a = 0.5;
    let ends = vec![Point2::new(a, 0.0), Point2::new(-a, 0.0)];
    let c = EndpointConstraint::new(ends.clone(), ends).map_err(|e| e.to_string())?;
    let f0 = straight_initial_guess(&c, 1.0, segments).map_err(|e| e.to_string())?;
    let opts = MinimizeOptions {
        tolerance: 1e-11,
        ..MinimizeOptions::default()
    };
    let (f, _) = minimize_g0(&f0, &c, &opts).map_err(|e| e.to_string())?;
    let oracle = symmetric_pair_shooting(a, segments);
    let mut sup: f64 = 0.0;
    for (k, x) in oracle.iter().enumerate() {
        sup = sup.max(f.pos(k, 0).dist(Point2::new(*x, 0.0)));
        sup = sup.max(f.pos(k, 1).dist(Point2::new(-*x, 0.0)));
    }
    let res = el_residual(&f, Convention::GradientConsistent).map_err(|e| e.to_string())?;
    let el = res.iter().map(|p| p.norm()).fold(0.0, f64::max);

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst_fd: f64 = 0.0;
    for trial in 0..20 {
        let n = 1 + trial % 4;
        let g = random_configuration(&mut rng, n, 16);
        let grad = g0_gradient(&g).map_err(|e| e.to_string())?;
        let interior: Vec<usize> = (n..g.positions().len() - n).collect();
        let x: Vec<f64> = interior
            .iter()
            .flat_map(|&k| [g.positions()[k].x, g.positions()[k].y])
            .collect();
        let fd = finite_difference(&x, 1e-6, |y| {
            let mut pos = g.positions().to_vec();
            for (slot, &k) in interior.iter().enumerate() {
                pos[k] = Point2::new(y[2 * slot], y[2 * slot + 1]);
            }
            g0_energy(&FilamentConfiguration::new(n, 1.0, pos).unwrap())
        });
        let exact: Vec<f64> = interior.iter().flat_map(|&k| [grad[k].x, grad[k].y]).collect();
        let scale = exact.iter().map(|v| v.abs()).fold(0.0, f64::max);
        let err = exact.iter().zip(&fd).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        worst_fd = worst_fd.max(err / scale);
    }
    require(
        sup <= 1e-4 && el <= 1e-6 && worst_fd <= 1e-6,
        format!(
            "sup distance to shooting oracle {sup:.2e} (1e-4); EL residual {el:.2e} (1e-6); \
             worst finite-difference relative error {worst_fd:.2e} (1e-6)"
        ),
    )
}

fn energy_drift(f: &[Point2], v: &[Point2], step: f64) -> Result<(f64, f64, f64), String> {
    let conv = Convention::GradientConsistent;
    let t = integrate_ode(f, v, step, 10.0, conv).map_err(|e| e.to_string())?;
    let q0 = conserved_quantities(&t.positions[0], &t.velocities[0], conv);
    let (mut de, mut dp, mut da): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for (p, w) in t.positions.iter().zip(&t.velocities) {
        let q = conserved_quantities(p, w, conv);
        de = de.max((q.energy - q0.energy).abs());
        dp = dp.max(q.momentum.dist(q0.momentum));
        da = da.max((q.angular_momentum - q0.angular_momentum).abs());
    }
    Ok((de, dp, da))
}

fn c5_ode_conservation() -> Check {
    let pair = (
        vec![Point2::new(1.0, 0.05), Point2::new(-1.0, 0.0)],
        vec![Point2::new(0.1, 0.95), Point2::new(0.05, -1.0)],
    );
    let s2 = 2f64.sqrt() * 0.95;
    let tri: (Vec<Point2>, Vec<Point2>) = (0..3)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / 3.0;
            (
                Point2::new(t.cos(), t.sin()),
                Point2::new(-s2 * t.sin() + 0.1, s2 * t.cos() + 0.05),
            )
        })
        .unzip();
    let mut lines = Vec::new();
    let mut ok = true;
    for (name, (f, v)) in [("n=2", pair), ("n=3", tri)] {
        let (e1, p1, a1) = energy_drift(&f, &v, 1e-3)?;
        let (e2, _, _) = energy_drift(&f, &v, 5e-4)?;
        let ratio = e1 / e2;
        ok &= e1 <= 1e-6 && p1 <= 1e-6 && a1 <= 1e-6 && (3.0..=5.0).contains(&ratio);
        lines.push(format!(
            "{name}: drift E {e1:.2e} P {p1:.2e} A {a1:.2e}, halving ratio {ratio:.2}"
        ));
    }
    require(ok, lines.join("; "))
}

struct PairFields {
    eps: Vec<f64>,
    fields: Vec<ComplexField2D>,
    elapsed: Duration,
}

fn pair_fields() -> Result<PairFields, String> {
    let start = Instant::now();
    let d = DomainSpec::disk(1.0);
    let p = [Point2::new(0.25, 0.0), Point2::new(-0.25, 0.0)];
    let eps = DEFAULT_EPSILONS.to_vec();
    let mut fields = Vec::new();
    for &e in &eps {
        let grid = Arc::new(build_grid(&d, e / 4.0).map_err(|x| x.to_string())?);
        fields.push(trial_slice(&grid, &p, e, RadialMode::CoreMin, PhaseMode::Auto).map_err(|x| x.to_string())?);
    }
    Ok(PairFields {
        eps,
        fields,
        elapsed: start.elapsed(),
    })
}

fn c6_recovery_energy(pf: &PairFields) -> Check {
    let start = Instant::now();
    let w = disk_w(&[Point2::new(0.25, 0.0), Point2::new(-0.25, 0.0)], 1.0);
    let disc: Vec<f64> = pf
        .eps
        .iter()
        .zip(&pf.fields)
        .map(|(&e, u)| (energy_2d(u) - (2.0 * (PI * e.ln().abs() + GAMMA_DEFAULT) + w)).abs())
        .collect();
    let decreasing = disc.windows(2).all(|x| x[1] < x[0]);
    let last = *disc.last().unwrap();
    let detail = format!(
        "discrepancies {} (final limit 0.1)",
        disc.iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>().join(", ")
    );
    if !(decreasing && last <= 0.1) {
        return Err(detail);
    }
    within_budget(pf.elapsed + start.elapsed(), 600.0, detail)
}

fn c7_jacobian(pf: &PairFields) -> Check {
    let mut worst: f64 = 0.0;
    let mut all_good = true;
    for u in &pf.fields {
        let rs = r_star(u.grid().domain());
        for k in 0..SN_RADII {
            let s = rs / 2.0 + (k as f64 + 0.5) * rs / (2.0 * SN_RADII as f64);
            match jacobian_disk_integral(u, Point2::ZERO, s) {
                Some(v) => worst = worst.max((v - 2.0 * PI).abs()),
                None => worst = f64::INFINITY,
            }
        }
        all_good &= sn_criterion(u, 2).is_good;
    }
    require(
        worst <= 1e-2 && all_good,
        format!("max |int J - 2pi| {worst:.2e} over {SN_RADII} radii per field (1e-2); all slices good: {all_good}"),
    )
}

fn measure(atoms: &[(Point2, f64)]) -> AtomicMeasure {
    AtomicMeasure::new(atoms.to_vec()).unwrap()
}

fn c8_flat_norm() -> Check {
    let o = Point2::ZERO;
    let examples = [
        (flat_norm_0(&measure(&[(o, PI)]), &measure(&[(o, PI)])), 0.0),
        (
            flat_norm_0(&measure(&[(o, PI)]), &measure(&[(Point2::new(0.1, 0.0), PI)])),
            0.1 * PI,
        ),
        (flat_norm_0(&measure(&[(o, 1.0)]), &AtomicMeasure::empty()), 1.0),
    ];
    let examples_ok = examples.iter().all(|(got, want)| (got - want).abs() <= 1e-12);

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let total = rng.random_range(1..=6usize);
        let split = rng.random_range(0..=total);
        let atom = |rng: &mut ChaCha8Rng| {
            let x = Point2::new(rng.random_range(-8..=8) as f64 / 8.0, rng.random_range(-8..=8) as f64 / 8.0);
            let mut w = rng.random_range(-3..=3) as f64;
            if w == 0.0 {
                w = 1.0;
            }
            (x, w)
        };
        let mu: Vec<_> = (0..split).map(|_| atom(&mut rng)).collect();
        let nu: Vec<_> = (split..total).map(|_| atom(&mut rng)).collect();
        let got = flat_norm_0(&measure(&mu), &measure(&nu));
        let signed: Vec<_> = mu.iter().copied().chain(nu.iter().map(|&(x, w)| (x, -w))).collect();
        let want = flat_norm_lp(&signed);
        worst = worst.max((got - want).abs() / want.abs().max(1.0));
    }
    require(
        examples_ok && worst <= 1e-9,
        format!("worked examples {}; worst deviation from the LP over 100 instances {worst:.2e}", if examples_ok { "match" } else { "differ" }),
    )
}

fn c9_gamma_sweep() -> Check {
    let start = Instant::now();
    let ends = vec![Point2::new(0.5, 0.0), Point2::new(-0.5, 0.0)];
    let c = EndpointConstraint::new(ends.clone(), ends).map_err(|e| e.to_string())?;
    let f0 = straight_initial_guess(&c, 1.0, 64).map_err(|e| e.to_string())?;
    let (f, _) = minimize_g0(&f0, &c, &MinimizeOptions::default()).map_err(|e| e.to_string())?;
    let report =
        gamma_sweep(&f, &DEFAULT_EPSILONS, &SweepOptions::new(DomainSpec::disk(1.0))).map_err(|e| e.to_string())?;
    if !report.all_succeeded() {
        let reasons: Vec<String> = report.records.iter().filter_map(|r| r.failure.clone()).collect();
        return Err(format!("sweep had failed runs: {}", reasons.join("; ")));
    }
    let rows: Vec<_> = report.records.iter().map(|r| r.result.clone().unwrap()).collect();
    let gaps: Vec<f64> = rows.iter().map(|r| r.gap.unwrap()).collect();
    let norms: Vec<f64> = rows.iter().map(|r| r.sliced_flat_norm).collect();
    let identity = rows.iter().map(|r| r.identity_residual).fold(0.0, f64::max);
    let abs_dec = gaps.windows(2).all(|x| x[1].abs() < x[0].abs());
    let norm_dec = norms.windows(2).all(|x| x[1] < x[0]);
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>().join(", ");
    let detail = format!(
        "gaps {} (|gap| decreasing: {abs_dec}); sliced flat norms {} (decreasing: {norm_dec}); identity residual {identity:.1e}",
        fmt(&gaps),
        fmt(&norms)
    );
    if !(abs_dec && norm_dec && identity <= 1e-8 && report.abs_gap_decreasing && report.flat_norm_decreasing) {
        return Err(detail);
    }
    within_budget(start.elapsed(), 1800.0, detail)
}

/// Vortices of the given signs with a `min(1, r/ε)` modulus.
fn signed_vortices(grid: &Arc<vortex_filaments::Grid2D>, eps: f64, plants: &[(Point2, i32)]) -> ComplexField2D {
    ComplexField2D::from_fn(grid.clone(), eps, |x| {
        let mut u = Complex64::new(1.0, 0.0);
        for &(p, sign) in plants {
            let d = x - p;
            let r = d.norm();
            if r == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let phase = Complex64::new(d.x / r, sign as f64 * d.y / r);
            u *= phase * (r / eps).min(1.0);
        }
        u
    })
    .unwrap()
}

fn c10_vortex_balls() -> Check {
    let disk = DomainSpec::disk(1.0);
    let fine = Arc::new(build_grid(&disk, 1.0 / 128.0).map_err(|e| e.to_string())?);
    let cases: Vec<(&str, ComplexField2D, f64, i64)> = vec![
        ("single", signed_vortices(&fine, 0.03, &[(Point2::new(0.05, -0.02), 1)]), 0.4, 1),
        (
            "separated pair",
            signed_vortices(&fine, 0.02, &[(Point2::new(0.4, 0.1), 1), (Point2::new(-0.35, -0.2), 1)]),
            0.2,
            2,
        ),
        (
            "close pair",
            signed_vortices(&fine, 0.02, &[(Point2::new(0.1, 0.0), 1), (Point2::new(-0.1, 0.0), 1)]),
            0.5,
            2,
        ),
        (
            "three and one antivortex",
            signed_vortices(
                &fine,
                0.02,
                &[
                    (Point2::new(0.4, 0.0), 1),
                    (Point2::new(-0.2, 0.35), 1),
                    (Point2::new(-0.2, -0.35), 1),
                    (Point2::new(0.0, 0.0), -1),
                ],
            ),
            0.3,
            2,
        ),
    ];
    let mut ok = true;
    let mut lines = Vec::new();
    for (name, w, sigma, degree) in cases {
        let bc = ball_construction(&w, sigma).map_err(|e| e.to_string())?;
        let measured = covered_energy(&w, &bc);
        let merges_ok = bc.merge_history.iter().all(|(before, after)| after <= before);
        let pass = bc.total_degree() == degree && bc.lower_bound <= 1.02 * measured && merges_ok;
        ok &= pass;
        lines.push(format!(
            "{name}: degree {} (want {degree}), certificate {:.3} vs energy {measured:.3}, {} merges",
            bc.total_degree(),
            bc.lower_bound,
            bc.merge_history.len()
        ));
    }
    require(ok, lines.join("; "))
}

fn min_node_separation(f: &FilamentConfiguration, k: usize) -> f64 {
    let node = f.node(k);
    let mut d = f64::INFINITY;
    for i in 0..node.len() {
        for j in i + 1..node.len() {
            d = d.min(node[i].dist(node[j]));
        }
    }
    d
}

fn c11_fdelta() -> Check {
    let delta: f64 = 1e-4;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut failures = Vec::new();
    let mut worst_rel: f64 = 0.0;
    let mut colliding = 0;
    for trial in 0..20 {
        let n = 2 + trial % 3;
        let mut f = random_configuration(&mut rng, n, 400);
        if trial % 2 == 1 {
            // Filament 1 follows filament 0 and separates linearly from a shared endpoint.
            colliding += 1;
            let at_bottom = trial % 4 == 1;
            let angle = rng.random_range(0.0..2.0 * PI);
            let d = Point2::new(angle.cos(), angle.sin()) * rng.random_range(0.3..0.6);
            let base = f.clone();
            f = FilamentConfiguration::from_fn(n, 1.0, 400, |i, z| {
                let k = (z * 400.0).round() as usize;
                if i == 1 {
                    let t = if at_bottom { z } else { 1.0 - z };
                    base.pos(k, 0) + d * t + Point2::new(0.02 * (PI * z).sin(), 0.0) * t
                } else {
                    base.pos(k, i)
                }
            })
            .unwrap();
        }
        let out = regularize_fdelta(&f, delta, &mut rng).map_err(|e| e.to_string())?;
        let g = &out.config;
        let m = f.segments();
        let ends = g.node(0) == f.node(0) && g.node(m) == f.node(m);
        let shift = out.shift.iter().all(|a| a.norm() <= delta.cbrt());
        let sup = f.max_abs_diff(g);
        let near = g
            .positions()
            .iter()
            .zip(f.positions())
            .all(|(a, b)| a.dist(*b) <= delta.powf(0.25));
        let s = delta.sqrt();
        let separated = (1..m).all(|k| {
            let z = g.z(k);
            min_node_separation(g, k) >= s * z.min(1.0 - z).min(s)
        });
        if !(ends && shift && near && separated) {
            failures.push(format!(
                "trial {trial}: ends {ends}, shift {shift}, sup {sup:.2e}, separation {separated}"
            ));
        }
        let (a, b) = (g0_energy(&f), g0_energy(g));
        if a.is_finite() {
            worst_rel = worst_rel.max((a - b).abs() / a.abs());
        }
    }
    let detail = format!(
        "20 configurations ({colliding} with shared endpoints): {} invariant failures; worst G0 relative change {worst_rel:.2e} (1e-2)",
        failures.len()
    );
    if !failures.is_empty() {
        return Err(format!("{detail}; {}", failures.join("; ")));
    }
    require(worst_rel <= 1e-2, detail)
}

fn c12_dx() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut worst: f64 = 0.0;
    let mut perm_mismatch = 0;
    for trial in 0..100 {
        let n = 1 + trial % 6;
        let pts = |rng: &mut ChaCha8Rng| -> Vec<Point2> {
            (0..n)
                .map(|_| Point2::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect()
        };
        let p = pts(&mut rng);
        let q = pts(&mut rng);
        let got = dx_distance(&LabeledPointSet(p.clone()), &LabeledPointSet(q.clone())).map_err(|e| e.to_string())?;
        let (want, perm) = brute_dx(&p, &q);
        worst = worst.max((got.distance - want).abs() / want.max(1e-300));
        if got.permutation != perm {
            perm_mismatch += 1;
        }
    }
    require(
        worst <= 1e-12 && perm_mismatch == 0,
        format!("worst relative deviation {worst:.1e}; permutation mismatches {perm_mismatch} of 100"),
    )
}

fn run(id: usize, name: &str, check: impl FnOnce() -> Check) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    });
    let secs = start.elapsed().as_secs_f64();
    let (tag, detail, ok) = match outcome {
        Ok(d) => ("PASS", d, true),
        Err(d) => ("FAIL", d, false),
    };
    println!("criterion {id:>2} {tag} [{secs:7.2} s] {name}: {detail}");
    ok
}

fn main() {
    // Cargo passes harness flags such as --nocapture; none of them apply here.
    let mut results = vec![
        run(1, "gamma constant convergence rate", c1_gamma_rate),
        run(2, "disk Green's function", c2_disk_green),
        run(3, "renormalized energy spot value", c3_w_spot),
        run(4, "reduced boundary value problem", c4_reduced_bvp),
        run(5, "ODE first integrals", c5_ode_conservation),
    ];
    match pair_fields() {
        Ok(pf) => {
            results.push(run(6, "2D recovery energy", || c6_recovery_energy(&pf)));
            results.push(run(7, "Jacobian quantization", || c7_jacobian(&pf)));
        }
        Err(e) => {
            for (id, name) in [(6, "2D recovery energy"), (7, "Jacobian quantization")] {
                println!("criterion {id:>2} FAIL [   0.00 s] {name}: could not build fields: {e}");
                results.push(false);
            }
        }
    }
    results.push(run(8, "flat norm against linear programming", c8_flat_norm));
    results.push(run(9, "expansion sweep trend", c9_gamma_sweep));
    results.push(run(10, "vortex balls", c10_vortex_balls));
    results.push(run(11, "f-delta regularization", c11_fdelta));
    results.push(run(12, "quotient distance against enumeration", c12_dx));
    let passed = results.iter().filter(|&&r| r).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
