//! Constrained minimization of the discrete reduced energy.
//!
//! Endpoints are held fixed. Interior nodes move along limited-memory
//! quasi-Newton directions whose initial inverse Hessian is the inverse of the
//! kinetic operator `(π/Δz)·tridiag(−1, 2, −1)`, i.e. an H¹-preconditioned
//! descent. Steps are accepted by backtracking on the Armijo condition, with
//! energy differences computed term by term so that acceptance stays
//! meaningful near the optimum. The logarithmic barrier rejects any trial step
//! that creates an interior collision.

use std::collections::VecDeque;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{dx_distance, g0_energy_delta, g0_gradient, g0_parts, EndpointConstraint};
use super::{FilamentConfiguration, LabeledPointSet};
use crate::error::{Error, Result};
use crate::point::Point2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MinimizeOptions {
    /// Stop once `max |∂G0/∂f| ≤ tolerance` over interior nodes.
    pub tolerance: f64,
    pub max_iters: usize,
    /// Number of stored curvature pairs.
    pub memory: usize,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        MinimizeOptions {
            tolerance: 1e-9,
            max_iters: 20_000,
            memory: 12,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MinimizeReport {
    pub iterations: usize,
    pub grad_norm: f64,
    /// Energy without endpoint terms after each accepted iteration (first entry is the start).
    pub free_energy_trace: Vec<f64>,
}

fn max_norm(v: &[Point2]) -> f64 {
    v.iter().map(|p| p.x.abs().max(p.y.abs())).fold(0.0, f64::max)
}

fn dot(a: &[Point2], b: &[Point2]) -> f64 {
    a.iter().zip(b).map(|(p, q)| p.dot(*q)).sum()
}

/// Applies the inverse kinetic operator to `g` filament by filament.
fn apply_preconditioner(f: &FilamentConfiguration, g: &[Point2]) -> Vec<Point2> {
    let n = f.n();
    let m = f.segments();
    let scale = f.dz() / PI;
    let mut out = vec![Point2::ZERO; g.len()];
    let len = m - 1;
    let mut c_prime = vec![0.0; len];
    let mut d_prime = vec![Point2::ZERO; len];
    for i in 0..n {
        // Thomas algorithm for tridiag(−1, 2, −1) x = g.
        for r in 0..len {
            let rhs = g[(r + 1) * n + i];
            if r == 0 {
                c_prime[0] = -0.5;
                d_prime[0] = rhs * 0.5;
            } else {
                let denom = 2.0 + c_prime[r - 1];
                c_prime[r] = -1.0 / denom;
                d_prime[r] = (rhs + d_prime[r - 1]) * (1.0 / denom);
            }
        }
        let mut x = Point2::ZERO;
        for r in (0..len).rev() {
            x = if r + 1 == len {
                d_prime[r]
            } else {
                d_prime[r] - x * c_prime[r]
            };
            out[(r + 1) * n + i] = x * scale;
        }
    }
    out
}

fn axpy(f: &FilamentConfiguration, alpha: f64, d: &[Point2]) -> FilamentConfiguration {
    let mut out = f.clone();
    for (p, q) in out.positions_mut().iter_mut().zip(d) {
        *p += *q * alpha;
    }
    out
}

/// Minimizes the discrete reduced energy with fixed endpoints.
pub fn minimize_g0(
    f0: &FilamentConfiguration,
    constraint: &EndpointConstraint,
    options: &MinimizeOptions,
) -> Result<(FilamentConfiguration, MinimizeReport)> {
    if constraint.n() != f0.n() {
        return Err(Error::Config(format!(
            "constraint has {} points for {} filaments",
            constraint.n(),
            f0.n()
        )));
    }
    if !constraint.is_satisfied_by(f0, 1e-12) {
        return Err(Error::Config("initial guess violates the endpoint constraint".into()));
    }
    if let Some(e) = f0.find_interior_collision() {
        return Err(e);
    }

    let mut x = f0.clone();
    let mut g = g0_gradient(&x)?;
    let mut free = g0_parts(&x).free();
    let mut trace = vec![free];
    let mut history: VecDeque<(Vec<Point2>, Vec<Point2>, f64)> = VecDeque::new();
    let mut iterations = 0;

    loop {
        let gnorm = max_norm(&g);
        if gnorm <= options.tolerance {
            return Ok((
                x,
                MinimizeReport {
                    iterations,
                    grad_norm: gnorm,
                    free_energy_trace: trace,
                },
            ));
        }
        if iterations >= options.max_iters {
            return Err(Error::MinimizerNotConverged {
                iterations,
                grad_norm: gnorm,
                last: Box::new(x),
            });
        }
        iterations += 1;

        // Two-loop recursion with the kinetic preconditioner as initial inverse Hessian.
        let mut q = g.clone();
        let mut alphas = Vec::with_capacity(history.len());
        for (s, y, rho) in history.iter().rev() {
            let a = rho * dot(s, &q);
            for (qi, yi) in q.iter_mut().zip(y) {
                *qi -= *yi * a;
            }
            alphas.push(a);
        }
        let mut r = apply_preconditioner(&x, &q);
        for ((s, y, rho), a) in history.iter().zip(alphas.iter().rev()) {
            let b = rho * dot(y, &r);
            for (ri, si) in r.iter_mut().zip(s) {
                *ri += *si * (a - b);
            }
        }
        let mut d: Vec<Point2> = r.into_iter().map(|p| -p).collect();
        let mut slope = dot(&g, &d);
        if !(slope < 0.0) {
            history.clear();
            d = apply_preconditioner(&x, &g).into_iter().map(|p| -p).collect();
            slope = dot(&g, &d);
        }

        // Below this size energy differences are round-off; such steps are
        // accepted on the strength of the (accurate) gradient alone.
        let noise = 1e-13 * (1.0 + free.abs());
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..80 {
            let trial = axpy(&x, step, &d);
            let delta = g0_energy_delta(&x, &trial);
            let armijo = delta <= 1e-4 * step * slope;
            let in_noise = -step * slope <= noise && delta <= noise;
            if delta.is_finite() && (armijo || in_noise) {
                accepted = Some((trial, delta));
                break;
            }
            step *= 0.5;
        }
        let Some((x_new, delta)) = accepted else {
            return Err(Error::MinimizerNotConverged {
                iterations,
                grad_norm: gnorm,
                last: Box::new(x),
            });
        };
        let g_new = g0_gradient(&x_new)?;
        let s: Vec<Point2> = d.iter().map(|p| *p * step).collect();
        let y: Vec<Point2> = g_new.iter().zip(&g).map(|(a, b)| *a - *b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-300 {
            history.push_back((s, y, 1.0 / sy));
            if history.len() > options.memory {
                history.pop_front();
            }
        }
        free += delta;
        trace.push(free);
        x = x_new;
        g = g_new;
    }
}

/// Straight segments joining each bottom point to its optimally matched top point.
pub fn straight_initial_guess(
    constraint: &EndpointConstraint,
    height: f64,
    segments: usize,
) -> Result<FilamentConfiguration> {
    let m = dx_distance(
        &LabeledPointSet(constraint.bottom.clone()),
        &LabeledPointSet(constraint.top.clone()),
    )?;
    FilamentConfiguration::from_fn(constraint.n(), height, segments, |i, z| {
        let t = z / height;
        constraint.bottom[i] * (1.0 - t) + constraint.top[m.permutation[i]] * t
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduced::g0_energy;

    #[test]
    fn single_filament_straightens() {
        let c = EndpointConstraint::new(vec![Point2::ZERO], vec![Point2::new(1.0, 0.0)]).unwrap();
        let f0 = FilamentConfiguration::from_fn(1, 1.0, 32, |_, z| {
            Point2::new(z, 0.2 * (3.0 * std::f64::consts::PI * z).sin())
        })
        .unwrap();
        let (f, rep) = minimize_g0(&f0, &c, &MinimizeOptions::default()).unwrap();
        assert!((g0_energy(&f) - PI / 2.0).abs() < 1e-9);
        assert!(rep.grad_norm <= 1e-9);
        assert_eq!(f.bottom(), f0.bottom());
        assert_eq!(f.top(), f0.top());
    }

    #[test]
    fn critical_point_is_fixed() {
        let c = EndpointConstraint::new(vec![Point2::ZERO], vec![Point2::new(0.5, 0.5)]).unwrap();
        let f0 = straight_initial_guess(&c, 2.0, 16).unwrap();
        let (f, rep) = minimize_g0(&f0, &c, &MinimizeOptions::default()).unwrap();
        assert_eq!(rep.iterations, 0);
        assert!(f.max_abs_diff(&f0) < 1e-15);
    }

    #[test]
    fn preconditioner_inverts_kinetic_operator() {
        let f = FilamentConfiguration::from_fn(2, 1.0, 9, |i, z| Point2::new(i as f64 + z, z * z))
            .unwrap();
        let n = 2;
        let g: Vec<Point2> = (0..f.positions().len())
            .map(|k| {
                let node = k / n;
                if node == 0 || node == f.segments() {
                    Point2::ZERO
                } else {
                    Point2::new((k as f64).sin(), (k as f64 * 0.3).cos())
                }
            })
            .collect();
        let x = apply_preconditioner(&f, &g);
        let dz = f.dz();
        for k in 1..f.segments() {
            for i in 0..n {
                let lap = x[k * n + i] * 2.0 - x[(k - 1) * n + i] - x[(k + 1) * n + i];
                let back = lap * (PI / dz);
                assert!((back - g[k * n + i]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_bad_start() {
        let c = EndpointConstraint::new(vec![Point2::ZERO], vec![Point2::new(1.0, 0.0)]).unwrap();
        let f0 = FilamentConfiguration::from_fn(1, 1.0, 8, |_, z| Point2::new(z, 1.0)).unwrap();
        assert!(matches!(
            minimize_g0(&f0, &c, &MinimizeOptions::default()),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn iteration_cap_reports_last_iterate() {
        let c = EndpointConstraint::new(vec![Point2::ZERO], vec![Point2::new(1.0, 0.0)]).unwrap();
        let f0 = FilamentConfiguration::from_fn(1, 1.0, 32, |_, z| {
            Point2::new(z, 0.3 * (std::f64::consts::PI * z).sin())
        })
        .unwrap();
        let opts = MinimizeOptions {
            tolerance: 1e-300,
            max_iters: 1,
            ..Default::default()
        };
        match minimize_g0(&f0, &c, &opts) {
            Err(Error::MinimizerNotConverged { last, .. }) => assert_eq!(last.n(), 1),
            other => panic!("unexpected {other:?}"),
        }
    }
}
