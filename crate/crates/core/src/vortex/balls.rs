//! Grow-and-merge vortex balls with an energy lower-bound certificate.
//!
//! Seeds cover the connected components of `{|w| ≤ ½}` and any winding
//! plaquette they miss. Balls then grow by a common factor about fixed
//! centers until the total radius reaches the target or two balls touch;
//! touching balls are replaced by their smallest enclosing ball, which never
//! increases the sum of the radii.

use std::collections::VecDeque;
use std::f64::consts::PI;

use serde::Serialize;

use super::big_lambda;
use crate::domain::Dir;
use crate::error::{Error, Result};
use crate::fields::{energy_density, jacobian_plaquette, plaquette_center, ComplexField2D};
use crate::point::Point2;

/// Constant `c` in the modulus estimate entering `λ_ε`.
pub const LAMBDA_C: f64 = 4.0;
/// Cap `c₀/ε` on the integrand of `Λ_ε`.
pub const LAMBDA_C0: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Ball {
    pub center: Point2,
    pub radius: f64,
    pub degree: i64,
    /// False when the ball is not compactly inside the domain.
    pub reliable: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BallCollection {
    pub balls: Vec<Ball>,
    /// Scale parameter: the requested total radius.
    pub sigma: f64,
    pub total_radius: f64,
    /// `Σ_k (r_k/σ) Λ_ε(σ)` over reliable balls of nonzero degree.
    pub lower_bound: f64,
    pub epsilon: f64,
    pub c: f64,
    pub c0: f64,
    /// Sum of radii before and after every merge.
    pub merge_history: Vec<(f64, f64)>,
}

impl BallCollection {
    pub fn total_degree(&self) -> i64 {
        self.balls.iter().map(|b| b.degree).sum()
    }
}

fn enclosing(a: (Point2, f64), b: (Point2, f64)) -> (Point2, f64) {
    let (big, small) = if a.1 >= b.1 { (a, b) } else { (b, a) };
    let d = big.0.dist(small.0);
    if d + small.1 <= big.1 {
        return big;
    }
    let r = (d + big.1 + small.1) / 2.0;
    let dir = (small.0 - big.0) * (1.0 / d);
    (big.0 + dir * (r - big.1), r)
}

fn total(balls: &[(Point2, f64)]) -> f64 {
    balls.iter().map(|b| b.1).sum()
}

/// Merges closed balls until they are pairwise disjoint.
fn merge_all(balls: &mut Vec<(Point2, f64)>, history: &mut Vec<(f64, f64)>) {
    'outer: loop {
        for i in 0..balls.len() {
            for j in i + 1..balls.len() {
                if balls[i].0.dist(balls[j].0) <= balls[i].1 + balls[j].1 {
                    let before = total(balls);
                    let e = enclosing(balls[i], balls[j]);
                    balls.swap_remove(j);
                    balls[i] = e;
                    history.push((before, total(balls)));
                    continue 'outer;
                }
            }
        }
        return;
    }
}

/// Seed balls on `{|w| ≤ ½}` and uncovered winding plaquettes.
fn seeds(w: &ComplexField2D) -> Vec<(Point2, f64)> {
    let grid = w.grid();
    let h = grid.spacing();
    let small: Vec<bool> = w.values().iter().map(|u| u.norm() <= 0.5).collect();
    let mut seen = vec![false; grid.len()];
    let mut out = Vec::new();
    for start in 0..grid.len() {
        if !small[start] || seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let mut pts = Vec::new();
        while let Some(k) = queue.pop_front() {
            pts.push(grid.point(k));
            for d in Dir::ALL {
                if let Some(nb) = grid.neighbor(k, d) {
                    if small[nb] && !seen[nb] {
                        seen[nb] = true;
                        queue.push_back(nb);
                    }
                }
            }
        }
        let (mut lo, mut hi) = (pts[0], pts[0]);
        for p in &pts {
            lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        let c = (lo + hi) * 0.5;
        let r = pts.iter().map(|p| p.dist(c)).fold(0.0, f64::max) + h;
        out.push((c, r));
    }
    for p in jacobian_plaquette(w) {
        if p.degree() == 0 {
            continue;
        }
        let c = plaquette_center(grid, &p);
        if !out.iter().any(|b| b.0.dist(c) < b.1) {
            out.push((c, h));
        }
    }
    out
}

/// Runs the ball construction up to total radius `target_total_radius`.
pub fn ball_construction(w: &ComplexField2D, target_total_radius: f64) -> Result<BallCollection> {
    if !(target_total_radius > 0.0 && target_total_radius.is_finite()) {
        return Err(Error::Config(format!(
            "target total radius must be positive, got {target_total_radius}"
        )));
    }
    let sigma = target_total_radius;
    let mut balls = seeds(w);
    let mut history = Vec::new();
    merge_all(&mut balls, &mut history);
    loop {
        let sum = total(&balls);
        if balls.is_empty() || sum >= sigma * (1.0 - 1e-12) {
            break;
        }
        let mut t = sigma / sum;
        for i in 0..balls.len() {
            for j in i + 1..balls.len() {
                t = t.min(balls[i].0.dist(balls[j].0) / (balls[i].1 + balls[j].1));
            }
        }
        for b in balls.iter_mut() {
            b.1 *= t;
        }
        merge_all(&mut balls, &mut history);
    }
    let grid = w.grid();
    let plaquettes = jacobian_plaquette(w);
    let domain = grid.domain();
    let eps = w.epsilon();
    let lam = big_lambda(sigma, eps);
    let out: Vec<Ball> = balls
        .iter()
        .map(|&(c, r)| {
            let winding: f64 = plaquettes
                .iter()
                .filter(|p| plaquette_center(grid, p).dist(c) <= r)
                .map(|p| p.winding)
                .sum();
            Ball {
                center: c,
                radius: r,
                degree: (winding / (2.0 * PI)).round() as i64,
                reliable: domain.contains(c) && domain.dist_to_boundary(c) > r,
            }
        })
        .collect();
    let lower_bound = out
        .iter()
        .filter(|b| b.reliable && b.degree != 0)
        .map(|b| b.radius / sigma * lam)
        .sum();
    Ok(BallCollection {
        total_radius: total(&balls),
        balls: out,
        sigma,
        lower_bound,
        epsilon: eps,
        c: LAMBDA_C,
        c0: LAMBDA_C0,
        merge_history: history,
    })
}

/// `∫ e_ε(w)` over the nodes covered by the balls.
pub fn covered_energy(w: &ComplexField2D, balls: &BallCollection) -> f64 {
    let grid = w.grid();
    energy_density(w)
        .iter()
        .zip(grid.weights())
        .zip(grid.points())
        .filter(|(_, x)| balls.balls.iter().any(|b| b.center.dist(*x) <= b.radius))
        .map(|((e, wt), _)| e * wt)
        .sum()
}
