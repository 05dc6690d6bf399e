//! The critical-point system `f_i'' = −∇_{f_i} V` integrated in `z`.
//!
//! `V = (c/2) Σ_{i≠j} log|f_i − f_j|` with `c` from the [`Convention`], so
//! the force on filament `i` is `−c Σ_{j≠i} (f_i − f_j)/|f_i − f_j|²`.

use serde::Serialize;

use super::Convention;
use crate::error::{Error, Result};
use crate::point::Point2;

/// Distance below which the integrator reports a collision.
pub const COLLISION_DISTANCE: f64 = 1e-12;

#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub z: Vec<f64>,
    pub positions: Vec<Vec<Point2>>,
    pub velocities: Vec<Vec<Point2>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Conserved {
    pub energy: f64,
    pub momentum: Point2,
    pub angular_momentum: f64,
}

/// Checks the relative motion over one step, taken as linear, against the
/// collision distance; `prev == f` checks a single state.
fn check_collision(prev: &[Point2], f: &[Point2], z: f64) -> Result<()> {
    for i in 0..f.len() {
        for j in i + 1..f.len() {
            let d = Point2::ZERO.dist_to_segment(prev[i] - prev[j], f[i] - f[j]);
            if d < COLLISION_DISTANCE {
                return Err(Error::Collision { i, j, z });
            }
        }
    }
    Ok(())
}

fn acceleration(f: &[Point2], c: f64, out: &mut [Point2]) {
    for (i, a) in out.iter_mut().enumerate() {
        let mut s = Point2::ZERO;
        for (j, q) in f.iter().enumerate() {
            if j != i {
                let r = f[i] - *q;
                s += r * (1.0 / r.norm_sq());
            }
        }
        *a = s * (-c);
    }
}

/// First integrals of the system at one state.
pub fn conserved_quantities(
    positions: &[Point2],
    velocities: &[Point2],
    convention: Convention,
) -> Conserved {
    let c = convention.interaction_factor();
    let mut kinetic = 0.0;
    let mut momentum = Point2::ZERO;
    let mut angular = 0.0;
    for (p, v) in positions.iter().zip(velocities) {
        kinetic += 0.5 * v.norm_sq();
        momentum += *v;
        angular += p.cross(*v);
    }
    let mut potential = 0.0;
    for i in 0..positions.len() {
        for j in i + 1..positions.len() {
            potential += c * positions[i].dist(positions[j]).ln();
        }
    }
    Conserved {
        energy: kinetic + potential,
        momentum,
        angular_momentum: angular,
    }
}

/// Störmer-Verlet (velocity form) from `z = 0` to `z_max`.
///
/// The step is shrunk to `z_max / ⌈z_max / step⌉` so that the last sample
/// lands on `z_max`.
pub fn integrate_ode(
    positions: &[Point2],
    velocities: &[Point2],
    step: f64,
    z_max: f64,
    convention: Convention,
) -> Result<Trajectory> {
    if positions.len() != velocities.len() {
        return Err(Error::ShapeMismatch {
            expected: positions.len(),
            got: velocities.len(),
        });
    }
    if !(step > 0.0 && step.is_finite()) || !(z_max >= 0.0 && z_max.is_finite()) {
        return Err(Error::Config(format!("invalid step {step} or horizon {z_max}")));
    }
    check_collision(positions, positions, 0.0)?;
    let c = convention.interaction_factor();
    let steps = ((z_max / step).ceil() as usize).max(1);
    let h = z_max / steps as f64;
    let n = positions.len();

    let mut f = positions.to_vec();
    let mut v = velocities.to_vec();
    let mut a = vec![Point2::ZERO; n];
    acceleration(&f, c, &mut a);
    let mut traj = Trajectory {
        z: vec![0.0],
        positions: vec![f.clone()],
        velocities: vec![v.clone()],
    };
    let mut prev = f.clone();
    for k in 1..=steps {
        prev.copy_from_slice(&f);
        for i in 0..n {
            v[i] += a[i] * (0.5 * h);
            f[i] += v[i] * h;
        }
        let z = if k == steps { z_max } else { k as f64 * h };
        check_collision(&prev, &f, z)?;
        acceleration(&f, c, &mut a);
        for i in 0..n {
            v[i] += a[i] * (0.5 * h);
        }
        traj.z.push(z);
        traj.positions.push(f.clone());
        traj.velocities.push(v.clone());
    }
    Ok(traj)
}
