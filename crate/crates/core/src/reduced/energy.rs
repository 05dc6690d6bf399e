use std::f64::consts::PI;

use super::{Convention, FilamentConfiguration};
use crate::error::Result;
use crate::point::Point2;

/// The discrete reduced energy split into its parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct G0Parts {
    /// `π Σ_segments Σ_i |Δf_i|² / (2Δz)`.
    pub kinetic: f64,
    /// `−π Σ_{interior k} Δz Σ_{i≠j} log|f_i − f_j|`; `+∞` on an interior collision.
    pub interaction_interior: f64,
    /// Endpoint trapezoid terms; `+∞` when an endpoint multiset has repeats.
    pub interaction_endpoints: f64,
}

impl G0Parts {
    pub fn total(&self) -> f64 {
        self.kinetic + self.interaction_interior + self.interaction_endpoints
    }

    /// Energy without the endpoint terms, which are constant under the
    /// endpoint constraint and finite even when boundary points repeat.
    pub fn free(&self) -> f64 {
        self.kinetic + self.interaction_interior
    }
}

fn node_log_sum(points: &[Point2]) -> f64 {
    let mut s = 0.0;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let d = points[i].dist(points[j]);
            if d == 0.0 {
                return f64::NEG_INFINITY;
            }
            s += 2.0 * d.ln();
        }
    }
    s
}

pub fn g0_parts(f: &FilamentConfiguration) -> G0Parts {
    let dz = f.dz();
    let m = f.segments();
    let n = f.n();
    let mut kinetic = 0.0;
    for k in 0..m {
        for i in 0..n {
            kinetic += (f.pos(k + 1, i) - f.pos(k, i)).norm_sq();
        }
    }
    kinetic *= PI / (2.0 * dz);

    let mut interior = 0.0;
    for k in 1..m {
        interior += node_log_sum(f.node(k));
    }
    let ends = node_log_sum(f.node(0)) + node_log_sum(f.node(m));
    G0Parts {
        kinetic,
        interaction_interior: -PI * dz * interior,
        interaction_endpoints: -PI * dz / 2.0 * ends,
    }
}

/// Discrete reduced energy; `+∞` if any node has coincident distinct filaments.
pub fn g0_energy(f: &FilamentConfiguration) -> f64 {
    g0_parts(f).total()
}

/// `free(b) − free(a)` evaluated term by term, so that tiny differences
/// between nearby configurations keep their relative precision.
///
/// Both configurations must share shape; endpoint terms are excluded.
pub fn g0_energy_delta(a: &FilamentConfiguration, b: &FilamentConfiguration) -> f64 {
    debug_assert_eq!(a.positions().len(), b.positions().len());
    let dz = a.dz();
    let m = a.segments();
    let n = a.n();
    let mut kin = 0.0;
    for k in 0..m {
        for i in 0..n {
            let da = a.pos(k + 1, i) - a.pos(k, i);
            let db = b.pos(k + 1, i) - b.pos(k, i);
            kin += (db - da).dot(db + da);
        }
    }
    let mut logs = 0.0;
    for k in 1..m {
        let (na, nb) = (a.node(k), b.node(k));
        for i in 0..n {
            for j in i + 1..n {
                let ra = na[i] - na[j];
                let rb = nb[i] - nb[j];
                let ra2 = ra.norm_sq();
                if rb.norm_sq() == 0.0 {
                    return f64::INFINITY;
                }
                // 2·log(|rb|/|ra|) for the ordered pair sum
                logs += ((rb - ra).dot(rb + ra) / ra2).ln_1p();
            }
        }
    }
    PI / (2.0 * dz) * kin - PI * dz * logs
}

/// Exact gradient of the discrete energy with respect to interior node
/// positions; endpoint entries are zero.
pub fn g0_gradient(f: &FilamentConfiguration) -> Result<Vec<Point2>> {
    if let Some(e) = f.find_interior_collision() {
        return Err(e);
    }
    let dz = f.dz();
    let m = f.segments();
    let n = f.n();
    let mut g = vec![Point2::ZERO; f.positions().len()];
    for k in 1..m {
        let node = f.node(k);
        for i in 0..n {
            let lap = f.pos(k, i) * 2.0 - f.pos(k - 1, i) - f.pos(k + 1, i);
            let mut force = Point2::ZERO;
            for j in 0..n {
                if j != i {
                    let r = node[i] - node[j];
                    force += r * (1.0 / r.norm_sq());
                }
            }
            g[k * n + i] = lap * (PI / dz) - force * (2.0 * PI * dz);
        }
    }
    Ok(g)
}

/// Euler-Lagrange residual `−f_i'' − c Σ_{j≠i} (f_i − f_j)/|f_i − f_j|²` at
/// interior nodes, with `c` set by the convention and `f''` by central
/// differences. Endpoint entries are zero.
pub fn el_residual(f: &FilamentConfiguration, convention: Convention) -> Result<Vec<Point2>> {
    if let Some(e) = f.find_interior_collision() {
        return Err(e);
    }
    let c = convention.interaction_factor();
    let dz = f.dz();
    let n = f.n();
    let mut r = vec![Point2::ZERO; f.positions().len()];
    for k in 1..f.segments() {
        let node = f.node(k);
        for i in 0..n {
            let second = (f.pos(k + 1, i) + f.pos(k - 1, i) - f.pos(k, i) * 2.0) * (1.0 / (dz * dz));
            let mut s = Point2::ZERO;
            for j in 0..n {
                if j != i {
                    let d = node[i] - node[j];
                    s += d * (1.0 / d.norm_sq());
                }
            }
            r[k * n + i] = -second - s * c;
        }
    }
    Ok(r)
}
