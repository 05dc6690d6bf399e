//! Vortex detection, atomic-measure metrics and vortex-ball lower bounds.

mod balls;
mod flat;

use std::collections::VecDeque;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::{r_star, trapezoid_weights};
use crate::error::{Error, Result};
use crate::fields::{jacobian_disk_integral, jacobian_plaquette, plaquette_center, ComplexField2D};
use crate::point::Point2;
use crate::reduced::FilamentConfiguration;

pub use balls::{ball_construction, covered_energy, Ball, BallCollection, LAMBDA_C, LAMBDA_C0};
pub use flat::flat_norm_0;

/// A finite signed sum of Dirac masses.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct AtomicMeasure {
    pub atoms: Vec<(Point2, f64)>,
}

impl AtomicMeasure {
    pub fn new(atoms: Vec<(Point2, f64)>) -> Result<Self> {
        for (p, w) in &atoms {
            if !p.is_finite() || !w.is_finite() || *w == 0.0 {
                return Err(Error::Config(format!("invalid atom {w} at ({}, {})", p.x, p.y)));
            }
        }
        Ok(AtomicMeasure { atoms })
    }

    pub fn empty() -> Self {
        AtomicMeasure { atoms: Vec::new() }
    }

    /// Equal weight `weight` at each point.
    pub fn uniform(points: &[Point2], weight: f64) -> Result<Self> {
        Self::new(points.iter().map(|p| (*p, weight)).collect())
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.atoms.iter().map(|a| a.1).sum()
    }
}

/// Plaquettes that carry vorticity: a non-trivial winding or a zero corner.
fn is_active(winding: f64, core: bool) -> bool {
    winding.abs() > PI || core
}

/// Groups active plaquettes into 8-connected clusters, one atom per cluster
/// of nonzero total degree with weight `π·degree`.
pub fn detect_vortices(w: &ComplexField2D) -> AtomicMeasure {
    let grid = w.grid();
    let (nx, ny) = grid.lattice_dims();
    let plaquettes = jacobian_plaquette(w);
    let mut slot = vec![usize::MAX; nx * ny];
    for (k, p) in plaquettes.iter().enumerate() {
        if is_active(p.winding, p.core) {
            slot[p.j * nx + p.i] = k;
        }
    }
    let mut seen = vec![false; plaquettes.len()];
    let mut atoms = Vec::new();
    for start in 0..plaquettes.len() {
        let p0 = &plaquettes[start];
        if seen[start] || !is_active(p0.winding, p0.core) {
            continue;
        }
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let (mut total, mut wsum) = (0.0, 0.0);
        let mut centroid = Point2::ZERO;
        let mut plain = Point2::ZERO;
        let mut count = 0usize;
        while let Some(k) = queue.pop_front() {
            let p = &plaquettes[k];
            let c = plaquette_center(grid, p);
            total += p.winding;
            wsum += p.winding.abs();
            centroid += c * p.winding.abs();
            plain += c;
            count += 1;
            for dj in -1isize..=1 {
                for di in -1isize..=1 {
                    let (i, j) = (p.i as isize + di, p.j as isize + dj);
                    if i < 0 || j < 0 || i as usize >= nx || j as usize >= ny {
                        continue;
                    }
                    let q = slot[j as usize * nx + i as usize];
                    if q != usize::MAX && !seen[q] {
                        seen[q] = true;
                        queue.push_back(q);
                    }
                }
            }
        }
        let degree = (total / (2.0 * PI)).round();
        if degree != 0.0 {
            let at = if wsum > 0.0 {
                centroid * (1.0 / wsum)
            } else {
                plain * (1.0 / count as f64)
            };
            atoms.push((at, PI * degree));
        }
    }
    AtomicMeasure { atoms }
}

/// Number of radii sampled on `(r*/2, r*)`.
pub const SN_RADII: usize = 256;

/// Outcome of the good-height test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SnResult {
    /// Measure of the radii `s` with `|∫_{B(s)} J − nπ| ≤ 1`.
    pub measure: f64,
    pub is_good: bool,
    pub r_star: f64,
}

/// Measures the set of radii on which the Jacobian mass in `B(s)` is within 1
/// of `nπ`; the slice is good when that set has measure at least `r*/4`.
pub fn sn_criterion(w: &ComplexField2D, n: usize) -> SnResult {
    let rs = r_star(w.grid().domain());
    let ds = rs / (2.0 * SN_RADII as f64);
    let target = n as f64 * PI;
    let hits = (0..SN_RADII)
        .into_par_iter()
        .filter(|&k| {
            let s = rs / 2.0 + (k as f64 + 0.5) * ds;
            matches!(jacobian_disk_integral(w, Point2::ZERO, s), Some(v) if (v - target).abs() <= 1.0)
        })
        .count();
    let measure = hits as f64 * ds;
    SnResult {
        measure,
        is_good: measure >= rs / 4.0,
        r_star: rs,
    }
}

/// `min_{m ∈ [0,1]} m²d²π/r + (1 − m)²/(cε)` with `c = LAMBDA_C`.
pub fn lambda_lower_bound(r: f64, d: i64, epsilon: f64) -> f64 {
    let a = (d * d) as f64 * PI;
    a / (r + a * LAMBDA_C * epsilon)
}

/// `Λ_ε(σ) = ∫₀^σ min(λ_ε(r, 1), c₀/ε) dr`.
pub fn big_lambda(sigma: f64, epsilon: f64) -> f64 {
    // λ_ε(r, 1) ≤ 1/(cε) and c₀ = 1/c, so the cap never binds.
    const { assert!(LAMBDA_C0 * LAMBDA_C >= 1.0) };
    PI * (1.0 + sigma / (LAMBDA_C * PI * epsilon)).ln()
}

/// Trapezoid-in-`z` integral of the slice-wise flat distance between
/// `slices[k]` and `π Σ_i δ_{f_i(z_k)}`; the slices sample `[0, L]` uniformly.
pub fn sliced_flat_norm(slices: &[AtomicMeasure], reference: &FilamentConfiguration) -> Result<f64> {
    let m = slices.len();
    if m < 2 {
        return Err(Error::Config(format!("need at least 2 slices, got {m}")));
    }
    let dz = reference.height() / (m - 1) as f64;
    let per_slice: Vec<f64> = slices
        .par_iter()
        .enumerate()
        .map(|(k, s)| {
            let z = k as f64 * dz;
            let refm = AtomicMeasure {
                atoms: (0..reference.n()).map(|i| (reference.eval(i, z), PI)).collect(),
            };
            flat_norm_0(s, &refm)
        })
        .collect();
    Ok(per_slice.iter().zip(trapezoid_weights(m, dz)).map(|(v, w)| v * w).sum())
}
