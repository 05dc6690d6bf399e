//! The reduced filament model.
//!
//! A configuration is `n` planar paths sampled on `M + 1` uniform heights in
//! `[0, L]`. The energy is
//!
//! ```text
//! G0(f) = π ∫ ( ½ Σ_i |f_i'|² − Σ_{i≠j} log|f_i − f_j| ) dz
//! ```
//!
//! discretized with exact per-segment kinetic energy (forward differences) and
//! the trapezoid rule on the logarithmic interaction.

mod assignment;
mod energy;
mod minimize;
mod ode;
mod regularize;

pub use assignment::{assignment_cost, dx_distance, solve_assignment, DxMatch};
pub use energy::{el_residual, g0_energy, g0_energy_delta, g0_gradient, g0_parts, G0Parts};
pub use minimize::{minimize_g0, straight_initial_guess, MinimizeOptions, MinimizeReport};
pub use ode::{conserved_quantities, integrate_ode, Conserved, Trajectory};
pub use regularize::{regularize_fdelta, FDelta, DRAWS_PER_RADIUS, MAX_DRAWS};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::Point2;

/// Which form of the interaction term the Euler-Lagrange system uses.
///
/// `GradientConsistent` is the exact Euler-Lagrange expression of `G0`,
/// whose ordered double sum carries a factor 2 on the interaction.
/// `SingleSum` drops that factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    #[default]
    GradientConsistent,
    SingleSum,
}

impl Convention {
    /// Factor multiplying `Σ_j (f_i − f_j)/|f_i − f_j|²` in the force.
    pub fn interaction_factor(self) -> f64 {
        match self {
            Convention::GradientConsistent => 2.0,
            Convention::SingleSum => 1.0,
        }
    }
}

/// `n` planar filaments sampled at `M + 1` uniform heights on `[0, L]`.
///
/// Positions are stored node-major: entry `k * n + i` is filament `i` at height `z_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct FilamentConfiguration {
    n: usize,
    height: f64,
    positions: Vec<Point2>,
}

impl FilamentConfiguration {
    pub fn new(n: usize, height: f64, positions: Vec<Point2>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("filament count must be positive".into()));
        }
        if !(height.is_finite() && height > 0.0) {
            return Err(Error::Config(format!("height must be positive, got {height}")));
        }
        if positions.len() % n != 0 || positions.len() / n < 3 {
            return Err(Error::Config(format!(
                "need at least 3 z-nodes for {n} filaments, got {} positions",
                positions.len()
            )));
        }
        if let Some(p) = positions.iter().find(|p| !p.is_finite()) {
            return Err(Error::Config(format!("non-finite position {p:?}")));
        }
        Ok(FilamentConfiguration {
            n,
            height,
            positions,
        })
    }

    /// Samples `path(i, z)` on `segments + 1` uniform heights.
    pub fn from_fn(
        n: usize,
        height: f64,
        segments: usize,
        path: impl Fn(usize, f64) -> Point2,
    ) -> Result<Self> {
        let mut positions = Vec::with_capacity((segments + 1) * n);
        for k in 0..=segments {
            let z = if k == segments {
                height
            } else {
                k as f64 * height / segments as f64
            };
            for i in 0..n {
                positions.push(path(i, z));
            }
        }
        Self::new(n, height, positions)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    /// Number of z-segments `M`.
    pub fn segments(&self) -> usize {
        self.positions.len() / self.n - 1
    }

    pub fn nodes(&self) -> usize {
        self.segments() + 1
    }

    pub fn dz(&self) -> f64 {
        self.height / self.segments() as f64
    }

    pub fn z(&self, k: usize) -> f64 {
        if k == self.segments() {
            self.height
        } else {
            k as f64 * self.dz()
        }
    }

    pub fn z_values(&self) -> Vec<f64> {
        (0..self.nodes()).map(|k| self.z(k)).collect()
    }

    pub fn pos(&self, k: usize, i: usize) -> Point2 {
        self.positions[k * self.n + i]
    }

    pub fn set_pos(&mut self, k: usize, i: usize, p: Point2) {
        self.positions[k * self.n + i] = p;
    }

    /// All filament positions at height index `k`.
    pub fn node(&self, k: usize) -> &[Point2] {
        &self.positions[k * self.n..(k + 1) * self.n]
    }

    pub fn positions(&self) -> &[Point2] {
        &self.positions
    }

    pub(crate) fn positions_mut(&mut self) -> &mut [Point2] {
        &mut self.positions
    }

    pub fn bottom(&self) -> &[Point2] {
        self.node(0)
    }

    pub fn top(&self) -> &[Point2] {
        self.node(self.segments())
    }

    /// Piecewise-linear evaluation of filament `i` at height `z`.
    pub fn eval(&self, i: usize, z: f64) -> Point2 {
        let m = self.segments();
        let t = (z / self.dz()).clamp(0.0, m as f64);
        let k = (t.floor() as usize).min(m - 1);
        let s = t - k as f64;
        self.pos(k, i) * (1.0 - s) + self.pos(k + 1, i) * s
    }

    /// Smallest pairwise distance over interior nodes, `+∞` for one filament.
    pub fn min_interior_separation(&self) -> f64 {
        (1..self.segments())
            .map(|k| min_pair_distance(self.node(k)))
            .fold(f64::INFINITY, f64::min)
    }

    /// Smallest pairwise distance over all nodes.
    pub fn min_separation(&self) -> f64 {
        (0..self.nodes())
            .map(|k| min_pair_distance(self.node(k)))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn is_collision_free(&self) -> bool {
        self.min_interior_separation() > 0.0
    }

    /// First interior collision, if any.
    pub fn find_interior_collision(&self) -> Option<Error> {
        for k in 1..self.segments() {
            let node = self.node(k);
            for i in 0..self.n {
                for j in i + 1..self.n {
                    if node[i] == node[j] {
                        return Some(Error::Collision { i, j, z: self.z(k) });
                    }
                }
            }
        }
        None
    }

    /// Uniform scaling of all positions.
    pub fn scaled(&self, factor: f64) -> Self {
        self.map_positions(|p| p * factor)
    }

    pub fn map_positions(&self, f: impl Fn(Point2) -> Point2) -> Self {
        FilamentConfiguration {
            n: self.n,
            height: self.height,
            positions: self.positions.iter().map(|&p| f(p)).collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.positions
            .iter()
            .zip(&other.positions)
            .map(|(a, b)| a.dist(*b))
            .fold(0.0, f64::max)
    }

    /// Largest speed `|f_i'|` over segments.
    pub fn max_speed(&self) -> f64 {
        let dz = self.dz();
        let mut v: f64 = 0.0;
        for k in 0..self.segments() {
            for i in 0..self.n {
                v = v.max(self.pos(k + 1, i).dist(self.pos(k, i)) / dz);
            }
        }
        v
    }
}

pub(crate) fn min_pair_distance(points: &[Point2]) -> f64 {
    let mut d = f64::INFINITY;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            d = d.min(points[i].dist(points[j]));
        }
    }
    d
}

/// Bottom and top multisets of filament end points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EndpointConstraint {
    pub bottom: Vec<Point2>,
    pub top: Vec<Point2>,
}

impl EndpointConstraint {
    pub fn new(bottom: Vec<Point2>, top: Vec<Point2>) -> Result<Self> {
        if bottom.is_empty() || bottom.len() != top.len() {
            return Err(Error::Config(format!(
                "endpoint multisets must have equal positive size, got {} and {}",
                bottom.len(),
                top.len()
            )));
        }
        Ok(EndpointConstraint { bottom, top })
    }

    pub fn n(&self) -> usize {
        self.bottom.len()
    }

    /// Whether `f` meets the constraint up to relabeling at each end.
    pub fn is_satisfied_by(&self, f: &FilamentConfiguration, tol: f64) -> bool {
        let b = dx_distance(&LabeledPointSet(f.bottom().to_vec()), &LabeledPointSet(self.bottom.clone()));
        let t = dx_distance(&LabeledPointSet(f.top().to_vec()), &LabeledPointSet(self.top.clone()));
        matches!((b, t), (Ok(b), Ok(t)) if b.distance <= tol && t.distance <= tol)
    }

    pub fn has_collisions(&self) -> bool {
        min_pair_distance(&self.bottom) == 0.0 || min_pair_distance(&self.top) == 0.0
    }
}

/// `n` labeled planar points; the quotient by relabeling is measured by [`dx_distance`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledPointSet(pub Vec<Point2>);

impl LabeledPointSet {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_validates() {
        assert!(FilamentConfiguration::new(2, 1.0, vec![Point2::ZERO; 4]).is_err());
        assert!(FilamentConfiguration::new(2, 0.0, vec![Point2::ZERO; 6]).is_err());
        assert!(FilamentConfiguration::new(1, 1.0, vec![Point2::new(f64::NAN, 0.0); 3]).is_err());
        let f = FilamentConfiguration::from_fn(2, 2.0, 4, |i, z| Point2::new(i as f64, z)).unwrap();
        assert_eq!(f.segments(), 4);
        assert_eq!(f.z(4), 2.0);
        assert_eq!(f.pos(2, 1), Point2::new(1.0, 1.0));
        assert_eq!(f.eval(0, 1.25), Point2::new(0.0, 1.25));
    }

    #[test]
    fn collision_detection_ignores_endpoints() {
        let f = FilamentConfiguration::from_fn(2, 1.0, 4, |i, z| {
            let s = if i == 0 { 1.0 } else { -1.0 };
            Point2::new(s * z * (1.0 - z), 0.0)
        })
        .unwrap();
        assert!(f.is_collision_free());
        assert_eq!(f.min_separation(), 0.0);
        let g = FilamentConfiguration::from_fn(2, 1.0, 4, |_, _| Point2::ZERO).unwrap();
        assert!(!g.is_collision_free());
        assert!(matches!(g.find_interior_collision(), Some(Error::Collision { .. })));
    }

    #[test]
    fn endpoint_constraint_relabeling() {
        let c = EndpointConstraint::new(
            vec![Point2::new(1.0, 0.0), Point2::new(-1.0, 0.0)],
            vec![Point2::new(1.0, 0.0), Point2::new(-1.0, 0.0)],
        )
        .unwrap();
        let f = FilamentConfiguration::from_fn(2, 1.0, 4, |i, _| {
            Point2::new(if i == 0 { -1.0 } else { 1.0 }, 0.0)
        })
        .unwrap();
        assert!(c.is_satisfied_by(&f, 1e-12));
        assert!(EndpointConstraint::new(vec![Point2::ZERO], vec![]).is_err());
    }
}
