//! Explicit vortex fields: radial cores, trial slices and boundary data.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{canonical_phase, ComplexField2D, PhaseMode};
use crate::domain::{DomainSpec, Grid2D};
use crate::error::{Error, Result};
use crate::point::Point2;
use crate::renormalized::{disk_beta, CoreProfile};

/// Radial profile of a single vortex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RadialMode {
    /// Radial energy minimizer on `B(√ε)`, unit modulus outside.
    #[default]
    CoreMin,
    /// `ρ(s) = min(1, s/ε)`.
    Zeta,
}

/// A degree-one vortex profile `ρ(|x|) x/|x|` at scale `ε`.
#[derive(Debug, Clone)]
pub struct RadialFactor {
    epsilon: f64,
    mode: RadialMode,
    core: Option<CoreProfile>,
}

impl RadialFactor {
    pub fn new(epsilon: f64, mode: RadialMode) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::Config(format!("ε must be positive, got {epsilon}")));
        }
        let core = match mode {
            RadialMode::CoreMin => Some(CoreProfile::new(epsilon)?),
            RadialMode::Zeta => None,
        };
        Ok(RadialFactor {
            epsilon,
            mode,
            core,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn mode(&self) -> RadialMode {
        self.mode
    }

    /// Radius beyond which the modulus is exactly 1.
    pub fn core_radius(&self) -> f64 {
        match &self.core {
            Some(c) => c.radius(),
            None => self.epsilon,
        }
    }

    pub fn modulus(&self, s: f64) -> f64 {
        match &self.core {
            Some(c) => c.modulus(s),
            None => (s / self.epsilon).min(1.0),
        }
    }

    pub fn eval(&self, x: Point2) -> Complex64 {
        let s = x.norm();
        if s == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::new(x.x, x.y) * (self.modulus(s) / s)
    }
}

/// One-off evaluation of the radial factor; build a [`RadialFactor`] for repeated use.
pub fn radial_factor(x: Point2, epsilon: f64, mode: RadialMode) -> Result<Complex64> {
    Ok(RadialFactor::new(epsilon, mode)?.eval(x))
}

/// Per-vortex phase `β(x, p_j)` at grid nodes.
enum Phases {
    Disk(f64),
    Tabulated(Vec<Vec<f64>>),
}

impl Phases {
    fn new(grid: &Grid2D, points: &[Point2], mode: PhaseMode) -> Result<Self> {
        if mode.use_closed_form(grid.domain())? {
            let DomainSpec::Disk { radius } = *grid.domain() else {
                unreachable!("closed form is only selected for disks")
            };
            return Ok(Phases::Disk(radius));
        }
        let mut tables: Vec<Vec<f64>> = Vec::with_capacity(points.len());
        for (j, p) in points.iter().enumerate() {
            match points[..j].iter().position(|q| q == p) {
                Some(prev) => tables.push(tables[prev].clone()),
                None => tables.push(canonical_phase(grid, *p, mode)?.values),
            }
        }
        Ok(Phases::Tabulated(tables))
    }

    fn total(&self, k: usize, x: Point2, points: &[Point2]) -> f64 {
        match self {
            Phases::Disk(radius) => points.iter().map(|p| disk_beta(x, *p, *radius)).sum(),
            Phases::Tabulated(t) => t.iter().map(|v| v[k]).sum(),
        }
    }
}

fn check_interior(domain: &DomainSpec, points: &[Point2]) -> Result<()> {
    for p in points {
        if !p.is_finite() || !domain.contains(*p) {
            return Err(Error::NearBoundary { x: p.x, y: p.y });
        }
    }
    Ok(())
}

/// Minimum separation required between vortices of a core-min trial slice.
pub fn min_core_separation(epsilon: f64) -> f64 {
    2.0 * epsilon.sqrt()
}

/// `Π_j e^{iβ(x, p_j)} U(x − p_j)` on the grid with a prepared radial factor.
pub fn trial_slice_with(
    grid: &Arc<Grid2D>,
    points: &[Point2],
    factor: &RadialFactor,
    phase: PhaseMode,
) -> Result<ComplexField2D> {
    check_interior(grid.domain(), points)?;
    if factor.mode() == RadialMode::CoreMin {
        let need = min_core_separation(factor.epsilon());
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points[i].dist(points[j]) < need {
                    return Err(Error::Config(format!(
                        "vortices {i} and {j} are {:.4} apart, core construction needs {need:.4}",
                        points[i].dist(points[j])
                    )));
                }
            }
        }
    }
    let phases = Phases::new(grid, points, phase)?;
    let values = grid
        .points()
        .enumerate()
        .map(|(k, x)| {
            let mut u = Complex64::from_polar(1.0, phases.total(k, x, points));
            for p in points {
                u *= factor.eval(x - *p);
            }
            u
        })
        .collect();
    ComplexField2D::new(grid.clone(), values, factor.epsilon())
}

/// Trial slice with vortices at `points`.
pub fn trial_slice(
    grid: &Arc<Grid2D>,
    points: &[Point2],
    epsilon: f64,
    mode: RadialMode,
    phase: PhaseMode,
) -> Result<ComplexField2D> {
    trial_slice_with(grid, points, &RadialFactor::new(epsilon, mode)?, phase)
}

/// Boundary data: the trial construction with the `ζ_ε` profile; points may coincide.
pub fn boundary_data(
    grid: &Arc<Grid2D>,
    points: &[Point2],
    epsilon: f64,
    phase: PhaseMode,
) -> Result<ComplexField2D> {
    trial_slice_with(grid, points, &RadialFactor::new(epsilon, RadialMode::Zeta)?, phase)
}

/// Single-vortex profile blended in `z` from `ζ_ε` at the ends to the core
/// minimizer in the bulk, linearly over strips of width `ε^{1/6}`.
pub fn boundary_matched_profile(x: Point2, z: f64, height: f64, core: &CoreProfile) -> Complex64 {
    let eps = core.epsilon();
    let strip = eps.powf(1.0 / 6.0);
    let t = (z.min(height - z).max(0.0) / strip).min(1.0);
    let s = x.norm();
    if s == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let dir = Complex64::new(x.x / s, x.y / s);
    let zeta = (s / eps).min(1.0);
    let hat = core.modulus(s);
    dir * (zeta + t * (hat - zeta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::build_grid;
    use crate::fields::{energy_2d, jacobian_plaquette};
    use std::f64::consts::PI;

    #[test]
    fn radial_factor_examples() {
        for mode in [RadialMode::CoreMin, RadialMode::Zeta] {
            assert_eq!(radial_factor(Point2::ZERO, 0.01, mode).unwrap(), Complex64::new(0.0, 0.0));
        }
        let eps: f64 = 0.01;
        let x = Point2::new(0.6, 0.8) * (2.0 * eps.sqrt());
        let u = radial_factor(x, eps, RadialMode::CoreMin).unwrap();
        assert!((u.norm() - 1.0).abs() < 1e-15);
        assert!((u.arg() - x.y.atan2(x.x)).abs() < 1e-15);
        let v = radial_factor(Point2::new(eps / 2.0, 0.0), eps, RadialMode::Zeta).unwrap();
        assert!((v.norm() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn single_centered_vortex_is_radial_factor() {
        let grid = Arc::new(build_grid(&DomainSpec::disk(1.0), 1.0 / 32.0).unwrap());
        let f = RadialFactor::new(0.05, RadialMode::Zeta).unwrap();
        let w = trial_slice_with(&grid, &[Point2::ZERO], &f, PhaseMode::Auto).unwrap();
        for (x, u) in grid.points().zip(w.values()) {
            assert!((u - f.eval(x)).norm() < 1e-15);
        }
    }

    #[test]
    fn separation_enforced_for_core_mode() {
        let grid = Arc::new(build_grid(&DomainSpec::disk(1.0), 1.0 / 16.0).unwrap());
        let p = [Point2::new(0.05, 0.0), Point2::new(-0.05, 0.0)];
        assert!(trial_slice(&grid, &p, 0.01, RadialMode::CoreMin, PhaseMode::Auto).is_err());
        assert!(boundary_data(&grid, &p, 0.01, PhaseMode::Auto).is_ok());
    }

    #[test]
    fn coincident_boundary_data_has_degree_n() {
        let grid = Arc::new(build_grid(&DomainSpec::disk(1.0), 1.0 / 32.0).unwrap());
        let w = boundary_data(&grid, &[Point2::ZERO; 3], 0.05, PhaseMode::Auto).unwrap();
        let total: f64 = jacobian_plaquette(&w).iter().map(|p| p.winding).sum();
        assert!((total - 6.0 * PI).abs() < 1e-9);
    }

    #[test]
    fn blend_endpoints() {
        let core = CoreProfile::new(0.01).unwrap();
        let strip = 0.01f64.powf(1.0 / 6.0);
        let x = Point2::new(0.004, 0.003);
        let zeta = radial_factor(x, 0.01, RadialMode::Zeta).unwrap();
        let hat = RadialFactor::new(0.01, RadialMode::CoreMin).unwrap().eval(x);
        assert!((boundary_matched_profile(x, 0.0, 3.0, &core) - zeta).norm() < 1e-15);
        assert!((boundary_matched_profile(x, 3.0, 3.0, &core) - zeta).norm() < 1e-15);
        assert!((boundary_matched_profile(x, strip, 3.0, &core) - hat).norm() < 1e-14);
        let far = Point2::new(0.2, -0.1);
        let m = boundary_matched_profile(far, strip / 2.0, 3.0, &core);
        assert!((m - Complex64::new(far.x, far.y) / far.norm()).norm() < 1e-15);
    }

    #[test]
    fn numeric_phase_close_to_closed_form() {
        let grid = Arc::new(build_grid(&DomainSpec::disk(1.0), 1.0 / 64.0).unwrap());
        let p = [Point2::new(0.3, 0.0), Point2::new(-0.3, 0.1)];
        let a = trial_slice(&grid, &p, 0.05, RadialMode::Zeta, PhaseMode::ClosedForm).unwrap();
        let b = trial_slice(&grid, &p, 0.05, RadialMode::Zeta, PhaseMode::Numeric).unwrap();
        assert!((energy_2d(&a) - energy_2d(&b)).abs() < 1e-2);
    }
}
