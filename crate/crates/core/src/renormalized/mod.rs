//! Regular part of the Dirichlet Green's function, the renormalized energy of
//! point vortices, the constant `κ_n`, and the radial core constant `γ`.
//!
//! `H_ω(·, y)` is harmonic in `ω` with `H_ω(x, y) = −log|x − y|` for `x ∈ ∂ω`.
//! For the disk of radius `R` it has the closed form
//! `H(x, y) = −log R − log|1 − x ȳ / R²|` (complex notation), and the
//! harmonic conjugate used for phases is `β(x, y) = −Arg(1 − x ȳ / R²)`.

mod core;

pub use self::core::{
    gamma_constant, radial_core, CoreProfile, GammaEstimate, GammaStep, RadialOptions,
    RadialProfile, GAMMA_DEFAULT, GAMMA_EPSILONS,
};

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::domain::{DomainSpec, Grid2D};
use crate::error::{Error, Result};
use crate::laplace::{solve_dirichlet, SolveStats, SolverOptions};
use crate::point::Point2;

/// Closed-form `H` for the disk of radius `radius`.
pub fn disk_h(x: Point2, y: Point2, radius: f64) -> f64 {
    let w = Complex64::new(1.0, 0.0) - x.to_complex() * y.to_complex().conj() / (radius * radius);
    -radius.ln() - w.norm().ln()
}

/// Closed-form harmonic conjugate `β(·, y)` for the disk; it has zero mean over the disk.
pub fn disk_beta(x: Point2, y: Point2, radius: f64) -> f64 {
    let w = Complex64::new(1.0, 0.0) - x.to_complex() * y.to_complex().conj() / (radius * radius);
    -w.arg()
}

/// Grid solution of `H_ω(·, y)`.
#[derive(Debug, Clone, Serialize)]
pub struct GreenData {
    pub source: Point2,
    pub values: Vec<f64>,
    pub stats: SolveStats,
}

impl GreenData {
    /// Bilinear interpolation of `H_ω(x, y)` at `x`.
    pub fn eval(&self, grid: &Grid2D, x: Point2) -> f64 {
        grid.interpolate(&self.values, x).unwrap_or(f64::NAN)
    }
}

/// Checks that `y` lies in `ω` at distance at least `margin` from the boundary.
pub(crate) fn check_source(domain: &DomainSpec, y: Point2, margin: f64) -> Result<()> {
    if !y.is_finite() || !domain.contains(y) || domain.dist_to_boundary(y) < margin {
        return Err(Error::NearBoundary { x: y.x, y: y.y });
    }
    Ok(())
}

/// Solves for `H_ω(·, y)` on `grid` with Dirichlet data `−log|x − y|`.
pub fn solve_h_omega(grid: &Grid2D, y: Point2, options: &SolverOptions) -> Result<GreenData> {
    check_source(grid.domain(), y, 2.0 * grid.spacing())?;
    let g = move |x: Point2| -x.dist(y).ln();
    let (values, stats) = solve_dirichlet(grid, &g, options)?;
    Ok(GreenData {
        source: y,
        values,
        stats,
    })
}

/// How `H_ω` is evaluated.
#[derive(Debug, Clone, Copy)]
pub enum GreenMode<'a> {
    /// Reflection formula; only valid for disks.
    DiskClosedForm,
    /// One finite-difference solve per source point.
    Numeric {
        grid: &'a Grid2D,
        options: SolverOptions,
    },
}

impl GreenMode<'_> {
    /// Closed form for disks, numeric on the given grid otherwise.
    pub fn auto(grid: &Grid2D) -> GreenMode<'_> {
        match grid.domain() {
            DomainSpec::Disk { .. } => GreenMode::DiskClosedForm,
            DomainSpec::Rectangle { .. } => GreenMode::Numeric {
                grid,
                options: SolverOptions::default(),
            },
        }
    }
}

/// The matrix `H_ω(p_i, p_j)`, row-major.
pub fn h_matrix(domain: &DomainSpec, points: &[Point2], mode: GreenMode<'_>) -> Result<Vec<f64>> {
    let n = points.len();
    let mut out = vec![0.0; n * n];
    match mode {
        GreenMode::DiskClosedForm => {
            let DomainSpec::Disk { radius } = *domain else {
                return Err(Error::Config("closed-form Green's function needs a disk".into()));
            };
            for p in points {
                check_source(domain, *p, 0.0)?;
            }
            for i in 0..n {
                for j in 0..n {
                    out[i * n + j] = disk_h(points[i], points[j], radius);
                }
            }
        }
        GreenMode::Numeric { grid, options } => {
            for (j, &y) in points.iter().enumerate() {
                let data = solve_h_omega(grid, y, &options)?;
                for i in 0..n {
                    out[i * n + j] = data.eval(grid, points[i]);
                }
            }
        }
    }
    Ok(out)
}

/// `H_ω(0, 0)`.
pub fn h_origin(domain: &DomainSpec, mode: GreenMode<'_>) -> Result<f64> {
    Ok(h_matrix(domain, &[Point2::ZERO], mode)?[0])
}

/// Renormalized energy `W = −π (Σ_{i≠j} log|p_i − p_j| + Σ_{i,j} H_ω(p_i, p_j))`.
pub fn w_omega(domain: &DomainSpec, points: &[Point2], mode: GreenMode<'_>) -> Result<f64> {
    let n = points.len();
    for i in 0..n {
        for j in i + 1..n {
            if points[i] == points[j] {
                return Err(Error::Coincident { i, j });
            }
        }
    }
    // A canonical order makes the floating-point sum independent of labeling.
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    let points = &sorted[..];
    let h = h_matrix(domain, points, mode)?;
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            s += h[i * n + j];
            if i != j {
                s += points[i].dist(points[j]).ln();
            }
        }
    }
    Ok(-PI * s)
}

/// `κ_n = −π n² L H_ω(0,0) + n L γ`.
pub fn kappa_n(h00: f64, n: usize, height: f64, gamma: f64) -> f64 {
    let n = n as f64;
    -PI * n * n * height * h00 + n * height * gamma
}
