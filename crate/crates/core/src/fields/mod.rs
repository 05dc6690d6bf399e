//! Complex fields on the masked grid and their Ginzburg-Landau quantities.
//!
//! Values live on interior nodes only. Gradients use one-sided differences
//! along grid edges; where both sides are available the squared differences
//! are averaged, which makes the nodal energy density second-order accurate.

mod construct;
mod field3d;
mod phase;

pub use construct::{
    boundary_data, boundary_matched_profile, min_core_separation, radial_factor, trial_slice,
    trial_slice_with, RadialFactor, RadialMode,
};
pub use field3d::{
    energy_3d, energy_3d_with, recovery_field, ComplexField3D, Energy3D, RecoveryField,
    SliceSource,
};
pub use phase::{canonical_phase, PhaseData, PhaseMode};

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::domain::{quadrature_2d, Dir, Grid2D};
use crate::error::{Error, Result};
use crate::point::Point2;

/// Modulus below which a node counts as a zero for winding purposes.
pub const ZERO_MODULUS: f64 = 1e-12;

/// One complex value per interior grid node, with its core scale `ε`.
#[derive(Debug, Clone)]
pub struct ComplexField2D {
    grid: Arc<Grid2D>,
    values: Vec<Complex64>,
    epsilon: f64,
}

impl ComplexField2D {
    pub fn new(grid: Arc<Grid2D>, values: Vec<Complex64>, epsilon: f64) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::ShapeMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::Config(format!("ε must be positive, got {epsilon}")));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("field contains non-finite values".into()));
        }
        Ok(ComplexField2D {
            grid,
            values,
            epsilon,
        })
    }

    pub fn from_fn(grid: Arc<Grid2D>, epsilon: f64, f: impl Fn(Point2) -> Complex64) -> Result<Self> {
        let values = grid.points().map(f).collect();
        Self::new(grid, values, epsilon)
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn grid_arc(&self) -> &Arc<Grid2D> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Bilinear interpolation at an arbitrary point of the domain.
    pub fn interpolate(&self, p: Point2) -> Option<Complex64> {
        self.grid.interpolate(&self.values, p)
    }

    /// Multiplies every value by `c`.
    pub fn scaled(&self, c: Complex64) -> Self {
        ComplexField2D {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
            epsilon: self.epsilon,
        }
    }
}

/// Mean of the squared one-sided differences along one axis, divided by `h²`.
fn axis_gradient_sq(
    grid: &Grid2D,
    values: &[Complex64],
    k: usize,
    plus: Dir,
    minus: Dir,
) -> f64 {
    let mut s = 0.0;
    let mut c = 0;
    for d in [plus, minus] {
        if let Some(nb) = grid.neighbor(k, d) {
            s += (values[nb] - values[k]).norm_sqr();
            c += 1;
        }
    }
    let h = grid.spacing();
    if c == 0 {
        0.0
    } else {
        s / (c as f64 * h * h)
    }
}

/// Nodal values of `|∇u|²`.
pub fn gradient_sq(w: &ComplexField2D) -> Vec<f64> {
    let g = w.grid();
    (0..g.len())
        .map(|k| {
            axis_gradient_sq(g, &w.values, k, Dir::East, Dir::West)
                + axis_gradient_sq(g, &w.values, k, Dir::North, Dir::South)
        })
        .collect()
}

/// Nodal values of `e_ε(u) = ½|∇u|² + (1 − |u|²)²/(4ε²)`.
pub fn energy_density(w: &ComplexField2D) -> Vec<f64> {
    let eps = w.epsilon;
    gradient_sq(w)
        .into_iter()
        .zip(&w.values)
        .map(|(g, u)| {
            let q = 1.0 - u.norm_sqr();
            0.5 * g + q * q / (4.0 * eps * eps)
        })
        .collect()
}

/// `∫_ω e_ε(u)` by the grid quadrature.
pub fn energy_2d(w: &ComplexField2D) -> f64 {
    quadrature_2d(&energy_density(w), w.grid()).expect("density matches grid")
}

/// Momentum `j(u) = Im(ū ∇u)` with central differences where possible.
pub fn momentum(w: &ComplexField2D) -> Vec<Point2> {
    let g = w.grid();
    let h = g.spacing();
    let v = &w.values;
    let derivative = |k: usize, plus: Dir, minus: Dir| -> Complex64 {
        match (g.neighbor(k, plus), g.neighbor(k, minus)) {
            (Some(a), Some(b)) => (v[a] - v[b]) / (2.0 * h),
            (Some(a), None) => (v[a] - v[k]) / h,
            (None, Some(b)) => (v[k] - v[b]) / h,
            (None, None) => Complex64::new(0.0, 0.0),
        }
    };
    (0..g.len())
        .map(|k| {
            let ub = v[k].conj();
            Point2::new(
                (ub * derivative(k, Dir::East, Dir::West)).im,
                (ub * derivative(k, Dir::North, Dir::South)).im,
            )
        })
        .collect()
}

/// One grid plaquette with all four corners interior.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Plaquette {
    /// Lattice coordinates of the lower-left corner.
    pub i: usize,
    pub j: usize,
    /// Sum of principal-branch phase increments around the cell
    /// (counter-clockwise); a multiple of `2π` unless `core` is set.
    pub winding: f64,
    /// A corner has modulus below [`ZERO_MODULUS`]; edges touching it contribute nothing.
    pub core: bool,
    /// Cell average of the Jacobian `∂₁u¹∂₂u² − ∂₁u²∂₂u¹` of the bilinear interpolant.
    pub density: f64,
}

impl Plaquette {
    /// Integer degree carried by the plaquette (nearest integer to `winding/2π`).
    pub fn degree(&self) -> i64 {
        (self.winding / (2.0 * PI)).round() as i64
    }
}

/// Phase increment `arg(b/a)` in `(−π, π]`, or 0 if either end is a zero.
pub fn phase_increment(a: Complex64, b: Complex64) -> f64 {
    if a.norm() < ZERO_MODULUS || b.norm() < ZERO_MODULUS {
        return 0.0;
    }
    let d = (b * a.conj()).arg();
    if d == -PI {
        PI
    } else {
        d
    }
}

/// Winding and Jacobian density of every complete plaquette.
pub fn jacobian_plaquette(w: &ComplexField2D) -> Vec<Plaquette> {
    let g = w.grid();
    let (nx, ny) = g.lattice_dims();
    let h2 = g.spacing() * g.spacing();
    let mut out = Vec::new();
    for j in 0..ny.saturating_sub(1) {
        for i in 0..nx.saturating_sub(1) {
            let (ii, jj) = (i as isize, j as isize);
            let corners = [
                g.lattice_index(ii, jj),
                g.lattice_index(ii + 1, jj),
                g.lattice_index(ii + 1, jj + 1),
                g.lattice_index(ii, jj + 1),
            ];
            if corners.iter().any(|c| c.is_none()) {
                continue;
            }
            let idx: Vec<usize> = corners.iter().map(|c| c.unwrap()).collect();
            let u: Vec<Complex64> = idx.iter().map(|&c| w.values[c]).collect();
            let mut winding = 0.0;
            let mut area = 0.0;
            for e in 0..4 {
                let (a, b) = (u[e], u[(e + 1) % 4]);
                let mut d = phase_increment(a, b);
                // An exact half-turn is ambiguous; orient it by node order so
                // that the two plaquettes sharing the edge see opposite signs.
                if d == PI && idx[e] > idx[(e + 1) % 4] {
                    d = -PI;
                }
                winding += d;
                area += (a.conj() * b).im;
            }
            out.push(Plaquette {
                i,
                j,
                winding,
                core: u.iter().any(|v| v.norm() < ZERO_MODULUS),
                density: 0.5 * area / h2,
            });
        }
    }
    out
}

/// Center of a plaquette in physical coordinates.
pub fn plaquette_center(grid: &Grid2D, p: &Plaquette) -> Point2 {
    let h = grid.spacing();
    grid.lattice_point(p.i, p.j) + Point2::new(h / 2.0, h / 2.0)
}

/// `∫_{B(c, s)} J_x u` through the circulation `½ ∮ Im(ū ∂_τ u)` on the circle,
/// sampled at interpolated values.
pub fn jacobian_disk_integral(w: &ComplexField2D, center: Point2, s: f64) -> Option<f64> {
    let h = w.grid().spacing();
    let samples = ((16.0 * PI * s / h).ceil() as usize).max(512);
    let mut vals = Vec::with_capacity(samples);
    for k in 0..samples {
        let t = 2.0 * PI * k as f64 / samples as f64;
        vals.push(w.interpolate(center + Point2::new(s * t.cos(), s * t.sin()))?);
    }
    let mut acc = 0.0;
    for k in 0..samples {
        acc += (vals[k].conj() * vals[(k + 1) % samples]).im;
    }
    Some(0.5 * acc)
}
