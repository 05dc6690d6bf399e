//! Stacks of slices over the cylinder and the full energy `F_ε`.
//!
//! Slices are produced on demand through [`SliceSource`], so a 3D field never
//! has to be held in memory at once. The `z`-derivative term at a slice
//! averages the squared forward and backward differences (one-sided at the
//! ends); the `z` integral is the trapezoid rule.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::construct::{min_core_separation, trial_slice_with, RadialFactor, RadialMode};
use super::{energy_2d, ComplexField2D, PhaseMode};
use crate::domain::{quadrature_2d, trapezoid_weights, CylinderSpec, Grid2D};
use crate::error::{Error, Result};
use crate::expansion::h_eps;
use crate::point::Point2;
use crate::reduced::FilamentConfiguration;

/// A field on `ω × [0, L]` sampled slice by slice.
pub trait SliceSource: Sync {
    fn cylinder(&self) -> &CylinderSpec;
    fn grid(&self) -> &Arc<Grid2D>;
    fn epsilon(&self) -> f64;
    /// The slice at `z`-sample `k`.
    fn slice(&self, k: usize) -> Result<ComplexField2D>;
}

/// A fully stored 3D field.
#[derive(Debug, Clone)]
pub struct ComplexField3D {
    cylinder: CylinderSpec,
    grid: Arc<Grid2D>,
    epsilon: f64,
    slices: Vec<Vec<Complex64>>,
}

impl ComplexField3D {
    pub fn new(
        cylinder: CylinderSpec,
        grid: Arc<Grid2D>,
        epsilon: f64,
        slices: Vec<Vec<Complex64>>,
    ) -> Result<Self> {
        if slices.len() != cylinder.z_samples {
            return Err(Error::ShapeMismatch {
                expected: cylinder.z_samples,
                got: slices.len(),
            });
        }
        if let Some(s) = slices.iter().find(|s| s.len() != grid.len()) {
            return Err(Error::ShapeMismatch {
                expected: grid.len(),
                got: s.len(),
            });
        }
        if grid.domain() != &cylinder.domain {
            return Err(Error::Config("grid and cylinder use different domains".into()));
        }
        if !(epsilon > 0.0) {
            return Err(Error::Config(format!("ε must be positive, got {epsilon}")));
        }
        Ok(ComplexField3D {
            cylinder,
            grid,
            epsilon,
            slices,
        })
    }

    pub fn from_fn(
        cylinder: CylinderSpec,
        grid: Arc<Grid2D>,
        epsilon: f64,
        f: impl Fn(Point2, f64) -> Complex64,
    ) -> Result<Self> {
        let slices = cylinder
            .z_values()
            .into_iter()
            .map(|z| grid.points().map(|x| f(x, z)).collect())
            .collect();
        Self::new(cylinder, grid, epsilon, slices)
    }
}

impl SliceSource for ComplexField3D {
    fn cylinder(&self) -> &CylinderSpec {
        &self.cylinder
    }

    fn grid(&self) -> &Arc<Grid2D> {
        &self.grid
    }

    fn epsilon(&self) -> f64 {
        self.epsilon
    }

    fn slice(&self, k: usize) -> Result<ComplexField2D> {
        ComplexField2D::new(self.grid.clone(), self.slices[k].clone(), self.epsilon)
    }
}

/// The recovery field: each slice is the trial construction at `h_ε f(z)`.
#[derive(Debug, Clone)]
pub struct RecoveryField {
    filaments: FilamentConfiguration,
    cylinder: CylinderSpec,
    grid: Arc<Grid2D>,
    factor: RadialFactor,
    phase: PhaseMode,
    h: f64,
}

impl RecoveryField {
    pub fn h_eps(&self) -> f64 {
        self.h
    }

    pub fn filaments(&self) -> &FilamentConfiguration {
        &self.filaments
    }

    /// Vortex positions `h_ε f_i(z_k)`.
    pub fn points(&self, k: usize) -> Vec<Point2> {
        let z = self.cylinder.z(k);
        (0..self.filaments.n())
            .map(|i| self.filaments.eval(i, z) * self.h)
            .collect()
    }
}

impl SliceSource for RecoveryField {
    fn cylinder(&self) -> &CylinderSpec {
        &self.cylinder
    }

    fn grid(&self) -> &Arc<Grid2D> {
        &self.grid
    }

    fn epsilon(&self) -> f64 {
        self.factor.epsilon()
    }

    fn slice(&self, k: usize) -> Result<ComplexField2D> {
        trial_slice_with(&self.grid, &self.points(k), &self.factor, self.phase)
    }
}

/// Builds the recovery field of `f` at scale `ε` on the given grid.
pub fn recovery_field(
    f: &FilamentConfiguration,
    epsilon: f64,
    cylinder: CylinderSpec,
    grid: Arc<Grid2D>,
    phase: PhaseMode,
) -> Result<RecoveryField> {
    if (cylinder.height - f.height()).abs() > 1e-12 * f.height() {
        return Err(Error::Config(format!(
            "cylinder height {} differs from filament height {}",
            cylinder.height,
            f.height()
        )));
    }
    if grid.domain() != &cylinder.domain {
        return Err(Error::Config("grid and cylinder use different domains".into()));
    }
    let h = h_eps(epsilon)?;
    let sep = f.min_separation();
    if f.n() > 1 && !(sep > 0.0) {
        return Err(Error::Collision {
            i: 0,
            j: 1,
            z: f64::NAN,
        });
    }
    let spacing = grid.spacing();
    let need = (epsilon / 4.0).min(if f.n() > 1 { h * sep / 4.0 } else { f64::INFINITY });
    if spacing > need * (1.0 + 1e-9) {
        return Err(Error::Resolution(format!(
            "spacing {spacing} exceeds {need:.3e} required at ε = {epsilon}"
        )));
    }
    if f.n() > 1 && h * sep < min_core_separation(epsilon) {
        return Err(Error::Resolution(format!(
            "scaled separation {:.3e} below the core requirement {:.3e} at ε = {epsilon}",
            h * sep,
            min_core_separation(epsilon)
        )));
    }
    for p in f.positions() {
        let q = *p * h;
        if !grid.domain().contains(q) {
            return Err(Error::NearBoundary { x: q.x, y: q.y });
        }
    }
    Ok(RecoveryField {
        filaments: f.clone(),
        cylinder,
        grid,
        factor: RadialFactor::new(epsilon, RadialMode::CoreMin)?,
        phase,
        h,
    })
}

/// `F_ε` and its per-slice parts.
#[derive(Debug, Clone, Serialize)]
pub struct Energy3D {
    /// `F_ε = ∫ (∫_ω e_ε^{2d}) dz + ½ ∫∫ |∂_z u|²`.
    pub total: f64,
    /// `∫_ω e_ε^{2d}(·, z_k)`.
    pub slice_energy: Vec<f64>,
    /// `∫_ω |∂_z u|²(·, z_k)`.
    pub z_kinetic: Vec<f64>,
    /// `½ ∫∫ |∂_z u|²`.
    pub z_kinetic_term: f64,
}

/// [`energy_3d`] with a callback receiving every slice in order.
pub fn energy_3d_with<S: SliceSource + ?Sized>(
    src: &S,
    mut visit: impl FnMut(usize, &ComplexField2D) -> Result<()>,
) -> Result<Energy3D> {
    let cyl = *src.cylinder();
    let m = cyl.z_samples;
    if m < 3 {
        return Err(Error::Config(format!("need at least 3 z-samples, got {m}")));
    }
    let dz = cyl.dz();
    let grid = src.grid().clone();
    let batch = 2 * rayon::current_num_threads();
    let mut slice_energy = Vec::with_capacity(m);
    let mut forward = Vec::with_capacity(m - 1);
    let mut prev: Option<ComplexField2D> = None;
    let mut start = 0;
    while start < m {
        let end = (start + batch).min(m);
        let slices: Vec<Result<ComplexField2D>> =
            (start..end).into_par_iter().map(|k| src.slice(k)).collect();
        for (offset, s) in slices.into_iter().enumerate() {
            let s = s?;
            let k = start + offset;
            visit(k, &s)?;
            slice_energy.push(energy_2d(&s));
            if let Some(p) = &prev {
                let diff: Vec<f64> = p
                    .values()
                    .iter()
                    .zip(s.values())
                    .map(|(a, b)| (b - a).norm_sqr() / (dz * dz))
                    .collect();
                forward.push(quadrature_2d(&diff, &grid)?);
            }
            prev = Some(s);
        }
        start = end;
    }
    let z_kinetic: Vec<f64> = (0..m)
        .map(|k| match k {
            0 => forward[0],
            k if k == m - 1 => forward[m - 2],
            k => 0.5 * (forward[k - 1] + forward[k]),
        })
        .collect();
    let w = trapezoid_weights(m, dz);
    let slice_int: f64 = slice_energy.iter().zip(&w).map(|(e, w)| e * w).sum();
    let z_term = 0.5 * z_kinetic.iter().zip(&w).map(|(e, w)| e * w).sum::<f64>();
    Ok(Energy3D {
        total: slice_int + z_term,
        slice_energy,
        z_kinetic,
        z_kinetic_term: z_term,
    })
}

/// Computes `F_ε` of a slice source.
pub fn energy_3d<S: SliceSource + ?Sized>(src: &S) -> Result<Energy3D> {
    energy_3d_with(src, |_, _| Ok(()))
}
