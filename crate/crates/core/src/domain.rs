//! Cross-section geometry and its uniform-grid discretization.
//!
//! The cross-section is a disk or an axis-aligned rectangle centered at the
//! origin. Grids are node-aligned with a node at the origin; a node is
//! interior iff it lies in the open domain. Quadrature weights use the area of
//! each node's cell inside the domain, with the area of cells belonging to
//! exterior nodes handed to their interior neighbours, so that the weights sum
//! to the domain area up to sub-sampling error.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::Point2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase")]
pub enum DomainSpec {
    Disk { radius: f64 },
    Rectangle { half_widths: [f64; 2] },
}

/// Axis directions used by finite-difference stencils: +x, -x, +y, -y.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dir {
    East,
    West,
    North,
    South,
}

impl Dir {
    pub const ALL: [Dir; 4] = [Dir::East, Dir::West, Dir::North, Dir::South];

    pub fn offset(self) -> (isize, isize) {
        match self {
            Dir::East => (1, 0),
            Dir::West => (-1, 0),
            Dir::North => (0, 1),
            Dir::South => (0, -1),
        }
    }

    pub fn unit(self) -> Point2 {
        let (a, b) = self.offset();
        Point2::new(a as f64, b as f64)
    }
}

impl DomainSpec {
    pub fn disk(radius: f64) -> Self {
        DomainSpec::Disk { radius }
    }

    pub fn rectangle(a: f64, b: f64) -> Self {
        DomainSpec::Rectangle {
            half_widths: [a, b],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            DomainSpec::Disk { radius } => radius.is_finite() && radius > 0.0,
            DomainSpec::Rectangle { half_widths: [a, b] } => {
                a.is_finite() && b.is_finite() && a > 0.0 && b > 0.0
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("degenerate domain {self:?}")))
        }
    }

    /// Strict membership in the open domain.
    pub fn contains(&self, p: Point2) -> bool {
        match *self {
            DomainSpec::Disk { radius } => p.norm_sq() < radius * radius,
            DomainSpec::Rectangle { half_widths: [a, b] } => p.x.abs() < a && p.y.abs() < b,
        }
    }

    /// Distance from an interior point to the boundary.
    pub fn dist_to_boundary(&self, p: Point2) -> f64 {
        match *self {
            DomainSpec::Disk { radius } => radius - p.norm(),
            DomainSpec::Rectangle { half_widths: [a, b] } => (a - p.x.abs()).min(b - p.y.abs()),
        }
    }

    /// Half extents of the bounding box.
    pub fn half_extents(&self) -> (f64, f64) {
        match *self {
            DomainSpec::Disk { radius } => (radius, radius),
            DomainSpec::Rectangle { half_widths: [a, b] } => (a, b),
        }
    }

    /// Smallest width of the domain.
    pub fn min_extent(&self) -> f64 {
        let (a, b) = self.half_extents();
        2.0 * a.min(b)
    }

    pub fn area(&self) -> f64 {
        match *self {
            DomainSpec::Disk { radius } => std::f64::consts::PI * radius * radius,
            DomainSpec::Rectangle { half_widths: [a, b] } => 4.0 * a * b,
        }
    }

    /// Distance from interior point `p` to the boundary along the ray `p + t·dir`.
    pub fn ray_to_boundary(&self, p: Point2, dir: Dir) -> f64 {
        let d = dir.unit();
        match *self {
            DomainSpec::Disk { radius } => {
                // |p + t d|^2 = R^2 with |d| = 1
                let b = p.dot(d);
                let c = p.norm_sq() - radius * radius;
                -b + (b * b - c).max(0.0).sqrt()
            }
            DomainSpec::Rectangle { half_widths: [a, b] } => match dir {
                Dir::East => a - p.x,
                Dir::West => a + p.x,
                Dir::North => b - p.y,
                Dir::South => b + p.y,
            },
        }
    }

    /// Fraction of the axis-aligned square of side `h` centred at `c` lying in the domain.
    pub fn cell_fraction(&self, c: Point2, h: f64) -> f64 {
        match *self {
            DomainSpec::Rectangle { half_widths: [a, b] } => {
                let ox = ((c.x + h / 2.0).min(a) - (c.x - h / 2.0).max(-a)).max(0.0);
                let oy = ((c.y + h / 2.0).min(b) - (c.y - h / 2.0).max(-b)).max(0.0);
                ox * oy / (h * h)
            }
            DomainSpec::Disk { radius } => {
                let r = c.norm();
                let half_diag = h * std::f64::consts::FRAC_1_SQRT_2;
                if r + half_diag <= radius {
                    return 1.0;
                }
                if r - half_diag >= radius {
                    return 0.0;
                }
                const SUB: usize = 16;
                let step = h / SUB as f64;
                let r2 = radius * radius;
                let mut inside = 0usize;
                for a in 0..SUB {
                    let x = c.x - h / 2.0 + (a as f64 + 0.5) * step;
                    for b in 0..SUB {
                        let y = c.y - h / 2.0 + (b as f64 + 0.5) * step;
                        if x * x + y * y < r2 {
                            inside += 1;
                        }
                    }
                }
                inside as f64 / (SUB * SUB) as f64
            }
        }
    }
}

/// `r* = min{1, dist(0, ∂ω)}`.
pub fn r_star(domain: &DomainSpec) -> f64 {
    domain.dist_to_boundary(Point2::ZERO).min(1.0)
}

const NO_NODE: u32 = u32::MAX;

/// Uniform node-aligned grid over the bounding box of a domain with one
/// exterior ring of lattice nodes.
#[derive(Debug, Clone)]
pub struct Grid2D {
    domain: DomainSpec,
    spacing: f64,
    nx: usize,
    ny: usize,
    origin: Point2,
    lattice_to_interior: Vec<u32>,
    nodes: Vec<(usize, usize)>,
    weights: Vec<f64>,
    boundary: Vec<usize>,
}

/// Minimum number of grid cells across the smallest domain width.
pub const MIN_CELLS_ACROSS: f64 = 4.0;

/// Builds the grid for `domain` at the given spacing.
pub fn build_grid(domain: &DomainSpec, spacing: f64) -> Result<Grid2D> {
    Grid2D::new(*domain, spacing)
}

impl Grid2D {
    pub fn new(domain: DomainSpec, spacing: f64) -> Result<Self> {
        domain.validate()?;
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::Config(format!("grid spacing must be positive, got {spacing}")));
        }
        if domain.min_extent() / spacing < MIN_CELLS_ACROSS {
            return Err(Error::Config(format!(
                "spacing {spacing} too coarse for domain of width {}",
                domain.min_extent()
            )));
        }
        let (ax, ay) = domain.half_extents();
        let kx = (ax / spacing).ceil() as usize + 1;
        let ky = (ay / spacing).ceil() as usize + 1;
        let nx = 2 * kx + 1;
        let ny = 2 * ky + 1;
        let origin = Point2::new(-(kx as f64) * spacing, -(ky as f64) * spacing);

        let mut lattice_to_interior = vec![NO_NODE; nx * ny];
        let mut nodes = Vec::new();
        for j in 0..ny {
            for i in 0..nx {
                let p = Point2::new(origin.x + i as f64 * spacing, origin.y + j as f64 * spacing);
                if domain.contains(p) {
                    lattice_to_interior[j * nx + i] = nodes.len() as u32;
                    nodes.push((i, j));
                }
            }
        }
        let mut grid = Grid2D {
            domain,
            spacing,
            nx,
            ny,
            origin,
            lattice_to_interior,
            nodes,
            weights: Vec::new(),
            boundary: Vec::new(),
        };
        grid.boundary = (0..grid.len())
            .filter(|&k| Dir::ALL.iter().any(|&d| grid.neighbor(k, d).is_none()))
            .collect();
        grid.weights = grid.compute_weights();
        Ok(grid)
    }

    fn compute_weights(&self) -> Vec<f64> {
        let h = self.spacing;
        let cell = h * h;
        let mut w: Vec<f64> = self
            .nodes
            .iter()
            .map(|&(i, j)| cell * self.domain.cell_fraction(self.lattice_point(i, j), h))
            .collect();
        // Exterior cells that overlap the domain donate their area to interior neighbours.
        for j in 0..self.ny {
            for i in 0..self.nx {
                if self.lattice_index(i as isize, j as isize).is_some() {
                    continue;
                }
                let frac = self.domain.cell_fraction(self.lattice_point(i, j), h);
                if frac == 0.0 {
                    continue;
                }
                let near: Vec<usize> = [(1, 0), (-1, 0), (0, 1), (0, -1)]
                    .iter()
                    .filter_map(|&(a, b)| self.lattice_index(i as isize + a, j as isize + b))
                    .collect();
                let near = if near.is_empty() {
                    [(1, 1), (-1, 1), (1, -1), (-1, -1)]
                        .iter()
                        .filter_map(|&(a, b)| self.lattice_index(i as isize + a, j as isize + b))
                        .collect()
                } else {
                    near
                };
                if near.is_empty() {
                    continue;
                }
                let share = cell * frac / near.len() as f64;
                for k in near {
                    w[k] += share;
                }
            }
        }
        w
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Number of interior nodes.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn lattice_dims(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn lattice_point(&self, i: usize, j: usize) -> Point2 {
        Point2::new(
            self.origin.x + i as f64 * self.spacing,
            self.origin.y + j as f64 * self.spacing,
        )
    }

    /// Interior index of lattice node `(i, j)`, if it is interior.
    pub fn lattice_index(&self, i: isize, j: isize) -> Option<usize> {
        if i < 0 || j < 0 || i as usize >= self.nx || j as usize >= self.ny {
            return None;
        }
        let v = self.lattice_to_interior[j as usize * self.nx + i as usize];
        (v != NO_NODE).then_some(v as usize)
    }

    pub fn lattice_coords(&self, k: usize) -> (usize, usize) {
        self.nodes[k]
    }

    pub fn point(&self, k: usize) -> Point2 {
        let (i, j) = self.nodes[k];
        self.lattice_point(i, j)
    }

    pub fn points(&self) -> impl Iterator<Item = Point2> + '_ {
        (0..self.len()).map(|k| self.point(k))
    }

    pub fn neighbor(&self, k: usize, dir: Dir) -> Option<usize> {
        let (i, j) = self.nodes[k];
        let (a, b) = dir.offset();
        self.lattice_index(i as isize + a, j as isize + b)
    }

    /// Interior nodes with at least one exterior 4-neighbour.
    pub fn boundary_nodes(&self) -> &[usize] {
        &self.boundary
    }

    pub fn is_interior_lattice(&self, i: isize, j: isize) -> bool {
        self.lattice_index(i, j).is_some()
    }

    /// Interior node nearest to `p`, if the nearest lattice node is interior.
    pub fn nearest(&self, p: Point2) -> Option<usize> {
        let i = ((p.x - self.origin.x) / self.spacing).round() as isize;
        let j = ((p.y - self.origin.y) / self.spacing).round() as isize;
        self.lattice_index(i, j)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Lattice cell containing `p` and the local coordinates inside it.
    pub fn locate(&self, p: Point2) -> (isize, isize, f64, f64) {
        let fx = (p.x - self.origin.x) / self.spacing;
        let fy = (p.y - self.origin.y) / self.spacing;
        let i = fx.floor();
        let j = fy.floor();
        (i as isize, j as isize, fx - i, fy - j)
    }

    /// Bilinear interpolation of interior-node data; missing corners are
    /// dropped and the remaining weights renormalized.
    pub fn interpolate<T>(&self, values: &[T], p: Point2) -> Option<T>
    where
        T: Copy + std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T>,
    {
        let (i, j, tx, ty) = self.locate(p);
        let corners = [
            (i, j, (1.0 - tx) * (1.0 - ty)),
            (i + 1, j, tx * (1.0 - ty)),
            (i, j + 1, (1.0 - tx) * ty),
            (i + 1, j + 1, tx * ty),
        ];
        let mut acc: Option<T> = None;
        let mut wsum = 0.0;
        for (a, b, w) in corners {
            if w <= 0.0 {
                continue;
            }
            if let Some(k) = self.lattice_index(a, b) {
                let term = values[k] * w;
                acc = Some(acc.map_or(term, |s| s + term));
                wsum += w;
            }
        }
        match acc {
            Some(s) if wsum > 1e-9 => Some(s * (1.0 / wsum)),
            _ => self.nearest(p).map(|k| values[k]),
        }
    }
}

/// Cell-area-weighted quadrature of nodal values.
pub fn quadrature_2d(values: &[f64], grid: &Grid2D) -> Result<f64> {
    if values.len() != grid.len() {
        return Err(Error::ShapeMismatch {
            expected: grid.len(),
            got: values.len(),
        });
    }
    Ok(values.iter().zip(grid.weights()).map(|(v, w)| v * w).sum())
}

/// The cylinder `ω × (0, L)` with uniform z-samples including both ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CylinderSpec {
    pub domain: DomainSpec,
    pub height: f64,
    pub z_samples: usize,
}

impl CylinderSpec {
    pub fn new(domain: DomainSpec, height: f64, z_samples: usize) -> Result<Self> {
        domain.validate()?;
        if !(height.is_finite() && height > 0.0) {
            return Err(Error::Config(format!("height must be positive, got {height}")));
        }
        if z_samples < 2 {
            return Err(Error::Config("need at least two z-samples".into()));
        }
        Ok(CylinderSpec {
            domain,
            height,
            z_samples,
        })
    }

    pub fn dz(&self) -> f64 {
        self.height / (self.z_samples - 1) as f64
    }

    pub fn z(&self, k: usize) -> f64 {
        if k + 1 == self.z_samples {
            self.height
        } else {
            k as f64 * self.dz()
        }
    }

    pub fn z_values(&self) -> Vec<f64> {
        (0..self.z_samples).map(|k| self.z(k)).collect()
    }
}

/// Trapezoid weights for uniformly spaced samples.
pub fn trapezoid_weights(samples: usize, step: f64) -> Vec<f64> {
    let mut w = vec![step; samples];
    if samples > 0 {
        w[0] = step / 2.0;
        w[samples - 1] = step / 2.0;
    }
    if samples == 1 {
        w[0] = 0.0;
    }
    w
}
