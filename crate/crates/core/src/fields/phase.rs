//! The harmonic conjugate `β(·, y)` of `H_ω(·, y)`, normalized to zero mean.
//!
//! Numerically `β` is first built on grid cells: crossing the edge between two
//! cells changes `β` by the difference of `H` along that edge (rotated
//! gradient), and a breadth-first sweep integrates these increments. The sum
//! of increments around a node equals the 5-point Laplacian of `H` there, so
//! path independence holds to solver tolerance. Nodal values average the
//! adjacent cells.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::domain::{DomainSpec, Grid2D};
use crate::error::Result;
use crate::laplace::SolverOptions;
use crate::point::Point2;
use crate::renormalized::{check_source, disk_beta, solve_h_omega};

/// How `β` is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseMode {
    /// Closed form on disks, numeric otherwise.
    #[default]
    Auto,
    ClosedForm,
    Numeric,
}

impl PhaseMode {
    pub(crate) fn use_closed_form(self, domain: &DomainSpec) -> Result<bool> {
        let disk = matches!(domain, DomainSpec::Disk { .. });
        match self {
            PhaseMode::Auto => Ok(disk),
            PhaseMode::ClosedForm if disk => Ok(true),
            PhaseMode::ClosedForm => Err(crate::Error::Config(
                "closed-form phase is only available on disks".into(),
            )),
            PhaseMode::Numeric => Ok(false),
        }
    }
}

/// Nodal values of `β(·, y)` with zero grid mean.
#[derive(Debug, Clone, Serialize)]
pub struct PhaseData {
    pub source: Point2,
    pub values: Vec<f64>,
}

/// Cell index of the cell with lower-left lattice corner `(i, j)`, if complete.
fn complete_cell(grid: &Grid2D, i: isize, j: isize) -> Option<[usize; 4]> {
    Some([
        grid.lattice_index(i, j)?,
        grid.lattice_index(i + 1, j)?,
        grid.lattice_index(i + 1, j + 1)?,
        grid.lattice_index(i, j + 1)?,
    ])
}

/// Change of `β` when moving from cell `(i, j)` to its neighbour in direction
/// `(di, dj)`; `None` if either cell is incomplete.
fn cell_increment(grid: &Grid2D, h: &[f64], i: isize, j: isize, di: isize, dj: isize) -> Option<f64> {
    let [ll, lr, ur, ul] = complete_cell(grid, i, j)?;
    complete_cell(grid, i + di, j + dj)?;
    Some(match (di, dj) {
        (1, 0) => -(h[ur] - h[lr]),
        (-1, 0) => h[ul] - h[ll],
        (0, 1) => h[ur] - h[ul],
        (0, -1) => -(h[lr] - h[ll]),
        _ => unreachable!("cells are 4-connected"),
    })
}

/// Integrates the conjugate relation over cells; `NaN` marks unreached cells.
fn integrate_cells(grid: &Grid2D, h: &[f64]) -> Vec<f64> {
    let (nx, ny) = grid.lattice_dims();
    let mut beta = vec![f64::NAN; nx * ny];
    let start = (0..grid.len()).find_map(|k| {
        let (i, j) = grid.lattice_coords(k);
        complete_cell(grid, i as isize, j as isize).map(|_| (i, j))
    });
    let Some((i0, j0)) = start else {
        return beta;
    };
    beta[j0 * nx + i0] = 0.0;
    let mut queue = VecDeque::from([(i0 as isize, j0 as isize)]);
    while let Some((i, j)) = queue.pop_front() {
        let b = beta[j as usize * nx + i as usize];
        for (di, dj) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
            let Some(d) = cell_increment(grid, h, i, j, di, dj) else {
                continue;
            };
            let idx = (j + dj) as usize * nx + (i + di) as usize;
            if beta[idx].is_nan() {
                beta[idx] = b + d;
                queue.push_back((i + di, j + dj));
            }
        }
    }
    beta
}

/// Nodal values from cell values, each cell extrapolated linearly to the
/// node with its own conjugate gradient `(−∂₂H, ∂₁H)`.
fn nodal_from_cells(grid: &Grid2D, h: &[f64], cells: &[f64]) -> Vec<f64> {
    let (nx, _) = grid.lattice_dims();
    let step = grid.spacing();
    let mut out = vec![f64::NAN; grid.len()];
    for (k, v) in out.iter_mut().enumerate() {
        let (i, j) = grid.lattice_coords(k);
        let (mut s, mut c) = (0.0, 0);
        // Cells whose lower-left corner is offset by (−a, −b) from the node.
        for (a, b) in [(0usize, 0usize), (1, 0), (0, 1), (1, 1)] {
            if i < a || j < b {
                continue;
            }
            let (ci, cj) = (i - a, j - b);
            let val = cells[cj * nx + ci];
            if val.is_nan() {
                continue;
            }
            let [ll, lr, ur, ul] =
                complete_cell(grid, ci as isize, cj as isize).expect("valued cells are complete");
            let hx = (h[lr] - h[ll] + h[ur] - h[ul]) / (2.0 * step);
            let hy = (h[ul] - h[ll] + h[ur] - h[lr]) / (2.0 * step);
            // Node relative to the cell centre.
            let dx = (a as f64 - 0.5) * step;
            let dy = (b as f64 - 0.5) * step;
            s += val - hy * dx + hx * dy;
            c += 1;
        }
        if c > 0 {
            *v = s / c as f64;
        }
    }
    // Nodes without a complete adjacent cell take the mean of their valued neighbours.
    loop {
        let missing: Vec<usize> = (0..out.len()).filter(|&k| out[k].is_nan()).collect();
        if missing.is_empty() {
            break;
        }
        let mut progress = false;
        for k in missing {
            let vals: Vec<f64> = crate::domain::Dir::ALL
                .iter()
                .filter_map(|&d| grid.neighbor(k, d))
                .map(|nb| out[nb])
                .filter(|v| !v.is_nan())
                .collect();
            if !vals.is_empty() {
                out[k] = vals.iter().sum::<f64>() / vals.len() as f64;
                progress = true;
            }
        }
        if !progress {
            for v in out.iter_mut().filter(|v| v.is_nan()) {
                *v = 0.0;
            }
            break;
        }
    }
    out
}

fn subtract_mean(grid: &Grid2D, values: &mut [f64]) {
    let w = grid.weights();
    let mean = values.iter().zip(w).map(|(v, w)| v * w).sum::<f64>() / w.iter().sum::<f64>();
    for v in values.iter_mut() {
        *v -= mean;
    }
}

/// Computes `β(·, y)` on the grid.
pub fn canonical_phase(grid: &Grid2D, y: Point2, mode: PhaseMode) -> Result<PhaseData> {
    let domain = grid.domain();
    let mut values = if mode.use_closed_form(domain)? {
        check_source(domain, y, 0.0)?;
        let DomainSpec::Disk { radius } = *domain else {
            unreachable!("closed form is only selected for disks")
        };
        grid.points().map(|x| disk_beta(x, y, radius)).collect()
    } else {
        let h = solve_h_omega(grid, y, &SolverOptions::default())?;
        let cells = integrate_cells(grid, &h.values);
        nodal_from_cells(grid, &h.values, &cells)
    };
    subtract_mean(grid, &mut values);
    Ok(PhaseData { source: y, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::build_grid;
    use crate::renormalized::disk_beta;

    #[test]
    fn centered_source_on_disk_is_zero() {
        let grid = build_grid(&DomainSpec::disk(1.0), 1.0 / 16.0).unwrap();
        for mode in [PhaseMode::ClosedForm, PhaseMode::Numeric] {
            let p = canonical_phase(&grid, Point2::ZERO, mode).unwrap();
            assert!(p.values.iter().all(|v| v.abs() < 1e-8), "{mode:?}");
        }
    }

    #[test]
    fn numeric_matches_closed_form() {
        let grid = build_grid(&DomainSpec::disk(1.0), 1.0 / 64.0).unwrap();
        let y = Point2::new(0.3, 0.2);
        let a = canonical_phase(&grid, y, PhaseMode::Numeric).unwrap();
        let b = canonical_phase(&grid, y, PhaseMode::ClosedForm).unwrap();
        let err = a.values.iter().zip(&b.values).map(|(x, z)| (x - z).abs()).fold(0.0, f64::max);
        assert!(err < 1e-3, "{err}");
        let mean: f64 = a.values.iter().zip(grid.weights()).map(|(v, w)| v * w).sum();
        assert!(mean.abs() < 1e-12);
        // Closed form has zero mean on the disk itself.
        let raw: f64 = grid.points().zip(grid.weights()).map(|(x, w)| disk_beta(x, y, 1.0) * w).sum();
        assert!(raw.abs() < 1e-3);
    }

    #[test]
    fn cell_integration_is_path_independent() {
        // Every adjacent pair of cells, tree edge or not, must agree with the
        // local increment: the loop sums are discrete Laplacians of H.
        let grid = build_grid(&DomainSpec::rectangle(1.0, 0.7), 1.0 / 32.0).unwrap();
        let y = Point2::new(0.2, -0.1);
        let h = solve_h_omega(&grid, y, &SolverOptions::default()).unwrap();
        let cells = integrate_cells(&grid, &h.values);
        let (nx, ny) = grid.lattice_dims();
        let mut worst: f64 = 0.0;
        let mut checked = 0;
        for j in 0..ny as isize {
            for i in 0..nx as isize {
                for (di, dj) in [(1, 0), (0, 1)] {
                    if let Some(d) = cell_increment(&grid, &h.values, i, j, di, dj) {
                        let a = cells[j as usize * nx + i as usize];
                        let b = cells[(j + dj) as usize * nx + (i + di) as usize];
                        worst = worst.max((b - a - d).abs());
                        checked += 1;
                    }
                }
            }
        }
        assert!(checked > 1000);
        assert!(worst < 1e-7, "{worst}");
    }
}
