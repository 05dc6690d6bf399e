//! Numerical laboratory for nearly parallel Ginzburg-Landau vortex filaments.
//!
//! The crate provides
//! - the reduced filament energy, its minimizers and critical-point ODE ([`reduced`]),
//! - regular parts of the Dirichlet Green's function, the renormalized energy
//!   and the core constant ([`renormalized`]),
//! - Ginzburg-Landau field energies and explicit trial/recovery fields ([`fields`]),
//! - vortex detection, flat norms of atomic measures and vortex-ball lower
//!   bounds ([`vortex`]),
//! - the assembled energy-expansion sweep ([`expansion`]).

pub mod config;
pub mod domain;
pub mod error;
pub mod expansion;
pub mod fields;
pub mod io;
pub mod laplace;
pub mod point;
pub mod reduced;
pub mod renormalized;
pub mod vortex;

pub use domain::{build_grid, quadrature_2d, r_star, CylinderSpec, DomainSpec, Grid2D};
pub use error::{Error, Result};
pub use point::Point2;
