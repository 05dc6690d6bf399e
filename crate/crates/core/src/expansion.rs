//! Energy expansion bookkeeping: the renormalized 3D energy `G_ε`, the
//! per-slice excess `ξ_ε` and ε-sweeps of recovery fields.
//!
//! With `κ_n = −π n² L H_ω(0,0) + n L γ`,
//!
//! ```text
//! G_ε = F_ε − nπL|log ε| − πn(n−1)L|log h_ε| − κ_n
//! ξ_ε(z) = ∫_ω e_ε(u(·,z)) − [n(π|log ε| + γ) + n(n−1)π|log h_ε| − n²π H_ω(0,0)]
//! ```
//!
//! so that `G_ε = ∫ξ_ε dz + ½∫∫|∂_z u|²` exactly under the trapezoid rule.

use std::f64::consts::PI;
use std::io::Write;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::{build_grid, trapezoid_weights, CylinderSpec, DomainSpec};
use crate::error::{Error, Result};
use crate::fields::{energy_3d_with, recovery_field, Energy3D, PhaseMode, SliceSource};
use crate::reduced::{g0_energy, FilamentConfiguration};
use crate::renormalized::{h_origin, GreenMode, GAMMA_DEFAULT};
use crate::vortex::{detect_vortices, sliced_flat_norm, AtomicMeasure};

/// Default ε list of the sweep.
pub const DEFAULT_EPSILONS: [f64; 3] = [5e-2, 2.5e-2, 1.25e-2];

/// Vortex separation scale `h_ε = |log ε|^{−1/2}`.
pub fn h_eps(epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Config(format!("ε must lie in (0, 1), got {epsilon}")));
    }
    Ok(1.0 / (-epsilon.ln()).sqrt())
}

/// Everything the expansion needs besides the field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpansionConstants {
    pub n: usize,
    pub height: f64,
    pub gamma: f64,
    /// `H_ω(0, 0)`.
    pub h00: f64,
}

impl ExpansionConstants {
    /// Computes `H_ω(0,0)` for `domain` (closed form on disks); `γ` defaults
    /// to the tabulated value.
    pub fn for_domain(domain: &DomainSpec, n: usize, height: f64, gamma: Option<f64>) -> Result<Self> {
        if !(height > 0.0) {
            return Err(Error::Config(format!("height must be positive, got {height}")));
        }
        let grid = build_grid(domain, domain.min_extent() / 256.0)?;
        let h00 = h_origin(domain, GreenMode::auto(&grid))?;
        Ok(ExpansionConstants {
            n,
            height,
            gamma: gamma.unwrap_or(GAMMA_DEFAULT),
            h00,
        })
    }

    pub fn kappa(&self) -> f64 {
        crate::renormalized::kappa_n(self.h00, self.n, self.height, self.gamma)
    }

    /// `(nπL|log ε|, πn(n−1)L|log h_ε|)`.
    pub fn divergent_terms(&self, epsilon: f64) -> Result<(f64, f64)> {
        let h = h_eps(epsilon)?;
        let n = self.n as f64;
        Ok((
            n * PI * self.height * epsilon.ln().abs(),
            PI * n * (n - 1.0) * self.height * h.ln().abs(),
        ))
    }

    /// The per-slice subtraction in `ξ_ε`.
    pub fn slice_offset(&self, epsilon: f64) -> Result<f64> {
        let h = h_eps(epsilon)?;
        let n = self.n as f64;
        Ok(n * (PI * epsilon.ln().abs() + self.gamma) + n * (n - 1.0) * PI * h.ln().abs()
            - n * n * PI * self.h00)
    }
}

/// `G_ε` from a computed [`Energy3D`].
pub fn g_eps_from_energy(energy: &Energy3D, epsilon: f64, c: &ExpansionConstants) -> Result<f64> {
    let (a, b) = c.divergent_terms(epsilon)?;
    Ok(energy.total - a - b - c.kappa())
}

/// `ξ_ε(z_k)` from a computed [`Energy3D`].
pub fn xi_from_energy(energy: &Energy3D, epsilon: f64, c: &ExpansionConstants) -> Result<Vec<f64>> {
    let off = c.slice_offset(epsilon)?;
    Ok(energy.slice_energy.iter().map(|e| e - off).collect())
}

fn check_height<S: SliceSource + ?Sized>(u: &S, c: &ExpansionConstants) -> Result<()> {
    let l = u.cylinder().height;
    if (l - c.height).abs() > 1e-12 * l {
        return Err(Error::Config(format!("field height {l} differs from constants height {}", c.height)));
    }
    Ok(())
}

/// `G_ε(u)`.
pub fn g_eps<S: SliceSource + ?Sized>(u: &S, c: &ExpansionConstants) -> Result<f64> {
    check_height(u, c)?;
    let e = crate::fields::energy_3d(u)?;
    g_eps_from_energy(&e, u.epsilon(), c)
}

/// `ξ_ε` at every z-sample of `u`.
pub fn xi_eps_profile<S: SliceSource + ?Sized>(u: &S, c: &ExpansionConstants) -> Result<Vec<f64>> {
    check_height(u, c)?;
    let e = crate::fields::energy_3d(u)?;
    xi_from_energy(&e, u.epsilon(), c)
}

/// Resolution of the per-ε grids.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GridPolicy {
    /// Grid spacing as a multiple of `min(ε, h_ε · min separation)`.
    pub spacing_factor: f64,
    /// `Δz ≤ z_factor · ε/(h_ε max|f'|)`, and `Δz ≤ L/16` always.
    pub z_factor: f64,
}

impl Default for GridPolicy {
    fn default() -> Self {
        GridPolicy {
            spacing_factor: 0.25,
            z_factor: 0.5,
        }
    }
}

impl GridPolicy {
    /// `(spacing, z_samples)` for `f` at scale `ε`.
    pub fn resolve(&self, f: &FilamentConfiguration, epsilon: f64) -> Result<(f64, usize)> {
        if !(self.spacing_factor > 0.0 && self.z_factor > 0.0) {
            return Err(Error::Config("grid policy factors must be positive".into()));
        }
        let h = h_eps(epsilon)?;
        let sep = if f.n() > 1 { f.min_separation() } else { f64::INFINITY };
        let spacing = self.spacing_factor * epsilon.min(h * sep);
        let speed = h * f.max_speed();
        let mut dz = f.height() / 16.0;
        if speed > 0.0 {
            dz = dz.min(self.z_factor * epsilon / speed);
        }
        let steps = (f.height() / dz - 1e-9).ceil().max(2.0) as usize;
        Ok((spacing, steps + 1))
    }
}

/// Sweep settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepOptions {
    pub domain: DomainSpec,
    pub policy: GridPolicy,
    pub phase: PhaseMode,
    /// Overrides the tabulated `γ`.
    pub gamma: Option<f64>,
}

impl SweepOptions {
    pub fn new(domain: DomainSpec) -> Self {
        SweepOptions {
            domain,
            policy: GridPolicy::default(),
            phase: PhaseMode::Auto,
            gamma: None,
        }
    }
}

/// Measured quantities at one ε.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsilonMeasurements {
    pub f_eps: f64,
    pub g_eps: f64,
    /// `nπL|log ε|`.
    pub log_eps_term: f64,
    /// `πn(n−1)L|log h_ε|`.
    pub log_h_term: f64,
    /// `G_ε − G₀(f)`; `None` when `G₀(f)` is infinite.
    pub gap: Option<f64>,
    pub sliced_flat_norm: f64,
    /// `∫ξ_ε dz`.
    pub xi_integral: f64,
    /// `½∫∫|∂_z u|²`.
    pub z_kinetic_term: f64,
    /// `|G_ε − (∫ξ_ε + ½∫∫|∂_z u|²)| / max(1, |G_ε|)`.
    pub identity_residual: f64,
    pub xi: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsilonRecord {
    pub epsilon: f64,
    pub h_eps: f64,
    pub spacing: f64,
    pub z_samples: usize,
    pub result: Option<EpsilonMeasurements>,
    /// Set when this ε could not be run.
    pub failure: Option<String>,
    /// Exit-code class of the failure.
    pub failure_code: Option<i32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionReport {
    pub epsilons: Vec<f64>,
    pub constants: ExpansionConstants,
    pub kappa: f64,
    /// `G₀(f)`; `None` when the endpoints collide.
    pub g0: Option<f64>,
    pub records: Vec<EpsilonRecord>,
    /// All runs succeeded and `|G_ε − G₀(f)|` strictly decreases.
    pub abs_gap_decreasing: bool,
    /// All runs succeeded and the signed gap strictly decreases.
    pub signed_gap_decreasing: bool,
    /// All runs succeeded and the sliced flat norms strictly decrease.
    pub flat_norm_decreasing: bool,
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

impl ExpansionReport {
    pub fn all_succeeded(&self) -> bool {
        self.records.iter().all(|r| r.result.is_some())
    }

    /// One CSV row per ε; empty cells where a run failed.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "epsilon",
            "h_eps",
            "spacing",
            "z_samples",
            "F_eps",
            "G_eps",
            "log_eps_term",
            "log_h_term",
            "kappa",
            "G0",
            "gap",
            "sliced_flat_norm",
            "xi_integral",
            "z_kinetic_term",
            "failure",
        ])?;
        let fmt = |v: Option<f64>| v.map(|x| format!("{x:.12e}")).unwrap_or_default();
        for r in &self.records {
            let m = r.result.as_ref();
            w.write_record([
                format!("{:e}", r.epsilon),
                format!("{:.12e}", r.h_eps),
                format!("{:e}", r.spacing),
                r.z_samples.to_string(),
                fmt(m.map(|m| m.f_eps)),
                fmt(m.map(|m| m.g_eps)),
                fmt(m.map(|m| m.log_eps_term)),
                fmt(m.map(|m| m.log_h_term)),
                format!("{:.12e}", self.kappa),
                fmt(self.g0),
                fmt(m.and_then(|m| m.gap)),
                fmt(m.map(|m| m.sliced_flat_norm)),
                fmt(m.map(|m| m.xi_integral)),
                fmt(m.map(|m| m.z_kinetic_term)),
                r.failure.clone().unwrap_or_default(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn run_one(
    f: &FilamentConfiguration,
    epsilon: f64,
    opts: &SweepOptions,
    c: &ExpansionConstants,
    g0: Option<f64>,
    spacing: f64,
    z_samples: usize,
) -> Result<EpsilonMeasurements> {
    let h = h_eps(epsilon)?;
    let cylinder = CylinderSpec::new(opts.domain, f.height(), z_samples)?;
    let grid = Arc::new(build_grid(&opts.domain, spacing)?);
    let u = recovery_field(f, epsilon, cylinder, grid, opts.phase)?;
    let mut slices: Vec<AtomicMeasure> = Vec::with_capacity(z_samples);
    let energy = energy_3d_with(&u, |_, s| {
        slices.push(detect_vortices(s));
        Ok(())
    })?;
    let g = g_eps_from_energy(&energy, epsilon, c)?;
    let (a, b) = c.divergent_terms(epsilon)?;
    let xi = xi_from_energy(&energy, epsilon, c)?;
    let xi_integral: f64 = xi
        .iter()
        .zip(trapezoid_weights(z_samples, cylinder.dz()))
        .map(|(x, w)| x * w)
        .sum();
    let flat = sliced_flat_norm(&slices, &f.scaled(h))?;
    Ok(EpsilonMeasurements {
        f_eps: energy.total,
        g_eps: g,
        log_eps_term: a,
        log_h_term: b,
        gap: g0.map(|g0| g - g0),
        sliced_flat_norm: flat,
        xi_integral,
        z_kinetic_term: energy.z_kinetic_term,
        identity_residual: (g - (xi_integral + energy.z_kinetic_term)).abs() / g.abs().max(1.0),
        xi,
    })
}

/// Builds the recovery field of `f` at every ε of `epsilons` and compares
/// `G_ε` with `G₀(f)`. Runs that cannot be resolved are kept as failure records.
pub fn gamma_sweep(
    f: &FilamentConfiguration,
    epsilons: &[f64],
    opts: &SweepOptions,
) -> Result<ExpansionReport> {
    if epsilons.is_empty() || !strictly_decreasing(epsilons) {
        return Err(Error::Config("ε list must be non-empty and strictly decreasing".into()));
    }
    for &e in epsilons {
        h_eps(e)?;
    }
    if let Some(e) = f.find_interior_collision() {
        return Err(e);
    }
    let c = ExpansionConstants::for_domain(&opts.domain, f.n(), f.height(), opts.gamma)?;
    let g0 = {
        let v = g0_energy(f);
        v.is_finite().then_some(v)
    };
    let records: Vec<EpsilonRecord> = epsilons
        .par_iter()
        .map(|&eps| {
            let h = h_eps(eps).expect("checked above");
            let (spacing, z_samples) = match opts.policy.resolve(f, eps) {
                Ok(v) => v,
                Err(e) => {
                    return EpsilonRecord {
                        epsilon: eps,
                        h_eps: h,
                        spacing: 0.0,
                        z_samples: 0,
                        result: None,
                        failure_code: Some(e.exit_code()),
                        failure: Some(e.to_string()),
                    }
                }
            };
            let run = run_one(f, eps, opts, &c, g0, spacing, z_samples);
            EpsilonRecord {
                epsilon: eps,
                h_eps: h,
                spacing,
                z_samples,
                failure_code: run.as_ref().err().map(|e| e.exit_code()),
                failure: run.as_ref().err().map(|e| e.to_string()),
                result: run.ok(),
            }
        })
        .collect();
    let ok = records.iter().all(|r| r.result.is_some());
    let gaps: Vec<f64> = records.iter().filter_map(|r| r.result.as_ref()?.gap).collect();
    let flats: Vec<f64> = records
        .iter()
        .filter_map(|r| r.result.as_ref().map(|m| m.sliced_flat_norm))
        .collect();
    Ok(ExpansionReport {
        epsilons: epsilons.to_vec(),
        constants: c,
        kappa: c.kappa(),
        g0,
        abs_gap_decreasing: ok
            && g0.is_some()
            && strictly_decreasing(&gaps.iter().map(|g| g.abs()).collect::<Vec<_>>()),
        signed_gap_decreasing: ok && g0.is_some() && strictly_decreasing(&gaps),
        flat_norm_decreasing: ok && strictly_decreasing(&flats),
        records,
    })
}
