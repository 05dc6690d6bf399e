//! C ABI over `vortex_filaments`.
//!
//! Every fallible function returns a [`VfStatus`]; on failure the message is
//! kept per thread and can be copied out with [`vf_last_error_message`].
//! Filament configurations and fields are passed around as opaque handles
//! that must be released with their `_free` function.

use std::cell::RefCell;
use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use vortex_filaments::domain::{build_grid, DomainSpec};
use vortex_filaments::fields::{energy_2d, trial_slice, ComplexField2D, PhaseMode, RadialMode};
use vortex_filaments::reduced::{
    dx_distance, g0_energy, minimize_g0, straight_initial_guess, EndpointConstraint, FilamentConfiguration,
    LabeledPointSet, MinimizeOptions,
};
use vortex_filaments::renormalized::{gamma_constant, w_omega, GreenMode, RadialOptions};
use vortex_filaments::vortex::{detect_vortices, flat_norm_0, AtomicMeasure};
use vortex_filaments::{Error, Point2};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Collision = 3,
    NearBoundary = 4,
    Resolution = 5,
    NotConverged = 6,
    SamplingFailed = 7,
    Io = 8,
    Malformed = 9,
    BufferTooSmall = 10,
    Panic = 11,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VfPoint {
    pub x: f64,
    pub y: f64,
}

/// A weighted point mass.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VfAtom {
    pub x: f64,
    pub y: f64,
    pub weight: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VfDomainKind {
    Disk = 0,
    Rectangle = 1,
}

/// A disk of radius `a`, or the rectangle `[−a, a] × [−b, b]`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VfDomain {
    pub kind: VfDomainKind,
    pub a: f64,
    pub b: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VfRadialMode {
    CoreMin = 0,
    Zeta = 1,
}

/// Opaque filament configuration.
pub struct VfFilaments(FilamentConfiguration);

/// Opaque 2D field on a grid.
pub struct VfField(ComplexField2D);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> VfStatus {
    match e {
        Error::Config(_) | Error::ShapeMismatch { .. } | Error::Coincident { .. } => VfStatus::InvalidArgument,
        Error::Collision { .. } => VfStatus::Collision,
        Error::NearBoundary { .. } => VfStatus::NearBoundary,
        Error::Resolution(_) => VfStatus::Resolution,
        Error::MinimizerNotConverged { .. } | Error::SolverNotConverged { .. } => VfStatus::NotConverged,
        Error::SamplingFailed(_) => VfStatus::SamplingFailed,
        Error::Io(_) => VfStatus::Io,
        Error::Malformed { .. } | Error::Json(_) | Error::Csv(_) => VfStatus::Malformed,
    }
}

enum Fail {
    Lib(Error),
    Null(&'static str),
    Small(usize),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

/// Runs `f`, recording errors and converting panics.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> VfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => VfStatus::Ok,
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Null(name))) => {
            set_error(format!("null pointer passed for {name}"));
            VfStatus::NullPointer
        }
        Ok(Err(Fail::Small(need))) => {
            set_error(format!("output buffer too small, {need} entries needed"));
            VfStatus::BufferTooSmall
        }
        Err(_) => {
            set_error("internal panic".into());
            VfStatus::Panic
        }
    }
}

unsafe fn slice<'a, T>(p: *const T, len: usize, name: &'static str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Fail::Null(name));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn out<'a, T>(p: *mut T, name: &'static str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null(name))
}

unsafe fn points(p: *const VfPoint, len: usize, name: &'static str) -> Result<Vec<Point2>, Fail> {
    Ok(slice(p, len, name)?.iter().map(|q| Point2::new(q.x, q.y)).collect())
}

unsafe fn atoms(p: *const VfAtom, len: usize, name: &'static str) -> Result<AtomicMeasure, Fail> {
    let a = slice(p, len, name)?;
    Ok(AtomicMeasure::new(a.iter().map(|q| (Point2::new(q.x, q.y), q.weight)).collect())?)
}

fn domain(d: &VfDomain) -> DomainSpec {
    match d.kind {
        VfDomainKind::Disk => DomainSpec::disk(d.a),
        VfDomainKind::Rectangle => DomainSpec::rectangle(d.a, d.b),
    }
}

/// Copies the calling thread's last error message, NUL-terminated, into
/// `buf`; returns the full message length in bytes (excluding the NUL).
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn vf_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            std::ptr::copy_nonoverlapping(msg.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// `h_ε = |log ε|^{−1/2}` for `0 < ε < 1`.
///
/// # Safety
/// `result` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn vf_h_eps(epsilon: f64, result: *mut f64) -> VfStatus {
    guard(|| {
        *out(result, "result")? = vortex_filaments::expansion::h_eps(epsilon)?;
        Ok(())
    })
}

/// Builds filaments from `(segments + 1) · n` node-major positions.
///
/// # Safety
/// `positions` must hold `(segments + 1) · n` points; `handle` must be valid.
#[no_mangle]
pub unsafe extern "C" fn vf_filaments_new(
    n: usize,
    height: f64,
    segments: usize,
    positions: *const VfPoint,
    handle: *mut *mut VfFilaments,
) -> VfStatus {
    guard(|| {
        let h = out(handle, "handle")?;
        let count = (segments + 1).checked_mul(n).ok_or(Fail::Small(usize::MAX))?;
        let pts = points(positions, count, "positions")?;
        let f = FilamentConfiguration::new(n, height, pts)?;
        *h = Box::into_raw(Box::new(VfFilaments(f)));
        Ok(())
    })
}

/// Releases a filament handle; null is ignored.
///
/// # Safety
/// `handle` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn vf_filaments_free(handle: *mut VfFilaments) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Writes the filament count and node count.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn vf_filaments_shape(handle: *const VfFilaments, n: *mut usize, nodes: *mut usize) -> VfStatus {
    guard(|| {
        let f = &handle.as_ref().ok_or(Fail::Null("handle"))?.0;
        *out(n, "n")? = f.n();
        *out(nodes, "nodes")? = f.nodes();
        Ok(())
    })
}

/// Copies the node-major positions into `buf` (capacity `len` points).
///
/// # Safety
/// `buf` must be valid for `len` points.
#[no_mangle]
pub unsafe extern "C" fn vf_filaments_positions(handle: *const VfFilaments, buf: *mut VfPoint, len: usize) -> VfStatus {
    guard(|| {
        let f = &handle.as_ref().ok_or(Fail::Null("handle"))?.0;
        let p = f.positions();
        if len < p.len() {
            return Err(Fail::Small(p.len()));
        }
        if buf.is_null() {
            return Err(Fail::Null("buf"));
        }
        for (k, q) in p.iter().enumerate() {
            *buf.add(k) = VfPoint { x: q.x, y: q.y };
        }
        Ok(())
    })
}

/// Discrete reduced energy; `+∞` when a node has coinciding filaments.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn vf_g0_energy(handle: *const VfFilaments, result: *mut f64) -> VfStatus {
    guard(|| {
        let f = &handle.as_ref().ok_or(Fail::Null("handle"))?.0;
        *out(result, "result")? = g0_energy(f);
        Ok(())
    })
}

/// Minimizes the reduced energy between the endpoint sets `bottom` and `top`
/// starting from straight filaments.
///
/// # Safety
/// `bottom` and `top` must hold `n` points; `handle` must be valid.
#[no_mangle]
pub unsafe extern "C" fn vf_minimize(
    n: usize,
    bottom: *const VfPoint,
    top: *const VfPoint,
    height: f64,
    segments: usize,
    tolerance: f64,
    handle: *mut *mut VfFilaments,
) -> VfStatus {
    guard(|| {
        let h = out(handle, "handle")?;
        let c = EndpointConstraint::new(points(bottom, n, "bottom")?, points(top, n, "top")?)?;
        let f0 = straight_initial_guess(&c, height, segments)?;
        let opts = MinimizeOptions {
            tolerance,
            ..MinimizeOptions::default()
        };
        let (f, _) = minimize_g0(&f0, &c, &opts)?;
        *h = Box::into_raw(Box::new(VfFilaments(f)));
        Ok(())
    })
}

/// Relabeling-quotient distance between two `n`-point sets; the optimal
/// matching sends `p[i]` to `q[permutation[i]]`. `permutation` may be null.
///
/// # Safety
/// `p`, `q` must hold `n` points and `permutation` (if not null) `n` entries.
#[no_mangle]
pub unsafe extern "C" fn vf_dx_distance(
    n: usize,
    p: *const VfPoint,
    q: *const VfPoint,
    distance: *mut f64,
    permutation: *mut usize,
) -> VfStatus {
    guard(|| {
        let m = dx_distance(&LabeledPointSet(points(p, n, "p")?), &LabeledPointSet(points(q, n, "q")?))?;
        *out(distance, "distance")? = m.distance;
        if !permutation.is_null() {
            for (k, v) in m.permutation.iter().enumerate() {
                *permutation.add(k) = *v;
            }
        }
        Ok(())
    })
}

/// Flat norm of `μ − ν` for atomic measures.
///
/// # Safety
/// `mu` and `nu` must hold `mu_len` and `nu_len` atoms.
#[no_mangle]
pub unsafe extern "C" fn vf_flat_norm(
    mu: *const VfAtom,
    mu_len: usize,
    nu: *const VfAtom,
    nu_len: usize,
    result: *mut f64,
) -> VfStatus {
    guard(|| {
        let a = atoms(mu, mu_len, "mu")?;
        let b = atoms(nu, nu_len, "nu")?;
        *out(result, "result")? = flat_norm_0(&a, &b);
        Ok(())
    })
}

/// Extrapolated core constant `γ` from a strictly decreasing ε list (at least 3).
///
/// # Safety
/// `epsilons` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn vf_gamma_constant(epsilons: *const f64, len: usize, result: *mut f64) -> VfStatus {
    guard(|| {
        let e = slice(epsilons, len, "epsilons")?;
        *out(result, "result")? = gamma_constant(e, &RadialOptions::default())?.gamma;
        Ok(())
    })
}

/// Renormalized energy of distinct points in a disk of the given radius.
///
/// # Safety
/// `points_ptr` must hold `n` points.
#[no_mangle]
pub unsafe extern "C" fn vf_w_omega_disk(radius: f64, points_ptr: *const VfPoint, n: usize, result: *mut f64) -> VfStatus {
    guard(|| {
        let d = DomainSpec::disk(radius);
        d.validate()?;
        *out(result, "result")? = w_omega(&d, &points(points_ptr, n, "points")?, GreenMode::DiskClosedForm)?;
        Ok(())
    })
}

/// Trial field with unit vortices at `points_ptr` on a uniform grid.
///
/// # Safety
/// `points_ptr` must hold `n` points; `handle` must be valid.
#[no_mangle]
pub unsafe extern "C" fn vf_trial_slice(
    dom: VfDomain,
    spacing: f64,
    points_ptr: *const VfPoint,
    n: usize,
    epsilon: f64,
    mode: VfRadialMode,
    handle: *mut *mut VfField,
) -> VfStatus {
    guard(|| {
        let h = out(handle, "handle")?;
        let grid = Arc::new(build_grid(&domain(&dom), spacing)?);
        let mode = match mode {
            VfRadialMode::CoreMin => RadialMode::CoreMin,
            VfRadialMode::Zeta => RadialMode::Zeta,
        };
        let w = trial_slice(&grid, &points(points_ptr, n, "points")?, epsilon, mode, PhaseMode::Auto)?;
        *h = Box::into_raw(Box::new(VfField(w)));
        Ok(())
    })
}

/// Releases a field handle; null is ignored.
///
/// # Safety
/// `handle` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn vf_field_free(handle: *mut VfField) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// `∫_ω e_ε` of a field.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn vf_field_energy(handle: *const VfField, result: *mut f64) -> VfStatus {
    guard(|| {
        let w = &handle.as_ref().ok_or(Fail::Null("handle"))?.0;
        *out(result, "result")? = energy_2d(w);
        Ok(())
    })
}

/// Detected vortices as atoms of weight `π·degree`. `count` receives the
/// number of atoms; if it exceeds `len` nothing is copied and
/// `BufferTooSmall` is returned.
///
/// # Safety
/// `buf` must be valid for `len` atoms (may be null when `len` is 0).
#[no_mangle]
pub unsafe extern "C" fn vf_detect_vortices(
    handle: *const VfField,
    buf: *mut VfAtom,
    len: usize,
    count: *mut usize,
) -> VfStatus {
    guard(|| {
        let w = &handle.as_ref().ok_or(Fail::Null("handle"))?.0;
        let mu = detect_vortices(w);
        *out(count, "count")? = mu.len();
        if mu.len() > len {
            return Err(Fail::Small(mu.len()));
        }
        if !mu.is_empty() && buf.is_null() {
            return Err(Fail::Null("buf"));
        }
        for (k, (p, m)) in mu.atoms.iter().enumerate() {
            *buf.add(k) = VfAtom {
                x: p.x,
                y: p.y,
                weight: *m,
            };
        }
        Ok(())
    })
}
