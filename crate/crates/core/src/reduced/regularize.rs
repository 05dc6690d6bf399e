//! Random translation of filaments that separates them away from the ends.
//!
//! Given `f` and `δ`, with `s = δ^{1/2}` and `r = δ^{1/3}`, a shift `a` with
//! `|a_i| ≤ r` is drawn until for every pair the point `a_j − a_i` stays at
//! distance at least `δ` from the curve `z ↦ f_i(z) − f_j(z)`. The output is
//! `f + a` on `[s, L − s]`, equals `f` at `z ∈ {0, L}`, and is affine on the
//! two end strips.
//!
//! Candidates are drawn uniformly from a disk whose radius starts at `δ` and
//! doubles every [`DRAWS_PER_RADIUS`] rejections until it reaches `r`. The end
//! strips cost kinetic energy of order `|a|²/s`, so small accepted shifts keep
//! `G₀(f^δ)` close to `G₀(f)`.

use rand::{Rng, RngExt};

use super::FilamentConfiguration;
use crate::error::{Error, Result};
use crate::point::Point2;

/// Maximum number of candidate shifts before giving up.
pub const MAX_DRAWS: usize = 10_000;
/// Rejections tolerated at one sampling radius before it doubles.
pub const DRAWS_PER_RADIUS: usize = 50;

#[derive(Debug, Clone)]
pub struct FDelta {
    pub config: FilamentConfiguration,
    pub shift: Vec<Point2>,
    /// Number of candidate shifts drawn, including the accepted one.
    pub draws: usize,
}

#[derive(Debug, Clone, Copy)]
struct Scales {
    s: f64,
    r: f64,
}

fn build(f: &FilamentConfiguration, a: &[Point2], s: f64) -> FilamentConfiguration {
    let n = f.n();
    let height = f.height();
    let lower: Vec<Point2> = (0..n).map(|i| f.eval(i, s) + a[i]).collect();
    let upper: Vec<Point2> = (0..n).map(|i| f.eval(i, height - s) + a[i]).collect();
    let mut out = f.clone();
    let m = f.segments();
    for k in 1..m {
        let z = f.z(k);
        for i in 0..n {
            let p = if z < s {
                let t = z / s;
                f.pos(0, i) * (1.0 - t) + lower[i] * t
            } else if z > height - s {
                let t = (height - z) / s;
                f.pos(m, i) * (1.0 - t) + upper[i] * t
            } else {
                f.pos(k, i) + a[i]
            };
            out.set_pos(k, i, p);
        }
    }
    out
}

/// Distance from `p` to the polyline through `f_i(z_k) − f_j(z_k)`.
fn dist_to_difference_curve(f: &FilamentConfiguration, i: usize, j: usize, p: Point2) -> f64 {
    let mut d = f64::INFINITY;
    for k in 0..f.segments() {
        let u = f.pos(k, i) - f.pos(k, j);
        let w = f.pos(k + 1, i) - f.pos(k + 1, j);
        d = d.min(p.dist_to_segment(u, w));
    }
    d
}

fn meets_separation(g: &FilamentConfiguration, s: f64) -> bool {
    let height = g.height();
    for k in 1..g.segments() {
        let z = g.z(k);
        let bound = s * z.min(height - z).min(s);
        let node = g.node(k);
        for i in 0..node.len() {
            for j in i + 1..node.len() {
                if node[i].dist(node[j]) < bound {
                    return false;
                }
            }
        }
    }
    true
}

/// Draws a separating shift and returns the regularized configuration.
pub fn regularize_fdelta<R: Rng + ?Sized>(
    f: &FilamentConfiguration,
    delta: f64,
    rng: &mut R,
) -> Result<FDelta> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::Config(format!("delta must be positive, got {delta}")));
    }
    let sc = Scales {
        s: delta.sqrt(),
        r: delta.cbrt(),
    };
    if sc.s >= f.height() / 2.0 {
        return Err(Error::Config(format!(
            "delta {delta} too large for height {}",
            f.height()
        )));
    }
    let n = f.n();
    let mut a = vec![Point2::ZERO; n];
    let mut radius = delta.min(sc.r);
    for draw in 1..=MAX_DRAWS {
        if draw > 1 && (draw - 1) % DRAWS_PER_RADIUS == 0 {
            radius = (2.0 * radius).min(sc.r);
        }
        for ai in a.iter_mut() {
            *ai = loop {
                let c = Point2::new(rng.random_range(-radius..=radius), rng.random_range(-radius..=radius));
                if c.norm() <= radius {
                    break c;
                }
            };
        }
        let clear = (0..n).all(|i| {
            (i + 1..n).all(|j| dist_to_difference_curve(f, i, j, a[j] - a[i]) >= delta)
        });
        if !clear {
            continue;
        }
        let g = build(f, &a, sc.s);
        if meets_separation(&g, sc.s) {
            return Ok(FDelta {
                config: g,
                shift: a,
                draws: draw,
            });
        }
    }
    Err(Error::SamplingFailed(MAX_DRAWS))
}
