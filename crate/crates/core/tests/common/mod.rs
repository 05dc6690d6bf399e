//! Independent reference computations shared by the integration tests.
//!
//! Nothing here calls into the library's numerical routines; each oracle is a
//! direct, slow implementation of the defining formula.

#![allow(dead_code)]

use vortex_filaments::Point2;

/// Closed-form regular part of the disk Green's function.
pub fn disk_green_regular(x: Point2, y: Point2, radius: f64) -> f64 {
    let r2 = y.norm_sq();
    if r2 == 0.0 {
        return -radius.ln();
    }
    let image = y * (radius * radius / r2);
    -(y.norm() / radius * x.dist(image)).ln()
}

/// Renormalized energy of point vortices in a disk from the closed-form Green's function.
pub fn disk_w(points: &[Point2], radius: f64) -> f64 {
    let pi = std::f64::consts::PI;
    let mut w = 0.0;
    for (i, &p) in points.iter().enumerate() {
        for (j, &q) in points.iter().enumerate() {
            w -= pi * disk_green_regular(p, q, radius);
            if i != j {
                w -= pi * p.dist(q).ln();
            }
        }
    }
    w
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for j in 0..used.len() {
            if !used[j] {
                used[j] = true;
                prefix.push(j);
                rec(prefix, used, out);
                prefix.pop();
                used[j] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Brute-force quotient distance and the first optimal permutation in lexicographic order.
pub fn brute_dx(p: &[Point2], q: &[Point2]) -> (f64, Vec<usize>) {
    let mut best = (f64::INFINITY, Vec::new());
    for perm in permutations(p.len()) {
        let s: f64 = perm.iter().enumerate().map(|(i, &j)| p[i].dist(q[j]).powi(2)).sum();
        if s < best.0 * (1.0 - 1e-12) {
            best = (s, perm);
        }
    }
    (best.0.sqrt(), best.1)
}

/// Maximizes `c·x` subject to `A x ≤ b`, `x ≥ 0`, with `b ≥ 0`.
///
/// Dense tableau simplex with Bland's rule, so it terminates on degenerate
/// problems. Returns the optimal value.
pub fn simplex_max(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> f64 {
    let m = a.len();
    let n = c.len();
    let width = n + m + 1;
    let mut t = vec![vec![0.0; width]; m + 1];
    for i in 0..m {
        assert!(b[i] >= 0.0);
        t[i][..n].copy_from_slice(&a[i]);
        t[i][n + i] = 1.0;
        t[i][width - 1] = b[i];
    }
    for j in 0..n {
        t[m][j] = -c[j];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    let tol = 1e-12;
    loop {
        let Some(col) = (0..n + m).find(|&j| t[m][j] < -tol) else {
            break;
        };
        let mut row = None;
        let mut best = f64::INFINITY;
        for i in 0..m {
            if t[i][col] > tol {
                let ratio = t[i][width - 1] / t[i][col];
                let better = ratio < best - tol
                    || (ratio <= best + tol && row.is_some_and(|r: usize| basis[i] < basis[r]));
                if row.is_none() || better {
                    best = ratio;
                    row = Some(i);
                }
            }
        }
        let row = row.expect("linear program is unbounded");
        let p = t[row][col];
        for v in t[row].iter_mut() {
            *v /= p;
        }
        for i in 0..=m {
            if i != row && t[i][col] != 0.0 {
                let factor = t[i][col];
                for j in 0..width {
                    t[i][j] -= factor * t[row][j];
                }
            }
        }
        basis[row] = col;
    }
    t[m][width - 1]
}

/// `sup { Σ w_k φ(x_k) : |φ| ≤ 1, Lip φ ≤ 1 }` for the signed measure `Σ w_k δ_{x_k}`,
/// solved as a linear program in the values `φ(x_k)`.
pub fn flat_norm_lp(atoms: &[(Point2, f64)]) -> f64 {
    // Substitute ψ = φ + 1 ∈ [0, 2] so that the origin is feasible.
    let k = atoms.len();
    if k == 0 {
        return 0.0;
    }
    let c: Vec<f64> = atoms.iter().map(|a| a.1).collect();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for i in 0..k {
        let mut r = vec![0.0; k];
        r[i] = 1.0;
        rows.push(r);
        rhs.push(2.0);
        for j in 0..k {
            if i != j {
                let mut r = vec![0.0; k];
                r[i] = 1.0;
                r[j] = -1.0;
                rows.push(r);
                rhs.push(atoms[i].0.dist(atoms[j].0));
            }
        }
    }
    simplex_max(&c, &rows, &rhs) - c.iter().sum::<f64>()
}

/// RK4 solution of `x'' = −1/x` on `[0, 1]` with `x(0) = x(1) = a`, sampled at
/// `z = k/segments`. The initial slope is found by bisection on `x'(½) = 0`.
pub fn symmetric_pair_shooting(a: f64, segments: usize) -> Vec<f64> {
    const SUB: usize = 400;
    let run = |slope: f64, until: usize| -> Vec<(f64, f64)> {
        let h = 1.0 / (segments * SUB) as f64;
        let rhs = |s: (f64, f64)| (s.1, -1.0 / s.0);
        let mut s = (a, slope);
        let mut out = vec![s];
        for _ in 0..until {
            for _ in 0..SUB {
                let k1 = rhs(s);
                let k2 = rhs((s.0 + 0.5 * h * k1.0, s.1 + 0.5 * h * k1.1));
                let k3 = rhs((s.0 + 0.5 * h * k2.0, s.1 + 0.5 * h * k2.1));
                let k4 = rhs((s.0 + h * k3.0, s.1 + h * k3.1));
                s.0 += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
                s.1 += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
            }
            out.push(s);
        }
        out
    };
    assert!(segments.is_multiple_of(2));
    let (mut lo, mut hi) = (0.0, 10.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let half = run(mid, segments / 2);
        if half.last().unwrap().1 > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    run(0.5 * (lo + hi), segments).into_iter().map(|s| s.0).collect()
}

/// Central finite differences of `energy` with respect to every coordinate of `x`.
pub fn finite_difference(x: &[f64], step: f64, energy: impl Fn(&[f64]) -> f64) -> Vec<f64> {
    let mut y = x.to_vec();
    (0..x.len())
        .map(|k| {
            y[k] = x[k] + step;
            let up = energy(&y);
            y[k] = x[k] - step;
            let down = energy(&y);
            y[k] = x[k];
            (up - down) / (2.0 * step)
        })
        .collect()
}
