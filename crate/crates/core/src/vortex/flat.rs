//! Flat norm of a signed atomic 0-current through its transport dual.
//!
//! Positive mass of `μ − ν` is either carried to negative mass at cost
//! `min(|x − y|, 2)` per unit or disposed of at cost 1 per unit. The optimum
//! is a small transportation problem solved by successive shortest paths.

use super::AtomicMeasure;
use crate::point::Point2;

#[derive(Debug, Clone, Copy)]
struct Edge {
    to: usize,
    cap: f64,
    cost: f64,
}

/// Min-cost flow with real capacities on a dense-ish graph.
struct FlowGraph {
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
}

impl FlowGraph {
    fn new(nodes: usize) -> Self {
        FlowGraph {
            edges: Vec::new(),
            adj: vec![Vec::new(); nodes],
        }
    }

    fn add(&mut self, from: usize, to: usize, cap: f64, cost: f64) {
        self.adj[from].push(self.edges.len());
        self.edges.push(Edge { to, cap, cost });
        self.adj[to].push(self.edges.len());
        self.edges.push(Edge {
            to: from,
            cap: 0.0,
            cost: -cost,
        });
    }

    /// Pushes as much flow as possible from `s` to `t`; returns the total cost.
    fn min_cost_max_flow(&mut self, s: usize, t: usize, tol: f64) -> f64 {
        let n = self.adj.len();
        let mut total = 0.0;
        loop {
            // Bellman-Ford: residual costs can be negative on reverse edges.
            let mut dist = vec![f64::INFINITY; n];
            let mut via = vec![usize::MAX; n];
            dist[s] = 0.0;
            for _ in 0..n {
                let mut changed = false;
                for u in 0..n {
                    if dist[u].is_infinite() {
                        continue;
                    }
                    for &e in &self.adj[u] {
                        let edge = self.edges[e];
                        if edge.cap > tol && dist[u] + edge.cost < dist[edge.to] - 1e-15 {
                            dist[edge.to] = dist[u] + edge.cost;
                            via[edge.to] = e;
                            changed = true;
                        }
                    }
                }
                if !changed {
                    break;
                }
            }
            if dist[t].is_infinite() {
                return total;
            }
            let mut push = f64::INFINITY;
            let mut v = t;
            while v != s {
                let e = via[v];
                push = push.min(self.edges[e].cap);
                v = self.edges[e ^ 1].to;
            }
            let mut v = t;
            while v != s {
                let e = via[v];
                self.edges[e].cap -= push;
                self.edges[e ^ 1].cap += push;
                total += push * self.edges[e].cost;
                v = self.edges[e ^ 1].to;
            }
        }
    }
}

/// Splits `μ − ν` into positive and negative atoms.
pub(crate) fn signed_parts(mu: &AtomicMeasure, nu: &AtomicMeasure) -> (Vec<(Point2, f64)>, Vec<(Point2, f64)>) {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for &(p, w) in &mu.atoms {
        if w > 0.0 {
            pos.push((p, w));
        } else if w < 0.0 {
            neg.push((p, -w));
        }
    }
    for &(p, w) in &nu.atoms {
        if w > 0.0 {
            neg.push((p, w));
        } else if w < 0.0 {
            pos.push((p, -w));
        }
    }
    (pos, neg)
}

/// `sup{∫φ d(μ − ν) : |φ| ≤ 1, Lip φ ≤ 1}`.
pub fn flat_norm_0(mu: &AtomicMeasure, nu: &AtomicMeasure) -> f64 {
    let (pos, neg) = signed_parts(mu, nu);
    if pos.is_empty() && neg.is_empty() {
        return 0.0;
    }
    let sp: f64 = pos.iter().map(|a| a.1).sum();
    let sn: f64 = neg.iter().map(|a| a.1).sum();
    let (np, nn) = (pos.len(), neg.len());
    // Layout: source, positive atoms, spare supply X, negative atoms, spare demand Y, sink.
    let src = 0;
    let x = np + 1;
    let neg0 = np + 2;
    let y = neg0 + nn;
    let sink = y + 1;
    let mut g = FlowGraph::new(sink + 1);
    for (i, &(p, a)) in pos.iter().enumerate() {
        g.add(src, 1 + i, a, 0.0);
        for (j, &(q, _)) in neg.iter().enumerate() {
            g.add(1 + i, neg0 + j, f64::INFINITY, p.dist(q).min(2.0));
        }
        g.add(1 + i, y, f64::INFINITY, 1.0);
    }
    g.add(src, x, sn, 0.0);
    for (j, &(_, b)) in neg.iter().enumerate() {
        g.add(x, neg0 + j, f64::INFINITY, 1.0);
        g.add(neg0 + j, sink, b, 0.0);
    }
    g.add(x, y, f64::INFINITY, 0.0);
    g.add(y, sink, sp, 0.0);
    let tol = 1e-13 * (sp + sn);
    g.min_cost_max_flow(src, sink, tol).max(0.0)
}
