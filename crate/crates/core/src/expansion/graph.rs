use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::cayley::{CayleyBall, Dist, Walker};
use crate::error::{Error, Result};
use crate::par;

/// Directed graph on ball elements with an edge `g0 → g1` whenever
/// `d(g0, g1) ≤ 2` and `D_x(g0, g1) ≥ c̲ / 2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansionGraph {
    pub x: f64,
    pub c_lower: f64,
    /// Sorted out-neighbors of each ball element.
    pub out: Vec<Vec<u32>>,
}

impl ExpansionGraph {
    pub fn edge_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    /// Neighbors in the underlying undirected graph.
    pub fn undirected(&self) -> Vec<Vec<u32>> {
        let mut adj = self.out.clone();
        for (u, outs) in self.out.iter().enumerate() {
            for &v in outs {
                adj[v as usize].push(u as u32);
            }
        }
        for a in &mut adj {
            a.sort_unstable();
            a.dedup();
        }
        adj
    }
}

pub fn build_expansion_graph(ball: &CayleyBall, x: f64, c_lower: f64) -> ExpansionGraph {
    let logs = par::map_slice(ball.elements(), |g| g.log_derivative(x));
    let ns = ball.generators().len();
    let out = par::map_range(ball.len(), |u| {
        let mut near: Vec<usize> = Vec::new();
        for s in 0..ns {
            // the midpoint may leave the ball while `t s u` is back inside
            let mut mid = Walker::at_index(ball, u);
            mid.left(s);
            near.extend(mid.index());
            for t in 0..ns {
                let mut w = mid.clone();
                w.left(t);
                near.extend(w.index());
            }
        }
        near.sort_unstable();
        near.dedup();
        near.into_iter()
            .filter(|&v| v != u && logs[v] - logs[u] >= c_lower / 2.0)
            .map(|v| v as u32)
            .collect()
    });
    ExpansionGraph { x, c_lower, out }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuasiIsometryAudit {
    /// `max d / d_Γ` over audited pairs.
    pub max_ratio_d_over_dgamma: f64,
    /// `max d_Γ / d` over audited pairs.
    pub max_ratio_dgamma_over_d: f64,
    pub pairs: usize,
    pub passes: bool,
}

/// Compare the word metric with the undirected graph metric on pairs of
/// elements of norm at most `radius - 2`; passes iff `d ≤ 2 d_Γ` and
/// `d_Γ ≤ 2 d` on every pair where both are known.
pub fn quasi_isometry_audit(graph: &ExpansionGraph, ball: &CayleyBall) -> Result<QuasiIsometryAudit> {
    let interior: Vec<usize> = (0..ball.len())
        .filter(|&i| ball.norm(i) + 2 <= ball.radius())
        .collect();
    let adj = graph.undirected();
    if let Some(&i) = interior.iter().find(|&&i| adj[i].is_empty()) {
        return Err(Error::DisconnectedGamma(i));
    }
    let rows = par::map_slice(&interior, |&u| {
        let mut dg = vec![u32::MAX; ball.len()];
        dg[u] = 0;
        let mut queue = VecDeque::from([u]);
        while let Some(a) = queue.pop_front() {
            for &b in &adj[a] {
                let b = b as usize;
                if dg[b] == u32::MAX {
                    dg[b] = dg[a] + 1;
                    queue.push_back(b);
                }
            }
        }
        let mut r1 = 0.0f64;
        let mut r2 = 0.0f64;
        let mut pairs = 0usize;
        let mut ok = true;
        for &v in &interior {
            if v == u || dg[v] == u32::MAX {
                continue;
            }
            let Dist::Exact(d) = ball.dist(u, v) else {
                continue;
            };
            pairs += 1;
            let (d, g) = (f64::from(d), f64::from(dg[v]));
            r1 = r1.max(d / g);
            r2 = r2.max(g / d);
            ok &= d <= 2.0 * g && g <= 2.0 * d;
        }
        (r1, r2, pairs, ok)
    });
    let mut audit = QuasiIsometryAudit {
        max_ratio_d_over_dgamma: 0.0,
        max_ratio_dgamma_over_d: 0.0,
        pairs: 0,
        passes: true,
    };
    for (r1, r2, p, ok) in rows {
        audit.max_ratio_d_over_dgamma = audit.max_ratio_d_over_dgamma.max(r1);
        audit.max_ratio_dgamma_over_d = audit.max_ratio_dgamma_over_d.max(r2);
        audit.pairs += p;
        audit.passes &= ok;
    }
    Ok(audit)
}
