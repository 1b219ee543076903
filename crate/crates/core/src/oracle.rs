//! Brute-force references for validating the planner.
//!
//! [`explicit_bottleneck_dijkstra`] materializes every monotone edge of the
//! graph up front and runs a textbook minimax Dijkstra over it.
//! [`grid_frechet_bottleneck`] solves the discrete two-curve matching problem
//! on a regular parameter grid by dynamic programming.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::cost::Cost;
use crate::costmap::{checked_eval, edge_cost, euclidean, CostMap};
use crate::error::{Error, Result};
use crate::geometry::{dist, Polyline};
use crate::graph::{precedes, SampleSet};
use crate::planner::{extract_path, NodeState, PlanPath};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub cost: Cost,
}

/// The monotone graph with every edge cost precomputed.
#[derive(Debug, Clone)]
pub struct ExplicitGraph<'a> {
    pub vertices: &'a SampleSet,
    /// Outgoing edges per vertex.
    pub adjacency: Vec<Vec<Edge>>,
    pub costmap_evals: u64,
}

impl<'a> ExplicitGraph<'a> {
    /// Scans all ordered pairs: edge `(u, v)` exists iff `u ⪯ v`, `u ≠ v`
    /// and `‖u − v‖ ≤ r`.
    pub fn build(map: &dyn CostMap, vertices: &'a SampleSet, r: f64, h: f64) -> Result<Self> {
        let n = vertices.len();
        let mut adjacency = vec![Vec::new(); n];
        let mut costmap_evals = 0;
        for (u, out) in adjacency.iter_mut().enumerate() {
            let pu = vertices.point(u);
            for v in 0..n {
                let pv = vertices.point(v);
                if u == v || !precedes(pu, pv) || euclidean(pu, pv) > r {
                    continue;
                }
                let k = crate::costmap::subdivisions(pu, pv, h);
                costmap_evals += k as u64 + 1;
                out.push(Edge {
                    from: u,
                    to: v,
                    cost: edge_cost(map, pu, pv, h)?,
                });
            }
        }
        Ok(ExplicitGraph {
            vertices,
            adjacency,
            costmap_evals,
        })
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.adjacency.iter().flatten()
    }
}

#[derive(Debug, Clone)]
pub struct OracleOutcome {
    pub path: Option<PlanPath>,
    pub costmap_evals: u64,
}

/// Minimum-bottleneck monotone path from the start corner to the goal corner
/// over the explicit graph.
pub fn explicit_bottleneck_dijkstra(
    map: &dyn CostMap,
    samples: &SampleSet,
    r: f64,
    h: f64,
) -> Result<OracleOutcome> {
    if map.dimension() != samples.dimension() {
        return Err(Error::DimensionMismatch {
            expected: samples.dimension(),
            actual: map.dimension(),
        });
    }
    let graph = ExplicitGraph::build(map, samples, r, h)?;
    let (start, goal) = (samples.start(), samples.goal());
    let mut states = vec![NodeState::default(); samples.len()];
    let mut done = vec![false; samples.len()];
    let mut heap = BinaryHeap::new();

    states[start].cost = checked_eval(map, samples.point(start))?;
    heap.push(Reverse((states[start].cost, start)));
    while let Some(Reverse((c, u))) = heap.pop() {
        if done[u] || c != states[u].cost || c.is_infinite() {
            continue;
        }
        done[u] = true;
        if u == goal {
            break;
        }
        for e in &graph.adjacency[u] {
            let candidate = c.max(e.cost);
            if candidate < states[e.to].cost {
                states[e.to] = NodeState {
                    cost: candidate,
                    parent: Some(u),
                };
                heap.push(Reverse((candidate, e.to)));
            }
        }
    }

    let path = if done[goal] {
        Some(extract_path(&states, samples)?)
    } else {
        None
    };
    Ok(OracleOutcome {
        path,
        costmap_evals: graph.costmap_evals + 1,
    })
}

/// Discrete bottleneck matching of two curves on a `k × k` grid of parameter
/// pairs `(i/(k−1), j/(k−1))`, each step advancing one or both curves.
pub fn grid_frechet_bottleneck(a: &Polyline, b: &Polyline, k: usize) -> Result<f64> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!(
            "grid needs k >= 2, got {k}"
        )));
    }
    let steps = (k - 1) as f64;
    let pa: Vec<_> = (0..k).map(|i| a.eval_unchecked(i as f64 / steps)).collect();
    let pb: Vec<_> = (0..k).map(|j| b.eval_unchecked(j as f64 / steps)).collect();

    let mut prev = vec![0.0f64; k];
    let mut row = vec![0.0f64; k];
    for (i, &p) in pa.iter().enumerate() {
        for (j, &q) in pb.iter().enumerate() {
            let here = dist(p, q);
            let reach = match (i, j) {
                (0, 0) => f64::NEG_INFINITY,
                (0, _) => row[j - 1],
                (_, 0) => prev[0],
                _ => prev[j].min(row[j - 1]).min(prev[j - 1]),
            };
            row[j] = here.max(reach);
        }
        std::mem::swap(&mut prev, &mut row);
    }
    Ok(prev[k - 1])
}
