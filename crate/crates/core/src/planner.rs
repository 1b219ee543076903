//! The bottleneck-tree planner.
//!
//! A Dijkstra-style search over the implicit monotone random geometric
//! graph, ordered by bottleneck cost-to-come. Edges are only evaluated when
//! their source vertex is expanded, and edge sampling stops as soon as the
//! edge cannot improve its target.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::time::Instant;

use crate::cost::Cost;
use crate::costmap::{checked_eval, edge_cost, edge_cost_below, euclidean, CostMap};
use crate::error::{Error, Result};
use crate::graph::{precedes, sample, GraphParams, GridIndex, SampleSet};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeState {
    pub cost: Cost,
    pub parent: Option<usize>,
}

impl Default for NodeState {
    fn default() -> Self {
        NodeState {
            cost: Cost::INFINITY,
            parent: None,
        }
    }
}

/// A monotone vertex sequence from the all-zeros corner to the all-ones
/// corner together with its bottleneck cost.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanPath {
    /// Sample ids, start first.
    pub ids: Vec<usize>,
    pub vertices: Vec<Vec<f64>>,
    pub cost: Cost,
}

impl PlanPath {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Checks that consecutive vertices are ordered by `⪯` and at most `r`
    /// apart, and that the cost is finite.
    pub fn check(&self, r: f64) -> std::result::Result<(), String> {
        if !self.cost.is_finite() {
            return Err("plan cost is infinite".into());
        }
        if self.vertices.len() < 2 {
            return Err("plan needs at least two vertices".into());
        }
        for (k, w) in self.vertices.windows(2).enumerate() {
            if !precedes(&w[0], &w[1]) {
                return Err(format!("hop {k} is not monotone: {:?} -> {:?}", w[0], w[1]));
            }
            let len = euclidean(&w[0], &w[1]);
            if len > r {
                return Err(format!("hop {k} has length {len} > radius {r}"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunStats {
    pub nodes_expanded: u64,
    pub edges_considered: u64,
    pub monotone_edges_accepted: u64,
    pub costmap_evals: u64,
    /// Seconds.
    pub wall_time: f64,
}

/// Result of one planner run. `path` is `None` when the start cannot reach
/// the goal through finite-cost edges.
#[derive(Debug, Clone)]
pub struct PlanOutcome {
    pub path: Option<PlanPath>,
    pub stats: RunStats,
    pub radius: f64,
}

/// Hook into the search, called for every vertex taken from the queue
/// (including the goal).
pub trait SearchObserver {
    fn on_extract(&mut self, _id: usize, _cost: Cost) {}
}

impl SearchObserver for () {}

/// Records the sequence of extracted costs.
#[derive(Debug, Default)]
pub struct ExtractionLog {
    pub costs: Vec<Cost>,
}

impl SearchObserver for ExtractionLog {
    fn on_extract(&mut self, _id: usize, cost: Cost) {
        self.costs.push(cost);
    }
}

/// Samples the graph described by `params` and runs the planner on it.
pub fn btt_plan(map: &dyn CostMap, params: &GraphParams) -> Result<PlanOutcome> {
    btt_plan_observed(map, params, &mut ())
}

pub fn btt_plan_observed(
    map: &dyn CostMap,
    params: &GraphParams,
    observer: &mut dyn SearchObserver,
) -> Result<PlanOutcome> {
    if map.dimension() != params.d {
        return Err(Error::DimensionMismatch {
            expected: params.d,
            actual: map.dimension(),
        });
    }
    params.validate()?;
    let started = Instant::now();
    let samples = sample(params.n, params.d, params.seed);
    let r = params.radius()?;
    let mut out = plan_on_samples(map, &samples, r, params.h, observer)?;
    out.stats.wall_time = started.elapsed().as_secs_f64();
    Ok(out)
}

/// Runs the planner on an explicit vertex set with connection radius `r`
/// and edge resolution `h`.
pub fn plan_on_samples(
    map: &dyn CostMap,
    samples: &SampleSet,
    r: f64,
    h: f64,
    observer: &mut dyn SearchObserver,
) -> Result<PlanOutcome> {
    if map.dimension() != samples.dimension() {
        return Err(Error::DimensionMismatch {
            expected: samples.dimension(),
            actual: map.dimension(),
        });
    }
    if r.is_nan() || r <= 0.0 || h.is_nan() || h <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "radius and resolution must be positive (r={r}, h={h})"
        )));
    }
    let started = Instant::now();
    let mut stats = RunStats::default();
    let mut index = GridIndex::new(samples, r)?;
    let (start, goal) = (samples.start(), samples.goal());

    let mut states = vec![NodeState::default(); samples.len()];
    let mut visited = vec![false; samples.len()];
    let mut heap = BinaryHeap::new();

    stats.costmap_evals += 1;
    states[start].cost = checked_eval(map, samples.point(start))?;
    if states[start].cost.is_finite() {
        heap.push(Reverse((states[start].cost, start)));
    }

    let mut neighbors = Vec::new();
    let mut path = None;
    while let Some(Reverse((c, z))) = heap.pop() {
        if visited[z] || c != states[z].cost {
            continue;
        }
        observer.on_extract(z, c);
        if z == goal {
            path = Some(extract_path(&states, samples)?);
            break;
        }
        visited[z] = true;
        index.deactivate(z);
        stats.nodes_expanded += 1;

        let pz = samples.point(z);
        index.near_into(samples, pz, Some(z), r, &mut neighbors);
        for &x in &neighbors {
            stats.edges_considered += 1;
            let px = samples.point(x);
            if !precedes(pz, px) {
                continue;
            }
            stats.monotone_edges_accepted += 1;
            let current = states[x].cost;
            if c >= current {
                continue;
            }
            let Some(edge) = edge_cost_below(map, pz, px, h, current, &mut stats.costmap_evals)?
            else {
                continue;
            };
            let candidate = c.max(edge);
            if candidate < current {
                states[x] = NodeState {
                    cost: candidate,
                    parent: Some(z),
                };
                heap.push(Reverse((candidate, x)));
            }
        }
    }

    if let Some(p) = &path {
        p.check(r).map_err(Error::BrokenParentChain)?;
    }
    stats.wall_time = started.elapsed().as_secs_f64();
    Ok(PlanOutcome {
        path,
        stats,
        radius: r,
    })
}

/// Follows parent pointers back from the goal and returns the path in
/// start-to-goal order with the goal's cost.
pub fn extract_path(states: &[NodeState], samples: &SampleSet) -> Result<PlanPath> {
    let (start, goal) = (samples.start(), samples.goal());
    if states.len() != samples.len() {
        return Err(Error::BrokenParentChain(format!(
            "{} states for {} vertices",
            states.len(),
            samples.len()
        )));
    }
    let cost = states[goal].cost;
    if cost.is_infinite() {
        return Err(Error::BrokenParentChain("goal was never reached".into()));
    }
    let mut ids = vec![goal];
    let mut at = goal;
    while at != start {
        let parent = states[at]
            .parent
            .ok_or_else(|| Error::BrokenParentChain(format!("vertex {at} has no parent")))?;
        if parent >= states.len() {
            return Err(Error::BrokenParentChain(format!(
                "vertex {at} points to missing vertex {parent}"
            )));
        }
        ids.push(parent);
        if ids.len() > samples.len() {
            return Err(Error::BrokenParentChain(format!(
                "cycle through vertex {parent}"
            )));
        }
        at = parent;
    }
    ids.reverse();
    let vertices = ids.iter().map(|&i| samples.point(i).to_vec()).collect();
    Ok(PlanPath {
        ids,
        vertices,
        cost,
    })
}

/// Recomputes the bottleneck cost of `path` from scratch: the maximum over
/// every vertex and every sampled edge.
pub fn path_cost(map: &dyn CostMap, path: &PlanPath, h: f64) -> Result<Cost> {
    vertices_cost(map, &path.vertices, h)
}

pub fn vertices_cost(map: &dyn CostMap, vertices: &[Vec<f64>], h: f64) -> Result<Cost> {
    let mut worst = Cost::of(f64::NEG_INFINITY);
    for v in vertices {
        worst = worst.max(checked_eval(map, v)?);
    }
    for w in vertices.windows(2) {
        worst = worst.max(edge_cost(map, &w[0], &w[1], h)?);
    }
    Ok(worst)
}
