//! Cost maps over the parameter cube `[0,1]^d` and edge-cost evaluation.
//!
//! Every concrete map implements [`CostMap`]. Maps are built from a
//! [`ScenarioConfig`] by the builder registered under the scenario's kind in
//! a [`CostMapRegistry`], so the planner never needs to know which problem it
//! is solving.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cost::Cost;
use crate::error::{Error, Result};
use crate::geometry::{dist, visible, Point2, Polyline, WallSet};
use crate::scenarios::ScenarioConfig;

/// Default edge-sampling resolution, in parameter-space units.
pub const DEFAULT_RESOLUTION: f64 = 0.01;

/// A deterministic map from `[0,1]^d` to `ℝ ∪ {+∞}`.
///
/// Implementations must be pure: the planner and the oracles rely on
/// identical inputs producing identical outputs, and may call `eval` from
/// several threads at once. Returning NaN is a contract violation and is
/// surfaced as [`Error::NanCost`] by [`checked_eval`].
pub trait CostMap: Send + Sync {
    fn dimension(&self) -> usize;

    fn eval(&self, point: &[f64]) -> f64;

    fn name(&self) -> &str {
        "costmap"
    }
}

impl fmt::Debug for dyn CostMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(d={})", self.name(), self.dimension())
    }
}

pub fn checked_eval(map: &dyn CostMap, point: &[f64]) -> Result<Cost> {
    let v = map.eval(point);
    if v.is_nan() {
        return Err(Error::NanCost {
            point: point.to_vec(),
        });
    }
    Ok(Cost::of(v))
}

/// Number of subdivisions used to sample the segment `[z, x]` at
/// resolution `h`.
pub fn subdivisions(z: &[f64], x: &[f64], h: f64) -> usize {
    let len = euclidean(z, x);
    (len / h).ceil() as usize
}

pub(crate) fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(p, q)| (p - q) * (p - q))
        .sum::<f64>()
        .sqrt()
}

/// Fills `out` with the `i`-th of `k + 1` evenly spaced points on `[z, x]`.
///
/// Written as `(z·(k−i) + x·i) / k` so that swapping the endpoints and the
/// index yields bit-identical points, and so that the points at `k` are a
/// subset of the points at `2k`.
fn lerp_into(out: &mut [f64], z: &[f64], x: &[f64], i: usize, k: usize) {
    // z·k/k can differ from z in the last bit
    if i == 0 {
        out.copy_from_slice(z);
        return;
    }
    if i == k {
        out.copy_from_slice(x);
        return;
    }
    let (a, b, k) = ((k - i) as f64, i as f64, k as f64);
    for ((o, zc), xc) in out.iter_mut().zip(z).zip(x) {
        *o = (zc * a + xc * b) / k;
    }
}

/// Maximum of the map over `k + 1` evenly spaced samples of the segment
/// `[z, x]` (endpoints included), `k = ceil(‖z − x‖ / h)`.
pub fn edge_cost(map: &dyn CostMap, z: &[f64], x: &[f64], h: f64) -> Result<Cost> {
    let mut evals = 0;
    Ok(edge_cost_below(map, z, x, h, Cost::INFINITY, &mut evals)?.unwrap_or(Cost::INFINITY))
}

/// Like [`edge_cost`] but gives up as soon as a sample reaches `bound`,
/// returning `None`. When it returns `Some`, the value is the full edge cost.
/// `evals` is incremented once per map evaluation.
///
/// With `bound = +∞` an edge whose cost is `+∞` also yields `None`.
pub fn edge_cost_below(
    map: &dyn CostMap,
    z: &[f64],
    x: &[f64],
    h: f64,
    bound: Cost,
    evals: &mut u64,
) -> Result<Option<Cost>> {
    debug_assert!(h > 0.0);
    let k = subdivisions(z, x, h);
    if k == 0 {
        *evals += 1;
        let c = checked_eval(map, z)?;
        return Ok((c < bound).then_some(c));
    }
    let mut buf = vec![0.0; z.len()];
    let mut worst = Cost::of(f64::NEG_INFINITY);
    // endpoints first: they are the likeliest to exceed a bound
    for i in std::iter::once(k).chain(0..k) {
        lerp_into(&mut buf, z, x, i, k);
        *evals += 1;
        let c = checked_eval(map, &buf)?;
        if c >= bound {
            return Ok(None);
        }
        worst = worst.max(c);
    }
    Ok(Some(worst))
}

/// Closed-form maps used as fixtures and for oracle cross-checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum AnalyticSpec {
    Constant {
        value: f64,
    },
    /// `x[index]`
    Coordinate {
        index: usize,
    },
    /// `Σ x_i`
    Sum,
    /// `1 − |2·x[index] − 1|`, peaking at the middle of the axis.
    Tent {
        index: usize,
    },
    /// `base + Σ height·exp(−‖x − center‖² / (2·width²))`, and `+∞` inside
    /// every obstacle ball.
    Bumps {
        base: f64,
        #[serde(default)]
        bumps: Vec<Bump>,
        #[serde(default)]
        obstacles: Vec<Obstacle>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub center: Vec<f64>,
    pub width: f64,
    pub height: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Obstacle {
    pub center: Vec<f64>,
    pub radius: f64,
}

#[derive(Debug, Clone)]
pub struct AnalyticCostMap {
    dim: usize,
    spec: AnalyticSpec,
}

impl AnalyticCostMap {
    pub fn new(dim: usize, spec: AnalyticSpec) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        let check_index = |index: usize| {
            if index >= dim {
                Err(Error::InvalidArgument(format!(
                    "coordinate index {index} out of range for d={dim}"
                )))
            } else {
                Ok(())
            }
        };
        match &spec {
            AnalyticSpec::Coordinate { index } | AnalyticSpec::Tent { index } => {
                check_index(*index)?
            }
            AnalyticSpec::Constant { value } if value.is_nan() => {
                return Err(Error::InvalidArgument("constant is NaN".into()))
            }
            AnalyticSpec::Bumps {
                bumps, obstacles, ..
            } => {
                let bad = bumps
                    .iter()
                    .any(|b| b.center.len() != dim || b.width <= 0.0)
                    || obstacles.iter().any(|o| o.center.len() != dim);
                if bad {
                    return Err(Error::InvalidArgument(
                        "bump or obstacle does not match the dimension".into(),
                    ));
                }
            }
            _ => {}
        }
        Ok(AnalyticCostMap { dim, spec })
    }

    pub fn constant(dim: usize, value: f64) -> Self {
        Self::new(dim, AnalyticSpec::Constant { value }).expect("valid constant map")
    }

    pub fn spec(&self) -> &AnalyticSpec {
        &self.spec
    }
}

impl CostMap for AnalyticCostMap {
    fn dimension(&self) -> usize {
        self.dim
    }

    fn name(&self) -> &str {
        "analytic"
    }

    fn eval(&self, p: &[f64]) -> f64 {
        match &self.spec {
            AnalyticSpec::Constant { value } => *value,
            AnalyticSpec::Coordinate { index } => p[*index],
            AnalyticSpec::Sum => p.iter().sum(),
            AnalyticSpec::Tent { index } => 1.0 - (2.0 * p[*index] - 1.0).abs(),
            AnalyticSpec::Bumps {
                base,
                bumps,
                obstacles,
            } => {
                if obstacles
                    .iter()
                    .any(|o| euclidean(&o.center, p) <= o.radius)
                {
                    return f64::INFINITY;
                }
                bumps.iter().fold(*base, |acc, b| {
                    let d2: f64 = b.center.iter().zip(p).map(|(c, x)| (c - x) * (c - x)).sum();
                    acc + b.height * (-d2 / (2.0 * b.width * b.width)).exp()
                })
            }
        }
    }
}

fn traversal_points(curves: &[Polyline], tau: &[f64]) -> Vec<Point2> {
    curves
        .iter()
        .zip(tau)
        .map(|(c, &t)| c.eval_unchecked(t))
        .collect()
}

fn require_curves(curves: &[Polyline], min: usize, what: &str) -> Result<()> {
    if curves.len() < min {
        return Err(Error::Validation(format!(
            "{what} needs at least {min} curves, got {}",
            curves.len()
        )));
    }
    Ok(())
}

/// Fréchet matching: the largest pairwise distance among the traversal
/// points `σ_i(τ_i)`.
#[derive(Debug, Clone)]
pub struct FrechetCostMap {
    curves: Vec<Polyline>,
}

impl FrechetCostMap {
    pub fn new(curves: Vec<Polyline>) -> Result<Self> {
        require_curves(&curves, 2, "frechet")?;
        Ok(FrechetCostMap { curves })
    }

    pub fn curves(&self) -> &[Polyline] {
        &self.curves
    }
}

impl CostMap for FrechetCostMap {
    fn dimension(&self) -> usize {
        self.curves.len()
    }

    fn name(&self) -> &str {
        "frechet"
    }

    fn eval(&self, tau: &[f64]) -> f64 {
        let pts = traversal_points(&self.curves, tau);
        let mut worst = 0.0f64;
        for (i, &a) in pts.iter().enumerate() {
            for &b in &pts[i + 1..] {
                worst = worst.max(dist(a, b));
            }
        }
        worst
    }
}

/// Safest coordination: the reciprocal of the smallest pairwise distance,
/// `+∞` when two agents coincide.
#[derive(Debug, Clone)]
pub struct SafestCoordCostMap {
    curves: Vec<Polyline>,
}

impl SafestCoordCostMap {
    pub fn new(curves: Vec<Polyline>) -> Result<Self> {
        require_curves(&curves, 2, "safest")?;
        Ok(SafestCoordCostMap { curves })
    }

    pub fn curves(&self) -> &[Polyline] {
        &self.curves
    }

    pub fn min_separation(&self, tau: &[f64]) -> f64 {
        let pts = traversal_points(&self.curves, tau);
        let mut closest = f64::INFINITY;
        for (i, &a) in pts.iter().enumerate() {
            for &b in &pts[i + 1..] {
                closest = closest.min(dist(a, b));
            }
        }
        closest
    }
}

impl CostMap for SafestCoordCostMap {
    fn dimension(&self) -> usize {
        self.curves.len()
    }

    fn name(&self) -> &str {
        "safest"
    }

    fn eval(&self, tau: &[f64]) -> f64 {
        let closest = self.min_separation(tau);
        if closest == 0.0 {
            f64::INFINITY
        } else {
            1.0 / closest
        }
    }
}

/// Leader following. Coordinate 0 drives the leader; coordinates `1..d`
/// drive the followers. The cost is the distance from the leader to its
/// closest follower that can see it, `+∞` when none can.
#[derive(Debug, Clone)]
pub struct LeaderFollowCostMap {
    leader: Polyline,
    followers: Vec<Polyline>,
    walls: WallSet,
}

impl LeaderFollowCostMap {
    pub fn new(leader: Polyline, followers: Vec<Polyline>, walls: WallSet) -> Result<Self> {
        if followers.is_empty() {
            return Err(Error::Validation(
                "leader needs at least one follower".into(),
            ));
        }
        Ok(LeaderFollowCostMap {
            leader,
            followers,
            walls,
        })
    }

    pub fn walls(&self) -> &WallSet {
        &self.walls
    }

    /// Indices (into the followers) of the followers that see the leader.
    pub fn visible_followers(&self, tau: &[f64]) -> Vec<usize> {
        let lead = self.leader.eval_unchecked(tau[0]);
        self.followers
            .iter()
            .zip(&tau[1..])
            .enumerate()
            .filter(|(_, (f, &t))| visible(lead, f.eval_unchecked(t), &self.walls))
            .map(|(i, _)| i)
            .collect()
    }
}

impl CostMap for LeaderFollowCostMap {
    fn dimension(&self) -> usize {
        1 + self.followers.len()
    }

    fn name(&self) -> &str {
        "leader"
    }

    fn eval(&self, tau: &[f64]) -> f64 {
        let lead = self.leader.eval_unchecked(tau[0]);
        self.followers
            .iter()
            .zip(&tau[1..])
            .map(|(f, &t)| f.eval_unchecked(t))
            .filter(|&p| visible(lead, p, &self.walls))
            .map(|p| dist(lead, p))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Builds a cost map for one scenario kind.
pub trait CostMapBuilder: Send + Sync {
    fn build(&self, cfg: &ScenarioConfig) -> Result<Arc<dyn CostMap>>;
}

impl<F> CostMapBuilder for F
where
    F: Fn(&ScenarioConfig) -> Result<Arc<dyn CostMap>> + Send + Sync,
{
    fn build(&self, cfg: &ScenarioConfig) -> Result<Arc<dyn CostMap>> {
        self(cfg)
    }
}

/// Cost-map builders keyed by scenario kind.
pub struct CostMapRegistry {
    builders: BTreeMap<String, Box<dyn CostMapBuilder>>,
}

impl CostMapRegistry {
    pub fn empty() -> Self {
        CostMapRegistry {
            builders: BTreeMap::new(),
        }
    }

    /// Registry holding the four built-in kinds.
    pub fn with_defaults() -> Self {
        let mut reg = Self::empty();
        reg.register("frechet", |cfg: &ScenarioConfig| {
            let m = FrechetCostMap::new(cfg.polylines()?)?;
            Ok(Arc::new(m) as Arc<dyn CostMap>)
        });
        reg.register("safest", |cfg: &ScenarioConfig| {
            let m = SafestCoordCostMap::new(cfg.polylines()?)?;
            Ok(Arc::new(m) as Arc<dyn CostMap>)
        });
        reg.register("leader", |cfg: &ScenarioConfig| {
            let mut curves = cfg.polylines()?;
            require_curves(&curves, 2, "leader")?;
            let followers = curves.split_off(1);
            let leader = curves.pop().expect("one curve left");
            let m = LeaderFollowCostMap::new(leader, followers, cfg.wall_set()?)?;
            Ok(Arc::new(m) as Arc<dyn CostMap>)
        });
        reg.register("analytic", |cfg: &ScenarioConfig| {
            let spec = cfg.analytic.clone().ok_or_else(|| Error::Parse {
                field: "analytic".into(),
                message: "analytic scenarios need an `analytic` object".into(),
            })?;
            Ok(Arc::new(AnalyticCostMap::new(cfg.d, spec)?) as Arc<dyn CostMap>)
        });
        reg
    }

    pub fn register(&mut self, kind: &str, builder: impl CostMapBuilder + 'static) {
        self.builders.insert(kind.to_string(), Box::new(builder));
    }

    pub fn kinds(&self) -> impl Iterator<Item = &str> {
        self.builders.keys().map(String::as_str)
    }

    pub fn build(&self, cfg: &ScenarioConfig) -> Result<Arc<dyn CostMap>> {
        let kind = cfg.kind.as_str();
        let builder = self
            .builders
            .get(kind)
            .ok_or_else(|| Error::UnknownKind(kind.to_string()))?;
        let map = builder.build(cfg)?;
        if map.dimension() != cfg.d {
            return Err(Error::DimensionMismatch {
                expected: cfg.d,
                actual: map.dimension(),
            });
        }
        Ok(map)
    }
}

impl Default for CostMapRegistry {
    fn default() -> Self {
        Self::with_defaults()
    }
}
