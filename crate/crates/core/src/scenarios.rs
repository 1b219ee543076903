//! Scenario documents and the built-in matching, leader-following and
//! safest-coordination instances.
//!
//! A scenario is a JSON object:
//!
//! ```json
//! {
//!   "kind": "frechet",
//!   "d": 2,
//!   "curves": [[[0.0, 0.0], [1.0, 0.0]], [[0.0, 0.1], [1.0, 0.1]]],
//!   "walls": [[[0.5, -1.0], [0.5, 1.0]]],
//!   "notes": "free text",
//!   "parameterization": "arc_length"
//! }
//! ```
//!
//! `analytic` scenarios carry an `analytic` object instead of curves (see
//! [`AnalyticSpec`]).

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::costmap::{AnalyticSpec, CostMap, CostMapRegistry};
use crate::error::{Error, Result};
use crate::geometry::{Point2, Polyline, WallSet};

pub const ARC_LENGTH: &str = "arc_length";

/// Segments per full circle when loops are written out as polygons.
pub const CIRCLE_SEGMENTS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioKind {
    Frechet,
    Leader,
    Safest,
    Analytic,
}

impl ScenarioKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioKind::Frechet => "frechet",
            ScenarioKind::Leader => "leader",
            ScenarioKind::Safest => "safest",
            ScenarioKind::Analytic => "analytic",
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub kind: ScenarioKind,
    pub d: usize,
    #[serde(default)]
    pub curves: Vec<Vec<Point2>>,
    #[serde(default)]
    pub walls: Vec<[Point2; 2]>,
    #[serde(default)]
    pub notes: String,
    #[serde(default = "arc_length")]
    pub parameterization: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub analytic: Option<AnalyticSpec>,
}

fn arc_length() -> String {
    ARC_LENGTH.to_string()
}

const FIELDS: &[&str] = &[
    "kind",
    "d",
    "curves",
    "walls",
    "notes",
    "parameterization",
    "analytic",
];

fn field<T: DeserializeOwned>(obj: &mut Map<String, Value>, name: &str) -> Result<Option<T>> {
    match obj.remove(name) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => serde_json::from_value(v)
            .map(Some)
            .map_err(|e| Error::Parse {
                field: name.to_string(),
                message: e.to_string(),
            }),
    }
}

fn required<T: DeserializeOwned>(obj: &mut Map<String, Value>, name: &str) -> Result<T> {
    field(obj, name)?.ok_or_else(|| Error::Parse {
        field: name.to_string(),
        message: "missing required field".into(),
    })
}

impl ScenarioConfig {
    /// Parses and validates a scenario document.
    pub fn load(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
            field: "<document>".into(),
            message: e.to_string(),
        })?;
        let Value::Object(mut obj) = value else {
            return Err(Error::Parse {
                field: "<document>".into(),
                message: "expected a JSON object".into(),
            });
        };
        if let Some(extra) = obj.keys().find(|k| !FIELDS.contains(&k.as_str())) {
            return Err(Error::Parse {
                field: extra.clone(),
                message: "unknown field".into(),
            });
        }
        let cfg = ScenarioConfig {
            kind: required(&mut obj, "kind")?,
            d: required(&mut obj, "d")?,
            curves: field(&mut obj, "curves")?.unwrap_or_default(),
            walls: field(&mut obj, "walls")?.unwrap_or_default(),
            notes: field(&mut obj, "notes")?.unwrap_or_default(),
            parameterization: field(&mut obj, "parameterization")?.unwrap_or_else(arc_length),
            analytic: field(&mut obj, "analytic")?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn save(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    /// Arity and consistency rules for the scenario's kind.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Validation(msg));
        if self.parameterization != ARC_LENGTH {
            return fail(format!(
                "unsupported parameterization `{}` (only `{ARC_LENGTH}`)",
                self.parameterization
            ));
        }
        if self.d < 2 {
            return fail(format!("d must be at least 2, got {}", self.d));
        }
        if self.curves.iter().any(Vec::is_empty) {
            return fail("every curve needs at least one vertex".into());
        }
        let all_points = self
            .curves
            .iter()
            .flatten()
            .chain(self.walls.iter().flatten());
        if all_points
            .clone()
            .any(|p| !p.x.is_finite() || !p.y.is_finite())
        {
            return fail("coordinates must be finite".into());
        }
        if self.walls.iter().any(|[a, b]| a == b) {
            return fail("walls need two distinct endpoints".into());
        }
        match self.kind {
            ScenarioKind::Frechet | ScenarioKind::Safest | ScenarioKind::Leader => {
                if self.curves.len() < 2 {
                    return fail(format!(
                        "{} scenarios need at least 2 curves, got {}",
                        self.kind,
                        self.curves.len()
                    ));
                }
                if self.d != self.curves.len() {
                    return fail(format!(
                        "d = {} but the scenario has {} curves",
                        self.d,
                        self.curves.len()
                    ));
                }
                if self.kind != ScenarioKind::Leader && !self.walls.is_empty() {
                    return fail(format!("{} scenarios take no walls", self.kind));
                }
                if self.analytic.is_some() {
                    return fail(format!("{} scenarios take no analytic map", self.kind));
                }
            }
            ScenarioKind::Analytic => {
                if self.analytic.is_none() {
                    return fail("analytic scenarios need an `analytic` object".into());
                }
                if !self.curves.is_empty() || !self.walls.is_empty() {
                    return fail("analytic scenarios take no curves or walls".into());
                }
            }
        }
        Ok(())
    }

    pub fn polylines(&self) -> Result<Vec<Polyline>> {
        self.curves
            .iter()
            .map(|c| Polyline::new(c.clone()))
            .collect()
    }

    pub fn wall_set(&self) -> Result<WallSet> {
        WallSet::new(self.walls.iter().map(|[a, b]| (*a, *b)).collect())
    }

    /// Builds the cost map with the default registry.
    pub fn cost_map(&self) -> Result<Arc<dyn CostMap>> {
        CostMapRegistry::with_defaults().build(self)
    }
}

pub fn load_scenario(text: &str) -> Result<ScenarioConfig> {
    ScenarioConfig::load(text)
}

pub fn save_scenario(cfg: &ScenarioConfig) -> String {
    cfg.save()
}

// Matching instance: loop radius, gap between the two baselines, and the
// horizontal layout of the loops.
const LOOP_RADIUS: f64 = 0.15;
const BASELINE_GAP: f64 = 0.04;
const LOOPS: usize = 5;
const FIRST_LOOP_X: f64 = 0.3;
const LOOP_PITCH: f64 = 0.3;
const LOOP_STAGGER: f64 = 0.1;
const ROUTE_END_X: f64 = 1.8;

/// A horizontal route at height `y`, heading right, that makes one full
/// loop at each `x` in `loops`. Each loop is tangent to the route at the
/// point where it is entered and left; `side` is +1 for loops above the
/// route (turning counter-clockwise) and -1 for loops below (clockwise).
fn looped_route(y: f64, side: f64, loops: &[f64], start_x: f64, end_x: f64) -> Vec<Point2> {
    let mut pts = vec![Point2::new(start_x, y)];
    for &x in loops {
        let tangent = Point2::new(x, y);
        let center = Point2::new(x, y + side * LOOP_RADIUS);
        let start_angle = -side * PI / 2.0;
        pts.push(tangent);
        for k in 1..CIRCLE_SEGMENTS {
            let a = start_angle + side * 2.0 * PI * k as f64 / CIRCLE_SEGMENTS as f64;
            pts.push(Point2::new(
                center.x + LOOP_RADIUS * a.cos(),
                center.y + LOOP_RADIUS * a.sin(),
            ));
        }
        pts.push(tangent);
    }
    pts.push(Point2::new(end_x, y));
    pts
}

/// The two-curve matching routes. The red route has its loops above its
/// baseline; the blue route is the red one mirrored below a baseline
/// `BASELINE_GAP` lower and shifted `LOOP_STAGGER` to the right.
pub fn p1_curves() -> (Vec<Point2>, Vec<Point2>) {
    let red_loops: Vec<f64> = (0..LOOPS)
        .map(|i| FIRST_LOOP_X + LOOP_PITCH * i as f64)
        .collect();
    let blue_loops: Vec<f64> = red_loops.iter().map(|x| x + LOOP_STAGGER).collect();
    let half = BASELINE_GAP / 2.0;
    let red = looped_route(half, 1.0, &red_loops, 0.0, ROUTE_END_X);
    let blue = looped_route(
        -half,
        -1.0,
        &blue_loops,
        LOOP_STAGGER,
        ROUTE_END_X + LOOP_STAGGER,
    );
    (red, blue)
}

/// Fréchet matching over two interleaved five-loop routes, with an extra
/// copy of the blue route for `d = 3` and of the red route for `d = 4`.
pub fn build_p1(d: usize) -> Result<ScenarioConfig> {
    if !(2..=4).contains(&d) {
        return Err(Error::InvalidArgument(format!(
            "the matching scenario exists for d in {{2, 3, 4}}, got {d}"
        )));
    }
    let (red, blue) = p1_curves();
    let curves = [red.clone(), blue.clone(), blue, red]
        .into_iter()
        .take(d)
        .collect();
    Ok(ScenarioConfig {
        kind: ScenarioKind::Frechet,
        d,
        curves,
        walls: vec![],
        notes: format!(
            "reconstruction: two routes with {LOOPS} loops of radius {LOOP_RADIUS}, baselines \
             {BASELINE_GAP} apart, loops tangent to the baseline at entry/exit; red loops above \
             (counter-clockwise), blue route is the red one mirrored and shifted {LOOP_STAGGER} \
             right; circles as {CIRCLE_SEGMENTS}-segment polygons; curves ordered red, blue, \
             blue, red"
        ),
        parameterization: arc_length(),
        analytic: None,
    })
}

fn pt(x: f64, y: f64) -> Point2 {
    Point2::new(x, y)
}

fn horizontal_wall(y: f64, x0: f64, x1: f64) -> [Point2; 2] {
    [pt(x0, y), pt(x1, y)]
}

/// Leader following: the leader moves along `y = 0`, the red follower along
/// `y = 0.5` and the blue follower along `y = −0.5`. Pairs of walls line the
/// leader's route and each follower's route at staggered stretches.
pub fn build_p2() -> ScenarioConfig {
    let leader = vec![pt(0.0, 0.0), pt(4.0, 0.0)];
    let red = vec![pt(-0.2, 0.5), pt(4.2, 0.5)];
    let blue = vec![pt(-0.2, -0.5), pt(4.2, -0.5)];
    let mut walls = Vec::new();
    for (x0, x1) in [(0.8, 1.2), (2.4, 2.8)] {
        walls.push(horizontal_wall(0.2, x0, x1));
        walls.push(horizontal_wall(-0.2, x0, x1));
    }
    for y in [0.35, 0.65] {
        walls.push(horizontal_wall(y, 1.6, 2.0));
    }
    for y in [-0.35, -0.65] {
        walls.push(horizontal_wall(y, 3.2, 3.6));
    }
    ScenarioConfig {
        kind: ScenarioKind::Leader,
        d: 3,
        curves: vec![leader, red, blue],
        walls,
        notes: "reconstruction: leader on y=0 (coordinate 1), followers on y=+0.5 and y=-0.5; \
                wall pairs around the leader route at x in [0.8,1.2] and [2.4,2.8], around \
                the red route at [1.6,2.0], around the blue route at [3.2,3.6]"
            .into(),
        parameterization: arc_length(),
        analytic: None,
    }
}

/// Adds a closed box around the leader's whole route, which hides it from
/// every follower at every time.
pub fn enclose_leader(cfg: &mut ScenarioConfig) {
    let (mut lo, mut hi) = (
        pt(f64::INFINITY, f64::INFINITY),
        pt(f64::NEG_INFINITY, f64::NEG_INFINITY),
    );
    for p in &cfg.curves[0] {
        lo = pt(lo.x.min(p.x), lo.y.min(p.y));
        hi = pt(hi.x.max(p.x), hi.y.max(p.y));
    }
    let m = 0.1;
    let corners = [
        pt(lo.x - m, lo.y - m),
        pt(hi.x + m, lo.y - m),
        pt(hi.x + m, hi.y + m),
        pt(lo.x - m, hi.y + m),
    ];
    for i in 0..4 {
        cfg.walls.push([corners[i], corners[(i + 1) % 4]]);
    }
    cfg.notes.push_str("; leader enclosed by a box");
}

/// Safest coordination of seven agents crossing a square intersection:
/// four straight through-routes offset from the center, one turning route
/// and two diagonals.
pub fn build_p3() -> ScenarioConfig {
    let curves = vec![
        vec![pt(-1.0, -0.1), pt(1.0, -0.1)],
        vec![pt(1.0, 0.1), pt(-1.0, 0.1)],
        vec![pt(0.1, -1.0), pt(0.1, 1.0)],
        vec![pt(-0.1, 1.0), pt(-0.1, -1.0)],
        vec![pt(0.3, -1.0), pt(0.3, -0.2), pt(-0.2, 0.3), pt(-1.0, 0.3)],
        vec![pt(-1.0, -0.95), pt(0.95, 1.0)],
        vec![pt(1.0, -0.7), pt(-0.8, 1.0)],
    ];
    ScenarioConfig {
        kind: ScenarioKind::Safest,
        d: 7,
        curves,
        walls: vec![],
        notes: "reconstruction: seven routes through an intersection in [-1,1]^2".into(),
        parameterization: arc_length(),
        analytic: None,
    }
}
