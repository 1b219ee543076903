//! Planar workspace primitives: points, arc-length parameterized polylines,
//! closed-segment intersection and wall visibility.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }

    fn cross(self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }
}

impl From<[f64; 2]> for Point2 {
    fn from([x, y]: [f64; 2]) -> Self {
        Point2 { x, y }
    }
}

impl From<Point2> for [f64; 2] {
    fn from(p: Point2) -> Self {
        [p.x, p.y]
    }
}

pub fn dist(p: Point2, q: Point2) -> f64 {
    (p.x - q.x).hypot(p.y - q.y)
}

/// A route in the plane, traversed at constant speed: parameter `t` is the
/// fraction of total arc length covered.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    vertices: Vec<Point2>,
    cumulative: Vec<f64>,
}

impl Polyline {
    pub fn new(vertices: Vec<Point2>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidArgument(
                "a polyline needs at least one vertex".into(),
            ));
        }
        if let Some(p) = vertices
            .iter()
            .find(|p| !p.x.is_finite() || !p.y.is_finite())
        {
            return Err(Error::InvalidArgument(format!(
                "non-finite polyline vertex ({}, {})",
                p.x, p.y
            )));
        }
        let mut cumulative = Vec::with_capacity(vertices.len());
        let mut acc = 0.0;
        cumulative.push(acc);
        for w in vertices.windows(2) {
            acc += dist(w[0], w[1]);
            cumulative.push(acc);
        }
        Ok(Polyline {
            vertices,
            cumulative,
        })
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn cumulative_lengths(&self) -> &[f64] {
        &self.cumulative
    }

    pub fn total_length(&self) -> f64 {
        *self.cumulative.last().expect("non-empty")
    }

    /// Point at arc-length fraction `t`. Rejects `t` outside `[0, 1]`.
    pub fn eval(&self, t: f64) -> Result<Point2> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::ParameterOutOfRange { value: t });
        }
        Ok(self.eval_unchecked(t))
    }

    /// Same as [`Polyline::eval`] for callers that already hold `t ∈ [0,1]`.
    pub(crate) fn eval_unchecked(&self, t: f64) -> Point2 {
        let total = self.total_length();
        if total == 0.0 || t <= 0.0 {
            return self.vertices[0];
        }
        if t >= 1.0 {
            return *self.vertices.last().expect("non-empty");
        }
        let s = t * total;
        // first k with cumulative[k] > s; segment is [k-1, k]
        let k = self.cumulative.partition_point(|&c| c <= s);
        let k = k.clamp(1, self.vertices.len() - 1);
        let (a, b) = (self.vertices[k - 1], self.vertices[k]);
        let seg = self.cumulative[k] - self.cumulative[k - 1];
        if seg == 0.0 {
            return a;
        }
        let u = ((s - self.cumulative[k - 1]) / seg).clamp(0.0, 1.0);
        Point2::new(a.x + (b.x - a.x) * u, a.y + (b.y - a.y) * u)
    }
}

/// Free-function form of [`Polyline::eval`].
pub fn polyline_eval(curve: &Polyline, t: f64) -> Result<Point2> {
    curve.eval(t)
}

fn orientation(a: Point2, b: Point2, c: Point2) -> f64 {
    b.sub(a).cross(c.sub(a))
}

fn on_segment(a: Point2, b: Point2, p: Point2) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Closed-segment intersection: touching endpoints and collinear overlap
/// both count.
pub fn segments_intersect(a1: Point2, a2: Point2, b1: Point2, b2: Point2) -> bool {
    let d1 = orientation(b1, b2, a1);
    let d2 = orientation(b1, b2, a2);
    let d3 = orientation(a1, a2, b1);
    let d4 = orientation(a1, a2, b2);

    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(b1, b2, a1))
        || (d2 == 0.0 && on_segment(b1, b2, a2))
        || (d3 == 0.0 && on_segment(a1, a2, b1))
        || (d4 == 0.0 && on_segment(a1, a2, b2))
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct WallSet {
    segments: Vec<(Point2, Point2)>,
}

impl WallSet {
    pub fn new(segments: Vec<(Point2, Point2)>) -> Result<Self> {
        if let Some((a, _)) = segments.iter().find(|(a, b)| a == b) {
            return Err(Error::InvalidArgument(format!(
                "degenerate wall at ({}, {})",
                a.x, a.y
            )));
        }
        Ok(WallSet { segments })
    }

    pub fn segments(&self) -> &[(Point2, Point2)] {
        &self.segments
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn push(&mut self, a: Point2, b: Point2) -> Result<()> {
        if a == b {
            return Err(Error::InvalidArgument("degenerate wall".into()));
        }
        self.segments.push((a, b));
        Ok(())
    }
}

/// True iff the segment `pq` meets no wall. A degenerate `p == q` is
/// tested as a point against each wall.
pub fn visible(p: Point2, q: Point2, walls: &WallSet) -> bool {
    walls.segments.iter().all(|&(a, b)| {
        if p == q {
            !(orientation(a, b, p) == 0.0 && on_segment(a, b, p))
        } else {
            !segments_intersect(p, q, a, b)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pt(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    fn line(pts: &[(f64, f64)]) -> Polyline {
        Polyline::new(pts.iter().map(|&(x, y)| pt(x, y)).collect()).unwrap()
    }

    #[test]
    fn eval_endpoints_and_midpoint() {
        let c = line(&[(0.0, 0.0), (1.0, 0.0)]);
        assert_eq!(c.eval(0.0).unwrap(), pt(0.0, 0.0));
        assert_eq!(c.eval(1.0).unwrap(), pt(1.0, 0.0));

        let bent = line(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0)]);
        assert_eq!(bent.total_length(), 2.0);
        assert_eq!(bent.eval(0.5).unwrap(), pt(1.0, 0.0));
        assert_eq!(bent.eval(0.75).unwrap(), pt(1.0, 0.5));
    }

    #[test]
    fn eval_rejects_out_of_range() {
        let c = line(&[(0.0, 0.0), (1.0, 0.0)]);
        assert!(c.eval(-0.01).is_err());
        assert!(c.eval(1.01).is_err());
        assert!(c.eval(f64::NAN).is_err());
    }

    #[test]
    fn stationary_curve() {
        let c = line(&[(0.3, 0.4)]);
        assert_eq!(c.total_length(), 0.0);
        for t in [0.0, 0.2, 1.0] {
            assert_eq!(c.eval(t).unwrap(), pt(0.3, 0.4));
        }
    }

    #[test]
    fn repeated_vertices_are_harmless() {
        let c = line(&[(0.0, 0.0), (0.0, 0.0), (2.0, 0.0), (2.0, 0.0)]);
        assert_eq!(c.eval(0.5).unwrap(), pt(1.0, 0.0));
        assert_eq!(c.eval(1.0).unwrap(), pt(2.0, 0.0));
    }

    #[test]
    fn empty_polyline_rejected() {
        assert!(Polyline::new(vec![]).is_err());
    }

    #[test]
    fn intersection_cases() {
        assert!(segments_intersect(
            pt(0., 0.),
            pt(1., 1.),
            pt(0., 1.),
            pt(1., 0.)
        ));
        assert!(!segments_intersect(
            pt(0., 0.),
            pt(1., 0.),
            pt(0., 1.),
            pt(1., 1.)
        ));
        assert!(segments_intersect(
            pt(0., 0.),
            pt(1., 0.),
            pt(1., 0.),
            pt(2., 0.)
        ));
        // collinear overlap and collinear disjoint
        assert!(segments_intersect(
            pt(0., 0.),
            pt(2., 0.),
            pt(1., 0.),
            pt(3., 0.)
        ));
        assert!(!segments_intersect(
            pt(0., 0.),
            pt(1., 0.),
            pt(2., 0.),
            pt(3., 0.)
        ));
        // T-junction
        assert!(segments_intersect(
            pt(0., 0.),
            pt(2., 0.),
            pt(1., 0.),
            pt(1., 1.)
        ));
    }

    #[test]
    fn visibility_cases() {
        let none = WallSet::default();
        assert!(visible(pt(0., 0.), pt(1., 0.), &none));

        let wall = WallSet::new(vec![(pt(1., -1.), pt(1., 1.))]).unwrap();
        assert!(!visible(pt(0., 0.), pt(2., 0.), &wall));
        assert!(visible(pt(0., 0.), pt(0., 2.), &wall));
        assert!(visible(pt(0., 0.), pt(0., 0.), &wall));
        assert!(!visible(pt(1., 0.), pt(1., 0.), &wall));
    }

    #[test]
    fn degenerate_wall_rejected() {
        assert!(WallSet::new(vec![(pt(1., 1.), pt(1., 1.))]).is_err());
    }

    #[test]
    fn distances() {
        assert_eq!(dist(pt(0., 0.), pt(0., 0.)), 0.0);
        assert_eq!(dist(pt(0., 0.), pt(3., 4.)), 5.0);
        assert!((dist(pt(0., 0.), pt(1., 1.)) - std::f64::consts::SQRT_2).abs() < 1e-15);
    }

    fn arb_point() -> impl Strategy<Value = Point2> {
        (-5.0..5.0f64, -5.0..5.0f64).prop_map(|(x, y)| pt(x, y))
    }

    proptest! {
        #[test]
        fn eval_is_lipschitz(
            pts in prop::collection::vec(arb_point(), 1..8),
            t in 0.0..=1.0f64,
            u in 0.0..=1.0f64,
        ) {
            let c = Polyline::new(pts).unwrap();
            let gap = dist(c.eval(t).unwrap(), c.eval(u).unwrap());
            prop_assert!(gap <= c.total_length() * (t - u).abs() + 1e-9);
        }

        #[test]
        fn intersection_symmetric(a in arb_point(), b in arb_point(), c in arb_point(), d in arb_point()) {
            prop_assert_eq!(segments_intersect(a, b, c, d), segments_intersect(c, d, a, b));
        }

        #[test]
        fn visibility_symmetric(
            p in arb_point(),
            q in arb_point(),
            walls in prop::collection::vec((arb_point(), arb_point()), 0..5),
        ) {
            let walls = WallSet::new(walls.into_iter().filter(|(a, b)| a != b).collect()).unwrap();
            prop_assert_eq!(visible(p, q, &walls), visible(q, p, &walls));
        }

        #[test]
        fn triangle_inequality(a in arb_point(), b in arb_point(), c in arb_point()) {
            prop_assert!(dist(a, c) <= dist(a, b) + dist(b, c) + 1e-12);
            prop_assert_eq!(dist(a, b), dist(b, a));
        }
    }
}
