//! The implicit monotone random geometric graph: vertex sampling, the
//! connection radius, the coordinate-wise partial order and a uniform-grid
//! index for radius queries.

use std::collections::HashMap;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::function::gamma::gamma;

use crate::costmap::{euclidean, DEFAULT_RESOLUTION};
use crate::error::{Error, Result};

/// Volume of the `d`-dimensional unit Euclidean ball, `π^(d/2) / Γ(d/2 + 1)`.
pub fn unit_ball_volume(d: usize) -> f64 {
    assert!(d >= 1, "dimension must be positive");
    let half = d as f64 / 2.0;
    PI.powf(half) / gamma(half + 1.0)
}

/// `(1 + η)·2·(d·θ_d)^(−1/d)`.
pub fn radius_constant(d: usize, eta: f64) -> f64 {
    (1.0 + eta) * 2.0 * (d as f64 * unit_ball_volume(d)).powf(-1.0 / d as f64)
}

/// `γ·(ln n / n)^(1/d)` with `γ` from [`radius_constant`].
pub fn connection_radius(n: usize, d: usize, eta: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "connection radius needs n >= 2, got {n}"
        )));
    }
    if d < 1 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    if eta.is_nan() || eta <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "eta must be positive, got {eta}"
        )));
    }
    let n = n as f64;
    Ok(radius_constant(d, eta) * (n.ln() / n).powf(1.0 / d as f64))
}

/// Free parameters of one planner run.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphParams {
    pub n: usize,
    pub d: usize,
    pub eta: f64,
    pub seed: u64,
    /// Edge-sampling resolution.
    pub h: f64,
    /// Replaces the formula radius. Only meant for tests and fixtures.
    pub radius_override: Option<f64>,
}

impl GraphParams {
    pub fn new(n: usize, d: usize, seed: u64) -> Self {
        GraphParams {
            n,
            d,
            eta: 1.0,
            seed,
            h: DEFAULT_RESOLUTION,
            radius_override: None,
        }
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        self.eta = eta;
        self
    }

    pub fn with_resolution(mut self, h: f64) -> Self {
        self.h = h;
        self
    }

    pub fn with_radius(mut self, r: f64) -> Self {
        self.radius_override = Some(r);
        self
    }

    pub fn gamma(&self) -> f64 {
        radius_constant(self.d, self.eta)
    }

    pub fn radius(&self) -> Result<f64> {
        match self.radius_override {
            Some(r) => Ok(r),
            None => connection_radius(self.n, self.d, self.eta),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 2 {
            return Err(Error::InvalidArgument(format!(
                "parameter space needs d >= 2, got {}",
                self.d
            )));
        }
        if !self.h.is_finite() || self.h <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "resolution h must be positive, got {}",
                self.h
            )));
        }
        let r = self.radius()?;
        if r.is_nan() || r <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "radius must be positive, got {r}"
            )));
        }
        Ok(())
    }
}

/// `{0, 1} ∪ X_n`: the all-zeros corner at id 0, the `n` uniform samples at
/// ids `1..=n` and the all-ones corner at id `n + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    d: usize,
    coords: Vec<f64>,
}

impl SampleSet {
    /// Builds a set from explicit interior points; the corners are added.
    pub fn from_points(d: usize, interior: &[Vec<f64>]) -> Result<Self> {
        let mut coords = vec![0.0; d];
        for p in interior {
            if p.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    actual: p.len(),
                });
            }
            if p.iter().any(|c| !(0.0..=1.0).contains(c)) {
                return Err(Error::InvalidArgument(format!(
                    "point {p:?} outside the unit cube"
                )));
            }
            coords.extend_from_slice(p);
        }
        coords.extend(std::iter::repeat_n(1.0, d));
        Ok(SampleSet { d, coords })
    }

    pub fn dimension(&self) -> usize {
        self.d
    }

    /// Total number of vertices, `n + 2`.
    pub fn len(&self) -> usize {
        self.coords.len() / self.d
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn start(&self) -> usize {
        0
    }

    pub fn goal(&self) -> usize {
        self.len() - 1
    }

    pub fn point(&self, id: usize) -> &[f64] {
        &self.coords[id * self.d..(id + 1) * self.d]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.d)
    }
}

/// Draws `n` points uniformly from `[0,1]^d` with a seeded ChaCha8 stream,
/// coordinates in point-major order.
pub fn sample(n: usize, d: usize, seed: u64) -> SampleSet {
    assert!(d >= 1, "dimension must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coords = Vec::with_capacity((n + 2) * d);
    coords.extend(std::iter::repeat_n(0.0, d));
    coords.extend((0..n * d).map(|_| rng.gen::<f64>()));
    coords.extend(std::iter::repeat_n(1.0, d));
    SampleSet { d, coords }
}

fn same_dim(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            actual: y.len(),
        });
    }
    Ok(())
}

/// `x ⪯ y`: every coordinate of `x` is at most the matching one of `y`.
pub fn leq(x: &[f64], y: &[f64]) -> Result<bool> {
    same_dim(x, y)?;
    Ok(precedes(x, y))
}

/// `x ⪯_δ y`: every coordinate gap `y_i − x_i` is at least `δ`.
pub fn leq_delta(x: &[f64], y: &[f64], delta: f64) -> Result<bool> {
    same_dim(x, y)?;
    Ok(x.iter().zip(y).all(|(a, b)| b - a >= delta))
}

#[inline]
pub(crate) fn precedes(x: &[f64], y: &[f64]) -> bool {
    x.iter().zip(y).all(|(a, b)| a <= b)
}

/// Most cells a grid may address; coarser cells are used beyond this.
const MAX_CELLS: f64 = (1u64 << 40) as f64;

/// Uniform grid over `[0,1]^d` answering exact radius queries for radii up
/// to the cell size by scanning the `3^d` surrounding cells.
#[derive(Debug, Clone)]
pub struct GridIndex {
    d: usize,
    cell: f64,
    per_axis: usize,
    cells: HashMap<u64, Vec<u32>>,
    // (cell key, position inside that cell's list); None once deactivated
    slots: Vec<Option<(u64, usize)>>,
    offsets: Vec<Vec<i64>>,
}

impl GridIndex {
    /// Indexes every point of `samples` with cells of side at least `cell`.
    pub fn new(samples: &SampleSet, cell: f64) -> Result<Self> {
        if cell.is_nan() || cell <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "cell size must be positive, got {cell}"
            )));
        }
        let d = samples.dimension();
        let mut per_axis = ((1.0 / cell).floor() as usize).max(1);
        if (per_axis as f64).powi(d as i32) > MAX_CELLS {
            per_axis = MAX_CELLS.powf(1.0 / d as f64).floor() as usize;
        }
        let cell = cell.max(1.0 / per_axis as f64);

        let offsets = (0..3usize.pow(d as u32))
            .map(|mut code| {
                (0..d)
                    .map(|_| {
                        let o = (code % 3) as i64 - 1;
                        code /= 3;
                        o
                    })
                    .collect()
            })
            .collect();

        let mut index = GridIndex {
            d,
            cell,
            per_axis,
            cells: HashMap::new(),
            slots: Vec::with_capacity(samples.len()),
            offsets,
        };
        for (id, p) in samples.iter().enumerate() {
            let key = index.key(&index.cell_of(p));
            let list = index.cells.entry(key).or_default();
            index.slots.push(Some((key, list.len())));
            list.push(id as u32);
        }
        Ok(index)
    }

    pub fn cell_size(&self) -> f64 {
        self.cell
    }

    fn cell_of(&self, p: &[f64]) -> Vec<i64> {
        let top = self.per_axis as i64 - 1;
        p.iter()
            .map(|&c| ((c / self.cell).floor() as i64).clamp(0, top))
            .collect()
    }

    fn key(&self, cell: &[i64]) -> u64 {
        cell.iter()
            .rev()
            .fold(0u64, |acc, &c| acc * self.per_axis as u64 + c as u64)
    }

    pub fn is_active(&self, id: usize) -> bool {
        self.slots.get(id).is_some_and(Option::is_some)
    }

    /// Removes `id` from all later queries. Idempotent.
    pub fn deactivate(&mut self, id: usize) {
        let Some((key, pos)) = self.slots.get_mut(id).and_then(Option::take) else {
            return;
        };
        let list = self.cells.get_mut(&key).expect("cell of an active point");
        list.swap_remove(pos);
        if let Some(&moved) = list.get(pos) {
            self.slots[moved as usize] = Some((key, pos));
        }
    }

    /// Active points within distance `r` (inclusive) of point `z`, excluding
    /// `z` itself. Requires `r <= cell_size()`.
    pub fn near(&self, samples: &SampleSet, z: usize, r: f64) -> Vec<usize> {
        let mut out = Vec::new();
        self.near_into(samples, samples.point(z), Some(z), r, &mut out);
        out
    }

    /// Buffer-reusing form of [`GridIndex::near`] taking an arbitrary query
    /// point. Results are sorted by id.
    pub fn near_into(
        &self,
        samples: &SampleSet,
        query: &[f64],
        exclude: Option<usize>,
        r: f64,
        out: &mut Vec<usize>,
    ) {
        assert!(
            r <= self.cell,
            "query radius {r} exceeds grid cell size {}",
            self.cell
        );
        assert_eq!(query.len(), self.d, "query dimension");
        out.clear();
        let home = self.cell_of(query);
        let top = self.per_axis as i64;
        let mut probe = vec![0i64; self.d];
        'cells: for off in &self.offsets {
            for ((p, h), o) in probe.iter_mut().zip(&home).zip(off) {
                *p = h + o;
                if *p < 0 || *p >= top {
                    continue 'cells;
                }
            }
            let Some(list) = self.cells.get(&self.key(&probe)) else {
                continue;
            };
            for &id in list {
                let id = id as usize;
                if Some(id) == exclude {
                    continue;
                }
                // same predicate as the explicit graph, so edge sets match
                if euclidean(samples.point(id), query) <= r {
                    out.push(id);
                }
            }
        }
        out.sort_unstable();
    }
}
