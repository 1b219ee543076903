#![allow(dead_code)]

use bottleneck_core::costmap::{AnalyticCostMap, AnalyticSpec, Bump, Obstacle};
use bottleneck_core::geometry::Polyline;
use bottleneck_core::graph::leq;
use bottleneck_core::PlanPath;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A random instance: map, sample count, seed and radius slack.
pub struct Instance {
    pub map: AnalyticCostMap,
    pub n: usize,
    pub seed: u64,
    pub eta: f64,
}

fn point(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    (0..d).map(|_| rng.gen()).collect()
}

/// Random smooth landscape, sometimes with hard obstacles.
pub fn random_map(rng: &mut ChaCha8Rng, d: usize) -> AnalyticCostMap {
    let spec = match rng.gen_range(0..10) {
        0 => AnalyticSpec::Constant {
            value: rng.gen_range(-1.0..1.0),
        },
        1 => AnalyticSpec::Tent {
            index: rng.gen_range(0..d),
        },
        2 => AnalyticSpec::Sum,
        _ => AnalyticSpec::Bumps {
            base: rng.gen_range(-0.5..0.5),
            bumps: (0..rng.gen_range(1..6))
                .map(|_| Bump {
                    center: point(rng, d),
                    width: rng.gen_range(0.05..0.4),
                    height: rng.gen_range(-1.0..2.0),
                })
                .collect(),
            obstacles: (0..rng.gen_range(0..4))
                .map(|_| Obstacle {
                    center: point(rng, d),
                    radius: rng.gen_range(0.05..0.3),
                })
                .collect(),
        },
    };
    AnalyticCostMap::new(d, spec).expect("valid random map")
}

pub fn random_instance(case: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 + case);
    let d = rng.gen_range(2..=3);
    Instance {
        map: random_map(&mut rng, d),
        n: rng.gen_range(20..=200),
        seed: rng.gen(),
        eta: rng.gen_range(0.1..1.5),
    }
}

/// Consecutive vertices ordered and within `r`. Returns the first offending
/// hop index.
pub fn monotone_violation(path: &PlanPath, r: f64) -> Option<usize> {
    path.vertices.windows(2).position(|w| {
        let dist = w[0]
            .iter()
            .zip(&w[1])
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        !leq(&w[0], &w[1]).unwrap() || dist > r
    })
}

/// Largest cost seen when every curve moves at the same normalized speed.
pub fn simultaneous_cost(eval: impl Fn(&[f64]) -> f64, d: usize, steps: usize) -> f64 {
    (0..=steps)
        .map(|i| eval(&vec![i as f64 / steps as f64; d]))
        .fold(f64::NEG_INFINITY, f64::max)
}

pub fn curves(cfg: &bottleneck_core::ScenarioConfig) -> Vec<Polyline> {
    cfg.polylines().unwrap()
}
