//! The subcommands, independent of argument parsing.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use bottleneck_core::costmap::CostMap;
use bottleneck_core::graph::sample;
use bottleneck_core::oracle::{explicit_bottleneck_dijkstra, grid_frechet_bottleneck};
use bottleneck_core::scenarios::{build_p1, build_p2, build_p3, enclose_leader};
use bottleneck_core::{btt_plan, GraphParams, PlanPath, RunStats, ScenarioConfig, ScenarioKind};
use rayon::prelude::*;

use crate::record::RunRecord;

/// Largest `n` the explicit oracle accepts; it scans all vertex pairs.
pub const EXPLICIT_MAX_N: usize = 2000;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}: {1}")]
    Io(String, #[source] std::io::Error),
    #[error(transparent)]
    Core(#[from] bottleneck_core::Error),
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Usage(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMode {
    Explicit,
    Grid,
}

/// Parameters shared by `run`, `sweep` and `oracle`.
#[derive(Debug, Clone)]
pub struct RunOptions {
    pub scenario: PathBuf,
    pub n: usize,
    pub seed: u64,
    pub eta: f64,
    pub h: f64,
    pub radius: Option<f64>,
}

impl RunOptions {
    pub fn new(scenario: impl Into<PathBuf>, n: usize, seed: u64) -> Self {
        RunOptions {
            scenario: scenario.into(),
            n,
            seed,
            eta: 1.0,
            h: 0.01,
            radius: None,
        }
    }

    fn params(&self, d: usize) -> GraphParams {
        let p = GraphParams::new(self.n, d, self.seed)
            .with_eta(self.eta)
            .with_resolution(self.h);
        match self.radius {
            Some(r) => p.with_radius(r),
            None => p,
        }
    }
}

pub struct Loaded {
    pub id: String,
    pub config: ScenarioConfig,
    pub map: Arc<dyn CostMap>,
}

/// Reads a scenario file; its id is the file stem.
pub fn load(path: &Path) -> Result<Loaded, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
    let config = ScenarioConfig::load(&text)?;
    let map = config.cost_map()?;
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    Ok(Loaded { id, config, map })
}

fn plan(loaded: &Loaded, opts: &RunOptions) -> Result<(RunRecord, Option<PlanPath>), CliError> {
    let out = btt_plan(loaded.map.as_ref(), &opts.params(loaded.config.d))?;
    let record = RunRecord {
        scenario: loaded.id.clone(),
        n: opts.n,
        seed: opts.seed,
        eta: opts.eta,
        h: opts.h,
        cost: out.path.as_ref().map(|p| p.cost),
        stats: out.stats,
    };
    Ok((record, out.path))
}

pub fn run(opts: &RunOptions) -> Result<(RunRecord, Option<PlanPath>), CliError> {
    plan(&load(&opts.scenario)?, opts)
}

/// Runs every `(n, rep)` pair with seed `base.seed + rep`. Records come back
/// in `(n, rep)` order whatever order the runs finish in.
pub fn sweep(base: &RunOptions, n_list: &[usize], reps: usize) -> Result<Vec<RunRecord>, CliError> {
    if reps == 0 {
        return Err(CliError::Usage("--reps must be at least 1".into()));
    }
    if n_list.is_empty() {
        return Err(CliError::Usage("--n-list is empty".into()));
    }
    let loaded = load(&base.scenario)?;
    let jobs: Vec<RunOptions> = n_list
        .iter()
        .flat_map(|&n| {
            (0..reps).map(move |rep| RunOptions {
                n,
                seed: base.seed + rep as u64,
                ..base.clone()
            })
        })
        .collect();
    jobs.par_iter()
        .map(|opts| plan(&loaded, opts).map(|(record, _)| record))
        .collect()
}

/// Runs a brute-force reference. Explicit mode samples the same vertex set
/// as `run`; grid mode matches the two curves of a planar Fréchet scenario on
/// a `k × k` grid and reports `k` in the `n` column.
pub fn oracle(
    opts: &RunOptions,
    mode: OracleMode,
    k: usize,
) -> Result<(RunRecord, Option<PlanPath>), CliError> {
    let loaded = load(&opts.scenario)?;
    let started = Instant::now();
    let mut stats = RunStats::default();
    let (n, cost, path) = match mode {
        OracleMode::Explicit => {
            if opts.n > EXPLICIT_MAX_N {
                return Err(CliError::Usage(format!(
                    "explicit oracle takes n <= {EXPLICIT_MAX_N}, got {}",
                    opts.n
                )));
            }
            let params = opts.params(loaded.config.d);
            params.validate()?;
            let samples = sample(opts.n, params.d, params.seed);
            let out = explicit_bottleneck_dijkstra(
                loaded.map.as_ref(),
                &samples,
                params.radius()?,
                opts.h,
            )?;
            stats.costmap_evals = out.costmap_evals;
            (opts.n, out.path.as_ref().map(|p| p.cost), out.path)
        }
        OracleMode::Grid => {
            let cfg = &loaded.config;
            if cfg.kind != ScenarioKind::Frechet || cfg.d != 2 {
                return Err(CliError::Usage(format!(
                    "grid oracle needs a 2-curve frechet scenario, got {} with d = {}",
                    cfg.kind, cfg.d
                )));
            }
            let curves = cfg.polylines()?;
            let value = grid_frechet_bottleneck(&curves[0], &curves[1], k)?;
            stats.costmap_evals = (k * k) as u64;
            (k, Some(bottleneck_core::Cost::of(value)), None)
        }
    };
    stats.wall_time = started.elapsed().as_secs_f64();
    let record = RunRecord {
        scenario: loaded.id,
        n,
        seed: opts.seed,
        eta: opts.eta,
        h: opts.h,
        cost,
        stats,
    };
    Ok((record, path))
}

/// Built-in scenario documents by name: `p1` (with dimension `d`), `p2`,
/// `p2-enclosed` and `p3`.
pub fn builtin(name: &str, d: usize) -> Result<ScenarioConfig, CliError> {
    Ok(match name {
        "p1" => build_p1(d)?,
        "p2" => build_p2(),
        "p2-enclosed" => {
            let mut cfg = build_p2();
            enclose_leader(&mut cfg);
            cfg
        }
        "p3" => build_p3(),
        other => {
            return Err(CliError::Usage(format!(
                "unknown scenario `{other}` (expected p1, p2, p2-enclosed or p3)"
            )))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &Path, name: &str, cfg: &ScenarioConfig) -> PathBuf {
        let p = dir.join(name);
        fs::write(&p, cfg.save()).unwrap();
        p
    }

    fn constant(dir: &Path, value: f64) -> PathBuf {
        let p = dir.join("flat.json");
        let text = format!(
            r#"{{"kind": "analytic", "d": 2, "analytic": {{"form": "constant", "value": {value}}}}}"#
        );
        fs::write(&p, text).unwrap();
        p
    }

    #[test]
    fn run_constant_map() {
        let dir = tempfile::tempdir().unwrap();
        let opts = RunOptions::new(constant(dir.path(), 0.7), 100, 3);
        let (rec, path) = run(&opts).unwrap();
        assert_eq!(rec.scenario, "flat");
        assert_eq!(rec.cost.unwrap().value(), 0.7);
        assert_eq!(path.unwrap().cost.value(), 0.7);
    }

    #[test]
    fn sweep_order_and_seeds() {
        let dir = tempfile::tempdir().unwrap();
        let mut opts = RunOptions::new(constant(dir.path(), 0.2), 0, 40);
        opts.h = 0.05;
        let recs = sweep(&opts, &[30, 10], 3).unwrap();
        let keys: Vec<_> = recs.iter().map(|r| (r.n, r.seed)).collect();
        assert_eq!(
            keys,
            [(30, 40), (30, 41), (30, 42), (10, 40), (10, 41), (10, 42)]
        );
    }

    #[test]
    fn sweep_rejects_zero_reps() {
        let dir = tempfile::tempdir().unwrap();
        let opts = RunOptions::new(constant(dir.path(), 0.2), 0, 0);
        assert!(matches!(sweep(&opts, &[10], 0), Err(CliError::Usage(_))));
    }

    #[test]
    fn explicit_n_zero_with_override() {
        let dir = tempfile::tempdir().unwrap();
        let mut opts = RunOptions::new(constant(dir.path(), 0.45), 0, 0);
        opts.radius = Some(2f64.sqrt());
        let (rec, path) = oracle(&opts, OracleMode::Explicit, 0).unwrap();
        assert_eq!(rec.cost.unwrap().value(), 0.45);
        assert_eq!(path.unwrap().ids, vec![0, 1]);
    }

    #[test]
    fn explicit_rejects_large_n() {
        let dir = tempfile::tempdir().unwrap();
        let opts = RunOptions::new(constant(dir.path(), 0.0), EXPLICIT_MAX_N + 1, 0);
        assert!(matches!(
            oracle(&opts, OracleMode::Explicit, 0),
            Err(CliError::Usage(_))
        ));
    }

    #[test]
    fn grid_rejects_other_kinds() {
        let dir = tempfile::tempdir().unwrap();
        let opts = RunOptions::new(constant(dir.path(), 0.0), 0, 0);
        assert!(oracle(&opts, OracleMode::Grid, 11).is_err());
        let p3 = write(dir.path(), "p3.json", &builtin("p3", 0).unwrap());
        assert!(oracle(&RunOptions::new(p3, 0, 0), OracleMode::Grid, 11).is_err());
        let p1 = write(dir.path(), "p1d3.json", &builtin("p1", 3).unwrap());
        assert!(oracle(&RunOptions::new(p1, 0, 0), OracleMode::Grid, 11).is_err());
    }

    #[test]
    fn missing_file_is_io_error() {
        let opts = RunOptions::new("/nonexistent/scenario.json", 10, 0);
        assert!(matches!(run(&opts), Err(CliError::Io(..))));
    }

    #[test]
    fn builtin_names() {
        for name in ["p1", "p2", "p2-enclosed", "p3"] {
            builtin(name, 2).unwrap().validate().unwrap();
        }
        assert!(builtin("p4", 2).is_err());
        assert!(builtin("p1", 5).is_err());
    }
}
