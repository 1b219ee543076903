//! CSV rows and path files.

use std::fs;
use std::io::Write;
use std::path::Path;

use bottleneck_core::{Cost, RunStats};

use crate::commands::CliError;

pub const COLUMNS: [&str; 13] = [
    "scenario",
    "n",
    "seed",
    "eta",
    "h",
    "solved",
    "cost",
    "wall_time_s",
    "nodes_expanded",
    "edges_considered",
    "monotone_edges_accepted",
    "costmap_evals",
    "unsolved",
];

/// One planner or oracle invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub scenario: String,
    pub n: usize,
    pub seed: u64,
    pub eta: f64,
    pub h: f64,
    /// `None` when no path exists.
    pub cost: Option<Cost>,
    pub stats: RunStats,
}

impl RunRecord {
    pub fn solved(&self) -> bool {
        self.cost.is_some()
    }

    fn fields(&self, timing: bool) -> Vec<String> {
        let s = &self.stats;
        vec![
            self.scenario.clone(),
            self.n.to_string(),
            self.seed.to_string(),
            self.eta.to_string(),
            self.h.to_string(),
            self.solved().to_string(),
            self.cost
                .map_or_else(|| "none".to_string(), |c| c.to_string()),
            time_field(s.wall_time, timing),
            s.nodes_expanded.to_string(),
            s.edges_considered.to_string(),
            s.monotone_edges_accepted.to_string(),
            s.costmap_evals.to_string(),
            u8::from(!self.solved()).to_string(),
        ]
    }
}

fn time_field(t: f64, timing: bool) -> String {
    if timing {
        t.to_string()
    } else {
        "0".to_string()
    }
}

/// Writes run rows grouped by `n`, each group followed by its aggregate row.
/// Groups appear in the order their `n` first occurs. With `timing` off the
/// wall-time column is zeroed so repeated runs produce identical bytes.
pub fn write_table<W: Write>(out: W, records: &[RunRecord], timing: bool) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS)?;
    let mut order: Vec<usize> = Vec::new();
    for r in records {
        if !order.contains(&r.n) {
            order.push(r.n);
        }
    }
    for n in order {
        let group: Vec<&RunRecord> = records.iter().filter(|r| r.n == n).collect();
        for r in &group {
            w.write_record(r.fields(timing))?;
        }
        w.write_record(aggregate_fields(&group, timing))?;
    }
    w.flush().map_err(|e| CliError::Io("output".into(), e))?;
    Ok(())
}

/// Writes a header and a single row, without an aggregate.
pub fn write_single<W: Write>(out: W, record: &RunRecord) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS)?;
    w.write_record(record.fields(true))?;
    w.flush().map_err(|e| CliError::Io("output".into(), e))?;
    Ok(())
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    (count > 0).then(|| sum / count as f64)
}

fn aggregate_fields(group: &[&RunRecord], timing: bool) -> Vec<String> {
    let first = group[0];
    let solved = group.iter().filter(|r| r.solved()).count();
    let cost = mean(group.iter().filter_map(|r| r.cost.map(Cost::value)));
    let time = mean(group.iter().map(|r| r.stats.wall_time)).unwrap_or(0.0);
    let stat = |f: fn(&RunStats) -> u64| {
        mean(group.iter().map(|r| f(&r.stats) as f64))
            .unwrap_or(0.0)
            .to_string()
    };
    vec![
        first.scenario.clone(),
        first.n.to_string(),
        "mean".to_string(),
        first.eta.to_string(),
        first.h.to_string(),
        solved.to_string(),
        cost.map_or_else(|| "none".to_string(), |c| Cost::of(c).to_string()),
        time_field(time, timing),
        stat(|s| s.nodes_expanded),
        stat(|s| s.edges_considered),
        stat(|s| s.monotone_edges_accepted),
        stat(|s| s.costmap_evals),
        (group.len() - solved).to_string(),
    ]
}

pub fn write_path_file(path: &Path, vertices: &[Vec<f64>]) -> Result<(), CliError> {
    let mut text = String::new();
    for v in vertices {
        let line: Vec<String> = v.iter().map(f64::to_string).collect();
        text.push_str(&line.join(","));
        text.push('\n');
    }
    fs::write(path, text).map_err(|e| CliError::Io(path.display().to_string(), e))
}

pub fn read_path_file(path: &Path) -> Result<Vec<Vec<f64>>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(i, line)| {
            line.split(',')
                .map(|x| {
                    x.trim().parse::<f64>().map_err(|e| {
                        CliError::Usage(format!("{}: line {}: {e}", path.display(), i + 1))
                    })
                })
                .collect()
        })
        .collect()
}
