//! Bottleneck pathfinding over implicit monotone random geometric graphs.
//!
//! A [`CostMap`](costmap::CostMap) assigns an extended-real cost to every
//! point of the parameter cube `[0,1]^d`. The [`planner`] searches the
//! monotone random geometric graph over `{0, 1} ∪ X_n` for the path from the
//! all-zeros corner to the all-ones corner whose maximum cost is minimal.
//! The [`oracle`] module provides brute-force references used to validate
//! the planner, and [`scenarios`] builds the Fréchet-matching,
//! leader-following and safest-coordination instances.

pub mod cost;
pub mod costmap;
pub mod error;
pub mod geometry;
pub mod graph;
pub mod oracle;
pub mod planner;
pub mod scenarios;

pub use cost::Cost;
pub use costmap::{CostMap, CostMapRegistry};
pub use error::{Error, Result};
pub use graph::{GraphParams, GridIndex, SampleSet};
pub use planner::{btt_plan, PlanOutcome, PlanPath, RunStats};
pub use scenarios::{ScenarioConfig, ScenarioKind};
