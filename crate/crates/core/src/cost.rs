//! Extended-real costs.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// A cost in `ℝ ∪ {+∞}`.
///
/// NaN is not a cost; [`Cost::new`] rejects it, which makes the ordering
/// total. `+∞` encodes hard constraints and compares above every finite
/// value, so it propagates through `max` without special casing.
#[derive(Clone, Copy, PartialEq, Default)]
pub struct Cost(f64);

impl Cost {
    pub const INFINITY: Cost = Cost(f64::INFINITY);
    pub const ZERO: Cost = Cost(0.0);

    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() {
            return Err(Error::InvalidArgument("NaN is not a valid cost".into()));
        }
        // folds -0 into +0 so that equality and total_cmp agree
        Ok(Cost(value + 0.0))
    }

    /// Panics on NaN. Use for values that are known to be well defined.
    pub fn of(value: f64) -> Self {
        assert!(!value.is_nan(), "NaN is not a valid cost");
        Cost(value + 0.0)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0 != f64::INFINITY
    }

    pub fn is_infinite(self) -> bool {
        !self.is_finite()
    }
}

impl Eq for Cost {}

impl PartialOrd for Cost {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cost {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl fmt::Debug for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_finite() {
            write!(f, "{}", self.0)
        } else {
            f.write_str("inf")
        }
    }
}

impl From<Cost> for f64 {
    fn from(c: Cost) -> f64 {
        c.0
    }
}
