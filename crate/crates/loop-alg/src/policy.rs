use serde::{Deserialize, Serialize};

/// Degree cap and pruning threshold applied after loop arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationPolicy {
    pub max_degree: usize,
    pub drop_tolerance: f64,
}

impl TruncationPolicy {
    pub fn new(max_degree: usize, drop_tolerance: f64) -> Self {
        Self {
            max_degree,
            drop_tolerance,
        }
    }

    pub fn with_degree(max_degree: usize) -> Self {
        Self {
            max_degree,
            ..Self::default()
        }
    }

    pub(crate) fn bound(&self) -> i32 {
        self.max_degree as i32
    }
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self {
            max_degree: 16,
            drop_tolerance: 1e-13,
        }
    }
}
