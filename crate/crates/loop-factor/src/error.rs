use loop_alg::LoopError;
use thiserror::Error;

use crate::CellTag;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FactorError {
    #[error("loop has dimension {got}, signature expects {expected}")]
    Dimension { got: usize, expected: usize },
    #[error("loop is not O(1,n+3,C)-valued on the circle (residual {0:.3e})")]
    NotGroupValued(f64),
    #[error("split left the big cell ({cell:?}): {reason}")]
    Cell { cell: CellTag, reason: String },
    #[error(transparent)]
    Loop(#[from] LoopError),
}
