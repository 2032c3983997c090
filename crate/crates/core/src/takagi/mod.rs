//! Takagi-class functions: coefficient sequences, sign sequences, and evaluation.

mod eval;
mod sequence;
mod signs;

pub use eval::{eval_from_rademacher, eval_periodic, eval_series, eval_truncated, tent};
pub use sequence::{CoefficientSequence, CustomSequence, Generator, TailBound};
pub use signs::{rademacher_of, t_map, DyadicRational, Period, Sign, SignSequence, TValue, ORBIT_CAP};
