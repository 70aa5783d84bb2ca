//! Exact resolution of x² + 5^a·13^b·17^c = 2^m·y^n.

pub mod arith;
pub mod cli;
pub mod curves;
pub mod error;
pub mod fib_lucas;
pub mod lehmer;
pub mod oracle;
pub mod quad_class;
pub mod solution;
pub mod solver;
pub mod tables;

pub use error::{Error, Result};
pub use solution::SolutionTuple;
