//! Graph files, instance generators and the benchmark harness.

mod bench;
mod generate;
mod io;

pub use bench::{bench, BenchError, BenchReport, BenchRow};
pub use generate::{gen_gnm, gen_planted, gen_small_instance, SmallInstanceShape};
pub use io::{parse, serialize, GraphFile, ParseError};
