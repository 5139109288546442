//! Workload generation, timing harness and file-based set algebra used by
//! the `pbist` binary.

mod run;
mod setops;
mod workload;

pub use run::{run_bench, BenchError, BenchReport, BenchRow, StateDigest};
pub use setops::{parse_keys, read_keys, run_setop, setops_cmd, write_keys, SetOp, SetopsError};
pub use workload::{gen_workload, OpKind, Workload, WorkloadSpec};
