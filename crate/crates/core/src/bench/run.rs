use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::hint::black_box;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use super::workload::{gen_workload, OpKind, WorkloadSpec};
use crate::{Batch, Config, ConfigError, Key, Tree};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid workload: {0}")]
    Spec(String),
    #[error("invalid tree configuration: {0}")]
    Config(#[from] ConfigError),
    #[error("worker counts must be at least 1")]
    ZeroWorkers,
    #[error("no worker counts given")]
    NoWorkers,
    #[error("repetitions must be at least 1")]
    ZeroReps,
    #[error("failed to start a pool of {workers} workers: {source}")]
    Pool {
        workers: usize,
        #[source]
        source: rayon::ThreadPoolBuildError,
    },
}

/// One timed (operation, worker count) cell. `ms` is the mean over `reps`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub op: String,
    pub workers: usize,
    pub batch: usize,
    pub tree_size: usize,
    pub ms: f64,
    pub reps: usize,
}

/// Fingerprint of the observable outcome of one operation: the set contents
/// after an update, or the answer vector of a lookup.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StateDigest {
    pub op: OpKind,
    pub workers: usize,
    pub len: usize,
    pub checksum: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub digests: Vec<StateDigest>,
}

impl BenchReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("op,workers,batch,tree_size,ms,reps\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{:.3},{}",
                r.op, r.workers, r.batch, r.tree_size, r.ms, r.reps
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn fnv1a(words: impl IntoIterator<Item = u64>) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for w in words {
        for b in w.to_le_bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    h
}

fn digest_keys(keys: &[Key]) -> u64 {
    fnv1a(keys.iter().map(|&k| k as u64))
}

fn digest_flags(flags: &[bool]) -> u64 {
    fnv1a(flags.iter().map(|&f| u64::from(f)))
}

/// Times every operation of `spec.ops` at every worker count.
///
/// The ideal tree over the initial keys is built once per worker count
/// outside the timed region. Each repetition of an update runs on a fresh
/// clone of that tree, so every repetition sees the same starting state.
/// With `baseline`, the same batches are also applied key by key to a
/// `BTreeSet` and reported as `baseline_<op>` rows with one worker.
pub fn run_bench(
    spec: &WorkloadSpec,
    config: Config,
    workers: &[usize],
    reps: usize,
    baseline: bool,
) -> Result<BenchReport, BenchError> {
    spec.validate()?;
    config.validate()?;
    if workers.is_empty() {
        return Err(BenchError::NoWorkers);
    }
    if workers.contains(&0) {
        return Err(BenchError::ZeroWorkers);
    }
    if reps == 0 {
        return Err(BenchError::ZeroReps);
    }
    let pools = workers
        .iter()
        .map(|&w| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|source| BenchError::Pool { workers: w, source })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let workload = gen_workload(spec)?;
    let mut report = BenchReport::default();

    for (&w, pool) in workers.iter().zip(&pools) {
        let base = pool.install(|| Tree::from_batch(&workload.initial, config))?;
        for (op, batch) in &workload.batches {
            let mut total = 0.0;
            let mut digest = None;
            for _ in 0..reps {
                let (ms, d) = match op {
                    OpKind::Contains => {
                        let start = Instant::now();
                        let found = pool.install(|| base.contains_batched(batch));
                        let ms = start.elapsed().as_secs_f64() * 1e3;
                        (
                            ms,
                            (found.iter().filter(|&&f| f).count(), digest_flags(&found)),
                        )
                    }
                    OpKind::Insert | OpKind::Remove => {
                        let mut tree = base.clone();
                        let start = Instant::now();
                        pool.install(|| match op {
                            OpKind::Insert => black_box(tree.insert_batched(batch)),
                            _ => black_box(tree.remove_batched(batch)),
                        });
                        let ms = start.elapsed().as_secs_f64() * 1e3;
                        let keys = pool.install(|| tree.to_vec());
                        (ms, (keys.len(), digest_keys(&keys)))
                    }
                };
                total += ms;
                digest = Some(d);
            }
            let (len, checksum) = digest.expect("reps >= 1");
            report.rows.push(BenchRow {
                op: op.name().to_string(),
                workers: w,
                batch: batch.len(),
                tree_size: base.len(),
                ms: total / reps as f64,
                reps,
            });
            report.digests.push(StateDigest {
                op: *op,
                workers: w,
                len,
                checksum,
            });
        }
    }

    if baseline {
        let set: BTreeSet<Key> = workload.initial.keys().iter().copied().collect();
        for (op, batch) in &workload.batches {
            let mut total = 0.0;
            for _ in 0..reps {
                total += time_baseline(&set, *op, batch);
            }
            report.rows.push(BenchRow {
                op: format!("baseline_{}", op.name()),
                workers: 1,
                batch: batch.len(),
                tree_size: set.len(),
                ms: total / reps as f64,
                reps,
            });
        }
    }
    Ok(report)
}

/// Milliseconds to apply `batch` key by key to a copy of `set`.
pub(crate) fn time_baseline(set: &BTreeSet<Key>, op: OpKind, batch: &Batch) -> f64 {
    match op {
        OpKind::Contains => {
            let start = Instant::now();
            let hits = batch.keys().iter().filter(|k| set.contains(k)).count();
            black_box(hits);
            start.elapsed().as_secs_f64() * 1e3
        }
        OpKind::Insert => {
            let mut s = set.clone();
            let start = Instant::now();
            for &k in batch.keys() {
                black_box(s.insert(k));
            }
            start.elapsed().as_secs_f64() * 1e3
        }
        OpKind::Remove => {
            let mut s = set.clone();
            let start = Instant::now();
            for k in batch.keys() {
                black_box(s.remove(k));
            }
            start.elapsed().as_secs_f64() * 1e3
        }
    }
}
