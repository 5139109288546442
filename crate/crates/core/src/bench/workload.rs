use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::BenchError;
use crate::{Batch, Key};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OpKind {
    Contains,
    Insert,
    Remove,
}

impl OpKind {
    pub fn name(self) -> &'static str {
        match self {
            OpKind::Contains => "contains",
            OpKind::Insert => "insert",
            OpKind::Remove => "remove",
        }
    }
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OpKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "contains" => Ok(OpKind::Contains),
            "insert" => Ok(OpKind::Insert),
            "remove" => Ok(OpKind::Remove),
            other => Err(format!("unknown operation `{other}`")),
        }
    }
}

/// Parameters of a synthetic workload.
///
/// The initial set takes every integer of `[-range, range]` independently
/// with probability `prob`; each operation batch draws its keys uniformly
/// from the same interval. All randomness comes from `ChaCha8Rng` seeded
/// with `seed` through `SeedableRng::seed_from_u64`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WorkloadSpec {
    pub range: Key,
    pub prob: f64,
    pub batch: usize,
    pub seed: u64,
    pub ops: Vec<(OpKind, usize)>,
}

impl Default for WorkloadSpec {
    fn default() -> Self {
        let batch = 100_000;
        WorkloadSpec {
            range: 1_000_000,
            prob: 0.5,
            batch,
            seed: 42,
            ops: vec![
                (OpKind::Contains, batch),
                (OpKind::Insert, batch),
                (OpKind::Remove, batch),
            ],
        }
    }
}

impl WorkloadSpec {
    pub fn validate(&self) -> Result<(), BenchError> {
        if self.range <= 0 {
            return Err(BenchError::Spec(format!(
                "range must be positive, got {}",
                self.range
            )));
        }
        if !(self.prob > 0.0 && self.prob <= 1.0) {
            return Err(BenchError::Spec(format!(
                "inclusion probability must lie in (0, 1], got {}",
                self.prob
            )));
        }
        if self.batch == 0 || self.ops.iter().any(|&(_, m)| m == 0) {
            return Err(BenchError::Spec("batch sizes must be at least 1".into()));
        }
        Ok(())
    }
}

/// Initial keys plus one normalized batch per entry of `spec.ops`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Workload {
    pub initial: Batch,
    pub batches: Vec<(OpKind, Batch)>,
}

pub fn gen_workload(spec: &WorkloadSpec) -> Result<Workload, BenchError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let r = spec.range;
    let mut initial = Vec::with_capacity(((2 * r + 1) as f64 * spec.prob) as usize + 16);
    for x in -r..=r {
        if rng.gen_bool(spec.prob) {
            initial.push(x);
        }
    }
    let initial = Batch::new(initial).expect("generated in increasing order");
    let batches = spec
        .ops
        .iter()
        .map(|&(op, m)| {
            let raw: Vec<Key> = (0..m).map(|_| rng.gen_range(-r..=r)).collect();
            (op, Batch::normalize(raw))
        })
        .collect();
    Ok(Workload { initial, batches })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(range: Key, prob: f64) -> WorkloadSpec {
        WorkloadSpec {
            range,
            prob,
            batch: 10,
            seed: 7,
            ops: vec![(OpKind::Contains, 10), (OpKind::Insert, 5)],
        }
    }

    #[test]
    fn full_inclusion_takes_every_integer() {
        let w = gen_workload(&spec(10, 1.0)).unwrap();
        assert_eq!(w.initial.keys(), (-10..=10).collect::<Vec<_>>().as_slice());
        assert_eq!(w.batches.len(), 2);
        assert!(w.batches[0].1.len() <= 10);
        assert!(w.batches[0].1.keys().iter().all(|k| (-10..=10).contains(k)));
    }

    #[test]
    fn same_seed_same_workload() {
        let s = spec(1000, 0.3);
        assert_eq!(gen_workload(&s).unwrap(), gen_workload(&s).unwrap());
        let other = WorkloadSpec {
            seed: 8,
            ..s.clone()
        };
        assert_ne!(gen_workload(&s).unwrap(), gen_workload(&other).unwrap());
    }

    #[test]
    fn binomial_size_within_three_sigma() {
        let w = gen_workload(&spec(1_000_000, 0.5)).unwrap();
        let trials = 2_000_001f64;
        let mean = trials * 0.5;
        let sigma = (trials * 0.25).sqrt();
        let got = w.initial.len() as f64;
        assert!(
            (got - mean).abs() <= 3.0 * sigma,
            "size {got}, mean {mean}, sigma {sigma}"
        );
    }

    #[test]
    fn invalid_specs_are_rejected() {
        assert!(gen_workload(&spec(0, 0.5)).is_err());
        assert!(gen_workload(&spec(10, 0.0)).is_err());
        assert!(gen_workload(&spec(10, 1.5)).is_err());
        let zero_batch = WorkloadSpec {
            ops: vec![(OpKind::Insert, 0)],
            ..spec(10, 0.5)
        };
        assert!(gen_workload(&zero_batch).is_err());
    }

    #[test]
    fn op_names_round_trip() {
        for op in [OpKind::Contains, OpKind::Insert, OpKind::Remove] {
            assert_eq!(op.name().parse::<OpKind>(), Ok(op));
        }
        assert!("lookup".parse::<OpKind>().is_err());
    }
}
