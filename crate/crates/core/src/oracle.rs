//! Reference sorted set: a plain sorted vector with the same batched API.

use crate::batched::Batch;
use crate::Key;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OracleSet {
    keys: Vec<Key>,
}

impl OracleSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_batch(batch: &Batch) -> Self {
        OracleSet {
            keys: batch.keys().to_vec(),
        }
    }

    pub fn keys(&self) -> &[Key] {
        &self.keys
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn contains(&self, key: Key) -> bool {
        self.keys.binary_search(&key).is_ok()
    }

    pub fn contains_batched(&self, batch: &Batch) -> Vec<bool> {
        batch.keys().iter().map(|&k| self.contains(k)).collect()
    }

    pub fn insert_batched(&mut self, batch: &Batch) -> usize {
        let fresh: Vec<Key> = batch
            .keys()
            .iter()
            .copied()
            .filter(|&k| !self.contains(k))
            .collect();
        self.keys.extend_from_slice(&fresh);
        self.keys.sort_unstable();
        fresh.len()
    }

    pub fn remove_batched(&mut self, batch: &Batch) -> usize {
        let before = self.keys.len();
        let drop = batch.keys();
        self.keys.retain(|k| drop.binary_search(k).is_err());
        before - self.keys.len()
    }
}
