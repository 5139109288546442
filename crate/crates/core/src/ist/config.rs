use thiserror::Error;

use crate::primitives::{Par, DEFAULT_GRAIN};

/// How inner nodes locate batch keys in their `rep` array.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Routing {
    /// Per-key lookup through the node's interpolation index.
    #[default]
    Interpolation,
    /// One merge-style `rank` of the whole batch segment against `rep`.
    Rank,
}

/// Tuning constants of a tree.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Config {
    /// Subtrees with at most this many keys are built as leaves.
    pub leaf_threshold: usize,
    /// A subtree is rebuilt once its modifications exceed this multiple of
    /// its size at creation.
    pub rebuild_factor: usize,
    /// Exponent of the interpolation index size: `m = ceil(n^eps)`.
    pub index_exponent: f64,
    /// Sequential cutoff for fork-join work.
    pub seq_cutoff: usize,
    pub routing: Routing,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            leaf_threshold: 10,
            rebuild_factor: 2,
            index_exponent: 0.75,
            seq_cutoff: DEFAULT_GRAIN,
            routing: Routing::Interpolation,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("leaf threshold must be at least 4, got {0}")]
    LeafThreshold(usize),
    #[error("rebuild factor must be at least 1, got {0}")]
    RebuildFactor(usize),
    #[error("index exponent must lie in [0.5, 1), got {0}")]
    IndexExponent(f64),
    #[error("sequential cutoff must be at least 1")]
    SeqCutoff,
}

impl Config {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.leaf_threshold < 4 {
            return Err(ConfigError::LeafThreshold(self.leaf_threshold));
        }
        if self.rebuild_factor < 1 {
            return Err(ConfigError::RebuildFactor(self.rebuild_factor));
        }
        if !(0.5..1.0).contains(&self.index_exponent) {
            return Err(ConfigError::IndexExponent(self.index_exponent));
        }
        if self.seq_cutoff < 1 {
            return Err(ConfigError::SeqCutoff);
        }
        Ok(())
    }

    /// Interpolation index slot count for a node built over `n` keys.
    pub fn slot_count(&self, n: usize) -> usize {
        ((n as f64).powf(self.index_exponent).ceil() as usize).max(1)
    }

    pub fn par(&self) -> Par {
        Par::with_grain(self.seq_cutoff)
    }
}
