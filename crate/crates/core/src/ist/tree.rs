use super::{contains_scalar, validate, Config, ConfigError, Link, Node, Violation};
use crate::batched::Batch;
use crate::rebuild::{build_ideal, flatten_to_vec, is_ideally_balanced};
use crate::Key;

/// A sorted set of `i64` keys stored as an interpolation search tree.
///
/// Mutations take `&mut self`, so a tree runs one batched operation at a
/// time; each batched call parallelizes internally on the current rayon pool.
#[derive(Clone, Debug, Default)]
pub struct Tree {
    pub(crate) root: Link,
    pub(crate) config: Config,
}

impl Tree {
    pub fn new(config: Config) -> Result<Tree, ConfigError> {
        config.validate()?;
        Ok(Tree { root: None, config })
    }

    /// Builds an ideally balanced tree holding exactly `keys`.
    pub fn from_batch(keys: &Batch, config: Config) -> Result<Tree, ConfigError> {
        config.validate()?;
        let root = build_ideal(keys.keys(), &config);
        Ok(Tree { root, config })
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    pub fn root(&self) -> Option<&Node> {
        self.root.as_deref()
    }

    /// Number of logically present keys.
    pub fn len(&self) -> usize {
        self.root.as_ref().map_or(0, |r| r.size)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn height(&self) -> usize {
        self.root.as_ref().map_or(0, |r| r.height())
    }

    pub fn contains(&self, key: Key) -> bool {
        contains_scalar(self.root(), key)
    }

    /// All present keys in ascending order.
    pub fn to_vec(&self) -> Vec<Key> {
        flatten_to_vec(self.root(), &self.config)
    }

    pub fn validate(&self) -> Vec<Violation> {
        match self.root() {
            Some(root) => validate(root, &self.config),
            None => Vec::new(),
        }
    }

    pub fn is_ideally_balanced(&self) -> bool {
        is_ideally_balanced(self.root(), &self.config)
    }
}
