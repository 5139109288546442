//! Parallel-batched interpolation search tree.
//!
//! A sorted set of `i64` keys whose bulk operations (`contains_batched`,
//! `insert_batched`, `remove_batched`) traverse the tree once per batch and
//! fan out over a rayon pool. In-node search uses an interpolation index, so
//! lookups cost doubly-logarithmic expected time on smoothly distributed
//! keys. Removal is logical (tombstones); subtrees are rebuilt into ideal
//! shape once they absorb too many modifications.
//!
//! ```
//! use pbist::{Batch, Config, Tree};
//!
//! let mut set = Tree::from_batch(&Batch::new(vec![1, 3, 5, 7, 9]).unwrap(), Config::default())
//!     .unwrap();
//! let added = set.insert_batched(&Batch::normalize(vec![8, 2, 4, 5, 7]));
//! assert_eq!(added, 3);
//! assert_eq!(set.contains_batched(&Batch::new(vec![2, 6]).unwrap()), vec![true, false]);
//! ```

pub mod batched;
pub mod bench;
pub mod ist;
pub mod oracle;
pub mod primitives;
pub mod rebuild;

/// Element type of the set.
pub type Key = i64;

pub use batched::{normalize_batch, Batch, RouteSegment, UnsortedBatch};
pub use ist::{Config, ConfigError, Node, Routing, Tree};
pub use oracle::OracleSet;
