//! Tree representation: nodes, the interpolation index, in-node search and
//! the scalar lookup.

mod config;
mod index;
mod node;
mod tree;
mod validate;

pub use config::{Config, ConfigError, Routing};
pub use index::{grid_point, IdIndex};
pub use node::{Link, Node};
pub use tree::Tree;
pub use validate::{validate, Violation, ViolationKind};

use crate::primitives::elem_rank;
use crate::Key;

/// Below this many separators a binary search over `rep` beats an extra
/// cache miss on the index slots.
const SMALL_REP: usize = 32;

/// Number of entries of `node.rep()` that are `<= key`.
///
/// Indexed nodes start from the index hint and walk left or right one entry
/// at a time until the rank is exact. Leaves and small nodes use a binary
/// search.
pub fn interpolation_search(node: &Node, key: Key) -> usize {
    let rep = node.rep();
    let mut r = match node.id_index() {
        Some(idx) if !idx.is_degenerate() && rep.len() > SMALL_REP => idx.hint(key).min(rep.len()),
        _ => return elem_rank(rep, &key),
    };
    while r < rep.len() && rep[r] <= key {
        r += 1;
    }
    while r > 0 && rep[r - 1] > key {
        r -= 1;
    }
    r
}

/// Scalar membership test by descending from `root`.
pub fn contains_scalar(root: Option<&Node>, key: Key) -> bool {
    let mut cur = root;
    while let Some(node) = cur {
        let r = interpolation_search(node, key);
        if r > 0 && node.rep()[r - 1] == key {
            return node.exists()[r - 1];
        }
        if node.is_leaf() {
            return false;
        }
        cur = node.child(r);
    }
    false
}
