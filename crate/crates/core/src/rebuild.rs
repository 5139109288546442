//! Subtree reconstruction: the rebuild trigger, parallel flattening, ideal
//! construction and interpolation index construction.

use std::ops::Range;

use rayon::prelude::*;

use crate::ist::{grid_point, Config, IdIndex, Link, Node};
use crate::primitives::Par;
use crate::Key;

/// Which batched update handed its keys to a rebuild.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BatchOp {
    Insert,
    Remove,
}

/// Largest modification count a subtree of initial size `init_size` absorbs
/// before it must be rebuilt.
pub fn rebuild_threshold(init_size: usize, cfg: &Config) -> usize {
    cfg.rebuild_factor.saturating_mul(init_size.max(1))
}

/// Whether applying `k` more modifications to `node` forces a rebuild.
pub fn needs_rebuild(node: &Node, k: usize, cfg: &Config) -> bool {
    node.mod_cnt().saturating_add(k) > rebuild_threshold(node.init_subtree_size(), cfg)
}

/// Output offsets of the `2k + 1` key sources of a node: child `i` is source
/// `2i`, `rep[i]` is source `2i + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeySourceLayout {
    pub sizes: Vec<usize>,
    pub positions: Vec<usize>,
}

impl KeySourceLayout {
    pub fn of(node: &Node, par: Par) -> Self {
        let k = node.rep().len();
        let sizes = par.tabulate(2 * k + 1, |src| {
            if src % 2 == 0 {
                node.child(src / 2).map_or(0, Node::size)
            } else {
                usize::from(node.exists()[src / 2])
            }
        });
        let positions = par.scan_exclusive(&sizes);
        KeySourceLayout { sizes, positions }
    }

    /// Layout from raw child sizes (`k + 1` of them) and existence flags.
    pub fn from_parts(child_sizes: &[usize], exists: &[bool], par: Par) -> Self {
        assert_eq!(child_sizes.len(), exists.len() + 1);
        let sizes = par.tabulate(2 * exists.len() + 1, |src| {
            if src % 2 == 0 {
                child_sizes[src / 2]
            } else {
                usize::from(exists[src / 2])
            }
        });
        let positions = par.scan_exclusive(&sizes);
        KeySourceLayout { sizes, positions }
    }

    pub fn total(&self) -> usize {
        self.positions.last().copied().unwrap_or(0) + self.sizes.last().copied().unwrap_or(0)
    }

    pub fn child_offset(&self, i: usize) -> usize {
        self.positions[2 * i]
    }

    pub fn rep_offset(&self, i: usize) -> usize {
        self.positions[2 * i + 1]
    }
}

/// Writes the present keys of `node`'s subtree into `out` in ascending order.
///
/// Panics if `out.len() != node.size()`.
pub fn flatten(node: &Node, out: &mut [Key], cfg: &Config) {
    assert_eq!(
        out.len(),
        node.size(),
        "flatten: output length must equal subtree size"
    );
    let par = cfg.par();
    if node.is_leaf() {
        let kept = par.pack(node.rep(), node.exists());
        out.copy_from_slice(&kept);
        return;
    }
    let layout = KeySourceLayout::of(node, par);
    debug_assert_eq!(layout.total(), out.len());

    let mut jobs: Vec<(&Node, &mut [Key])> = Vec::with_capacity(node.children().len());
    let mut rest = out;
    for (src, &len) in layout.sizes.iter().enumerate() {
        let (chunk, tail) = std::mem::take(&mut rest).split_at_mut(len);
        rest = tail;
        if len == 0 {
            continue;
        }
        if src % 2 == 1 {
            chunk[0] = node.rep()[src / 2];
        } else if let Some(child) = node.child(src / 2) {
            jobs.push((child, chunk));
        }
    }
    if node.size() > par.grain() {
        jobs.into_par_iter()
            .for_each(|(child, chunk)| flatten(child, chunk, cfg));
    } else {
        for (child, chunk) in jobs {
            flatten(child, chunk, cfg);
        }
    }
}

/// Present keys of a (possibly empty) subtree as a fresh sorted vector.
pub fn flatten_to_vec(node: Option<&Node>, cfg: &Config) -> Vec<Key> {
    match node {
        Some(node) => {
            let mut out = vec![0; node.size()];
            flatten(node, &mut out, cfg);
            out
        }
        None => Vec::new(),
    }
}

/// Sub-slice of an `n`-key build range that becomes child `j` of a node with
/// `k` separators at offsets `k, 2k, .., k * k`.
fn child_range(n: usize, k: usize, j: usize) -> Range<usize> {
    if j == 0 {
        0..k
    } else if j < k {
        j * k + 1..(j + 1) * k
    } else {
        k * k + 1..n
    }
}

/// Builds an ideally balanced subtree over strictly increasing `keys`.
///
/// Ranges of at most `leaf_threshold` keys become leaves. Larger ranges get
/// `k = isqrt(n) - 1` separators `keys[(i + 1) * k]` and the `k + 1` gaps
/// between them become children, built recursively.
pub fn build_ideal(keys: &[Key], cfg: &Config) -> Link {
    let n = keys.len();
    if n == 0 {
        return None;
    }
    if n <= cfg.leaf_threshold {
        return Some(Box::new(Node::leaf(keys.to_vec())));
    }
    let par = cfg.par();
    let k = n.isqrt() - 1;
    let rep = par.tabulate(k, |i| keys[(i + 1) * k]);
    let children: Vec<Link> = if n > par.grain() {
        (0..=k)
            .into_par_iter()
            .map(|j| build_ideal(&keys[child_range(n, k, j)], cfg))
            .collect()
    } else {
        (0..=k)
            .map(|j| build_ideal(&keys[child_range(n, k, j)], cfg))
            .collect()
    };
    let id_index = build_id_index(&rep, keys[0], keys[n - 1], cfg.slot_count(n), par);
    Some(Box::new(Node {
        exists: vec![true; k],
        rep,
        children,
        id_index: Some(id_index),
        size: n,
        init_subtree_size: n,
        mod_cnt: 0,
    }))
}

/// Interpolation index over `rep` with `m` slots spanning `[a, b]`.
pub fn build_id_index(rep: &[Key], a: Key, b: Key, m: usize, par: Par) -> IdIndex {
    assert!(m >= 1, "index needs at least one slot");
    let bounds = par.tabulate(m + 1, |i| grid_point(a, b, m, i));
    let slots = par.rank(rep, &bounds);
    IdIndex::from_parts(slots, a, b)
}

/// Flattens `node`, applies the triggering batch slice and rebuilds an ideal
/// subtree from the result.
pub fn rebuild_with_batch(node: &Node, keys: &[Key], op: BatchOp, cfg: &Config) -> Link {
    let par = cfg.par();
    let current = flatten_to_vec(Some(node), cfg);
    let updated = match op {
        BatchOp::Insert => par.merge(&current, keys),
        BatchOp::Remove => par.difference(&current, keys),
    };
    build_ideal(&updated, cfg)
}

/// Whether the subtree has exactly the shape `build_ideal` gives its keys.
pub fn is_ideally_balanced(node: Option<&Node>, cfg: &Config) -> bool {
    match node {
        None => true,
        Some(node) => ideal_summary(node, cfg).is_some(),
    }
}

/// (key count, min key, max key) of an ideal subtree, `None` otherwise.
fn ideal_summary(node: &Node, cfg: &Config) -> Option<(usize, Key, Key)> {
    let rep = node.rep();
    if node.exists().len() != rep.len() || node.exists().iter().any(|&e| !e) {
        return None;
    }
    if rep.windows(2).any(|w| w[0] >= w[1]) {
        return None;
    }
    if node.is_leaf() {
        let n = rep.len();
        if n == 0 || n > cfg.leaf_threshold || node.size() != n {
            return None;
        }
        return Some((n, rep[0], rep[n - 1]));
    }

    let k = rep.len();
    if k == 0 || node.children().len() != k + 1 {
        return None;
    }
    let mut counts = Vec::with_capacity(k + 1);
    let (mut min, mut max) = (rep[0], rep[k - 1]);
    for (j, child) in node.children().iter().enumerate() {
        let (c, lo, hi) = ideal_summary(child.as_deref()?, cfg)?;
        if (j > 0 && lo <= rep[j - 1]) || (j < k && hi >= rep[j]) {
            return None;
        }
        min = min.min(lo);
        max = max.max(hi);
        counts.push(c);
    }
    let n = k + counts.iter().sum::<usize>();
    if n <= cfg.leaf_threshold || n.isqrt() - 1 != k || node.size() != n {
        return None;
    }
    if (0..=k).any(|j| counts[j] != child_range(n, k, j).len()) {
        return None;
    }
    let want = build_id_index(rep, min, max, cfg.slot_count(n), cfg.par());
    (node.id_index() == Some(&want)).then_some((n, min, max))
}
