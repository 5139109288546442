//! Batched contains / insert / remove.
//!
//! Each operation walks the tree once for the whole batch. At every node the
//! batch segment is located in `rep`, keys equal to a `rep` entry are handled
//! in place, and the remaining keys are cut into contiguous runs, one per
//! child, which are processed in parallel.

use rayon::prelude::*;
use thiserror::Error;

use crate::ist::{interpolation_search, Config, Link, Node, Routing, Tree};
use crate::primitives::{elem_rank, Par};
use crate::rebuild::{build_ideal, needs_rebuild, rebuild_with_batch, BatchOp};
use crate::Key;

/// A strictly increasing array of keys.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Batch(Vec<Key>);

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("batch keys must be strictly increasing (violated at index {position})")]
pub struct UnsortedBatch {
    pub position: usize,
}

impl Batch {
    pub fn new(keys: Vec<Key>) -> Result<Batch, UnsortedBatch> {
        match keys.windows(2).position(|w| w[0] >= w[1]) {
            Some(i) => Err(UnsortedBatch { position: i + 1 }),
            None => Ok(Batch(keys)),
        }
    }

    /// Sorts and deduplicates arbitrary keys.
    pub fn normalize(mut raw: Vec<Key>) -> Batch {
        raw.sort_unstable();
        raw.dedup();
        Batch(raw)
    }

    pub fn keys(&self) -> &[Key] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<Key> {
        self.0
    }
}

impl TryFrom<Vec<Key>> for Batch {
    type Error = UnsortedBatch;

    fn try_from(keys: Vec<Key>) -> Result<Self, Self::Error> {
        Batch::new(keys)
    }
}

impl AsRef<[Key]> for Batch {
    fn as_ref(&self) -> &[Key] {
        &self.0
    }
}

/// Sorted, deduplicated copy of `raw`.
pub fn normalize_batch(raw: &[Key]) -> Batch {
    Batch::normalize(raw.to_vec())
}

/// A run of batch keys `[lo, hi)` that continues into child `child`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RouteSegment {
    pub child: usize,
    pub lo: usize,
    pub hi: usize,
}

/// Per-key ranks in `node.rep()`.
fn locate(node: &Node, keys: &[Key], cfg: &Config) -> Vec<usize> {
    let par = cfg.par();
    if node.is_leaf() || cfg.routing == Routing::Rank || node.id_index().is_none() {
        par.rank(node.rep(), keys)
    } else {
        par.tabulate(keys.len(), |i| interpolation_search(node, keys[i]))
    }
}

fn is_hit(rep: &[Key], r: usize, key: Key) -> bool {
    r > 0 && rep[r - 1] == key
}

/// Splits the keys not found in `rep` into per-child runs.
///
/// `ranks` must be the ranks of `keys` in `rep`.
pub fn route_segments(rep: &[Key], keys: &[Key], ranks: &[usize], par: Par) -> Vec<RouteSegment> {
    let n = keys.len();
    let hit = |i: usize| is_hit(rep, ranks[i], keys[i]);
    let starts_at = |i: usize| !hit(i) && (i == 0 || hit(i - 1) || ranks[i - 1] != ranks[i]);
    let ends_at = |i: usize| !hit(i) && (i + 1 == n || hit(i + 1) || ranks[i + 1] != ranks[i]);
    let idx = par.tabulate(n, |i| i);
    let starts = par.pack(&idx, &par.tabulate(n, starts_at));
    let ends = par.pack(&idx, &par.tabulate(n, ends_at));
    debug_assert_eq!(starts.len(), ends.len());
    starts
        .into_iter()
        .zip(ends)
        .map(|(lo, last)| RouteSegment {
            child: ranks[lo],
            lo,
            hi: last + 1,
        })
        .collect()
}

/// Indices `(key, rep position)` of keys equal to some `rep` entry.
fn hits(rep: &[Key], keys: &[Key], ranks: &[usize], par: Par) -> Vec<(usize, usize)> {
    let found = par.tabulate(keys.len(), |i| is_hit(rep, ranks[i], keys[i]));
    let pairs = par.tabulate(keys.len(), |i| (i, ranks[i].wrapping_sub(1)));
    par.pack(&pairs, &found)
}

fn fill(out: &mut [bool], par: Par, f: impl Fn(usize) -> bool + Sync + Send) {
    if out.len() <= par.grain() {
        out.iter_mut().enumerate().for_each(|(i, o)| *o = f(i));
    } else {
        out.par_iter_mut()
            .enumerate()
            .with_min_len(par.grain())
            .for_each(|(i, o)| *o = f(i));
    }
}

/// Sets `out[i]` to whether `keys[i]` is present in `node`'s subtree.
pub fn batched_traverse(node: &Node, keys: &[Key], out: &mut [bool], cfg: &Config) {
    debug_assert_eq!(keys.len(), out.len());
    if keys.is_empty() {
        return;
    }
    let par = cfg.par();
    if keys.len() <= par.grain() {
        traverse_seq(node, keys, out, cfg);
        return;
    }
    let rep = node.rep();
    let exists = node.exists();
    let ranks = locate(node, keys, cfg);
    fill(out, par, |i| {
        let r = ranks[i];
        is_hit(rep, r, keys[i]) && exists[r - 1]
    });
    if node.is_leaf() {
        return;
    }

    let segments = route_segments(rep, keys, &ranks, par);
    let mut jobs: Vec<(&Node, &[Key], &mut [bool])> = Vec::with_capacity(segments.len());
    let mut rest = out;
    let mut consumed = 0;
    for seg in &segments {
        let (_, tail) = std::mem::take(&mut rest).split_at_mut(seg.lo - consumed);
        let (mine, tail) = tail.split_at_mut(seg.hi - seg.lo);
        rest = tail;
        consumed = seg.hi;
        // Children without assigned keys are never visited; absent children
        // leave their keys false.
        if let Some(child) = node.child(seg.child) {
            jobs.push((child, &keys[seg.lo..seg.hi], mine));
        }
    }
    if keys.len() > par.grain() {
        jobs.into_par_iter()
            .for_each(|(child, ks, o)| batched_traverse(child, ks, o, cfg));
    } else {
        for (child, ks, o) in jobs {
            batched_traverse(child, ks, o, cfg);
        }
    }
}

fn rank_in(node: &Node, key: Key, cfg: &Config) -> usize {
    match cfg.routing {
        Routing::Interpolation => interpolation_search(node, key),
        Routing::Rank => elem_rank(node.rep(), &key),
    }
}

/// Allocation-free traversal for small segments. Consecutive keys below the
/// same separator share one descent.
fn traverse_seq(node: &Node, keys: &[Key], out: &mut [bool], cfg: &Config) {
    let rep = node.rep();
    let mut i = 0;
    while i < keys.len() {
        let r = rank_in(node, keys[i], cfg);
        if is_hit(rep, r, keys[i]) {
            out[i] = node.exists()[r - 1];
            i += 1;
            continue;
        }
        let end = match rep.get(r) {
            Some(&sep) => i + keys[i..].partition_point(|&k| k < sep),
            None => keys.len(),
        };
        match node.child(r) {
            Some(child) => traverse_seq(child, &keys[i..end], &mut out[i..end], cfg),
            None => out[i..end].fill(false),
        }
        i = end;
    }
}

impl Tree {
    /// Membership of every batch key.
    pub fn contains_batched(&self, batch: &Batch) -> Vec<bool> {
        let mut out = vec![false; batch.len()];
        if let Some(root) = self.root() {
            batched_traverse(root, batch.keys(), &mut out, &self.config);
        }
        out
    }

    /// Adds every batch key; returns how many were not present before.
    pub fn insert_batched(&mut self, batch: &Batch) -> usize {
        self.update_batched(batch, BatchOp::Insert)
    }

    /// Removes every batch key; returns how many were present before.
    pub fn remove_batched(&mut self, batch: &Batch) -> usize {
        self.update_batched(batch, BatchOp::Remove)
    }

    fn update_batched(&mut self, batch: &Batch, op: BatchOp) -> usize {
        if batch.is_empty() {
            return 0;
        }
        let par = self.config.par();
        let present = self.contains_batched(batch);
        let keep = match op {
            BatchOp::Insert => par.tabulate(present.len(), |i| !present[i]),
            BatchOp::Remove => present,
        };
        let keys = par.pack(batch.keys(), &keep);
        if !keys.is_empty() {
            update_link(&mut self.root, &keys, op, &self.config);
        }
        keys.len()
    }
}

/// Applies a pre-filtered update to a subtree, rebuilding it when its
/// modification budget would be exceeded.
fn update_link(link: &mut Link, keys: &[Key], op: BatchOp, cfg: &Config) {
    match link {
        None => {
            debug_assert_eq!(op, BatchOp::Insert, "removal routed into an empty subtree");
            if op == BatchOp::Insert {
                *link = build_ideal(keys, cfg);
            }
        }
        Some(node) if needs_rebuild(node, keys.len(), cfg) => {
            *link = rebuild_with_batch(node, keys, op, cfg);
        }
        Some(node) => update_node(node, keys, op, cfg),
    }
}

fn update_node(node: &mut Node, keys: &[Key], op: BatchOp, cfg: &Config) {
    let k = keys.len();
    let par = cfg.par();
    node.mod_cnt += k;
    match op {
        BatchOp::Insert => node.size += k,
        BatchOp::Remove => node.size -= k,
    }

    let ranks = locate(node, keys, cfg);
    let found = hits(&node.rep, keys, &ranks, par);
    // Inserted keys seen in rep were tombstoned (the batch was pre-filtered),
    // removed keys seen in rep were present.
    let flag = op == BatchOp::Insert;
    for &(_, pos) in &found {
        debug_assert_ne!(node.exists[pos], flag);
        node.exists[pos] = flag;
    }

    if node.is_leaf() {
        if op == BatchOp::Insert && found.len() < k {
            insert_into_leaf(node, keys, &ranks, par);
        }
        debug_assert!(
            op == BatchOp::Insert || found.len() == k,
            "removed key missing from leaf"
        );
        return;
    }

    let segments = route_segments(&node.rep, keys, &ranks, par);
    let mut jobs: Vec<(&mut Link, &[Key])> = Vec::with_capacity(segments.len());
    let mut children = node.children.iter_mut().enumerate();
    for seg in &segments {
        let (_, link) = children
            .find(|(j, _)| *j == seg.child)
            .expect("segments are ordered by child");
        jobs.push((link, &keys[seg.lo..seg.hi]));
    }
    if k > par.grain() {
        jobs.into_par_iter()
            .for_each(|(link, ks)| update_link(link, ks, op, cfg));
    } else {
        for (link, ks) in jobs {
            update_link(link, ks, op, cfg);
        }
    }
}

/// Merges the keys of an insert batch that were not revived into a leaf.
fn insert_into_leaf(node: &mut Node, keys: &[Key], ranks: &[usize], par: Par) {
    let fresh_flags = par.tabulate(keys.len(), |i| !is_hit(&node.rep, ranks[i], keys[i]));
    let fresh = par.pack(keys, &fresh_flags);
    let merged = par.merge(&node.rep, &fresh);
    let mut exists = vec![true; merged.len()];
    for (j, (&key, &e)) in node.rep.iter().zip(&node.exists).enumerate() {
        if !e {
            exists[j + elem_rank(&fresh, &key)] = false;
        }
    }
    node.rep = merged;
    node.exists = exists;
}
