use std::fmt;

use super::{grid_point, Config, Node};
use crate::primitives::elem_rank;
use crate::rebuild::rebuild_threshold;
use crate::Key;

/// A broken structural invariant, located by the child indices leading from
/// the validated node to the offending one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub path: Vec<usize>,
    pub kind: ViolationKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    RepNotIncreasing {
        at: usize,
    },
    ExistsLength {
        rep: usize,
        exists: usize,
    },
    ChildCount {
        rep: usize,
        children: usize,
    },
    KeyOutOfRange {
        key: Key,
    },
    SizeMismatch {
        recorded: usize,
        actual: usize,
    },
    ModCountOverThreshold {
        mod_cnt: usize,
        threshold: usize,
    },
    IndexBounds {
        lower: Key,
        upper: Key,
    },
    IndexSlot {
        slot: usize,
        recorded: usize,
        expected: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "node {:?}: ", self.path)?;
        match &self.kind {
            ViolationKind::RepNotIncreasing { at } => {
                write!(f, "rep not strictly increasing at {at}")
            }
            ViolationKind::ExistsLength { rep, exists } => {
                write!(f, "exists has {exists} flags for {rep} rep keys")
            }
            ViolationKind::ChildCount { rep, children } => {
                write!(f, "{children} children for {rep} rep keys")
            }
            ViolationKind::KeyOutOfRange { key } => {
                write!(f, "key {key} outside its separator range")
            }
            ViolationKind::SizeMismatch { recorded, actual } => {
                write!(f, "size {recorded} but subtree holds {actual} keys")
            }
            ViolationKind::ModCountOverThreshold { mod_cnt, threshold } => {
                write!(
                    f,
                    "mod count {mod_cnt} exceeds rebuild threshold {threshold}"
                )
            }
            ViolationKind::IndexBounds { lower, upper } => {
                write!(f, "index bounds [{lower}, {upper}] do not cover rep")
            }
            ViolationKind::IndexSlot {
                slot,
                recorded,
                expected,
            } => write!(f, "index slot {slot} is {recorded}, expected {expected}"),
        }
    }
}

/// Checks every node invariant below `node`. An empty result means valid.
pub fn validate(node: &Node, cfg: &Config) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut path = Vec::new();
    check(node, None, None, cfg, &mut path, &mut out);
    out
}

fn check(
    node: &Node,
    lo: Option<Key>,
    hi: Option<Key>,
    cfg: &Config,
    path: &mut Vec<usize>,
    out: &mut Vec<Violation>,
) -> usize {
    let mut report = |kind| {
        out.push(Violation {
            path: path.clone(),
            kind,
        })
    };
    let rep = node.rep();

    if let Some(at) = rep.windows(2).position(|w| w[0] >= w[1]) {
        report(ViolationKind::RepNotIncreasing { at: at + 1 });
    }
    if node.exists().len() != rep.len() {
        report(ViolationKind::ExistsLength {
            rep: rep.len(),
            exists: node.exists().len(),
        });
    }
    for &key in rep {
        if lo.is_some_and(|l| key <= l) || hi.is_some_and(|h| key >= h) {
            report(ViolationKind::KeyOutOfRange { key });
        }
    }
    let threshold = rebuild_threshold(node.init_subtree_size(), cfg);
    if node.mod_cnt() > threshold {
        report(ViolationKind::ModCountOverThreshold {
            mod_cnt: node.mod_cnt(),
            threshold,
        });
    }
    if let (Some(idx), Some(&first), Some(&last)) = (node.id_index(), rep.first(), rep.last()) {
        if idx.lower() > first || idx.upper() < last {
            report(ViolationKind::IndexBounds {
                lower: idx.lower(),
                upper: idx.upper(),
            });
        }
        let m = idx.slot_count();
        for (slot, &recorded) in idx.slots().iter().enumerate() {
            let expected = elem_rank(rep, &grid_point(idx.lower(), idx.upper(), m, slot));
            if recorded != expected {
                report(ViolationKind::IndexSlot {
                    slot,
                    recorded,
                    expected,
                });
            }
        }
    }
    if !node.is_leaf() && node.children().len() != rep.len() + 1 {
        report(ViolationKind::ChildCount {
            rep: rep.len(),
            children: node.children().len(),
        });
    }

    let mut actual = node.exists().iter().filter(|&&e| e).count();
    for (j, child) in node.children().iter().enumerate() {
        let Some(child) = child.as_deref() else {
            continue;
        };
        let child_lo = if j == 0 {
            lo
        } else {
            rep.get(j - 1).copied().or(lo)
        };
        let child_hi = rep.get(j).copied().or(hi);
        path.push(j);
        actual += check(child, child_lo, child_hi, cfg, path, out);
        path.pop();
    }
    if actual != node.size() {
        out.push(Violation {
            path: path.clone(),
            kind: ViolationKind::SizeMismatch {
                recorded: node.size(),
                actual,
            },
        });
    }
    actual
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rebuild::build_ideal;

    fn cfg() -> Config {
        Config {
            leaf_threshold: 4,
            ..Config::default()
        }
    }

    #[test]
    fn fresh_tree_is_valid() {
        let keys: Vec<Key> = (0..500).map(|i| i * 3 - 700).collect();
        let root = build_ideal(&keys, &cfg()).unwrap();
        assert_eq!(validate(&root, &cfg()), vec![]);
    }

    #[test]
    fn size_off_by_one_is_reported_once() {
        let keys: Vec<Key> = (0..25).collect();
        let mut root = build_ideal(&keys, &cfg()).unwrap();
        root.size += 1;
        let v = validate(&root, &cfg());
        assert_eq!(
            v,
            vec![Violation {
                path: vec![],
                kind: ViolationKind::SizeMismatch {
                    recorded: 26,
                    actual: 25
                }
            }]
        );
    }

    #[test]
    fn misplaced_child_key_is_reported() {
        let keys: Vec<Key> = (0..25).collect();
        let mut root = build_ideal(&keys, &cfg()).unwrap();
        // child 0 holds 0..4; 100 belongs far to the right.
        let child = root.children[0].as_mut().unwrap();
        let last = child.rep.len() - 1;
        child.rep[last] = 100;
        let v = validate(&root, &cfg());
        assert!(v
            .iter()
            .any(|x| x.path == vec![0] && x.kind == ViolationKind::KeyOutOfRange { key: 100 }));
    }

    #[test]
    fn corrupted_index_slot_is_reported() {
        let keys: Vec<Key> = (0..100).collect();
        let mut root = build_ideal(&keys, &cfg()).unwrap();
        let idx = root.id_index.as_mut().unwrap();
        let mut slots = idx.slots().to_vec();
        slots[1] += 1;
        *idx = super::super::IdIndex::from_parts(slots, idx.lower(), idx.upper());
        let v = validate(&root, &cfg());
        assert_eq!(v.len(), 1);
        assert!(matches!(
            v[0].kind,
            ViolationKind::IndexSlot { slot: 1, .. }
        ));
        assert!(v[0].to_string().contains("index slot 1"));
    }
}
