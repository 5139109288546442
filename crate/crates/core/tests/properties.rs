use proptest::prelude::*;

use std::collections::BTreeSet;

use pbist::bench::{read_keys, run_setop, setops_cmd, write_keys, SetOp};
use pbist::ist::{contains_scalar, interpolation_search};
use pbist::rebuild::{build_ideal, flatten_to_vec, is_ideally_balanced};
use pbist::{Batch, Config, Key, OracleSet, Routing, Tree};

#[derive(Clone, Debug)]
enum Op {
    Contains(Vec<Key>),
    Insert(Vec<Key>),
    Remove(Vec<Key>),
}

fn small_keys() -> impl Strategy<Value = Vec<Key>> {
    prop::collection::vec(-500i64..500, 0..60)
}

fn op() -> impl Strategy<Value = Op> {
    prop_oneof![
        small_keys().prop_map(Op::Contains),
        small_keys().prop_map(Op::Insert),
        small_keys().prop_map(Op::Remove),
    ]
}

fn config() -> impl Strategy<Value = Config> {
    (
        4usize..12,
        1usize..4,
        prop::bool::ANY,
        prop::sample::select(vec![1usize, 8, 2048]),
    )
        .prop_map(|(h, c, rank, cutoff)| Config {
            leaf_threshold: h,
            rebuild_factor: c,
            seq_cutoff: cutoff,
            routing: if rank {
                Routing::Rank
            } else {
                Routing::Interpolation
            },
            ..Config::default()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn batched_ops_match_oracle(cfg in config(), init in small_keys(), ops in prop::collection::vec(op(), 1..12)) {
        let init = Batch::normalize(init);
        let mut tree = Tree::from_batch(&init, cfg).unwrap();
        let mut oracle = OracleSet::from_batch(&init);
        for op in ops {
            match op {
                Op::Contains(k) => {
                    let b = Batch::normalize(k);
                    let got = tree.contains_batched(&b);
                    prop_assert_eq!(&got, &oracle.contains_batched(&b));
                    for (i, &k) in b.keys().iter().enumerate() {
                        prop_assert_eq!(contains_scalar(tree.root(), k), got[i]);
                    }
                }
                Op::Insert(k) => {
                    let b = Batch::normalize(k);
                    prop_assert_eq!(tree.insert_batched(&b), oracle.insert_batched(&b));
                }
                Op::Remove(k) => {
                    let b = Batch::normalize(k);
                    prop_assert_eq!(tree.remove_batched(&b), oracle.remove_batched(&b));
                }
            }
            prop_assert_eq!(tree.len(), oracle.len());
            let v = tree.validate();
            prop_assert!(v.is_empty(), "{}", v[0]);
        }
        prop_assert_eq!(tree.to_vec(), oracle.keys().to_vec());
    }

    #[test]
    fn set_algebra_identities(a in small_keys(), b in small_keys()) {
        let cfg = Config { leaf_threshold: 4, ..Config::default() };
        let union = run_setop(SetOp::Union, a.clone(), b.clone(), cfg).unwrap();
        let inter = run_setop(SetOp::Intersect, a.clone(), b.clone(), cfg).unwrap();
        let diff = run_setop(SetOp::Diff, a.clone(), b.clone(), cfg).unwrap();
        let na = Batch::normalize(a.clone()).into_vec();
        // A = (A \ B) + (A & B), disjointly.
        let mut rejoined = diff.clone();
        rejoined.extend(&inter);
        rejoined.sort_unstable();
        prop_assert_eq!(&rejoined, &na);
        prop_assert_eq!(union.len() + inter.len(), na.len() + Batch::normalize(b.clone()).len());
        prop_assert_eq!(run_setop(SetOp::Union, b.clone(), a.clone(), cfg).unwrap(), union);
        prop_assert_eq!(run_setop(SetOp::Intersect, b, a, cfg).unwrap(), inter);
    }

    #[test]
    fn setops_files_match_btreeset(a in prop::collection::vec(any::<Key>(), 0..200), b in prop::collection::vec(-50i64..50, 0..200), overlap in 0usize..100) {
        let mut b = b;
        b.extend(a.iter().take(overlap));
        let dir = tempfile::tempdir().unwrap();
        let (fa, fb, out) = (dir.path().join("a"), dir.path().join("b"), dir.path().join("out"));
        write_keys(&fa, &a).unwrap();
        write_keys(&fb, &b).unwrap();
        let sa: BTreeSet<Key> = a.iter().copied().collect();
        let sb: BTreeSet<Key> = b.iter().copied().collect();
        for (op, want) in [
            (SetOp::Union, sa.union(&sb).copied().collect::<Vec<_>>()),
            (SetOp::Intersect, sa.intersection(&sb).copied().collect()),
            (SetOp::Diff, sa.difference(&sb).copied().collect()),
        ] {
            setops_cmd(op, &fa, &fb, &out, Config { leaf_threshold: 4, ..Config::default() }).unwrap();
            prop_assert_eq!(read_keys(&out).unwrap(), want, "{}", op);
        }
    }

    #[test]
    fn flatten_inverts_build(keys in prop::collection::vec(any::<Key>(), 0..3000), h in 4usize..20) {
        let keys = Batch::normalize(keys).into_vec();
        let cfg = Config { leaf_threshold: h, ..Config::default() };
        let root = build_ideal(&keys, &cfg);
        prop_assert!(is_ideally_balanced(root.as_deref(), &cfg));
        prop_assert_eq!(flatten_to_vec(root.as_deref(), &cfg), keys);
    }

    #[test]
    fn interpolation_search_is_rank(keys in prop::collection::vec(any::<Key>(), 1..5000), probes in prop::collection::vec(any::<Key>(), 1..64)) {
        let keys = Batch::normalize(keys).into_vec();
        let root = build_ideal(&keys, &Config { leaf_threshold: 4, ..Config::default() }).unwrap();
        let rep = root.rep();
        for x in probes.into_iter().chain(rep.iter().copied()) {
            prop_assert_eq!(interpolation_search(&root, x), rep.partition_point(|&e| e <= x));
        }
    }
}

#[test]
fn interpolation_search_matches_rank_on_random_nodes() {
    let mut x: u64 = 0x9e37_79b9_7f4a_7c15;
    let mut next = || {
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        x
    };
    let mut checked = 0;
    while checked < 10_000 {
        let n = (next() % 20_000) as usize + 1;
        let spread = 1u64 << (next() % 63);
        let keys = Batch::normalize(
            (0..n)
                .map(|_| (next() % spread) as Key - (spread / 2) as Key)
                .collect(),
        )
        .into_vec();
        let root = build_ideal(&keys, &Config::default()).unwrap();
        let rep = root.rep();
        for _ in 0..100 {
            let probe = match next() % 3 {
                0 => rep[(next() as usize) % rep.len()],
                1 => (next() % spread) as Key - (spread / 2) as Key,
                _ => next() as Key,
            };
            assert_eq!(
                interpolation_search(&root, probe),
                rep.partition_point(|&e| e <= probe)
            );
            checked += 1;
        }
    }
}

#[test]
fn height_stays_doubly_logarithmic() {
    for n in [2usize, 100, 10_000, 300_000] {
        let keys: Vec<Key> = (0..n as Key).map(|i| i * 3 - 7).collect();
        let root = build_ideal(&keys, &Config::default()).unwrap();
        let bound = (n as f64).log2().log2().ceil().max(0.0) as usize + 2;
        assert!(root.height() <= bound, "n={n}: {} > {bound}", root.height());
    }
}

#[test]
fn updates_without_rebuild_lose_ideal_shape() {
    let cfg = Config {
        rebuild_factor: usize::MAX,
        leaf_threshold: 4,
        ..Config::default()
    };
    let mut tree = Tree::from_batch(
        &Batch::new((0..1_000).map(|i| i * 100).collect()).unwrap(),
        cfg,
    )
    .unwrap();
    assert!(tree.is_ideally_balanced());
    tree.insert_batched(&Batch::new((1..100).collect()).unwrap());
    assert!(!tree.is_ideally_balanced());
    assert!(tree.validate().is_empty());

    let rebuilt = Tree::from_batch(&Batch::new(tree.to_vec()).unwrap(), cfg).unwrap();
    assert!(rebuilt.is_ideally_balanced());
    assert_eq!(rebuilt.to_vec(), tree.to_vec());
}

#[test]
fn extreme_keys_round_trip() {
    let keys = vec![Key::MIN, Key::MIN + 1, -1, 0, 1, Key::MAX - 1, Key::MAX];
    let mut tree = Tree::from_batch(&Batch::new(keys.clone()).unwrap(), Config::default()).unwrap();
    assert_eq!(
        tree.contains_batched(&Batch::new(keys.clone()).unwrap()),
        vec![true; 7]
    );
    assert_eq!(
        tree.remove_batched(&Batch::new(vec![Key::MIN, Key::MAX]).unwrap()),
        2
    );
    assert_eq!(tree.to_vec(), &keys[1..6]);
}
