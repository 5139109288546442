//! Fork-join bulk-array primitives.
//!
//! Every primitive is deterministic: the output depends only on the input,
//! never on how many workers the enclosing rayon pool has. Below the grain
//! size each primitive runs a plain sequential loop.
//!
//! `merge` and `rank` recurse by splitting the larger input at its midpoint
//! and binary-searching the pivot in the other input. `filter`, `pack` and
//! `difference` are flag arrays followed by a blocked exclusive scan and a
//! scatter into disjoint output blocks.

use rayon::prelude::*;

/// Default number of elements below which primitives stay sequential.
pub const DEFAULT_GRAIN: usize = 2048;

/// Parallelism context carrying the sequential cutoff.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Par {
    grain: usize,
}

impl Default for Par {
    fn default() -> Self {
        Par {
            grain: DEFAULT_GRAIN,
        }
    }
}

impl Par {
    pub fn with_grain(grain: usize) -> Self {
        Par {
            grain: grain.max(1),
        }
    }

    pub fn grain(self) -> usize {
        self.grain
    }

    /// Runs `body(i)` exactly once for every `i` in `lo..hi`.
    ///
    /// Invocations for distinct indices may run concurrently, so `body` must
    /// only touch disjoint state per index.
    pub fn parallel_for<F>(self, lo: usize, hi: usize, body: F)
    where
        F: Fn(usize) + Sync + Send,
    {
        if hi <= lo {
            return;
        }
        if hi - lo <= self.grain {
            (lo..hi).for_each(body);
        } else {
            (lo..hi)
                .into_par_iter()
                .with_min_len(self.grain)
                .for_each(body);
        }
    }

    /// Builds `[f(0), f(1), .., f(n - 1)]`.
    pub fn tabulate<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        if n <= self.grain {
            (0..n).map(f).collect()
        } else {
            (0..n)
                .into_par_iter()
                .with_min_len(self.grain)
                .map(f)
                .collect()
        }
    }

    /// Exclusive prefix sums: `out[0] = 0`, `out[i] = arr[0] + .. + arr[i - 1]`.
    pub fn scan_exclusive(self, arr: &[usize]) -> Vec<usize> {
        let n = arr.len();
        if n <= self.grain {
            let mut acc = 0;
            return arr
                .iter()
                .map(|&x| {
                    let r = acc;
                    acc += x;
                    r
                })
                .collect();
        }
        // Blocks of at least two elements so the recursion on block sums shrinks.
        let block = self.grain.max(2);
        let block_sums: Vec<usize> = arr.par_chunks(block).map(|c| c.iter().sum()).collect();
        let offsets = self.scan_exclusive(&block_sums);
        let mut out = vec![0usize; n];
        out.par_chunks_mut(block)
            .zip(arr.par_chunks(block))
            .zip(offsets.par_iter())
            .for_each(|((dst, src), &off)| {
                let mut acc = off;
                for (d, &x) in dst.iter_mut().zip(src) {
                    *d = acc;
                    acc += x;
                }
            });
        out
    }

    /// Stable subsequence of `arr` at positions where `keep` is true.
    pub fn pack<T>(self, arr: &[T], keep: &[bool]) -> Vec<T>
    where
        T: Copy + Send + Sync,
    {
        assert_eq!(arr.len(), keep.len(), "pack: flag array length mismatch");
        if arr.len() <= self.grain {
            return arr
                .iter()
                .zip(keep)
                .filter_map(|(&x, &k)| k.then_some(x))
                .collect();
        }
        let counts: Vec<usize> = keep
            .par_chunks(self.grain)
            .map(|c| c.iter().filter(|&&k| k).count())
            .collect();
        let offsets = self.scan_exclusive(&counts);
        let total = offsets.last().copied().unwrap_or(0) + counts.last().copied().unwrap_or(0);
        if total == 0 {
            return Vec::new();
        }
        let mut out = vec![arr[0]; total];
        let mut blocks: Vec<&mut [T]> = Vec::with_capacity(counts.len());
        let mut rest: &mut [T] = &mut out;
        for &c in &counts {
            let (head, tail) = rest.split_at_mut(c);
            blocks.push(head);
            rest = tail;
        }
        blocks
            .into_par_iter()
            .zip(arr.par_chunks(self.grain))
            .zip(keep.par_chunks(self.grain))
            .for_each(|((dst, src), flags)| {
                let mut w = 0;
                for (&x, &k) in src.iter().zip(flags) {
                    if k {
                        dst[w] = x;
                        w += 1;
                    }
                }
            });
        out
    }

    /// Elements of `arr` satisfying `pred`, order preserved.
    pub fn filter<T, P>(self, arr: &[T], pred: P) -> Vec<T>
    where
        T: Copy + Send + Sync,
        P: Fn(&T) -> bool + Sync + Send,
    {
        let keep = self.tabulate(arr.len(), |i| pred(&arr[i]));
        self.pack(arr, &keep)
    }

    /// Merges two sorted arrays. Ties keep elements of `a` before those of `b`.
    pub fn merge<T>(self, a: &[T], b: &[T]) -> Vec<T>
    where
        T: Copy + Ord + Send + Sync,
    {
        let fill = match (a.first(), b.first()) {
            (Some(&x), _) | (None, Some(&x)) => x,
            (None, None) => return Vec::new(),
        };
        let mut out = vec![fill; a.len() + b.len()];
        self.merge_into(a, b, &mut out);
        out
    }

    fn merge_into<T>(self, a: &[T], b: &[T], out: &mut [T])
    where
        T: Copy + Ord + Send + Sync,
    {
        debug_assert_eq!(a.len() + b.len(), out.len());
        if out.len() <= self.grain {
            merge_sequential(a, b, out);
            return;
        }
        let (a_left, b_left, pivot, a_right, b_right) = if a.len() >= b.len() {
            let p = a.len() / 2;
            let j = b.partition_point(|x| *x < a[p]);
            (&a[..p], &b[..j], a[p], &a[p + 1..], &b[j..])
        } else {
            let j = b.len() / 2;
            let p = a.partition_point(|x| *x <= b[j]);
            (&a[..p], &b[..j], b[j], &a[p..], &b[j + 1..])
        };
        let (left, rest) = out.split_at_mut(a_left.len() + b_left.len());
        let (mid, right) = rest.split_at_mut(1);
        mid[0] = pivot;
        rayon::join(
            || self.merge_into(a_left, b_left, left),
            || self.merge_into(a_right, b_right, right),
        );
    }

    /// Elements of sorted `a` that do not occur in sorted `b`.
    pub fn difference<T>(self, a: &[T], b: &[T]) -> Vec<T>
    where
        T: Copy + Ord + Send + Sync,
    {
        if b.is_empty() || a.is_empty() {
            return a.to_vec();
        }
        let ranks = self.rank(b, a);
        let keep = self.tabulate(a.len(), |i| {
            let r = ranks[i];
            !(r > 0 && b[r - 1] == a[i])
        });
        self.pack(a, &keep)
    }

    /// `out[i] = elem_rank(a, b[i])`. `a` sorted, `b` nondecreasing.
    pub fn rank<T>(self, a: &[T], b: &[T]) -> Vec<usize>
    where
        T: Copy + Ord + Send + Sync,
    {
        let mut out = vec![0usize; b.len()];
        self.rank_into(a, b, &mut out, 0);
        out
    }

    fn rank_into<T>(self, a: &[T], b: &[T], out: &mut [usize], offset: usize)
    where
        T: Copy + Ord + Send + Sync,
    {
        debug_assert_eq!(b.len(), out.len());
        if b.is_empty() {
            return;
        }
        if a.len() + b.len() <= self.grain {
            let mut i = 0;
            for (o, x) in out.iter_mut().zip(b) {
                while i < a.len() && a[i] <= *x {
                    i += 1;
                }
                *o = offset + i;
            }
            return;
        }
        if b.len() >= a.len() {
            let j = b.len() / 2;
            let p = elem_rank(a, &b[j]);
            let (left, rest) = out.split_at_mut(j);
            let (mid, right) = rest.split_at_mut(1);
            mid[0] = offset + p;
            rayon::join(
                || self.rank_into(&a[..p], &b[..j], left, offset),
                || self.rank_into(&a[p..], &b[j + 1..], right, offset + p),
            );
        } else {
            let p = a.len() / 2;
            let j = b.partition_point(|x| *x < a[p]);
            let (left, right) = out.split_at_mut(j);
            rayon::join(
                || self.rank_into(&a[..p], &b[..j], left, offset),
                || self.rank_into(&a[p + 1..], &b[j..], right, offset + p + 1),
            );
        }
    }
}

fn merge_sequential<T: Copy + Ord>(a: &[T], b: &[T], out: &mut [T]) {
    let (mut i, mut j) = (0, 0);
    for slot in out.iter_mut() {
        if j >= b.len() || (i < a.len() && a[i] <= b[j]) {
            *slot = a[i];
            i += 1;
        } else {
            *slot = b[j];
            j += 1;
        }
    }
}

/// Number of elements of sorted `a` that are `<= x`.
pub fn elem_rank<T: Ord>(a: &[T], x: &T) -> usize {
    a.partition_point(|e| e <= x)
}

pub fn parallel_for<F>(lo: usize, hi: usize, body: F)
where
    F: Fn(usize) + Sync + Send,
{
    Par::default().parallel_for(lo, hi, body)
}

pub fn scan_exclusive(arr: &[usize]) -> Vec<usize> {
    Par::default().scan_exclusive(arr)
}

pub fn filter<T, P>(arr: &[T], pred: P) -> Vec<T>
where
    T: Copy + Send + Sync,
    P: Fn(&T) -> bool + Sync + Send,
{
    Par::default().filter(arr, pred)
}

pub fn merge<T: Copy + Ord + Send + Sync>(a: &[T], b: &[T]) -> Vec<T> {
    Par::default().merge(a, b)
}

pub fn difference<T: Copy + Ord + Send + Sync>(a: &[T], b: &[T]) -> Vec<T> {
    Par::default().difference(a, b)
}

pub fn rank<T: Copy + Ord + Send + Sync>(a: &[T], b: &[T]) -> Vec<usize> {
    Par::default().rank(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::sync::atomic::{AtomicU64, Ordering};

    fn sorted_set(max_len: usize) -> impl Strategy<Value = Vec<i64>> {
        prop::collection::btree_set(-500i64..500, 0..max_len).prop_map(|s| s.into_iter().collect())
    }

    fn grains() -> impl Strategy<Value = Par> {
        prop_oneof![Just(1usize), Just(3), Just(16), Just(DEFAULT_GRAIN)].prop_map(Par::with_grain)
    }

    #[test]
    fn parallel_for_empty_range() {
        let hits = AtomicU64::new(0);
        parallel_for(0, 0, |_| {
            hits.fetch_add(1, Ordering::Relaxed);
        });
        assert_eq!(hits.load(Ordering::Relaxed), 0);
    }

    #[test]
    fn parallel_for_identity_fill() {
        let out: Vec<AtomicU64> = (0..4).map(|_| AtomicU64::new(99)).collect();
        parallel_for(0, 4, |i| out[i].store(i as u64, Ordering::Relaxed));
        let got: Vec<u64> = out.iter().map(|c| c.load(Ordering::Relaxed)).collect();
        assert_eq!(got, vec![0, 1, 2, 3]);
    }

    #[test]
    fn parallel_for_touches_every_cell_once() {
        let n = 1_000_000;
        let cells: Vec<AtomicU64> = (0..n).map(|_| AtomicU64::new(0)).collect();
        for workers in [1, 4] {
            cells.iter().for_each(|c| c.store(0, Ordering::Relaxed));
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .unwrap();
            pool.install(|| {
                Par::with_grain(1000).parallel_for(0, n, |i| {
                    cells[i].fetch_add(1, Ordering::Relaxed);
                })
            });
            assert!(cells.iter().all(|c| c.load(Ordering::Relaxed) == 1));
        }
    }

    #[test]
    fn scan_examples() {
        assert_eq!(scan_exclusive(&[]), Vec::<usize>::new());
        assert_eq!(scan_exclusive(&[1, 2, 3]), vec![0, 1, 3]);
        let big: Vec<usize> = (0..10_000).map(|i| i % 7).collect();
        let got = Par::with_grain(10).scan_exclusive(&big);
        let mut acc = 0;
        for (i, &x) in big.iter().enumerate() {
            assert_eq!(got[i], acc);
            acc += x;
        }
    }

    #[test]
    fn filter_even() {
        assert_eq!(
            filter(&[1i64, 3, 8, 6, 7, 2], |x| x % 2 == 0),
            vec![8, 6, 2]
        );
        assert_eq!(filter(&[] as &[i64], |_| true), Vec::<i64>::new());
    }

    #[test]
    fn merge_examples() {
        assert_eq!(merge(&[1i64, 5], &[2, 4, 8]), vec![1, 2, 4, 5, 8]);
        assert_eq!(merge(&[], &[2i64, 4]), vec![2, 4]);
        assert_eq!(
            Par::with_grain(1).merge(&[1i64, 5], &[2, 4, 8]),
            vec![1, 2, 4, 5, 8]
        );
    }

    #[test]
    fn difference_examples() {
        assert_eq!(difference(&[2i64, 4, 5, 7, 9], &[2, 5, 9]), vec![4, 7]);
        assert_eq!(difference(&[2i64, 4], &[]), vec![2, 4]);
        assert_eq!(
            Par::with_grain(1).difference(&[2i64, 4, 5, 7, 9], &[2, 5, 9]),
            vec![4, 7]
        );
    }

    #[test]
    fn elem_rank_examples() {
        let a = [1i64, 3, 5, 7];
        assert_eq!(elem_rank(&a, &2), 1);
        assert_eq!(elem_rank(&a, &5), 3);
        assert_eq!(elem_rank(&a, &-1), 0);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&[1i64, 3, 5, 7], &[]), Vec::<usize>::new());
        assert_eq!(rank(&[1i64, 3, 5, 7], &[0, 3, 9]), vec![0, 2, 4]);
        assert_eq!(
            Par::with_grain(1).rank(&[1i64, 3, 5, 7], &[0, 3, 9]),
            vec![0, 2, 4]
        );
    }

    #[test]
    fn rank_accepts_repeated_queries() {
        let a = [10i64, 20, 30];
        let b = [10i64, 10, 10, 20, 20, 30, 30, 30];
        assert_eq!(
            Par::with_grain(1).rank(&a, &b),
            vec![1, 1, 1, 2, 2, 3, 3, 3]
        );
    }

    proptest! {
        #[test]
        fn scan_differences_recover_input(arr in prop::collection::vec(0usize..50, 0..300), par in grains()) {
            let s = par.scan_exclusive(&arr);
            prop_assert_eq!(s.len(), arr.len());
            for i in 0..arr.len().saturating_sub(1) {
                prop_assert_eq!(s[i + 1] - s[i], arr[i]);
            }
        }

        #[test]
        fn merge_matches_sorted_union(a in sorted_set(200), b in sorted_set(200), par in grains()) {
            let b: Vec<i64> = b.into_iter().filter(|x| a.binary_search(x).is_err()).collect();
            let mut expect: Vec<i64> = a.iter().chain(&b).copied().collect();
            expect.sort_unstable();
            prop_assert_eq!(par.merge(&a, &b), expect);
        }

        #[test]
        fn rank_is_monotone_and_bounded(a in sorted_set(200), b in sorted_set(200), par in grains()) {
            let r = par.rank(&a, &b);
            prop_assert!(r.windows(2).all(|w| w[0] <= w[1]));
            prop_assert!(r.iter().all(|&x| x <= a.len()));
            for (x, &ri) in b.iter().zip(&r) {
                prop_assert_eq!(ri, a.iter().filter(|e| *e <= x).count());
            }
        }

        #[test]
        fn difference_and_filter_match_naive(a in sorted_set(200), b in sorted_set(200), par in grains()) {
            let expect: Vec<i64> = a.iter().copied().filter(|x| !b.contains(x)).collect();
            prop_assert_eq!(par.difference(&a, &b), expect);
            let odd: Vec<i64> = a.iter().copied().filter(|x| x % 2 != 0).collect();
            prop_assert_eq!(par.filter(&a, |x| x % 2 != 0), odd);
        }
    }
}
