//! C ABI over the pbist tree.
//!
//! Trees are opaque heap handles created by `pbist_tree_new` or
//! `pbist_tree_from_sorted` and released with `pbist_tree_free`. Every
//! fallible call returns a `PbistStatus`; results go through out-pointers.
//! Panics never cross the boundary and are reported as `PBIST_STATUS_PANIC`.
//!
//! Batches are arrays of `int64_t` that must be strictly increasing;
//! `pbist_normalize` sorts and deduplicates arbitrary input in place.

use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::slice;

use pbist::{Batch, Config, Routing, Tree};

/// Opaque tree handle.
pub struct PbistTree {
    tree: Tree,
    pool: Option<rayon::ThreadPool>,
}

impl PbistTree {
    fn run<R: Send>(&mut self, f: impl FnOnce(&mut Tree) -> R + Send) -> R {
        match &self.pool {
            Some(pool) => pool.install(|| f(&mut self.tree)),
            None => f(&mut self.tree),
        }
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PbistStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidConfig = 2,
    UnsortedBatch = 3,
    BufferTooSmall = 4,
    ThreadPool = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct PbistConfig {
    /// Nodes holding at most this many keys are leaves (>= 4).
    pub leaf_threshold: usize,
    /// A subtree is rebuilt after more than this many times its initial size
    /// in modifications (>= 1).
    pub rebuild_factor: usize,
    /// Interpolation index exponent, in [0.5, 1).
    pub index_exponent: f64,
    /// Work below this many elements runs sequentially (>= 1).
    pub seq_cutoff: usize,
    /// Route by binary search instead of the interpolation index.
    pub rank_routing: bool,
}

impl From<PbistConfig> for Config {
    fn from(c: PbistConfig) -> Config {
        Config {
            leaf_threshold: c.leaf_threshold,
            rebuild_factor: c.rebuild_factor,
            index_exponent: c.index_exponent,
            seq_cutoff: c.seq_cutoff,
            routing: if c.rank_routing {
                Routing::Rank
            } else {
                Routing::Interpolation
            },
        }
    }
}

fn guard(f: impl FnOnce() -> PbistStatus) -> PbistStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(PbistStatus::Panic)
}

/// # Safety
/// `ptr` must be null with `len == 0`, or point to `len` readable values.
unsafe fn view<'a, T>(ptr: *const T, len: usize) -> Option<&'a [T]> {
    if len == 0 {
        Some(&[])
    } else if ptr.is_null() {
        None
    } else {
        Some(slice::from_raw_parts(ptr, len))
    }
}

/// # Safety
/// As for [`view`], with writable memory.
unsafe fn view_mut<'a, T>(ptr: *mut T, len: usize) -> Option<&'a mut [T]> {
    if len == 0 {
        Some(&mut [])
    } else if ptr.is_null() {
        None
    } else {
        Some(slice::from_raw_parts_mut(ptr, len))
    }
}

/// # Safety
/// `keys` must be null with `len == 0`, or point to `len` readable keys.
unsafe fn batch(keys: *const i64, len: usize) -> Result<Batch, PbistStatus> {
    let keys = view(keys, len).ok_or(PbistStatus::NullPointer)?;
    Batch::new(keys.to_vec()).map_err(|_| PbistStatus::UnsortedBatch)
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

/// Default parameters: leaf threshold 10, rebuild factor 2, exponent 0.75,
/// cutoff 2048, interpolation routing.
#[no_mangle]
pub extern "C" fn pbist_config_default() -> PbistConfig {
    let c = Config::default();
    PbistConfig {
        leaf_threshold: c.leaf_threshold,
        rebuild_factor: c.rebuild_factor,
        index_exponent: c.index_exponent,
        seq_cutoff: c.seq_cutoff,
        rank_routing: c.routing == Routing::Rank,
    }
}

/// Creates an empty tree. `config` may be null for the defaults.
///
/// # Safety
/// `config` must be null or valid for reads; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pbist_tree_new(
    config: *const PbistConfig,
    out: *mut *mut PbistTree,
) -> PbistStatus {
    pbist_tree_from_sorted(config, std::ptr::null(), 0, out)
}

/// Builds a balanced tree over `len` strictly increasing keys.
///
/// # Safety
/// `config` must be null or valid for reads, `keys` must point to `len`
/// keys (or be null when `len` is 0) and `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pbist_tree_from_sorted(
    config: *const PbistConfig,
    keys: *const i64,
    len: usize,
    out: *mut *mut PbistTree,
) -> PbistStatus {
    guard(|| {
        if out.is_null() {
            return PbistStatus::NullPointer;
        }
        let cfg: Config = if config.is_null() {
            Config::default()
        } else {
            (*config).into()
        };
        if cfg.validate().is_err() {
            return PbistStatus::InvalidConfig;
        }
        let b = tri!(batch(keys, len));
        let tree = match Tree::from_batch(&b, cfg) {
            Ok(t) => t,
            Err(_) => return PbistStatus::InvalidConfig,
        };
        *out = Box::into_raw(Box::new(PbistTree { tree, pool: None }));
        PbistStatus::Ok
    })
}

/// Releases a tree. Null is ignored.
///
/// # Safety
/// `tree` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pbist_tree_free(tree: *mut PbistTree) {
    if !tree.is_null() {
        drop(Box::from_raw(tree));
    }
}

/// Runs this tree's operations on a private pool of `workers` threads.
/// Zero returns to the global pool.
///
/// # Safety
/// `tree` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pbist_tree_set_workers(
    tree: *mut PbistTree,
    workers: usize,
) -> PbistStatus {
    guard(|| {
        let Some(t) = tree.as_mut() else {
            return PbistStatus::NullPointer;
        };
        if workers == 0 {
            t.pool = None;
            return PbistStatus::Ok;
        }
        match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
            Ok(pool) => {
                t.pool = Some(pool);
                PbistStatus::Ok
            }
            Err(_) => PbistStatus::ThreadPool,
        }
    })
}

/// Number of keys in the tree; 0 for a null handle.
///
/// # Safety
/// `tree` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pbist_tree_len(tree: *const PbistTree) -> usize {
    tree.as_ref().map_or(0, |t| t.tree.len())
}

/// Scalar membership; false for a null handle.
///
/// # Safety
/// `tree` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pbist_contains(tree: *const PbistTree, key: i64) -> bool {
    catch_unwind(AssertUnwindSafe(|| {
        tree.as_ref().is_some_and(|t| t.tree.contains(key))
    }))
    .unwrap_or(false)
}

/// Writes `out[i] = keys[i] is present` for a strictly increasing batch.
///
/// # Safety
/// `tree` must be a live handle; `keys` and `out` must each hold `len`
/// elements (or be null when `len` is 0).
#[no_mangle]
pub unsafe extern "C" fn pbist_contains_batched(
    tree: *mut PbistTree,
    keys: *const i64,
    len: usize,
    out: *mut bool,
) -> PbistStatus {
    guard(|| {
        let Some(t) = tree.as_mut() else {
            return PbistStatus::NullPointer;
        };
        let out = tri!(view_mut(out, len).ok_or(PbistStatus::NullPointer));
        let b = tri!(batch(keys, len));
        let found = t.run(|tree| tree.contains_batched(&b));
        out.copy_from_slice(&found);
        PbistStatus::Ok
    })
}

/// Inserts a strictly increasing batch. If `changed` is non-null it receives
/// the number of keys that were absent before.
///
/// # Safety
/// `tree` must be a live handle; `keys` must hold `len` keys (or be null when
/// `len` is 0); `changed` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pbist_insert_batched(
    tree: *mut PbistTree,
    keys: *const i64,
    len: usize,
    changed: *mut usize,
) -> PbistStatus {
    guard(|| {
        let Some(t) = tree.as_mut() else {
            return PbistStatus::NullPointer;
        };
        let b = tri!(batch(keys, len));
        let n = t.run(|tree| tree.insert_batched(&b));
        if let Some(c) = changed.as_mut() {
            *c = n;
        }
        PbistStatus::Ok
    })
}

/// Removes a strictly increasing batch. If `changed` is non-null it receives
/// the number of keys that were present before.
///
/// # Safety
/// As for [`pbist_insert_batched`].
#[no_mangle]
pub unsafe extern "C" fn pbist_remove_batched(
    tree: *mut PbistTree,
    keys: *const i64,
    len: usize,
    changed: *mut usize,
) -> PbistStatus {
    guard(|| {
        let Some(t) = tree.as_mut() else {
            return PbistStatus::NullPointer;
        };
        let b = tri!(batch(keys, len));
        let n = t.run(|tree| tree.remove_batched(&b));
        if let Some(c) = changed.as_mut() {
            *c = n;
        }
        PbistStatus::Ok
    })
}

/// Copies the keys in increasing order into `out` (capacity `cap`).
/// `out_len` always receives the tree size; when it exceeds `cap` nothing is
/// copied and `PBIST_STATUS_BUFFER_TOO_SMALL` is returned.
///
/// # Safety
/// `tree` must be a live handle, `out` must hold `cap` keys (or be null when
/// `cap` is 0) and `out_len` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pbist_tree_to_sorted(
    tree: *mut PbistTree,
    out: *mut i64,
    cap: usize,
    out_len: *mut usize,
) -> PbistStatus {
    guard(|| {
        let (Some(t), Some(out_len)) = (tree.as_mut(), out_len.as_mut()) else {
            return PbistStatus::NullPointer;
        };
        let n = t.tree.len();
        *out_len = n;
        if n > cap {
            return PbistStatus::BufferTooSmall;
        }
        let out = tri!(view_mut(out, n).ok_or(PbistStatus::NullPointer));
        let keys = t.run(|tree| tree.to_vec());
        out.copy_from_slice(&keys);
        PbistStatus::Ok
    })
}

/// Sorts and deduplicates `keys[..len]` in place; `out_len` receives the
/// new length.
///
/// # Safety
/// `keys` must hold `len` writable keys (or be null when `len` is 0) and
/// `out_len` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pbist_normalize(
    keys: *mut i64,
    len: usize,
    out_len: *mut usize,
) -> PbistStatus {
    guard(|| {
        let Some(out_len) = out_len.as_mut() else {
            return PbistStatus::NullPointer;
        };
        let keys = tri!(view_mut(keys, len).ok_or(PbistStatus::NullPointer));
        let b = pbist::normalize_batch(keys);
        keys[..b.len()].copy_from_slice(b.keys());
        *out_len = b.len();
        PbistStatus::Ok
    })
}

/// Static, NUL-terminated description of a status code.
#[no_mangle]
pub extern "C" fn pbist_status_message(status: PbistStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        PbistStatus::Ok => b"ok\0",
        PbistStatus::NullPointer => b"null pointer argument\0",
        PbistStatus::InvalidConfig => b"invalid tree configuration\0",
        PbistStatus::UnsortedBatch => b"batch keys are not strictly increasing\0",
        PbistStatus::BufferTooSmall => b"output buffer too small\0",
        PbistStatus::ThreadPool => b"could not create thread pool\0",
        PbistStatus::Panic => b"internal error\0",
    };
    s.as_ptr().cast()
}
