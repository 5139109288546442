use crate::Key;

/// Interpolation index of an inner node.
///
/// The interval `[lower, upper]` is cut into `m` equal slots; `slots[i]` is
/// the number of `rep` entries `<= grid_point(i)`. A lookup maps a key to its
/// slot arithmetically and returns that count as a starting position for a
/// short linear scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdIndex {
    slots: Vec<usize>,
    lower: Key,
    upper: Key,
}

impl IdIndex {
    /// Wraps precomputed slot values. `slots.len()` must be `m + 1`.
    pub fn from_parts(slots: Vec<usize>, lower: Key, upper: Key) -> Self {
        assert!(slots.len() >= 2, "an index needs at least one slot");
        assert!(lower <= upper, "index bounds out of order");
        IdIndex {
            slots,
            lower,
            upper,
        }
    }

    pub fn slots(&self) -> &[usize] {
        &self.slots
    }

    pub fn lower(&self) -> Key {
        self.lower
    }

    pub fn upper(&self) -> Key {
        self.upper
    }

    pub fn slot_count(&self) -> usize {
        self.slots.len() - 1
    }

    pub fn is_degenerate(&self) -> bool {
        self.lower == self.upper
    }

    /// `i`-th grid point of this index.
    pub fn grid_point(&self, i: usize) -> Key {
        grid_point(self.lower, self.upper, self.slot_count(), i)
    }

    /// `floor((key - lower) * m / (upper - lower))`, clamped into `[0, m]`.
    pub fn slot_of(&self, key: Key) -> usize {
        let m = self.slot_count();
        if key <= self.lower {
            return 0;
        }
        if key >= self.upper {
            return m;
        }
        // lower < key < upper, so both differences fit in u64.
        let offset = (key as i128 - self.lower as i128) as u64;
        let width = (self.upper as i128 - self.lower as i128) as u64;
        let s = match offset.checked_mul(m as u64) {
            Some(p) => p / width,
            None => ((offset as u128 * m as u128) / width as u128) as u64,
        };
        (s as usize).min(m)
    }

    /// Approximate position of `key` in the owning node's `rep`.
    pub fn hint(&self, key: Key) -> usize {
        self.slots[self.slot_of(key)]
    }
}

/// `lower + floor(i * (upper - lower) / m)` in 128-bit arithmetic.
pub fn grid_point(lower: Key, upper: Key, m: usize, i: usize) -> Key {
    debug_assert!(m >= 1 && i <= m && lower <= upper);
    let width = upper as i128 - lower as i128;
    let step = (i as i128 * width).div_euclid(m as i128);
    (lower as i128 + step) as Key
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slot_mapping_clamps_outside_keys() {
        let idx = IdIndex::from_parts(vec![0, 1, 2, 3, 4], 0, 100);
        assert_eq!(idx.slot_of(-5), 0);
        assert_eq!(idx.slot_of(0), 0);
        assert_eq!(idx.slot_of(24), 0);
        assert_eq!(idx.slot_of(25), 1);
        assert_eq!(idx.slot_of(99), 3);
        assert_eq!(idx.slot_of(100), 4);
        assert_eq!(idx.slot_of(1_000), 4);
    }

    #[test]
    fn extreme_bounds_do_not_overflow() {
        let idx = IdIndex::from_parts(vec![0; 1001], Key::MIN, Key::MAX);
        assert_eq!(idx.slot_of(0), 500);
        assert_eq!(idx.slot_of(Key::MAX - 1), 999);
        assert_eq!(idx.grid_point(0), Key::MIN);
        assert_eq!(idx.grid_point(1000), Key::MAX);
        let mid = idx.grid_point(500);
        assert!((-1..=0).contains(&mid), "mid grid point {mid}");
    }

    #[test]
    fn grid_is_monotone_for_negative_ranges() {
        let pts: Vec<Key> = (0..=7).map(|i| grid_point(-10, -3, 7, i)).collect();
        assert_eq!(pts, vec![-10, -9, -8, -7, -6, -5, -4, -3]);
        let coarse: Vec<Key> = (0..=3).map(|i| grid_point(-5, 0, 3, i)).collect();
        assert_eq!(coarse, vec![-5, -4, -2, 0]);
    }
}
