//! Bitmask subsets of the variable index set.
//!
//! A [`Subset`] is a single 64-bit word; bit `i` is set iff variable `i`
//! (0-based) is a member. All set algebra is a handful of integer ops, so the
//! type is `Copy` and passed by value everywhere.

use std::fmt;
use std::ops::{BitAnd, BitOr, Not, Sub};

/// Maximum number of variables a [`Subset`] can address.
pub const MAX_DIM: usize = 64;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Subset(u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    #[inline]
    pub const fn from_bits(bits: u64) -> Self {
        Subset(bits)
    }

    #[inline]
    pub const fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn singleton(i: usize) -> Self {
        debug_assert!(i < MAX_DIM);
        Subset(1u64 << i)
    }

    /// `{0, 1, ..., d-1}`.
    #[inline]
    pub fn full(d: usize) -> Self {
        debug_assert!(d <= MAX_DIM);
        if d == MAX_DIM {
            Subset(u64::MAX)
        } else {
            Subset((1u64 << d) - 1)
        }
    }

    /// `[d] \ {j}`, the ground set of conditioning sets for node `j`.
    #[inline]
    pub fn ground(d: usize, j: usize) -> Self {
        Subset::full(d).without(j)
    }

    #[inline]
    pub fn contains(self, i: usize) -> bool {
        i < MAX_DIM && self.0 & (1u64 << i) != 0
    }

    #[inline]
    pub fn with(self, i: usize) -> Self {
        Subset(self.0 | (1u64 << i))
    }

    #[inline]
    pub fn without(self, i: usize) -> Self {
        Subset(self.0 & !(1u64 << i))
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn is_superset_of(self, other: Subset) -> bool {
        other.is_subset_of(self)
    }

    #[inline]
    pub fn is_disjoint(self, other: Subset) -> bool {
        self.0 & other.0 == 0
    }

    #[inline]
    pub fn union(self, other: Subset) -> Self {
        Subset(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: Subset) -> Self {
        Subset(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: Subset) -> Self {
        Subset(self.0 & !other.0)
    }

    /// Smallest member, if any.
    #[inline]
    pub fn first(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    /// Largest member, if any.
    #[inline]
    pub fn last(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(63 - self.0.leading_zeros() as usize)
        }
    }

    /// Members in ascending order.
    pub fn iter(self) -> Members {
        Members(self.0)
    }

    /// All subsets of `self`, in ascending bitmask order (`∅` first, `self` last).
    pub fn subsets(self) -> Submasks {
        Submasks {
            mask: self.0,
            next: Some(0),
        }
    }

    /// Members as 1-based indices, the external convention.
    pub fn to_one_based(self) -> Vec<usize> {
        self.iter().map(|i| i + 1).collect()
    }

    /// Builds a subset from 1-based indices; returns the offending index if it
    /// is zero or exceeds `d`.
    pub fn from_one_based(indices: &[usize], d: usize) -> Result<Self, usize> {
        let mut s = Subset::EMPTY;
        for &i in indices {
            if i == 0 || i > d {
                return Err(i);
            }
            s = s.with(i - 1);
        }
        Ok(s)
    }
}

impl FromIterator<usize> for Subset {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        iter.into_iter().fold(Subset::EMPTY, Subset::with)
    }
}

impl IntoIterator for Subset {
    type Item = usize;
    type IntoIter = Members;

    fn into_iter(self) -> Members {
        self.iter()
    }
}

impl BitOr for Subset {
    type Output = Subset;
    fn bitor(self, rhs: Subset) -> Subset {
        self.union(rhs)
    }
}

impl BitAnd for Subset {
    type Output = Subset;
    fn bitand(self, rhs: Subset) -> Subset {
        self.intersection(rhs)
    }
}

impl Sub for Subset {
    type Output = Subset;
    fn sub(self, rhs: Subset) -> Subset {
        self.difference(rhs)
    }
}

impl Not for Subset {
    type Output = Subset;
    fn not(self) -> Subset {
        Subset(!self.0)
    }
}

/// Debug output uses 1-based indices to match every external surface.
impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (n, i) in self.iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        f.write_str("}")
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug)]
pub struct Members(u64);

impl Iterator for Members {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Members {}

/// Submask enumeration via `next = (cur - mask) & mask`, which visits
/// submasks in increasing numeric order.
#[derive(Clone, Debug)]
pub struct Submasks {
    mask: u64,
    next: Option<u64>,
}

impl Iterator for Submasks {
    type Item = Subset;

    #[inline]
    fn next(&mut self) -> Option<Subset> {
        let cur = self.next?;
        self.next = if cur == self.mask {
            None
        } else {
            Some(cur.wrapping_sub(self.mask) & self.mask)
        };
        Some(Subset(cur))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn basic_algebra() {
        let a: Subset = [0, 2, 5].into_iter().collect();
        let b: Subset = [2, 3].into_iter().collect();
        assert_eq!((a | b).to_one_based(), vec![1, 3, 4, 6]);
        assert_eq!((a & b).to_one_based(), vec![3]);
        assert_eq!((a - b).to_one_based(), vec![1, 6]);
        assert_eq!(a.len(), 3);
        assert!(Subset::singleton(2).is_subset_of(a));
        assert!(!b.is_subset_of(a));
        assert_eq!(a.first(), Some(0));
        assert_eq!(a.last(), Some(5));
        assert_eq!(Subset::EMPTY.first(), None);
        assert_eq!(format!("{:?}", a), "{1,3,6}");
    }

    #[test]
    fn full_and_ground() {
        assert_eq!(Subset::full(64).len(), 64);
        assert_eq!(Subset::full(0), Subset::EMPTY);
        assert_eq!(Subset::ground(4, 1).to_one_based(), vec![1, 3, 4]);
    }

    #[test]
    fn one_based_conversion() {
        assert_eq!(
            Subset::from_one_based(&[1, 3], 4).unwrap().iter().collect::<Vec<_>>(),
            vec![0, 2]
        );
        assert_eq!(Subset::from_one_based(&[0], 4), Err(0));
        assert_eq!(Subset::from_one_based(&[5], 4), Err(5));
    }

    #[test]
    fn submasks_ascending_and_complete() {
        let m = Subset::from_bits(0b1011_0100);
        let subs: Vec<u64> = m.subsets().map(Subset::bits).collect();
        assert_eq!(subs.len(), 16);
        assert!(subs.windows(2).all(|w| w[0] < w[1]));
        assert!(subs.iter().all(|&s| s & !m.bits() == 0));
        assert_eq!(Subset::EMPTY.subsets().count(), 1);
    }

    proptest! {
        #[test]
        fn members_roundtrip(bits in any::<u64>()) {
            let s = Subset::from_bits(bits);
            let back: Subset = s.iter().collect();
            prop_assert_eq!(back, s);
            prop_assert_eq!(s.iter().len(), s.len());
        }

        #[test]
        fn difference_disjoint_from_rhs(a in any::<u64>(), b in any::<u64>()) {
            let (a, b) = (Subset::from_bits(a), Subset::from_bits(b));
            prop_assert!((a - b).is_disjoint(b));
            prop_assert_eq!((a - b) | (a & b), a);
        }
    }
}
