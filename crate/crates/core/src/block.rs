//! Points and blocks over a ground set of at most 64 points.
//!
//! A [`Block`] is a fixed-width bit set: bit `i` is set when the point with
//! internal index `i` (external label `v{i+1}`) is a member.

use std::cmp::Ordering;
use std::fmt;

use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::design::DesignError;

/// Largest supported ground set.
pub const MAX_POINTS: usize = 64;

/// A point of the ground set.
///
/// Stored 0-based; rendered and parsed 1-based so that `PointId::from_external(1)`
/// is `v1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointId(u8);

impl PointId {
    /// Builds a point from its 0-based index.
    ///
    /// Panics if `index >= 64`.
    pub fn new(index: usize) -> Self {
        assert!(index < MAX_POINTS, "point index {index} exceeds capacity");
        PointId(index as u8)
    }

    /// Builds a point from its 1-based label, checking it against the ground set size.
    pub fn from_external(label: usize, n: usize) -> Result<Self, DesignError> {
        if label == 0 || label > n || label > MAX_POINTS {
            return Err(DesignError::PointOutOfRange { point: label, n });
        }
        Ok(PointId((label - 1) as u8))
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// The 1-based label, `v{external}`.
    #[inline]
    pub fn external(self) -> usize {
        self.0 as usize + 1
    }

    #[inline]
    fn bit(self) -> u64 {
        1u64 << self.0
    }
}

impl fmt::Display for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.external())
    }
}

/// A set of points; the hyperedge unit.
///
/// Ordering is lexicographic on the ascending member lists, which is the
/// canonical order used for designs and file output.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Block(u64);

impl Block {
    pub const EMPTY: Block = Block(0);

    #[inline]
    pub const fn from_bits(bits: u64) -> Self {
        Block(bits)
    }

    #[inline]
    pub const fn bits(self) -> u64 {
        self.0
    }

    /// The full ground set `{v1, ..., vn}`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_POINTS);
        if n == MAX_POINTS {
            Block(u64::MAX)
        } else {
            Block((1u64 << n) - 1)
        }
    }

    /// Builds a block from 0-based indices, ignoring repeats. Used for curated tables.
    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        Block(indices.into_iter().fold(0, |acc, i| acc | PointId::new(i).bit()))
    }

    /// Builds a block from 1-based labels without range checks beyond capacity.
    pub fn from_labels<I: IntoIterator<Item = usize>>(labels: I) -> Self {
        Self::from_indices(labels.into_iter().map(|l| {
            assert!(l >= 1, "point labels are 1-based");
            l - 1
        }))
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
    pub fn contains(self, p: PointId) -> bool {
        self.0 & p.bit() != 0
    }

    #[inline]
    pub fn is_subset(self, other: Block) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn is_disjoint(self, other: Block) -> bool {
        self.0 & other.0 == 0
    }

    #[inline]
    pub fn union(self, other: Block) -> Block {
        Block(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: Block) -> Block {
        Block(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: Block) -> Block {
        Block(self.0 & !other.0)
    }

    #[inline]
    pub fn with(self, p: PointId) -> Block {
        Block(self.0 | p.bit())
    }

    #[inline]
    pub fn without(self, p: PointId) -> Block {
        Block(self.0 & !p.bit())
    }

    /// Smallest member, if any.
    pub fn first(self) -> Option<PointId> {
        (self.0 != 0).then(|| PointId(self.0.trailing_zeros() as u8))
    }

    /// Members in ascending order.
    pub fn iter(self) -> Members {
        Members(self.0)
    }

    /// Ascending 1-based labels.
    pub fn labels(self) -> Vec<usize> {
        self.iter().map(PointId::external).collect()
    }
}

/// Ascending iterator over the members of a [`Block`].
#[derive(Clone, Debug)]
pub struct Members(u64);

impl Iterator for Members {
    type Item = PointId;

    #[inline]
    fn next(&mut self) -> Option<PointId> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(PointId(i as u8))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Members {}

impl IntoIterator for Block {
    type Item = PointId;
    type IntoIter = Members;

    fn into_iter(self) -> Members {
        self.iter()
    }
}

impl FromIterator<PointId> for Block {
    fn from_iter<I: IntoIterator<Item = PointId>>(iter: I) -> Self {
        Block(iter.into_iter().fold(0, |acc, p| acc | p.bit()))
    }
}

impl Ord for Block {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for Block {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for Block {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.len()))?;
        for p in self.iter() {
            seq.serialize_element(&p.external())?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Block {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct BlockVisitor;

        impl<'de> Visitor<'de> for BlockVisitor {
            type Value = Block;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an array of distinct 1-based point labels")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Block, A::Error> {
                let mut block = Block::EMPTY;
                while let Some(label) = seq.next_element::<usize>()? {
                    let p = PointId::from_external(label, MAX_POINTS).map_err(de::Error::custom)?;
                    if block.contains(p) {
                        return Err(de::Error::custom(format!("duplicate point {label}")));
                    }
                    block = block.with(p);
                }
                Ok(block)
            }
        }

        deserializer.deserialize_seq(BlockVisitor)
    }
}

/// Builds a canonical block from 1-based labels over the ground set `1..=n`.
pub fn make_block(points: &[usize], n: usize) -> Result<Block, DesignError> {
    let mut block = Block::EMPTY;
    for &label in points {
        let p = PointId::from_external(label, n)?;
        if block.contains(p) {
            return Err(DesignError::DuplicatePoint { point: label });
        }
        block = block.with(p);
    }
    Ok(block)
}

/// The set complement of `b` within `{v1, ..., vn}`.
pub fn complement_block(b: Block, n: usize) -> Block {
    Block::full(n).difference(b)
}
