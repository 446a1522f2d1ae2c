use std::collections::BTreeMap;

use crate::block::{Block, PointId};
use crate::design::Design;

/// Isomorphism invariant of a point: its degree and the sorted intersection
/// profiles of the blocks through it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PointSignature {
    pub degree: usize,
    pub block_profiles: Vec<Vec<(usize, usize)>>,
}

fn block_profile(blocks: &[Block], i: usize) -> Vec<(usize, usize)> {
    let mut hist = BTreeMap::new();
    for (j, b) in blocks.iter().enumerate() {
        if j != i {
            *hist.entry(blocks[i].intersection(*b).len()).or_insert(0) += 1;
        }
    }
    hist.into_iter().collect()
}

pub fn point_signatures(d: &Design) -> Vec<PointSignature> {
    let blocks = d.blocks();
    let profiles: Vec<_> = (0..blocks.len()).map(|i| block_profile(blocks, i)).collect();
    (0..d.points())
        .map(|p| {
            let p = PointId::new(p);
            let mut through: Vec<_> = blocks
                .iter()
                .zip(&profiles)
                .filter(|(b, _)| b.contains(p))
                .map(|(_, prof)| prof.clone())
                .collect();
            through.sort();
            PointSignature {
                degree: through.len(),
                block_profiles: through,
            }
        })
        .collect()
}

struct Search<'a> {
    from: &'a [Block],
    to: &'a [Block],
    candidates: Vec<Vec<usize>>,
    image: Vec<usize>,
    used: u64,
}

impl Search<'_> {
    /// The blocks of both designs, restricted to the assigned points and
    /// their images, must agree as multisets under the partial map.
    fn consistent(&self, depth: usize) -> bool {
        let domain = if depth == 64 { u64::MAX } else { (1u64 << depth) - 1 };
        let mut a: Vec<u64> = self
            .from
            .iter()
            .map(|b| {
                Block::from_bits(b.bits() & domain)
                    .iter()
                    .fold(0u64, |acc, p| acc | 1u64 << self.image[p.index()])
            })
            .collect();
        let mut b: Vec<u64> = self.to.iter().map(|b| b.bits() & self.used).collect();
        a.sort_unstable();
        b.sort_unstable();
        a == b
    }

    fn extend(&mut self, depth: usize) -> bool {
        if depth == self.image.len() {
            return true;
        }
        for ci in 0..self.candidates[depth].len() {
            let q = self.candidates[depth][ci];
            if self.used & (1u64 << q) != 0 {
                continue;
            }
            self.image[depth] = q;
            self.used |= 1u64 << q;
            if self.consistent(depth + 1) && self.extend(depth + 1) {
                return true;
            }
            self.used &= !(1u64 << q);
        }
        false
    }
}

/// A point bijection `π` (with `π[i]` the image of point `i`) carrying the
/// blocks of `d1` onto the blocks of `d2`, if one exists.
pub fn isomorphic(d1: &Design, d2: &Design) -> Option<Vec<PointId>> {
    if d1.params() != d2.params() || d1.len() != d2.len() {
        return None;
    }
    let n = d1.points();
    let s1 = point_signatures(d1);
    let s2 = point_signatures(d2);
    let mut m1 = s1.clone();
    let mut m2 = s2.clone();
    m1.sort();
    m2.sort();
    if m1 != m2 {
        return None;
    }

    let candidates = s1
        .iter()
        .map(|sig| (0..n).filter(|&q| s2[q] == *sig).collect())
        .collect();
    let mut search = Search {
        from: d1.blocks(),
        to: d2.blocks(),
        candidates,
        image: vec![0; n],
        used: 0,
    };
    search
        .extend(0)
        .then(|| search.image.iter().map(|&q| PointId::new(q)).collect())
}
