//! Lexicographic enumeration of fixed-size subsets of `{v1, ..., vn}`.

use crate::block::{Block, PointId, MAX_POINTS};

/// `C(n, r)`, exact in `u64` for every `n <= 64`.
pub fn binomial(n: usize, r: usize) -> u64 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for j in 0..r {
        acc = acc * (n - j) as u128 / (j + 1) as u128;
    }
    acc as u64
}

/// Yields every `i`-subset of `{v1, ..., vn}` exactly once, in lexicographic
/// order of the ascending label lists.
pub fn enumerate_subsets(n: usize, i: usize) -> Subsets {
    assert!(n <= MAX_POINTS, "ground set of {n} points exceeds capacity");
    let indices = if i <= n { Some((0..i).collect()) } else { None };
    Subsets { n, indices }
}

/// Iterator returned by [`enumerate_subsets`].
#[derive(Clone, Debug)]
pub struct Subsets {
    n: usize,
    indices: Option<Vec<usize>>,
}

impl Iterator for Subsets {
    type Item = Block;

    fn next(&mut self) -> Option<Block> {
        let idx = self.indices.as_mut()?;
        let out = idx.iter().map(|&i| PointId::new(i)).collect();

        // advance to the lexicographic successor
        let r = idx.len();
        let mut pos = r;
        while pos > 0 && idx[pos - 1] == self.n - r + pos - 1 {
            pos -= 1;
        }
        if pos == 0 {
            self.indices = None;
        } else {
            idx[pos - 1] += 1;
            for j in pos..r {
                idx[j] = idx[j - 1] + 1;
            }
        }
        Some(out)
    }
}
