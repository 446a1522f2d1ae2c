//! Exhaustive checks of the Steiner property, covering numbers, complement
//! closure and intersection spectra, plus derived designs.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::block::{complement_block, Block, PointId};
use crate::design::{Design, DesignError, DesignParams};
use crate::subsets::enumerate_subsets;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerificationError {
    #[error("complement closure needs n = 2k, got k={block_size} n={points}")]
    NotHalving { block_size: usize, points: usize },
    #[error(transparent)]
    Design(#[from] DesignError),
}

/// Outcome of [`verify_steiner`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub is_steiner: bool,
    /// `s`-subsets lying in no block.
    pub uncovered: Vec<Block>,
    /// `s`-subsets lying in two or more blocks.
    pub multiply_covered: Vec<Block>,
    /// `i → λᵢ` for `0 <= i <= s`; `None` where coverage of `i`-subsets is not uniform.
    pub covering_numbers: BTreeMap<usize, Option<u64>>,
    /// `None` when `n != 2k` and the question does not apply.
    pub complement_closed: Option<bool>,
}

/// Counts, for every `s`-subset of the ground set, the blocks containing it.
pub fn verify_steiner(d: &Design) -> VerificationReport {
    let p = d.params();
    let s = p.strength();

    let mut counts: HashMap<Block, u32> = HashMap::new();
    for &b in d.blocks() {
        let members: Vec<PointId> = b.iter().collect();
        for local in enumerate_subsets(members.len(), s) {
            let sub: Block = local.iter().map(|q| members[q.index()]).collect();
            *counts.entry(sub).or_default() += 1;
        }
    }

    let mut uncovered = Vec::new();
    let mut multiply_covered = Vec::new();
    for sub in enumerate_subsets(p.points(), s) {
        match counts.get(&sub).copied().unwrap_or(0) {
            0 => uncovered.push(sub),
            1 => {}
            _ => multiply_covered.push(sub),
        }
    }

    VerificationReport {
        is_steiner: uncovered.is_empty() && multiply_covered.is_empty(),
        uncovered,
        multiply_covered,
        covering_numbers: covering_numbers(d),
        complement_closed: is_complement_closed(d).ok(),
    }
}

/// `λᵢ` for `0 <= i <= s`, each confirmed uniform by counting over every `i`-subset.
pub fn covering_numbers(d: &Design) -> BTreeMap<usize, Option<u64>> {
    let p = d.params();
    (0..=p.strength())
        .map(|i| {
            let mut value = None;
            let mut uniform = true;
            for sub in enumerate_subsets(p.points(), i) {
                let c = d.blocks().iter().filter(|b| sub.is_subset(**b)).count() as u64;
                match value {
                    None => value = Some(c),
                    Some(v) if v != c => {
                        uniform = false;
                        break;
                    }
                    Some(_) => {}
                }
            }
            (i, if uniform { value } else { None })
        })
        .collect()
}

/// Histogram of `|b1 ∩ b2|` over unordered pairs of distinct blocks.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionSpectrum {
    pub histogram: BTreeMap<usize, u64>,
}

impl IntersectionSpectrum {
    pub fn total_pairs(&self) -> u64 {
        self.histogram.values().sum()
    }
}

pub fn intersection_spectrum(d: &Design) -> IntersectionSpectrum {
    let mut histogram = BTreeMap::new();
    let blocks = d.blocks();
    for (i, a) in blocks.iter().enumerate() {
        for b in &blocks[i + 1..] {
            *histogram.entry(a.intersection(*b).len()).or_insert(0) += 1;
        }
    }
    IntersectionSpectrum { histogram }
}

/// For each block (canonical order), how many other blocks meet it in `i` points.
pub fn block_profiles(d: &Design) -> Vec<BTreeMap<usize, u64>> {
    let blocks = d.blocks();
    blocks
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let mut row = BTreeMap::new();
            for (j, b) in blocks.iter().enumerate() {
                if i != j {
                    *row.entry(a.intersection(*b).len()).or_insert(0) += 1;
                }
            }
            row
        })
        .collect()
}

/// The common per-block profile, if every block has the same one.
pub fn uniform_block_profile(d: &Design) -> Option<BTreeMap<usize, u64>> {
    let profiles = block_profiles(d);
    let first = profiles.first()?.clone();
    profiles.iter().all(|p| *p == first).then_some(first)
}

/// Whether the complement of every block is a block. Requires `n = 2k`.
pub fn is_complement_closed(d: &Design) -> Result<bool, VerificationError> {
    let p = d.params();
    if p.points() != 2 * p.block_size() {
        return Err(VerificationError::NotHalving {
            block_size: p.block_size(),
            points: p.points(),
        });
    }
    Ok(d
        .blocks()
        .iter()
        .all(|&b| d.contains(complement_block(b, p.points()))))
}

/// Drops point `p` from the ground set, shifting later points down by one.
fn close_gap(b: Block, p: PointId) -> Block {
    let i = p.index();
    let bits = b.bits();
    let low = bits & ((1u64 << i) - 1);
    let high = if i + 1 >= 64 { 0 } else { (bits >> (i + 1)) << i };
    Block::from_bits(low | high)
}

/// The derived design at `p`: blocks through `p` with `p` removed, relabelled
/// order-preservingly onto `1..n-1`.
pub fn derive(d: &Design, p: PointId) -> Result<Design, VerificationError> {
    let params = d.params();
    if p.index() >= params.points() {
        return Err(DesignError::PointOutOfRange {
            point: p.external(),
            n: params.points(),
        }
        .into());
    }
    let derived = DesignParams::new(
        params.strength() - 1,
        params.block_size() - 1,
        params.points() - 1,
    )?;
    let blocks = d
        .blocks()
        .iter()
        .filter(|b| b.contains(p))
        .map(|&b| close_gap(b.without(p), p))
        .collect();
    Ok(Design::new(derived, blocks)?)
}
