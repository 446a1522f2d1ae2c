//! Red/Blue colorings of the point set and properness checks.
//!
//! The constructive coloring follows from complement closure: if `h1` is a
//! `k`-subset that is not a block, colour it Red and its complement Blue.
//! A monochromatic block would have to be `h1` or its complement, and neither
//! is present.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::block::{complement_block, Block, PointId};
use crate::design::Design;
use crate::subsets::enumerate_subsets;
use crate::verification::is_complement_closed;

/// Largest `n` for which [`count_proper_colorings`] enumerates all `2^n` colorings.
pub const MAX_ENUMERATION_POINTS: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColoringError {
    #[error("coloring covers {found} points, design has {expected}")]
    Length { expected: usize, found: usize },
    #[error("position {position}: expected R or B, found `{found}`")]
    BadSymbol { position: usize, found: char },
    #[error("every {0}-subset is a block; no non-block seed exists")]
    Complete(usize),
    #[error("constructive coloring needs n = 2k")]
    NotHalving,
    #[error("constructive coloring needs a complement-closed design")]
    NotComplementClosed,
    #[error("exhaustive enumeration is limited to n <= {max} points (got {n}); a sampling mode would be needed")]
    TooManyPoints { n: usize, max: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Color {
    Red,
    Blue,
}

/// A total Red/Blue assignment on `{v1, ..., vn}`, stored as its Red class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Coloring {
    n: usize,
    red: Block,
}

impl Coloring {
    /// Red on `red`, Blue elsewhere. Panics if `red` leaves the ground set.
    pub fn from_red(red: Block, n: usize) -> Self {
        assert!(red.is_subset(Block::full(n)), "red class outside ground set");
        Coloring { n, red }
    }

    pub fn all(color: Color, n: usize) -> Self {
        match color {
            Color::Red => Self::from_red(Block::full(n), n),
            Color::Blue => Self::from_red(Block::EMPTY, n),
        }
    }

    pub fn points(&self) -> usize {
        self.n
    }

    pub fn red(&self) -> Block {
        self.red
    }

    pub fn blue(&self) -> Block {
        complement_block(self.red, self.n)
    }

    pub fn red_count(&self) -> usize {
        self.red.len()
    }

    pub fn color(&self, p: PointId) -> Color {
        if self.red.contains(p) {
            Color::Red
        } else {
            Color::Blue
        }
    }

    /// Swaps the two colours.
    pub fn flipped(&self) -> Self {
        Coloring {
            n: self.n,
            red: self.blue(),
        }
    }

    #[inline]
    fn is_mono(&self, b: Block) -> bool {
        b.is_subset(self.red) || b.is_disjoint(self.red)
    }
}

impl fmt::Display for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            f.write_str(if self.red.contains(PointId::new(i)) { "R" } else { "B" })?;
        }
        Ok(())
    }
}

impl FromStr for Coloring {
    type Err = ColoringError;

    /// One character per point, `R` or `B`; surrounding whitespace is ignored.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let n = s.chars().count();
        if n > crate::block::MAX_POINTS {
            return Err(ColoringError::Length {
                expected: crate::block::MAX_POINTS,
                found: n,
            });
        }
        let mut red = Block::EMPTY;
        for (i, ch) in s.chars().enumerate() {
            match ch {
                'R' => red = red.with(PointId::new(i)),
                'B' => {}
                other => {
                    return Err(ColoringError::BadSymbol {
                        position: i + 1,
                        found: other,
                    })
                }
            }
        }
        Ok(Coloring { n, red })
    }
}

impl Serialize for Coloring {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Coloring {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringReport {
    pub proper: bool,
    pub monochromatic_blocks: Vec<Block>,
    pub red_count: usize,
}

fn check_length(d: &Design, c: &Coloring) -> Result<(), ColoringError> {
    if c.points() != d.points() {
        return Err(ColoringError::Length {
            expected: d.points(),
            found: c.points(),
        });
    }
    Ok(())
}

/// Lists every block whose points all share one colour.
pub fn check_coloring(d: &Design, c: &Coloring) -> Result<ColoringReport, ColoringError> {
    check_length(d, c)?;
    let monochromatic_blocks: Vec<Block> =
        d.blocks().iter().copied().filter(|&b| c.is_mono(b)).collect();
    Ok(ColoringReport {
        proper: monochromatic_blocks.is_empty(),
        monochromatic_blocks,
        red_count: c.red_count(),
    })
}

/// First monochromatic block in canonical order.
pub fn mono_witness(d: &Design, c: &Coloring) -> Result<Option<Block>, ColoringError> {
    check_length(d, c)?;
    Ok(d.blocks().iter().copied().find(|&b| c.is_mono(b)))
}

/// Red on the lexicographically smallest `k`-subset that is not a block.
pub fn lemma1_coloring(d: &Design) -> Result<Coloring, ColoringError> {
    let p = d.params();
    match is_complement_closed(d) {
        Err(_) => return Err(ColoringError::NotHalving),
        Ok(false) => return Err(ColoringError::NotComplementClosed),
        Ok(true) => {}
    }
    enumerate_subsets(p.points(), p.block_size())
        .find(|s| !d.contains(*s))
        .map(|h1| Coloring::from_red(h1, p.points()))
        .ok_or(ColoringError::Complete(p.block_size()))
}

/// Exhaustive count of proper colorings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProperColoringTally {
    pub total: u64,
    /// Entry `r` counts proper colorings with `r` Red points.
    pub by_red_count: Vec<u64>,
}

/// Proper colorings tallied by the size of the Red class (index `0..=n`).
pub fn proper_colorings_by_red_count(d: &Design) -> Result<Vec<u64>, ColoringError> {
    let n = d.points();
    if n > MAX_ENUMERATION_POINTS {
        return Err(ColoringError::TooManyPoints {
            n,
            max: MAX_ENUMERATION_POINTS,
        });
    }
    let blocks: Vec<u64> = d.blocks().iter().map(|b| b.bits()).collect();
    let total = 1u64 << n;
    const CHUNK: u64 = 1 << 12;
    let chunks = total.div_ceil(CHUNK);
    let tally = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut local = vec![0u64; n + 1];
            for red in c * CHUNK..((c + 1) * CHUNK).min(total) {
                if blocks.iter().all(|&b| b & red != 0 && b & !red != 0) {
                    local[red.count_ones() as usize] += 1;
                }
            }
            local
        })
        .reduce(
            || vec![0u64; n + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(tally)
}

/// Number of proper Red/Blue colorings, by full `2^n` enumeration.
pub fn count_proper_colorings(d: &Design) -> Result<u64, ColoringError> {
    Ok(proper_colorings_by_red_count(d)?.iter().sum())
}
