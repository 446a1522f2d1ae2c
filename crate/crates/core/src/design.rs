//! Designs: parameters plus a canonical, duplicate-free block collection.
//!
//! Two interchange formats are supported.
//!
//! Text:
//!
//! ```text
//! 3 4 8
//! 1 2 3 4
//! 1 2 5 6
//! ...
//! ```
//!
//! The header is `s k n`; each following line is one block as ascending
//! 1-based labels separated by single spaces, with lines in canonical order.
//!
//! JSON: `{"strength":3,"block_size":4,"points":8,"blocks":[[1,2,3,4],...]}`.

use std::collections::HashSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::block::{complement_block, Block, PointId, MAX_POINTS};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DesignError {
    #[error("point {point} is outside 1..={n}")]
    PointOutOfRange { point: usize, n: usize },
    #[error("point {point} listed twice")]
    DuplicatePoint { point: usize },
    #[error("invalid parameters s={strength} k={block_size} n={points}: need 0 < s < k < n <= 64")]
    InvalidParams {
        strength: usize,
        block_size: usize,
        points: usize,
    },
    #[error("block {block} has {found} points, expected {expected}")]
    WrongBlockSize {
        block: Block,
        found: usize,
        expected: usize,
    },
    #[error("block {block} is not contained in the {n}-point ground set")]
    BlockOutOfRange { block: Block, n: usize },
    #[error("duplicate block {0}")]
    DuplicateBlock(Block),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid JSON design: {0}")]
    Json(String),
}

/// Parameters `(s, k, n)` of a design: blocks of size `k` on `n` points,
/// judged against coverage of `s`-subsets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DesignParams {
    strength: usize,
    block_size: usize,
    points: usize,
}

impl DesignParams {
    pub fn new(strength: usize, block_size: usize, points: usize) -> Result<Self, DesignError> {
        if strength == 0 || strength >= block_size || block_size >= points || points > MAX_POINTS {
            return Err(DesignError::InvalidParams {
                strength,
                block_size,
                points,
            });
        }
        Ok(DesignParams {
            strength,
            block_size,
            points,
        })
    }

    /// Parameters `S(t-1, t, 2t)`.
    pub fn halving(t: usize) -> Result<Self, DesignError> {
        Self::new(t.saturating_sub(1), t, 2 * t)
    }

    #[inline]
    pub fn strength(&self) -> usize {
        self.strength
    }

    #[inline]
    pub fn block_size(&self) -> usize {
        self.block_size
    }

    #[inline]
    pub fn points(&self) -> usize {
        self.points
    }
}

/// A sealed design. Blocks are sorted canonically and pairwise distinct.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Design {
    params: DesignParams,
    blocks: Vec<Block>,
}

impl Design {
    /// Validates and seals a block collection. Duplicates are an error.
    pub fn new(params: DesignParams, mut blocks: Vec<Block>) -> Result<Self, DesignError> {
        let ground = Block::full(params.points);
        for &b in &blocks {
            if !b.is_subset(ground) {
                return Err(DesignError::BlockOutOfRange {
                    block: b,
                    n: params.points,
                });
            }
            if b.len() != params.block_size {
                return Err(DesignError::WrongBlockSize {
                    block: b,
                    found: b.len(),
                    expected: params.block_size,
                });
            }
        }
        blocks.sort_unstable();
        if let Some(w) = blocks.windows(2).find(|w| w[0] == w[1]) {
            return Err(DesignError::DuplicateBlock(w[0]));
        }
        Ok(Design { params, blocks })
    }

    #[inline]
    pub fn params(&self) -> DesignParams {
        self.params
    }

    #[inline]
    pub fn points(&self) -> usize {
        self.params.points
    }

    #[inline]
    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn contains(&self, b: Block) -> bool {
        self.blocks.binary_search(&b).is_ok()
    }

    /// Image of the design under a point permutation, `perm[i]` being the image of point `i`.
    ///
    /// Panics if `perm` is not a permutation of `0..n`.
    pub fn relabel(&self, perm: &[PointId]) -> Design {
        let n = self.points();
        assert_eq!(perm.len(), n, "permutation length must equal point count");
        assert_eq!(
            perm.iter().copied().collect::<Block>(),
            Block::full(n),
            "not a permutation"
        );
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|p| perm[p.index()]).collect())
            .collect();
        Design::new(self.params, blocks).expect("a permutation preserves validity")
    }

    /// Copy of the design with `b` removed (no-op if absent).
    pub fn without_block(&self, b: Block) -> Design {
        Design {
            params: self.params,
            blocks: self.blocks.iter().copied().filter(|&x| x != b).collect(),
        }
    }

    /// Renders the canonical text format, including the trailing newline.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.blocks.len() * 3 * self.params.block_size + 16);
        let p = self.params;
        let _ = writeln!(out, "{} {} {}", p.strength, p.block_size, p.points);
        for b in &self.blocks {
            let mut first = true;
            for pt in b.iter() {
                if !first {
                    out.push(' ');
                }
                first = false;
                let _ = write!(out, "{}", pt.external());
            }
            out.push('\n');
        }
        out
    }

    /// Parses the text format. Blank lines and lines starting with `#` are ignored;
    /// block order in the input is free, the result is canonical.
    pub fn from_text(text: &str) -> Result<Self, DesignError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (hline, header) = lines.next().ok_or(DesignError::Parse {
            line: 1,
            message: "missing `s k n` header".into(),
        })?;
        let nums = parse_numbers(hline, header)?;
        let [s, k, n] = nums[..] else {
            return Err(DesignError::Parse {
                line: hline,
                message: format!("header needs 3 numbers, found {}", nums.len()),
            });
        };
        let params = DesignParams::new(s, k, n)?;

        let mut blocks = Vec::new();
        for (lineno, line) in lines {
            let labels = parse_numbers(lineno, line)?;
            let block = crate::block::make_block(&labels, n).map_err(|e| DesignError::Parse {
                line: lineno,
                message: e.to_string(),
            })?;
            if block.len() != k {
                return Err(DesignError::Parse {
                    line: lineno,
                    message: format!("block has {} points, expected {k}", block.len()),
                });
            }
            blocks.push(block);
        }
        Design::new(params, blocks)
    }

    /// Compact JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("design serialization is infallible");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, DesignError> {
        serde_json::from_str(text).map_err(|e| DesignError::Json(e.to_string()))
    }

    /// Parses either format, choosing JSON when the first non-blank character is `{`.
    pub fn parse(text: &str) -> Result<Self, DesignError> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_text(text)
        }
    }
}

fn parse_numbers(line: usize, s: &str) -> Result<Vec<usize>, DesignError> {
    s.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>().map_err(|_| DesignError::Parse {
                line,
                message: format!("`{tok}` is not a non-negative integer"),
            })
        })
        .collect()
}

#[derive(Serialize, Deserialize)]
struct DesignFile {
    strength: usize,
    block_size: usize,
    points: usize,
    blocks: Vec<Block>,
}

impl Serialize for Design {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        DesignFile {
            strength: self.params.strength,
            block_size: self.params.block_size,
            points: self.params.points,
            blocks: self.blocks.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Design {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let f = DesignFile::deserialize(deserializer)?;
        let params =
            DesignParams::new(f.strength, f.block_size, f.points).map_err(serde::de::Error::custom)?;
        Design::new(params, f.blocks).map_err(serde::de::Error::custom)
    }
}

/// An unsealed design under construction. Every insertion is checked.
#[derive(Clone, Debug)]
pub struct DesignBuilder {
    params: DesignParams,
    blocks: Vec<Block>,
    seen: HashSet<Block>,
}

impl DesignBuilder {
    pub fn new(params: DesignParams) -> Self {
        DesignBuilder {
            params,
            blocks: Vec::new(),
            seen: HashSet::new(),
        }
    }

    pub fn params(&self) -> DesignParams {
        self.params
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn contains(&self, b: Block) -> bool {
        self.seen.contains(&b)
    }

    /// Blocks in insertion order.
    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    fn check(&self, b: Block) -> Result<(), DesignError> {
        let n = self.params.points;
        if !b.is_subset(Block::full(n)) {
            return Err(DesignError::BlockOutOfRange { block: b, n });
        }
        if b.len() != self.params.block_size {
            return Err(DesignError::WrongBlockSize {
                block: b,
                found: b.len(),
                expected: self.params.block_size,
            });
        }
        if self.seen.contains(&b) {
            return Err(DesignError::DuplicateBlock(b));
        }
        Ok(())
    }

    pub fn insert(&mut self, b: Block) -> Result<(), DesignError> {
        self.check(b)?;
        self.seen.insert(b);
        self.blocks.push(b);
        Ok(())
    }

    /// Inserts `b` together with its complement. Fails without modifying the
    /// builder if either is already present or the complement has the wrong size.
    pub fn add_with_complement(&mut self, b: Block) -> Result<Block, DesignError> {
        let c = complement_block(b, self.params.points);
        self.check(b)?;
        self.check(c)?;
        if b == c {
            return Err(DesignError::DuplicateBlock(b));
        }
        self.insert(b)?;
        self.insert(c)?;
        Ok(c)
    }

    pub fn seal(self) -> Result<Design, DesignError> {
        Design::new(self.params, self.blocks)
    }
}
