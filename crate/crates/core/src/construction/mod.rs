//! Staged, complement-closed constructions of `S(5,6,12)` and `S(3,4,8)`.
//!
//! Both systems are built as `t`-uniform hypergraphs on `{v1, ..., v2t}`
//! starting from the seed block `h = {v1, ..., vt}` and its complement
//! `h' = {vt+1, ..., v2t}`. Every block is added together with its complement.
//!
//! For `t = 6` the blocks meeting `h` in four points including `v1` come from
//! two label-space rules applied under vertex mappings (see [`step21_expand`]
//! and [`step22_expand`]); the blocks meeting `h` in three and in two points
//! including `v1` come from residual tables (see [`tables`] and [`validate`]).
//! For `t = 4` one rule ([`step21_expand_t4`]) finishes the job.

mod mapping;
pub mod tables;
pub mod validate;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::block::{complement_block, Block};
use crate::design::{Design, DesignBuilder, DesignError, DesignParams};

pub use mapping::{mapping_from_rows, Label, VertexMapping};
pub use tables::ExpansionTables;
pub use validate::{validate_expansion_tables, validate_tables, RowCheck, TableKind, ValidationReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("mapping sends two labels to {0}")]
    NonInjective(crate::block::PointId),
    #[error("label {label} must map into {side}, got {point}")]
    SideViolation {
        label: Label,
        side: &'static str,
        point: crate::block::PointId,
    },
    #[error("mapping has {found} labels, rule needs {expected}")]
    WrongLabelSet { expected: usize, found: usize },
    #[error("member {member} of B has size {found}; |A| + |member| must equal {expected}")]
    SizeMismatch {
        member: Block,
        found: usize,
        expected: usize,
    },
    #[error("member {member} of B overlaps A = {a_set}")]
    Overlap { a_set: Block, member: Block },
    #[error("rows cannot be remapped: {0}")]
    IncompatibleRows(String),
    #[error(transparent)]
    Design(#[from] DesignError),
}

/// A pair `(A, B)` whose Cartesian product `{A ∪ m : m ∈ B}` yields blocks.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExpansionRow {
    pub a_set: Block,
    pub b_family: Vec<Block>,
}

impl ExpansionRow {
    pub fn new(a_set: Block, b_family: Vec<Block>) -> Self {
        ExpansionRow { a_set, b_family }
    }

    /// Row from 1-based labels; convenient for tables and tests.
    pub fn from_labels<const A: usize, const M: usize>(a: [usize; A], b: &[[usize; M]]) -> Self {
        ExpansionRow {
            a_set: Block::from_labels(a),
            b_family: b.iter().map(|m| Block::from_labels(*m)).collect(),
        }
    }

    /// The family as a sorted list, for order-insensitive comparison.
    pub fn sorted_family(&self) -> Vec<Block> {
        let mut v = self.b_family.clone();
        v.sort();
        v
    }

    /// Same `A` and the same members of `B`, in any order.
    pub fn same_as(&self, other: &ExpansionRow) -> bool {
        self.a_set == other.a_set && self.sorted_family() == other.sorted_family()
    }
}

impl fmt::Display for ExpansionRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A = {}, B = {{", self.a_set)?;
        for (i, m) in self.b_family.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("}")
    }
}

/// `{A ∪ m : m ∈ B}` in family order.
pub fn cartesian_union(row: &ExpansionRow, k: usize) -> Result<Vec<Block>, ConstructionError> {
    row.b_family
        .iter()
        .map(|&m| {
            if !m.is_disjoint(row.a_set) {
                return Err(ConstructionError::Overlap {
                    a_set: row.a_set,
                    member: m,
                });
            }
            if row.a_set.len() + m.len() != k {
                return Err(ConstructionError::SizeMismatch {
                    member: m,
                    found: m.len(),
                    expected: k,
                });
            }
            Ok(row.a_set.union(m))
        })
        .collect()
}

use Label::*;

type RuleRow = (&'static [Label], &'static [[Label; 2]]);

const RULE_THREE_MATCHINGS: [RuleRow; 3] = [
    (&[One, Two, Three, X], &[[A, B], [C, D], [E, F]]),
    (&[One, Two, Three, Y], &[[A, C], [B, E], [D, F]]),
    (&[One, Two, Three, Z], &[[A, F], [B, D], [C, E]]),
];

const RULE_TWO_MATCHINGS: [RuleRow; 2] = [
    (&[One, Two, X, Y], &[[A, E], [B, D], [C, F]]),
    (&[One, Three, X, Y], &[[A, F], [B, C], [D, E]]),
];

const RULE_T4: [RuleRow; 3] = [
    (&[One, X], &[[A, B], [C, D]]),
    (&[One, Y], &[[A, C], [B, D]]),
    (&[One, Z], &[[A, D], [B, C]]),
];

fn apply(m: &VertexMapping, rule: &RuleRow) -> ExpansionRow {
    let (a, b) = rule;
    ExpansionRow {
        a_set: a.iter().map(|&l| m.image(l)).collect(),
        b_family: b
            .iter()
            .map(|pair| pair.iter().map(|&l| m.image(l)).collect())
            .collect(),
    }
}

/// Rows `(A, B)`, `(A', B')`, `(A'', B'')` of the three-matching rule:
/// `A = {1',2',3',x}, B = {ab, cd, ef}`; `A' = {1',2',3',y}, B' = {ac, be, df}`;
/// `A'' = {1',2',3',z}, B'' = {af, bd, ce}`, imaged under `m`.
pub fn step21_expand(
    m: &VertexMapping,
) -> Result<(ExpansionRow, ExpansionRow, ExpansionRow), ConstructionError> {
    m.require_order(6)?;
    let [r0, r1, r2] = RULE_THREE_MATCHINGS.map(|r| apply(m, &r));
    Ok((r0, r1, r2))
}

/// Rows `(A'', B'')`, `(A''', B''')` of the two-matching rule:
/// `A'' = {1',2',x,y}, B'' = {ae, bd, cf}`; `A''' = {1',3',x,y}, B''' = {af, bc, de}`.
pub fn step22_expand(m: &VertexMapping) -> Result<(ExpansionRow, ExpansionRow), ConstructionError> {
    m.require_order(6)?;
    let [r0, r1] = RULE_TWO_MATCHINGS.map(|r| apply(m, &r));
    Ok((r0, r1))
}

/// The three-matching rule on eight labels:
/// `A = {1',x}, B = {ab, cd}`; `A' = {1',y}, B' = {ac, bd}`; `A'' = {1',z}, B'' = {ad, bc}`.
pub fn step21_expand_t4(
    m: &VertexMapping,
) -> Result<(ExpansionRow, ExpansionRow, ExpansionRow), ConstructionError> {
    m.require_order(4)?;
    let [r0, r1, r2] = RULE_T4.map(|r| apply(m, &r));
    Ok((r0, r1, r2))
}

/// Which stage of the construction produced a block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Stage1,
    Stage2,
    Stage3a,
    Stage3b,
}

impl Stage {
    pub const ALL: [Stage; 4] = [Stage::Stage1, Stage::Stage2, Stage::Stage3a, Stage::Stage3b];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Stage1 => "stage1",
            Stage::Stage2 => "stage2",
            Stage::Stage3a => "stage3a",
            Stage::Stage3b => "stage3b",
        }
    }
}

/// A block plus the rule or table row that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TracedBlock {
    pub block: Block,
    pub source: String,
    /// Added as the complement of the preceding block.
    pub complement: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageCounts {
    pub stage1: usize,
    pub stage2: usize,
    pub stage3a: usize,
    pub stage3b: usize,
}

impl StageCounts {
    pub fn total(&self) -> usize {
        self.stage1 + self.stage2 + self.stage3a + self.stage3b
    }
}

/// Per-stage block lists with provenance, in insertion order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageTrace {
    pub stage1: Vec<TracedBlock>,
    pub stage2: Vec<TracedBlock>,
    pub stage3a: Vec<TracedBlock>,
    pub stage3b: Vec<TracedBlock>,
}

impl StageTrace {
    pub fn stage(&self, s: Stage) -> &[TracedBlock] {
        match s {
            Stage::Stage1 => &self.stage1,
            Stage::Stage2 => &self.stage2,
            Stage::Stage3a => &self.stage3a,
            Stage::Stage3b => &self.stage3b,
        }
    }

    fn stage_mut(&mut self, s: Stage) -> &mut Vec<TracedBlock> {
        match s {
            Stage::Stage1 => &mut self.stage1,
            Stage::Stage2 => &mut self.stage2,
            Stage::Stage3a => &mut self.stage3a,
            Stage::Stage3b => &mut self.stage3b,
        }
    }

    pub fn counts(&self) -> StageCounts {
        StageCounts {
            stage1: self.stage1.len(),
            stage2: self.stage2.len(),
            stage3a: self.stage3a.len(),
            stage3b: self.stage3b.len(),
        }
    }

    /// Blocks of one stage, without provenance.
    pub fn blocks(&self, s: Stage) -> Vec<Block> {
        self.stage(s).iter().map(|t| t.block).collect()
    }
}

/// Builder that records provenance for every block and its complement.
struct TracingBuilder {
    design: DesignBuilder,
    trace: StageTrace,
}

impl TracingBuilder {
    fn new(params: DesignParams) -> Self {
        TracingBuilder {
            design: DesignBuilder::new(params),
            trace: StageTrace::default(),
        }
    }

    fn add(&mut self, stage: Stage, b: Block, source: &str) -> Result<(), ConstructionError> {
        let c = self.design.add_with_complement(b)?;
        let list = self.trace.stage_mut(stage);
        list.push(TracedBlock {
            block: b,
            source: source.to_owned(),
            complement: false,
        });
        list.push(TracedBlock {
            block: c,
            source: source.to_owned(),
            complement: true,
        });
        Ok(())
    }

    fn add_row(&mut self, stage: Stage, row: &ExpansionRow, source: &str) -> Result<(), ConstructionError> {
        let k = self.design.params().block_size();
        for b in cartesian_union(row, k)? {
            self.add(stage, b, source)?;
        }
        Ok(())
    }

    fn finish(self) -> Result<(Design, StageTrace), ConstructionError> {
        Ok((self.design.seal()?, self.trace))
    }
}

/// The seed block `{v1, ..., vt}`.
pub fn seed_block(t: usize) -> Block {
    Block::full(t)
}

/// Stage 2 rows of the `t = 6` construction with their provenance labels, in
/// application order.
pub fn stage2_rows(tables: &ExpansionTables) -> Result<Vec<(ExpansionRow, String)>, ConstructionError> {
    let mut rows = Vec::with_capacity(10);
    let (r0, r1, r2) = step21_expand(&tables.identity)?;
    rows.push((r0, "three-matching rule, identity mapping, (A, B)".to_owned()));
    rows.push((r1, "three-matching rule, identity mapping, (A', B')".to_owned()));
    rows.push((r2, "three-matching rule, identity mapping, (A'', B'')".to_owned()));
    let (r3, r4) = step22_expand(&tables.identity)?;
    rows.push((r3, "two-matching rule, identity mapping, (A'', B'')".to_owned()));
    rows.push((r4, "two-matching rule, identity mapping, (A''', B''')".to_owned()));
    for (i, m) in tables.remappings.iter().enumerate() {
        let (_, _, r) = step21_expand(m)?;
        rows.push((r, format!("three-matching rule, remapping {}, (A'', B'')", i + 1)));
    }
    for (i, r) in tables.listed_versions.iter().enumerate() {
        rows.push((r.clone(), format!("listed (A'', B'') version {}", i + 1)));
    }
    Ok(rows)
}

/// Builds `S(5,6,12)` from the given tables.
pub fn build_s6_12_from(tables: &ExpansionTables) -> Result<(Design, StageTrace), ConstructionError> {
    let mut b = TracingBuilder::new(DesignParams::halving(6)?);
    b.add(Stage::Stage1, seed_block(6), "seed h")?;
    for (row, source) in stage2_rows(tables)? {
        b.add_row(Stage::Stage2, &row, &source)?;
    }
    for (i, row) in tables.triple_rows.iter().enumerate() {
        b.add_row(Stage::Stage3a, row, &format!("residual triple row {}", i + 1))?;
    }
    for (i, row) in tables.pair_rows.iter().enumerate() {
        b.add_row(Stage::Stage3b, row, &format!("residual pair row {}", i + 1))?;
    }
    b.finish()
}

/// The 132-block `S(5,6,12)` with stage trace.
pub fn build_s6_12() -> (Design, StageTrace) {
    build_s6_12_from(&ExpansionTables::standard()).expect("embedded tables are consistent")
}

/// The 14-block `S(3,4,8)` with stage trace.
pub fn build_s4_8() -> (Design, StageTrace) {
    build_s4_8_with(&VertexMapping::identity(4)).expect("identity mapping is consistent")
}

/// Builds `S(3,4,8)` applying the eight-label rule under `m`.
pub fn build_s4_8_with(m: &VertexMapping) -> Result<(Design, StageTrace), ConstructionError> {
    let mut b = TracingBuilder::new(DesignParams::halving(4)?);
    b.add(Stage::Stage1, seed_block(4), "seed h")?;
    let (r0, r1, r2) = step21_expand_t4(m)?;
    b.add_row(Stage::Stage2, &r0, "three-matching rule, (A, B)")?;
    b.add_row(Stage::Stage2, &r1, "three-matching rule, (A', B')")?;
    b.add_row(Stage::Stage2, &r2, "three-matching rule, (A'', B'')")?;
    b.finish()
}

/// Complement of every member of a block list within `n` points.
pub fn complements(blocks: &[Block], n: usize) -> Vec<Block> {
    blocks.iter().map(|&b| complement_block(b, n)).collect()
}
