//! Machine checks for the curated tables.
//!
//! Remapped and listed `(A'', B'')` versions must be reproducible from earlier
//! rows by [`mapping_from_rows`]. Each residual row must account for exactly
//! the 5-subsets through its `A` that earlier stages left uncovered: six pairs
//! of `h'` for a triple row, twelve triples of `h'` for a pair row.

use serde::{Deserialize, Serialize};

use super::{
    cartesian_union, complements, mapping_from_rows, seed_block, stage2_rows, step21_expand,
    ExpansionRow, ExpansionTables,
};
use crate::block::{Block, PointId};
use crate::subsets::enumerate_subsets;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableKind {
    Remapping,
    ListedVersion,
    MatchingCoverage,
    TripleRow,
    PairRow,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowCheck {
    pub kind: TableKind,
    /// 0-based row index within its table.
    pub index: usize,
    pub row: Option<ExpansionRow>,
    /// Residual subsets of `h'` the row is expected to account for.
    pub residual: Vec<Block>,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checks: Vec<RowCheck>,
}

impl ValidationReport {
    pub fn failures(&self) -> impl Iterator<Item = &RowCheck> {
        self.checks.iter().filter(|c| !c.ok)
    }

    pub fn is_ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }
}

/// Subsets `S` of `side` with `|S| = size` such that `a ∪ S` lies in no block of `covered`.
pub fn residual_subsets(a: Block, covered: &[Block], side: Block, size: usize) -> Vec<Block> {
    let side_points: Vec<PointId> = side.iter().collect();
    enumerate_subsets(side_points.len(), size)
        .map(|local| local.iter().map(|p| side_points[p.index()]).collect::<Block>())
        .filter(|s| {
            let target = a.union(*s);
            !covered.iter().any(|b| target.is_subset(*b))
        })
        .collect()
}

/// All `size`-subsets of each member of `family`, as a sorted multiset.
fn sub_multiset(family: &[Block], size: usize) -> Vec<Block> {
    let mut out = Vec::new();
    for &m in family {
        let pts: Vec<PointId> = m.iter().collect();
        for local in enumerate_subsets(pts.len(), size) {
            out.push(local.iter().map(|p| pts[p.index()]).collect());
        }
    }
    out.sort();
    out
}

fn blocks_with_complements(rows: &[ExpansionRow], k: usize, n: usize) -> (Vec<Block>, Vec<String>) {
    let mut blocks = Vec::new();
    let mut errors = Vec::new();
    for r in rows {
        match cartesian_union(r, k) {
            Ok(bs) => {
                blocks.extend(complements(&bs, n));
                blocks.extend(bs);
            }
            Err(e) => errors.push(format!("{r}: {e}")),
        }
    }
    (blocks, errors)
}

fn check_residual_row(
    kind: TableKind,
    index: usize,
    row: &ExpansionRow,
    covered: &[Block],
    a_size: usize,
    member_size: usize,
) -> RowCheck {
    let seed = seed_block(6);
    let side = Block::full(12).difference(seed);
    let v1 = PointId::new(0);
    let slice = 5 - a_size;
    let residual = residual_subsets(row.a_set, covered, side, slice);
    let mut problems = Vec::new();

    if row.a_set.len() != a_size || !row.a_set.is_subset(seed) || !row.a_set.contains(v1) {
        problems.push(format!("A must be a {a_size}-subset of h containing v1"));
    }
    if row
        .b_family
        .iter()
        .any(|m| m.len() != member_size || !m.is_subset(side))
    {
        problems.push(format!("every member of B must be a {member_size}-subset of h'"));
    }
    let claimed = sub_multiset(&row.b_family, slice);
    if claimed.windows(2).any(|w| w[0] == w[1]) {
        problems.push("members of B cover a residual subset twice".to_owned());
    }
    if claimed != residual {
        let missing: Vec<String> = residual
            .iter()
            .filter(|r| !claimed.contains(r))
            .map(|r| r.to_string())
            .collect();
        let extra: Vec<String> = claimed
            .iter()
            .filter(|c| !residual.contains(c))
            .map(|c| c.to_string())
            .collect();
        problems.push(format!(
            "B does not partition the {} residual subsets (missing [{}], not residual [{}])",
            residual.len(),
            missing.join(" "),
            extra.join(" ")
        ));
    }
    RowCheck {
        kind,
        index,
        row: Some(row.clone()),
        residual,
        ok: problems.is_empty(),
        detail: if problems.is_empty() {
            "partitions the residual exactly".to_owned()
        } else {
            problems.join("; ")
        },
    }
}

fn check_a_set_coverage(kind: TableKind, rows: &[ExpansionRow], a_size: usize) -> RowCheck {
    let seed = seed_block(6);
    let v1 = PointId::new(0);
    let mut expected: Vec<Block> = enumerate_subsets(6, a_size)
        .filter(|s| s.contains(v1))
        .collect();
    expected.sort();
    let mut got: Vec<Block> = rows.iter().map(|r| r.a_set).collect();
    got.sort();
    let ok = got == expected && got.iter().all(|a| a.is_subset(seed));
    RowCheck {
        kind,
        index: 0,
        row: None,
        residual: Vec::new(),
        ok,
        detail: if ok {
            format!("A-sets are the {} {a_size}-subsets of h through v1, once each", expected.len())
        } else {
            format!(
                "A-sets must be the {} {a_size}-subsets of h through v1, once each",
                expected.len()
            )
        },
    }
}

/// Finds two earlier rows that the three-matching rule maps onto `target` as its third row.
fn reproduce(target: &ExpansionRow, earlier: &[ExpansionRow]) -> Option<(usize, usize)> {
    for i in 0..earlier.len() {
        for j in 0..earlier.len() {
            if i == j {
                continue;
            }
            if let Ok(m) = mapping_from_rows(&earlier[i], &earlier[j]) {
                if let Ok((_, _, third)) = step21_expand(&m) {
                    if third.same_as(target) {
                        return Some((i, j));
                    }
                }
            }
        }
    }
    None
}

/// Validates the given tables.
pub fn validate_tables(tables: &ExpansionTables) -> ValidationReport {
    let mut report = ValidationReport::default();
    let (k, n) = (6, 12);

    let stage2: Vec<ExpansionRow> = match stage2_rows(tables) {
        Ok(rows) => rows.into_iter().map(|(r, _)| r).collect(),
        Err(e) => {
            report.checks.push(RowCheck {
                kind: TableKind::Remapping,
                index: 0,
                row: None,
                residual: Vec::new(),
                ok: false,
                detail: format!("rule expansion failed: {e}"),
            });
            return report;
        }
    };

    // rows 0..5 come from the identity mapping; then remappings, then listed versions
    let fixed = 5;
    for i in 0..tables.remappings.len() {
        let pos = fixed + i;
        let target = &stage2[pos];
        let found = reproduce(target, &stage2[..pos]);
        report.checks.push(RowCheck {
            kind: TableKind::Remapping,
            index: i,
            row: Some(target.clone()),
            residual: Vec::new(),
            ok: found.is_some(),
            detail: match found {
                Some((a, b)) => format!("reproduced from stage-2 rows {} and {}", a + 1, b + 1),
                None => "not reproducible from earlier rows".to_owned(),
            },
        });
    }
    for (i, target) in tables.listed_versions.iter().enumerate() {
        let pos = fixed + tables.remappings.len() + i;
        let found = reproduce(target, &stage2[..pos]);
        report.checks.push(RowCheck {
            kind: TableKind::ListedVersion,
            index: i,
            row: Some(target.clone()),
            residual: Vec::new(),
            ok: found.is_some(),
            detail: match found {
                Some((a, b)) => format!("reproduced from stage-2 rows {} and {}", a + 1, b + 1),
                None => "not reproducible from earlier rows".to_owned(),
            },
        });
    }
    report
        .checks
        .push(check_a_set_coverage(TableKind::MatchingCoverage, &stage2, 4));

    let mut covered = vec![seed_block(6), Block::full(n).difference(seed_block(6))];
    let (b2, errs) = blocks_with_complements(&stage2, k, n);
    covered.extend(b2);
    for e in errs {
        report.checks.push(RowCheck {
            kind: TableKind::MatchingCoverage,
            index: 0,
            row: None,
            residual: Vec::new(),
            ok: false,
            detail: e,
        });
    }

    report
        .checks
        .push(check_a_set_coverage(TableKind::TripleRow, &tables.triple_rows, 3));
    for (i, row) in tables.triple_rows.iter().enumerate() {
        report
            .checks
            .push(check_residual_row(TableKind::TripleRow, i, row, &covered, 3, 3));
    }
    let (b3a, _) = blocks_with_complements(&tables.triple_rows, k, n);
    covered.extend(b3a);

    report
        .checks
        .push(check_a_set_coverage(TableKind::PairRow, &tables.pair_rows, 2));
    for (i, row) in tables.pair_rows.iter().enumerate() {
        report
            .checks
            .push(check_residual_row(TableKind::PairRow, i, row, &covered, 2, 4));
    }
    report
}

/// Validates the embedded tables.
pub fn validate_expansion_tables() -> ValidationReport {
    validate_tables(&ExpansionTables::standard())
}
