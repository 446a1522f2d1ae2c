use std::fmt;

use serde::{Deserialize, Serialize};

use super::{step21_expand, ConstructionError, ExpansionRow};
use crate::block::{Block, PointId};

/// Abstract labels the expansion rules are written in.
///
/// `One`, `Two`, `Three`, `X`, `Y`, `Z` live on the seed block `h`;
/// `A` through `F` live on its complement `h'`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    One,
    Two,
    Three,
    X,
    Y,
    Z,
    A,
    B,
    C,
    D,
    E,
    F,
}

impl Label {
    /// Label order for twelve-point mappings.
    pub const T6: [Label; 12] = [
        Label::One,
        Label::Two,
        Label::Three,
        Label::X,
        Label::Y,
        Label::Z,
        Label::A,
        Label::B,
        Label::C,
        Label::D,
        Label::E,
        Label::F,
    ];

    /// Label order for eight-point mappings.
    pub const T4: [Label; 8] = [
        Label::One,
        Label::X,
        Label::Y,
        Label::Z,
        Label::A,
        Label::B,
        Label::C,
        Label::D,
    ];

    pub fn on_seed_side(self) -> bool {
        matches!(
            self,
            Label::One | Label::Two | Label::Three | Label::X | Label::Y | Label::Z
        )
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::One => "1'",
            Label::Two => "2'",
            Label::Three => "3'",
            Label::X => "x",
            Label::Y => "y",
            Label::Z => "z",
            Label::A => "a",
            Label::B => "b",
            Label::C => "c",
            Label::D => "d",
            Label::E => "e",
            Label::F => "f",
        })
    }
}

/// Injective assignment of rule labels to points of `{v1, ..., v2t}`, with
/// seed-side labels landing in `h = {v1..vt}` and the rest in `h'`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VertexMapping {
    t: usize,
    assignment: Vec<(Label, PointId)>,
}

impl VertexMapping {
    /// Checked constructor; `labels` and `points` are parallel.
    pub fn new(t: usize, labels: &[Label], points: &[PointId]) -> Result<Self, ConstructionError> {
        assert_eq!(labels.len(), points.len());
        let seed = Block::full(t);
        let mut used = Block::EMPTY;
        for (&l, &p) in labels.iter().zip(points) {
            if used.contains(p) {
                return Err(ConstructionError::NonInjective(p));
            }
            used = used.with(p);
            let (ok, side) = if l.on_seed_side() {
                (seed.contains(p), "h")
            } else {
                (p.index() >= t && p.index() < 2 * t, "h'")
            };
            if !ok {
                return Err(ConstructionError::SideViolation {
                    label: l,
                    side,
                    point: p,
                });
            }
        }
        Ok(VertexMapping {
            t,
            assignment: labels.iter().copied().zip(points.iter().copied()).collect(),
        })
    }

    /// Twelve-label mapping from 1-based images listed in the order
    /// `1', 2', 3', x, y, z, a, b, c, d, e, f`.
    pub fn t6(images: [usize; 12]) -> Result<Self, ConstructionError> {
        let points = images
            .iter()
            .map(|&l| PointId::from_external(l, 12))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(6, &Label::T6, &points)
    }

    /// Eight-label mapping from 1-based images in the order `1', x, y, z, a, b, c, d`.
    pub fn t4(images: [usize; 8]) -> Result<Self, ConstructionError> {
        let points = images
            .iter()
            .map(|&l| PointId::from_external(l, 8))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(4, &Label::T4, &points)
    }

    /// Labels in their listed order onto `v1, v2, ...`. Panics unless `t` is 4 or 6.
    pub fn identity(t: usize) -> Self {
        let labels: &[Label] = match t {
            6 => &Label::T6,
            4 => &Label::T4,
            _ => panic!("no label set for t = {t}"),
        };
        let points: Vec<PointId> = (0..labels.len()).map(PointId::new).collect();
        Self::new(t, labels, &points).expect("identity mapping is valid")
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn try_image(&self, label: Label) -> Option<PointId> {
        self.assignment
            .iter()
            .find(|(l, _)| *l == label)
            .map(|&(_, p)| p)
    }

    /// Image of a label. Panics if the label is not part of this mapping.
    pub fn image(&self, label: Label) -> PointId {
        self.try_image(label)
            .unwrap_or_else(|| panic!("label {label} not in a t={} mapping", self.t))
    }

    pub fn assignment(&self) -> &[(Label, PointId)] {
        &self.assignment
    }

    pub(super) fn require_order(&self, t: usize) -> Result<(), ConstructionError> {
        let expected = 2 * t;
        if self.t != t || self.assignment.len() != expected {
            return Err(ConstructionError::WrongLabelSet {
                expected,
                found: self.assignment.len(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for VertexMapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (l, p)) in self.assignment.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({l} -> {p})")?;
        }
        Ok(())
    }
}

fn partner(family: &[Block], p: PointId) -> Option<PointId> {
    family
        .iter()
        .find(|m| m.contains(p))
        .and_then(|m| m.without(p).first())
}

fn is_perfect_matching(family: &[Block], side: Block) -> bool {
    family.iter().all(|m| m.len() == 2)
        && family.iter().fold(Block::EMPTY, |u, &m| u.union(m)) == side
        && family.len() * 2 == side.len()
}

/// Recovers the twelve-label mapping under which `first` and `second` are the
/// rows `(A, B)` and `(A', B')` of the three-matching rule.
///
/// Ties are broken deterministically: `1'`, `2'`, `3'` take the shared seed
/// points in ascending order, `a` is the smallest point of `h'` and `b` its
/// partner in `first`. The third row of [`step21_expand`] under the returned
/// mapping does not depend on these choices.
pub fn mapping_from_rows(
    first: &ExpansionRow,
    second: &ExpansionRow,
) -> Result<VertexMapping, ConstructionError> {
    let bad = |msg: &str| ConstructionError::IncompatibleRows(msg.to_owned());
    let seed = Block::full(6);
    let side = Block::full(12).difference(seed);
    let (a1, a2) = (first.a_set, second.a_set);
    if a1.len() != 4 || a2.len() != 4 || !a1.is_subset(seed) || !a2.is_subset(seed) {
        return Err(bad("A-sets must be 4-subsets of the seed block"));
    }
    let common = a1.intersection(a2);
    if common.len() != 3 {
        return Err(bad("A-sets must share exactly three points"));
    }
    if !is_perfect_matching(&first.b_family, side) || !is_perfect_matching(&second.b_family, side) {
        return Err(bad("B-families must be perfect matchings on the complement block"));
    }
    if first.b_family.iter().any(|m| second.b_family.contains(m)) {
        return Err(bad("B-families share a pair"));
    }

    let mut shared = common.iter();
    let one = shared.next().unwrap();
    let two = shared.next().unwrap();
    let three = shared.next().unwrap();
    let x = a1.difference(a2).first().unwrap();
    let y = a2.difference(a1).first().unwrap();
    let z = seed.difference(a1.union(a2)).first().unwrap();

    let p1 = |p| partner(&first.b_family, p).ok_or_else(|| bad("point missing from B"));
    let p2 = |p| partner(&second.b_family, p).ok_or_else(|| bad("point missing from B'"));
    let a = side.first().unwrap();
    let b = p1(a)?;
    let c = p2(a)?;
    let d = p1(c)?;
    let e = p2(b)?;
    let f = p1(e)?;

    let m = VertexMapping::new(6, &Label::T6, &[one, two, three, x, y, z, a, b, c, d, e, f])?;
    let (r0, r1, _) = step21_expand(&m)?;
    if !r0.same_as(first) || !r1.same_as(second) {
        return Err(bad("matchings do not follow the three-matching pattern"));
    }
    Ok(m)
}
