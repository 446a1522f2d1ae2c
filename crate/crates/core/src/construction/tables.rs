//! Curated data for the twelve-point construction.
//!
//! The two rules fix only the rows through the identity mapping. The remaining
//! rows are recorded here verbatim and checked by [`super::validate`].

use super::{ExpansionRow, VertexMapping};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionTables {
    /// `1'→v1, 2'→v2, 3'→v3, x→v4, y→v5, z→v6, a→v7, ..., f→v12`.
    pub identity: VertexMapping,
    /// Remappings whose third three-matching row is added.
    pub remappings: Vec<VertexMapping>,
    /// Further `(A'', B'')` versions added as given.
    pub listed_versions: Vec<ExpansionRow>,
    /// Triples of `h` through `v1`, each with two triples of `h'`.
    pub triple_rows: Vec<ExpansionRow>,
    /// Pairs of `h` through `v1`, each with three 4-subsets of `h'`.
    pub pair_rows: Vec<ExpansionRow>,
}

impl ExpansionTables {
    pub fn standard() -> Self {
        let remap = |images| VertexMapping::t6(images).expect("curated mapping is valid");
        ExpansionTables {
            identity: VertexMapping::identity(6),
            remappings: vec![
                remap([1, 2, 4, 3, 5, 6, 7, 8, 11, 12, 10, 9]),
                remap([1, 2, 5, 3, 4, 6, 7, 9, 11, 8, 12, 10]),
            ],
            listed_versions: vec![
                ExpansionRow::from_labels([1, 3, 4, 6], &[[7, 10], [8, 11], [9, 12]]),
                ExpansionRow::from_labels([1, 3, 5, 6], &[[7, 11], [9, 10], [8, 12]]),
                ExpansionRow::from_labels([1, 4, 5, 6], &[[7, 8], [11, 9], [10, 12]]),
            ],
            triple_rows: vec![
                ExpansionRow::from_labels([1, 2, 3], &[[7, 10, 11], [8, 9, 12]]),
                ExpansionRow::from_labels([1, 2, 4], &[[7, 10, 12], [8, 9, 11]]),
                ExpansionRow::from_labels([1, 2, 5], &[[7, 8, 12], [9, 10, 11]]),
                ExpansionRow::from_labels([1, 2, 6], &[[7, 8, 11], [9, 10, 12]]),
                ExpansionRow::from_labels([1, 3, 4], &[[7, 9, 11], [8, 10, 12]]),
                ExpansionRow::from_labels([1, 3, 5], &[[7, 8, 10], [9, 11, 12]]),
                ExpansionRow::from_labels([1, 3, 6], &[[7, 8, 9], [10, 11, 12]]),
                ExpansionRow::from_labels([1, 4, 5], &[[7, 9, 10], [8, 11, 12]]),
                ExpansionRow::from_labels([1, 4, 6], &[[7, 11, 12], [8, 9, 10]]),
                ExpansionRow::from_labels([1, 5, 6], &[[7, 9, 12], [8, 10, 11]]),
            ],
            pair_rows: vec![
                ExpansionRow::from_labels([1, 2], &[[7, 8, 9, 10], [7, 9, 11, 12], [8, 10, 11, 12]]),
                ExpansionRow::from_labels([1, 3], &[[7, 8, 11, 12], [8, 9, 10, 11], [7, 9, 10, 12]]),
                ExpansionRow::from_labels([1, 4], &[[7, 8, 9, 12], [7, 8, 10, 11], [9, 10, 11, 12]]),
                ExpansionRow::from_labels([1, 5], &[[7, 8, 9, 11], [8, 9, 10, 12], [7, 10, 11, 12]]),
                ExpansionRow::from_labels([1, 6], &[[7, 8, 10, 12], [7, 9, 10, 11], [8, 9, 11, 12]]),
            ],
        }
    }
}

impl Default for ExpansionTables {
    fn default() -> Self {
        Self::standard()
    }
}
