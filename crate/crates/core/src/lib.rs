//! Steiner systems `S(t-1, t, 2t)` for `t = 4` and `t = 6` as `t`-uniform hypergraphs.
//!
//! * [`construction`] builds `S(3,4,8)` and `S(5,6,12)` stage by stage, closing
//!   every block under complementation.
//! * [`verification`] checks the Steiner property exhaustively, computes
//!   covering numbers and intersection spectra, and extracts derived designs.
//! * [`coloring`] checks and enumerates proper Red/Blue colorings.
//! * [`oracle`] finds Steiner systems by exact-cover search and decides
//!   design isomorphism, as an independent cross-check.

pub mod block;
pub mod cli;
pub mod coloring;
pub mod construction;
pub mod design;
pub mod oracle;
pub mod subsets;
pub mod verification;

pub use block::{complement_block, make_block, Block, PointId, MAX_POINTS};
pub use coloring::{
    check_coloring, count_proper_colorings, lemma1_coloring, mono_witness, Color, Coloring,
    ColoringReport,
};
pub use construction::{
    build_s4_8, build_s6_12, cartesian_union, step21_expand, step21_expand_t4, step22_expand,
    validate_expansion_tables, ExpansionRow, StageTrace, VertexMapping,
};
pub use design::{Design, DesignBuilder, DesignError, DesignParams};
pub use oracle::{complete_partial, exact_cover_build, isomorphic, SearchConfig};
pub use subsets::{binomial, enumerate_subsets};
pub use verification::{
    covering_numbers, derive, intersection_spectrum, is_complement_closed, verify_steiner,
    IntersectionSpectrum, VerificationReport,
};
