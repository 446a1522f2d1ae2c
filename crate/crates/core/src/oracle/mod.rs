//! Independent ground truth: Steiner systems found by exact-cover search, and
//! a point-bijection search for design isomorphism.
//!
//! Neither path shares code with [`crate::construction`] or
//! [`crate::verification`] beyond the basic block and design types.

mod dlx;
mod isomorphism;

use std::collections::HashMap;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::block::{complement_block, Block, PointId};
use crate::design::{Design, DesignError, DesignParams};
use crate::subsets::{binomial, enumerate_subsets};

use dlx::{Dlx, Halt};
pub use isomorphism::{isomorphic, point_signatures};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("search budget of {0:?} exhausted without a solution")]
    Timeout(Duration),
    #[error("no Steiner system with these parameters exists")]
    Unsatisfiable,
    #[error("partial design covers {0} twice")]
    MultiplyCovered(Block),
    #[error("complement pairing needs n = 2k")]
    PairingNeedsHalving,
    #[error(transparent)]
    Design(#[from] DesignError),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BranchOrder {
    /// Cover the first uncovered subset in lexicographic order.
    Lexicographic,
    /// Cover the subset with the fewest remaining candidate blocks.
    #[default]
    MostConstrainedFirst,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Stop after this many solutions (at least 1).
    pub max_solutions: usize,
    pub time_budget: Duration,
    pub branch_order: BranchOrder,
    /// Choose blocks in complement pairs `{b, V \ b}`; requires `n = 2k`.
    pub complement_pairs: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_solutions: 1,
            time_budget: Duration::from_secs(60),
            branch_order: BranchOrder::MostConstrainedFirst,
            complement_pairs: false,
        }
    }
}

impl SearchConfig {
    pub fn with_max_solutions(mut self, max: usize) -> Self {
        self.max_solutions = max.max(1);
        self
    }

    pub fn with_budget(mut self, budget: Duration) -> Self {
        self.time_budget = budget;
        self
    }

    pub fn with_branch_order(mut self, order: BranchOrder) -> Self {
        self.branch_order = order;
        self
    }

    pub fn with_complement_pairs(mut self, on: bool) -> Self {
        self.complement_pairs = on;
        self
    }
}

/// Necessary divisibility conditions: `C(k-i, s-i)` divides `C(n-i, s-i)` for `0 <= i <= s`.
pub fn admissible(params: DesignParams) -> bool {
    let (s, k, n) = (params.strength(), params.block_size(), params.points());
    (0..=s).all(|i| binomial(n - i, s - i).is_multiple_of(binomial(k - i, s - i)))
}

struct Problem {
    params: DesignParams,
    /// Each option is one block, or a complement pair of blocks.
    options: Vec<Vec<Block>>,
    cover: Vec<Vec<usize>>,
    items: usize,
}

fn subsets_of(b: Block, s: usize) -> impl Iterator<Item = Block> {
    let pts: Vec<PointId> = b.iter().collect();
    enumerate_subsets(pts.len(), s).map(move |l| l.iter().map(|q| pts[q.index()]).collect())
}

/// Exact cover of the `s`-subsets not covered by `fixed`, using candidate
/// blocks that avoid `fixed`-covered subsets.
fn build_problem(
    params: DesignParams,
    fixed: &[Block],
    cfg: &SearchConfig,
) -> Result<Problem, OracleError> {
    let (s, k, n) = (params.strength(), params.block_size(), params.points());
    if cfg.complement_pairs && n != 2 * k {
        return Err(OracleError::PairingNeedsHalving);
    }

    let mut covered: HashMap<Block, ()> = HashMap::new();
    for &b in fixed {
        for sub in subsets_of(b, s) {
            if covered.insert(sub, ()).is_some() {
                return Err(OracleError::MultiplyCovered(sub));
            }
        }
    }

    let mut index = HashMap::new();
    for sub in enumerate_subsets(n, s) {
        if !covered.contains_key(&sub) {
            let next = index.len();
            index.insert(sub, next);
        }
    }

    let usable = |b: Block| -> Option<Vec<usize>> {
        if fixed.contains(&b) {
            return None;
        }
        subsets_of(b, s).map(|sub| index.get(&sub).copied()).collect()
    };

    let mut options = Vec::new();
    let mut cover = Vec::new();
    let v1 = PointId::new(0);
    for b in enumerate_subsets(n, k) {
        if cfg.complement_pairs {
            // each pair once, represented by its member through v1
            if !b.contains(v1) {
                continue;
            }
            let c = complement_block(b, n);
            if let (Some(mut x), Some(y)) = (usable(b), usable(c)) {
                x.extend(y);
                options.push(vec![b, c]);
                cover.push(x);
            }
        } else if let Some(x) = usable(b) {
            options.push(vec![b]);
            cover.push(x);
        }
    }

    Ok(Problem {
        params,
        options,
        cover,
        items: index.len(),
    })
}

fn solve(problem: &Problem, fixed: &[Block], cfg: &SearchConfig) -> (Vec<Design>, Halt) {
    let mut dlx = Dlx::new(problem.items, &problem.cover);
    let deadline = Instant::now() + cfg.time_budget;
    let limit = cfg.max_solutions.max(1);
    let mut found = Vec::new();
    let halt = dlx.search(cfg.branch_order, deadline, |chosen| {
        let mut blocks = fixed.to_vec();
        for &r in chosen {
            blocks.extend(problem.options[r].iter().copied());
        }
        found.push(Design::new(problem.params, blocks).expect("exact cover yields distinct blocks"));
        found.len() < limit
    });
    (found, halt)
}

/// Searches for Steiner systems with the given parameters.
///
/// Returns up to `cfg.max_solutions` designs, deterministic for a fixed
/// configuration. With `complement_pairs` the search is restricted to
/// complement-closed systems.
pub fn exact_cover_build(params: DesignParams, cfg: &SearchConfig) -> Result<Vec<Design>, OracleError> {
    if !admissible(params) {
        return Err(OracleError::Unsatisfiable);
    }
    let problem = build_problem(params, &[], cfg)?;
    let (found, halt) = solve(&problem, &[], cfg);
    match (found.is_empty(), halt) {
        (false, _) => Ok(found),
        (true, Halt::OutOfTime) => Err(OracleError::Timeout(cfg.time_budget)),
        (true, Halt::Done) => Err(OracleError::Unsatisfiable),
    }
}

/// Every completion of `partial` to a Steiner system, up to `cfg.max_solutions`.
///
/// An empty result means the search space was exhausted without a completion.
pub fn enumerate_completions(partial: &Design, cfg: &SearchConfig) -> Result<Vec<Design>, OracleError> {
    let problem = build_problem(partial.params(), partial.blocks(), cfg)?;
    let (found, halt) = solve(&problem, partial.blocks(), cfg);
    if found.is_empty() && halt == Halt::OutOfTime {
        return Err(OracleError::Timeout(cfg.time_budget));
    }
    Ok(found)
}

/// A completion of `partial` to a full Steiner system containing every block of it.
pub fn complete_partial(partial: &Design, cfg: &SearchConfig) -> Result<Option<Design>, OracleError> {
    let cfg = cfg.with_max_solutions(1);
    Ok(enumerate_completions(partial, &cfg)?.into_iter().next())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::build_s4_8;

    fn steiner_check(d: &Design) -> bool {
        // local brute force, independent of the verification module
        let p = d.params();
        enumerate_subsets(p.points(), p.strength())
            .all(|sub| d.blocks().iter().filter(|b| sub.is_subset(**b)).count() == 1)
    }

    #[test]
    fn fano_plane() {
        let d = &exact_cover_build(DesignParams::new(2, 3, 7).unwrap(), &SearchConfig::default()).unwrap()[0];
        assert_eq!(d.len(), 7);
        assert!(steiner_check(d));
    }

    #[test]
    fn s3_4_8_both_orders() {
        for order in [BranchOrder::Lexicographic, BranchOrder::MostConstrainedFirst] {
            let cfg = SearchConfig::default().with_branch_order(order);
            let d = &exact_cover_build(DesignParams::new(3, 4, 8).unwrap(), &cfg).unwrap()[0];
            assert_eq!(d.len(), 14);
            assert!(steiner_check(d));
        }
    }

    #[test]
    fn strength_one_matching() {
        let d = &exact_cover_build(DesignParams::new(1, 2, 4).unwrap(), &SearchConfig::default()).unwrap()[0];
        assert_eq!(d.len(), 2);
        assert_eq!(d.blocks(), &[Block::from_labels([1, 2]), Block::from_labels([3, 4])]);
        let all = exact_cover_build(
            DesignParams::new(1, 2, 4).unwrap(),
            &SearchConfig::default().with_max_solutions(10),
        )
        .unwrap();
        assert_eq!(all.len(), 3);
    }

    #[test]
    fn unsatisfiable_parameters() {
        // S(2,3,6): C(5,1) = 5 is not divisible by C(2,1) = 2
        assert!(!admissible(DesignParams::new(2, 3, 6).unwrap()));
        assert_eq!(
            exact_cover_build(DesignParams::new(2, 3, 6).unwrap(), &SearchConfig::default()),
            Err(OracleError::Unsatisfiable)
        );
        assert!(admissible(DesignParams::new(5, 6, 12).unwrap()));
        assert!(admissible(DesignParams::new(3, 4, 8).unwrap()));
    }

    #[test]
    fn partial_completions() {
        let p = DesignParams::new(1, 2, 6).unwrap();
        let partial = Design::new(p, vec![Block::from_labels([1, 2]), Block::from_labels([3, 5])]).unwrap();
        let done = complete_partial(&partial, &SearchConfig::default()).unwrap().unwrap();
        assert!(done.contains(Block::from_labels([4, 6])));

        // v1 still needs v5 and v6, but {v5, v6} is already used: no completion
        let p = DesignParams::new(2, 3, 7).unwrap();
        let partial = Design::new(
            p,
            vec![Block::from_labels([1, 2, 3]), Block::from_labels([4, 5, 6]), Block::from_labels([1, 4, 7])],
        )
        .unwrap();
        assert_eq!(complete_partial(&partial, &SearchConfig::default()), Ok(None));
    }

    #[test]
    fn deterministic() {
        let p = DesignParams::new(3, 4, 8).unwrap();
        let cfg = SearchConfig::default();
        assert_eq!(exact_cover_build(p, &cfg).unwrap(), exact_cover_build(p, &cfg).unwrap());
    }

    #[test]
    fn complete_already_complete() {
        let (d, _) = build_s4_8();
        assert_eq!(complete_partial(&d, &SearchConfig::default()).unwrap(), Some(d));
    }

    #[test]
    fn conflicting_partial() {
        let (d, _) = build_s4_8();
        let extra = Block::from_labels([1, 2, 3, 5]);
        let mut blocks = d.blocks().to_vec();
        blocks.push(extra);
        let bad = Design::new(d.params(), blocks).unwrap();
        assert!(matches!(
            complete_partial(&bad, &SearchConfig::default()),
            Err(OracleError::MultiplyCovered(_))
        ));
    }

    #[test]
    fn pairing_requires_halving() {
        let cfg = SearchConfig::default().with_complement_pairs(true);
        assert_eq!(
            exact_cover_build(DesignParams::new(2, 3, 7).unwrap(), &cfg),
            Err(OracleError::PairingNeedsHalving)
        );
        let d = &exact_cover_build(DesignParams::new(3, 4, 8).unwrap(), &cfg).unwrap()[0];
        assert!(steiner_check(d));
        assert!(d.blocks().iter().all(|&b| d.contains(complement_block(b, 8))));
    }

    #[test]
    fn timeout_reported() {
        let cfg = SearchConfig::default().with_budget(Duration::ZERO);
        assert_eq!(
            exact_cover_build(DesignParams::new(3, 4, 8).unwrap(), &cfg),
            Err(OracleError::Timeout(Duration::ZERO))
        );
    }
}
