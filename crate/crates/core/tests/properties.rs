use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use steiner::construction::Stage;
use steiner::oracle::{enumerate_completions, BranchOrder};
use steiner::{
    binomial, build_s4_8, build_s6_12, check_coloring, complement_block, covering_numbers, derive,
    enumerate_subsets, exact_cover_build, intersection_spectrum, isomorphic, verify_steiner, Block,
    Coloring, Design, DesignParams, PointId, SearchConfig, VerificationReport,
};

fn systems() -> [Design; 2] {
    [build_s4_8().0, build_s6_12().0]
}

/// Every `size`-subset of `0..n` as a bitmask, via plain counting.
fn masks(n: usize, size: usize) -> impl Iterator<Item = u64> {
    (0u64..1 << n).filter(move |m| m.count_ones() as usize == size)
}

fn brute_lambda(d: &Design, subset: u64) -> u64 {
    d.blocks().iter().filter(|b| b.bits() & subset == subset).count() as u64
}

fn random_perm(rng: &mut ChaCha8Rng, n: usize) -> Vec<PointId> {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    idx.into_iter().map(PointId::new).collect()
}

fn perm_strategy(n: usize) -> impl Strategy<Value = Vec<PointId>> {
    Just((0..n).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| v.into_iter().map(PointId::new).collect())
}

fn random_design() -> impl Strategy<Value = Design> {
    (3usize..=10)
        .prop_flat_map(|n| (Just(n), 2..n))
        .prop_flat_map(|(n, k)| (Just(n), Just(k), 1..k))
        .prop_flat_map(|(n, k, s)| {
            let block = proptest::sample::subsequence((0..n).collect::<Vec<_>>(), k)
                .prop_map(Block::from_indices);
            (Just((s, k, n)), proptest::collection::vec(block, 1..20))
        })
        .prop_map(|((s, k, n), blocks)| {
            let unique: BTreeSet<Block> = blocks.into_iter().collect();
            Design::new(DesignParams::new(s, k, n).unwrap(), unique.into_iter().collect()).unwrap()
        })
}

proptest! {
    #[test]
    fn complement_is_an_involution(n in 1usize..=64, bits in any::<u64>()) {
        let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let b = Block::from_bits(bits & mask);
        let c = complement_block(b, n);
        prop_assert!(b.is_disjoint(c));
        prop_assert_eq!(b.len() + c.len(), n);
        prop_assert_eq!(complement_block(c, n), b);
    }

    #[test]
    fn subset_enumeration_matches_binomial(n in 0usize..=16, i in 0usize..=16) {
        prop_assume!(i <= n);
        let all: Vec<Block> = enumerate_subsets(n, i).collect();
        prop_assert_eq!(all.len() as u64, binomial(n, i));
        prop_assert_eq!(all.len(), masks(n, i).count());
        prop_assert!(all.iter().all(|b| b.len() == i && b.bits() >> n == 0));
        prop_assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn random_designs_round_trip(d in random_design()) {
        prop_assert_eq!(Design::from_text(&d.to_text()).unwrap(), d.clone());
        prop_assert_eq!(Design::from_json(&d.to_json()).unwrap(), d.clone());
        prop_assert_eq!(Design::parse(&d.to_json()).unwrap(), d);
    }

    #[test]
    fn relabelled_systems_round_trip(
        (which, perm) in (0usize..2).prop_flat_map(|w| (Just(w), perm_strategy([8, 12][w])))
    ) {
        let d = &systems()[which];
        let image = d.relabel(&perm);
        prop_assert_eq!(Design::from_text(&image.to_text()).unwrap(), image.clone());
        let report = verify_steiner(&image);
        prop_assert!(report.is_steiner);
        let json = serde_json::to_string(&report).unwrap();
        let back: VerificationReport = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, report);
    }

    #[test]
    fn color_swap_preserves_properness(which in 0usize..2, bits in any::<u64>()) {
        let d = &systems()[which];
        let n = d.points();
        let c = Coloring::from_red(Block::from_bits(bits & ((1u64 << n) - 1)), n);
        let a = check_coloring(d, &c).unwrap();
        let b = check_coloring(d, &c.flipped()).unwrap();
        prop_assert_eq!(a.proper, b.proper);
        prop_assert_eq!(a.monochromatic_blocks, b.monochromatic_blocks);
        prop_assert_eq!(a.red_count + b.red_count, n);
    }

    #[test]
    fn mono_block_bounds_red_count(which in 0usize..2, bits in any::<u64>()) {
        let d = &systems()[which];
        let n = d.points();
        let k = d.params().block_size();
        let c = Coloring::from_red(Block::from_bits(bits & ((1u64 << n) - 1)), n);
        for b in check_coloring(d, &c).unwrap().monochromatic_blocks {
            if b.is_subset(c.red()) {
                prop_assert!(c.red_count() >= k);
            } else {
                prop_assert!(b.is_subset(c.blue()));
                prop_assert!(c.red_count() <= n - k);
            }
        }
    }

    #[test]
    fn spectrum_counts_every_pair(d in random_design()) {
        let spectrum = intersection_spectrum(&d);
        let b = d.len() as u64;
        prop_assert_eq!(spectrum.total_pairs(), b * b.saturating_sub(1) / 2);
    }
}

#[test]
fn isomorphic_under_seeded_permutations() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for d in systems() {
        for _ in 0..100 {
            let perm = random_perm(&mut rng, d.points());
            let image = d.relabel(&perm);
            let forward = isomorphic(&d, &image).expect("permuted copy is isomorphic");
            assert_eq!(d.relabel(&forward), image);
            let back = isomorphic(&image, &d).expect("isomorphism is symmetric");
            assert_eq!(image.relabel(&back), d);
        }
    }
}

#[test]
fn red_k_subset_is_proper_iff_not_a_block() {
    for d in systems() {
        let n = d.points();
        let k = d.params().block_size();
        let mut checked = 0;
        for m in masks(n, k) {
            let s = Block::from_bits(m);
            let report = check_coloring(&d, &Coloring::from_red(s, n)).unwrap();
            assert_eq!(report.proper, !d.contains(s), "{s}");
            checked += 1;
        }
        assert_eq!(checked, binomial(n, k));
    }
}

#[test]
fn tally_is_symmetric_and_even() {
    for d in systems() {
        let n = d.points();
        let tally = steiner::coloring::proper_colorings_by_red_count(&d).unwrap();
        for r in 0..=n {
            assert_eq!(tally[r], tally[n - r]);
        }
        let total: u64 = tally.iter().sum();
        assert_eq!(total % 2, 0);
        assert_eq!(total, steiner::count_proper_colorings(&d).unwrap());
    }
}

#[test]
fn derived_systems_verify_everywhere() {
    for d in systems() {
        let p = d.params();
        for x in 0..d.points() {
            let derived = derive(&d, PointId::new(x)).unwrap();
            assert_eq!(derived.points(), p.points() - 1);
            assert_eq!(derived.params().strength(), p.strength() - 1);
            assert!(verify_steiner(&derived).is_steiner, "point {x}");
            assert_eq!(derived.len(), brute_lambda(&d, 1 << x) as usize);
        }
    }
}

#[test]
fn covering_numbers_match_brute_force() {
    for d in systems() {
        let p = d.params();
        let (s, k, n) = (p.strength(), p.block_size(), p.points());
        let lambdas = covering_numbers(&d);
        for i in 0..=s {
            let expected = masks(n, i).next().map(|m| brute_lambda(&d, m)).unwrap();
            assert!(masks(n, i).all(|m| brute_lambda(&d, m) == expected));
            assert_eq!(lambdas[&i], Some(expected));
        }
        assert_eq!(lambdas[&0].unwrap() * binomial(k, s), binomial(n, s) * lambdas[&s].unwrap());
    }
}

#[test]
fn no_two_blocks_share_strength_points() {
    for d in systems() {
        let s = d.params().strength();
        let blocks = d.blocks();
        for (i, a) in blocks.iter().enumerate() {
            for b in &blocks[i + 1..] {
                assert!(a.intersection(*b).len() < s);
            }
        }
        let b = d.len() as u64;
        assert_eq!(intersection_spectrum(&d).total_pairs(), b * (b - 1) / 2);
    }
}

#[test]
fn oracle_is_deterministic() {
    for (s, k, n) in [(2, 3, 7), (3, 4, 8), (2, 3, 9)] {
        let params = DesignParams::new(s, k, n).unwrap();
        for order in [BranchOrder::Lexicographic, BranchOrder::MostConstrainedFirst] {
            let cfg = SearchConfig::default().with_branch_order(order).with_max_solutions(3);
            let first = exact_cover_build(params, &cfg).unwrap();
            let second = exact_cover_build(params, &cfg).unwrap();
            assert_eq!(first, second);
            assert!(first.iter().all(|d| verify_steiner(d).is_steiner));
        }
    }
}

#[test]
fn early_stages_force_the_rest() {
    let (full, trace) = build_s6_12();
    let mut early = trace.blocks(Stage::Stage1);
    early.extend(trace.blocks(Stage::Stage2));
    let partial = Design::new(full.params(), early).unwrap();
    for pairs in [false, true] {
        let cfg = SearchConfig::default().with_max_solutions(10).with_complement_pairs(pairs);
        let completions = enumerate_completions(&partial, &cfg).unwrap();
        assert_eq!(completions, vec![full.clone()]);
    }
}
