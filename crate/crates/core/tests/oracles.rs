//! Independent oracles for the Greene invariants and frozen expected values.

use boxball::carrier::{energy_profile, transfer, Capacity};
use boxball::matching::{match_stack, stack_permutation};
use boxball::poset::{poset_of_word, PermutationPoset, Point};
use boxball::rsk::p_symbol;
use boxball::state::BoxBallState;
use proptest::prelude::*;

/// `max |C_1 ⊔ … ⊔ C_k|` by trying every assignment of points to one of `k`
/// families or to none, `(k + 1)^n` cases.
fn naive_max_cover(points: &[Point], k: usize, chains: bool) -> usize {
    let n = points.len();
    let total = (k + 1).pow(n as u32);
    let mut best = 0;
    for code in 0..total {
        let mut classes = vec![Vec::new(); k];
        let mut c = code;
        for &pt in points {
            let slot = c % (k + 1);
            c /= k + 1;
            if slot > 0 {
                classes[slot - 1].push(pt);
            }
        }
        let ok = classes.iter().all(|cls| {
            if chains {
                PermutationPoset::is_chain(cls)
            } else {
                PermutationPoset::is_antichain(cls)
            }
        });
        if ok {
            best = best.max(classes.iter().map(Vec::len).sum());
        }
    }
    best
}

/// Longest strictly increasing subsequence, quadratic DP.
fn lis(word: &[usize]) -> usize {
    let mut best = vec![1; word.len()];
    for i in 0..word.len() {
        for j in 0..i {
            if word[j] < word[i] {
                best[i] = best[i].max(best[j] + 1);
            }
        }
    }
    best.into_iter().max().unwrap_or(0)
}

#[test]
fn naive_oracle_on_the_example_words() {
    let poset = poset_of_word(&[3, 1, 2, 1, 4, 3]);
    let frozen: Vec<usize> = (1..=4).map(|k| naive_max_cover(poset.points(), k, true)).collect();
    assert_eq!(frozen, vec![3, 5, 6, 6]);
    let g = poset.greene().unwrap();
    assert_eq!((1..=4).map(|k| g.i(k)).collect::<Vec<_>>(), frozen);

    let poset = PermutationPoset::from_permutation(&[1, 3, 5, 4, 2]);
    let frozen: Vec<usize> = (1..=3).map(|k| naive_max_cover(poset.points(), k, true)).collect();
    assert_eq!(frozen, vec![3, 4, 5]);
    let frozen_d: Vec<usize> = (1..=3).map(|k| naive_max_cover(poset.points(), k, false)).collect();
    assert_eq!(frozen_d, vec![3, 4, 5]);
    let g = poset.greene().unwrap();
    assert_eq!((1..=3).map(|k| g.i(k)).collect::<Vec<_>>(), frozen);
    assert_eq!((1..=3).map(|k| g.d(k)).collect::<Vec<_>>(), frozen_d);
}

#[test]
fn example_energies_follow_depth_counts() {
    // depth histogram (3,1,1) gives E_1 = 3, E_2 = 4, E_l = 5 beyond
    let p = BoxBallState::parse("0010011011", 0).unwrap();
    let hist = match_stack(&p).depth_histogram();
    let from_depths: Vec<usize> = (1..=6).map(|l| hist.iter().take(l).sum()).collect();
    assert_eq!(from_depths, vec![3, 4, 5, 5, 5, 5]);
    let report = energy_profile(&p, 6);
    assert_eq!((1..=6).map(|l| report.e(l)).collect::<Vec<_>>(), from_depths);
}

#[test]
fn capacity_one_moves_each_soliton_one_cell() {
    let p = BoxBallState::parse("1101110", 0).unwrap();
    let t = transfer(&p, Capacity::Finite(1));
    assert_eq!(t.state.render_range(0, 9), "011011100");
}

fn small_word() -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(1usize..=4, 0..=7)
}

fn small_state() -> impl Strategy<Value = BoxBallState> {
    (proptest::collection::vec(0u8..=1, 1..=14), -5i64..5).prop_map(|(cells, off)| BoxBallState::from_cells(off, &cells))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn subset_search_matches_naive_enumeration(word in small_word()) {
        let poset = poset_of_word(&word);
        let g = poset.greene().unwrap();
        for k in 1..=3 {
            prop_assert_eq!(g.i(k), naive_max_cover(poset.points(), k, true));
            prop_assert_eq!(g.d(k), naive_max_cover(poset.points(), k, false));
        }
    }

    #[test]
    fn first_row_is_the_longest_increasing_run(word in proptest::collection::vec(1usize..=20, 0..=30)) {
        // equal letters are ordered by position, so weakly increasing counts
        let std = boxball::poset::standardize(&word);
        prop_assert_eq!(p_symbol(&word).shape().part(1), lis(&std));
    }

    #[test]
    fn stack_permutation_energies_match_naive_chains(p in small_state()) {
        let w = stack_permutation(&match_stack(&p));
        let poset = PermutationPoset::from_permutation(&w.word);
        prop_assume!(poset.len() <= 7);
        let report = energy_profile(&p, poset.len());
        for l in 1..=poset.len().min(3) {
            prop_assert_eq!(report.e(l), naive_max_cover(poset.points(), l, true));
        }
    }
}
