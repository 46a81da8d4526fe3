use boxball::carrier::{energy_profile, energy_sites_predicted, transfer, Capacity};
use boxball::matching::{match_rounds, match_rounds_padded, match_stack, match_stack_padded, stack_permutation};
use boxball::poset::{antichain_groups, depth_chains, poset_of_word};
use boxball::rsk::p_symbol;
use boxball::state::{evolve_tts, BoxBallState};
use boxball::walkpath::{delete_concave, delete_convex, evolve_reflect, to_walk, walk_to_state};
use proptest::prelude::*;

fn state() -> impl Strategy<Value = BoxBallState> {
    (proptest::collection::vec(prop_oneof![2 => Just(0u8), 1 => Just(1u8)], 0..=40), -30i64..30)
        .prop_map(|(cells, off)| BoxBallState::from_cells(off, &cells))
        .prop_filter("at most 12 balls", |p| p.ball_count() <= 12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn text_round_trip(p in state()) {
        prop_assert_eq!(p.to_string().parse::<BoxBallState>().unwrap(), p);
    }

    #[test]
    fn three_dynamics_agree(p in state()) {
        let next = evolve_tts(&p);
        prop_assert_eq!(next.ball_count(), p.ball_count());
        if !p.is_empty() {
            prop_assert!(next.offset() > p.offset());
        }
        prop_assert_eq!(&walk_to_state(&evolve_reflect(&to_walk(&match_stack(&p)))), &next);
        prop_assert_eq!(&transfer(&p, Capacity::Finite(p.ball_count().max(1))).state, &next);
        prop_assert_eq!(&transfer(&p, Capacity::Unbounded).state, &next);
    }

    #[test]
    fn matchings_agree_and_are_well_formed(p in state()) {
        let seq = match_stack(&p);
        prop_assert_eq!(&match_rounds(&p), &seq);
        let n = p.ball_count();
        prop_assert_eq!(&match_rounds_padded(&p, n + 5), &seq);
        prop_assert_eq!(&match_stack_padded(&p, n + 5), &seq);
        prop_assert!(seq.validate().is_ok());
        let hist = seq.depth_histogram();
        prop_assert!(hist.windows(2).all(|w| w[0] >= w[1]));
        prop_assert_eq!(walk_to_state(&to_walk(&seq)), p);
    }

    #[test]
    fn energy_sites_are_shallow_closings(p in state()) {
        let seq = match_stack(&p);
        let report = energy_profile(&p, p.ball_count());
        for l in 1..=p.ball_count() {
            prop_assert_eq!(&report.sites[&l], &energy_sites_predicted(&seq, l));
        }
    }

    #[test]
    fn conserved_along_orbits(p in state()) {
        let n = p.ball_count();
        let shape = p_symbol(&stack_permutation(&match_stack(&p)).word).shape();
        let energy = energy_profile(&p, n).values;
        let mut q = p.clone();
        for _ in 0..10 {
            q = evolve_tts(&q);
            prop_assert_eq!(&p_symbol(&stack_permutation(&match_stack(&q)).word).shape(), &shape);
            prop_assert_eq!(&energy_profile(&q, n).values, &energy);
        }
    }

    #[test]
    fn depth_chains_and_antichains(p in state()) {
        let seq = match_stack(&p);
        let chains = depth_chains(&seq).unwrap();
        let shape = p_symbol(&stack_permutation(&seq).word).shape();
        for k in 1..=chains.chains.len() {
            prop_assert_eq!(chains.chains[k - 1].len(), shape.part(k));
        }
        let groups = antichain_groups(&seq).unwrap();
        prop_assert_eq!(groups.len(), shape.part(1));
    }

    #[test]
    fn corner_deletions_agree(p in state()) {
        let walk = to_walk(&match_stack(&p));
        prop_assert!(delete_convex(&walk).same_shape(&delete_concave(&walk)));
        let next = evolve_reflect(&walk);
        prop_assert!(delete_convex(&next).same_shape(&delete_concave(&next)));
        // peeling the shallowest pairs commutes with time evolution
        prop_assert!(delete_convex(&next).same_shape(&evolve_reflect(&delete_convex(&walk))));
    }

    #[test]
    fn rsk_shape_is_greene_shape(word in proptest::collection::vec(1usize..=5, 0..=12)) {
        let g = poset_of_word(&word).greene().unwrap();
        prop_assert_eq!(p_symbol(&word).shape(), g.lambda());
        prop_assert_eq!(g.lambda_prime(), g.lambda().transpose());
    }
}
