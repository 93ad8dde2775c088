use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use equilibria::coalition::{
    balancing_certificate, coalition_structure_core_check, core_solve, in_core, is_balanced, is_superadditive,
    least_epsilon_core, members, optimal_partition_with, shapley, shapley_monte_carlo, Coalition, EpsilonCore,
    Partition, PartitionMethod, TUGame,
};
use equilibria::formation::{
    compare_with_centralized, coalition_payoffs, is_merge_split_stable, merge_split_run, pareto_preferred,
    AllocationRule, CoalitionGame, MergeSplitConfig, ScanOrder,
};
use equilibria::Error;

fn random_tu(rng: &mut ChaCha8Rng, k: usize, hi: f64) -> TUGame {
    let values = (0..1usize << k).map(|c| if c == 0 { 0.0 } else { rng.gen_range(0.0..hi) }).collect();
    TUGame::new(k, values).unwrap()
}

fn tu_strategy(max_players: usize) -> impl Strategy<Value = TUGame> {
    (2..=max_players, any::<u64>()).prop_map(|(k, seed)| {
        random_tu(&mut ChaCha8Rng::seed_from_u64(seed), k, 4.0)
    })
}

/// Every set partition of `players`, by recursive placement.
fn all_partitions(players: usize) -> Vec<Vec<Coalition>> {
    fn place(i: usize, n: usize, blocks: &mut Vec<Coalition>, out: &mut Vec<Vec<Coalition>>) {
        if i == n {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            blocks[b] |= 1 << i;
            place(i + 1, n, blocks, out);
            blocks[b] &= !(1 << i);
        }
        blocks.push(1 << i);
        place(i + 1, n, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    place(0, players, &mut Vec::new(), &mut out);
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn partition_methods_agree_with_brute_force(g in tu_strategy(7)) {
        let best = all_partitions(g.players())
            .iter()
            .map(|p| p.iter().map(|&c| g.value(c)).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max);
        for method in [PartitionMethod::Enumerate, PartitionMethod::DynamicProgramming] {
            let (p, total) = optimal_partition_with(&g, method).unwrap();
            prop_assert!((total - best).abs() < 1e-9);
            prop_assert!((p.total_value(&g) - total).abs() < 1e-9);
        }
    }

    #[test]
    fn core_allocation_is_in_core(g in tu_strategy(6)) {
        let sol = core_solve(&g).unwrap();
        prop_assert_eq!(sol.nonempty, is_balanced(&g).unwrap());
        if let Some(x) = &sol.allocation {
            prop_assert!(in_core(&g, x, 1e-7).unwrap());
        }
    }

    #[test]
    fn least_core_allocation_respects_its_epsilon(g in tu_strategy(6)) {
        let lc = least_epsilon_core(&g, EpsilonCore::Weak).unwrap();
        prop_assert!((lc.allocation.iter().sum::<f64>() - g.value(g.grand())).abs() < 1e-7);
        for c in 1..g.grand() {
            let share: f64 = members(c).iter().map(|&i| lc.allocation[i]).sum();
            prop_assert!(share >= g.value(c) - lc.epsilon - 1e-7);
        }
    }

    #[test]
    fn json_round_trip(g in tu_strategy(5)) {
        let back = TUGame::from_json(&g.to_json()).unwrap();
        prop_assert_eq!(back.values(), g.values());
    }
}

#[test]
fn balancing_certificate_beats_the_grand_coalition() {
    let g = TUGame::majority(3).unwrap();
    let cert = balancing_certificate(&g).unwrap().expect("empty core has a certificate");
    // The weights must cover every player exactly once.
    for i in 0..3 {
        let cover: f64 = cert.iter().filter(|(c, _)| c >> i & 1 == 1).map(|(_, w)| w).sum();
        assert!((cover - 1.0).abs() < 1e-7);
    }
    let worth: f64 = cert.iter().map(|&(c, w)| w * g.value(c)).sum();
    assert!(worth > g.value(g.grand()) + 1e-9);
}

#[test]
fn monte_carlo_shapley_is_within_a_few_standard_errors() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let g = random_tu(&mut rng, 6, 5.0);
    let exact = shapley(&g).unwrap();
    let est = shapley_monte_carlo(&g, 20_000, 8).unwrap();
    for i in 0..6 {
        assert!((est.values[i] - exact[i]).abs() <= 5.0 * est.std_errors[i] + 1e-12);
    }
    assert_eq!(est, shapley_monte_carlo(&g, 20_000, 8).unwrap());
}

#[test]
fn shapley_capacity_is_reported() {
    let g = TUGame::majority(15).unwrap();
    assert!(matches!(shapley(&g), Err(Error::Capacity { .. })));
}

#[test]
fn superadditive_game_detection() {
    let g = TUGame::from_fn(3, |c| (c.count_ones() as f64).powi(2)).unwrap();
    assert!(is_superadditive(&g).unwrap().0);
    let sub = TUGame::from_fn(3, |c| (c.count_ones() as f64).sqrt()).unwrap();
    let (ok, witness) = is_superadditive(&sub).unwrap();
    assert!(!ok);
    let (a, b) = witness.unwrap();
    assert!(sub.value(a | b) < sub.value(a) + sub.value(b));
}

#[test]
fn structure_core_of_additive_game() {
    let g = TUGame::additive(&[1.0, 2.0, 3.0]).unwrap();
    assert!(coalition_structure_core_check(&g, &[1.0, 2.0, 3.0], 1e-9).unwrap());
    assert!(!coalition_structure_core_check(&g, &[0.5, 2.5, 3.0], 1e-9).unwrap());
}

#[test]
fn merge_split_on_a_superadditive_game_reaches_the_grand_coalition() {
    let g = TUGame::from_fn(5, |c| (c.count_ones() as f64).powi(2)).unwrap();
    let cmp = compare_with_centralized(&g, &MergeSplitConfig::default()).unwrap();
    assert!(cmp.distributed_converged);
    assert_eq!(cmp.distributed, Partition::grand(5).unwrap());
    assert!(cmp.coincide);
    assert!(cmp.distributed_pareto_optimal);
}

#[test]
fn merge_split_stops_on_stable_partitions_for_every_rule_and_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for case in 0..10 {
        let g = random_tu(&mut rng, 6, 3.0);
        for rule in [AllocationRule::EqualSplit, AllocationRule::ShapleyWithinCoalition] {
            for order in [ScanOrder::Lexicographic, ScanOrder::Shuffled(case)] {
                let cfg = MergeSplitConfig { order, ..MergeSplitConfig::with_rule(rule) };
                let s = merge_split_run(CoalitionGame::Tu(&g), &cfg, Partition::singletons(6).unwrap()).unwrap();
                assert!(s.converged);
                assert!(is_merge_split_stable(&s.partition, CoalitionGame::Tu(&g), &cfg).unwrap().0);
                for op in &s.history {
                    assert!(pareto_preferred(&op.after, &op.before).unwrap());
                }
            }
        }
    }
}

#[test]
fn equal_split_payoffs() {
    let g = TUGame::from_fn(3, |c| c.count_ones() as f64 * 2.0).unwrap();
    assert_eq!(coalition_payoffs(CoalitionGame::Tu(&g), AllocationRule::EqualSplit, 0b101).unwrap(), vec![2.0, 2.0]);
}

#[test]
fn max_group_is_validated() {
    let g = TUGame::majority(3).unwrap();
    let cfg = MergeSplitConfig { max_group: 5, ..MergeSplitConfig::default() };
    let r = merge_split_run(CoalitionGame::Tu(&g), &cfg, Partition::singletons(3).unwrap());
    assert!(matches!(r, Err(Error::InvalidArgument(_))));
}
