//! Acceptance suite: one test per criterion, each printing a `PASS`/`FAIL`
//! line (visible with `--nocapture`) alongside the usual test status.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use equilibria::coalition::{
    in_core, least_epsilon_core, shapley, shapley_permutations, core_solve, is_convex, members, Coalition,
    EpsilonCore, TUGame,
};
use equilibria::dynamics::{
    brd_sequential, bush_mosteller, normalize_utilities, regret_matching, repeated_game_run, ConstantStrategy,
    RepeatedStrategy, StepSize, TraceState, TriggerStrategy, WeightSchedule,
};
use equilibria::formation::{
    is_merge_split_stable, merge_split_run, AllocationRule, CoalitionGame, MergeSplitConfig, OperationKind, ScanOrder,
};
use equilibria::game::{
    expected_utility, find_exact_potential, is_coarse_correlated_equilibrium, is_correlated_equilibrium, is_pure_ne,
    is_simplex, price_of_anarchy, welfare,
};
use equilibria::harness::{scenario, LoadedGame};
use equilibria::coalition::{NTUGame, Partition};
use equilibria::scenarios::{
    aumann_coordination, beamforming_game, bs_game, cr_dilemma, ctd_value, duck_foraging, matching_pennies,
    sensor_dilemma, waterfilling_best_response, BeamformingInstance, CongestionGame, InterferenceChannel,
};
use equilibria::solvers::{
    enumerate_pure_ne, mixed_ne_2x2, nash_bargaining, optimize_over_equilibrium_set, support_enumeration_2p,
    zero_sum_value, BargainingDomain, EquilibriumConcept,
};
use equilibria::{FiniteGame, JointDistribution, MixedProfile, StrategicGame};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn criterion_1() -> Check {
    for e in [0.01, 0.2, 0.5, 0.8, 0.99] {
        let g = sensor_dilemma(e).map_err(|x| x.to_string())?;
        let pure = enumerate_pure_ne(&g).map_err(|x| x.to_string())?;
        ensure(pure == vec![vec![0, 0]], || format!("e={e}: pure NE {pure:?}"))?;
        let mixed = mixed_ne_2x2(&g).map_err(|x| x.to_string())?;
        let sleep = vec![vec![1.0, 0.0], vec![1.0, 0.0]];
        ensure(mixed.len() == 1 && mixed[0].strategies() == sleep.as_slice(), || {
            format!("e={e}: mixed equilibria {mixed:?}")
        })?;
    }
    Ok("unique equilibrium (sleep, sleep), activity probabilities (0, 0)".into())
}

fn criterion_2() -> Check {
    let g = cr_dilemma();
    let ne = enumerate_pure_ne(&g).map_err(|x| x.to_string())?;
    let poa = price_of_anarchy(&g, &ne).map_err(|x| x.to_string())?;
    ensure(close(poa, 3.0, 1e-12), || format!("PoA = {poa}"))?;
    Ok(format!("PoA = {poa}"))
}

fn criterion_3() -> Check {
    let g = aumann_coordination();
    let mixed = mixed_ne_2x2(&g).map_err(|x| x.to_string())?;
    let interior = mixed.iter().find(|m| m.as_pure().is_none()).ok_or("no fully mixed equilibrium")?;
    let u: Vec<f64> = (0..2).map(|k| expected_utility(&g, interior, k).unwrap()).collect();
    ensure(u.iter().all(|&x| close(x, 2.5, 1e-9)), || format!("mixed NE payoffs {u:?}"))?;

    let best = optimize_over_equilibrium_set(&g, &[1.0, 1.0], EquilibriumConcept::Correlated)
        .map_err(|x| x.to_string())?;
    ensure(best.utilities.iter().all(|&x| close(x, 10.0 / 3.0, 1e-6)), || {
        format!("CE optimum utilities {:?}", best.utilities)
    })?;

    let counts = g.action_counts();
    let vertices = [
        JointDistribution::point_mass(counts, &[0, 0]).unwrap(),
        JointDistribution::point_mass(counts, &[1, 1]).unwrap(),
        interior.product(),
    ];
    for q in &vertices {
        ensure(is_correlated_equilibrium(&g, q, 1e-9).unwrap(), || format!("{q:?} rejected"))?;
    }
    Ok(format!("mixed NE (2.5, 2.5), CE optimum ({:.6}, {:.6})", best.utilities[0], best.utilities[1]))
}

fn criterion_4() -> Check {
    let g = cr_dilemma();
    let trigger = TriggerStrategy { agreed: vec![0, 0], punishment: vec![1, 1] };
    let plan: [&dyn RepeatedStrategy; 2] = [&trigger, &trigger];
    let coop = repeated_game_run(&g, &plan, WeightSchedule::RunningAverage, 1000).map_err(|x| x.to_string())?;
    let defect = ConstantStrategy(1);
    let plan: [&dyn RepeatedStrategy; 2] = [&defect, &defect];
    let base = repeated_game_run(&g, &plan, WeightSchedule::RunningAverage, 1000).map_err(|x| x.to_string())?;
    ensure(coop.utilities.iter().all(|&u| close(u, 3.0, 1e-9)), || format!("trigger {:?}", coop.utilities))?;
    ensure(base.utilities.iter().all(|&u| close(u, 1.0, 1e-9)), || format!("defect {:?}", base.utilities))?;
    Ok(format!("trigger {:?}, all-defect {:?}", coop.utilities, base.utilities))
}

fn criterion_5() -> Check {
    let g = duck_foraging(33, (24.0, 12.0)).map_err(|x| x.to_string())?;
    let split: Vec<usize> = (0..33).map(|i| usize::from(i >= 22)).collect();
    ensure(is_pure_ne(&g, &split, 1e-9).unwrap(), || "22/11 split is not an equilibrium".into())?;
    let mut hits = 0;
    for seed in 0..20 {
        let t = brd_sequential(&g, &[0; 33], 200, seed).map_err(|x| x.to_string())?;
        let p = t.final_profile().ok_or("no final profile")?;
        if t.converged && CongestionGame::occupancy(p, 1) == 11 {
            hits += 1;
        }
    }
    ensure(hits == 20, || format!("{hits}/20 seeds reached 11 at the slow site"))?;
    Ok("20/20 seeds settle with 11 at the slow site".into())
}

/// Independent evaluation of the MAC potential for a band choice.
fn mac_phi(ch: &InterferenceChannel, bands: &[usize]) -> f64 {
    (0..ch.num_bands())
        .map(|n| {
            let rx: f64 = bands
                .iter()
                .enumerate()
                .filter(|&(_, &b)| b == n)
                .map(|(k, _)| ch.gain(k, 0, n) * ch.budget())
                .sum();
            (ch.noise() + rx).log2()
        })
        .sum()
}

fn criterion_6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for inst in 0..20u64 {
        let (k, n) = (rng.gen_range(2..=4), rng.gen_range(2..=4));
        let ch = InterferenceChannel::random_mac(k, n, 1000 + inst).map_err(|x| x.to_string())?;
        let g = bs_game(&ch).map_err(|x| x.to_string())?;
        let cert = find_exact_potential(&g, 1e-9).ok_or_else(|| format!("instance {inst}: no potential"))?;
        let offset = cert.value(&vec![0; k]) - mac_phi(&ch, &vec![0; k]);
        for i in 0..g.num_profiles() {
            let s = g.profile_at(i);
            let dev = cert.value(&s) - mac_phi(&ch, &s) - offset;
            ensure(dev.abs() <= 1e-9, || format!("instance {inst}: potential off by {dev} at {s:?}"))?;
        }
        let init: Vec<usize> = (0..k).map(|_| rng.gen_range(0..n)).collect();
        let t = brd_sequential(&g, &init, 100, inst).map_err(|x| x.to_string())?;
        let mut prev = mac_phi(&ch, &init);
        for r in &t.records {
            let TraceState::Pure(s) = &r.state else { return Err("non-pure BRD state".into()) };
            let phi = mac_phi(&ch, s);
            ensure(phi >= prev - 1e-12, || format!("instance {inst}: potential fell at iteration {}", r.iter))?;
            prev = phi;
        }
        ensure(t.converged, || format!("instance {inst}: BRD did not converge"))?;
        let last = t.final_profile().unwrap();
        ensure(is_pure_ne(&g, last, 1e-9).unwrap(), || format!("instance {inst}: {last:?} is not an NE"))?;
    }
    Ok("20/20 instances".into())
}

fn criterion_7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst_budget: f64 = 0.0;
    let mut worst_slack: f64 = 0.0;
    for seed in 0..100 {
        let (k, n) = (rng.gen_range(2..=4), rng.gen_range(2..=6));
        let ch = InterferenceChannel::random(k, n, rng.gen_range(0.0..2.0), seed).map_err(|x| x.to_string())?;
        let powers: Vec<Vec<f64>> = (0..k)
            .map(|_| {
                let raw: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
                let s: f64 = raw.iter().sum();
                raw.iter().map(|x| x / s).collect()
            })
            .collect();
        let user = rng.gen_range(0..k);
        let p = waterfilling_best_response(&ch, user, &powers).map_err(|x| x.to_string())?;
        worst_budget = worst_budget.max((p.iter().sum::<f64>() - ch.budget()).abs());
        let level = |b: usize| {
            let i: f64 = (0..k).filter(|&l| l != user).map(|l| ch.gain(l, user, b) * powers[l][b]).sum();
            (ch.noise() + i) / ch.gain(user, user, b)
        };
        let active: Vec<usize> = (0..n).filter(|&b| p[b] > 0.0).collect();
        let water = p[active[0]] + level(active[0]);
        for b in 0..n {
            let slack = if p[b] > 0.0 { (p[b] + level(b) - water).abs() } else { (water - level(b)).max(0.0) };
            worst_slack = worst_slack.max(slack);
        }
    }
    ensure(worst_budget <= 1e-10, || format!("budget error {worst_budget}"))?;
    ensure(worst_slack <= 1e-9, || format!("complementary slackness error {worst_slack}"))?;
    let ch = InterferenceChannel::new(vec![vec![vec![1.0, 0.5]]], 1.0, 1.0).unwrap();
    let p = waterfilling_best_response(&ch, 0, &[vec![0.0, 0.0]]).map_err(|x| x.to_string())?;
    ensure(p == vec![1.0, 0.0], || format!("two-band case gave {p:?}"))?;
    Ok(format!("budget error {worst_budget:.1e}, slackness error {worst_slack:.1e}, two-band (1, 0)"))
}

fn criterion_8() -> Check {
    let start = Instant::now();
    let games = [
        ("sensor", sensor_dilemma(0.2).unwrap()),
        ("cr", cr_dilemma()),
        ("aumann", aumann_coordination()),
        ("pennies", matching_pennies()),
    ];
    let mut worst: f64 = 0.0;
    for (name, g) in &games {
        for seed in 0..10 {
            let t = regret_matching(g, 100_000, seed).map_err(|x| x.to_string())?;
            let q = t.empirical_joint.as_ref().ok_or("no empirical joint")?;
            ensure(is_coarse_correlated_equilibrium(g, q, 0.05).unwrap(), || format!("{name} seed {seed}"))?;
            worst = worst.max(equilibria::game::cce_max_violation(g, q).unwrap());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs <= 30.0, || format!("took {secs:.1} s"))?;
    Ok(format!("40/40 runs, worst violation {worst:.2e}, {secs:.1} s"))
}

fn criterion_9() -> Check {
    let g = normalize_utilities(&sensor_dilemma(0.2).unwrap());
    let init = MixedProfile::uniform(g.action_counts());
    let mut hits = 0;
    for seed in 0..100 {
        let t = bush_mosteller(&g, &init, StepSize::Constant(0.1), 50_000, seed).map_err(|x| x.to_string())?;
        for r in &t.records {
            let TraceState::Mixed(p) = &r.state else { return Err("non-mixed state".into()) };
            assert!(p.iter().all(|s| is_simplex(s)), "seed {seed} iteration {} left the simplex", r.iter);
        }
        let TraceState::Mixed(p) = t.final_state() else { unreachable!() };
        if p[0][0] > 0.99 && p[1][0] > 0.99 {
            hits += 1;
        }
    }
    ensure(hits >= 90, || format!("{hits}/100 runs settled on sleep"))?;
    Ok(format!("{hits}/100 runs settled on sleep, every iterate on the simplex"))
}

fn random_tu(rng: &mut ChaCha8Rng, k: usize) -> TUGame {
    let mut v: Vec<f64> = (0..1usize << k).map(|_| rng.gen_range(-1.0..3.0)).collect();
    v[0] = 0.0;
    TUGame::new(k, v).unwrap()
}

fn swap01(c: Coalition) -> Coalition {
    let (a, b) = (c & 1, (c >> 1) & 1);
    (c & !3) | (a << 1) | b
}

fn criterion_10() -> Check {
    let maj = shapley(&TUGame::majority(3).unwrap()).map_err(|x| x.to_string())?;
    ensure(maj.iter().all(|&x| close(x, 1.0 / 3.0, 1e-12)), || format!("majority {maj:?}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for case in 0..50 {
        let k = rng.gen_range(2..=6);
        let v = random_tu(&mut rng, k);
        let w = random_tu(&mut rng, k);
        let phi = shapley(&v).unwrap();
        ensure(close(phi.iter().sum(), v.value(v.grand()), 1e-9), || format!("case {case}: efficiency"))?;

        let sym = TUGame::from_fn(k, |c| v.value(c) + v.value(swap01(c))).unwrap();
        let ps = shapley(&sym).unwrap();
        ensure(close(ps[0], ps[1], 1e-9), || format!("case {case}: symmetry {ps:?}"))?;

        let null = k - 1;
        let nulled = TUGame::from_fn(k, |c| v.value(c & !(1 << null))).unwrap();
        let pn = shapley(&nulled).unwrap();
        ensure(pn[null].abs() <= 1e-9, || format!("case {case}: null player got {}", pn[null]))?;

        let vw = shapley(&v.sum(&w).unwrap()).unwrap();
        let pw = shapley(&w).unwrap();
        ensure((0..k).all(|i| close(vw[i], phi[i] + pw[i], 1e-9)), || format!("case {case}: additivity"))?;

        let brute = shapley_permutations(&v).unwrap();
        ensure((0..k).all(|i| close(brute[i], phi[i], 1e-9)), || format!("case {case}: permutation mismatch"))?;
    }
    Ok("majority (1/3, 1/3, 1/3); axioms and permutation check on 50 games".into())
}

fn criterion_11() -> Check {
    let maj = TUGame::majority(3).unwrap();
    let core = core_solve(&maj).map_err(|x| x.to_string())?;
    ensure(!core.nonempty && close(core.lp_value, 1.5, 1e-9), || format!("majority core {core:?}"))?;
    let lc = least_epsilon_core(&maj, EpsilonCore::Weak).map_err(|x| x.to_string())?;
    ensure(close(lc.epsilon, 1.0 / 3.0, 1e-7), || format!("least core epsilon {}", lc.epsilon))?;

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut passed = 0;
    for _ in 0..50 {
        let k = rng.gen_range(2..=8);
        // Non-negative combinations of unanimity games are convex.
        let terms: Vec<(Coalition, f64)> = (0..2 * k)
            .map(|_| (rng.gen_range(1..1u32 << k), rng.gen_range(0.0..2.0)))
            .collect();
        let g = TUGame::from_fn(k, |c| terms.iter().filter(|(t, _)| c & t == *t).map(|(_, w)| w).sum()).unwrap();
        let convex = is_convex(&g).unwrap().0;
        let nonempty = core_solve(&g).unwrap().nonempty;
        let phi = shapley(&g).unwrap();
        if convex && nonempty && in_core(&g, &phi, 1e-9).unwrap() {
            passed += 1;
        }
    }
    ensure(passed == 50, || format!("{passed}/50 convex games"))?;
    Ok(format!("majority LP value 3/2, least core 1/3, convex games {passed}/50"))
}

fn criterion_12() -> Check {
    for seed in 0..10 {
        let inst = BeamformingInstance::random(4, 1.0, seed).map_err(|x| x.to_string())?;
        let game = beamforming_game(&inst);
        let grid = game.discretize(21).map_err(|x| x.to_string())?;
        let ne = enumerate_pure_ne(&grid).map_err(|x| x.to_string())?;
        ensure(ne == vec![vec![0, 0]], || format!("seed {seed}: grid equilibria {ne:?}"))?;
        let sq = inst.utilities([0.0, 0.0]);
        let nbs = nash_bargaining(BargainingDomain::Continuous(&game), &sq, 32).map_err(|x| x.to_string())?;
        let u = &nbs.utilities;
        ensure(u[0] >= sq[0] - 1e-9 && u[1] >= sq[1] - 1e-9, || format!("seed {seed}: {u:?} below {sq:?}"))?;
        ensure(u[0] > sq[0] || u[1] > sq[1], || format!("seed {seed}: no strict improvement"))?;
    }
    Ok("10/10 seeds".into())
}

fn criterion_13() -> Check {
    let LoadedGame::Ctd(net) = scenario("ctd", &json!({})).map_err(|x| x.to_string())? else {
        return Err("ctd scenario is not a CTD network".into());
    };
    let k = net.stations();
    ensure(k == 7, || format!("{k} stations"))?;
    let ntu = NTUGame::symmetric(k, move |c| ctd_value(&net, c as u64)).unwrap();
    let game = CoalitionGame::Ntu(&ntu);
    for seed in 0..20 {
        let cfg = MergeSplitConfig {
            order: ScanOrder::Shuffled(seed),
            ..MergeSplitConfig::with_rule(AllocationRule::IdentityNtu)
        };
        let state = merge_split_run(game, &cfg, Partition::singletons(k).unwrap()).map_err(|x| x.to_string())?;
        ensure(state.converged && state.history.len() <= 500, || {
            format!("seed {seed}: {} operations, converged {}", state.history.len(), state.converged)
        })?;
        let (stable, witness) = is_merge_split_stable(&state.partition, game, &cfg).unwrap();
        ensure(stable, || format!("seed {seed}: unstable, {witness:?}"))?;
        for op in &state.history {
            // Recompute participants' payoffs from the coalition values.
            let payoff = |cs: &[Coalition]| -> Vec<f64> {
                let mut out = Vec::new();
                for &i in &op.players {
                    let c = cs.iter().find(|&&c| c >> i & 1 == 1).unwrap();
                    out.push(ntu.payoffs(*c).unwrap()[members(*c).iter().position(|&m| m == i).unwrap()]);
                }
                out
            };
            let (before, after) = match &op.kind {
                OperationKind::Merge { from, into } => (payoff(from), payoff(&[*into])),
                OperationKind::Split { from, into } => (payoff(&[*from]), payoff(into)),
            };
            let weakly = before.iter().zip(&after).all(|(b, a)| a >= b);
            let strictly = before.iter().zip(&after).any(|(b, a)| a > b);
            ensure(weakly && strictly, || format!("seed {seed}: {:?} is not Pareto improving", op.kind))?;
        }
    }
    Ok("20/20 seeds converge to stable partitions through Pareto-improving steps".into())
}

fn criterion_14() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut worst: f64 = 0.0;
    for case in 0..50 {
        let a: Vec<Vec<f64>> = (0..3).map(|_| (0..3).map(|_| rng.gen_range(-5.0..5.0)).collect()).collect();
        let b: Vec<Vec<f64>> = a.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        let g = FiniteGame::bimatrix(&a, &b).unwrap();
        let value = zero_sum_value(&g).map_err(|x| x.to_string())?.value;
        let ne = support_enumeration_2p(&g, 3).map_err(|x| x.to_string())?;
        ensure(!ne.is_empty(), || format!("case {case}: support enumeration found nothing"))?;
        for p in &ne {
            let u = expected_utility(&g, p, 0).unwrap();
            worst = worst.max((u - value).abs());
        }
    }
    ensure(worst <= 1e-6, || format!("largest gap {worst}"))?;
    Ok(format!("50/50 games, largest gap {worst:.1e}"))
}

fn criterion_15() -> Check {
    let LoadedGame::Finite(g) = scenario("band-selection", &json!({"users": 2, "bands": 2})).unwrap() else {
        return Err("band-selection scenario is not a finite game".into());
    };
    let ne = enumerate_pure_ne(&g).unwrap();
    let worst_ne = ne.iter().map(|p| welfare(&g, p)).fold(f64::INFINITY, f64::min);
    let mut lowest = f64::INFINITY;
    for seed in 0..20 {
        let t = regret_matching(&g, 10_000, seed).map_err(|x| x.to_string())?;
        let q = t.empirical_joint.as_ref().unwrap();
        let w: f64 = (0..g.num_profiles()).map(|i| q.probs()[i] * welfare(&g, &g.profile_at(i))).sum();
        lowest = lowest.min(w);
    }
    ensure(lowest >= worst_ne - 0.05, || format!("RM welfare {lowest} vs worst NE {worst_ne}"))?;
    Ok(format!("lowest RM welfare {lowest:.4} vs worst pure NE {worst_ne:.4}"))
}

fn report(n: usize, check: fn() -> Check) {
    let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
        Err(p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panicked".into()))
    });
    match outcome {
        Ok(detail) => println!("criterion {n:>2}: PASS  {detail}"),
        Err(detail) => {
            println!("criterion {n:>2}: FAIL  {detail}");
            panic!("criterion {n} failed: {detail}");
        }
    }
}

macro_rules! criteria {
    ($($name:ident => $n:literal, $check:ident;)*) => {
        $(
            #[test]
            fn $name() {
                report($n, $check);
            }
        )*
    };
}

criteria! {
    criterion_01_sensor_dilemma_equilibrium => 1, criterion_1;
    criterion_02_cr_dilemma_price_of_anarchy => 2, criterion_2;
    criterion_03_aumann_correlated_equilibria => 3, criterion_3;
    criterion_04_repeated_trigger_plan => 4, criterion_4;
    criterion_05_duck_foraging_split => 5, criterion_5;
    criterion_06_mac_band_selection_potential => 6, criterion_6;
    criterion_07_waterfilling_best_response => 7, criterion_7;
    criterion_08_regret_matching_cce => 8, criterion_8;
    criterion_09_bush_mosteller_sensor => 9, criterion_9;
    criterion_10_shapley_axioms => 10, criterion_10;
    criterion_11_core_and_least_core => 11, criterion_11;
    criterion_12_beamforming_bargaining => 12, criterion_12;
    criterion_13_ctd_merge_split => 13, criterion_13;
    criterion_14_zero_sum_cross_check => 14, criterion_14;
    criterion_15_band_selection_regret_welfare => 15, criterion_15;
}
