//! Solution-concept predicates and evaluators on a fixed game.

use super::{
    check_player, check_profile, next_profile, profile_count, FiniteGame, JointDistribution, MixedProfile,
    StrategicGame,
};
use crate::error::{Error, Result};

/// Expected utility of `player` under independent mixing:
/// the sum over all profiles of the product of probabilities times the payoff.
pub fn expected_utility<G: StrategicGame + ?Sized>(game: &G, profile: &MixedProfile, player: usize) -> Result<f64> {
    let counts = game.action_counts();
    profile.check_shape(counts)?;
    check_player(counts, player)?;
    profile_count(counts)?;
    let mut total = 0.0;
    let mut p = vec![0; counts.len()];
    loop {
        let w: f64 = p.iter().enumerate().map(|(k, &a)| profile.strategy(k)[a]).product();
        if w != 0.0 {
            total += w * game.payoff(player, &p);
        }
        if !next_profile(&mut p, counts) {
            break;
        }
    }
    Ok(total)
}

/// Expected utility of each pure action of `player` against the others' mixtures.
pub fn action_values<G: StrategicGame + ?Sized>(game: &G, profile: &MixedProfile, player: usize) -> Result<Vec<f64>> {
    let counts = game.action_counts();
    profile.check_shape(counts)?;
    check_player(counts, player)?;
    profile_count(counts)?;
    let mut values = vec![0.0; counts[player]];
    let mut p = vec![0; counts.len()];
    loop {
        let w: f64 = p
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != player)
            .map(|(k, &a)| profile.strategy(k)[a])
            .product();
        if w != 0.0 {
            values[p[player]] += w * game.payoff(player, &p);
        }
        if !next_profile(&mut p, counts) {
            break;
        }
    }
    Ok(values)
}

/// Payoff of `player` for each of its actions, the others fixed at `profile`.
pub fn deviation_payoffs<G: StrategicGame + ?Sized>(game: &G, profile: &[usize], player: usize) -> Vec<f64> {
    let mut p = profile.to_vec();
    (0..game.action_counts()[player])
        .map(|a| {
            p[player] = a;
            game.payoff(player, &p)
        })
        .collect()
}

/// All maximizers of `values` within `tol` of the maximum, in index order.
pub(crate) fn argmax_set(values: &[f64], tol: f64) -> Vec<usize> {
    let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    values
        .iter()
        .enumerate()
        .filter(|&(_, &v)| v >= best - tol)
        .map(|(i, _)| i)
        .collect()
}

/// Every best response of `player` to the opponents' actions in `profile`
/// (the player's own entry is ignored). Never empty.
pub fn best_response_set<G: StrategicGame + ?Sized>(
    game: &G,
    profile: &[usize],
    player: usize,
    tol: f64,
) -> Result<Vec<usize>> {
    let counts = game.action_counts();
    check_player(counts, player)?;
    let mut p = profile.to_vec();
    if p.len() == counts.len() {
        p[player] = 0;
    }
    check_profile(counts, &p)?;
    Ok(argmax_set(&deviation_payoffs(game, &p, player), tol))
}

/// Pure Nash equilibrium test: every player's action is a best response.
pub fn is_pure_ne<G: StrategicGame + ?Sized>(game: &G, profile: &[usize], tol: f64) -> Result<bool> {
    check_profile(game.action_counts(), profile)?;
    for k in 0..game.num_players() {
        if !best_response_set(game, profile, k, tol)?.contains(&profile[k]) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Mixed Nash test. Deviations to pure actions suffice because expected
/// utility is linear in the deviating player's own mixture.
pub fn is_mixed_ne<G: StrategicGame + ?Sized>(game: &G, profile: &MixedProfile, tol: f64) -> Result<bool> {
    for k in 0..game.num_players() {
        let values = action_values(game, profile, k)?;
        let current: f64 = values.iter().zip(profile.strategy(k)).map(|(v, p)| v * p).sum();
        if values.iter().any(|&v| v > current + tol) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Sum of all players' payoffs at a pure profile.
pub fn welfare<G: StrategicGame + ?Sized>(game: &G, profile: &[usize]) -> f64 {
    (0..game.num_players()).map(|k| game.payoff(k, profile)).sum()
}

/// Pareto optimality by brute force over all profiles.
///
/// Strong mode rejects any profile that is weakly better for everyone and
/// strictly better for someone; weak mode only rejects profiles that are
/// strictly better for everyone.
pub fn is_pareto_optimal<G: StrategicGame + ?Sized>(game: &G, profile: &[usize], weak: bool, tol: f64) -> Result<bool> {
    let counts = game.action_counts();
    check_profile(counts, profile)?;
    profile_count(counts)?;
    let base: Vec<f64> = (0..counts.len()).map(|k| game.payoff(k, profile)).collect();
    let mut s = vec![0; counts.len()];
    loop {
        let u: Vec<f64> = (0..counts.len()).map(|k| game.payoff(k, &s)).collect();
        let dominates = if weak {
            u.iter().zip(&base).all(|(a, b)| *a > b + tol)
        } else {
            u.iter().zip(&base).all(|(a, b)| *a >= b - tol) && u.iter().zip(&base).any(|(a, b)| *a > b + tol)
        };
        if dominates {
            return Ok(false);
        }
        if !next_profile(&mut s, counts) {
            break;
        }
    }
    Ok(true)
}

/// Welfare-maximizing pure profile; ties go to the lexicographically smallest.
pub fn social_optimum<G: StrategicGame + ?Sized>(game: &G) -> Result<(Vec<usize>, f64)> {
    let counts = game.action_counts();
    profile_count(counts)?;
    let mut s = vec![0; counts.len()];
    let mut best = (s.clone(), welfare(game, &s));
    while next_profile(&mut s, counts) {
        let w = welfare(game, &s);
        if w > best.1 + 1e-12 * best.1.abs().max(1.0) {
            best = (s.clone(), w);
        }
    }
    Ok(best)
}

/// Best social welfare over worst equilibrium welfare.
///
/// Returns `+inf` when the worst equilibrium has non-positive welfare and
/// the optimum is positive.
pub fn price_of_anarchy<G: StrategicGame + ?Sized>(game: &G, ne_set: &[Vec<usize>]) -> Result<f64> {
    if ne_set.is_empty() {
        return Err(Error::NoEquilibrium);
    }
    for p in ne_set {
        if !is_pure_ne(game, p, super::DEFAULT_TOL)? {
            return Err(Error::InvalidArgument(format!("profile {p:?} is not a pure Nash equilibrium")));
        }
    }
    let (_, numerator) = social_optimum(game)?;
    let denominator = ne_set.iter().map(|p| welfare(game, p)).fold(f64::INFINITY, f64::min);
    if denominator > 0.0 {
        Ok(numerator / denominator)
    } else if numerator > 0.0 {
        Ok(f64::INFINITY)
    } else {
        Err(Error::UndefinedRatio { numerator, denominator })
    }
}

/// Expected payoff of `player` when profiles are drawn from `q`.
pub fn joint_expected_utility(game: &FiniteGame, q: &JointDistribution, player: usize) -> Result<f64> {
    q.check_shape(game.action_counts())?;
    check_player(game.action_counts(), player)?;
    Ok(q.probs().iter().enumerate().map(|(i, p)| p * game.payoff_at(player, i)).sum())
}

/// Largest gain any player obtains by obeying a fixed deviation map
/// `recommended -> other` (correlated equilibrium incentive constraints).
pub fn ce_max_violation(game: &FiniteGame, q: &JointDistribution) -> Result<f64> {
    q.check_shape(game.action_counts())?;
    let counts = game.action_counts();
    let mut worst = f64::NEG_INFINITY;
    for k in 0..counts.len() {
        let n = counts[k];
        // gain[rec][dev] = sum over profiles recommending `rec` of q * (u(dev) - u(rec))
        let mut gain = vec![vec![0.0; n]; n];
        let mut p = vec![0; counts.len()];
        for (i, &prob) in q.probs().iter().enumerate() {
            if prob != 0.0 {
                let rec = p[k];
                let u_rec = game.payoff_at(k, i);
                for (dev, g) in gain[rec].iter_mut().enumerate() {
                    if dev != rec {
                        let j = game.deviation_index(i, k, rec, dev);
                        *g += prob * (game.payoff_at(k, j) - u_rec);
                    }
                }
            }
            next_profile(&mut p, counts);
        }
        for rec in 0..n {
            for dev in 0..n {
                if dev != rec {
                    worst = worst.max(gain[rec][dev]);
                }
            }
        }
    }
    Ok(if worst.is_finite() { worst } else { 0.0 })
}

/// Largest gain any player obtains by committing to a fixed action before
/// seeing the signal (coarse correlated equilibrium constraints).
pub fn cce_max_violation(game: &FiniteGame, q: &JointDistribution) -> Result<f64> {
    q.check_shape(game.action_counts())?;
    let counts = game.action_counts();
    let mut worst = f64::NEG_INFINITY;
    for k in 0..counts.len() {
        let mut gain = vec![0.0; counts[k]];
        let mut p = vec![0; counts.len()];
        for (i, &prob) in q.probs().iter().enumerate() {
            if prob != 0.0 {
                let u = game.payoff_at(k, i);
                for (dev, g) in gain.iter_mut().enumerate() {
                    let j = game.deviation_index(i, k, p[k], dev);
                    *g += prob * (game.payoff_at(k, j) - u);
                }
            }
            next_profile(&mut p, counts);
        }
        worst = gain.into_iter().fold(worst, f64::max);
    }
    Ok(worst)
}

/// Correlated equilibrium test over all `K * sum N_k (N_k - 1)` incentive constraints.
pub fn is_correlated_equilibrium(game: &FiniteGame, q: &JointDistribution, tol: f64) -> Result<bool> {
    Ok(ce_max_violation(game, q)? <= tol)
}

/// Coarse correlated equilibrium test over all `K * sum N_k` constraints.
pub fn is_coarse_correlated_equilibrium(game: &FiniteGame, q: &JointDistribution, tol: f64) -> Result<bool> {
    Ok(cce_max_violation(game, q)? <= tol)
}

/// An action strictly better than every other action against every
/// opponent profile, if one exists.
pub fn strictly_dominant_action<G: StrategicGame + ?Sized>(game: &G, player: usize) -> Result<Option<usize>> {
    let counts = game.action_counts();
    check_player(counts, player)?;
    profile_count(counts)?;
    let mut candidates: Vec<usize> = (0..counts[player]).collect();
    let mut s = vec![0; counts.len()];
    loop {
        if s[player] == 0 {
            let vals = deviation_payoffs(game, &s, player);
            candidates.retain(|&a| vals.iter().enumerate().all(|(b, &v)| b == a || vals[a] > v));
            if candidates.is_empty() {
                return Ok(None);
            }
        }
        if !next_profile(&mut s, counts) {
            break;
        }
    }
    Ok(candidates.first().copied())
}
