use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Algorithm, LearningTrace, TraceState};
use crate::error::Result;
use crate::game::{cce_max_violation, flat_index, profile_count, sample_index, FiniteGame, JointDistribution, StrategicGame};

/// Regret matching with full counterfactual payoffs.
///
/// Player `k` keeps the cumulative regret `R_k(a) = sum_t u_k(a, a_-k(t)) -
/// u_k(a(t))` and plays `a` with probability proportional to `max(R_k(a), 0)`,
/// or uniformly when every regret is non-positive. The first stage is
/// uniform. The trace records the mixed strategies actually used and the
/// realized profiles, and `empirical_joint` holds the frequency of play.
/// `converged` reports whether the final average regret is at most 0.01.
pub fn regret_matching(game: &FiniteGame, rounds: usize, seed: u64) -> Result<LearningTrace> {
    let counts = game.action_counts();
    let players = counts.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut regret: Vec<Vec<f64>> = counts.iter().map(|&n| vec![0.0; n]).collect();
    let uniform: Vec<Vec<f64>> = counts.iter().map(|&n| vec![1.0 / n as f64; n]).collect();
    let mut trace = LearningTrace::new(Algorithm::RegretMatching, seed, TraceState::Mixed(uniform.clone()));
    let mut joint = vec![0.0; profile_count(counts)?];
    let mut profile = vec![0; players];
    for _ in 0..rounds {
        let strategies: Vec<Vec<f64>> = regret
            .iter()
            .zip(&uniform)
            .map(|(r, u)| {
                let pos: Vec<f64> = r.iter().map(|&x| x.max(0.0)).collect();
                if pos.iter().sum::<f64>() > 0.0 {
                    let total: f64 = pos.iter().sum();
                    pos.into_iter().map(|x| x / total).collect()
                } else {
                    u.clone()
                }
            })
            .collect();
        for (k, p) in strategies.iter().enumerate() {
            profile[k] = sample_index(p, rng.gen::<f64>());
        }
        let idx = flat_index(counts, &profile);
        joint[idx] += 1.0;
        let utilities: Vec<f64> = (0..players).map(|k| game.payoff_at(k, idx)).collect();
        for k in 0..players {
            for (a, r) in regret[k].iter_mut().enumerate() {
                let j = game.deviation_index(idx, k, profile[k], a);
                *r += game.payoff_at(k, j) - utilities[k];
            }
        }
        trace.push(TraceState::Mixed(strategies), Some(profile.clone()), utilities);
    }
    if rounds > 0 {
        joint.iter_mut().for_each(|x| *x /= rounds as f64);
        let q = JointDistribution::new(counts.to_vec(), joint)?;
        trace.converged = max_positive_regret(game, &q)? <= 0.01;
        trace.empirical_joint = Some(q);
    }
    Ok(trace)
}

/// Largest positive average external regret of any player whose play has
/// empirical joint frequency `q`. This equals the coarse correlated
/// equilibrium violation of `q`, floored at zero.
pub fn max_positive_regret(game: &FiniteGame, q: &JointDistribution) -> Result<f64> {
    Ok(cce_max_violation(game, q)?.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios::{cr_dilemma, sensor_dilemma};

    #[test]
    fn single_action_game_has_no_regret() {
        let g = FiniteGame::new(vec![1, 1], vec![0.5, -2.0]).unwrap();
        let t = regret_matching(&g, 100, 4).unwrap();
        let q = t.empirical_joint.unwrap();
        assert_eq!(q.probs(), &[1.0]);
        assert_eq!(max_positive_regret(&g, &q).unwrap(), 0.0);
    }

    #[test]
    fn sensor_concentrates_on_sleep() {
        let g = sensor_dilemma(0.2).unwrap();
        let t = regret_matching(&g, 5_000, 7).unwrap();
        assert!(t.empirical_joint.unwrap().prob(&[0, 0]) >= 0.95);
    }

    #[test]
    fn regret_decreases_with_horizon() {
        let g = cr_dilemma();
        let short = regret_matching(&g, 1_000, 2).unwrap();
        let long = regret_matching(&g, 20_000, 2).unwrap();
        let r_short = max_positive_regret(&g, short.empirical_joint.as_ref().unwrap()).unwrap();
        let r_long = max_positive_regret(&g, long.empirical_joint.as_ref().unwrap()).unwrap();
        assert!(r_long < r_short || r_long == 0.0);
    }

    #[test]
    fn same_seed_same_trace() {
        let g = cr_dilemma();
        assert_eq!(regret_matching(&g, 200, 11).unwrap(), regret_matching(&g, 200, 11).unwrap());
    }
}
