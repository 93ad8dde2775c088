use super::{Algorithm, LearningTrace, TraceState};
use crate::error::Result;
use crate::game::{action_values, check_profile, flat_index, profile_count, FiniteGame, JointDistribution, MixedProfile, StrategicGame};

fn lowest_argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Fictitious play for `rounds` steps starting from the pure profile `init`.
///
/// Every player tracks the empirical frequency of each opponent's past
/// actions (initial action included) and plays a best response to their
/// product, breaking ties toward the lowest index. The frequencies are
/// updated recursively, `f(t) = f(t-1) + (e_a(t) - f(t-1)) / (t + 1)`.
/// The trace state holds the frequencies and `played` the realized profile.
/// `converged` is set when the last two realized profiles coincide and form
/// a pure Nash equilibrium. The process is deterministic; `seed` is only
/// recorded.
pub fn fictitious_play(game: &FiniteGame, init: &[usize], rounds: usize, seed: u64) -> Result<LearningTrace> {
    let counts = game.action_counts();
    check_profile(counts, init)?;
    let mut freqs: Vec<Vec<f64>> = counts
        .iter()
        .zip(init)
        .map(|(&n, &a)| {
            let mut f = vec![0.0; n];
            f[a] = 1.0;
            f
        })
        .collect();
    let mut trace = LearningTrace::new(Algorithm::FictitiousPlay, seed, TraceState::Mixed(freqs.clone()));
    let mut joint = vec![0.0; profile_count(counts)?];
    let mut prev = init.to_vec();
    for t in 1..=rounds {
        let belief = MixedProfile::new(freqs.clone())?;
        let played: Vec<usize> = (0..counts.len())
            .map(|k| action_values(game, &belief, k).map(|v| lowest_argmax(&v)))
            .collect::<Result<_>>()?;
        let step = 1.0 / (t as f64 + 1.0);
        for (f, &a) in freqs.iter_mut().zip(&played) {
            for (i, x) in f.iter_mut().enumerate() {
                let e = if i == a { 1.0 } else { 0.0 };
                *x += step * (e - *x);
            }
        }
        joint[flat_index(counts, &played)] += 1.0;
        let utilities = (0..counts.len()).map(|k| game.payoff(k, &played)).collect();
        trace.converged = played == prev && crate::game::is_pure_ne(game, &played, crate::game::DEFAULT_TOL)?;
        prev = played.clone();
        trace.push(TraceState::Mixed(freqs.clone()), Some(played), utilities);
    }
    if rounds > 0 {
        joint.iter_mut().for_each(|x| *x /= rounds as f64);
        trace.empirical_joint = Some(JointDistribution::new(counts.to_vec(), joint)?);
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios::{matching_pennies, sensor_dilemma};

    #[test]
    fn recursion_matches_batch_frequencies() {
        let g = matching_pennies();
        let t = fictitious_play(&g, &[0, 1], 300, 0).unwrap();
        let mut history = vec![vec![0usize, 1]];
        for r in &t.records {
            history.push(r.played.clone().unwrap());
            let TraceState::Mixed(f) = &r.state else { panic!() };
            for k in 0..2 {
                for a in 0..2 {
                    let batch = history.iter().filter(|p| p[k] == a).count() as f64 / history.len() as f64;
                    assert!((f[k][a] - batch).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn sensor_absorbs_at_sleep() {
        let t = fictitious_play(&sensor_dilemma(0.3).unwrap(), &[1, 1], 20, 0).unwrap();
        assert!(t.records.iter().all(|r| r.played.as_deref() == Some(&[0, 0][..])));
        assert!(t.converged);
    }

    #[test]
    fn pennies_marginals_approach_half() {
        let t = fictitious_play(&matching_pennies(), &[0, 0], 10_000, 0).unwrap();
        let TraceState::Mixed(f) = t.final_state() else { panic!() };
        for k in 0..2 {
            assert!((f[k][0] - 0.5).abs() < 0.05, "{f:?}");
        }
        assert!(!t.converged);
    }
}
