use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Algorithm, LearningTrace, TraceState};
use crate::error::{Error, Result};
use crate::game::{is_simplex, sample_index, FiniteGame, MixedProfile, StrategicGame};

/// Step sizes for reinforcement learning, indexed by the 1-based iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepSize {
    Constant(f64),
    /// `scale * t^(-exponent)`.
    PowerLaw { scale: f64, exponent: f64 },
}

impl StepSize {
    pub fn at(self, t: usize) -> f64 {
        match self {
            StepSize::Constant(l) => l,
            StepSize::PowerLaw { scale, exponent } => scale * (t as f64).powf(-exponent),
        }
    }
}

/// Bush–Mosteller reinforcement: each player samples `a ~ pi_k`, observes
/// only its own payoff `u`, and moves `pi_k <- pi_k + lambda u (e_a - pi_k)`.
///
/// Payoffs must already lie in `[0, 1]` (see [`super::normalize_utilities`]);
/// otherwise a contract error is returned before anything runs. `converged`
/// reports whether every final strategy puts more than 0.99 on one action.
pub fn bush_mosteller(
    game: &FiniteGame,
    init: &MixedProfile,
    lambda: StepSize,
    rounds: usize,
    seed: u64,
) -> Result<LearningTrace> {
    init.check_shape(game.action_counts())?;
    for k in 0..game.num_players() {
        let (lo, hi) = game.payoff_range(k);
        if lo < 0.0 || hi > 1.0 {
            return Err(Error::Contract(format!(
                "payoffs of player {k} span [{lo}, {hi}]; normalize them to [0, 1] first"
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pi = init.strategies().to_vec();
    let mut trace = LearningTrace::new(Algorithm::BushMosteller, seed, TraceState::Mixed(pi.clone()));
    for t in 1..=rounds {
        let step = lambda.at(t);
        if !(step > 0.0 && step < 1.0) {
            return Err(Error::InvalidArgument(format!("step size {step} at iteration {t} is outside (0, 1)")));
        }
        let played: Vec<usize> = pi.iter().map(|p| sample_index(p, rng.gen::<f64>())).collect();
        let utilities: Vec<f64> = (0..pi.len()).map(|k| game.payoff(k, &played)).collect();
        for (k, p) in pi.iter_mut().enumerate() {
            let gain = step * utilities[k];
            for (i, x) in p.iter_mut().enumerate() {
                let e = if i == played[k] { 1.0 } else { 0.0 };
                *x += gain * (e - *x);
            }
            if !is_simplex(p) {
                return Err(Error::Numerical(format!("strategy of player {k} left the simplex at iteration {t}")));
            }
        }
        trace.push(TraceState::Mixed(pi.clone()), Some(played), utilities);
    }
    trace.converged = pi.iter().all(|p| p.iter().any(|&x| x > 0.99));
    Ok(trace)
}
