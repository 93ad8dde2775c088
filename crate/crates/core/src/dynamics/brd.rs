use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Algorithm, LearningTrace, TraceState};
use crate::error::{Error, Result};
use crate::game::{argmax_set, check_profile, deviation_payoffs, ContinuousGame, StrategicGame, DEFAULT_TOL};
use crate::scenarios::maximize_1d;

fn utilities<G: StrategicGame + ?Sized>(game: &G, s: &[usize]) -> Vec<f64> {
    (0..game.num_players()).map(|k| game.payoff(k, s)).collect()
}

/// Keep `current` if it is among `best`; otherwise draw uniformly from `best`.
fn pick(best: &[usize], current: usize, rng: &mut ChaCha8Rng) -> usize {
    if best.contains(&current) {
        current
    } else {
        best[rng.gen_range(0..best.len())]
    }
}

/// Round-robin best-response dynamics on a finite game.
///
/// Each round updates players `0..K` in order, each against the latest
/// actions of the others. A player whose current action is already a best
/// response keeps it; otherwise it moves to a best response drawn uniformly
/// at random (seeded). Stops after the first round in which nobody moved.
pub fn brd_sequential<G: StrategicGame + ?Sized>(
    game: &G,
    init: &[usize],
    max_rounds: usize,
    seed: u64,
) -> Result<LearningTrace> {
    check_profile(game.action_counts(), init)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trace = LearningTrace::new(Algorithm::BrdSequential, seed, TraceState::Pure(init.to_vec()));
    let mut s = init.to_vec();
    for _ in 0..max_rounds {
        let mut changed = false;
        for k in 0..game.num_players() {
            let best = argmax_set(&deviation_payoffs(game, &s, k), DEFAULT_TOL);
            let next = pick(&best, s[k], &mut rng);
            changed |= next != s[k];
            s[k] = next;
        }
        trace.push(TraceState::Pure(s.clone()), None, utilities(game, &s));
        if !changed {
            trace.converged = true;
            break;
        }
    }
    Ok(trace)
}

/// Simultaneous best-response dynamics on a finite game.
///
/// Every player responds to the previous profile. With `kappa > 0` each
/// player maximizes `u_k(a, s_-k) - kappa * [a != s_k]`, which makes staying
/// put more attractive; `kappa = 0` is the plain simultaneous update.
pub fn brd_simultaneous<G: StrategicGame + ?Sized>(
    game: &G,
    init: &[usize],
    max_rounds: usize,
    kappa: f64,
    seed: u64,
) -> Result<LearningTrace> {
    check_profile(game.action_counts(), init)?;
    check_kappa(kappa)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trace = LearningTrace::new(Algorithm::BrdSimultaneous, seed, TraceState::Pure(init.to_vec()));
    let mut s = init.to_vec();
    for _ in 0..max_rounds {
        let next: Vec<usize> = (0..game.num_players())
            .map(|k| {
                let values: Vec<f64> = deviation_payoffs(game, &s, k)
                    .into_iter()
                    .enumerate()
                    .map(|(a, u)| if a == s[k] { u } else { u - kappa })
                    .collect();
                pick(&argmax_set(&values, DEFAULT_TOL), s[k], &mut rng)
            })
            .collect();
        let changed = next != s;
        s = next;
        trace.push(TraceState::Pure(s.clone()), None, utilities(game, &s));
        if !changed {
            trace.converged = true;
            break;
        }
    }
    Ok(trace)
}

fn check_kappa(kappa: f64) -> Result<()> {
    if !(kappa >= 0.0 && kappa.is_finite()) {
        return Err(Error::InvalidArgument(format!("kappa = {kappa} must be finite and >= 0")));
    }
    Ok(())
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(Error::InvalidArgument(format!("eps = {eps} must be finite and >= 0")));
    }
    Ok(())
}

fn clamp_into(game: &ContinuousGame, k: usize, v: Vec<f64>) -> Result<Vec<f64>> {
    let b = game.bounds(k);
    if v.len() != b.len() || v.iter().any(|x| !x.is_finite()) {
        return Err(Error::Contract(format!("best response of player {k} has the wrong shape or is not finite")));
    }
    Ok(v.iter().zip(b).map(|(x, &(lo, hi))| x.clamp(lo, hi)).collect())
}

fn continuous_utilities(game: &ContinuousGame, s: &[Vec<f64>]) -> Vec<f64> {
    (0..game.num_players()).map(|k| game.utility(k, s)).collect()
}

fn step_size(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Round-robin best responses through the game's oracle; converged once a
/// round moves no coordinate by more than `eps`.
pub fn brd_sequential_continuous(
    game: &ContinuousGame,
    init: &[Vec<f64>],
    eps: f64,
    max_rounds: usize,
) -> Result<LearningTrace> {
    game.check_profile(init)?;
    check_eps(eps)?;
    if !game.has_best_response() {
        return Err(Error::Capability("best-response oracle"));
    }
    let mut trace = LearningTrace::new(Algorithm::BrdSequential, 0, TraceState::Continuous(init.to_vec()));
    let mut s = init.to_vec();
    for _ in 0..max_rounds {
        let before = s.clone();
        for k in 0..game.num_players() {
            s[k] = clamp_into(game, k, game.best_response(k, &s)?)?;
        }
        trace.push(TraceState::Continuous(s.clone()), None, continuous_utilities(game, &s));
        if step_size(&before, &s) <= eps {
            trace.converged = true;
            break;
        }
    }
    Ok(trace)
}

/// Maximize `u_k(x, s_-k) - kappa |x - s_k|^2` by cyclic coordinate search.
fn proximal_response(game: &ContinuousGame, s: &[Vec<f64>], k: usize, kappa: f64) -> Vec<f64> {
    let anchor = s[k].clone();
    let mut trial = s.to_vec();
    for _sweep in 0..5 {
        for c in 0..anchor.len() {
            let (lo, hi) = game.bounds(k)[c];
            let x = maximize_1d(
                |v| {
                    trial[k][c] = v;
                    let dist: f64 = trial[k].iter().zip(&anchor).map(|(a, b)| (a - b).powi(2)).sum();
                    game.utility(k, &trial) - kappa * dist
                },
                lo,
                hi,
            );
            trial[k][c] = x;
        }
        if anchor.len() == 1 {
            break;
        }
    }
    trial[k].clone()
}

/// Simultaneous best responses on a continuous game. With `kappa = 0` the
/// oracle is used; with `kappa > 0` every player maximizes its utility minus
/// `kappa` times the squared distance to its previous action, by numerical
/// search on the action box.
pub fn brd_simultaneous_continuous(
    game: &ContinuousGame,
    init: &[Vec<f64>],
    eps: f64,
    max_rounds: usize,
    kappa: f64,
) -> Result<LearningTrace> {
    game.check_profile(init)?;
    check_eps(eps)?;
    check_kappa(kappa)?;
    if kappa == 0.0 && !game.has_best_response() {
        return Err(Error::Capability("best-response oracle"));
    }
    let mut trace = LearningTrace::new(Algorithm::BrdSimultaneous, 0, TraceState::Continuous(init.to_vec()));
    let mut s = init.to_vec();
    for _ in 0..max_rounds {
        let next = (0..game.num_players())
            .map(|k| {
                if kappa == 0.0 {
                    clamp_into(game, k, game.best_response(k, &s)?)
                } else {
                    Ok(proximal_response(game, &s, k, kappa))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let moved = step_size(&s, &next);
        s = next;
        trace.push(TraceState::Continuous(s.clone()), None, continuous_utilities(game, &s));
        if moved <= eps {
            trace.converged = true;
            break;
        }
    }
    Ok(trace)
}
