use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{check_players, Allocation, Coalition, TUGame, MAX_LP_PLAYERS};
use crate::error::{Error, Result};
use crate::harness::derive_seed;

/// Exact Shapley value: each player's marginal contribution averaged with
/// weight `|C|! (K - |C| - 1)! / K!` over the coalitions `C` it can join.
pub fn shapley(game: &TUGame) -> Result<Allocation> {
    let k = game.players();
    check_players(k, MAX_LP_PLAYERS)?;
    // weight[s] = s! (k - s - 1)! / k!, built as a ratio to stay accurate.
    let weight: Vec<f64> = (0..k)
        .map(|s| {
            let mut w = 1.0 / k as f64;
            for j in 1..=s {
                w *= j as f64 / (k - s + j - 1) as f64;
            }
            w
        })
        .collect();
    let mut phi = vec![0.0; k];
    for c in 0..=game.grand() {
        let s = c.count_ones() as usize;
        let base = game.value(c);
        for (i, p) in phi.iter_mut().enumerate() {
            if c >> i & 1 == 0 {
                *p += weight[s] * (game.value(c | 1 << i) - base);
            }
        }
    }
    Ok(phi)
}

fn add_marginals(game: &TUGame, order: &[usize], sum: &mut [f64], sum_sq: &mut [f64]) {
    let mut c: Coalition = 0;
    let mut prev = 0.0;
    for &i in order {
        c |= 1 << i;
        let v = game.value(c);
        let m = v - prev;
        sum[i] += m;
        sum_sq[i] += m * m;
        prev = v;
    }
}

/// Average marginal contribution over every one of the `K!` join orders.
/// Agrees with [`shapley`] up to rounding; capped at 10 players.
pub fn shapley_permutations(game: &TUGame) -> Result<Allocation> {
    let k = game.players();
    check_players(k, 10)?;
    let mut order: Vec<usize> = (0..k).collect();
    let mut sum = vec![0.0; k];
    let mut sq = vec![0.0; k];
    let mut count = 0u64;
    loop {
        add_marginals(game, &order, &mut sum, &mut sq);
        count += 1;
        if !next_permutation(&mut order) {
            break;
        }
    }
    Ok(sum.into_iter().map(|s| s / count as f64).collect())
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let Some(i) = (0..p.len() - 1).rev().find(|&i| p[i] < p[i + 1]) else {
        return false;
    };
    let j = (i + 1..p.len()).rev().find(|&j| p[j] > p[i]).expect("a larger element exists");
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShapleyEstimate {
    pub values: Allocation,
    /// Standard error of each estimate (sample deviation over `sqrt(n)`).
    pub std_errors: Vec<f64>,
    pub samples: usize,
}

/// Number of independently seeded chunks the Monte-Carlo samples are split into.
pub const MC_CHUNKS: usize = 8;

/// Permutation-sampling estimate of the Shapley value.
///
/// The samples are split into [`MC_CHUNKS`] chunks, each with its own seed
/// derived from `seed`, evaluated in parallel and summed in chunk order, so
/// the result does not depend on the thread count.
pub fn shapley_monte_carlo(game: &TUGame, samples: usize, seed: u64) -> Result<ShapleyEstimate> {
    if samples == 0 {
        return Err(Error::InvalidArgument("at least one sample is required".into()));
    }
    let k = game.players();
    let chunks: Vec<(Vec<f64>, Vec<f64>)> = (0..MC_CHUNKS)
        .into_par_iter()
        .map(|chunk| {
            let n = samples / MC_CHUNKS + usize::from(chunk < samples % MC_CHUNKS);
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, chunk as u64));
            let mut order: Vec<usize> = (0..k).collect();
            let mut sum = vec![0.0; k];
            let mut sq = vec![0.0; k];
            for _ in 0..n {
                order.shuffle(&mut rng);
                add_marginals(game, &order, &mut sum, &mut sq);
            }
            (sum, sq)
        })
        .collect();
    let mut sum = vec![0.0; k];
    let mut sq = vec![0.0; k];
    for (s, q) in &chunks {
        for i in 0..k {
            sum[i] += s[i];
            sq[i] += q[i];
        }
    }
    let n = samples as f64;
    let values: Vec<f64> = sum.iter().map(|s| s / n).collect();
    let std_errors = values
        .iter()
        .zip(&sq)
        .map(|(mean, q)| {
            if samples < 2 {
                return f64::INFINITY;
            }
            let var = ((q - n * mean * mean) / (n - 1.0)).max(0.0);
            (var / n).sqrt()
        })
        .collect();
    Ok(ShapleyEstimate { values, std_errors, samples })
}
