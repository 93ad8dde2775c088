//! Structural properties of games: exact potentials, supermodularity and
//! the diagonally strict concavity diagnostic.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{next_profile, ContinuousGame, FiniteGame, StrategicGame};
use crate::error::{Error, Result};

/// Values of an exact potential, one per pure profile (lexicographic order).
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialCertificate {
    action_counts: Vec<usize>,
    values: Vec<f64>,
}

impl PotentialCertificate {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, profile: &[usize]) -> f64 {
        self.values[super::flat_index(&self.action_counts, profile)]
    }

    /// Largest mismatch between a unilateral utility change and the
    /// matching potential change, over every unilateral edge of `game`.
    pub fn max_edge_error(&self, game: &FiniteGame) -> f64 {
        let counts = game.action_counts();
        let mut worst: f64 = 0.0;
        for i in 0..game.num_profiles() {
            let s = game.profile_at(i);
            for k in 0..counts.len() {
                for b in (s[k] + 1)..counts[k] {
                    let j = game.deviation_index(i, k, s[k], b);
                    let du = game.payoff_at(k, j) - game.payoff_at(k, i);
                    let dphi = self.values[j] - self.values[i];
                    worst = worst.max((du - dphi).abs());
                }
            }
        }
        worst
    }

    /// Lexicographically smallest maximizer of the potential.
    pub fn argmax(&self) -> Vec<usize> {
        let mut best = 0;
        for (i, &v) in self.values.iter().enumerate() {
            if v > self.values[best] {
                best = i;
            }
        }
        let mut rem = best;
        let mut p = vec![0; self.action_counts.len()];
        for k in (0..p.len()).rev() {
            p[k] = rem % self.action_counts[k];
            rem /= self.action_counts[k];
        }
        p
    }
}

/// Build an exact potential by integrating unilateral payoff differences
/// along coordinate paths from the all-zeros profile. The certificate is
/// returned only if every two-player 4-cycle closes within `tol` (scaled by
/// the largest payoff magnitude), which is equivalent to path independence.
pub fn find_exact_potential(game: &FiniteGame, tol: f64) -> Option<PotentialCertificate> {
    let counts = game.action_counts();
    let k_players = counts.len();
    let scale = game.payoff_scale();

    for i in 0..game.num_profiles() {
        let s = game.profile_at(i);
        for a in 0..k_players {
            for b in (a + 1)..k_players {
                for x in (s[a] + 1)..counts[a] {
                    for y in (s[b] + 1)..counts[b] {
                        let i_x = game.deviation_index(i, a, s[a], x);
                        let i_xy = game.deviation_index(i_x, b, s[b], y);
                        let i_y = game.deviation_index(i, b, s[b], y);
                        let cycle = (game.payoff_at(a, i_x) - game.payoff_at(a, i))
                            + (game.payoff_at(b, i_xy) - game.payoff_at(b, i_x))
                            + (game.payoff_at(a, i_y) - game.payoff_at(a, i_xy))
                            + (game.payoff_at(b, i) - game.payoff_at(b, i_y));
                        if cycle.abs() > tol * scale {
                            return None;
                        }
                    }
                }
            }
        }
    }

    let mut values = Vec::with_capacity(game.num_profiles());
    let mut s = vec![0; k_players];
    loop {
        // Walk 0 -> (s_0, 0, ..) -> (s_0, s_1, 0, ..) -> ... -> s.
        let mut phi = 0.0;
        let mut step = vec![0; k_players];
        for k in 0..k_players {
            if s[k] != 0 {
                let before = game.payoff(k, &step);
                step[k] = s[k];
                phi += game.payoff(k, &step) - before;
            }
        }
        values.push(phi);
        if !next_profile(&mut s, counts) {
            break;
        }
    }
    Some(PotentialCertificate {
        action_counts: counts.to_vec(),
        values,
    })
}

/// Increasing-differences test with action indices as the order, checked
/// over every pair of component-wise ordered opponent profiles.
pub fn is_supermodular(game: &FiniteGame, tol: f64) -> bool {
    let counts = game.action_counts();
    let scale = game.payoff_scale();
    for k in 0..counts.len() {
        // Opponent profiles with player k's slot pinned to 0.
        let opponents: Vec<usize> = (0..game.num_profiles())
            .filter(|&i| game.profile_at(i)[k] == 0)
            .collect();
        for &hi in &opponents {
            let sh = game.profile_at(hi);
            for &lo in &opponents {
                let sl = game.profile_at(lo);
                if hi == lo || !sh.iter().zip(&sl).all(|(a, b)| a >= b) {
                    continue;
                }
                let mut prev = f64::NEG_INFINITY;
                for a in 0..counts[k] {
                    let d = game.payoff_at(k, game.deviation_index(hi, k, 0, a))
                        - game.payoff_at(k, game.deviation_index(lo, k, 0, a));
                    if d < prev - tol * scale {
                        return false;
                    }
                    prev = prev.max(d);
                }
            }
        }
    }
    true
}

/// Outcome of the sampled diagonally-strict-concavity check.
#[derive(Debug, Clone, PartialEq)]
pub enum DscOutcome {
    /// No sampled pair violated the condition. Evidence, not proof.
    Pass { pairs_checked: usize },
    /// A pair `(s, s')` with `(s - s') . (g(s') - g(s)) <= 0`.
    Counterexample {
        s: Vec<Vec<f64>>,
        s_prime: Vec<Vec<f64>>,
        value: f64,
    },
}

/// Lattice resolution used when drawing DSC sample points.
pub const DSC_LATTICE: u32 = 64;

/// Sample pairs of profiles and look for a violation of
/// `(s - s') . (g_r(s') - g_r(s)) > 0`, where `g_r` stacks `r_k` times each
/// player's own-action gradient.
///
/// Points are drawn uniformly from a lattice of [`DSC_LATTICE`] levels per
/// coordinate so that measure-zero failure directions (such as equal
/// displacements of all players) are hit with positive probability.
pub fn check_dsc(game: &ContinuousGame, r: &[f64], samples: usize, seed: u64) -> Result<DscOutcome> {
    if !game.has_gradient() {
        return Err(Error::Capability("gradient evaluator"));
    }
    if r.len() != game.num_players() {
        return Err(Error::Shape(format!("{} weights for {} players", r.len(), game.num_players())));
    }
    if r.iter().any(|&w| !(w > 0.0 && w.is_finite())) {
        return Err(Error::InvalidArgument("DSC weights must be strictly positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| -> Vec<Vec<f64>> {
        game.all_bounds()
            .iter()
            .map(|b| {
                b.iter()
                    .map(|&(lo, hi)| {
                        let level = rng.gen_range(0..=DSC_LATTICE);
                        lo + (hi - lo) * level as f64 / DSC_LATTICE as f64
                    })
                    .collect()
            })
            .collect()
    };
    let weighted_gradient = |s: &[Vec<f64>]| -> Result<Vec<Vec<f64>>> {
        (0..game.num_players())
            .map(|k| Ok(game.gradient(k, s)?.into_iter().map(|g| r[k] * g).collect()))
            .collect()
    };

    let mut checked = 0;
    for _ in 0..samples {
        let s = draw(&mut rng);
        let s_prime = draw(&mut rng);
        if s == s_prime {
            continue;
        }
        let g = weighted_gradient(&s)?;
        let g_prime = weighted_gradient(&s_prime)?;
        let mut value = 0.0;
        let mut norm2 = 0.0;
        for k in 0..s.len() {
            for c in 0..s[k].len() {
                let d = s[k][c] - s_prime[k][c];
                value += d * (g_prime[k][c] - g[k][c]);
                norm2 += d * d;
            }
        }
        checked += 1;
        if value <= 1e-12 * norm2 {
            return Ok(DscOutcome::Counterexample { s, s_prime, value });
        }
    }
    Ok(DscOutcome::Pass { pairs_checked: checked })
}
