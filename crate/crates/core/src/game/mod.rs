//! Strategic-form games: finite payoff tensors, mixed strategies, joint
//! distributions over profiles, and continuous games given by evaluators.
//!
//! Solution-concept predicates live in [`concepts`]; structural tests
//! (exact potentials, supermodularity, the diagonally strict concavity
//! diagnostic) live in [`structure`].

pub mod concepts;
mod json;
pub mod structure;

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub use concepts::*;
pub use structure::*;

/// Default tolerance for predicate equalities.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Largest number of pure profiles (product of action counts) a dense game may hold.
pub const MAX_PROFILES: usize = 10_000_000;

/// Tolerance on the total mass of probability vectors.
pub const SIMPLEX_TOL: f64 = 1e-9;

/// Anything that can report a payoff for a pure profile.
///
/// Dense [`FiniteGame`]s implement it, and so do implicit games (such as
/// congestion games with many players) whose tensor would be too large to
/// materialize.
pub trait StrategicGame: Sync {
    fn action_counts(&self) -> &[usize];

    fn payoff(&self, player: usize, profile: &[usize]) -> f64;

    fn num_players(&self) -> usize {
        self.action_counts().len()
    }
}

/// Number of pure profiles, or a capacity error past [`MAX_PROFILES`].
pub fn profile_count(action_counts: &[usize]) -> Result<usize> {
    let mut total: u128 = 1;
    for &n in action_counts {
        total = total.saturating_mul(n as u128);
    }
    if total > MAX_PROFILES as u128 {
        return Err(Error::capacity("profile count", total, MAX_PROFILES));
    }
    Ok(total as usize)
}

/// Advance `profile` to the next profile in lexicographic order (last
/// player fastest). Returns false after the last profile.
pub fn next_profile(profile: &mut [usize], action_counts: &[usize]) -> bool {
    for k in (0..profile.len()).rev() {
        profile[k] += 1;
        if profile[k] < action_counts[k] {
            return true;
        }
        profile[k] = 0;
    }
    false
}

/// Every pure profile in lexicographic order.
pub fn all_profiles(action_counts: &[usize]) -> Result<Vec<Vec<usize>>> {
    let n = profile_count(action_counts)?;
    let mut out = Vec::with_capacity(n);
    let mut p = vec![0; action_counts.len()];
    loop {
        out.push(p.clone());
        if !next_profile(&mut p, action_counts) {
            break;
        }
    }
    Ok(out)
}

pub(crate) fn check_profile(action_counts: &[usize], profile: &[usize]) -> Result<()> {
    if profile.len() != action_counts.len() {
        return Err(Error::Shape(format!(
            "profile has {} entries, game has {} players",
            profile.len(),
            action_counts.len()
        )));
    }
    for (k, (&a, &n)) in profile.iter().zip(action_counts).enumerate() {
        if a >= n {
            return Err(Error::Shape(format!(
                "action {a} of player {k} out of range (player has {n} actions)"
            )));
        }
    }
    Ok(())
}

pub(crate) fn check_player(action_counts: &[usize], player: usize) -> Result<()> {
    if player >= action_counts.len() {
        return Err(Error::Shape(format!(
            "player {player} out of range ({} players)",
            action_counts.len()
        )));
    }
    Ok(())
}

/// A finite game with a dense payoff tensor.
///
/// Payoffs are stored player-major; within one player, profiles are laid
/// out lexicographically with the last player's action varying fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteGame {
    action_counts: Vec<usize>,
    strides: Vec<usize>,
    num_profiles: usize,
    payoffs: Vec<f64>,
    labels: Option<Vec<Vec<String>>>,
}

impl FiniteGame {
    /// Build from a flat player-major payoff vector of length `K * prod(N_k)`.
    pub fn new(action_counts: Vec<usize>, payoffs: Vec<f64>) -> Result<Self> {
        if action_counts.is_empty() {
            return Err(Error::invariant("players", "a game needs at least one player"));
        }
        if let Some(k) = action_counts.iter().position(|&n| n == 0) {
            return Err(Error::invariant(
                format!("actions[{k}]"),
                "every player needs at least one action",
            ));
        }
        let num_profiles = profile_count(&action_counts)?;
        let expected = num_profiles * action_counts.len();
        if payoffs.len() != expected {
            return Err(Error::Shape(format!(
                "payoff tensor has {} cells, expected {}",
                payoffs.len(),
                expected
            )));
        }
        if let Some(i) = payoffs.iter().position(|u| !u.is_finite()) {
            return Err(Error::invariant(
                format!("payoffs[{}][profile {}]", i / num_profiles, i % num_profiles),
                "payoff is not finite",
            ));
        }
        let mut strides = vec![1; action_counts.len()];
        for k in (0..action_counts.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * action_counts[k + 1];
        }
        Ok(FiniteGame {
            action_counts,
            strides,
            num_profiles,
            payoffs,
            labels: None,
        })
    }

    /// Build by evaluating `f(player, profile)` on every profile.
    pub fn from_fn(action_counts: Vec<usize>, f: impl Fn(usize, &[usize]) -> f64) -> Result<Self> {
        let n = profile_count(&action_counts)?;
        let k_players = action_counts.len();
        let mut payoffs = vec![0.0; n * k_players];
        if n > 0 && k_players > 0 {
            let mut p = vec![0; k_players];
            let mut idx = 0;
            loop {
                for k in 0..k_players {
                    payoffs[k * n + idx] = f(k, &p);
                }
                idx += 1;
                if !next_profile(&mut p, &action_counts) {
                    break;
                }
            }
        }
        FiniteGame::new(action_counts, payoffs)
    }

    /// Two-player game from row and column payoff matrices.
    pub fn bimatrix(row: &[Vec<f64>], col: &[Vec<f64>]) -> Result<Self> {
        let n1 = row.len();
        let n2 = row.first().map_or(0, Vec::len);
        if col.len() != n1 || row.iter().chain(col).any(|r| r.len() != n2) {
            return Err(Error::Shape("bimatrix payoffs must be two equal rectangular matrices".into()));
        }
        FiniteGame::from_fn(vec![n1, n2], |k, p| if k == 0 { row[p[0]][p[1]] } else { col[p[0]][p[1]] })
    }

    /// Materialize any strategic game into a dense tensor.
    pub fn from_game<G: StrategicGame + ?Sized>(game: &G) -> Result<Self> {
        FiniteGame::from_fn(game.action_counts().to_vec(), |k, p| game.payoff(k, p))
    }

    /// Attach per-player action names; they must be unique within a player.
    pub fn with_labels(mut self, labels: Vec<Vec<String>>) -> Result<Self> {
        if labels.len() != self.action_counts.len() {
            return Err(Error::invariant("actions", "one label list per player required"));
        }
        for (k, names) in labels.iter().enumerate() {
            if names.len() != self.action_counts[k] {
                return Err(Error::invariant(
                    format!("actions[{k}]"),
                    format!("{} labels for {} actions", names.len(), self.action_counts[k]),
                ));
            }
            for (i, a) in names.iter().enumerate() {
                if names[..i].contains(a) {
                    return Err(Error::invariant(format!("actions[{k}][{i}]"), format!("duplicate label `{a}`")));
                }
            }
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn labels(&self) -> Option<&[Vec<String>]> {
        self.labels.as_deref()
    }

    /// Action name, falling back to the index.
    pub fn action_label(&self, player: usize, action: usize) -> String {
        self.labels
            .as_ref()
            .and_then(|l| l.get(player))
            .and_then(|l| l.get(action))
            .cloned()
            .unwrap_or_else(|| action.to_string())
    }

    /// Index of the action with the given label.
    pub fn action_index(&self, player: usize, label: &str) -> Option<usize> {
        self.labels.as_ref()?.get(player)?.iter().position(|l| l == label)
    }

    pub fn num_profiles(&self) -> usize {
        self.num_profiles
    }

    pub fn profile_index(&self, profile: &[usize]) -> usize {
        profile.iter().zip(&self.strides).map(|(a, s)| a * s).sum()
    }

    pub fn profile_at(&self, mut index: usize) -> Vec<usize> {
        self.strides
            .iter()
            .map(|&s| {
                let a = index / s;
                index %= s;
                a
            })
            .collect()
    }

    /// Payoff of `player` at the flat profile index.
    pub fn payoff_at(&self, player: usize, index: usize) -> f64 {
        self.payoffs[player * self.num_profiles + index]
    }

    /// Flat player-major payoff storage.
    pub fn payoffs(&self) -> &[f64] {
        &self.payoffs
    }

    /// Index of the profile obtained by replacing `player`'s action.
    pub fn deviation_index(&self, index: usize, player: usize, from: usize, to: usize) -> usize {
        index + to * self.strides[player] - from * self.strides[player]
    }

    /// Map every payoff of every player through `f(player, u)`.
    pub fn map_payoffs(&self, f: impl Fn(usize, f64) -> f64) -> Result<Self> {
        let n = self.num_profiles;
        let payoffs = self.payoffs.iter().enumerate().map(|(i, &u)| f(i / n, u)).collect();
        let mut g = FiniteGame::new(self.action_counts.clone(), payoffs)?;
        g.labels = self.labels.clone();
        Ok(g)
    }

    /// Smallest and largest payoff of `player`.
    pub fn payoff_range(&self, player: usize) -> (f64, f64) {
        let slice = &self.payoffs[player * self.num_profiles..(player + 1) * self.num_profiles];
        slice
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &u| (lo.min(u), hi.max(u)))
    }

    /// Largest absolute payoff, at least one; used to scale tolerances.
    pub(crate) fn payoff_scale(&self) -> f64 {
        self.payoffs.iter().fold(1.0_f64, |m, u| m.max(u.abs()))
    }
}

impl StrategicGame for FiniteGame {
    fn action_counts(&self) -> &[usize] {
        &self.action_counts
    }

    fn payoff(&self, player: usize, profile: &[usize]) -> f64 {
        self.payoffs[player * self.num_profiles + self.profile_index(profile)]
    }
}

/// One probability vector per player.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedProfile {
    strategies: Vec<Vec<f64>>,
}

fn check_simplex(v: &[f64], path: &str) -> Result<()> {
    if v.is_empty() {
        return Err(Error::invariant(path, "empty probability vector"));
    }
    if let Some(i) = v.iter().position(|p| !(p.is_finite() && *p >= 0.0)) {
        return Err(Error::invariant(format!("{path}[{i}]"), "probability must be finite and non-negative"));
    }
    let total: f64 = v.iter().sum();
    if (total - 1.0).abs() > SIMPLEX_TOL {
        return Err(Error::invariant(path, format!("probabilities sum to {total}, not 1")));
    }
    Ok(())
}

/// True when `v` is a probability vector within [`SIMPLEX_TOL`].
pub fn is_simplex(v: &[f64]) -> bool {
    check_simplex(v, "").is_ok()
}

impl MixedProfile {
    pub fn new(strategies: Vec<Vec<f64>>) -> Result<Self> {
        for (k, s) in strategies.iter().enumerate() {
            check_simplex(s, &format!("strategies[{k}]"))?;
        }
        Ok(MixedProfile { strategies })
    }

    /// Point mass on a pure profile.
    pub fn pure(action_counts: &[usize], profile: &[usize]) -> Result<Self> {
        check_profile(action_counts, profile)?;
        Ok(MixedProfile {
            strategies: action_counts
                .iter()
                .zip(profile)
                .map(|(&n, &a)| {
                    let mut v = vec![0.0; n];
                    v[a] = 1.0;
                    v
                })
                .collect(),
        })
    }

    pub fn uniform(action_counts: &[usize]) -> Self {
        MixedProfile {
            strategies: action_counts.iter().map(|&n| vec![1.0 / n as f64; n]).collect(),
        }
    }

    pub fn strategies(&self) -> &[Vec<f64>] {
        &self.strategies
    }

    pub fn strategy(&self, player: usize) -> &[f64] {
        &self.strategies[player]
    }

    pub fn num_players(&self) -> usize {
        self.strategies.len()
    }

    pub(crate) fn check_shape(&self, action_counts: &[usize]) -> Result<()> {
        if self.strategies.len() != action_counts.len()
            || self.strategies.iter().zip(action_counts).any(|(s, &n)| s.len() != n)
        {
            return Err(Error::Shape("mixed profile does not match the game's action counts".into()));
        }
        Ok(())
    }

    /// The pure profile if every player puts all mass on one action.
    pub fn as_pure(&self) -> Option<Vec<usize>> {
        self.strategies
            .iter()
            .map(|s| s.iter().position(|&p| p == 1.0))
            .collect()
    }

    /// Product distribution over pure profiles.
    pub fn product(&self) -> JointDistribution {
        let counts: Vec<usize> = self.strategies.iter().map(Vec::len).collect();
        let n: usize = counts.iter().product();
        let mut probs = Vec::with_capacity(n);
        let mut p = vec![0; counts.len()];
        loop {
            probs.push(p.iter().enumerate().map(|(k, &a)| self.strategies[k][a]).product());
            if !next_profile(&mut p, &counts) {
                break;
            }
        }
        JointDistribution {
            action_counts: counts,
            probs,
        }
    }

    /// Largest coordinate-wise distance to another profile of the same shape.
    pub fn max_distance(&self, other: &MixedProfile) -> f64 {
        self.strategies
            .iter()
            .zip(&other.strategies)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max)
    }
}

/// A probability distribution over pure profiles, flattened lexicographically.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    action_counts: Vec<usize>,
    probs: Vec<f64>,
}

impl JointDistribution {
    pub fn new(action_counts: Vec<usize>, probs: Vec<f64>) -> Result<Self> {
        let n = profile_count(&action_counts)?;
        if probs.len() != n {
            return Err(Error::Shape(format!("{} probabilities for {} profiles", probs.len(), n)));
        }
        check_simplex(&probs, "q")?;
        Ok(JointDistribution { action_counts, probs })
    }

    pub fn point_mass(action_counts: &[usize], profile: &[usize]) -> Result<Self> {
        check_profile(action_counts, profile)?;
        let n = profile_count(action_counts)?;
        let mut probs = vec![0.0; n];
        probs[flat_index(action_counts, profile)] = 1.0;
        Ok(JointDistribution {
            action_counts: action_counts.to_vec(),
            probs,
        })
    }

    /// Uniform over a list of (distinct) pure profiles.
    pub fn uniform_over(action_counts: &[usize], profiles: &[Vec<usize>]) -> Result<Self> {
        if profiles.is_empty() {
            return Err(Error::InvalidArgument("uniform distribution over no profiles".into()));
        }
        let n = profile_count(action_counts)?;
        let mut probs = vec![0.0; n];
        for p in profiles {
            check_profile(action_counts, p)?;
            probs[flat_index(action_counts, p)] += 1.0 / profiles.len() as f64;
        }
        JointDistribution::new(action_counts.to_vec(), probs)
    }

    pub fn action_counts(&self) -> &[usize] {
        &self.action_counts
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, profile: &[usize]) -> f64 {
        self.probs[flat_index(&self.action_counts, profile)]
    }

    pub(crate) fn check_shape(&self, action_counts: &[usize]) -> Result<()> {
        if self.action_counts != action_counts {
            return Err(Error::Shape("joint distribution does not match the game's action counts".into()));
        }
        Ok(())
    }

    /// Marginal distribution of one player's action.
    pub fn marginal(&self, player: usize) -> Vec<f64> {
        let mut m = vec![0.0; self.action_counts[player]];
        let mut p = vec![0; self.action_counts.len()];
        for &q in &self.probs {
            m[p[player]] += q;
            next_profile(&mut p, &self.action_counts);
        }
        m
    }

    /// Total-variation distance to another distribution of the same shape.
    pub fn total_variation(&self, other: &JointDistribution) -> f64 {
        0.5 * self.probs.iter().zip(&other.probs).map(|(a, b)| (a - b).abs()).sum::<f64>()
    }
}

pub(crate) fn flat_index(action_counts: &[usize], profile: &[usize]) -> usize {
    profile
        .iter()
        .zip(action_counts)
        .fold(0, |acc, (&a, &n)| acc * n + a)
}

/// Draw one pure profile from `q` by inverse-CDF over the flattened order.
pub fn sample_joint(q: &JointDistribution, seed: u64) -> Vec<usize> {
    sample_joint_with(q, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn sample_joint_with<R: Rng + ?Sized>(q: &JointDistribution, rng: &mut R) -> Vec<usize> {
    let idx = sample_index(&q.probs, rng.gen::<f64>());
    let mut rem = idx;
    let mut profile = vec![0; q.action_counts.len()];
    for k in (0..profile.len()).rev() {
        profile[k] = rem % q.action_counts[k];
        rem /= q.action_counts[k];
    }
    profile
}

/// Inverse-CDF lookup of a uniform draw `u` in `[0, 1)`; skips zero-mass cells.
pub(crate) fn sample_index(probs: &[f64], u: f64) -> usize {
    let total: f64 = probs.iter().sum();
    let target = u * total;
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (i, &p) in probs.iter().enumerate() {
        if p > 0.0 {
            acc += p;
            last_positive = i;
            if target < acc {
                return i;
            }
        }
    }
    last_positive
}

pub(crate) type UtilityFn = dyn Fn(usize, &[Vec<f64>]) -> f64 + Send + Sync;
pub(crate) type VectorFn = dyn Fn(usize, &[Vec<f64>]) -> Vec<f64> + Send + Sync;

/// A game with box-constrained real action vectors.
///
/// Each player's action is a vector with per-coordinate `[lower, upper]`
/// bounds. The utility evaluator is required; a best-response oracle and an
/// own-action gradient are optional capabilities.
#[derive(Clone)]
pub struct ContinuousGame {
    bounds: Vec<Vec<(f64, f64)>>,
    utility: Arc<UtilityFn>,
    best_response: Option<Arc<VectorFn>>,
    gradient: Option<Arc<VectorFn>>,
}

impl fmt::Debug for ContinuousGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ContinuousGame")
            .field("bounds", &self.bounds)
            .field("best_response", &self.best_response.is_some())
            .field("gradient", &self.gradient.is_some())
            .finish()
    }
}

impl ContinuousGame {
    pub fn new(
        bounds: Vec<Vec<(f64, f64)>>,
        utility: impl Fn(usize, &[Vec<f64>]) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if bounds.is_empty() {
            return Err(Error::invariant("players", "a game needs at least one player"));
        }
        for (k, b) in bounds.iter().enumerate() {
            if b.is_empty() {
                return Err(Error::invariant(format!("bounds[{k}]"), "action has no coordinates"));
            }
            for (i, &(lo, hi)) in b.iter().enumerate() {
                if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                    return Err(Error::invariant(
                        format!("bounds[{k}][{i}]"),
                        format!("bounds must be finite with lower <= upper, got [{lo}, {hi}]"),
                    ));
                }
            }
        }
        Ok(ContinuousGame {
            bounds,
            utility: Arc::new(utility),
            best_response: None,
            gradient: None,
        })
    }

    /// Players with one scalar action each, all on `[lo, hi]`.
    pub fn scalar(
        players: usize,
        lo: f64,
        hi: f64,
        utility: impl Fn(usize, &[Vec<f64>]) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        ContinuousGame::new(vec![vec![(lo, hi)]; players], utility)
    }

    pub fn with_best_response(
        mut self,
        br: impl Fn(usize, &[Vec<f64>]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        self.best_response = Some(Arc::new(br));
        self
    }

    /// Gradient of each player's utility with respect to its own action.
    pub fn with_gradient(
        mut self,
        grad: impl Fn(usize, &[Vec<f64>]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        self.gradient = Some(Arc::new(grad));
        self
    }

    pub fn num_players(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self, player: usize) -> &[(f64, f64)] {
        &self.bounds[player]
    }

    pub fn all_bounds(&self) -> &[Vec<(f64, f64)>] {
        &self.bounds
    }

    pub fn utility(&self, player: usize, profile: &[Vec<f64>]) -> f64 {
        (self.utility)(player, profile)
    }

    pub fn has_best_response(&self) -> bool {
        self.best_response.is_some()
    }

    pub fn has_gradient(&self) -> bool {
        self.gradient.is_some()
    }

    pub fn best_response(&self, player: usize, profile: &[Vec<f64>]) -> Result<Vec<f64>> {
        let br = self
            .best_response
            .as_ref()
            .ok_or(Error::Capability("best-response oracle"))?;
        Ok(br(player, profile))
    }

    pub fn gradient(&self, player: usize, profile: &[Vec<f64>]) -> Result<Vec<f64>> {
        let g = self.gradient.as_ref().ok_or(Error::Capability("gradient evaluator"))?;
        Ok(g(player, profile))
    }

    /// True if the profile has the right shape and lies in the box.
    pub fn contains(&self, profile: &[Vec<f64>]) -> bool {
        profile.len() == self.bounds.len()
            && profile.iter().zip(&self.bounds).all(|(s, b)| {
                s.len() == b.len() && s.iter().zip(b).all(|(x, &(lo, hi))| *x >= lo && *x <= hi)
            })
    }

    pub(crate) fn check_profile(&self, profile: &[Vec<f64>]) -> Result<()> {
        if !self.contains(profile) {
            return Err(Error::Shape("profile outside the game's action boxes".into()));
        }
        Ok(())
    }

    /// Grid coordinates `lo + i (hi - lo) / (m - 1)` for a scalar-action player.
    pub fn grid_axis(&self, player: usize, points: usize) -> Result<Vec<f64>> {
        if self.bounds[player].len() != 1 {
            return Err(Error::Shape(format!("player {player} does not have a scalar action")));
        }
        if points < 2 {
            return Err(Error::InvalidArgument("grid needs at least 2 points per axis".into()));
        }
        let (lo, hi) = self.bounds[player][0];
        Ok((0..points)
            .map(|i| if i + 1 == points { hi } else { lo + (hi - lo) * i as f64 / (points - 1) as f64 })
            .collect())
    }

    /// Restrict every (scalar-action) player to an evenly spaced grid.
    pub fn discretize(&self, points: usize) -> Result<FiniteGame> {
        let axes = (0..self.num_players())
            .map(|k| self.grid_axis(k, points))
            .collect::<Result<Vec<_>>>()?;
        let counts = vec![points; self.num_players()];
        FiniteGame::from_fn(counts, |k, p| {
            let s: Vec<Vec<f64>> = p.iter().zip(&axes).map(|(&i, ax)| vec![ax[i]]).collect();
            self.utility(k, &s)
        })
    }
}
