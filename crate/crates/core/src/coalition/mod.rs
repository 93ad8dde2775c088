//! Coalition-form games. Coalitions are bitmasks over players (bit `i` set
//! means player `i` is a member), so a game on `K` players stores `2^K`
//! values.

mod core_set;
mod json;
mod partition;
mod properties;
mod shapley;

use std::fmt;
use std::sync::Arc;

pub use core_set::{
    balancing_certificate, core_solve, in_core, is_balanced, least_epsilon_core, CoreSolution, EpsilonCore, LeastCore,
};
pub use partition::{coalition_structure_core_check, optimal_partition, optimal_partition_with, PartitionMethod};
pub use properties::{is_convex, is_superadditive};
pub use shapley::{shapley, shapley_monte_carlo, shapley_permutations, ShapleyEstimate, MC_CHUNKS};

use crate::error::{Error, Result};

/// A set of players encoded as a bitmask.
pub type Coalition = u32;

/// Per-player payoffs, indexed by player.
pub type Allocation = Vec<f64>;

/// Largest player count for which a value table is stored.
pub const MAX_PLAYERS: usize = 20;
/// Largest player count for the LP-based solvers and exact Shapley value.
pub const MAX_LP_PLAYERS: usize = 14;
/// Largest player count for the exhaustive pair scans.
pub const MAX_SCAN_PLAYERS: usize = 16;

pub(crate) fn check_players(players: usize, limit: usize) -> Result<()> {
    if players > limit {
        return Err(Error::capacity("players", players, limit));
    }
    Ok(())
}

/// Member indices of `c`, ascending.
pub fn members(c: Coalition) -> Vec<usize> {
    (0..32).filter(|&i| c >> i & 1 == 1).collect()
}

/// Bitmask of the listed players.
pub fn coalition_of(players: &[usize]) -> Coalition {
    players.iter().fold(0, |m, &i| m | 1 << i)
}

/// Transferable-utility game: one real worth per coalition, `v(empty) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct TUGame {
    players: usize,
    values: Vec<f64>,
}

impl TUGame {
    /// `values[c]` is the worth of coalition `c`; the table has `2^players`
    /// entries.
    pub fn new(players: usize, values: Vec<f64>) -> Result<Self> {
        check_players(players, MAX_PLAYERS)?;
        if values.len() != 1 << players {
            return Err(Error::Shape(format!(
                "{} coalition values for {} players (expected {})",
                values.len(),
                players,
                1usize << players
            )));
        }
        if values[0] != 0.0 {
            return Err(Error::invariant("values[{}]", format!("the empty coalition must be worth 0, got {}", values[0])));
        }
        if let Some(c) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invariant(format!("values[{}]", fmt_members(c as Coalition)), "value is not finite"));
        }
        Ok(TUGame { players, values })
    }

    /// Tabulate `v` on every non-empty coalition (the empty one gets 0).
    pub fn from_fn(players: usize, v: impl Fn(Coalition) -> f64) -> Result<Self> {
        check_players(players, MAX_PLAYERS)?;
        let values = (0..1u32 << players).map(|c| if c == 0 { 0.0 } else { v(c) }).collect();
        TUGame::new(players, values)
    }

    /// `v(C) = sum of c_i over members`.
    pub fn additive(weights: &[f64]) -> Result<Self> {
        TUGame::from_fn(weights.len(), |c| members(c).iter().map(|&i| weights[i]).sum())
    }

    /// Simple majority: worth 1 when more than half of the players join.
    pub fn majority(players: usize) -> Result<Self> {
        TUGame::from_fn(players, |c| if 2 * c.count_ones() as usize > players { 1.0 } else { 0.0 })
    }

    pub fn players(&self) -> usize {
        self.players
    }

    pub fn grand(&self) -> Coalition {
        ((1u64 << self.players) - 1) as Coalition
    }

    pub fn value(&self, c: Coalition) -> f64 {
        self.values[c as usize]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Coalition-wise sum of two games on the same players.
    pub fn sum(&self, other: &TUGame) -> Result<TUGame> {
        if self.players != other.players {
            return Err(Error::Shape(format!("games on {} and {} players", self.players, other.players)));
        }
        TUGame::new(self.players, self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect())
    }

    /// Largest absolute worth, at least 1; used to scale tolerances.
    pub(crate) fn scale(&self) -> f64 {
        self.values.iter().fold(1.0f64, |m, v| m.max(v.abs()))
    }

    pub(crate) fn check_allocation(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.players {
            return Err(Error::Shape(format!("allocation of length {} for {} players", x.len(), self.players)));
        }
        if let Some(i) = x.iter().position(|v| !v.is_finite()) {
            return Err(Error::invariant(format!("x[{i}]"), "allocation entry is not finite"));
        }
        Ok(())
    }
}

/// Members of `c` joined by commas, as used for coalition keys in files.
pub fn fmt_members(c: Coalition) -> String {
    members(c).iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

type NtuEvaluator = dyn Fn(Coalition) -> Vec<f64> + Send + Sync;

/// Non-transferable-utility game in which every coalition realizes one
/// fixed payoff vector for its members (in ascending member order).
#[derive(Clone)]
pub struct NTUGame {
    players: usize,
    evaluator: Arc<NtuEvaluator>,
    symmetric: bool,
}

impl fmt::Debug for NTUGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NTUGame")
            .field("players", &self.players)
            .field("symmetric", &self.symmetric)
            .finish()
    }
}

impl NTUGame {
    pub fn new(players: usize, evaluator: impl Fn(Coalition) -> Vec<f64> + Send + Sync + 'static) -> Result<Self> {
        check_players(players, MAX_PLAYERS)?;
        Ok(NTUGame {
            players,
            evaluator: Arc::new(evaluator),
            symmetric: false,
        })
    }

    /// Every member of `C` receives the coalition's worth `v(C)`.
    pub fn symmetric(players: usize, v: impl Fn(Coalition) -> f64 + Send + Sync + 'static) -> Result<Self> {
        check_players(players, MAX_PLAYERS)?;
        Ok(NTUGame {
            players,
            evaluator: Arc::new(move |c| vec![v(c); c.count_ones() as usize]),
            symmetric: true,
        })
    }

    pub fn players(&self) -> usize {
        self.players
    }

    /// True when built with [`NTUGame::symmetric`].
    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Member payoffs of `c`, checked for length and finiteness.
    pub fn payoffs(&self, c: Coalition) -> Result<Vec<f64>> {
        let x = (self.evaluator)(c);
        if x.len() != c.count_ones() as usize {
            return Err(Error::Contract(format!(
                "evaluator returned {} payoffs for coalition {{{}}}",
                x.len(),
                fmt_members(c)
            )));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Contract(format!("non-finite payoff for coalition {{{}}}", fmt_members(c))));
        }
        Ok(x)
    }
}

/// Disjoint non-empty coalitions covering all players, kept sorted by
/// bitmask so that equal partitions compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    players: usize,
    coalitions: Vec<Coalition>,
}

impl Partition {
    pub fn new(players: usize, mut coalitions: Vec<Coalition>) -> Result<Self> {
        check_players(players, MAX_PLAYERS)?;
        let all = ((1u64 << players) - 1) as Coalition;
        let mut seen: Coalition = 0;
        for (i, &c) in coalitions.iter().enumerate() {
            if c == 0 {
                return Err(Error::invariant(format!("coalitions[{i}]"), "coalition is empty"));
            }
            if c & !all != 0 {
                return Err(Error::invariant(format!("coalitions[{i}]"), format!("member outside 0..{players}")));
            }
            if c & seen != 0 {
                return Err(Error::invariant(
                    format!("coalitions[{i}]"),
                    format!("players {{{}}} already in another coalition", fmt_members(c & seen)),
                ));
            }
            seen |= c;
        }
        if seen != all {
            return Err(Error::invariant("coalitions", format!("players {{{}}} not covered", fmt_members(all & !seen))));
        }
        coalitions.sort_unstable();
        Ok(Partition { players, coalitions })
    }

    /// Build from member lists.
    pub fn from_members(players: usize, groups: &[Vec<usize>]) -> Result<Self> {
        if let Some(i) = groups.iter().flatten().find(|&&i| i >= players) {
            return Err(Error::invariant("coalitions", format!("player {i} outside 0..{players}")));
        }
        Partition::new(players, groups.iter().map(|g| coalition_of(g)).collect())
    }

    pub fn singletons(players: usize) -> Result<Self> {
        Partition::new(players, (0..players).map(|i| 1 << i).collect())
    }

    pub fn grand(players: usize) -> Result<Self> {
        Partition::new(players, vec![((1u64 << players) - 1) as Coalition])
    }

    pub fn players(&self) -> usize {
        self.players
    }

    /// Coalitions in ascending bitmask order.
    pub fn coalitions(&self) -> &[Coalition] {
        &self.coalitions
    }

    pub fn len(&self) -> usize {
        self.coalitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coalitions.is_empty()
    }

    /// Coalition containing `player`.
    pub fn coalition_of(&self, player: usize) -> Coalition {
        *self
            .coalitions
            .iter()
            .find(|&&c| c >> player & 1 == 1)
            .expect("partition covers every player")
    }

    /// Member lists, one per coalition.
    pub fn member_lists(&self) -> Vec<Vec<usize>> {
        self.coalitions.iter().map(|&c| members(c)).collect()
    }

    /// Total worth `sum v(C)` under a TU game.
    pub fn total_value(&self, game: &TUGame) -> f64 {
        self.coalitions.iter().map(|&c| game.value(c)).sum()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coalitions.iter().map(|&c| format!("{{{}}}", fmt_members(c))).collect();
        write!(f, "{}", parts.join(" "))
    }
}
