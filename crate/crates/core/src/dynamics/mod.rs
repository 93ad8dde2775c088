//! Learning and adjustment dynamics. Every run returns a [`LearningTrace`]
//! that is bit-reproducible from its inputs and seed.

mod brd;
mod consensus;
mod fictitious;
mod regret;
mod reinforcement;
mod repeated;

use std::fmt::Write as _;

pub use brd::{brd_sequential, brd_sequential_continuous, brd_simultaneous, brd_simultaneous_continuous};
pub use consensus::{consensus, ConsensusNetwork};
pub use fictitious::fictitious_play;
pub use regret::{max_positive_regret, regret_matching};
pub use reinforcement::{bush_mosteller, StepSize};
pub use repeated::{
    repeated_game_run, ConstantStrategy, RepeatedOutcome, RepeatedStrategy, TriggerStrategy, WeightSchedule,
};

use crate::game::{FiniteGame, JointDistribution, StrategicGame};

/// Identifies the procedure that produced a trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    BrdSequential,
    BrdSimultaneous,
    FictitiousPlay,
    BushMosteller,
    RegretMatching,
    Consensus,
}

impl Algorithm {
    pub fn id(self) -> &'static str {
        match self {
            Algorithm::BrdSequential => "brd-seq",
            Algorithm::BrdSimultaneous => "brd-sim",
            Algorithm::FictitiousPlay => "fp",
            Algorithm::BushMosteller => "rl",
            Algorithm::RegretMatching => "rm",
            Algorithm::Consensus => "consensus",
        }
    }
}

/// State of the dynamics after one iteration.
#[derive(Debug, Clone, PartialEq)]
pub enum TraceState {
    Pure(Vec<usize>),
    /// One probability vector per player.
    Mixed(Vec<Vec<f64>>),
    /// One real action vector per player.
    Continuous(Vec<Vec<f64>>),
    /// One real state per node.
    Scalar(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    /// 1-based iteration number.
    pub iter: usize,
    pub state: TraceState,
    /// Pure actions realized in this iteration, when the dynamics sample.
    pub played: Option<Vec<usize>>,
    /// Per-player utility realized (or evaluated) at this iteration.
    pub utilities: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LearningTrace {
    pub algorithm: Algorithm,
    pub seed: u64,
    pub initial: TraceState,
    pub records: Vec<IterationRecord>,
    pub converged: bool,
    pub iterations: usize,
    /// Empirical frequency of realized profiles, when tracked.
    pub empirical_joint: Option<JointDistribution>,
}

impl LearningTrace {
    pub(crate) fn new(algorithm: Algorithm, seed: u64, initial: TraceState) -> Self {
        LearningTrace {
            algorithm,
            seed,
            initial,
            records: Vec::new(),
            converged: false,
            iterations: 0,
            empirical_joint: None,
        }
    }

    pub(crate) fn push(&mut self, state: TraceState, played: Option<Vec<usize>>, utilities: Vec<f64>) {
        self.iterations += 1;
        self.records.push(IterationRecord {
            iter: self.iterations,
            state,
            played,
            utilities,
        });
    }

    /// State after the last iteration (the initial state if none ran).
    pub fn final_state(&self) -> &TraceState {
        self.records.last().map_or(&self.initial, |r| &r.state)
    }

    /// Final pure profile, for dynamics over pure actions.
    pub fn final_profile(&self) -> Option<&[usize]> {
        match self.final_state() {
            TraceState::Pure(p) => Some(p),
            _ => self.records.last().and_then(|r| r.played.as_deref()),
        }
    }

    /// CSV export with header `iter,player,action_or_value,utility`.
    ///
    /// Pure states print the action index; mixed states print the realized
    /// action when there is one, otherwise the probability vector; real
    /// states print their value (vector coordinates joined by `;`).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("iter,player,action_or_value,utility\n");
        for r in &self.records {
            let cells: Vec<String> = match (&r.state, &r.played) {
                (TraceState::Pure(p), _) => p.iter().map(usize::to_string).collect(),
                (TraceState::Mixed(_), Some(p)) => p.iter().map(usize::to_string).collect(),
                (TraceState::Mixed(m), None) | (TraceState::Continuous(m), _) => {
                    m.iter().map(|v| join(v)).collect()
                }
                (TraceState::Scalar(v), _) => v.iter().map(|x| fmt_float(*x)).collect(),
            };
            for (k, cell) in cells.iter().enumerate() {
                let u = r.utilities.get(k).map_or(String::new(), |u| fmt_float(*u));
                let _ = writeln!(out, "{},{},{},{}", r.iter, k, cell, u);
            }
        }
        out
    }
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| fmt_float(*x)).collect::<Vec<_>>().join(";")
}

pub(crate) fn fmt_float(x: f64) -> String {
    crate::harness::format_float(x)
}

/// Rescale each player's payoffs affinely onto `[0, 1]`; a player whose
/// payoffs are all equal gets all zeros.
pub fn normalize_utilities(game: &FiniteGame) -> FiniteGame {
    let ranges: Vec<(f64, f64)> = (0..game.num_players()).map(|k| game.payoff_range(k)).collect();
    game.map_payoffs(|k, u| {
        let (lo, hi) = ranges[k];
        if hi > lo {
            (u - lo) / (hi - lo)
        } else {
            0.0
        }
    })
    .expect("rescaled payoffs stay finite")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::best_response_set;
    use crate::scenarios::sensor_dilemma;

    #[test]
    fn normalization_preserves_best_responses() {
        let g = sensor_dilemma(0.2).unwrap();
        let n = normalize_utilities(&g);
        for k in 0..2 {
            let (lo, hi) = n.payoff_range(k);
            assert_eq!((lo, hi), (0.0, 1.0));
            for opp in 0..2 {
                let mut p = vec![0, 0];
                p[1 - k] = opp;
                assert_eq!(best_response_set(&g, &p, k, 1e-12).unwrap(), best_response_set(&n, &p, k, 1e-12).unwrap());
            }
        }
    }

    #[test]
    fn constant_player_maps_to_zero() {
        let g = FiniteGame::new(vec![2], vec![3.0, 3.0]).unwrap();
        assert_eq!(normalize_utilities(&g).payoffs(), &[0.0, 0.0]);
    }

    #[test]
    fn unit_range_game_unchanged() {
        let g = FiniteGame::bimatrix(&[vec![0.0, 1.0]], &[vec![1.0, 0.0]]).unwrap();
        assert_eq!(normalize_utilities(&g), g);
        assert_eq!(g.num_players(), 2);
    }
}
