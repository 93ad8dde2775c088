use crate::error::{Error, Result};
use crate::game::{FiniteGame, StrategicGame};

/// A causal plan for one player in a repeated game: the action at stage
/// `t` may depend only on the profiles of stages `1..t`.
pub trait RepeatedStrategy: Sync {
    fn act(&self, player: usize, history: &[Vec<usize>]) -> usize;
}

/// Always play the same action.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConstantStrategy(pub usize);

impl RepeatedStrategy for ConstantStrategy {
    fn act(&self, _player: usize, _history: &[Vec<usize>]) -> usize {
        self.0
    }
}

/// Grim trigger: follow the agreed profile as long as everybody always has,
/// and play `punishment[player]` forever after the first deviation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriggerStrategy {
    pub agreed: Vec<usize>,
    pub punishment: Vec<usize>,
}

impl RepeatedStrategy for TriggerStrategy {
    fn act(&self, player: usize, history: &[Vec<usize>]) -> usize {
        if history.iter().all(|p| *p == self.agreed) {
            self.agreed[player]
        } else {
            self.punishment[player]
        }
    }
}

/// How stage payoffs are weighted into a long-run utility.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightSchedule {
    /// `1/T` on each of exactly `horizon` stages.
    FiniteAverage { horizon: usize },
    /// `(1 - delta) delta^(t-1)` on stage `t`; these sum to one over an
    /// infinite horizon and to `1 - delta^T` over `T` stages.
    Discounted { delta: f64 },
    /// `1/T` over whatever horizon is actually played.
    RunningAverage,
}

impl WeightSchedule {
    pub fn weights(&self, stages: usize) -> Result<Vec<f64>> {
        match *self {
            WeightSchedule::FiniteAverage { horizon } if horizon != stages => Err(Error::InvalidArgument(format!(
                "schedule horizon {horizon} does not match the {stages} stages played"
            ))),
            WeightSchedule::FiniteAverage { .. } | WeightSchedule::RunningAverage => {
                Ok(vec![1.0 / stages as f64; stages])
            }
            WeightSchedule::Discounted { delta } => {
                if !(0.0..1.0).contains(&delta) {
                    return Err(Error::InvalidArgument(format!("discount factor {delta} outside [0, 1)")));
                }
                let mut w = Vec::with_capacity(stages);
                let mut d = 1.0 - delta;
                for _ in 0..stages {
                    w.push(d);
                    d *= delta;
                }
                Ok(w)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RepeatedOutcome {
    /// Weighted long-run utility of each player.
    pub utilities: Vec<f64>,
    /// Realized profile of each stage.
    pub history: Vec<Vec<usize>>,
}

/// Play `stage` for `stages` rounds under perfect monitoring and weight the
/// stage payoffs with `schedule`.
pub fn repeated_game_run(
    stage: &FiniteGame,
    strategies: &[&dyn RepeatedStrategy],
    schedule: WeightSchedule,
    stages: usize,
) -> Result<RepeatedOutcome> {
    let counts = stage.action_counts();
    if strategies.len() != counts.len() {
        return Err(Error::Shape(format!("{} strategies for {} players", strategies.len(), counts.len())));
    }
    if stages == 0 {
        return Err(Error::InvalidArgument("a repeated game needs at least one stage".into()));
    }
    let weights = schedule.weights(stages)?;
    let mut history: Vec<Vec<usize>> = Vec::with_capacity(stages);
    let mut utilities = vec![0.0; counts.len()];
    for &w in &weights {
        let profile: Vec<usize> = strategies
            .iter()
            .enumerate()
            .map(|(k, s)| s.act(k, &history))
            .collect();
        for (k, &a) in profile.iter().enumerate() {
            if a >= counts[k] {
                return Err(Error::Contract(format!(
                    "strategy of player {k} chose action {a} at stage {}, but only {} exist",
                    history.len() + 1,
                    counts[k]
                )));
            }
        }
        for (k, u) in utilities.iter_mut().enumerate() {
            *u += w * stage.payoff(k, &profile);
        }
        history.push(profile);
    }
    Ok(RepeatedOutcome { utilities, history })
}
