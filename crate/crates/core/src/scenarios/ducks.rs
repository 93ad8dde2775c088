use crate::error::{Error, Result};
use crate::game::StrategicGame;

/// Symmetric congestion game: every player picks a site and the site's
/// rate is shared equally among everyone who picked it.
///
/// Stored implicitly, so player counts far beyond the dense tensor cap work
/// with the pure-profile predicates and best-response dynamics.
#[derive(Debug, Clone, PartialEq)]
pub struct CongestionGame {
    action_counts: Vec<usize>,
    rates: Vec<f64>,
}

impl CongestionGame {
    pub fn new(players: usize, rates: Vec<f64>) -> Result<Self> {
        if players == 0 {
            return Err(Error::InvalidArgument("at least one player required".into()));
        }
        if rates.is_empty() || rates.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
            return Err(Error::InvalidArgument("site rates must be positive and finite".into()));
        }
        Ok(CongestionGame {
            action_counts: vec![rates.len(); players],
            rates,
        })
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    /// Number of players at `site`.
    pub fn occupancy(profile: &[usize], site: usize) -> usize {
        profile.iter().filter(|&&a| a == site).count()
    }
}

impl StrategicGame for CongestionGame {
    fn action_counts(&self) -> &[usize] {
        &self.action_counts
    }

    fn payoff(&self, player: usize, profile: &[usize]) -> f64 {
        let site = profile[player];
        self.rates[site] / CongestionGame::occupancy(profile, site) as f64
    }
}

/// `k` foragers choosing between a fast site (action 0) and a slow site
/// (action 1) with the given item rates.
pub fn duck_foraging(k: usize, rates: (f64, f64)) -> Result<CongestionGame> {
    CongestionGame::new(k, vec![rates.0, rates.1])
}
