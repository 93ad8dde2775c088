use crate::error::{Error, Result};
use crate::game::{
    is_coarse_correlated_equilibrium, is_correlated_equilibrium, joint_expected_utility, FiniteGame,
    JointDistribution, StrategicGame,
};
use crate::lp::{lp_solve, LinearProgram};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquilibriumConcept {
    Correlated,
    CoarseCorrelated,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumOptimum {
    pub q: JointDistribution,
    /// `sum_k w_k E_q[u_k]`
    pub welfare: f64,
    /// `E_q[u_k]` for every player.
    pub utilities: Vec<f64>,
}

/// Maximize a weighted sum of expected utilities over the correlated (or
/// coarse correlated) equilibrium polytope.
pub fn optimize_over_equilibrium_set(
    game: &FiniteGame,
    weights: &[f64],
    concept: EquilibriumConcept,
) -> Result<EquilibriumOptimum> {
    let k_players = game.num_players();
    if weights.len() != k_players {
        return Err(Error::Shape(format!("{} weights for {} players", weights.len(), k_players)));
    }
    if weights.iter().any(|w| !w.is_finite()) {
        return Err(Error::InvalidArgument("weights must be finite".into()));
    }
    let n = game.num_profiles();
    let counts = game.action_counts().to_vec();
    let objective: Vec<f64> = (0..n)
        .map(|i| (0..k_players).map(|k| weights[k] * game.payoff_at(k, i)).sum())
        .collect();
    let mut lp = LinearProgram::maximize(objective);
    let profiles: Vec<Vec<usize>> = (0..n).map(|i| game.profile_at(i)).collect();
    let gain = |k: usize, i: usize, dev: usize| {
        let mut s = profiles[i].clone();
        s[k] = dev;
        game.payoff(k, &profiles[i]) - game.payoff(k, &s)
    };
    for k in 0..k_players {
        match concept {
            EquilibriumConcept::Correlated => {
                for rec in 0..counts[k] {
                    for dev in (0..counts[k]).filter(|&d| d != rec) {
                        let row = (0..n)
                            .map(|i| if profiles[i][k] == rec { gain(k, i, dev) } else { 0.0 })
                            .collect();
                        lp.ge(row, 0.0);
                    }
                }
            }
            EquilibriumConcept::CoarseCorrelated => {
                for dev in 0..counts[k] {
                    lp.ge((0..n).map(|i| gain(k, i, dev)).collect(), 0.0);
                }
            }
        }
    }
    lp.equal(vec![1.0; n], 1.0);
    let sol = lp_solve(&lp)?.optimal()?;

    let clipped: Vec<f64> = sol.x.iter().map(|p| p.max(0.0)).collect();
    let total: f64 = clipped.iter().sum();
    let q = JointDistribution::new(counts, clipped.iter().map(|p| p / total).collect())?;
    let ok = match concept {
        EquilibriumConcept::Correlated => is_correlated_equilibrium(game, &q, 1e-6)?,
        EquilibriumConcept::CoarseCorrelated => is_coarse_correlated_equilibrium(game, &q, 1e-6)?,
    };
    if !ok {
        return Err(Error::Numerical("LP optimum failed the equilibrium check".into()));
    }
    let utilities = (0..k_players)
        .map(|k| joint_expected_utility(game, &q, k))
        .collect::<Result<Vec<_>>>()?;
    let welfare = utilities.iter().zip(weights).map(|(u, w)| u * w).sum();
    Ok(EquilibriumOptimum { q, welfare, utilities })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chicken_ce_beats_mixed_ne() {
        // Chicken: (dare, chicken)
        let g = FiniteGame::bimatrix(&[vec![0.0, 7.0], vec![2.0, 6.0]], &[vec![0.0, 2.0], vec![7.0, 6.0]]).unwrap();
        let ce = optimize_over_equilibrium_set(&g, &[1.0, 1.0], EquilibriumConcept::Correlated).unwrap();
        // Known optimum: q(C,C)=1/2, q(D,C)=q(C,D)=1/4, welfare 10.5
        assert!((ce.welfare - 10.5).abs() < 1e-7, "{}", ce.welfare);
        let cce = optimize_over_equilibrium_set(&g, &[1.0, 1.0], EquilibriumConcept::CoarseCorrelated).unwrap();
        assert!(cce.welfare >= ce.welfare - 1e-9);
    }

    #[test]
    fn zero_weights_give_zero_welfare() {
        let g = FiniteGame::bimatrix(&[vec![1.0, 0.0], vec![0.0, 1.0]], &[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let r = optimize_over_equilibrium_set(&g, &[0.0, 0.0], EquilibriumConcept::Correlated).unwrap();
        assert_eq!(r.welfare, 0.0);
    }

    #[test]
    fn weight_count_must_match() {
        let g = FiniteGame::new(vec![1], vec![0.0]).unwrap();
        assert!(optimize_over_equilibrium_set(&g, &[1.0, 1.0], EquilibriumConcept::Correlated).is_err());
    }
}
