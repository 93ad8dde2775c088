use super::{check_players, members, Allocation, Coalition, TUGame, MAX_LP_PLAYERS, MAX_PLAYERS};
use crate::error::{Error, Result};
use crate::lp::{lp_solve, LinearProgram, LP_TOL};

#[derive(Debug, Clone, PartialEq)]
pub struct CoreSolution {
    pub nonempty: bool,
    /// A core allocation with `sum x = v(K)`, when the core is non-empty.
    pub allocation: Option<Allocation>,
    /// Optimal value of `min sum x` over the coalition constraints.
    pub lp_value: f64,
}

fn indicator(c: Coalition, players: usize) -> Vec<f64> {
    (0..players).map(|i| if c >> i & 1 == 1 { 1.0 } else { 0.0 }).collect()
}

/// `min sum x` subject to `x(C) >= v(C)` for every non-empty `C`, with
/// the row index of each coalition being `C - 1`.
fn cover_lp(game: &TUGame) -> Result<crate::lp::LpSolution> {
    let k = game.players();
    let mut lp = LinearProgram::minimize(vec![1.0; k]);
    for i in 0..k {
        lp.free(i);
    }
    for c in 1..=game.grand() {
        lp.ge(indicator(c, k), game.value(c));
    }
    lp_solve(&lp)?.optimal()
}

/// Decide core non-emptiness by minimizing the total payout that satisfies
/// every coalition. The core is non-empty iff that minimum does not exceed
/// `v(K)`; the returned allocation is then shifted so it sums to `v(K)`
/// exactly.
pub fn core_solve(game: &TUGame) -> Result<CoreSolution> {
    check_players(game.players(), MAX_LP_PLAYERS)?;
    let grand = game.value(game.grand());
    if game.players() == 0 {
        return Ok(CoreSolution { nonempty: true, allocation: Some(Vec::new()), lp_value: 0.0 });
    }
    let sol = cover_lp(game)?;
    let nonempty = sol.value <= grand + LP_TOL * game.scale();
    let allocation = nonempty.then(|| {
        let mut x = sol.x.clone();
        let gap = grand - x.iter().sum::<f64>();
        let last = x.len() - 1;
        x[last] += gap;
        x
    });
    Ok(CoreSolution { nonempty, allocation, lp_value: sol.value })
}

/// Core membership: `sum x = v(K)` and `x(C) >= v(C)` for all `C`, each
/// within `tol`.
pub fn in_core(game: &TUGame, x: &[f64], tol: f64) -> Result<bool> {
    check_players(game.players(), MAX_PLAYERS)?;
    game.check_allocation(x)?;
    if (x.iter().sum::<f64>() - game.value(game.grand())).abs() > tol {
        return Ok(false);
    }
    Ok(coalitions_satisfied(game, x, tol))
}

pub(crate) fn coalitions_satisfied(game: &TUGame, x: &[f64], tol: f64) -> bool {
    // Coalition sums built incrementally from the lowest set bit.
    let mut sums = vec![0.0; 1 << game.players()];
    for c in 1..=game.grand() as usize {
        let low = c.trailing_zeros() as usize;
        sums[c] = sums[c & (c - 1)] + x[low];
        if sums[c] < game.value(c as Coalition) - tol {
            return false;
        }
    }
    true
}

/// Balancedness, decided through the core: a game is balanced exactly when
/// its core is non-empty.
pub fn is_balanced(game: &TUGame) -> Result<bool> {
    Ok(core_solve(game)?.nonempty)
}

/// For an unbalanced game, a balanced collection of weights `mu_C >= 0`
/// (each player's coalitions weigh 1 in total) with `sum mu_C v(C) > v(K)`.
/// Read off the multipliers of the core LP. `None` for balanced games.
pub fn balancing_certificate(game: &TUGame) -> Result<Option<Vec<(Coalition, f64)>>> {
    check_players(game.players(), MAX_LP_PLAYERS)?;
    if game.players() == 0 {
        return Ok(None);
    }
    let sol = cover_lp(game)?;
    if sol.value <= game.value(game.grand()) + LP_TOL * game.scale() {
        return Ok(None);
    }
    let weights: Vec<(Coalition, f64)> = sol
        .ge_duals
        .iter()
        .enumerate()
        .filter(|&(_, &mu)| mu > LP_TOL)
        .map(|(row, &mu)| (row as Coalition + 1, mu))
        .collect();
    for i in 0..game.players() {
        let cover: f64 = weights.iter().filter(|(c, _)| c >> i & 1 == 1).map(|(_, mu)| mu).sum();
        if (cover - 1.0).abs() > 1e-6 {
            return Err(Error::Numerical(format!("balancing weights cover player {i} with total {cover}")));
        }
    }
    Ok(Some(weights))
}

/// How the relaxation enters each coalition constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EpsilonCore {
    /// `x(C) >= v(C) - eps`.
    #[default]
    Weak,
    /// `x(C) >= v(C) - |C| eps`.
    Strong,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LeastCore {
    pub epsilon: f64,
    pub allocation: Allocation,
}

/// Smallest `eps` for which the `eps`-core is non-empty, with an allocation
/// attaining it. `eps <= 0` exactly when the core is non-empty.
pub fn least_epsilon_core(game: &TUGame, variant: EpsilonCore) -> Result<LeastCore> {
    let k = game.players();
    check_players(k, MAX_LP_PLAYERS)?;
    if k < 2 {
        return Err(Error::InvalidArgument("the least core needs at least two players".into()));
    }
    let mut objective = vec![0.0; k + 1];
    objective[k] = 1.0;
    let mut lp = LinearProgram::minimize(objective);
    for i in 0..=k {
        lp.free(i);
    }
    let mut row = vec![1.0; k + 1];
    row[k] = 0.0;
    lp.equal(row, game.value(game.grand()));
    for c in 1..game.grand() {
        let mut row = indicator(c, k);
        row.push(match variant {
            EpsilonCore::Weak => 1.0,
            EpsilonCore::Strong => members(c).len() as f64,
        });
        lp.ge(row, game.value(c));
    }
    let sol = lp_solve(&lp)?.optimal()?;
    Ok(LeastCore {
        epsilon: sol.x[k],
        allocation: sol.x[..k].to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn additive_core_is_the_weights() {
        let g = TUGame::additive(&[1.0, 2.5, -1.0]).unwrap();
        let s = core_solve(&g).unwrap();
        assert!(s.nonempty);
        let x = s.allocation.unwrap();
        for (a, b) in x.iter().zip([1.0, 2.5, -1.0]) {
            assert!((a - b).abs() < 1e-7);
        }
        assert!(in_core(&g, &x, 1e-7).unwrap());
        assert!(is_balanced(&g).unwrap());
        assert!(least_epsilon_core(&g, EpsilonCore::Weak).unwrap().epsilon <= 1e-9);
    }

    #[test]
    fn majority_core_empty() {
        let g = TUGame::majority(3).unwrap();
        let s = core_solve(&g).unwrap();
        assert!(!s.nonempty);
        assert!((s.lp_value - 1.5).abs() < 1e-7);
        assert!(!in_core(&g, &[1.0 / 3.0; 3], 1e-9).unwrap());
        let cert = balancing_certificate(&g).unwrap().unwrap();
        let total: f64 = cert.iter().map(|&(c, mu)| mu * g.value(c)).sum();
        assert!(total > 1.0 + 1e-6);
    }

    #[test]
    fn majority_least_core() {
        let g = TUGame::majority(3).unwrap();
        let weak = least_epsilon_core(&g, EpsilonCore::Weak).unwrap();
        assert!((weak.epsilon - 1.0 / 3.0).abs() < 1e-7);
        for x in &weak.allocation {
            assert!((x - 1.0 / 3.0).abs() < 1e-7);
        }
        let strong = least_epsilon_core(&g, EpsilonCore::Strong).unwrap();
        assert!((strong.epsilon - 1.0 / 6.0).abs() < 1e-7);
    }

    #[test]
    fn squared_game_core_nonempty() {
        let g = TUGame::from_fn(5, |c| (c.count_ones() as f64).powi(2)).unwrap();
        let s = core_solve(&g).unwrap();
        assert!(s.nonempty);
        assert!(in_core(&g, &s.allocation.unwrap(), 1e-6).unwrap());
        assert_eq!(balancing_certificate(&g).unwrap(), None);
    }

    #[test]
    fn lp_capacity() {
        let g = TUGame::from_fn(15, |_| 0.0).unwrap();
        assert!(matches!(core_solve(&g), Err(Error::Capacity { .. })));
    }
}
