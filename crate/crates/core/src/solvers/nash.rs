use crate::error::{Error, Result};
use crate::game::{
    is_mixed_ne, is_pure_ne, next_profile, profile_count, FiniteGame, MixedProfile, StrategicGame, DEFAULT_TOL,
};
use crate::linalg;
use crate::lp::{lp_solve, LinearProgram};

/// Largest action count per player accepted by support enumeration.
pub const MAX_SUPPORT_ACTIONS: usize = 8;

/// Every pure Nash equilibrium, in lexicographic profile order.
pub fn enumerate_pure_ne<G: StrategicGame + ?Sized>(game: &G) -> Result<Vec<Vec<usize>>> {
    let counts = game.action_counts();
    profile_count(counts)?;
    let mut out = Vec::new();
    let mut s = vec![0; counts.len()];
    loop {
        if is_pure_ne(game, &s, DEFAULT_TOL)? {
            out.push(s.clone());
        }
        if !next_profile(&mut s, counts) {
            break;
        }
    }
    Ok(out)
}

fn require_two_players(game: &FiniteGame) -> Result<()> {
    if game.num_players() != 2 {
        return Err(Error::Shape(format!("expected a 2-player game, got {} players", game.num_players())));
    }
    Ok(())
}

/// All equilibria of a 2x2 game from the best-response intersection: the
/// pure equilibria (lexicographic order) followed by the fully mixed
/// indifference point when it lies strictly inside the unit square.
pub fn mixed_ne_2x2(game: &FiniteGame) -> Result<Vec<MixedProfile>> {
    require_two_players(game)?;
    if game.action_counts() != [2, 2] {
        return Err(Error::Shape(format!("expected a 2x2 game, got {:?}", game.action_counts())));
    }
    let u = |k: usize, a: usize, b: usize| game.payoff(k, &[a, b]);
    let mut out = Vec::new();
    for p in enumerate_pure_ne(game)? {
        out.push(MixedProfile::pure(game.action_counts(), &p)?);
    }
    // p: row's probability on action 0 making the column indifferent; q likewise.
    let den_p = u(1, 0, 0) - u(1, 1, 0) - u(1, 0, 1) + u(1, 1, 1);
    let den_q = u(0, 0, 0) - u(0, 0, 1) - u(0, 1, 0) + u(0, 1, 1);
    if den_p != 0.0 && den_q != 0.0 {
        let p = (u(1, 1, 1) - u(1, 1, 0)) / den_p;
        let q = (u(0, 1, 1) - u(0, 0, 1)) / den_q;
        if p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0 {
            out.push(MixedProfile::new(vec![vec![p, 1.0 - p], vec![q, 1.0 - q]])?);
        }
    }
    Ok(out)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k == 0 || k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[i] += 1;
        for j in (i + 1)..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Mixture over `support` (of length `n`) that makes the opponent indifferent
/// across `opp_support`; `pay(own, opp)` is the opponent's payoff.
fn indifference_mix(
    n: usize,
    support: &[usize],
    opp_support: &[usize],
    pay: impl Fn(usize, usize) -> f64,
) -> Option<Vec<f64>> {
    let s = support.len();
    // Unknowns: weights on `support`, then the common value.
    let mut a = Vec::with_capacity(s + 1);
    let mut b = Vec::with_capacity(s + 1);
    for &j in opp_support {
        let mut row: Vec<f64> = support.iter().map(|&i| pay(i, j)).collect();
        row.push(-1.0);
        a.push(row);
        b.push(0.0);
    }
    let mut total = vec![1.0; s];
    total.push(0.0);
    a.push(total);
    b.push(1.0);
    let sol = linalg::solve(&a, &b, 1e-12)?;
    if sol[..s].iter().any(|&w| w < -1e-9) {
        return None;
    }
    let mut mix = vec![0.0; n];
    let mass: f64 = sol[..s].iter().map(|w| w.max(0.0)).sum();
    for (&i, &w) in support.iter().zip(&sol) {
        mix[i] = w.max(0.0) / mass;
    }
    Some(mix)
}

/// Nash equilibria of a 2-player game found by solving the indifference
/// system on every pair of equal-size supports up to `max_support`.
/// Candidates are kept only if they pass [`is_mixed_ne`]; near-duplicates
/// (within 1e-6) are reported once.
pub fn support_enumeration_2p(game: &FiniteGame, max_support: usize) -> Result<Vec<MixedProfile>> {
    require_two_players(game)?;
    let (n1, n2) = (game.action_counts()[0], game.action_counts()[1]);
    for n in [n1, n2] {
        if n > MAX_SUPPORT_ACTIONS {
            return Err(Error::capacity("actions per player for support enumeration", n, MAX_SUPPORT_ACTIONS));
        }
    }
    let scale = game.payoffs().iter().fold(1.0_f64, |m, u| m.max(u.abs()));
    let mut found: Vec<MixedProfile> = Vec::new();
    for size in 1..=max_support.min(n1).min(n2) {
        for rows in combinations(n1, size) {
            for cols in combinations(n2, size) {
                let Some(x) = indifference_mix(n1, &rows, &cols, |i, j| game.payoff(1, &[i, j])) else {
                    continue;
                };
                let Some(y) = indifference_mix(n2, &cols, &rows, |j, i| game.payoff(0, &[i, j])) else {
                    continue;
                };
                let profile = MixedProfile::new(vec![x, y])?;
                if !is_mixed_ne(game, &profile, 1e-9 * scale)? {
                    continue;
                }
                if found.iter().all(|f| f.max_distance(&profile) > 1e-6) {
                    found.push(profile);
                }
            }
        }
    }
    Ok(found)
}

/// Solution of a two-player zero-sum game.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroSumSolution {
    /// Value to player 1, in player 1's payoff units.
    pub value: f64,
    pub profile: MixedProfile,
    /// Guaranteed payoff of player 1's strategy and the cap player 2's
    /// strategy imposes on player 1.
    pub security: (f64, f64),
}

/// Find `a > 0`, `c` with `u_2 = c - a u_1` on every cell.
fn zero_sum_normalization(game: &FiniteGame) -> Option<(f64, f64)> {
    let n = game.num_profiles();
    let u1: Vec<f64> = (0..n).map(|i| game.payoff_at(0, i)).collect();
    let u2: Vec<f64> = (0..n).map(|i| game.payoff_at(1, i)).collect();
    let scale = game.payoffs().iter().fold(1.0_f64, |m, u| m.max(u.abs()));
    if (0..n).all(|i| (u1[i] + u2[i]).abs() <= DEFAULT_TOL * scale) {
        return Some((1.0, 0.0));
    }
    let (lo, hi) = (0..n).fold((0, 0), |(lo, hi), i| {
        (if u1[i] < u1[lo] { i } else { lo }, if u1[i] > u1[hi] { i } else { hi })
    });
    let (a, c) = if u1[hi] > u1[lo] {
        let a = -(u2[hi] - u2[lo]) / (u1[hi] - u1[lo]);
        (a, u2[lo] + a * u1[lo])
    } else {
        (1.0, u2[0] + u1[0])
    };
    let ok = a > 0.0 && (0..n).all(|i| (u2[i] - (c - a * u1[i])).abs() <= DEFAULT_TOL * scale);
    ok.then_some((a, c))
}

/// Value and optimal strategies of a two-player zero-sum game, from the
/// maximin LP of each player. Games that become zero-sum after a positive
/// affine rescaling of player 2 are accepted.
pub fn zero_sum_value(game: &FiniteGame) -> Result<ZeroSumSolution> {
    require_two_players(game)?;
    zero_sum_normalization(game).ok_or(Error::NotZeroSum)?;
    let (n1, n2) = (game.action_counts()[0], game.action_counts()[1]);
    let a = |i: usize, j: usize| game.payoff(0, &[i, j]);

    // Player 1: max v s.t. sum_i x_i a(i, j) >= v for every column j.
    let mut obj = vec![0.0; n1 + 1];
    obj[n1] = 1.0;
    let mut lp1 = LinearProgram::maximize(obj.clone());
    lp1.free(n1);
    for j in 0..n2 {
        let mut row: Vec<f64> = (0..n1).map(|i| a(i, j)).collect();
        row.push(-1.0);
        lp1.ge(row, 0.0);
    }
    let mut simplex_row = vec![1.0; n1 + 1];
    simplex_row[n1] = 0.0;
    lp1.equal(simplex_row, 1.0);
    let s1 = lp_solve(&lp1)?.optimal()?;

    // Player 2: min w s.t. sum_j a(i, j) y_j <= w for every row i.
    let mut obj = vec![0.0; n2 + 1];
    obj[n2] = 1.0;
    let mut lp2 = LinearProgram::minimize(obj);
    lp2.free(n2);
    for i in 0..n1 {
        let mut row: Vec<f64> = (0..n2).map(|j| -a(i, j)).collect();
        row.push(1.0);
        lp2.ge(row, 0.0);
    }
    let mut simplex_row = vec![1.0; n2 + 1];
    simplex_row[n2] = 0.0;
    lp2.equal(simplex_row, 1.0);
    let s2 = lp_solve(&lp2)?.optimal()?;

    let clean = |v: &[f64]| -> Vec<f64> {
        let v: Vec<f64> = v.iter().map(|p| p.max(0.0)).collect();
        let total: f64 = v.iter().sum();
        v.iter().map(|p| p / total).collect()
    };
    let x = clean(&s1.x[..n1]);
    let y = clean(&s2.x[..n2]);
    let floor = (0..n2)
        .map(|j| (0..n1).map(|i| x[i] * a(i, j)).sum::<f64>())
        .fold(f64::INFINITY, f64::min);
    let cap = (0..n1)
        .map(|i| (0..n2).map(|j| a(i, j) * y[j]).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max);
    if (floor - cap).abs() > 1e-6 * (1.0 + cap.abs()) {
        return Err(Error::Numerical(format!("security levels disagree: {floor} vs {cap}")));
    }
    Ok(ZeroSumSolution {
        value: 0.5 * (floor + cap),
        profile: MixedProfile::new(vec![x, y])?,
        security: (floor, cap),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::expected_utility;

    fn pennies() -> FiniteGame {
        FiniteGame::bimatrix(&[vec![1.0, -1.0], vec![-1.0, 1.0]], &[vec![-1.0, 1.0], vec![1.0, -1.0]]).unwrap()
    }

    #[test]
    fn pennies_has_no_pure_ne() {
        assert!(enumerate_pure_ne(&pennies()).unwrap().is_empty());
    }

    #[test]
    fn pennies_mixed_is_uniform() {
        let ne = mixed_ne_2x2(&pennies()).unwrap();
        assert_eq!(ne.len(), 1);
        assert_eq!(ne[0].strategies(), &[vec![0.5, 0.5], vec![0.5, 0.5]]);
    }

    #[test]
    fn mixed_2x2_rejects_other_shapes() {
        let g = FiniteGame::new(vec![3, 2], vec![0.0; 12]).unwrap();
        assert!(matches!(mixed_ne_2x2(&g), Err(Error::Shape(_))));
    }

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(combinations(4, 2), vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert!(combinations(2, 3).is_empty());
    }

    #[test]
    fn rock_paper_scissors_support_enumeration() {
        let a = [vec![0.0, -1.0, 1.0], vec![1.0, 0.0, -1.0], vec![-1.0, 1.0, 0.0]];
        let b: Vec<Vec<f64>> = a.iter().map(|r| r.iter().map(|v| -v).collect()).collect();
        let g = FiniteGame::bimatrix(&a, &b).unwrap();
        let ne = support_enumeration_2p(&g, 3).unwrap();
        assert_eq!(ne.len(), 1);
        for p in ne[0].strategies().iter().flatten() {
            assert!((p - 1.0 / 3.0).abs() < 1e-12);
        }
        let v = zero_sum_value(&g).unwrap();
        assert!(v.value.abs() < 1e-9);
        assert!((expected_utility(&g, &ne[0], 0).unwrap() - v.value).abs() < 1e-9);
    }

    #[test]
    fn one_cell_zero_sum() {
        let g = FiniteGame::bimatrix(&[vec![2.5]], &[vec![-2.5]]).unwrap();
        assert!((zero_sum_value(&g).unwrap().value - 2.5).abs() < 1e-12);
    }

    #[test]
    fn affine_zero_sum_is_accepted() {
        // u2 = 10 - 2 u1
        let a = [vec![1.0, -1.0], vec![-1.0, 1.0]];
        let b: Vec<Vec<f64>> = a.iter().map(|r| r.iter().map(|v| 10.0 - 2.0 * v).collect()).collect();
        let g = FiniteGame::bimatrix(&a, &b).unwrap();
        assert!(zero_sum_value(&g).unwrap().value.abs() < 1e-9);
    }

    #[test]
    fn non_zero_sum_is_rejected() {
        let g = FiniteGame::bimatrix(&[vec![1.0, 0.0], vec![0.0, 1.0]], &[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(zero_sum_value(&g), Err(Error::NotZeroSum));
    }

    #[test]
    fn support_enumeration_capacity() {
        let g = FiniteGame::new(vec![9, 2], vec![0.0; 36]).unwrap();
        assert!(matches!(support_enumeration_2p(&g, 2), Err(Error::Capacity { .. })));
    }

    #[test]
    fn duplicate_action_game_reports_verified_points() {
        // Column player has two identical actions.
        let g = FiniteGame::bimatrix(&[vec![1.0, 1.0], vec![0.0, 0.0]], &[vec![0.0, 0.0], vec![1.0, 1.0]]).unwrap();
        let ne = support_enumeration_2p(&g, 2).unwrap();
        assert!(!ne.is_empty());
        for p in &ne {
            assert!(is_mixed_ne(&g, p, 1e-9).unwrap());
        }
    }
}
