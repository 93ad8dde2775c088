use super::core_set::coalitions_satisfied;
use super::{check_players, Coalition, Partition, TUGame, MAX_LP_PLAYERS, MAX_SCAN_PLAYERS};
use crate::error::Result;

/// Search strategy for [`optimal_partition_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PartitionMethod {
    /// Enumeration up to 10 players, dynamic programming above.
    #[default]
    Auto,
    /// Every set partition (Bell-number many); up to 10 players. Ties go
    /// to the partition whose sorted coalition list is lexicographically
    /// smallest.
    Enumerate,
    /// Best split of each subset, `3^K` work; up to 16 players. Ties go to
    /// the first split found when the sub-coalition holding the lowest
    /// member is scanned in increasing bitmask order.
    DynamicProgramming,
}

const ENUMERATION_PLAYERS: usize = 10;

/// Partition maximizing the total worth `sum v(C)`.
pub fn optimal_partition(game: &TUGame) -> Result<(Partition, f64)> {
    optimal_partition_with(game, PartitionMethod::Auto)
}

pub fn optimal_partition_with(game: &TUGame, method: PartitionMethod) -> Result<(Partition, f64)> {
    let k = game.players();
    let enumerate = match method {
        PartitionMethod::Auto => k <= ENUMERATION_PLAYERS,
        PartitionMethod::Enumerate => true,
        PartitionMethod::DynamicProgramming => false,
    };
    let coalitions = if enumerate {
        check_players(k, ENUMERATION_PLAYERS)?;
        enumerate_best(game)
    } else {
        check_players(k, MAX_SCAN_PLAYERS)?;
        dp_best(game)
    };
    let partition = Partition::new(k, coalitions)?;
    let total = partition.total_value(game);
    Ok((partition, total))
}

fn enumerate_best(game: &TUGame) -> Vec<Coalition> {
    struct Search<'a> {
        game: &'a TUGame,
        tol: f64,
        best: Option<(f64, Vec<Coalition>)>,
        current: Vec<Coalition>,
    }

    impl Search<'_> {
        fn visit(&mut self, remaining: Coalition, value: f64) {
            if remaining == 0 {
                let mut enc = self.current.clone();
                enc.sort_unstable();
                let better = match &self.best {
                    None => true,
                    Some((v, e)) => value > v + self.tol || ((value - v).abs() <= self.tol && enc < *e),
                };
                if better {
                    self.best = Some((value, enc));
                }
                return;
            }
            let low = remaining & remaining.wrapping_neg();
            let rest = remaining ^ low;
            let mut sub = rest;
            loop {
                let c = sub | low;
                self.current.push(c);
                self.visit(remaining ^ c, value + self.game.value(c));
                self.current.pop();
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & rest;
            }
        }
    }

    let mut search = Search {
        game,
        tol: 1e-12 * game.scale(),
        best: None,
        current: Vec::new(),
    };
    search.visit(game.grand(), 0.0);
    search.best.map(|(_, e)| e).unwrap_or_default()
}

fn dp_best(game: &TUGame) -> Vec<Coalition> {
    let n = 1usize << game.players();
    let mut best = vec![0.0; n];
    let mut choice: Vec<Coalition> = vec![0; n];
    for s in 1..n as Coalition {
        let low = s & s.wrapping_neg();
        let rest = s ^ low;
        // Ascending submasks of `rest`: next = ((sub | !rest) + 1) & rest.
        let mut sub: Coalition = 0;
        let mut top = f64::NEG_INFINITY;
        loop {
            let c = sub | low;
            let v = game.value(c) + best[(s ^ c) as usize];
            if v > top {
                top = v;
                choice[s as usize] = c;
            }
            if sub == rest {
                break;
            }
            sub = (sub | !rest).wrapping_add(1) & rest;
        }
        best[s as usize] = top;
    }
    let mut out = Vec::new();
    let mut s = game.grand();
    while s != 0 {
        out.push(choice[s as usize]);
        s ^= choice[s as usize];
    }
    out
}

/// Core of the coalition structure: `sum x` equals the best partition's
/// total (within `tol`) and no coalition can do better on its own.
pub fn coalition_structure_core_check(game: &TUGame, x: &[f64], tol: f64) -> Result<bool> {
    check_players(game.players(), MAX_LP_PLAYERS)?;
    game.check_allocation(x)?;
    let (_, total) = optimal_partition(game)?;
    if (x.iter().sum::<f64>() - total).abs() > tol {
        return Ok(false);
    }
    Ok(coalitions_satisfied(game, x, tol))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn superadditive_picks_grand() {
        let g = TUGame::from_fn(5, |c| (c.count_ones() as f64).powi(2)).unwrap();
        let (p, v) = optimal_partition(&g).unwrap();
        assert_eq!(p, Partition::grand(5).unwrap());
        assert_eq!(v, 25.0);
    }

    #[test]
    fn singleton_worth_only() {
        let g = TUGame::from_fn(4, |c| if c.count_ones() == 1 { 1.0 } else { 0.0 }).unwrap();
        let (p, v) = optimal_partition(&g).unwrap();
        assert_eq!(p, Partition::singletons(4).unwrap());
        assert_eq!(v, 4.0);
        assert!(coalition_structure_core_check(&g, &[1.0; 4], 1e-9).unwrap());
    }

    #[test]
    fn zero_game_ties_to_singletons() {
        let g = TUGame::from_fn(4, |_| 0.0).unwrap();
        assert_eq!(optimal_partition(&g).unwrap().0, Partition::singletons(4).unwrap());
    }

    #[test]
    fn dp_agrees_with_enumeration() {
        // Pairs are worth 3, everything else its size: best is pairing up.
        let g = TUGame::from_fn(7, |c| if c.count_ones() == 2 { 3.0 } else { c.count_ones() as f64 }).unwrap();
        let (a, va) = optimal_partition_with(&g, PartitionMethod::Enumerate).unwrap();
        let (b, vb) = optimal_partition_with(&g, PartitionMethod::DynamicProgramming).unwrap();
        assert_eq!(va, 10.0);
        assert_eq!(va, vb);
        assert_eq!(a.total_value(&g), b.total_value(&g));
    }

    #[test]
    fn enumeration_capacity() {
        let g = TUGame::from_fn(11, |_| 0.0).unwrap();
        assert!(optimal_partition_with(&g, PartitionMethod::Enumerate).is_err());
        assert!(optimal_partition(&g).is_ok());
    }
}
