use super::{check_players, Coalition, TUGame, MAX_SCAN_PLAYERS};
use crate::error::Result;

/// Checks `v(A | B) >= v(A) + v(B)` for every pair of disjoint non-empty
/// coalitions. Returns the first violating pair `(A, B)` with `A < B`.
pub fn is_superadditive(game: &TUGame) -> Result<(bool, Option<(Coalition, Coalition)>)> {
    check_players(game.players(), MAX_SCAN_PLAYERS)?;
    let tol = 1e-9 * game.scale();
    for s in 1..=game.grand() {
        // Visit each unordered split {a, s \ a} once: a holds the lowest member.
        let low = s & s.wrapping_neg();
        let rest = s ^ low;
        let mut sub = rest;
        loop {
            let a = sub | low;
            let b = s ^ a;
            if b != 0 && game.value(s) < game.value(a) + game.value(b) - tol {
                return Ok((false, Some((a.min(b), a.max(b)))));
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    Ok((true, None))
}

/// Checks that marginal contributions never shrink as a coalition grows.
///
/// Uses the local form `v(S+i+j) - v(S+j) >= v(S+i) - v(S)` for all `S`
/// and distinct `i, j` outside `S`, which is equivalent to the nested-pair
/// form. A violation is reported as `(i, C1, C2)` with `C1 = S` and
/// `C2 = S + j`, so that player `i` contributes more to `C1` than to `C2`.
pub fn is_convex(game: &TUGame) -> Result<(bool, Option<(usize, Coalition, Coalition)>)> {
    check_players(game.players(), MAX_SCAN_PLAYERS)?;
    let tol = 1e-9 * game.scale();
    let k = game.players();
    for s in 0..=game.grand() {
        for i in (0..k).filter(|&i| s >> i & 1 == 0) {
            let into_s = game.value(s | 1 << i) - game.value(s);
            for j in (0..k).filter(|&j| j != i && s >> j & 1 == 0) {
                let t = s | 1 << j;
                let into_t = game.value(t | 1 << i) - game.value(t);
                if into_t < into_s - tol {
                    return Ok((false, Some((i, s, t))));
                }
            }
        }
    }
    Ok((true, None))
}
