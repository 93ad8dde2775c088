use crate::error::{Error, Result};
use crate::game::FiniteGame;

fn labelled(game: FiniteGame, rows: &[&str], cols: &[&str]) -> Result<FiniteGame> {
    let to_vec = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    game.with_labels(vec![to_vec(rows), to_vec(cols)])
}

/// Two sensors choosing `sleep` (0) or `active` (1). Being active costs `e`;
/// each sensor earns 1 whenever the other one is active.
pub fn sensor_dilemma(e: f64) -> Result<FiniteGame> {
    if !(0.0..=1.0).contains(&e) {
        return Err(Error::InvalidArgument(format!("energy cost e = {e} outside [0, 1]")));
    }
    let u = [vec![0.0, 1.0], vec![-e, 1.0 - e]];
    let transpose = [vec![u[0][0], u[1][0]], vec![u[0][1], u[1][1]]];
    labelled(FiniteGame::bimatrix(&u, &transpose)?, &["sleep", "active"], &["sleep", "active"])
}

/// Two radios choosing a `narrowband` (0) or `wideband` (1) transmission.
/// Wideband is strictly dominant, but both prefer mutual narrowband.
pub fn cr_dilemma() -> FiniteGame {
    let row = [vec![3.0, 0.0], vec![4.0, 1.0]];
    let col = [vec![3.0, 4.0], vec![0.0, 1.0]];
    let names = ["narrowband", "wideband"];
    labelled(FiniteGame::bimatrix(&row, &col).expect("static matrix"), &names, &names).expect("static labels")
}

/// Aumann's coordination game with payoff cells (5,1), (0,0) / (4,4), (1,5).
pub fn aumann_coordination() -> FiniteGame {
    let row = [vec![5.0, 0.0], vec![4.0, 1.0]];
    let col = [vec![1.0, 0.0], vec![4.0, 5.0]];
    labelled(FiniteGame::bimatrix(&row, &col).expect("static matrix"), &["top", "bottom"], &["left", "right"])
        .expect("static labels")
}

pub fn matching_pennies() -> FiniteGame {
    let row = [vec![1.0, -1.0], vec![-1.0, 1.0]];
    let col = [vec![-1.0, 1.0], vec![1.0, -1.0]];
    labelled(FiniteGame::bimatrix(&row, &col).expect("static matrix"), &["heads", "tails"], &["heads", "tails"])
        .expect("static labels")
}
