use crate::error::{Error, Result};
use crate::game::ContinuousGame;

/// Cournot duopoly with inverse demand `1 - q_1 - q_2` and no cost.
pub fn cournot_duopoly() -> ContinuousGame {
    ContinuousGame::scalar(2, 0.0, 1.0, |k, s| s[k][0] * (1.0 - s[0][0] - s[1][0]))
        .expect("static bounds")
        .with_best_response(|k, s| vec![((1.0 - s[1 - k][0]) / 2.0).clamp(0.0, 1.0)])
        .with_gradient(|k, s| vec![1.0 - 2.0 * s[k][0] - s[1 - k][0]])
}

/// Half-width of the action box used by [`linear_system_game`].
const LINEAR_BOX: f64 = 1e6;

/// Player `k` picks `x_k` to minimize `(a_k . x - y_k)^2`; sequential best
/// responses are Gauss-Seidel sweeps on `A x = y`.
///
/// Returns the game and whether `A` is strictly diagonally dominant (the
/// usual convergence guarantee). Non-dominant matrices are still accepted.
pub fn linear_system_game(a: [[f64; 2]; 2], y: [f64; 2]) -> Result<(ContinuousGame, bool)> {
    if a.iter().flatten().chain(&y).any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("matrix and right-hand side must be finite".into()));
    }
    if a[0][0] == 0.0 || a[1][1] == 0.0 {
        return Err(Error::Degenerate("zero diagonal entry: player has no influence on its row".into()));
    }
    let dominant = a[0][0].abs() > a[0][1].abs() && a[1][1].abs() > a[1][0].abs();
    let residual = move |k: usize, s: &[Vec<f64>]| a[k][0] * s[0][0] + a[k][1] * s[1][0] - y[k];
    let game = ContinuousGame::scalar(2, -LINEAR_BOX, LINEAR_BOX, move |k, s| -residual(k, s).powi(2))?
        .with_best_response(move |k, s| {
            let j = 1 - k;
            vec![((y[k] - a[k][j] * s[j][0]) / a[k][k]).clamp(-LINEAR_BOX, LINEAR_BOX)]
        })
        .with_gradient(move |k, s| vec![-2.0 * a[k][k] * residual(k, s)]);
    Ok((game, dominant))
}
