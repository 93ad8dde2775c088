use std::sync::Arc;

use crate::error::{Error, Result};
use crate::game::ContinuousGame;

/// Success-rate function of the effective SINR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Efficiency {
    /// `(1 - exp(-x))^m`
    Sigmoid { m: f64 },
    /// `exp(-a / x)`
    Exponential { a: f64 },
}

impl Efficiency {
    pub fn eval(self, x: f64) -> f64 {
        match self {
            Efficiency::Sigmoid { m } => (1.0 - (-x).exp()).powf(m),
            Efficiency::Exponential { a } => {
                if x <= 0.0 {
                    0.0
                } else {
                    (-a / x).exp()
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyParams {
    pub players: usize,
    pub efficiency: Efficiency,
    /// Receiver noise power; the SINR of player k is `p_k / (noise + sum_{j != k} p_j)`.
    pub noise: f64,
    pub p_max: f64,
    /// Linear price per unit power, one per player (all zeros for no pricing).
    pub pricing: Vec<f64>,
}

impl EnergyParams {
    pub fn new(players: usize, efficiency: Efficiency, p_max: f64) -> Self {
        EnergyParams {
            players,
            efficiency,
            noise: 1.0,
            p_max,
            pricing: vec![0.0; players],
        }
    }

    /// Smallest admissible power, keeping the utility away from `0 / 0`.
    pub fn p_min(&self) -> f64 {
        1e-6 * self.p_max
    }
}

const GOLDEN_GRID: usize = 256;

/// Maximize a univariate function on `[lo, hi]`: coarse grid, then golden
/// section inside the bracket around the best grid point, then compare with
/// the endpoints. Exact for unimodal functions up to the final tolerance.
pub(crate) fn maximize_1d(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64) -> f64 {
    if hi <= lo {
        return lo;
    }
    let step = (hi - lo) / GOLDEN_GRID as f64;
    let point = |i: usize| if i == GOLDEN_GRID { hi } else { lo + step * i as f64 };
    let mut best = 0;
    let mut best_val = f(lo);
    for i in 1..=GOLDEN_GRID {
        let v = f(point(i));
        if v > best_val {
            best = i;
            best_val = v;
        }
    }
    let (mut a, mut b) = (point(best.saturating_sub(1)), point((best + 1).min(GOLDEN_GRID)));
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= 1e-13 * (1.0 + a.abs() + b.abs()) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    let mid = 0.5 * (a + b);
    [(mid, f(mid)), (point(best), best_val), (lo, f(lo)), (hi, f(hi))]
        .into_iter()
        .fold((mid, f64::NEG_INFINITY), |acc, (x, v)| if v > acc.1 { (x, v) } else { acc })
        .0
}

/// Energy-efficiency power-control game: utility is success rate per unit
/// power, optionally minus a linear price `c_k p_k`. Actions live on
/// `[p_min, p_max]`; best responses come from a 1-D search.
pub fn energy_efficiency_game(params: &EnergyParams) -> Result<ContinuousGame> {
    let EnergyParams { players, efficiency, noise, p_max, pricing } = params.clone();
    if players == 0 {
        return Err(Error::InvalidArgument("at least one player required".into()));
    }
    match efficiency {
        Efficiency::Sigmoid { m } if !(m > 0.0 && m.is_finite()) => {
            return Err(Error::InvalidArgument(format!("sigmoid exponent M = {m} must be positive")))
        }
        Efficiency::Exponential { a } if !(a > 0.0 && a.is_finite()) => {
            return Err(Error::InvalidArgument(format!("exponential parameter a = {a} must be positive")))
        }
        _ => {}
    }
    if !(p_max > 0.0 && p_max.is_finite()) || !(noise > 0.0 && noise.is_finite()) {
        return Err(Error::InvalidArgument("p_max and noise must be positive".into()));
    }
    if pricing.len() != players || pricing.iter().any(|c| !(*c >= 0.0 && c.is_finite())) {
        return Err(Error::InvalidArgument("one non-negative price per player required".into()));
    }
    let p_min = params.p_min();
    let utility = Arc::new(move |k: usize, s: &[Vec<f64>]| {
        let own = s[k][0];
        let others: f64 = s.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, v)| v[0]).sum();
        efficiency.eval(own / (noise + others)) / own - pricing[k] * own
    });
    let u = Arc::clone(&utility);
    Ok(ContinuousGame::scalar(players, p_min, p_max, move |k, s| utility(k, s))?.with_best_response(
        move |k, s| {
            let mut trial = s.to_vec();
            let best = maximize_1d(
                |p| {
                    trial[k][0] = p;
                    u(k, &trial)
                },
                p_min,
                p_max,
            );
            vec![best]
        },
    ))
}
