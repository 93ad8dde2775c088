use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::{next_profile, profile_count, ContinuousGame, FiniteGame, StrategicGame, MAX_PROFILES};

/// Number of shrinking-grid rounds after the initial grid.
pub const REFINEMENT_ROUNDS: usize = 3;

/// Where the bargaining search runs.
#[derive(Debug, Clone, Copy)]
pub enum BargainingDomain<'a> {
    /// Every pure profile is a candidate agreement.
    Finite(&'a FiniteGame),
    /// The action box is gridded and refined.
    Continuous(&'a ContinuousGame),
}

#[derive(Debug, Clone, PartialEq)]
pub enum BargainingArgument {
    Pure(Vec<usize>),
    Point(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct NashBargainingResult {
    pub argument: BargainingArgument,
    pub utilities: Vec<f64>,
    pub status_quo: Vec<f64>,
    /// `prod_k (u_k - lambda_k)`
    pub nash_product: f64,
}

fn nash_product(u: &[f64], status_quo: &[f64]) -> Option<f64> {
    if u.iter().zip(status_quo).any(|(a, l)| a < l) {
        return None;
    }
    Some(u.iter().zip(status_quo).map(|(a, l)| a - l).product())
}

/// Index of the first strictly largest entry; `None` if nothing is feasible
/// or no candidate improves on the status quo for every player.
fn best_index(products: &[Option<f64>]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, p) in products.iter().enumerate() {
        if let Some(v) = *p {
            if best.map_or(true, |(_, b)| v > b) {
                best = Some((i, v));
            }
        }
    }
    best.filter(|&(_, v)| v > 0.0).map(|(i, _)| i)
}

/// Maximize the Nash product over a finite game's profiles, or over a grid
/// of `grid` points per action coordinate followed by
/// [`REFINEMENT_ROUNDS`] zooms around the best cell.
///
/// Works for any number of players (the product then runs over all of them).
pub fn nash_bargaining(
    domain: BargainingDomain<'_>,
    status_quo: &[f64],
    grid: usize,
) -> Result<NashBargainingResult> {
    if status_quo.iter().any(|l| !l.is_finite()) {
        return Err(Error::InvalidArgument("status quo must be finite".into()));
    }
    match domain {
        BargainingDomain::Finite(game) => bargain_finite(game, status_quo),
        BargainingDomain::Continuous(game) => bargain_continuous(game, status_quo, grid),
    }
}

fn check_status_quo(players: usize, status_quo: &[f64]) -> Result<()> {
    if status_quo.len() != players {
        return Err(Error::Shape(format!("status quo has {} entries for {} players", status_quo.len(), players)));
    }
    Ok(())
}

fn bargain_finite(game: &FiniteGame, status_quo: &[f64]) -> Result<NashBargainingResult> {
    check_status_quo(game.num_players(), status_quo)?;
    let k = game.num_players();
    let products: Vec<Option<f64>> = (0..game.num_profiles())
        .into_par_iter()
        .map(|i| {
            let u: Vec<f64> = (0..k).map(|p| game.payoff_at(p, i)).collect();
            nash_product(&u, status_quo)
        })
        .collect();
    let i = best_index(&products).ok_or(Error::Disagreement)?;
    let profile = game.profile_at(i);
    Ok(NashBargainingResult {
        utilities: (0..k).map(|p| game.payoff(p, &profile)).collect(),
        argument: BargainingArgument::Pure(profile),
        status_quo: status_quo.to_vec(),
        nash_product: products[i].unwrap_or(0.0),
    })
}

fn axis(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| if i + 1 == points { hi } else { lo + (hi - lo) * i as f64 / (points - 1) as f64 })
        .collect()
}

fn bargain_continuous(game: &ContinuousGame, status_quo: &[f64], grid: usize) -> Result<NashBargainingResult> {
    check_status_quo(game.num_players(), status_quo)?;
    if grid < 2 {
        return Err(Error::InvalidArgument("grid needs at least 2 points per axis".into()));
    }
    let shape: Vec<usize> = game.all_bounds().iter().map(Vec::len).collect();
    let dims: usize = shape.iter().sum();
    let counts = vec![grid; dims];
    let cells = profile_count(&counts)?;
    let k = game.num_players();
    let unflatten = |flat: &[f64]| -> Vec<Vec<f64>> {
        let mut out = Vec::with_capacity(shape.len());
        let mut pos = 0;
        for &len in &shape {
            out.push(flat[pos..pos + len].to_vec());
            pos += len;
        }
        out
    };
    let mut boxes: Vec<(f64, f64)> = game.all_bounds().iter().flatten().copied().collect();
    let mut best: Option<(Vec<f64>, f64)> = None;
    for _round in 0..=REFINEMENT_ROUNDS {
        let axes: Vec<Vec<f64>> = boxes.iter().map(|&(lo, hi)| axis(lo, hi, grid)).collect();
        let mut indices = Vec::with_capacity(cells);
        let mut idx = vec![0; dims];
        loop {
            indices.push(idx.clone());
            if !next_profile(&mut idx, &counts) {
                break;
            }
        }
        debug_assert!(indices.len() <= MAX_PROFILES);
        let products: Vec<Option<f64>> = indices
            .par_iter()
            .map(|idx| {
                let flat: Vec<f64> = idx.iter().zip(&axes).map(|(&i, ax)| ax[i]).collect();
                let s = unflatten(&flat);
                let u: Vec<f64> = (0..k).map(|p| game.utility(p, &s)).collect();
                nash_product(&u, status_quo)
            })
            .collect();
        if let Some(i) = best_index(&products) {
            let value = products[i].unwrap_or(0.0);
            if best.as_ref().map_or(true, |(_, b)| value > *b) {
                let flat: Vec<f64> = indices[i].iter().zip(&axes).map(|(&j, ax)| ax[j]).collect();
                best = Some((flat, value));
            }
        }
        let Some((centre, _)) = &best else {
            return Err(Error::Disagreement);
        };
        let full: Vec<(f64, f64)> = game.all_bounds().iter().flatten().copied().collect();
        boxes = boxes
            .iter()
            .zip(centre)
            .zip(&full)
            .map(|((&(lo, hi), &c), &(flo, fhi))| {
                let step = (hi - lo) / (grid - 1) as f64;
                ((c - step).max(flo), (c + step).min(fhi))
            })
            .collect();
    }
    let (flat, value) = best.ok_or(Error::Disagreement)?;
    let point = unflatten(&flat);
    Ok(NashBargainingResult {
        utilities: (0..k).map(|p| game.utility(p, &point)).collect(),
        argument: BargainingArgument::Point(point),
        status_quo: status_quo.to_vec(),
        nash_product: value,
    })
}
