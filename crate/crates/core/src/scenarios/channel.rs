use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::{ContinuousGame, FiniteGame};
use crate::linalg::spectral_radius_nonneg;

/// `K` transmitter/receiver pairs sharing `N` orthogonal bands.
///
/// `gain(l, k, n)` is the power gain from transmitter `l` to receiver `k`
/// on band `n`. On a multiple-access channel there is a single receiver, so
/// the gain does not depend on `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct InterferenceChannel {
    gains: Vec<Vec<Vec<f64>>>,
    noise: f64,
    budget: f64,
    mac: bool,
}

impl InterferenceChannel {
    pub fn new(gains: Vec<Vec<Vec<f64>>>, noise: f64, budget: f64) -> Result<Self> {
        let k = gains.len();
        if k == 0 {
            return Err(Error::invariant("gains", "at least one transmitter required"));
        }
        let n = gains[0].first().map_or(0, Vec::len);
        if n == 0 {
            return Err(Error::invariant("gains", "at least one band required"));
        }
        for (l, per_rx) in gains.iter().enumerate() {
            if per_rx.len() != k {
                return Err(Error::Shape(format!("gains[{l}] has {} receivers, expected {k}", per_rx.len())));
            }
            for (r, bands) in per_rx.iter().enumerate() {
                if bands.len() != n {
                    return Err(Error::Shape(format!("gains[{l}][{r}] has {} bands, expected {n}", bands.len())));
                }
                if let Some(b) = bands.iter().position(|g| !(g.is_finite() && *g >= 0.0)) {
                    return Err(Error::invariant(format!("gains[{l}][{r}][{b}]"), "gain must be finite and >= 0"));
                }
            }
        }
        if !(noise.is_finite() && noise > 0.0) {
            return Err(Error::invariant("noise", "noise power must be positive"));
        }
        if !(budget.is_finite() && budget > 0.0) {
            return Err(Error::invariant("budget", "power budget must be positive"));
        }
        Ok(InterferenceChannel { gains, noise, budget, mac: false })
    }

    /// Multiple-access channel from per-transmitter band gains `gains[l][n]`.
    pub fn mac(gains: Vec<Vec<f64>>, noise: f64, budget: f64) -> Result<Self> {
        let k = gains.len();
        let full = gains.iter().map(|g| vec![g.clone(); k]).collect();
        let mut ch = InterferenceChannel::new(full, noise, budget)?;
        ch.mac = true;
        Ok(ch)
    }

    /// Direct gains uniform on `[0.5, 1.5]`, cross gains `cross` times a
    /// uniform draw on `[0, 1]`.
    pub fn random(k: usize, n: usize, cross: f64, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gains = (0..k)
            .map(|l| {
                (0..k)
                    .map(|r| {
                        (0..n)
                            .map(|_| if l == r { rng.gen_range(0.5..1.5) } else { cross * rng.gen::<f64>() })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        InterferenceChannel::new(gains, 1.0, 1.0)
    }

    /// MAC with gains uniform on `[0.1, 1.1]`.
    pub fn random_mac(k: usize, n: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gains = (0..k).map(|_| (0..n).map(|_| rng.gen_range(0.1..1.1)).collect()).collect();
        InterferenceChannel::mac(gains, 1.0, 1.0)
    }

    pub fn num_users(&self) -> usize {
        self.gains.len()
    }

    pub fn num_bands(&self) -> usize {
        self.gains[0][0].len()
    }

    pub fn gain(&self, from: usize, to: usize, band: usize) -> f64 {
        self.gains[from][to][band]
    }

    pub fn gains(&self) -> &[Vec<Vec<f64>>] {
        &self.gains
    }

    pub fn noise(&self) -> f64 {
        self.noise
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    pub fn is_mac(&self) -> bool {
        self.mac
    }

    /// SINR of user `k` on band `n`.
    pub fn sinr(&self, k: usize, n: usize, powers: &[Vec<f64>]) -> f64 {
        let interference: f64 = (0..self.num_users())
            .filter(|&l| l != k)
            .map(|l| self.gains[l][k][n] * powers[l][n])
            .sum();
        self.gains[k][k][n] * powers[k][n] / (self.noise + interference)
    }

    /// Sum rate `sum_n log2(1 + sinr)` of user `k`.
    pub fn rate(&self, k: usize, powers: &[Vec<f64>]) -> f64 {
        (0..self.num_bands()).map(|n| (1.0 + self.sinr(k, n, powers)).log2()).sum()
    }

    fn check_powers(&self, powers: &[Vec<f64>]) -> Result<()> {
        if powers.len() != self.num_users() || powers.iter().any(|p| p.len() != self.num_bands()) {
            return Err(Error::Shape("power matrix must be users x bands".into()));
        }
        Ok(())
    }
}

/// Power-allocation game: each user splits its budget over the bands.
///
/// Action boxes are `[0, P]` per band; the best-response oracle is
/// [`waterfilling_best_response`], which always exhausts the budget.
pub fn pa_game(channel: &InterferenceChannel) -> Result<ContinuousGame> {
    let bounds = vec![vec![(0.0, channel.budget); channel.num_bands()]; channel.num_users()];
    let for_utility = channel.clone();
    let for_br = channel.clone();
    Ok(ContinuousGame::new(bounds, move |k, s| for_utility.rate(k, s))?.with_best_response(move |k, s| {
        waterfilling_best_response(&for_br, k, s).unwrap_or_else(|_| s[k].clone())
    }))
}

/// Band-selection game: each user puts its whole budget on one band.
pub fn bs_game(channel: &InterferenceChannel) -> Result<FiniteGame> {
    let (k, n) = (channel.num_users(), channel.num_bands());
    FiniteGame::from_fn(vec![n; k], |player, bands| {
        let powers: Vec<Vec<f64>> = bands
            .iter()
            .map(|&b| {
                let mut p = vec![0.0; n];
                p[b] = channel.budget;
                p
            })
            .collect();
        channel.rate(player, &powers)
    })
}

/// Water-filling allocation of user `k`'s budget against the others' powers.
///
/// The water level is computed exactly from the sorted effective noise
/// levels, so the budget is met to rounding error. Bands with zero direct
/// gain get no power.
pub fn waterfilling_best_response(channel: &InterferenceChannel, k: usize, powers: &[Vec<f64>]) -> Result<Vec<f64>> {
    channel.check_powers(powers)?;
    if k >= channel.num_users() {
        return Err(Error::Shape(format!("user {k} out of range")));
    }
    let n = channel.num_bands();
    let mut levels: Vec<(f64, usize)> = (0..n)
        .filter(|&b| channel.gains[k][k][b] > 0.0)
        .map(|b| {
            let interference: f64 = (0..channel.num_users())
                .filter(|&l| l != k)
                .map(|l| channel.gains[l][k][b] * powers[l][b])
                .sum();
            ((channel.noise + interference) / channel.gains[k][k][b], b)
        })
        .collect();
    if levels.is_empty() {
        return Err(Error::Degenerate(format!("user {k} has zero direct gain on every band")));
    }
    levels.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut active = levels.len();
    let mut prefix = 0.0;
    for (m, &(level, _)) in levels.iter().enumerate() {
        let water = (channel.budget + prefix) / m as f64;
        if m > 0 && water <= level {
            active = m;
            break;
        }
        prefix += level;
    }
    let water = (channel.budget + levels[..active].iter().map(|l| l.0).sum::<f64>()) / active as f64;
    let mut p = vec![0.0; n];
    if active == 1 {
        p[levels[0].1] = channel.budget;
    } else {
        for &(level, b) in &levels[..active] {
            p[b] = (water - level).max(0.0);
        }
    }
    Ok(p)
}

/// Potential `sum_n log2(noise + sum_k h_{k,n} p_{k,n})` of the MAC games.
pub fn mac_potential(channel: &InterferenceChannel, powers: &[Vec<f64>]) -> Result<f64> {
    if !channel.mac {
        return Err(Error::Contract("potential is defined only for multiple-access channels".into()));
    }
    channel.check_powers(powers)?;
    Ok((0..channel.num_bands())
        .map(|n| {
            let received: f64 = (0..channel.num_users()).map(|k| channel.gains[k][0][n] * powers[k][n]).sum();
            (channel.noise + received).log2()
        })
        .sum())
}

/// Spectral radii of the per-band normalized interference matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralReport {
    /// One radius per band (infinite when a direct gain is zero).
    pub radii: Vec<f64>,
    /// True when every radius is below one.
    pub holds: bool,
    pub diagnostics: Vec<String>,
}

/// Convergence condition for iterative water-filling: for every band `n`,
/// the matrix with zero diagonal and entries `h_{l k,n} / h_{k k,n}` must
/// have spectral radius below one.
pub fn spectral_radius_condition(channel: &InterferenceChannel) -> SpectralReport {
    let k = channel.num_users();
    let mut radii = Vec::with_capacity(channel.num_bands());
    let mut diagnostics = Vec::new();
    for n in 0..channel.num_bands() {
        let mut zero = None;
        let h: Vec<Vec<f64>> = (0..k)
            .map(|r| {
                (0..k)
                    .map(|l| {
                        if l == r {
                            0.0
                        } else if channel.gains[r][r][n] == 0.0 {
                            zero = Some(r);
                            f64::INFINITY
                        } else {
                            channel.gains[l][r][n] / channel.gains[r][r][n]
                        }
                    })
                    .collect()
            })
            .collect();
        match zero {
            Some(r) if k > 1 => {
                diagnostics.push(format!("band {n}: direct gain of user {r} is zero"));
                radii.push(f64::INFINITY);
            }
            _ => radii.push(spectral_radius_nonneg(&h, 200, 1e-10)),
        }
    }
    let holds = radii.iter().all(|&r| r < 1.0);
    SpectralReport { radii, holds, diagnostics }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_band(levels: (f64, f64), budget: f64) -> InterferenceChannel {
        // Single user with noise 1 and gains chosen so effective noise = levels.
        InterferenceChannel::new(vec![vec![vec![1.0 / levels.0, 1.0 / levels.1]]], 1.0, budget).unwrap()
    }

    #[test]
    fn analytic_two_band_case() {
        let ch = two_band((1.0, 2.0), 1.0);
        let p = waterfilling_best_response(&ch, 0, &[vec![0.0, 0.0]]).unwrap();
        assert_eq!(p, vec![1.0, 0.0]);
    }

    #[test]
    fn equal_levels_split_evenly() {
        let ch = two_band((1.0, 1.0), 1.0);
        let p = waterfilling_best_response(&ch, 0, &[vec![0.0, 0.0]]).unwrap();
        assert_eq!(p, vec![0.5, 0.5]);
    }

    #[test]
    fn single_band_takes_everything() {
        let ch = InterferenceChannel::new(vec![vec![vec![0.3]]], 2.0, 5.0).unwrap();
        assert_eq!(waterfilling_best_response(&ch, 0, &[vec![0.0]]).unwrap(), vec![5.0]);
    }

    #[test]
    fn zero_gain_bands_are_skipped() {
        let ch = InterferenceChannel::new(vec![vec![vec![0.0, 1.0]]], 1.0, 1.0).unwrap();
        assert_eq!(waterfilling_best_response(&ch, 0, &[vec![0.0, 0.0]]).unwrap(), vec![0.0, 1.0]);
        let dead = InterferenceChannel::new(vec![vec![vec![0.0, 0.0]]], 1.0, 1.0).unwrap();
        assert!(matches!(waterfilling_best_response(&dead, 0, &[vec![0.0, 0.0]]), Err(Error::Degenerate(_))));
    }

    #[test]
    fn potential_needs_mac() {
        let ch = InterferenceChannel::random(2, 2, 0.1, 1).unwrap();
        assert!(matches!(mac_potential(&ch, &[vec![0.0; 2], vec![0.0; 2]]), Err(Error::Contract(_))));
        let mac = InterferenceChannel::random_mac(2, 3, 1).unwrap();
        let phi = mac_potential(&mac, &[vec![0.0; 3], vec![0.0; 3]]).unwrap();
        assert_eq!(phi, 3.0 * mac.noise().log2());
    }

    #[test]
    fn spectral_cases() {
        let single = InterferenceChannel::random(1, 2, 0.0, 3).unwrap();
        let r = spectral_radius_condition(&single);
        assert!(r.holds && r.radii.iter().all(|&x| x == 0.0));
        let equal = InterferenceChannel::new(vec![vec![vec![1.0], vec![1.0]]; 2], 1.0, 1.0).unwrap();
        let r = spectral_radius_condition(&equal);
        assert!(!r.holds);
        assert!((r.radii[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn constructor_validates() {
        assert!(InterferenceChannel::new(vec![vec![vec![-1.0]]], 1.0, 1.0).is_err());
        assert!(InterferenceChannel::new(vec![vec![vec![1.0]]], 0.0, 1.0).is_err());
        assert!(InterferenceChannel::new(vec![vec![vec![1.0]], vec![vec![1.0]]], 1.0, 1.0).is_err());
    }
}
