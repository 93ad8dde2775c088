use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::game::ContinuousGame;

/// Two single-antenna receivers served by two `N`-antenna transmitters.
///
/// `channel(i, j)` is the vector from transmitter `i` to receiver `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamformingInstance {
    channels: [[Vec<Complex64>; 2]; 2],
    power: f64,
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn scaled(a: &[Complex64], s: f64) -> Vec<Complex64> {
    a.iter().map(|x| x * s).collect()
}

impl BeamformingInstance {
    pub fn new(channels: [[Vec<Complex64>; 2]; 2], power: f64) -> Result<Self> {
        let n = channels[0][0].len();
        if n == 0 || channels.iter().flatten().any(|h| h.len() != n) {
            return Err(Error::Shape("all channel vectors need the same non-zero length".into()));
        }
        if channels.iter().flatten().any(|h| h.iter().any(|z| !z.re.is_finite() || !z.im.is_finite())) {
            return Err(Error::invariant("channels", "entries must be finite"));
        }
        if channels.iter().flatten().any(|h| norm(h) == 0.0) {
            return Err(Error::invariant("channels", "channel vectors must be non-zero"));
        }
        if !(power.is_finite() && power > 0.0) {
            return Err(Error::invariant("power", "transmit power must be positive"));
        }
        let inst = BeamformingInstance { channels, power };
        for i in 0..2 {
            let residual = norm(&inst.projection(i));
            if residual <= 1e-9 * norm(&inst.channels[i][i]) {
                return Err(Error::Degenerate(format!(
                    "direct channel of transmitter {i} is colinear with its interference channel"
                )));
            }
        }
        Ok(inst)
    }

    /// Circularly-symmetric complex Gaussian channels, unit variance per entry.
    pub fn random(antennas: usize, power: f64, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = || -> Vec<Complex64> {
            (0..antennas)
                .map(|_| {
                    let re: f64 = StandardNormal.sample(&mut rng);
                    let im: f64 = StandardNormal.sample(&mut rng);
                    Complex64::new(re, im) / 2f64.sqrt()
                })
                .collect()
        };
        let channels = [[draw(), draw()], [draw(), draw()]];
        BeamformingInstance::new(channels, power)
    }

    pub fn antennas(&self) -> usize {
        self.channels[0][0].len()
    }

    pub fn power(&self) -> f64 {
        self.power
    }

    pub fn channel(&self, from: usize, to: usize) -> &[Complex64] {
        &self.channels[from][to]
    }

    /// Direct channel of `i` with its component along `i`'s interference
    /// channel removed.
    fn projection(&self, i: usize) -> Vec<Complex64> {
        let h = &self.channels[i][i];
        let g = &self.channels[i][1 - i];
        let coef = inner(g, h) / norm(g).powi(2);
        h.iter().zip(g).map(|(a, b)| a - coef * b).collect()
    }

    /// Maximum-ratio beam `h_ii / |h_ii|`.
    pub fn mrt(&self, i: usize) -> Vec<Complex64> {
        let h = &self.channels[i][i];
        scaled(h, 1.0 / norm(h))
    }

    /// Zero-forcing beam: unit vector orthogonal to the interference channel.
    pub fn zf(&self, i: usize) -> Vec<Complex64> {
        let p = self.projection(i);
        scaled(&p, 1.0 / norm(&p))
    }

    /// `alpha * zf + (1 - alpha) * mrt`, rescaled to unit norm.
    pub fn beam(&self, i: usize, alpha: f64) -> Vec<Complex64> {
        let zf = self.zf(i);
        let mrt = self.mrt(i);
        let w: Vec<Complex64> = zf.iter().zip(&mrt).map(|(z, m)| z * alpha + m * (1.0 - alpha)).collect();
        scaled(&w, 1.0 / norm(&w))
    }

    /// `|h_ij^H w_i|^2`: power transmitter `i` leaks into receiver `j` per unit power.
    pub fn leakage(&self, i: usize, alpha_i: f64) -> f64 {
        inner(&self.channels[i][1 - i], &self.beam(i, alpha_i)).norm_sqr()
    }

    pub fn sinr(&self, i: usize, alpha: [f64; 2]) -> f64 {
        let signal = inner(&self.channels[i][i], &self.beam(i, alpha[i])).norm_sqr() * self.power;
        let interference = self.leakage(1 - i, alpha[1 - i]) * self.power;
        signal / (1.0 + interference)
    }

    /// `ln(1 + SINR_i)` for both users.
    pub fn utilities(&self, alpha: [f64; 2]) -> [f64; 2] {
        [(1.0 + self.sinr(0, alpha)).ln(), (1.0 + self.sinr(1, alpha)).ln()]
    }
}

/// Two-player game over the combining coefficients `(alpha_1, alpha_2)`.
/// `alpha = 0` is maximum-ratio transmission, `alpha = 1` zero forcing.
pub fn beamforming_game(instance: &BeamformingInstance) -> ContinuousGame {
    let inst = instance.clone();
    ContinuousGame::scalar(2, 0.0, 1.0, move |k, s| inst.utilities([s[0][0], s[1][0]])[k]).expect("unit box")
}
