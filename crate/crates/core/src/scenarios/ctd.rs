use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Monitoring stations that may pool their detections.
///
/// Coalitions fuse decisions with the OR rule; a coalition whose fused
/// false-alarm probability exceeds `alpha` is worth nothing.
#[derive(Debug, Clone, PartialEq)]
pub struct CtdNetwork {
    detection: Vec<f64>,
    false_alarm: Vec<f64>,
    alpha: f64,
}

impl CtdNetwork {
    pub fn new(detection: Vec<f64>, false_alarm: Vec<f64>, alpha: f64) -> Result<Self> {
        if detection.len() != false_alarm.len() {
            return Err(Error::Shape(format!(
                "{} detection and {} false-alarm probabilities",
                detection.len(),
                false_alarm.len()
            )));
        }
        for (name, v) in [("detection", &detection), ("false_alarm", &false_alarm)] {
            if let Some(i) = v.iter().position(|p| !(0.0..=1.0).contains(p)) {
                return Err(Error::invariant(format!("{name}[{i}]"), "probability outside [0, 1]"));
            }
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::invariant("alpha", "false-alarm cap must lie in (0, 1)"));
        }
        Ok(CtdNetwork { detection, false_alarm, alpha })
    }

    /// Detection probabilities uniform on `[0.4, 0.9]`, false alarms on
    /// `[0.005, 0.03]`, cap `alpha`.
    pub fn random(stations: usize, alpha: f64, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let detection = (0..stations).map(|_| rng.gen_range(0.4..0.9)).collect();
        let false_alarm = (0..stations).map(|_| rng.gen_range(0.005..0.03)).collect();
        CtdNetwork::new(detection, false_alarm, alpha)
    }

    pub fn stations(&self) -> usize {
        self.detection.len()
    }

    pub fn detection(&self) -> &[f64] {
        &self.detection
    }

    pub fn false_alarm(&self) -> &[f64] {
        &self.false_alarm
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    fn fused(probs: &[f64], mask: u64) -> f64 {
        let miss: f64 = probs
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask >> i & 1 == 1)
            .map(|(_, p)| 1.0 - p)
            .product();
        1.0 - miss
    }

    /// OR-rule detection and false-alarm probabilities of a coalition.
    pub fn fused_probabilities(&self, mask: u64) -> (f64, f64) {
        (CtdNetwork::fused(&self.detection, mask), CtdNetwork::fused(&self.false_alarm, mask))
    }
}

/// Worth of a coalition (bitmask over stations): fused detection
/// probability if the fused false-alarm probability respects the cap,
/// otherwise zero. The empty coalition is worth zero.
pub fn ctd_value(network: &CtdNetwork, mask: u64) -> f64 {
    if mask == 0 {
        return 0.0;
    }
    let (qd, qf) = network.fused_probabilities(mask);
    if qf <= network.alpha {
        qd
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_station_fusion() {
        let net = CtdNetwork::new(vec![0.9, 0.9], vec![0.01, 0.01], 0.05).unwrap();
        let (qd, qf) = net.fused_probabilities(0b11);
        assert!((qd - 0.99).abs() < 1e-12);
        assert!((qf - 0.0199).abs() < 1e-12);
        assert!((ctd_value(&net, 0b11) - 0.99).abs() < 1e-12);
    }

    #[test]
    fn cap_zeroes_large_coalitions() {
        let net = CtdNetwork::new(vec![0.5; 4], vec![0.02; 4], 0.05).unwrap();
        assert!(ctd_value(&net, 0b11) > 0.0);
        assert_eq!(ctd_value(&net, 0b1111), 0.0);
    }

    #[test]
    fn singleton_and_empty() {
        let net = CtdNetwork::new(vec![0.7, 0.6], vec![0.01, 0.2], 0.05).unwrap();
        assert_eq!(ctd_value(&net, 0), 0.0);
        assert_eq!(ctd_value(&net, 0b01), 0.7);
        assert_eq!(ctd_value(&net, 0b10), 0.0);
    }

    #[test]
    fn validation() {
        assert!(CtdNetwork::new(vec![1.2], vec![0.0], 0.1).is_err());
        assert!(CtdNetwork::new(vec![0.5], vec![0.0], 1.0).is_err());
        assert!(CtdNetwork::new(vec![0.5, 0.5], vec![0.0], 0.1).is_err());
    }
}
