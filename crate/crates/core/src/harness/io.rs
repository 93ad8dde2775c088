//! Game files and named scenarios.
//!
//! A game file is a JSON object whose keys decide what it holds:
//! `payoffs` for a finite strategic game, `values` for a TU coalition game,
//! `channel` for an interference channel and `ctd` for a detection network.

use std::path::Path;

use serde_json::{json, Value};

use crate::coalition::TUGame;
use crate::dynamics::ConsensusNetwork;
use crate::error::{Error, Result};
use crate::game::{ContinuousGame, FiniteGame};
use crate::scenarios::{
    aumann_coordination, beamforming_game, bs_game, cournot_duopoly, cr_dilemma, duck_foraging, energy_efficiency_game,
    linear_system_game, matching_pennies, pa_game, sensor_dilemma, BeamformingInstance, CongestionGame, CtdNetwork,
    Efficiency, EnergyParams, InterferenceChannel,
};

/// Anything [`load_game`] or [`scenario`] can produce.
#[derive(Debug, Clone)]
pub enum LoadedGame {
    Finite(FiniteGame),
    /// Implicit congestion game (too many players for a dense table).
    Congestion(CongestionGame),
    Continuous(ContinuousGame),
    Channel(InterferenceChannel),
    Ctd(CtdNetwork),
    Tu(TUGame),
    Network(ConsensusNetwork),
}

impl LoadedGame {
    pub fn kind(&self) -> &'static str {
        match self {
            LoadedGame::Finite(_) => "finite",
            LoadedGame::Congestion(_) => "congestion",
            LoadedGame::Continuous(_) => "continuous",
            LoadedGame::Channel(_) => "channel",
            LoadedGame::Ctd(_) => "ctd",
            LoadedGame::Tu(_) => "tu",
            LoadedGame::Network(_) => "network",
        }
    }

    /// Continuous view: the power-allocation game for a channel.
    pub fn continuous(&self) -> Result<ContinuousGame> {
        match self {
            LoadedGame::Continuous(g) => Ok(g.clone()),
            LoadedGame::Channel(ch) => pa_game(ch),
            _ => Err(Error::InvalidArgument(format!("a {} game has no continuous form", self.kind()))),
        }
    }

    /// TU view: detection networks become the game of fused worths.
    pub fn tu(&self) -> Result<TUGame> {
        match self {
            LoadedGame::Tu(g) => Ok(g.clone()),
            LoadedGame::Ctd(net) => TUGame::from_fn(net.stations(), |c| crate::scenarios::ctd_value(net, c as u64)),
            _ => Err(Error::InvalidArgument(format!("a {} game has no coalition form", self.kind()))),
        }
    }
}

/// Read and validate a game file.
pub fn load_game(path: impl AsRef<Path>) -> Result<LoadedGame> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_game(&text)
}

pub fn parse_game(text: &str) -> Result<LoadedGame> {
    let v: Value = serde_json::from_str(text)?;
    game_from_value(&v)
}

pub fn game_from_value(v: &Value) -> Result<LoadedGame> {
    if !v.is_object() {
        return Err(Error::invariant("$", "a game file must hold a JSON object"));
    }
    if v.get("payoffs").is_some() {
        FiniteGame::from_json(v).map(LoadedGame::Finite)
    } else if v.get("values").is_some() {
        TUGame::from_json(v).map(LoadedGame::Tu)
    } else if let Some(c) = v.get("channel") {
        channel_from_json(c).map(LoadedGame::Channel)
    } else if let Some(c) = v.get("ctd") {
        ctd_from_json(c).map(LoadedGame::Ctd)
    } else {
        Err(Error::invariant("$", "expected one of the keys `payoffs`, `values`, `channel`, `ctd`"))
    }
}

/// JSON form of a game, readable back by [`parse_game`].
pub fn save_game(game: &LoadedGame) -> Result<Value> {
    match game {
        LoadedGame::Finite(g) => Ok(g.to_json()),
        LoadedGame::Tu(g) => Ok(g.to_json()),
        LoadedGame::Channel(ch) => Ok(json!({"channel": {
            "gains": ch.gains(),
            "noise": ch.noise(),
            "budget": ch.budget(),
            "mac": ch.is_mac(),
        }})),
        LoadedGame::Ctd(net) => Ok(json!({"ctd": {
            "detection": net.detection(),
            "false_alarm": net.false_alarm(),
            "alpha": net.alpha(),
        }})),
        other => Err(Error::Capability(match other {
            LoadedGame::Congestion(_) => "file form of congestion games",
            LoadedGame::Network(_) => "file form of consensus networks",
            _ => "file form of continuous games",
        })),
    }
}

fn number(v: &Value, path: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| Error::invariant(path, "not a number"))
}

fn numbers(v: &Value, path: &str) -> Result<Vec<f64>> {
    v.as_array()
        .ok_or_else(|| Error::invariant(path, "not an array"))?
        .iter()
        .enumerate()
        .map(|(i, x)| number(x, &format!("{path}[{i}]")))
        .collect()
}

fn field<'a>(v: &'a Value, key: &str, path: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::invariant(format!("{path}.{key}"), "missing"))
}

fn channel_from_json(c: &Value) -> Result<InterferenceChannel> {
    let noise = number(field(c, "noise", "channel")?, "channel.noise")?;
    let budget = number(field(c, "budget", "channel")?, "channel.budget")?;
    let mac = c.get("mac").and_then(Value::as_bool).unwrap_or(false);
    let gains = field(c, "gains", "channel")?
        .as_array()
        .ok_or_else(|| Error::invariant("channel.gains", "not an array"))?;
    if mac {
        // Stored gains repeat per receiver; a MAC needs only one copy.
        let per_tx = gains
            .iter()
            .enumerate()
            .map(|(l, g)| match g.as_array().and_then(|a| a.first()) {
                Some(first) if first.is_array() => numbers(first, &format!("channel.gains[{l}][0]")),
                _ => numbers(g, &format!("channel.gains[{l}]")),
            })
            .collect::<Result<Vec<_>>>()?;
        return InterferenceChannel::mac(per_tx, noise, budget);
    }
    let full = gains
        .iter()
        .enumerate()
        .map(|(l, per_rx)| {
            per_rx
                .as_array()
                .ok_or_else(|| Error::invariant(format!("channel.gains[{l}]"), "not an array"))?
                .iter()
                .enumerate()
                .map(|(k, bands)| numbers(bands, &format!("channel.gains[{l}][{k}]")))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    InterferenceChannel::new(full, noise, budget)
}

fn ctd_from_json(c: &Value) -> Result<CtdNetwork> {
    CtdNetwork::new(
        numbers(field(c, "detection", "ctd")?, "ctd.detection")?,
        numbers(field(c, "false_alarm", "ctd")?, "ctd.false_alarm")?,
        number(field(c, "alpha", "ctd")?, "ctd.alpha")?,
    )
}

/// Names accepted by [`scenario`].
pub const SCENARIOS: &[&str] = &[
    "sensor-dilemma",
    "cr-dilemma",
    "aumann",
    "matching-pennies",
    "ducks",
    "band-selection",
    "power-allocation",
    "cournot",
    "linear-system",
    "energy",
    "beamforming",
    "ctd",
    "majority",
    "consensus",
];

struct Params<'a>(&'a Value);

impl Params<'_> {
    fn f64(&self, key: &str, default: f64) -> Result<f64> {
        match self.0.get(key) {
            None | Some(Value::Null) => Ok(default),
            Some(v) => number(v, &format!("params.{key}")),
        }
    }

    fn usize(&self, key: &str, default: usize) -> Result<usize> {
        match self.0.get(key) {
            None | Some(Value::Null) => Ok(default),
            Some(v) => v
                .as_u64()
                .map(|x| x as usize)
                .ok_or_else(|| Error::invariant(format!("params.{key}"), "not a non-negative integer")),
        }
    }

    fn u64(&self, key: &str, default: u64) -> Result<u64> {
        Ok(self.usize(key, default as usize)? as u64)
    }

    fn vec(&self, key: &str, default: &[f64]) -> Result<Vec<f64>> {
        match self.0.get(key) {
            None | Some(Value::Null) => Ok(default.to_vec()),
            Some(v) => numbers(v, &format!("params.{key}")),
        }
    }
}

fn pair(v: Vec<f64>, key: &str) -> Result<[f64; 2]> {
    v.try_into()
        .map_err(|_| Error::invariant(format!("params.{key}"), "expected exactly two numbers"))
}

/// Build a named scenario. `params` is a JSON object of optional overrides;
/// unknown keys are ignored.
pub fn scenario(name: &str, params: &Value) -> Result<LoadedGame> {
    let p = Params(params);
    Ok(match name {
        "sensor-dilemma" => LoadedGame::Finite(sensor_dilemma(p.f64("e", 0.2)?)?),
        "cr-dilemma" => LoadedGame::Finite(cr_dilemma()),
        "aumann" => LoadedGame::Finite(aumann_coordination()),
        "matching-pennies" => LoadedGame::Finite(matching_pennies()),
        "ducks" => {
            let rates = pair(p.vec("rates", &[24.0, 12.0])?, "rates")?;
            LoadedGame::Congestion(duck_foraging(p.usize("players", 33)?, (rates[0], rates[1]))?)
        }
        "band-selection" => {
            let ch = InterferenceChannel::random_mac(p.usize("users", 2)?, p.usize("bands", 2)?, p.u64("seed", 0)?)?;
            LoadedGame::Finite(bs_game(&ch)?)
        }
        "power-allocation" => LoadedGame::Channel(InterferenceChannel::random(
            p.usize("users", 2)?,
            p.usize("bands", 2)?,
            p.f64("cross", 0.5)?,
            p.u64("seed", 0)?,
        )?),
        "cournot" => LoadedGame::Continuous(cournot_duopoly()),
        "linear-system" => {
            let a = p.vec("a", &[2.0, 1.0, 1.0, 2.0])?;
            if a.len() != 4 {
                return Err(Error::invariant("params.a", "expected four numbers (row-major 2x2)"));
            }
            let y = pair(p.vec("y", &[3.0, 3.0])?, "y")?;
            LoadedGame::Continuous(linear_system_game([[a[0], a[1]], [a[2], a[3]]], y)?.0)
        }
        "energy" => {
            let mut params = EnergyParams::new(
                p.usize("players", 2)?,
                Efficiency::Sigmoid { m: p.f64("m", 10.0)? },
                p.f64("p_max", 1.0)?,
            );
            params.noise = p.f64("noise", 1.0)?;
            let price = p.f64("price", 0.0)?;
            params.pricing = vec![price; params.players];
            LoadedGame::Continuous(energy_efficiency_game(&params)?)
        }
        "beamforming" => {
            let inst = BeamformingInstance::random(p.usize("antennas", 4)?, p.f64("power", 1.0)?, p.u64("seed", 0)?)?;
            LoadedGame::Continuous(beamforming_game(&inst))
        }
        "ctd" => LoadedGame::Ctd(CtdNetwork::random(p.usize("stations", 7)?, p.f64("alpha", 0.05)?, p.u64("seed", 0)?)?),
        "majority" => LoadedGame::Tu(TUGame::majority(p.usize("players", 3)?)?),
        "consensus" => {
            let n = p.usize("nodes", 5)?;
            let beta = p.f64("beta", 1.0 / n.max(1) as f64)?;
            LoadedGame::Network(ConsensusNetwork::complete(n, beta)?)
        }
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown scenario `{other}` (known: {})",
                SCENARIOS.join(", ")
            )))
        }
    })
}
