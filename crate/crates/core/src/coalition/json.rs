//! JSON form of a TU game:
//! `{"players": K, "values": {"0,2": 1.5, ..}, "default": 0.0}`.
//! Keys list members (0-based, ascending, comma separated); `""` is the
//! empty coalition. Coalitions not listed take `default` (0 if absent).

use serde_json::{json, Map, Value};

use super::{check_players, fmt_members, Coalition, TUGame, MAX_PLAYERS};
use crate::error::{Error, Result};

fn parse_key(key: &str, players: usize) -> Result<Coalition> {
    if key.trim().is_empty() {
        return Ok(0);
    }
    let mut c: Coalition = 0;
    for part in key.split(',') {
        let i: usize = part
            .trim()
            .parse()
            .map_err(|_| Error::invariant(format!("values[\"{key}\"]"), format!("`{part}` is not a player index")))?;
        if i >= players {
            return Err(Error::invariant(format!("values[\"{key}\"]"), format!("player {i} outside 0..{players}")));
        }
        if c >> i & 1 == 1 {
            return Err(Error::invariant(format!("values[\"{key}\"]"), format!("player {i} listed twice")));
        }
        c |= 1 << i;
    }
    Ok(c)
}

impl TUGame {
    pub fn from_json_str(text: &str) -> Result<Self> {
        TUGame::from_json(&serde_json::from_str(text)?)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let players = v
            .get("players")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::invariant("players", "missing or not a non-negative integer"))? as usize;
        check_players(players, MAX_PLAYERS)?;
        let default = match v.get("default") {
            None | Some(Value::Null) => 0.0,
            Some(d) => d.as_f64().ok_or_else(|| Error::invariant("default", "not a number"))?,
        };
        let map = v
            .get("values")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::invariant("values", "missing or not an object"))?;
        let mut values = vec![default; 1 << players];
        values[0] = 0.0;
        let mut seen = vec![false; 1 << players];
        for (key, val) in map {
            let c = parse_key(key, players)?;
            if seen[c as usize] {
                return Err(Error::invariant(format!("values[\"{key}\"]"), "coalition listed twice"));
            }
            seen[c as usize] = true;
            let x = val
                .as_f64()
                .ok_or_else(|| Error::invariant(format!("values[\"{key}\"]"), "not a number"))?;
            if c == 0 && x != 0.0 {
                return Err(Error::invariant(format!("values[\"{key}\"]"), format!("the empty coalition must be worth 0, got {x}")));
            }
            values[c as usize] = x;
        }
        TUGame::new(players, values)
    }

    /// Every non-empty coalition listed explicitly (keys sorted as strings).
    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for c in 1..=self.grand() {
            map.insert(fmt_members(c), json!(self.value(c)));
        }
        json!({ "players": self.players(), "values": Value::Object(map) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_default() {
        let g = TUGame::from_json_str(r#"{"players": 3, "values": {"0,1": 1, "1,2": 1, "0,2": 1, "0,1,2": 1}}"#).unwrap();
        assert_eq!(g, TUGame::majority(3).unwrap());
    }

    #[test]
    fn nonzero_empty_rejected() {
        let err = TUGame::from_json_str(r#"{"players": 2, "values": {"": 1.0}}"#).unwrap_err();
        assert!(matches!(err, Error::Invariant { .. }));
    }

    #[test]
    fn bad_member_rejected() {
        assert!(TUGame::from_json_str(r#"{"players": 2, "values": {"0,5": 1.0}}"#).is_err());
        assert!(TUGame::from_json_str(r#"{"players": 2, "values": {"a": 1.0}}"#).is_err());
    }

    #[test]
    fn round_trip() {
        let g = TUGame::from_fn(4, |c| c as f64 * 0.25).unwrap();
        assert_eq!(TUGame::from_json(&g.to_json()).unwrap(), g);
    }
}
