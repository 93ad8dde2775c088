//! JSON form of a finite game:
//! `{"players": K, "actions": [[names..]..], "payoffs": [tensor_1, .., tensor_K]}`
//! where each tensor is nested `N_1 x .. x N_K` arrays.

use serde_json::{json, Value};

use super::{next_profile, FiniteGame, StrategicGame};
use crate::error::{Error, Result};

impl FiniteGame {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text)?;
        FiniteGame::from_json(&v)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let players = v
            .get("players")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::invariant("players", "missing or not a non-negative integer"))?
            as usize;
        let actions = v
            .get("actions")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::invariant("actions", "missing or not an array"))?;
        if actions.len() != players {
            return Err(Error::invariant(
                "actions",
                format!("{} action lists for {} players", actions.len(), players),
            ));
        }
        let labels = actions
            .iter()
            .enumerate()
            .map(|(k, a)| {
                a.as_array()
                    .ok_or_else(|| Error::invariant(format!("actions[{k}]"), "not an array"))?
                    .iter()
                    .enumerate()
                    .map(|(i, s)| {
                        s.as_str()
                            .map(str::to_owned)
                            .ok_or_else(|| Error::invariant(format!("actions[{k}][{i}]"), "not a string"))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let counts: Vec<usize> = labels.iter().map(Vec::len).collect();
        let tensors = v
            .get("payoffs")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::invariant("payoffs", "missing or not an array"))?;
        if tensors.len() != players {
            return Err(Error::Shape(format!(
                "payoffs has {} player tensors, expected {}",
                tensors.len(),
                players
            )));
        }
        let n = super::profile_count(&counts)?;
        let mut flat = Vec::with_capacity(n * players);
        for (k, t) in tensors.iter().enumerate() {
            let mut p = vec![0; players];
            for idx in 0..n {
                let mut cell = t;
                let mut path = format!("payoffs[{k}]");
                for (depth, &a) in p.iter().enumerate() {
                    let arr = cell.as_array().filter(|arr| arr.len() == counts[depth]).ok_or_else(|| {
                        Error::Shape(format!(
                            "{path}: expected an array of {} entries (profile index {idx}, profile {p:?})",
                            counts[depth]
                        ))
                    })?;
                    cell = &arr[a];
                    path.push_str(&format!("[{a}]"));
                }
                let u = cell.as_f64().ok_or_else(|| {
                    Error::Shape(format!("{path}: payoff missing or not a number (profile index {idx})"))
                })?;
                flat.push(u);
                next_profile(&mut p, &counts);
            }
        }
        FiniteGame::new(counts, flat)?.with_labels(labels)
    }

    pub fn to_json(&self) -> Value {
        let counts = self.action_counts();
        let actions: Vec<Vec<String>> = (0..counts.len())
            .map(|k| (0..counts[k]).map(|a| self.action_label(k, a)).collect())
            .collect();
        let payoffs: Vec<Value> = (0..counts.len())
            .map(|k| nest(counts, 0, 0, &|idx| self.payoff_at(k, idx)))
            .collect();
        json!({
            "players": counts.len(),
            "actions": actions,
            "payoffs": payoffs,
        })
    }
}

fn nest(counts: &[usize], depth: usize, offset: usize, cell: &dyn Fn(usize) -> f64) -> Value {
    if depth == counts.len() {
        return json!(cell(offset));
    }
    let stride: usize = counts[depth + 1..].iter().product();
    Value::Array(
        (0..counts[depth])
            .map(|a| nest(counts, depth + 1, offset + a * stride, cell))
            .collect(),
    )
}
