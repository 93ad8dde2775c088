//! Configuration, loading, seeded batch execution and result export.

mod io;
mod run;

pub use io::{game_from_value, load_game, parse_game, save_game, scenario, LoadedGame, SCENARIOS};
pub use run::{batch, learning_trace, resolve_game, run, seeded_configs, ResultRecord, RunConfig, RunError, Task};

use serde_json::{Number, Value};

/// Print `x` rounded to 12 significant digits, in the shortest form that
/// reads back to the rounded value (`1/3` prints as `0.333333333333`).
pub fn format_float(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    if rounded == 0.0 {
        "0".to_string()
    } else {
        rounded.to_string()
    }
}

/// SplitMix64 output function.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of run `index` under master seed `master`:
/// `splitmix64(master + index * 0x9E3779B97F4A7C15)`. Independent of how
/// many runs there are or the order in which they execute.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(master.wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

/// JSON number, or the strings `"inf"`, `"-inf"`, `"nan"` for values JSON
/// cannot hold.
pub fn number_json(x: f64) -> Value {
    Number::from_f64(x).map_or_else(|| Value::String(format_float(x)), Value::Number)
}

/// Canonical form of a JSON value: numbers rounded to 12 significant
/// digits, integral ones written without a fraction. Object keys are
/// already sorted by `serde_json`.
pub fn canonicalize(v: &Value) -> Value {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => {
                let r: f64 = format_float(x).parse().unwrap_or(x);
                if r.fract() == 0.0 && r.abs() < 1e15 {
                    Value::from(r as i64)
                } else {
                    number_json(r)
                }
            }
            _ => v.clone(),
        },
        Value::Array(a) => Value::Array(a.iter().map(canonicalize).collect()),
        Value::Object(o) => Value::Object(o.iter().map(|(k, x)| (k.clone(), canonicalize(x))).collect()),
        other => other.clone(),
    }
}

/// Pretty-printed canonical JSON.
pub fn to_canonical_string(v: &Value) -> String {
    serde_json::to_string_pretty(&canonicalize(v)).expect("JSON values serialize")
}
