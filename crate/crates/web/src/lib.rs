//! Browser bindings for the demo page in `www/`.
//!
//! Each export takes plain arguments and returns a JSON string, so the page
//! needs no generated type glue beyond `wasm-bindgen`'s string passing.
//! Big integers are emitted as exact JSON numbers; the page reads them as
//! strings where precision matters.

use num_bigint::BigUint;
use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

use chipfire::formulas::{a_seq, fire_profile};
use chipfire::numerics::stable_config;
use chipfire::schizo::{block_report, dump_json, inv_sqrt_digits, sqrt_digits};
use chipfire::sequences::{generate, SequenceId, SequenceKind};
use chipfire::{Nat, TreeParams};

/// Keeps a click from freezing the tab.
const MAX_TERMS: usize = 2_000;
const MAX_PRECISION: usize = 5_000;
const MAX_CHIP_DIGITS: usize = 2_000;

fn tree(k: u32) -> Result<TreeParams, String> {
    TreeParams::new(u64::from(k)).map_err(|e| e.to_string())
}

fn num(x: &Nat) -> Value {
    Value::Number(x.to_string().parse().expect("decimal integer"))
}

/// Stable configuration and per-layer fire counts for `chips` (decimal) at
/// the root of the k-ary tree.
#[wasm_bindgen]
pub fn explore(chips: &str, k: u32) -> Result<String, String> {
    let chips = chips.trim();
    if chips.len() > MAX_CHIP_DIGITS {
        return Err(format!("at most {MAX_CHIP_DIGITS} digits"));
    }
    let n: BigUint = chips
        .parse()
        .map_err(|_| format!("`{chips}` is not a nonnegative integer"))?;
    let t = tree(k)?;
    let config = stable_config(&n, t).map_err(|e| e.to_string())?;
    let profile = fire_profile(&n, t);
    Ok(json!({
        "N": num(&n),
        "k": k,
        "height": config.height,
        "layers": config.chips,
        "fires": profile.fires.iter().map(num).collect::<Vec<_>>(),
        "f0": num(&profile.root()),
        "F": num(&profile.total),
    })
    .to_string())
}

/// `count` terms of a named sequence starting at index 1, as
/// `{"id", "k", "values": [..]}`.
#[wasm_bindgen]
pub fn sequence(id: &str, k: u32, count: usize) -> Result<String, String> {
    if !(1..=MAX_TERMS).contains(&count) {
        return Err(format!("count must be in 1..={MAX_TERMS}"));
    }
    let kind: SequenceKind = id.parse().map_err(|e: chipfire::Error| e.to_string())?;
    let window = generate(SequenceId::new(kind, tree(k)?), 1, count).map_err(|e| e.to_string())?;
    Ok(json!({
        "id": kind.name(),
        "k": k,
        "values": window.values.iter().map(num).collect::<Vec<_>>(),
    })
    .to_string())
}

/// Names accepted by [`sequence`], as a JSON array.
#[wasm_bindgen]
pub fn sequence_ids() -> String {
    json!(SequenceKind::NAMES).to_string()
}

/// Decimal digits of `sqrt(a(n))` or `1/sqrt(a(n))` with the runs of at
/// least `min_run` equal digits after the point.
#[wasm_bindgen]
pub fn digits(
    k: u32,
    n: usize,
    precision: usize,
    inverse: bool,
    min_run: usize,
) -> Result<String, String> {
    if !(1..=MAX_TERMS).contains(&n) {
        return Err(format!("n must be in 1..={MAX_TERMS}"));
    }
    if precision > MAX_PRECISION {
        return Err(format!("at most {MAX_PRECISION} digits"));
    }
    let value = a_seq(n, tree(k)?);
    let dump = if inverse {
        inv_sqrt_digits(&value, precision)
    } else {
        sqrt_digits(&value, precision)
    }
    .map_err(|e| e.to_string())?;
    let report = block_report(&dump, min_run).map_err(|e| e.to_string())?;
    let mut out = dump_json(&dump, &report);
    out["a"] = num(&value);
    Ok(out.to_string())
}
