//! wasm-bindgen exports for the static page in `www/`. Every export returns a
//! JSON string: the result, or `{"error": "..."}`.

use serde_json::{json, Value};
use setmap_core::bits::KSubsets;
use setmap_core::bounds::crossover;
use setmap_core::freeset::{location_profile, max_free_set_of};
use setmap_core::ramsey::{arrow_holds, ArrowOutcome};
use setmap_core::random::{random_family, rng_from_seed};
use setmap_core::setmap::{generate, Carrier};
use setmap_core::ElemSet;
use wasm_bindgen::prelude::wasm_bindgen;

fn respond(r: Result<Value, String>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

fn parse_list<T: std::str::FromStr>(text: &str) -> Result<Vec<T>, String> {
    text.split(',')
        .map(|t| t.trim().parse().map_err(|_| format!("cannot read {t:?} as a number")))
        .collect()
}

/// Decides `n → (targets)^k`; a failing relation comes with its coloring.
#[wasm_bindgen]
pub fn arrow_search(n: usize, k: usize, targets: &str, budget: u32) -> String {
    respond((|| {
        let targets: Vec<usize> = parse_list(targets)?;
        let outcome = arrow_holds(n, k, &targets, u64::from(budget).max(1)).map_err(|e| e.to_string())?;
        Ok(match outcome {
            ArrowOutcome::Holds { nodes } => json!({ "verdict": "holds", "nodes": nodes }),
            ArrowOutcome::Fails { witness, nodes } => json!({ "verdict": "fails", "nodes": nodes, "witness": witness }),
            ArrowOutcome::Infeasible { nodes } => json!({ "verdict": "infeasible", "nodes": nodes }),
        })
    })())
}

/// Samples a family on `m` points, generates its `k`-ary set mapping and
/// finds a maximum free set.
#[wasm_bindgen]
pub fn free_set(m: usize, k: usize, ranges: &str, with_max: bool, seed: u32, budget: u32) -> String {
    respond((|| {
        let ranges: Vec<u32> = if ranges.trim().is_empty() { Vec::new() } else { parse_list(ranges)? };
        if ranges.contains(&0) {
            return Err("ranges must be positive".into());
        }
        if ranges.is_empty() && !with_max {
            return Err("the family is empty".into());
        }
        let carrier = Carrier::new(m).map_err(|e| e.to_string())?;
        let gamma = random_family(&mut rng_from_seed(u64::from(seed)), carrier, &ranges, with_max);
        let f = generate(&gamma, k).map_err(|e| e.to_string())?;
        let r = max_free_set_of(&f, u64::from(budget).max(1)).map_err(|e| e.to_string())?;
        let largest = f.iter().map(|(_, img)| img.len()).max().unwrap_or(0);
        let sample: Vec<Value> = KSubsets::of(r.witness.union(first_outside(r.witness, m)), k)
            .take(12)
            .map(|t| json!({ "tuple": t, "image": f.image(t) }))
            .collect();
        Ok(json!({
            "carrier": m,
            "k": k,
            "tuples": f.iter().count(),
            "largest_image": largest,
            "free": r,
            "profile": location_profile(&f).ok(),
            "sample": sample,
        }))
    })())
}

/// The witness plus the least point outside it, so the sampled tuples show
/// an image that meets the witness.
fn first_outside(h: ElemSet, m: usize) -> ElemSet {
    ElemSet::full(m).difference(h).min().map_or(ElemSet::EMPTY, ElemSet::singleton)
}

/// `Tower_n(7)` against both readings of the `s_n` upper bound.
#[wasm_bindgen]
pub fn crossover_table(max_n: u32) -> String {
    respond((|| {
        let c = crossover(u64::from(max_n)).map_err(|e| e.to_string())?;
        let rows: Vec<Value> = c
            .rows
            .iter()
            .map(|r| {
                json!({
                    "n": r.n,
                    "t_lower": r.t_lower.to_string(),
                    "s_literal": r.s_literal.to_string(),
                    "s_erdos_rado": r.s_erdos_rado.to_string(),
                    "vs_literal": r.vs_literal,
                    "vs_erdos_rado": r.vs_erdos_rado,
                })
            })
            .collect();
        Ok(json!({ "rows": rows, "first_literal": c.first_literal, "first_erdos_rado": c.first_erdos_rado }))
    })())
}
