//! Named end-to-end scenarios. Each is a pure function of the seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use super::{to_value, CliError};
use crate::approximation::{check_approximation, FiniteModelPair, Verdict};
use crate::bits::bs;
use crate::cohen::{decode_blocks, decode_lambda, encode_blocks, encode_lambda, LambdaSplitCoded, ManyCondition};
use crate::dictionary::{Dictionary, DictionaryMany};
use crate::experiments::{split_pushforward, term_transfer_trial};
use crate::iteration::{random_stages, run_pipeline, DictionaryRule};
use crate::order::{verify_projection, verify_projection_on, FinitePoset, Projection, VerifyBounds};
use crate::projections::{ManyProjection, OneProjection};
use crate::sampling::OneDense;
use crate::term::{catalog, cohen_to_term, default_labeler, equiv, term_to_cohen, Antichain, TermCondition};

pub const DEMOS: [&str; 8] = [
    "codec",
    "split",
    "pushforward",
    "many",
    "term",
    "transfer",
    "iteration",
    "approximation",
];

type Demo = Result<(Value, bool), CliError>;

pub fn run_demo(name: &str, seed: u64, budget: usize) -> Demo {
    if name == "all" {
        let mut out = Map::new();
        let mut failed = false;
        for demo in DEMOS {
            let (v, f) = run_demo(demo, seed, budget)?;
            failed |= f;
            out.insert(demo.to_string(), v);
        }
        return Ok((Value::Object(out), failed));
    }
    match name {
        "codec" => codec(),
        "split" => split(seed, budget),
        "pushforward" => pushforward(seed, budget),
        "many" => many(seed, budget),
        "term" => term(),
        "transfer" => transfer(seed, budget),
        "iteration" => iteration(seed, budget),
        "approximation" => approximation(seed),
        _ => Err(CliError::input(format!(
            "unknown demo {name:?}; expected one of {} or all",
            DEMOS.join(", ")
        ))),
    }
}

fn codec() -> Demo {
    let blocks = vec![bs("0"), bs("1"), bs("01")];
    let coded = encode_blocks(&blocks, 64)?;
    let back = decode_blocks(&coded);
    let slices = vec![
        ManyCondition::from_entries([(0, bs("1"))]),
        ManyCondition::from_entries([(1, bs("01"))]),
    ];
    let lambda = encode_lambda(&slices, &LambdaSplitCoded::empty(), 64)?;
    let lambda_back = decode_lambda(&lambda);
    let failed = back != blocks || lambda_back != slices;
    Ok((
        json!({
            "blocks": to_value(&blocks),
            "coded": to_value(&coded),
            "decoded": to_value(&back),
            "slices": to_value(&slices),
            "lambda_coded": to_value(&lambda),
            "lambda_decoded": to_value(&lambda_back),
        }),
        failed,
    ))
}

fn split(seed: u64, budget: usize) -> Demo {
    let mut rows = Vec::new();
    let mut failed = false;
    for d in Dictionary::builtins(seed) {
        let map = OneProjection::new(d.clone(), 64, 64);
        let report = verify_projection(&map, &VerifyBounds { budget, ..VerifyBounds::new(7, 3) })?;
        failed |= !report.holds();
        rows.push(json!({
            "dictionary": d.name(),
            "domain_checked": report.domain_checked,
            "lifts_checked": report.lifts_checked,
            "violations": report.violations.len(),
        }));
    }
    Ok((json!({ "projections": rows }), failed))
}

fn pushforward(seed: u64, budget: usize) -> Demo {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let mut failed = false;
    for d in Dictionary::builtins(seed) {
        let family = OneDense::random_family(&mut rng, 15);
        let trial = split_pushforward(&d, 32, &family, budget)?;
        failed |= !trial.all_met();
        rows.push(json!({
            "dictionary": d.name(),
            "dense": family.iter().map(OneDense::label).collect::<Vec<_>>(),
            "trial": to_value(&trial),
        }));
    }
    Ok((json!({ "trials": rows }), failed))
}

fn many(seed: u64, budget: usize) -> Demo {
    let mut rows = Vec::new();
    let mut failed = false;
    for name in ["identity", "bitflip", "scrambled"] {
        let d = DictionaryMany::builtin(name, seed, 2)?;
        let map = ManyProjection::new(d.clone(), 2, 64, 64);
        let sample = map.domain().enumerate_coordinate_bounded(3);
        let bounds = VerifyBounds { budget, ..VerifyBounds::new(usize::MAX, 2) };
        let report = verify_projection_on(&map, &sample, &bounds)?;
        failed |= !report.holds();
        rows.push(json!({
            "dictionary": d.name(),
            "domain_checked": report.domain_checked,
            "lifts_checked": report.lifts_checked,
            "violations": report.violations.len(),
        }));
    }
    Ok((json!({ "lambda": 2, "projections": rows }), failed))
}

fn term() -> Demo {
    let poset = FinitePoset::flat(2)?;
    let labeler = default_labeler(&poset);
    let ab = Antichain::from_indices([1, 2]);
    let top = Antichain::singleton(poset.top_index());
    let q = TermCondition(vec![ab, top, Antichain::singleton(1)]);
    let image = term_to_cohen(&labeler, &q);
    let back = cohen_to_term(&poset, &bs("011100"))?;
    Ok((
        json!({
            "poset": to_value(&poset.to_spec()),
            "equiv_ab_top": equiv(&poset, ab, top),
            "equiv_ab_a": equiv(&poset, ab, Antichain::singleton(1)),
            "term": to_value(&q),
            "to_cohen": to_value(&image),
            "from_cohen_011100": to_value(&back),
        }),
        false,
    ))
}

fn transfer(seed: u64, budget: usize) -> Demo {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let mut failed = false;
    for poset in catalog(3) {
        let family = OneDense::random_family(&mut rng, 6);
        let trial = term_transfer_trial(&poset, &family, 16, budget)?;
        failed |= !trial.all_good();
        rows.push(json!({
            "poset": to_value(&poset.to_spec()),
            "trial": to_value(&trial),
        }));
    }
    Ok((json!({ "posets": rows }), failed))
}

fn iteration(seed: u64, budget: usize) -> Demo {
    let stages = random_stages(seed, 3, 2, 40, 10, DictionaryRule::SeededHash { seed });
    let run = run_pipeline(&stages, budget)?;
    let failed = run.trace.iter().any(|t| t.dense_met != t.dense_total);
    Ok((json!({ "stages": to_value(&stages), "trace": to_value(&run.trace) }), failed))
}

fn approximation(seed: u64) -> Demo {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = vec![FiniteModelPair::triangle(2), FiniteModelPair::triangle(3)];
    cases.extend((0..3).map(|_| FiniteModelPair::random(&mut rng, 4)));
    let rows: Vec<Value> = cases
        .iter()
        .map(|m| json!({ "pair": m.to_json(), "verdict": to_value(&check_approximation(m)) }))
        .collect();
    let triangle_found = check_approximation(&cases[0]) != Verdict::Holds;
    Ok((json!({ "cases": rows }), !triangle_found))
}
