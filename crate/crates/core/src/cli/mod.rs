//! Command-line front end. Every subcommand prints one JSON document.
//!
//! Exit status: 0 on success, 1 when a check finds a violation or
//! counterexample, 2 on bad input (with `{"error": {...}}` as the document).

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::approximation::{check_approximation, FiniteModelPair, Verdict};
use crate::bits::BinSeq;
use crate::cohen::{
    decode_blocks, decode_lambda, densify, densify_lambda, encode_blocks, encode_lambda,
    LambdaSplitCoded, ManyCondition, SplitCoded,
};
use crate::dictionary::{Dictionary, DictionaryMany, DictionarySpec};
use crate::error::Error;
use crate::iteration::{random_stages, run_pipeline, DictionaryRule, StageSpec};
use crate::order::{
    build_generic, descend, pushforward, verify_projection, verify_projection_on, Filter,
    FinitePoset, FinitePosetSpec, Poset, Projection, VerifyBounds, DEFAULT_BUDGET,
};
use crate::projections::{lift_many, lift_one, project_many, project_one, ManyProjection, OneProjection};
use crate::sampling::OneDense;
use crate::term::{
    atom_coverage, catalog, cohen_to_term, default_labeler, equiv, eval_name, lift_term,
    term_leq, term_to_cohen, Antichain, CohenToTerm, TermCondition, TermToCohen,
};

mod demo;

pub use demo::{run_demo, DEMOS};

/// Environment variable holding the default enumeration budget.
pub const BUDGET_ENV: &str = "COHEN_LAB_BUDGET";

#[derive(Debug, Parser)]
#[command(name = "cohen-lab", version, about = "Desk-scale Cohen forcing laboratory")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Seed for every randomized choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Truncation or enumeration bound (meaning depends on the subcommand).
    #[arg(long, global = true)]
    pub bound: Option<usize>,

    /// Inline input: a binary string or a JSON document.
    #[arg(long = "in", global = true)]
    pub input: Option<String>,

    /// Read the input from a file instead.
    #[arg(long, global = true)]
    pub file: Option<PathBuf>,

    /// Write the output document to a file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Split-point codecs.
    Codec {
        #[arg(value_enum)]
        op: CodecOp,
    },
    /// Apply a projection map.
    Project(MapArgs),
    /// Canonical lifting witness for a projection map.
    Lift(MapArgs),
    /// Check the projection axioms exhaustively.
    Verify {
        /// identity-split, bitflip-split, scrambled-split, swap01-split,
        /// identity-many, bitflip-many, scrambled-many, term-to-cohen or cohen-to-term.
        #[arg(long)]
        projection: String,
        #[arg(long)]
        lift_depth: Option<usize>,
        #[arg(long, default_value_t = 2)]
        lambda: u32,
    },
    /// Build a generic filter for a family of dense sets on the Cohen poset.
    Generic {
        /// Number of random dense sets when no family is given.
        #[arg(long, default_value_t = 15)]
        count: usize,
    },
    /// Push the filter generated by a condition forward along a projection.
    Push {
        #[arg(long, default_value = "identity-split")]
        projection: String,
        #[arg(long, default_value_t = 2)]
        lambda: u32,
    },
    /// Term forcing operations.
    Term {
        #[arg(value_enum)]
        op: TermOp,
    },
    /// Run a staged iteration pipeline.
    Assemble {
        #[arg(long, default_value_t = 3)]
        stages: usize,
        #[arg(long, default_value_t = 10)]
        dense: usize,
        #[arg(long, default_value_t = 2)]
        lambda: u32,
    },
    /// Check the approximation property of a pair of set families.
    Approx,
    /// Named end-to-end scenarios, or `all`.
    Demo { name: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CodecOp {
    Decode,
    Encode,
    Densify,
    DecodeLambda,
    EncodeLambda,
    DensifyLambda,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TermOp {
    Coverage,
    Equiv,
    Leq,
    ToCohen,
    Lift,
    FromCohen,
    Eval,
    Catalog,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MapKind {
    One,
    Many,
    TermToCohen,
    CohenToTerm,
}

#[derive(Debug, clap::Args)]
pub struct MapArgs {
    #[arg(long, value_enum, default_value = "one")]
    pub map: MapKind,
    /// identity, bitflip, scrambled or swap01.
    #[arg(long, default_value = "identity")]
    pub dict: String,
    /// Dictionary JSON (`{"pairs": ...}` or `{"builtin": ...}`), overriding `--dict`.
    #[arg(long)]
    pub dict_file: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    pub lambda: u32,
}

/// A diagnostic for bad input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CliError {
    pub kind: String,
    pub message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        CliError {
            kind: "invalid_input".into(),
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let kind = match &e {
            Error::BoundExceeded { .. } => "bound_exceeded",
            Error::NotDense { .. } => "not_dense",
            Error::MalformedCondition(_) => "malformed_condition",
            Error::EmptyBlock { .. } => "empty_block",
            Error::NotBelow => "not_below",
            Error::LengthNotMultiple { .. } => "length_not_multiple",
            Error::InvalidDictionary(_) => "invalid_dictionary",
            Error::InvalidPoset(_) => "invalid_poset",
            Error::NotAFilter(_) => "not_a_filter",
            Error::StageFailure { .. } => "stage_failure",
            Error::InvalidInput(_) => "invalid_input",
        };
        CliError {
            kind: kind.into(),
            message: e.to_string(),
        }
    }
}

/// The result of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub document: Value,
    /// Where the document goes; standard output when `None`.
    pub out: Option<PathBuf>,
}

impl Outcome {
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.document).expect("values serialize");
        s.push('\n');
        s
    }
}

type Run = Result<(Value, bool), CliError>;

fn ok(v: Value) -> Run {
    Ok((v, false))
}

pub fn budget() -> usize {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

/// Parse the arguments and run. Help and version requests come back as
/// `Err` with the text clap would print.
pub fn run_args<I, T>(args: I) -> Result<Outcome, String>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => Ok(run(&cli)),
        Err(e) => match e.kind() {
            clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Err(e.to_string()),
            _ => Ok(Outcome {
                code: 2,
                document: json!({"error": CliError { kind: "usage".into(), message: e.to_string() }}),
                out: None,
            }),
        },
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let (code, document) = match dispatch(cli) {
        Ok((document, failed)) => (i32::from(failed), document),
        Err(e) => (2, json!({ "error": e })),
    };
    Outcome {
        code,
        document,
        out: cli.out.clone(),
    }
}

fn input_text(cli: &Cli) -> Result<Option<String>, CliError> {
    match (&cli.input, &cli.file) {
        (Some(_), Some(_)) => Err(CliError::input("give either --in or --file, not both")),
        (Some(s), None) => Ok(Some(s.clone())),
        (None, Some(path)) => fs::read_to_string(path)
            .map(Some)
            .map_err(|e| CliError::input(format!("reading {}: {e}", path.display()))),
        (None, None) => Ok(None),
    }
}

fn require_input(cli: &Cli) -> Result<String, CliError> {
    input_text(cli)?.ok_or_else(|| CliError::input("this subcommand needs --in or --file"))
}

/// JSON, or failing that the trimmed text as a JSON string (so bare binary
/// strings work).
fn parse<T: DeserializeOwned>(text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).or_else(|first| {
        let structured = text.trim_start().starts_with(['{', '[', '"']);
        serde_json::from_value(Value::String(text.trim().to_string())).map_err(|second| {
            let e = if structured { first.to_string() } else { second.to_string() };
            CliError::input(format!("cannot parse input: {e}"))
        })
    })
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("plain data serializes")
}

fn dictionary(args: &MapArgs, seed: u64) -> Result<Dictionary, CliError> {
    match &args.dict_file {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::input(format!("reading {}: {e}", path.display())))?;
            let spec: DictionarySpec =
                serde_json::from_str(&text).map_err(|e| CliError::input(format!("dictionary: {e}")))?;
            Ok(Dictionary::from_spec(&spec)?)
        }
        None => Ok(Dictionary::builtin(&args.dict, seed)?),
    }
}

fn dispatch(cli: &Cli) -> Run {
    match &cli.command {
        Command::Codec { op } => codec(cli, *op),
        Command::Project(args) => project(cli, args),
        Command::Lift(args) => lift(cli, args),
        Command::Verify {
            projection,
            lift_depth,
            lambda,
        } => verify(cli, projection, *lift_depth, *lambda),
        Command::Generic { count } => generic(cli, *count),
        Command::Push { projection, lambda } => push(cli, projection, *lambda),
        Command::Term { op } => term(cli, *op),
        Command::Assemble { stages, dense, lambda } => assemble(cli, *stages, *dense, *lambda),
        Command::Approx => approx(cli),
        Command::Demo { name } => run_demo(name, cli.seed, budget()),
    }
}

fn max_len(cli: &Cli, default: usize) -> Result<usize, CliError> {
    let n = cli.bound.unwrap_or(default);
    if n == 0 || n > BinSeq::CAPACITY + 1 {
        return Err(CliError::input(format!("bound must be between 1 and {}", BinSeq::CAPACITY + 1)));
    }
    Ok(n)
}

#[derive(Deserialize)]
struct EncodeLambdaInput {
    slices: Vec<ManyCondition>,
    #[serde(default)]
    base: ManyCondition,
}

fn codec(cli: &Cli, op: CodecOp) -> Run {
    let text = require_input(cli)?;
    let n = max_len(cli, BinSeq::CAPACITY + 1)?;
    match op {
        CodecOp::Decode => {
            let p = SplitCoded::new(parse(&text)?)?;
            ok(json!({ "blocks": to_value(&decode_blocks(&p)) }))
        }
        CodecOp::Encode => {
            let blocks: Vec<BinSeq> = parse(&text)?;
            ok(json!({ "coded": to_value(&encode_blocks(&blocks, n)?) }))
        }
        CodecOp::Densify => {
            let p: BinSeq = parse(&text)?;
            ok(json!({ "coded": to_value(&densify(&p, n)?) }))
        }
        CodecOp::DecodeLambda => {
            let p = LambdaSplitCoded::new(parse(&text)?)?;
            ok(json!({ "slices": to_value(&decode_lambda(&p)) }))
        }
        CodecOp::EncodeLambda => {
            let input: EncodeLambdaInput = parse(&text)?;
            let base = LambdaSplitCoded::new(input.base)?;
            ok(json!({ "coded": to_value(&encode_lambda(&input.slices, &base, n)?) }))
        }
        CodecOp::DensifyLambda => {
            let p: ManyCondition = parse(&text)?;
            ok(json!({ "coded": to_value(&densify_lambda(&p, n)?) }))
        }
    }
}

#[derive(Deserialize)]
struct TermInput {
    #[serde(default)]
    poset: Option<FinitePosetSpec>,
    #[serde(default)]
    a: Option<Antichain>,
    #[serde(default)]
    b: Option<Antichain>,
    #[serde(default)]
    p: Option<Value>,
    #[serde(default)]
    q: Option<Value>,
    #[serde(default)]
    atom: Option<usize>,
}

impl TermInput {
    fn poset(&self) -> Result<FinitePoset, CliError> {
        match &self.poset {
            Some(spec) => Ok(FinitePoset::from_spec(spec)?),
            None => Ok(FinitePoset::flat(2)?),
        }
    }

    fn field<T: DeserializeOwned>(v: &Option<Value>, name: &str) -> Result<T, CliError> {
        let v = v.as_ref().ok_or_else(|| CliError::input(format!("missing field {name:?}")))?;
        serde_json::from_value(v.clone()).map_err(|e| CliError::input(format!("field {name:?}: {e}")))
    }

    fn antichain(poset: &FinitePoset, a: Option<Antichain>, name: &str) -> Result<Antichain, CliError> {
        let a = a.ok_or_else(|| CliError::input(format!("missing field {name:?}")))?;
        check_antichain(poset, a)?;
        Ok(a)
    }
}

fn check_antichain(poset: &FinitePoset, a: Antichain) -> Result<(), CliError> {
    if a.0 >> poset.size() != 0 || !poset.is_antichain(a.0) {
        return Err(CliError::input(format!("{a:?} is not an antichain of the poset")));
    }
    Ok(())
}

fn check_term(poset: &FinitePoset, q: &TermCondition) -> Result<(), CliError> {
    q.0.iter().try_for_each(|&a| check_antichain(poset, a))
}

fn map_pair(cli: &Cli, args: &MapArgs, text: &str, lifting: bool) -> Run {
    match args.map {
        MapKind::One => {
            let d = dictionary(args, cli.seed)?;
            if lifting {
                let input: Value = parse(text)?;
                let p: BinSeq = TermInput::field(&input.get("p").cloned(), "p")?;
                let q: BinSeq = TermInput::field(&input.get("q").cloned(), "q")?;
                let lifted = lift_one(&d, &SplitCoded::new(p)?, &q, max_len(cli, BinSeq::CAPACITY + 1)?)?;
                let image = project_one(&d, &lifted)?;
                ok(json!({ "lifted": to_value(&lifted), "image": to_value(&image) }))
            } else {
                let p = SplitCoded::new(parse(text)?)?;
                ok(json!({ "image": to_value(&project_one(&d, &p)?) }))
            }
        }
        MapKind::Many => {
            let d = match args.dict.as_str() {
                "identity" | "bitflip" | "scrambled" => DictionaryMany::builtin(&args.dict, cli.seed, args.lambda)?,
                _ => DictionaryMany::Coordinatewise(dictionary(args, cli.seed)?),
            };
            if lifting {
                let input: Value = parse(text)?;
                let p: ManyCondition = TermInput::field(&input.get("p").cloned(), "p")?;
                let q: ManyCondition = TermInput::field(&input.get("q").cloned(), "q")?;
                let lifted = lift_many(&d, &LambdaSplitCoded::new(p)?, &q, max_len(cli, BinSeq::CAPACITY + 1)?)?;
                let image = project_many(&d, &lifted)?;
                ok(json!({ "lifted": to_value(&lifted), "image": to_value(&image) }))
            } else {
                let p = LambdaSplitCoded::new(parse(text)?)?;
                ok(json!({ "image": to_value(&project_many(&d, &p)?) }))
            }
        }
        MapKind::TermToCohen => {
            let input: TermInput = parse(text)?;
            let poset = input.poset()?;
            let labeler = default_labeler(&poset);
            let p: TermCondition = TermInput::field(&input.p, "p")?;
            check_term(&poset, &p)?;
            if lifting {
                let q: BinSeq = TermInput::field(&input.q, "q")?;
                let lifted = lift_term(&labeler, &p, &q)?;
                let image = term_to_cohen(&labeler, &lifted);
                ok(json!({ "lifted": to_value(&lifted), "image": to_value(&image) }))
            } else {
                ok(json!({ "image": to_value(&term_to_cohen(&labeler, &p)) }))
            }
        }
        MapKind::CohenToTerm => {
            let input: TermInput = parse(text)?;
            let poset = input.poset()?;
            let p: BinSeq = TermInput::field(&input.p, "p")?;
            if lifting {
                let q: TermCondition = TermInput::field(&input.q, "q")?;
                check_term(&poset, &q)?;
                let blocks = (p.len() / poset.size()).max(q.len());
                let map = CohenToTerm::new(poset.clone(), blocks, 0);
                let lifted = map.lift(&p, &q).expect("canonical lift")?;
                let image = cohen_to_term(&poset, &lifted)?;
                ok(json!({ "lifted": to_value(&lifted), "image": to_value(&image) }))
            } else {
                ok(json!({ "image": to_value(&cohen_to_term(&poset, &p)?) }))
            }
        }
    }
}

fn project(cli: &Cli, args: &MapArgs) -> Run {
    map_pair(cli, args, &require_input(cli)?, false)
}

fn lift(cli: &Cli, args: &MapArgs) -> Run {
    map_pair(cli, args, &require_input(cli)?, true)
}

enum Choice {
    Split(Dictionary),
    Many(DictionaryMany),
    TermToCohen,
    CohenToTerm,
}

fn choose(name: &str, seed: u64, lambda: u32) -> Result<Choice, CliError> {
    if name == "term-to-cohen" {
        return Ok(Choice::TermToCohen);
    }
    if name == "cohen-to-term" {
        return Ok(Choice::CohenToTerm);
    }
    let unknown = || CliError::input(format!("unknown projection {name:?}"));
    let (dict, kind) = name.rsplit_once('-').ok_or_else(unknown)?;
    match kind {
        "split" => Ok(Choice::Split(Dictionary::builtin(dict, seed).map_err(|_| unknown())?)),
        "many" => Ok(Choice::Many(DictionaryMany::builtin(dict, seed, lambda).map_err(|_| unknown())?)),
        _ => Err(unknown()),
    }
}

fn report_value<M: Projection>(map: &M, bounds: &VerifyBounds, sample: Option<Vec<<M::Domain as Poset>::Cond>>) -> Result<(Value, bool), CliError> {
    let report = match sample {
        Some(s) => verify_projection_on(map, &s, bounds)?,
        None => verify_projection(map, bounds)?,
    };
    let failed = !report.holds();
    Ok((to_value(&report), failed))
}

fn verify(cli: &Cli, projection: &str, lift_depth: Option<usize>, lambda: u32) -> Run {
    let budget = budget();
    let (mut doc, failed) = match choose(projection, cli.seed, lambda)? {
        Choice::Split(d) => {
            let bound = cli.bound.unwrap_or(9);
            let map = OneProjection::new(d, BinSeq::CAPACITY + 1, BinSeq::CAPACITY + 1);
            let bounds = VerifyBounds {
                budget,
                ..VerifyBounds::new(bound, lift_depth.unwrap_or(4))
            };
            report_value(&map, &bounds, None)?
        }
        Choice::Many(d) => {
            let bound = cli.bound.unwrap_or(5);
            let map = ManyProjection::new(d, lambda, BinSeq::CAPACITY + 1, BinSeq::CAPACITY + 1);
            let sample = map.domain().enumerate_coordinate_bounded(bound);
            let bounds = VerifyBounds {
                budget,
                ..VerifyBounds::new(usize::MAX, lift_depth.unwrap_or(2))
            };
            report_value(&map, &bounds, Some(sample))?
        }
        Choice::TermToCohen | Choice::CohenToTerm => {
            let posets = match input_text(cli)? {
                Some(text) => vec![FinitePoset::from_spec(&parse::<FinitePosetSpec>(&text)?)?],
                None => catalog(3),
            };
            let to_cohen = matches!(choose(projection, 0, 1)?, Choice::TermToCohen);
            let bound = cli.bound.unwrap_or(if to_cohen { 3 } else { 2 });
            let mut reports = Vec::new();
            let mut any_failed = false;
            for poset in posets {
                let spec = to_value(&poset.to_spec());
                let (report, failed) = if to_cohen {
                    let map = TermToCohen::new(poset.clone(), default_labeler(&poset), bound + lift_depth.unwrap_or(2) + 1);
                    let bounds = VerifyBounds { budget, ..VerifyBounds::new(bound, lift_depth.unwrap_or(2)) };
                    report_value(&map, &bounds, None)?
                } else {
                    let depth = lift_depth.unwrap_or(1);
                    let map = CohenToTerm::new(poset.clone(), bound, depth);
                    let bounds = VerifyBounds { budget, ..VerifyBounds::new(bound * poset.size(), depth) };
                    report_value(&map, &bounds, None)?
                };
                any_failed |= failed;
                reports.push(json!({ "poset": spec, "report": report }));
            }
            let violations: Vec<Value> = reports
                .iter()
                .flat_map(|r| r["report"]["violations"].as_array().cloned().unwrap_or_default())
                .collect();
            (json!({ "posets": reports.len(), "violations": violations }), any_failed)
        }
    };
    doc["projection"] = json!(projection);
    Ok((doc, failed))
}

fn dense_family(cli: &Cli, count: usize) -> Result<Vec<OneDense>, CliError> {
    match input_text(cli)? {
        Some(text) => parse(&text),
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            Ok(OneDense::random_family(&mut rng, count))
        }
    }
}

fn generic(cli: &Cli, count: usize) -> Run {
    let family = dense_family(cli, count)?;
    let n = max_len(cli, 32)?;
    let poset = crate::cohen::CohenOne::new(n);
    let sets: Vec<_> = family.iter().map(OneDense::dense_set).collect();
    let chain = descend(&poset, &sets, &BinSeq::empty(), budget())?;
    let g = build_generic(&poset, &sets, &BinSeq::empty(), budget())?;
    let met: Vec<bool> = sets.iter().map(|d| g.meets(d)).collect();
    let failed = met.iter().any(|m| !m);
    Ok((
        json!({
            "dense": to_value(&family),
            "chain": to_value(&chain),
            "generic": to_value(chain.last().expect("nonempty")),
            "filter_size": g.len(),
            "met": met,
        }),
        failed,
    ))
}

fn push(cli: &Cli, projection: &str, lambda: u32) -> Run {
    let text = require_input(cli)?;
    let n = BinSeq::CAPACITY + 1;
    match choose(projection, cli.seed, lambda)? {
        Choice::Split(d) => {
            let map = OneProjection::new(d, n, n);
            let p: BinSeq = parse(&text)?;
            let g = Filter::principal(map.domain(), &SplitCoded::new(p)?.seq());
            let h = pushforward(&map, &g)?;
            ok(json!({ "filter": to_value(&h), "least": to_value(&h.least(map.codomain())) }))
        }
        Choice::Many(d) => {
            let map = ManyProjection::new(d, lambda, n, n);
            let p = LambdaSplitCoded::new(parse(&text)?)?.into_condition();
            let g = Filter::principal(map.domain(), &p);
            let h = pushforward(&map, &g)?;
            ok(json!({ "filter": to_value(&h), "least": to_value(&h.least(map.codomain())) }))
        }
        _ => Err(CliError::input("push supports the -split and -many projections")),
    }
}

fn term(cli: &Cli, op: TermOp) -> Run {
    if op == TermOp::Catalog {
        let n = cli.bound.unwrap_or(4).min(5);
        let posets: Vec<Value> = catalog(n).iter().map(|p| to_value(&p.to_spec())).collect();
        return ok(json!({ "count": posets.len(), "posets": posets }));
    }
    let input: TermInput = parse(&require_input(cli)?)?;
    let poset = input.poset()?;
    match op {
        TermOp::Coverage => {
            let a = TermInput::antichain(&poset, input.a, "a")?;
            ok(json!({ "coverage": to_value(&Antichain(atom_coverage(&poset, a))) }))
        }
        TermOp::Equiv => {
            let a = TermInput::antichain(&poset, input.a, "a")?;
            let b = TermInput::antichain(&poset, input.b, "b")?;
            ok(json!({ "equiv": equiv(&poset, a, b) }))
        }
        TermOp::Leq => {
            let p: TermCondition = TermInput::field(&input.p, "p")?;
            let q: TermCondition = TermInput::field(&input.q, "q")?;
            check_term(&poset, &p)?;
            check_term(&poset, &q)?;
            ok(json!({ "leq": term_leq(&poset, &p, &q) }))
        }
        TermOp::ToCohen => {
            let p: TermCondition = TermInput::field(&input.p, "p")?;
            check_term(&poset, &p)?;
            ok(json!({ "image": to_value(&term_to_cohen(&default_labeler(&poset), &p)) }))
        }
        TermOp::Lift => {
            let p: TermCondition = TermInput::field(&input.p, "p")?;
            let q: BinSeq = TermInput::field(&input.q, "q")?;
            check_term(&poset, &p)?;
            ok(json!({ "lifted": to_value(&lift_term(&default_labeler(&poset), &p, &q)?) }))
        }
        TermOp::FromCohen => {
            let p: BinSeq = TermInput::field(&input.p, "p")?;
            ok(json!({ "term": to_value(&cohen_to_term(&poset, &p)?) }))
        }
        TermOp::Eval => {
            let q: TermCondition = TermInput::field(&input.q, "q")?;
            check_term(&poset, &q)?;
            let atom = input.atom.ok_or_else(|| CliError::input("missing field \"atom\""))?;
            if atom >= poset.size() {
                return Err(CliError::input(format!("element {atom} is not in the poset")));
            }
            let g = Filter::principal(&poset, &atom);
            ok(json!({ "value": to_value(&eval_name(&q, &g)) }))
        }
        TermOp::Catalog => unreachable!("handled above"),
    }
}

#[derive(Deserialize)]
struct PipelineInput {
    stages: Vec<StageSpec>,
}

fn assemble(cli: &Cli, count: usize, dense: usize, lambda: u32) -> Run {
    let stages = match input_text(cli)? {
        Some(text) => parse::<PipelineInput>(&text)?.stages,
        None => random_stages(
            cli.seed,
            count,
            lambda,
            max_len(cli, 40)?,
            dense,
            DictionaryRule::SeededHash { seed: cli.seed },
        ),
    };
    if let Some(bad) = stages.iter().find(|s| s.lambda == 0 || s.max_len == 0 || s.max_len > BinSeq::CAPACITY + 1) {
        return Err(CliError::input(format!("stage bounds out of range: lambda {}, max_len {}", bad.lambda, bad.max_len)));
    }
    match run_pipeline(&stages, budget()) {
        Ok(run) => ok(json!({ "stages": stages.len(), "generic": true, "trace": to_value(&run.trace) })),
        Err(Error::StageFailure { stage, dense_index }) => Ok((
            json!({ "stages": stages.len(), "generic": false, "failed_stage": stage, "missed_dense_set": dense_index }),
            true,
        )),
        Err(e) => Err(e.into()),
    }
}

fn approx(cli: &Cli) -> Run {
    let pair = FiniteModelPair::from_json(&require_input(cli)?)?;
    let verdict = check_approximation(&pair);
    let failed = verdict != Verdict::Holds;
    Ok((to_value(&verdict), failed))
}
