use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use monadic_elim::counting::{counting_normal_form_with, expand_counting, normal_form_noeq, validate_cqnf, ElimMode, ExpansionMode};
use monadic_elim::decision::{
    decide_satisfiability, decide_validity, prop_decide_cnf, prop_decide_dnf, prop_decide_substitution, qbf_decide_inward,
    quine_decide, CardinalitySpectrum, Verdict,
};
use monadic_elim::elimination::{
    build_hauptform_noeq, crude_resultant, eliminate_all, eliminate_noeq, eliminate_polyadic, eliminate_predicate,
    eliminate_predicate_traced, Stage,
};
use monadic_elim::formula::nnf;
use monadic_elim::oracle::{check_equiv_with, small_model_bound, Limits};
use monadic_elim::rewriter::{nnf_traced, simplify, RewriteStep};
use monadic_elim::{corpus, parse, Error, Formula, Quantifier};

const SCHEMA: u32 = 1;

#[derive(Parser)]
#[command(name = "monelim", version, about = "Predicate elimination and decision for monadic logic with equality")]
struct Cli {
    /// Emit a single JSON record instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rewrite into counting-quantifier normal form.
    Normalize(NormalizeArgs),
    /// Eliminate predicate quantifiers.
    Eliminate(EliminateArgs),
    /// Decide validity or satisfiability of a sentence.
    Decide(DecideArgs),
    /// Compare two formulas on all small domains.
    Equiv(EquivArgs),
    /// Run the built-in example corpus.
    Corpus,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Poly,
    Lin,
    Conj,
    Disj,
}

#[derive(Args)]
struct NormalizeArgs {
    /// Input file, or `-` for stdin.
    file: PathBuf,
    /// Use the equality-free normal form (input must be free of equality and counting).
    #[arg(long)]
    noeq: bool,
    /// `poly`/`lin` pick how counting quantifiers are expanded first;
    /// `conj`/`disj` pick the shape of the guarded-existential elimination.
    #[arg(long, value_enum)]
    mode: Option<Mode>,
}

#[derive(Args)]
struct EliminateArgs {
    file: PathBuf,
    /// Predicate to eliminate; defaults to the leading predicate quantifier.
    #[arg(long, short)]
    predicate: Option<String>,
    /// Eliminate every predicate quantifier.
    #[arg(long, conflicts_with = "predicate")]
    all: bool,
    /// Go through the equality-free normal form and the closed-form result.
    #[arg(long)]
    noeq: bool,
    /// Emit the crude resultant instead of the exact one (implies --noeq).
    #[arg(long, conflicts_with = "all")]
    crude: bool,
    /// Allow polyadic inputs that reduce to monadic ones by shorthands.
    #[arg(long, conflicts_with_all = ["noeq", "crude"])]
    polyadic: bool,
    /// Also print the intermediate stages and the certified rewrite steps.
    #[arg(long)]
    trace: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Behmann,
    Quine,
    Substitution,
    Cnf,
    Dnf,
    Qbf,
}

#[derive(Args)]
#[command(group(ArgGroup::new("query").required(true).args(["validity", "satisfiability"])))]
struct DecideArgs {
    file: PathBuf,
    #[arg(long)]
    validity: bool,
    #[arg(long)]
    satisfiability: bool,
    #[arg(long, value_enum, default_value = "behmann")]
    method: Method,
}

#[derive(Args)]
struct EquivArgs {
    file_a: PathBuf,
    file_b: PathBuf,
    /// Largest domain size to check; defaults to the small-model bound, capped at 4.
    #[arg(long)]
    max_domain: Option<usize>,
}

/// What a command produced: text for humans, a record for `--json`, and
/// the exit code.
struct Report {
    text: String,
    record: Value,
    code: u8,
}

impl Report {
    fn ok(text: String, record: Value) -> Self {
        Report { text, record, code: 0 }
    }
}

fn read_formula(path: &PathBuf) -> anyhow::Result<Formula> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
        s
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    Ok(parse(&text)?)
}

fn normalize(args: &NormalizeArgs) -> anyhow::Result<Report> {
    let input = read_formula(&args.file)?;
    let (expanded, elim) = match args.mode {
        Some(Mode::Poly) => (expand_counting(&input, ExpansionMode::Poly)?, ElimMode::default()),
        Some(Mode::Lin) => (expand_counting(&input, ExpansionMode::Lin)?, ElimMode::default()),
        Some(Mode::Conj) => (input.clone(), ElimMode::Conj),
        Some(Mode::Disj) => (input.clone(), ElimMode::Disj),
        None => (input.clone(), ElimMode::default()),
    };
    let out = if args.noeq {
        if matches!(args.mode, Some(Mode::Conj | Mode::Disj)) {
            bail!(Error::BadArgs("--mode conj|disj does not apply to --noeq".into()));
        }
        normal_form_noeq(&expanded)?
    } else {
        counting_normal_form_with(&expanded, elim)?
    };
    let check = validate_cqnf(&out, !args.noeq);
    let record = json!({
        "input": input.to_string(),
        "result": out.to_string(),
        "well_formed": check.is_ok(),
        "violation": check.as_ref().err(),
    });
    Ok(Report::ok(out.to_string(), record))
}

fn stage_record(s: &Stage) -> Value {
    json!({ "label": s.label, "formula": s.formula.to_string() })
}

fn step_record(s: &RewriteStep) -> Value {
    json!({
        "header": s.header(),
        "rule": s.step.rule.name(),
        "label": s.step.rule.label(),
        "position": s.step.position,
        "direction": s.step.direction.to_string(),
        "dualized": s.step.dualized,
        "before": s.before.to_string(),
        "after": s.after.to_string(),
    })
}

/// Split off a leading predicate quantifier, or take `p` as free.
fn target(f: &Formula, p: Option<&str>) -> anyhow::Result<(String, Formula, bool)> {
    match (f, p) {
        (Formula::Quant(q @ (Quantifier::ExistsPred(_) | Quantifier::ForallPred(_)), r, body), p)
            if p.map_or(true, |p| p == r) =>
        {
            Ok((r.clone(), (**body).clone(), matches!(q, Quantifier::ForallPred(_))))
        }
        (_, Some(p)) => Ok((p.to_string(), f.clone(), false)),
        (_, None) => bail!(Error::BadArgs("no --predicate given and no leading predicate quantifier".into())),
    }
}

fn crude(p: &str, f: &Formula) -> anyhow::Result<Formula> {
    let split = build_hauptform_noeq(p, f)?;
    let mut parts = Vec::new();
    for d in &split.disjuncts {
        parts.push(match &d.form {
            None => d.rest.clone(),
            Some(h) => Formula::and([d.rest.clone(), crude_resultant(h)?]),
        });
    }
    Ok(simplify(&Formula::or(parts)))
}

fn eliminate(args: &EliminateArgs) -> anyhow::Result<Report> {
    let input = read_formula(&args.file)?;
    let mut record = json!({ "input": input.to_string() });
    let mut text = String::new();
    let out = if args.all || (args.polyadic && args.predicate.is_none()) {
        if args.noeq || args.crude {
            bail!(Error::BadArgs("--all does not combine with --noeq or --crude".into()));
        }
        if args.polyadic {
            eliminate_polyadic(&input)?
        } else {
            eliminate_all(&input)?
        }
    } else {
        let (p, body, universal) = target(&input, args.predicate.as_deref())?;
        record["predicate"] = json!(p);
        record["universal"] = json!(universal);
        // ∀p F is handled as ¬∃p ¬F.
        let inner = if universal { nnf(&Formula::not(body)) } else { body };
        let negate = |g: Formula| if universal { simplify(&nnf(&Formula::not(g))) } else { g };
        if args.crude {
            if universal {
                bail!(Error::BadArgs("the crude resultant is only defined for ∃p".into()));
            }
            crude(&p, &inner)?
        } else if args.polyadic {
            let q = Quantifier::ExistsPred(input.all_preds().iter().find(|(q, _)| *q == p).map_or(1, |(_, a)| *a));
            negate(eliminate_polyadic(&Formula::quant(q, p.clone(), inner))?)
        } else if args.noeq {
            negate(eliminate_noeq(&p, &inner)?)
        } else if args.trace {
            let (out, stages) = eliminate_predicate_traced(&p, &inner)?;
            for s in &stages {
                text.push_str(&format!("{}: {}\n", s.label, s.formula));
            }
            record["stages"] = stages.iter().map(stage_record).collect();
            negate(out)
        } else {
            negate(eliminate_predicate(&p, &inner)?)
        }
    };
    if args.trace {
        let (_, steps) = nnf_traced(&input);
        for s in &steps {
            text.push_str(&format!("{s}\n"));
        }
        record["trace"] = steps.iter().map(step_record).collect();
    }
    record["result"] = json!(out.to_string());
    text.push_str(&out.to_string());
    Ok(Report::ok(text, record))
}

fn spectrum_record(s: &CardinalitySpectrum) -> Value {
    json!({ "sign": s.sign, "exceptions": s.exceptions, "text": s.to_string() })
}

fn decide(args: &DecideArgs) -> anyhow::Result<Report> {
    let input = read_formula(&args.file)?;
    let verdict: Verdict = match args.method {
        Method::Behmann if args.validity => decide_validity(&input)?,
        Method::Behmann => decide_satisfiability(&input)?,
        Method::Quine => quine_decide(&input)?,
        Method::Substitution => prop_decide_substitution(&input)?,
        Method::Cnf => prop_decide_cnf(&input)?,
        Method::Dnf => prop_decide_dnf(&input)?,
        Method::Qbf => qbf_decide_inward(&input)?,
    };
    let (query, holds) = if args.validity { ("validity", verdict.valid) } else { ("satisfiability", verdict.satisfiable) };
    let mut text = format!("valid: {}\nsatisfiable: {}", verdict.valid, verdict.satisfiable);
    if let Some(s) = &verdict.witness_spectrum {
        text.push_str(&format!("\nspectrum: {s}"));
    }
    let record = json!({
        "input": input.to_string(),
        "method": args.method.to_possible_value().map(|v| v.get_name().to_string()),
        "query": query,
        "holds": holds,
        "valid": verdict.valid,
        "satisfiable": verdict.satisfiable,
        "spectrum": verdict.witness_spectrum.as_ref().map(spectrum_record),
        "eliminated": verdict.eliminated.as_ref().map(Formula::to_string),
    });
    Ok(Report { text, record, code: if holds { 0 } else { 1 } })
}

fn equiv(args: &EquivArgs) -> anyhow::Result<Report> {
    let f = read_formula(&args.file_a)?;
    let g = read_formula(&args.file_b)?;
    let n = args.max_domain.unwrap_or_else(|| small_model_bound(&Formula::iff(f.clone(), g.clone())).min(4));
    if n == 0 {
        bail!(Error::BadArgs("--max-domain must be at least 1".into()));
    }
    let limits = Limits { max_domain: n.max(Limits::default().max_domain), ..Limits::default() };
    let cex = check_equiv_with(&f, &g, 1..=n, limits)?;
    let text = match &cex {
        None => format!("equivalent on domains 1..{n}"),
        Some(i) => format!("not equivalent; counterexample:\n{}", i.to_string().trim_end()),
    };
    let record = json!({
        "a": f.to_string(),
        "b": g.to_string(),
        "max_domain": n,
        "equivalent": cex.is_none(),
        "counterexample": cex.as_ref().map(|i| i.to_string()),
    });
    Ok(Report { text, record, code: if cex.is_none() { 0 } else { 1 } })
}

fn run_corpus() -> anyhow::Result<Report> {
    let outcomes = corpus::run_all();
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    let mut text = String::new();
    for o in &outcomes {
        let status = if o.passed { "pass" } else { "FAIL" };
        text.push_str(&format!("{status} {:<24} {}\n", o.name, o.computed.as_deref().unwrap_or("-")));
        if !o.passed {
            text.push_str(&format!("     {}\n", o.detail));
        }
    }
    text.push_str(&format!("{} passed, {failed} failed", outcomes.len() - failed));
    let record = json!({ "passed": outcomes.len() - failed, "failed": failed, "cases": outcomes });
    Ok(Report { text, record, code: if failed == 0 { 0 } else { 1 } })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Normalize(_) => "normalize",
        Command::Eliminate(_) => "eliminate",
        Command::Decide(_) => "decide",
        Command::Equiv(_) => "equiv",
        Command::Corpus => "corpus",
    }
}

/// Variant name of a library error, for the `kind` field of error records.
fn error_kind(e: &Error) -> String {
    let debug = format!("{e:?}");
    debug.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string()
}

fn fail(json_out: bool, command: &str, err: &anyhow::Error) -> ExitCode {
    let lib = err.downcast_ref::<Error>();
    let code = if lib.is_some_and(Error::is_limit) { 3 } else { 2 };
    if json_out {
        let fallback = if command == "usage" { "Usage" } else { "Io" };
        let kind = lib.map_or_else(|| fallback.to_string(), error_kind);
        let record = json!({
            "schema": SCHEMA,
            "command": command,
            "error": { "kind": kind, "message": format!("{err:#}") },
        });
        println!("{record}");
    } else {
        eprintln!("monelim: {err:#}");
    }
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let json_out = std::env::args().any(|a| a == "--json");
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) if json_out => return fail(true, "usage", &anyhow!(e.to_string().trim().to_string())),
        Err(e) => e.exit(),
    };
    let name = command_name(&cli.command);
    let result = match &cli.command {
        Command::Normalize(a) => normalize(a),
        Command::Eliminate(a) => eliminate(a),
        Command::Decide(a) => decide(a),
        Command::Equiv(a) => equiv(a),
        Command::Corpus => run_corpus(),
    };
    match result {
        Ok(report) => {
            if cli.json {
                let mut record = json!({ "schema": SCHEMA, "command": name });
                if let (Value::Object(out), Value::Object(fields)) = (&mut record, report.record) {
                    out.extend(fields);
                }
                println!("{record}");
            } else {
                println!("{}", report.text);
            }
            ExitCode::from(report.code)
        }
        Err(e) => fail(cli.json, name, &e),
    }
}
