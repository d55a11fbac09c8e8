//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//! Tolerances are fixed here; every count and domain bound is a constant.

mod common;

use std::time::{Duration, Instant};

use common::rules::check_instance;
use common::{domains, Gen};
use monadic_elim::corpus::{self, Group as CaseGroup, Outcome};
use monadic_elim::counting::{counting_normal_form, validate_cqnf};
use monadic_elim::decision::{
    decide_pure_counting, decide_validity, prop_decide_cnf, prop_decide_dnf, prop_decide_substitution,
    qbf_decide_inward, quine_decide,
};
use monadic_elim::elimination::{
    ackermann_input, ackermann_lemma_elim, basic_elim, crude_resultant, hauptform_noeq_elim, DefinitionDirection,
    Group, Hauptform,
};
use monadic_elim::formula::nnf;
use monadic_elim::oracle::{check_entails, check_equiv, check_equiv_relevant, eval_closed, find_model, Limits};
use monadic_elim::rewriter::{nnf_traced, simplify_traced, RuleId, FULL};
use monadic_elim::{parse, print, Formula};

const SYLLOGISM_TIME: Duration = Duration::from_secs(1);
const LEMMA_INSTANCES: usize = 200;
const LEMMA_TIME: Duration = Duration::from_secs(30);
const LEMMA_DOMAINS: usize = 3;
const NORMAL_FORM_INSTANCES: usize = 200;
const NORMAL_FORM_DOMAIN_CAP: usize = 4;
const COUNTING_INSTANCES: usize = 100;
const COUNTING_MAX: u32 = 5;
const COUNTING_SIZES: usize = 6;
const QUINE_INSTANCES: usize = 100;
const BOOLEAN_INSTANCES: usize = 500;
const HAUPTFORM_INSTANCES: usize = 50;
const HAUPTFORM_DOMAINS: usize = 3;
const SWITCHING_DOMAINS: usize = 3;
const RULE_INSTANCES: usize = 60;
const RULE_DOMAINS: usize = 3;
const TRACE_INSTANCES: usize = 200;

struct Report {
    passed: bool,
    detail: String,
}

fn report(passed: bool, detail: impl Into<String>) -> Report {
    Report { passed, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Report {
    report(false, detail)
}

fn group_outcomes(group: CaseGroup) -> Vec<Outcome> {
    corpus::cases().iter().filter(|c| c.group == group).map(|c| c.run()).collect()
}

fn summarize(outcomes: &[Outcome]) -> (bool, String) {
    let bad: Vec<String> = outcomes.iter().filter(|o| !o.passed).map(|o| format!("{}: {}", o.name, o.detail)).collect();
    let ok = !outcomes.is_empty() && bad.is_empty();
    let mut text = format!("{}/{} cases", outcomes.len() - bad.len(), outcomes.len());
    if !bad.is_empty() {
        text.push_str(&format!(" [{}]", bad.join("; ")));
    }
    (ok, text)
}

fn syllogisms() -> Report {
    let start = Instant::now();
    let outcomes = group_outcomes(CaseGroup::Syllogism);
    let elapsed = start.elapsed();
    let (ok, text) = summarize(&outcomes);
    report(ok && elapsed < SYLLOGISM_TIME, format!("{text}, {elapsed:.2?} (limit {SYLLOGISM_TIME:?})"))
}

/// Rename `p` to `q` at the occurrences of the unwanted polarity in an NNF
/// formula, so that the remaining occurrences of `p` share one polarity.
fn one_polarity(f: &Formula, p: &str, q: &str, keep_positive: bool) -> Formula {
    match f {
        Formula::Atom(r, args) if r == p && !keep_positive => Formula::Atom(q.into(), args.clone()),
        Formula::Not(g) => match &**g {
            Formula::Atom(r, args) if r == p && keep_positive => Formula::not(Formula::Atom(q.into(), args.clone())),
            g => Formula::not(one_polarity(g, p, q, keep_positive)),
        },
        Formula::And(items) => Formula::And(items.iter().map(|g| one_polarity(g, p, q, keep_positive)).collect()),
        Formula::Or(items) => Formula::Or(items.iter().map(|g| one_polarity(g, p, q, keep_positive)).collect()),
        Formula::Quant(k, x, g) => Formula::quant(*k, x.clone(), one_polarity(g, p, q, keep_positive)),
        other => other.clone(),
    }
}

fn lemmas() -> Report {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut side = Gen::new(20).with_unary(&["q", "r"]);
    for _ in 0..LEMMA_INSTANCES {
        let a = side.open_in("x", 3, 2);
        let b = side.open_in("x", 3, 2);
        let input = Formula::exists_pred(
            "p",
            1,
            Formula::and([
                Formula::forall("x", Formula::or([a.clone(), Formula::unary("p", monadic_elim::Term::var("x"))])),
                Formula::forall("x", Formula::or([b.clone(), Formula::not(Formula::unary("p", monadic_elim::Term::var("x")))])),
            ]),
        );
        match basic_elim("x", &a, &b, "p") {
            Ok(out) if out.mentions_pred("p") => failures.push(format!("p survives in {out}")),
            Ok(out) => match check_equiv(&input, &out, LEMMA_DOMAINS) {
                Ok(None) => {}
                Ok(Some(m)) => failures.push(format!("{} vs {}: {m}", print(&input), print(&out))),
                Err(e) => failures.push(e.to_string()),
            },
            Err(e) => failures.push(e.to_string()),
        }
    }
    let mut body_gen = Gen::new(21).with_unary(&["p", "q", "r"]);
    for k in 0..LEMMA_INSTANCES {
        let dir = if k % 2 == 0 { DefinitionDirection::Imp } else { DefinitionDirection::RevImp };
        let g = side.open_in("x", 3, 2);
        let body = one_polarity(&nnf(&body_gen.sentence(3, 2)), "p", "q", dir == DefinitionDirection::Imp);
        let input = ackermann_input("p", dir, "x", &g, &body);
        match ackermann_lemma_elim("p", dir, "x", &g, &body) {
            Ok(out) if out.mentions_pred("p") => failures.push(format!("p survives in {out}")),
            Ok(out) => match check_equiv(&input, &out, LEMMA_DOMAINS) {
                Ok(None) => {}
                Ok(Some(m)) => failures.push(format!("{} vs {}: {m}", print(&input), print(&out))),
                Err(e) => failures.push(e.to_string()),
            },
            Err(e) => failures.push(format!("{e} on {}", print(&input))),
        }
    }
    let elapsed = start.elapsed();
    let total = 2 * LEMMA_INSTANCES;
    let mut text = format!(
        "{}/{total} instances equivalent on domains 1..={LEMMA_DOMAINS}, {elapsed:.2?} (limit {LEMMA_TIME:?})",
        total - failures.len()
    );
    if let Some(first) = failures.first() {
        text.push_str(&format!(" [first failure: {first}]"));
    }
    report(failures.is_empty() && elapsed < LEMMA_TIME, text)
}

fn normal_forms() -> Report {
    let mut failures = Vec::new();
    let mut gen = Gen::new(30);
    for _ in 0..NORMAL_FORM_INSTANCES {
        let f = gen.sentence(3, 2);
        let nf = match counting_normal_form(&f) {
            Ok(nf) => nf,
            Err(e) => {
                failures.push(format!("{e} on {}", print(&f)));
                continue;
            }
        };
        if let Err(v) = validate_cqnf(&nf, true) {
            failures.push(format!("{}: {v}", print(&nf)));
            continue;
        }
        match check_equiv(&f, &nf, domains(&f, NORMAL_FORM_DOMAIN_CAP)) {
            Ok(None) => {}
            Ok(Some(m)) => failures.push(format!("{} vs {}: {m}", print(&f), print(&nf))),
            Err(e) => failures.push(e.to_string()),
        }
    }
    let (corpus_ok, corpus_text) = summarize(&group_outcomes(CaseGroup::Counting));
    let mut text = format!(
        "{}/{NORMAL_FORM_INSTANCES} random formulas well formed and equivalent (domains up to min({NORMAL_FORM_DOMAIN_CAP}, bound)); worked examples {corpus_text}",
        NORMAL_FORM_INSTANCES - failures.len()
    );
    if let Some(first) = failures.first() {
        text.push_str(&format!(" [first failure: {first}]"));
    }
    report(failures.is_empty() && corpus_ok, text)
}

fn counting_spectra() -> Report {
    let mut failures = Vec::new();
    let mut gen = Gen::new(40);
    for _ in 0..COUNTING_INSTANCES {
        let f = gen.pure_counting(3, COUNTING_MAX);
        let spectrum = match decide_pure_counting(&f) {
            Ok(s) => s,
            Err(e) => {
                failures.push(format!("{e} on {}", print(&f)));
                continue;
            }
        };
        if spectrum.exceptions.iter().any(|&n| n > COUNTING_MAX) {
            failures.push(format!("exception beyond {COUNTING_MAX} for {}", print(&f)));
        }
        for n in 1..=COUNTING_SIZES + 2 {
            match eval_closed(&f, n) {
                Ok(v) if v == spectrum.truth(n as u32) => {}
                Ok(_) => failures.push(format!("{} at size {n}", print(&f))),
                Err(e) => failures.push(e.to_string()),
            }
        }
    }
    let mut text = format!(
        "{}/{COUNTING_INSTANCES} spectra match direct evaluation on sizes 1..={} (counts up to {COUNTING_MAX})",
        COUNTING_INSTANCES - failures.len().min(COUNTING_INSTANCES),
        COUNTING_SIZES + 2
    );
    if let Some(first) = failures.first() {
        text.push_str(&format!(" [first failure: {first}]"));
    }
    report(failures.is_empty(), text)
}

fn decision_agreement() -> Report {
    let mut failures = Vec::new();
    let mut gen = Gen::new(50).without_equality().with_consts(&[]).with_unary(&["p", "q", "r"]);
    for k in 0..QUINE_INSTANCES {
        let body = gen.open_in("x", 4, 2);
        let f = if k % 2 == 0 { Formula::forall("x", body) } else { Formula::exists("x", body) };
        match (decide_validity(&f), quine_decide(&f)) {
            (Ok(b), Ok(q)) => {
                if (b.valid, b.satisfiable) != (q.valid, q.satisfiable) {
                    failures.push(format!("verdicts differ on {}", print(&f)));
                }
                let refuted = find_model(&Formula::not(f.clone()), 1..=3).ok().flatten().is_some();
                let model = find_model(&f, 1..=3).ok().flatten().is_some();
                if (b.valid && refuted) || (!b.satisfiable && model) {
                    failures.push(format!("oracle disagrees on {}", print(&f)));
                }
            }
            (b, q) => failures.push(format!("{:?} / {:?} on {}", b.err(), q.err(), print(&f))),
        }
    }
    let mut gen = Gen::new(51).with_nullary(&["p", "q", "r"]);
    for _ in 0..BOOLEAN_INSTANCES {
        let f = gen.boolean(4);
        let valid = find_model(&Formula::not(f.clone()), 1..=1).ok().flatten().is_none();
        let satisfiable = find_model(&f, 1..=1).ok().flatten().is_some();
        let deciders: [(&str, fn(&Formula) -> monadic_elim::Result<monadic_elim::decision::Verdict>); 5] = [
            ("substitution", prop_decide_substitution),
            ("cnf", prop_decide_cnf),
            ("dnf", prop_decide_dnf),
            ("qbf", qbf_decide_inward),
            ("elimination", decide_validity),
        ];
        for (name, decide) in deciders {
            match decide(&f) {
                Ok(v) if (v.valid, v.satisfiable) == (valid, satisfiable) => {}
                Ok(_) => failures.push(format!("{name} wrong on {}", print(&f))),
                Err(e) => failures.push(format!("{name}: {e} on {}", print(&f))),
            }
        }
    }
    let mut text = format!(
        "{QUINE_INSTANCES} monadic sentences (elimination vs expansion) and {BOOLEAN_INSTANCES} Boolean formulas (5 deciders vs truth tables): {} disagreements",
        failures.len()
    );
    if let Some(first) = failures.first() {
        text.push_str(&format!(" [first: {first}]"));
    }
    report(failures.is_empty(), text)
}

fn hauptforms() -> Report {
    let mut failures = Vec::new();
    let mut strict = 0;
    let mut gen = Gen::new(60).without_equality().with_unary(&["q", "r"]).with_consts(&["a"]);
    for _ in 0..HAUPTFORM_INSTANCES {
        let mut h = Hauptform::new("p", "x");
        let (na, nb) = (gen.below(3), gen.below(3));
        let (nc, nd) = (1 + gen.below(2), 1 + gen.below(2));
        for (n, slot) in [(na, 0), (nb, 1), (nc, 2), (nd, 3)] {
            for _ in 0..n {
                let g = Group::plain(gen.open_in("x", 2, 1));
                [&mut h.a, &mut h.b, &mut h.c, &mut h.d][slot].push(g);
            }
        }
        let (exact, crude) = match (hauptform_noeq_elim(&h), crude_resultant(&h)) {
            (Ok(e), Ok(c)) => (e, c),
            (e, c) => {
                failures.push(format!("{:?} / {:?} on {h}", e.err(), c.err()));
                continue;
            }
        };
        match check_equiv(&h.to_formula(), &exact, HAUPTFORM_DOMAINS) {
            Ok(None) => {}
            Ok(Some(m)) => failures.push(format!("exact resultant of {h} wrong: {m}")),
            Err(e) => failures.push(e.to_string()),
        }
        match check_entails(&exact, &crude, HAUPTFORM_DOMAINS) {
            Ok(None) => {}
            Ok(Some(m)) => failures.push(format!("exact does not entail crude for {h}: {m}")),
            Err(e) => failures.push(e.to_string()),
        }
        if let Ok(Some(_)) = check_entails(&crude, &exact, HAUPTFORM_DOMAINS) {
            strict += 1;
        }
    }
    let mut text = format!(
        "{}/{HAUPTFORM_INSTANCES} Hauptforms with exact resultant entailing the crude one on domains 1..={HAUPTFORM_DOMAINS}; {strict} strictly stronger",
        HAUPTFORM_INSTANCES - failures.len().min(HAUPTFORM_INSTANCES)
    );
    if let Some(first) = failures.first() {
        text.push_str(&format!(" [first failure: {first}]"));
    }
    report(failures.is_empty() && strict > 0, text)
}

fn polyadic() -> Report {
    let (ok, text) = summarize(&group_outcomes(CaseGroup::Polyadic));
    report(ok, text)
}

fn switching() -> Report {
    let cases = corpus::cases();
    let Some(case) = cases.iter().find(|c| c.group == CaseGroup::Switching) else {
        return fail("no switching case");
    };
    let outcome = case.run();
    if !outcome.passed {
        return fail(format!("{}: {}", outcome.name, outcome.detail));
    }
    let start = Instant::now();
    let input = parse(case.input).unwrap();
    let expected = parse(case.expected).unwrap();
    match check_equiv_relevant(&input, &expected, 1..=SWITCHING_DOMAINS, Limits::default()) {
        Ok(None) => report(
            true,
            format!(
                "result matches the expected monadic form; input equivalent to it on domains 1..={SWITCHING_DOMAINS} ({:.2?})",
                start.elapsed()
            ),
        ),
        Ok(Some(m)) => fail(format!("input and expected form differ: {m}")),
        Err(e) => fail(format!("input check: {e}")),
    }
}

fn rules_and_traces() -> Report {
    let mut failures = Vec::new();
    for (k, rule) in RuleId::ALL.iter().enumerate() {
        let mut gen = Gen::new(1000 + k as u64);
        for _ in 0..RULE_INSTANCES {
            if let Err(e) = check_instance(&gen.rule_instance(*rule), RULE_DOMAINS) {
                failures.push(format!("{rule}: {e}"));
            }
        }
    }
    let mut replayed = 0;
    let mut gen = Gen::new(90);
    for _ in 0..TRACE_INSTANCES {
        let f = gen.sentence(4, 2);
        for steps in [nnf_traced(&f).1, simplify_traced(&f, FULL).1] {
            for s in steps {
                replayed += 1;
                if !s.replays() {
                    failures.push(format!("step {} does not replay", s.header()));
                }
            }
        }
    }
    let mut text = format!(
        "{} rules x {RULE_INSTANCES} random instances sound on domains 1..={RULE_DOMAINS}; {replayed} trace steps replayed; {} failures",
        RuleId::ALL.len(),
        failures.len()
    );
    if let Some(first) = failures.first() {
        text.push_str(&format!(" [first: {first}]"));
    }
    report(failures.is_empty(), text)
}

fn main() {
    let criteria: [(&str, fn() -> Report); 9] = [
        ("syllogisms", syllogisms),
        ("basic lemma and Ackermann", lemmas),
        ("counting normal form", normal_forms),
        ("pure counting spectra", counting_spectra),
        ("decision agreement", decision_agreement),
        ("exact vs crude resultant", hauptforms),
        ("polyadic monadization", polyadic),
        ("quantifier switching", switching),
        ("rule soundness and traces", rules_and_traces),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let r = run();
        if !r.passed {
            failed += 1;
        }
        println!("criterion {} {name}: {} - {}", i + 1, if r.passed { "PASS" } else { "FAIL" }, r.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
