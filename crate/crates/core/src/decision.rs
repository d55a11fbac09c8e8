//! Decision procedures.
//!
//! Validity and satisfiability of QMON= formulas reduce, after closing over
//! the free symbols and eliminating all predicates, to pure counting
//! formulas whose truth depends only on the domain size. Propositional and
//! quantified Boolean formulas have their own small deciders, and Quine's
//! expansion gives an independent route for MON sentences.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::counting::counting_normal_form;
use crate::elimination::eliminate_all;
use crate::error::{Error, Result};
use crate::formula::{
    classify, free_symbols, replace_term, substitute_pred, Formula, FormulaClass, FreshNames, Quantifier, Term,
};
use crate::rewriter::{cnf_clauses, dnf_clauses, simplify_truth_values, RewriteStep, DEFAULT_SIZE_LIMIT};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sign {
    TrueCofinitely,
    FalseCofinitely,
}

/// Truth value of a pure counting formula as a function of the domain size:
/// the value given by `sign` everywhere except at the listed sizes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CardinalitySpectrum {
    pub sign: Sign,
    pub exceptions: BTreeSet<u32>,
}

impl CardinalitySpectrum {
    pub fn constant(value: bool) -> Self {
        let sign = if value { Sign::TrueCofinitely } else { Sign::FalseCofinitely };
        CardinalitySpectrum { sign, exceptions: BTreeSet::new() }
    }

    /// Build from the truth values at sizes `1..=values.len()` and the value
    /// from there on.
    pub fn from_values(values: &[bool], tail: bool) -> Self {
        let mut s = CardinalitySpectrum::constant(tail);
        for (i, v) in values.iter().enumerate() {
            if *v != tail {
                s.exceptions.insert(i as u32 + 1);
            }
        }
        s
    }

    pub fn truth(&self, n: u32) -> bool {
        (self.sign == Sign::TrueCofinitely) != self.exceptions.contains(&n)
    }

    pub fn is_valid(&self) -> bool {
        self.sign == Sign::TrueCofinitely && self.exceptions.is_empty()
    }

    pub fn is_satisfiable(&self) -> bool {
        self.sign == Sign::TrueCofinitely || !self.exceptions.is_empty()
    }
}

impl fmt::Display for CardinalitySpectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let value = if self.sign == Sign::TrueCofinitely { "true" } else { "false" };
        if self.exceptions.is_empty() {
            return write!(f, "{value} for all domain cardinalities");
        }
        let list: Vec<String> = self.exceptions.iter().map(u32::to_string).collect();
        write!(f, "{value} for all domain cardinalities with exception of {}", list.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub valid: bool,
    pub satisfiable: bool,
    pub witness_spectrum: Option<CardinalitySpectrum>,
    pub eliminated: Option<Formula>,
    pub trace: Option<Vec<RewriteStep>>,
}

impl Verdict {
    fn plain(valid: bool, satisfiable: bool) -> Self {
        Verdict { valid, satisfiable, witness_spectrum: None, eliminated: None, trace: None }
    }
}

/// `∃≥n x ⊤` read as a threshold: true exactly when the domain has at least
/// `n` elements. Other forms of the same meaning are accepted as well.
fn threshold(f: &Formula) -> Option<(u32, bool)> {
    match f {
        Formula::Quant(Quantifier::Exists, _, g) if **g == Formula::True => Some((1, true)),
        Formula::Quant(Quantifier::AtLeast(n), _, g) if **g == Formula::True => Some((*n, true)),
        Formula::Quant(Quantifier::Forall, _, g) if **g == Formula::False => Some((1, false)),
        Formula::Quant(Quantifier::AllBut(n), _, g) if **g == Formula::False => Some((*n, false)),
        _ => None,
    }
}

fn pure_counting_basic(f: &Formula) -> bool {
    threshold(f).is_some()
}

/// The spectrum of a Boolean combination of `∃≥n x ⊤`, computed from its
/// disjunctive normal form: every conjunctive clause holds on an interval
/// of sizes, and the formula on their union.
pub fn decide_pure_counting(f: &Formula) -> Result<CardinalitySpectrum> {
    let clauses = dnf_clauses(f, &pure_counting_basic, DEFAULT_SIZE_LIMIT)?;
    let mut intervals = Vec::new();
    let mut max_count = 1;
    for c in &clauses {
        let (mut lo, mut hi) = (1u32, None::<u32>);
        for l in c {
            let (n, pos) = threshold(&l.atom).expect("basic formula");
            max_count = max_count.max(n);
            if pos == l.pos {
                lo = lo.max(n);
            } else {
                hi = Some(hi.map_or(n, |h| h.min(n)));
            }
        }
        intervals.push((lo, hi));
    }
    let holds = |n: u32| intervals.iter().any(|&(lo, hi)| lo <= n && hi.map_or(true, |h| n < h));
    let values: Vec<bool> = (1..=max_count).map(holds).collect();
    Ok(CardinalitySpectrum::from_values(&values, holds(max_count + 1)))
}

/// Turn free constants and variables into variables bound by `q` and bind
/// the free predicates by the matching predicate quantifier.
fn close(f: &Formula, universal: bool) -> Result<Formula> {
    let syms = free_symbols(f);
    let mut names = FreshNames::for_formula(f);
    let mut out = f.clone();
    let mut individuals: Vec<String> = syms.vars.iter().cloned().collect();
    for c in &syms.consts {
        let v = names.prefer(c);
        out = replace_term(&out, &Term::constant(c.clone()), &Term::var(&v))?;
        individuals.push(v);
    }
    let (iq, pq): (Quantifier, fn(usize) -> Quantifier) = if universal {
        (Quantifier::Forall, Quantifier::ForallPred)
    } else {
        (Quantifier::Exists, Quantifier::ExistsPred)
    };
    for v in individuals.iter().rev() {
        out = Formula::quant(iq, v.clone(), out);
    }
    for (p, n) in syms.preds.iter().rev() {
        out = Formula::quant(pq(*n), p.clone(), out);
    }
    Ok(out)
}

fn closed_spectrum(f: &Formula, universal: bool) -> Result<(CardinalitySpectrum, Formula)> {
    let class = classify(f);
    if !class.within(FormulaClass::QMonEq) {
        return Err(Error::Class(format!("expected a QMON= formula, got {class}")));
    }
    let closed = close(f, universal)?;
    let eliminated = eliminate_all(&closed)?;
    let normalized = counting_normal_form(&eliminated)?;
    Ok((decide_pure_counting(&normalized)?, eliminated))
}

/// Validity by universal closure, elimination of all predicates, the
/// counting normal form and the pure counting decision. Satisfiability is
/// filled in by the existential route.
pub fn decide_validity(f: &Formula) -> Result<Verdict> {
    let (spectrum, eliminated) = closed_spectrum(f, true)?;
    let (sat, _) = closed_spectrum(f, false)?;
    Ok(Verdict {
        valid: spectrum.is_valid(),
        satisfiable: sat.is_satisfiable(),
        witness_spectrum: Some(spectrum),
        eliminated: Some(eliminated),
        trace: None,
    })
}

/// Satisfiability directly by existential closure; the spectrum lists the
/// domain sizes that admit a model.
pub fn decide_satisfiability(f: &Formula) -> Result<Verdict> {
    let (spectrum, eliminated) = closed_spectrum(f, false)?;
    let (val, _) = closed_spectrum(f, true)?;
    Ok(Verdict {
        valid: val.is_valid(),
        satisfiable: spectrum.is_satisfiable(),
        witness_spectrum: Some(spectrum),
        eliminated: Some(eliminated),
        trace: None,
    })
}

fn require_nullary(f: &Formula) -> Result<()> {
    if let Some((p, n)) = f.all_preds().into_iter().find(|(_, n)| *n != 0) {
        return Err(Error::Class(format!("{p} has arity {n}")));
    }
    if f.has_equality() {
        return Err(Error::Class("equality in a Boolean formula".into()));
    }
    Ok(())
}

fn free_nullary(f: &Formula) -> Vec<String> {
    free_symbols(f).preds.into_iter().map(|(p, _)| p).collect()
}

/// Replace every Boolean quantifier by the disjunction or conjunction of
/// its two instances and simplify truth values.
fn substitute_out(f: &Formula) -> Result<Formula> {
    Ok(match f {
        Formula::Quant(q @ (Quantifier::ExistsPred(_) | Quantifier::ForallPred(_)), p, g) => {
            let g = substitute_out(g)?;
            let t = substitute_pred(&g, p, &[], &Formula::True)?;
            let e = substitute_pred(&g, p, &[], &Formula::False)?;
            let both = if q.is_universal() { Formula::and([t, e]) } else { Formula::or([t, e]) };
            simplify_truth_values(&both)
        }
        Formula::Quant(q, x, g) => simplify_truth_values(&Formula::quant(*q, x.clone(), substitute_out(g)?)),
        Formula::Not(g) => simplify_truth_values(&Formula::not(substitute_out(g)?)),
        Formula::And(v) => simplify_truth_values(&Formula::and(v.iter().map(substitute_out).collect::<Result<Vec<_>>>()?)),
        Formula::Or(v) => simplify_truth_values(&Formula::or(v.iter().map(substitute_out).collect::<Result<Vec<_>>>()?)),
        f => f.clone(),
    })
}

fn truth_value(f: &Formula) -> Result<bool> {
    match f {
        Formula::True => Ok(true),
        Formula::False => Ok(false),
        g => Err(Error::Shape(format!("{g} did not reduce to a truth value"))),
    }
}

/// The substitution method: each quantified and, for the verdict, each free
/// nullary predicate is replaced by ⊤ and by ⊥.
pub fn prop_decide_substitution(f: &Formula) -> Result<Verdict> {
    require_nullary(f)?;
    let free = free_nullary(f);
    let universal = free.iter().rev().fold(f.clone(), |acc, p| Formula::forall_pred(p.clone(), 0, acc));
    let existential = free.iter().rev().fold(f.clone(), |acc, p| Formula::exists_pred(p.clone(), 0, acc));
    Ok(Verdict::plain(truth_value(&substitute_out(&universal)?)?, truth_value(&substitute_out(&existential)?)?))
}

fn nullary_atom(f: &Formula) -> bool {
    matches!(f, Formula::Atom(_, args) if args.is_empty())
}

fn matrix(f: &Formula) -> Result<Formula> {
    require_nullary(f)?;
    let m = if f.has_pred_quantifier() || !f.is_quantifier_free() { substitute_out(f)? } else { f.clone() };
    if !m.is_quantifier_free() {
        return Err(Error::Shape(format!("{m} is not propositional")));
    }
    Ok(m)
}

/// Validity from the conjunctive normal form: valid iff every clause is,
/// i.e. no clause survives the removal of tautologous ones. Satisfiability
/// is the failure of validity for the negation.
pub fn prop_decide_cnf(f: &Formula) -> Result<Verdict> {
    let m = matrix(f)?;
    let valid = cnf_clauses(&m, &nullary_atom, DEFAULT_SIZE_LIMIT)?.is_empty();
    let neg_valid = cnf_clauses(&Formula::not(m), &nullary_atom, DEFAULT_SIZE_LIMIT)?.is_empty();
    Ok(Verdict::plain(valid, !neg_valid))
}

/// Satisfiability from the disjunctive normal form: satisfiable iff some
/// conjunctive clause is not contradictory.
pub fn prop_decide_dnf(f: &Formula) -> Result<Verdict> {
    let m = matrix(f)?;
    let sat = !dnf_clauses(&m, &nullary_atom, DEFAULT_SIZE_LIMIT)?.is_empty();
    let neg_sat = !dnf_clauses(&Formula::not(m), &nullary_atom, DEFAULT_SIZE_LIMIT)?.is_empty();
    Ok(Verdict::plain(!neg_sat, sat))
}

/// Quantified Boolean formulas by propagating the Boolean quantifiers inward
/// until only `∃p p` and `∃p ¬p` remain, which are ⊤. Free predicates are
/// closed over, universally for validity and existentially for
/// satisfiability.
pub fn qbf_decide_inward(f: &Formula) -> Result<Verdict> {
    require_nullary(f)?;
    let free = free_nullary(f);
    let run = |universal: bool| -> Result<bool> {
        let closed = free.iter().rev().fold(f.clone(), |acc, p| {
            if universal {
                Formula::forall_pred(p.clone(), 0, acc)
            } else {
                Formula::exists_pred(p.clone(), 0, acc)
            }
        });
        truth_value(&simplify_truth_values(&eliminate_all(&closed)?))
    };
    Ok(Verdict::plain(run(true)?, run(false)?))
}

fn replace_occurrences(f: &Formula, g: &Formula, by: &Formula, inner: &mut Vec<String>, gfree: &BTreeSet<String>) -> Formula {
    if f == g && !inner.iter().any(|v| gfree.contains(v)) {
        return by.clone();
    }
    match f {
        Formula::Quant(q, y, h) => {
            let pushed = !q.binds_predicate();
            if pushed {
                inner.push(y.clone());
            }
            let out = Formula::quant(*q, y.clone(), replace_occurrences(h, g, by, inner, gfree));
            if pushed {
                inner.pop();
            }
            out
        }
        Formula::Not(h) => Formula::not(replace_occurrences(h, g, by, inner, gfree)),
        Formula::And(v) => Formula::And(v.iter().map(|c| replace_occurrences(c, g, by, inner, gfree)).collect()),
        Formula::Or(v) => Formula::Or(v.iter().map(|c| replace_occurrences(c, g, by, inner, gfree)).collect()),
        f => f.clone(),
    }
}

/// Quine's expansion of `Qx F[G]`:
/// `∃x F[G] ≡ (G ∨ ∃x F[⊥]) ∧ (¬G ∨ ∃x F[⊤])` and
/// `∀x F[G] ≡ (G ∧ ∀x F[⊤]) ∨ (¬G ∧ ∀x F[⊥])`.
/// Only occurrences of `G` outside the scope of quantifiers within `F`
/// that bind free variables of `G` are replaced.
pub fn quine_step(f: &Formula, g: &Formula) -> Result<Formula> {
    let Formula::Quant(q, x, body) = f else {
        return Err(Error::Eligibility(format!("{f} is not quantified")));
    };
    if q.binds_predicate() {
        return Err(Error::Eligibility(format!("{f} quantifies a predicate")));
    }
    if g.has_free_var(x) {
        return Err(Error::Eligibility(format!("{x} occurs free in {g}")));
    }
    let gfree = g.free_vars();
    let with_t = replace_occurrences(body, g, &Formula::True, &mut Vec::new(), &gfree);
    if with_t == **body {
        return Err(Error::Eligibility(format!("no eligible occurrence of {g}")));
    }
    let with_f = replace_occurrences(body, g, &Formula::False, &mut Vec::new(), &gfree);
    let t = Formula::quant(*q, x.clone(), with_t);
    let e = Formula::quant(*q, x.clone(), with_f);
    let ng = Formula::not(g.clone());
    Ok(if q.is_universal() {
        Formula::or([Formula::and([g.clone(), t]), Formula::and([ng, e])])
    } else {
        Formula::and([Formula::or([g.clone(), e]), Formula::or([ng, t])])
    })
}

/// A subformula of `body` that does not depend on `x` or on any variable
/// bound inside `body`: a candidate for the expansion of `Qx body`.
fn eligible(body: &Formula, x: &str, inner: &mut Vec<String>) -> Option<Formula> {
    let independent = |g: &Formula| {
        let fv = g.free_vars();
        !fv.contains(x) && !inner.iter().any(|v| fv.contains(v))
    };
    match body {
        Formula::Atom(..) | Formula::Eq(..) if independent(body) => Some(body.clone()),
        Formula::Quant(q, _, _) if !q.binds_predicate() && independent(body) => Some(body.clone()),
        Formula::Quant(q, y, h) => {
            let pushed = !q.binds_predicate();
            if pushed {
                inner.push(y.clone());
            }
            let r = eligible(h, x, inner);
            if pushed {
                inner.pop();
            }
            r
        }
        f => f.children().iter().find_map(|c| eligible(c, x, inner)),
    }
}

/// One expansion at the innermost quantifier that has an eligible
/// subformula, or `None` when no quantifier has one.
fn quine_pass(f: &Formula) -> Result<Option<Formula>> {
    for (i, c) in f.children().iter().enumerate() {
        if let Some(c2) = quine_pass(c)? {
            let mut out = f.clone();
            out.children_mut()[i] = c2;
            return Ok(Some(out));
        }
    }
    if let Formula::Quant(q, x, body) = f {
        if !q.binds_predicate() {
            if let Some(g) = eligible(body, x, &mut Vec::new()) {
                return Ok(Some(quine_step(f, &g)?));
            }
        }
    }
    Ok(None)
}

/// Exhaustive Quine expansion with truth-value simplification after every
/// step. In the result every quantifier body is quantifier-free and only
/// mentions the bound variable.
pub fn quine_normalize(f: &Formula) -> Result<Formula> {
    let mut cur = simplify_truth_values(f);
    while let Some(next) = quine_pass(&cur)? {
        cur = simplify_truth_values(&next);
        if cur.size() > DEFAULT_SIZE_LIMIT {
            return Err(Error::SizeLimitExceeded { limit: DEFAULT_SIZE_LIMIT });
        }
    }
    Ok(cur)
}

/// Truth of an expanded sentence, given which combinations of the unary
/// predicates are realized by some element and the values of the nullary
/// predicates.
fn eval_types(f: &Formula, unary: &[String], types: &[u32], nullary: &BTreeSet<String>, elem: Option<(&str, u32)>) -> Result<bool> {
    Ok(match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(p, args) if args.is_empty() => nullary.contains(p),
        Formula::Atom(p, args) => match (elem, &args[0]) {
            (Some((x, ty)), Term::Var(v)) if v == x => {
                let i = unary.iter().position(|q| q == p).expect("collected");
                ty & (1 << i) != 0
            }
            _ => return Err(Error::Shape(format!("{f} is not over the innermost variable"))),
        },
        Formula::Not(g) => !eval_types(g, unary, types, nullary, elem)?,
        Formula::And(v) => {
            for g in v {
                if !eval_types(g, unary, types, nullary, elem)? {
                    return Ok(false);
                }
            }
            true
        }
        Formula::Or(v) => {
            for g in v {
                if eval_types(g, unary, types, nullary, elem)? {
                    return Ok(true);
                }
            }
            false
        }
        Formula::Quant(q @ (Quantifier::Exists | Quantifier::Forall), x, g) => {
            let mut results = Vec::with_capacity(types.len());
            for &ty in types {
                results.push(eval_types(g, unary, types, nullary, Some((x, ty)))?);
            }
            if *q == Quantifier::Exists {
                results.iter().any(|b| *b)
            } else {
                results.iter().all(|b| *b)
            }
        }
        g => return Err(Error::Shape(format!("unexpected {g} in an expanded sentence"))),
    })
}

/// Decide a MON sentence by Quine's expansion. The expanded sentence is a
/// Boolean combination of quantified formulas over a single variable, whose
/// truth depends only on which predicate combinations are realized; all
/// nonempty sets of realized combinations are tried.
pub fn quine_decide(f: &Formula) -> Result<Verdict> {
    let class = classify(f);
    if class != FormulaClass::Mon {
        return Err(Error::Class(format!("expected a MON sentence, got {class}")));
    }
    let syms = free_symbols(f);
    if !syms.vars.is_empty() || !syms.consts.is_empty() {
        return Err(Error::Class("not a sentence".into()));
    }
    if f.has_counting() {
        return Err(Error::Class("counting quantifiers".into()));
    }
    let expanded = quine_normalize(f)?;
    let unary: Vec<String> = syms.preds.iter().filter(|(_, n)| *n == 1).map(|(p, _)| p.clone()).collect();
    let nullary: Vec<String> = syms.preds.iter().filter(|(_, n)| *n == 0).map(|(p, _)| p.clone()).collect();
    if unary.len() > 4 || nullary.len() > 12 {
        return Err(Error::SizeLimitExceeded { limit: 4 });
    }
    let n_types = 1u32 << unary.len();
    let (mut valid, mut sat) = (true, false);
    for realized in 1u64..(1u64 << n_types) {
        let types: Vec<u32> = (0..n_types).filter(|t| realized & (1 << t) != 0).collect();
        for assignment in 0u32..(1 << nullary.len()) {
            let on: BTreeSet<String> =
                nullary.iter().enumerate().filter(|(i, _)| assignment & (1 << i) != 0).map(|(_, p)| p.clone()).collect();
            let v = eval_types(&expanded, &unary, &types, &on, None)?;
            valid &= v;
            sat |= v;
        }
    }
    Ok(Verdict { valid, satisfiable: sat, witness_spectrum: None, eliminated: Some(expanded), trace: None })
}
