//! Elimination of existential predicate quantifiers.
//!
//! The general method normalizes the body, brings every `∃p` block into the
//! generalized Hauptform, converts that into the shape of the basic
//! elimination lemma and applies it. The submodules hold the equality-free
//! variant with its closed-form result, auxiliary definitions with
//! Ackermann's lemma, and the devices for polyadic input.

mod definitions;
mod noeq;
mod polyadic;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::counting::{counting_normal_form, negate_boolean};
use crate::error::{Error, Result};
use crate::formula::{classify, complement, substitute, Formula, FormulaClass, FreshNames, Quantifier, Term};
use crate::rewriter::{dnf_clauses, simplify, Lit, DEFAULT_SIZE_LIMIT};

pub use definitions::{
    ackermann_input, ackermann_lemma_elim, definition, expand_definition, intro_definition, DefinitionDirection,
};
pub use noeq::{build_hauptform_noeq, crude_resultant, eliminate_noeq, hauptform_noeq_elim, simultaneous_elim};
pub use polyadic::{
    decode, eliminate_polyadic, polyadic_monadize, quantifier_switch, Monadization, PolyadicOutcome, Shorthand,
};

/// One conjunct of a Hauptform: the counting index and the p-free part.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Group {
    pub count: u32,
    pub body: Formula,
}

impl Group {
    pub fn new(count: u32, body: Formula) -> Self {
        Group { count, body }
    }

    pub fn plain(body: Formula) -> Self {
        Group { count: 1, body }
    }
}

/// `∃p (⋀ ∀^(<a_i)x (A_i ∨ px) ∧ ⋀ ∀^(<b_i)x (B_i ∨ ¬px) ∧ ⋀ ∃≥c_i x (C_i ∧ px) ∧ ⋀ ∃≥d_i x (D_i ∧ ¬px))`.
/// Without `generalized` every count is 1 and plain quantifiers are used.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hauptform {
    pub eliminand: String,
    pub var: String,
    pub a: Vec<Group>,
    pub b: Vec<Group>,
    pub c: Vec<Group>,
    pub d: Vec<Group>,
    pub generalized: bool,
}

impl Hauptform {
    pub fn new(eliminand: impl Into<String>, var: impl Into<String>) -> Self {
        Hauptform {
            eliminand: eliminand.into(),
            var: var.into(),
            a: Vec::new(),
            b: Vec::new(),
            c: Vec::new(),
            d: Vec::new(),
            generalized: false,
        }
    }

    fn groups(&self) -> impl Iterator<Item = &Group> {
        self.a.iter().chain(&self.b).chain(&self.c).chain(&self.d)
    }

    /// Set `generalized` exactly when some count differs from 1.
    pub fn normalize_flag(mut self) -> Self {
        let generalized = self.groups().any(|g| g.count != 1);
        self.generalized = generalized;
        self
    }

    pub fn check(&self) -> Result<()> {
        for g in self.groups() {
            if g.count == 0 {
                return Err(Error::BadCount(0));
            }
            if !self.generalized && g.count != 1 {
                return Err(Error::Shape(format!("count {} in a plain Hauptform", g.count)));
            }
            if g.body.mentions_pred(&self.eliminand) {
                return Err(Error::EliminandOccurs(format!("{} occurs in {}", self.eliminand, g.body)));
            }
        }
        Ok(())
    }

    fn px(&self) -> Formula {
        Formula::unary(self.eliminand.clone(), Term::var(&self.var))
    }

    fn quant(&self, universal: bool, count: u32) -> Quantifier {
        match (universal, self.generalized) {
            (true, false) => Quantifier::Forall,
            (false, false) => Quantifier::Exists,
            (true, true) => Quantifier::AllBut(count),
            (false, true) => Quantifier::AtLeast(count),
        }
    }

    /// The conjunction under `∃p`.
    pub fn matrix(&self) -> Formula {
        let px = self.px();
        let npx = Formula::not(px.clone());
        let x = &self.var;
        let mut out = Vec::new();
        for g in &self.a {
            out.push(Formula::quant(self.quant(true, g.count), x, Formula::or([g.body.clone(), px.clone()])));
        }
        for g in &self.b {
            out.push(Formula::quant(self.quant(true, g.count), x, Formula::or([g.body.clone(), npx.clone()])));
        }
        for g in &self.c {
            out.push(Formula::quant(self.quant(false, g.count), x, Formula::and([g.body.clone(), px.clone()])));
        }
        for g in &self.d {
            out.push(Formula::quant(self.quant(false, g.count), x, Formula::and([g.body.clone(), npx.clone()])));
        }
        Formula::and(out)
    }

    pub fn to_formula(&self) -> Formula {
        Formula::exists_pred(self.eliminand.clone(), 1, self.matrix())
    }
}

impl fmt::Display for Hauptform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_formula())
    }
}

/// A disjunct of the normalized body: the part without the eliminand and,
/// if the eliminand occurs, its Hauptform.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HauptformDisjunct {
    pub rest: Formula,
    pub form: Option<Hauptform>,
}

/// `∃p F` as a disjunction of Hauptform disjuncts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HauptformSplit {
    pub eliminand: String,
    pub disjuncts: Vec<HauptformDisjunct>,
}

impl HauptformSplit {
    pub fn to_formula(&self) -> Formula {
        Formula::or(self.disjuncts.iter().map(|d| match &d.form {
            Some(h) => Formula::and([d.rest.clone(), h.to_formula()]),
            None => d.rest.clone(),
        }))
    }
}

/// The left side of the basic elimination lemma, reached from a Hauptform:
/// `∃prefix (guard ∧ ∃p (∀x (A ∨ px) ∧ ∀x (B ∨ ¬px)))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasicShape {
    pub eliminand: String,
    pub prefix: Vec<String>,
    pub guard: Formula,
    pub var: String,
    pub a: Formula,
    pub b: Formula,
}

impl BasicShape {
    pub fn to_formula(&self) -> Formula {
        let px = Formula::unary(self.eliminand.clone(), Term::var(&self.var));
        let inner = Formula::exists_pred(
            self.eliminand.clone(),
            1,
            Formula::and([
                Formula::forall(&self.var, Formula::or([self.a.clone(), px.clone()])),
                Formula::forall(&self.var, Formula::or([self.b.clone(), Formula::not(px)])),
            ]),
        );
        self.wrap(inner)
    }

    fn wrap(&self, inner: Formula) -> Formula {
        let body = Formula::and([self.guard.clone(), inner]);
        self.prefix.iter().rev().fold(body, |acc, v| Formula::exists(v, acc))
    }

    /// Apply the basic elimination lemma under the prefix.
    pub fn eliminate(&self) -> Result<Formula> {
        Ok(self.wrap(basic_elim(&self.var, &self.a, &self.b, &self.eliminand)?))
    }
}

/// `∃p (∀x (A ∨ px) ∧ ∀x (B ∨ ¬px)) ≡ ∀x (A ∨ B)`.
pub fn basic_elim(x: &str, a: &Formula, b: &Formula, p: &str) -> Result<Formula> {
    for side in [a, b] {
        if side.mentions_pred(p) {
            return Err(Error::EliminandOccurs(format!("{p} occurs in {side}")));
        }
    }
    Ok(Formula::forall(x, Formula::or([a.clone(), b.clone()])))
}

pub(crate) fn is_basic(f: &Formula) -> bool {
    matches!(f, Formula::Atom(..) | Formula::Eq(..) | Formula::Quant(..))
}

pub(crate) fn require_class(f: &Formula, class: FormulaClass) -> Result<()> {
    let got = classify(f);
    if !got.within(class) {
        return Err(Error::Class(format!("expected a {class} formula, got {got}")));
    }
    Ok(())
}

/// Arity with which `p` occurs in `f`, if at all.
pub(crate) fn arity_in(f: &Formula, p: &str) -> Option<usize> {
    f.all_preds().into_iter().find(|(q, _)| q == p).map(|(_, n)| n)
}

fn basic_literals(body: &Formula) -> Vec<Formula> {
    match body {
        Formula::True => Vec::new(),
        Formula::And(v) => v.clone(),
        f => vec![f.clone()],
    }
}

/// Sort the literals of one normalized clause into the part without `p`
/// and the Hauptform groups.
fn clause_hauptform(p: &str, x: &str, clause: &[Lit]) -> Result<HauptformDisjunct> {
    let mut rest = Vec::new();
    let mut h = Hauptform::new(p, x);
    let xt = Term::var(x);
    for l in clause {
        if !l.atom.mentions_pred(p) {
            rest.push(l.to_formula());
            continue;
        }
        match &l.atom {
            Formula::Atom(_, args) if args.len() == 1 => {
                let g = Group::plain(Formula::neq(xt.clone(), args[0].clone()));
                if l.pos {
                    h.a.push(g);
                } else {
                    h.b.push(g);
                }
            }
            Formula::Quant(q @ (Quantifier::Exists | Quantifier::AtLeast(_)), y, body) => {
                let n = match q {
                    Quantifier::AtLeast(n) => *n,
                    _ => 1,
                };
                let lits = basic_literals(body);
                let pos_p = Formula::unary(p, Term::var(y));
                let neg_p = Formula::not(pos_p.clone());
                let positive_p = lits.contains(&pos_p);
                if !positive_p && !lits.contains(&neg_p) {
                    return Err(Error::Shape(format!("{} is not a basic formula over {y}", l.atom)));
                }
                let others: Vec<Formula> = lits
                    .into_iter()
                    .filter(|m| *m != pos_p && *m != neg_p)
                    .map(|m| substitute(&m, y, &xt))
                    .collect::<Result<_>>()?;
                match (l.pos, positive_p) {
                    (true, true) => h.c.push(Group::new(n, Formula::and(others))),
                    (true, false) => h.d.push(Group::new(n, Formula::and(others))),
                    (false, true) => h.b.push(Group::new(n, Formula::or(others.iter().map(complement)))),
                    (false, false) => h.a.push(Group::new(n, Formula::or(others.iter().map(complement)))),
                }
            }
            other => return Err(Error::Shape(format!("{other} is not a basic formula"))),
        }
    }
    let has_p = !(h.a.is_empty() && h.b.is_empty() && h.c.is_empty() && h.d.is_empty());
    Ok(HauptformDisjunct { rest: Formula::and(rest), form: has_p.then(|| h.normalize_flag()) })
}

pub(crate) fn split_with(p: &str, normalized: &Formula, names: &mut FreshNames) -> Result<HauptformSplit> {
    let x = names.prefer("x");
    let clauses = dnf_clauses(normalized, &is_basic, DEFAULT_SIZE_LIMIT)?;
    let disjuncts = clauses.iter().map(|c| clause_hauptform(p, &x, c)).collect::<Result<_>>()?;
    Ok(HauptformSplit { eliminand: p.to_string(), disjuncts })
}

/// `∃p F` with every occurrence of `p` inside a generalized Hauptform.
pub fn build_hauptform(p: &str, f: &Formula) -> Result<HauptformSplit> {
    require_class(f, FormulaClass::MonEq)?;
    if let Some(n) = arity_in(f, p).filter(|n| *n != 1) {
        return Err(Error::BadArgs(format!("{p} has arity {n}, expected 1")));
    }
    let normalized = counting_normal_form(f)?;
    let mut names = FreshNames::for_formula(f);
    names.reserve_formula(&normalized);
    split_with(p, &normalized, &mut names)
}

/// `∃p F` for nullary `p` as a disjunction whose only occurrences of `p`
/// sit in `∃p p` or `∃p ¬p`.
pub fn normalize_nullary(p: &str, f: &Formula) -> Result<Formula> {
    require_class(f, FormulaClass::MonEq)?;
    if let Some(n) = arity_in(f, p).filter(|n| *n != 0) {
        return Err(Error::BadArgs(format!("{p} has arity {n}, expected 0")));
    }
    let normalized = counting_normal_form(f)?;
    let clauses = dnf_clauses(&normalized, &is_basic, DEFAULT_SIZE_LIMIT)?;
    let atom = Formula::nullary(p);
    Ok(Formula::or(clauses.into_iter().map(|c| {
        let (with_p, rest): (Vec<Lit>, Vec<Lit>) = c.into_iter().partition(|l| l.atom == atom);
        let mut out: Vec<Formula> = rest.iter().map(Lit::to_formula).collect();
        if let Some(l) = with_p.first() {
            out.push(Formula::exists_pred(p, 0, l.to_formula()));
        }
        Formula::and(out)
    })))
}

fn replace_nullary_blocks(f: &Formula, p: &str) -> Formula {
    match f {
        Formula::Quant(Quantifier::ExistsPred(0), q, _) if q == p => Formula::True,
        Formula::And(v) => Formula::and(v.iter().map(|g| replace_nullary_blocks(g, p))),
        Formula::Or(v) => Formula::or(v.iter().map(|g| replace_nullary_blocks(g, p))),
        f => f.clone(),
    }
}

fn fresh_group_vars(names: &mut FreshNames, stem: &str, n: u32) -> Vec<String> {
    (0..n).map(|_| names.fresh(stem)).collect()
}

pub(crate) fn hauptform_to_basic_with(h: &Hauptform, names: &mut FreshNames) -> Result<BasicShape> {
    h.check()?;
    let x = &h.var;
    let xt = Term::var(x);
    let mut prefix = Vec::new();
    let mut guard = Vec::new();
    let mut a = Vec::new();
    let mut b = Vec::new();
    // ∀^(<n) expands linearly: n−1 existential exceptions.
    for (groups, out, stem) in [(&h.a, &mut a, "x"), (&h.b, &mut b, "y")] {
        for g in groups {
            let vs = fresh_group_vars(names, stem, g.count - 1);
            out.push(Formula::or(
                std::iter::once(g.body.clone()).chain(vs.iter().map(|v| Formula::eq(xt.clone(), Term::var(v)))),
            ));
            prefix.extend(vs);
        }
    }
    // ∃≥n expands polynomially: n distinct witnesses.
    for (groups, out, stem) in [(&h.c, &mut a, "u"), (&h.d, &mut b, "v")] {
        for g in groups {
            let vs = fresh_group_vars(names, stem, g.count);
            for (j, v) in vs.iter().enumerate() {
                guard.push(substitute(&g.body, x, &Term::var(v))?);
                for w in &vs[j + 1..] {
                    guard.push(Formula::neq(Term::var(v), Term::var(w)));
                }
            }
            out.extend(vs.iter().map(|v| Formula::neq(xt.clone(), Term::var(v))));
            prefix.extend(vs);
        }
    }
    Ok(BasicShape {
        eliminand: h.eliminand.clone(),
        prefix,
        guard: Formula::and(guard),
        var: x.clone(),
        a: Formula::and(a),
        b: Formula::and(b),
    })
}

/// Expand the counting quantifiers of a Hauptform and hoist the witnesses,
/// reaching the shape of the basic elimination lemma.
pub fn hauptform_to_basic(h: &Hauptform) -> Result<BasicShape> {
    hauptform_to_basic_with(h, &mut FreshNames::for_formula(&h.to_formula()))
}

/// Named intermediate results of one elimination.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage {
    pub label: String,
    pub formula: Formula,
}

impl Stage {
    fn new(label: &str, formula: Formula) -> Self {
        Stage { label: label.to_string(), formula }
    }
}

fn eliminate_inner(p: &str, f: &Formula, mut stages: Option<&mut Vec<Stage>>) -> Result<Formula> {
    require_class(f, FormulaClass::MonEq)?;
    let result = match arity_in(f, p) {
        None => f.clone(),
        Some(0) => {
            let nf = normalize_nullary(p, f)?;
            if let Some(s) = stages.as_deref_mut() {
                s.push(Stage::new("nullary normal form", nf.clone()));
            }
            replace_nullary_blocks(&nf, p)
        }
        Some(1) => {
            let normalized = counting_normal_form(f)?;
            let mut names = FreshNames::for_formula(f);
            names.reserve_formula(&normalized);
            let split = split_with(p, &normalized, &mut names)?;
            let mut parts = Vec::new();
            let mut shapes = Vec::new();
            for d in &split.disjuncts {
                match &d.form {
                    None => parts.push(d.rest.clone()),
                    Some(h) => {
                        let shape = hauptform_to_basic_with(h, &mut names)?;
                        parts.push(Formula::and([d.rest.clone(), shape.eliminate()?]));
                        shapes.push(Formula::and([d.rest.clone(), shape.to_formula()]));
                    }
                }
            }
            if let Some(s) = stages.as_deref_mut() {
                s.push(Stage::new("normal form", normalized.clone()));
                s.push(Stage::new("hauptform", split.to_formula()));
                s.push(Stage::new("basic lemma shape", Formula::or(shapes)));
                s.push(Stage::new("raw result", Formula::or(parts.clone())));
            }
            Formula::or(parts)
        }
        Some(n) => return Err(Error::Class(format!("{p} has arity {n}"))),
    };
    let out = simplify(&result);
    if out.mentions_pred(p) {
        return Err(Error::EliminandOccurs(format!("{p} survived elimination")));
    }
    if let Some(s) = stages {
        s.push(Stage::new("result", out.clone()));
    }
    Ok(out)
}

/// First-order equivalent of `∃p F` for a MON= formula `F`.
pub fn eliminate_predicate(p: &str, f: &Formula) -> Result<Formula> {
    eliminate_inner(p, f, None)
}

/// As [`eliminate_predicate`], also returning the intermediate stages.
pub fn eliminate_predicate_traced(p: &str, f: &Formula) -> Result<(Formula, Vec<Stage>)> {
    let mut stages = Vec::new();
    let out = eliminate_inner(p, f, Some(&mut stages))?;
    Ok((out, stages))
}

fn eliminate_all_rec(f: &Formula) -> Result<Formula> {
    Ok(match f {
        Formula::Quant(q, p, g) if q.binds_predicate() => {
            let body = eliminate_all_rec(g)?;
            match q {
                Quantifier::ExistsPred(n) | Quantifier::ForallPred(n) if *n > 1 => {
                    return Err(Error::Class(format!("{p} has arity {n}")))
                }
                Quantifier::ExistsPred(_) => eliminate_predicate(p, &body)?,
                _ => negate_boolean(&eliminate_predicate(p, &negate_boolean(&body))?),
            }
        }
        Formula::Quant(q, x, g) => Formula::quant(*q, x.clone(), eliminate_all_rec(g)?),
        Formula::Not(g) => Formula::not(eliminate_all_rec(g)?),
        Formula::And(v) => Formula::and(v.iter().map(eliminate_all_rec).collect::<Result<Vec<_>>>()?),
        Formula::Or(v) => Formula::or(v.iter().map(eliminate_all_rec).collect::<Result<Vec<_>>>()?),
        f => f.clone(),
    })
}

/// Eliminate every predicate quantifier, innermost first and leftmost
/// among siblings. `∀p G` is treated as `¬∃p ¬G`.
pub fn eliminate_all(f: &Formula) -> Result<Formula> {
    require_class(f, FormulaClass::QMonEq)?;
    if !f.has_pred_quantifier() {
        return Ok(f.clone());
    }
    Ok(simplify(&eliminate_all_rec(f)?))
}
