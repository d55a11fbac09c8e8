//! Terms, formulas and the structural operations every pipeline builds on.
//!
//! Domains are always nonempty. `atleast 1 x. ⊤` is therefore valid and the
//! rewriting rules that drop vacuous quantifiers are sound.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Term {
    Var(String),
    Const(String),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Term {
        Term::Const(name.into())
    }

    pub fn name(&self) -> &str {
        match self {
            Term::Var(n) | Term::Const(n) => n,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn is_var_named(&self, x: &str) -> bool {
        matches!(self, Term::Var(n) if n == x)
    }
}

/// Binders. Counting quantifiers carry their index, predicate quantifiers
/// the arity of the bound predicate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Quantifier {
    Forall,
    Exists,
    /// ∃≥n
    AtLeast(u32),
    /// ∀^(<n), i.e. ¬∃≥n¬
    AllBut(u32),
    ForallPred(usize),
    ExistsPred(usize),
}

impl Quantifier {
    pub fn dual(self) -> Quantifier {
        match self {
            Quantifier::Forall => Quantifier::Exists,
            Quantifier::Exists => Quantifier::Forall,
            Quantifier::AtLeast(n) => Quantifier::AllBut(n),
            Quantifier::AllBut(n) => Quantifier::AtLeast(n),
            Quantifier::ForallPred(a) => Quantifier::ExistsPred(a),
            Quantifier::ExistsPred(a) => Quantifier::ForallPred(a),
        }
    }

    pub fn binds_predicate(self) -> bool {
        matches!(self, Quantifier::ForallPred(_) | Quantifier::ExistsPred(_))
    }

    pub fn is_counting(self) -> bool {
        matches!(self, Quantifier::AtLeast(_) | Quantifier::AllBut(_))
    }

    /// Universal in the sense of duality: ∀, ∀^(<n) and ∀ over predicates.
    pub fn is_universal(self) -> bool {
        matches!(self, Quantifier::Forall | Quantifier::AllBut(_) | Quantifier::ForallPred(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Formula {
    True,
    False,
    Atom(String, Vec<Term>),
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Quant(Quantifier, String, Box<Formula>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FormulaClass {
    Mon,
    MonEq,
    QMon,
    QMonEq,
    General,
}

impl FormulaClass {
    /// Subclass order of the lattice MON ⊂ MON= ⊂ QMON= and MON ⊂ QMON ⊂ QMON=.
    pub fn within(self, other: FormulaClass) -> bool {
        use FormulaClass::*;
        match (self, other) {
            (a, b) if a == b => true,
            (_, General) => true,
            (Mon, _) => true,
            (MonEq, QMonEq) | (QMon, QMonEq) => true,
            _ => false,
        }
    }
}

impl fmt::Display for FormulaClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FormulaClass::Mon => "MON",
            FormulaClass::MonEq => "MON=",
            FormulaClass::QMon => "QMON",
            FormulaClass::QMonEq => "QMON=",
            FormulaClass::General => "GENERAL",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Symbols {
    pub vars: BTreeSet<String>,
    pub consts: BTreeSet<String>,
    pub preds: BTreeSet<(String, usize)>,
}

impl Symbols {
    pub fn pred_names(&self) -> BTreeSet<String> {
        self.preds.iter().map(|(p, _)| p.clone()).collect()
    }

    /// Free variables and constants as terms.
    pub fn terms(&self) -> Vec<Term> {
        self.consts
            .iter()
            .map(|c| Term::Const(c.clone()))
            .chain(self.vars.iter().map(|v| Term::Var(v.clone())))
            .collect()
    }
}

impl Formula {
    pub fn atom(p: impl Into<String>, args: Vec<Term>) -> Formula {
        Formula::Atom(p.into(), args)
    }

    pub fn nullary(p: impl Into<String>) -> Formula {
        Formula::Atom(p.into(), Vec::new())
    }

    pub fn unary(p: impl Into<String>, t: Term) -> Formula {
        Formula::Atom(p.into(), vec![t])
    }

    pub fn eq(t: Term, s: Term) -> Formula {
        Formula::Eq(t, s)
    }

    pub fn neq(t: Term, s: Term) -> Formula {
        Formula::Not(Box::new(Formula::Eq(t, s)))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    /// Conjunction with nested conjunctions spliced in; a single child is
    /// returned as is and the empty conjunction is ⊤.
    pub fn and(items: impl IntoIterator<Item = Formula>) -> Formula {
        let mut out = Vec::new();
        for f in items {
            match f {
                Formula::And(v) => out.extend(v),
                f => out.push(f),
            }
        }
        match out.len() {
            0 => Formula::True,
            1 => out.pop().unwrap(),
            _ => Formula::And(out),
        }
    }

    pub fn or(items: impl IntoIterator<Item = Formula>) -> Formula {
        let mut out = Vec::new();
        for f in items {
            match f {
                Formula::Or(v) => out.extend(v),
                f => out.push(f),
            }
        }
        match out.len() {
            0 => Formula::False,
            1 => out.pop().unwrap(),
            _ => Formula::Or(out),
        }
    }

    pub fn quant(q: Quantifier, x: impl Into<String>, body: Formula) -> Formula {
        Formula::Quant(q, x.into(), Box::new(body))
    }

    pub fn forall(x: impl Into<String>, body: Formula) -> Formula {
        Formula::quant(Quantifier::Forall, x, body)
    }

    pub fn exists(x: impl Into<String>, body: Formula) -> Formula {
        Formula::quant(Quantifier::Exists, x, body)
    }

    pub fn at_least(n: u32, x: impl Into<String>, body: Formula) -> Formula {
        Formula::quant(Quantifier::AtLeast(n), x, body)
    }

    pub fn all_but(n: u32, x: impl Into<String>, body: Formula) -> Formula {
        Formula::quant(Quantifier::AllBut(n), x, body)
    }

    pub fn exists_pred(p: impl Into<String>, arity: usize, body: Formula) -> Formula {
        Formula::quant(Quantifier::ExistsPred(arity), p, body)
    }

    pub fn forall_pred(p: impl Into<String>, arity: usize, body: Formula) -> Formula {
        Formula::quant(Quantifier::ForallPred(arity), p, body)
    }

    /// A ∨ B written as an implication ¬A ∨ B.
    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::or([complement(&a), b])
    }

    /// Biconditional encoded as (¬A ∨ B) ∧ (A ∨ ¬B).
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and([
            Formula::or([complement(&a), b.clone()]),
            Formula::or([a, complement(&b)]),
        ])
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::True | Formula::False | Formula::Atom(..) | Formula::Eq(..))
    }

    /// An atom or a negated atom, truth values included.
    pub fn is_literal(&self) -> bool {
        match self {
            Formula::Not(g) => g.is_atomic(),
            f => f.is_atomic(),
        }
    }

    pub fn children(&self) -> &[Formula] {
        match self {
            Formula::And(v) | Formula::Or(v) => v,
            Formula::Not(g) | Formula::Quant(_, _, g) => std::slice::from_ref(&**g),
            _ => &[],
        }
    }

    pub fn children_mut(&mut self) -> &mut [Formula] {
        match self {
            Formula::And(v) | Formula::Or(v) => v,
            Formula::Not(g) | Formula::Quant(_, _, g) => std::slice::from_mut(&mut **g),
            _ => &mut [],
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(Formula::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(Formula::depth).max().unwrap_or(0)
    }

    pub fn at(&self, path: &[usize]) -> Option<&Formula> {
        let mut cur = self;
        for &i in path {
            cur = cur.children().get(i)?;
        }
        Some(cur)
    }

    pub fn at_mut(&mut self, path: &[usize]) -> Option<&mut Formula> {
        let mut cur = self;
        for &i in path {
            cur = cur.children_mut().get_mut(i)?;
        }
        Some(cur)
    }

    /// Binders enclosing the position, outermost first.
    pub fn binders_above(&self, path: &[usize]) -> Vec<(Quantifier, String)> {
        let mut out = Vec::new();
        let mut cur = self;
        for &i in path {
            if let Formula::Quant(q, x, _) = cur {
                out.push((*q, x.clone()));
            }
            match cur.children().get(i) {
                Some(c) => cur = c,
                None => break,
            }
        }
        out
    }

    pub fn free_symbols(&self) -> Symbols {
        free_symbols(self)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        free_symbols(self).vars
    }

    pub fn has_free_var(&self, x: &str) -> bool {
        match self {
            Formula::True | Formula::False => false,
            Formula::Atom(_, args) => args.iter().any(|t| t.is_var_named(x)),
            Formula::Eq(t, s) => t.is_var_named(x) || s.is_var_named(x),
            Formula::Quant(q, y, g) => (q.binds_predicate() || y != x) && g.has_free_var(x),
            f => f.children().iter().any(|c| c.has_free_var(x)),
        }
    }

    /// Whether the term occurs free (constants are always free).
    pub fn has_free_term(&self, t: &Term) -> bool {
        match t {
            Term::Var(x) => self.has_free_var(x),
            Term::Const(c) => self.mentions_const(c),
        }
    }

    pub fn mentions_const(&self, c: &str) -> bool {
        match self {
            Formula::Atom(_, args) => args.iter().any(|t| matches!(t, Term::Const(n) if n == c)),
            Formula::Eq(t, s) => [t, s].iter().any(|t| matches!(t, Term::Const(n) if n == c)),
            f => f.children().iter().any(|g| g.mentions_const(c)),
        }
    }

    /// Free occurrence of predicate `p`.
    pub fn has_free_pred(&self, p: &str) -> bool {
        match self {
            Formula::Atom(q, _) => q == p,
            Formula::Quant(q, y, g) => !(q.binds_predicate() && y == p) && g.has_free_pred(p),
            f => f.children().iter().any(|c| c.has_free_pred(p)),
        }
    }

    /// Any occurrence of the symbol `p` as predicate, bound or free, including binders.
    pub fn mentions_pred(&self, p: &str) -> bool {
        match self {
            Formula::Atom(q, _) => q == p,
            Formula::Quant(q, y, g) => (q.binds_predicate() && y == p) || g.mentions_pred(p),
            f => f.children().iter().any(|c| c.mentions_pred(p)),
        }
    }

    /// Every identifier in the formula: variables, constants and predicates,
    /// free or bound.
    pub fn all_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        collect_names(self, &mut out);
        out
    }

    /// Every predicate symbol with its arity, bound or free.
    pub fn all_preds(&self) -> BTreeSet<(String, usize)> {
        let mut out = BTreeSet::new();
        fn go(f: &Formula, out: &mut BTreeSet<(String, usize)>) {
            match f {
                Formula::Atom(p, args) => {
                    out.insert((p.clone(), args.len()));
                }
                Formula::Quant(Quantifier::ExistsPred(a) | Quantifier::ForallPred(a), p, g) => {
                    out.insert((p.clone(), *a));
                    go(g, out);
                }
                f => f.children().iter().for_each(|c| go(c, out)),
            }
        }
        go(self, &mut out);
        out
    }

    /// True when the formula has no quantifier of any kind.
    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Quant(..) => false,
            f => f.children().iter().all(Formula::is_quantifier_free),
        }
    }

    pub fn has_pred_quantifier(&self) -> bool {
        match self {
            Formula::Quant(q, _, g) => q.binds_predicate() || g.has_pred_quantifier(),
            f => f.children().iter().any(Formula::has_pred_quantifier),
        }
    }

    pub fn has_equality(&self) -> bool {
        match self {
            Formula::Eq(..) => true,
            f => f.children().iter().any(Formula::has_equality),
        }
    }

    pub fn has_counting(&self) -> bool {
        match self {
            Formula::Quant(q, _, g) => q.is_counting() || g.has_counting(),
            f => f.children().iter().any(Formula::has_counting),
        }
    }
}

fn collect_names(f: &Formula, out: &mut BTreeSet<String>) {
    let term = |t: &Term, out: &mut BTreeSet<String>| {
        out.insert(t.name().to_string());
    };
    match f {
        Formula::Atom(p, args) => {
            out.insert(p.clone());
            args.iter().for_each(|t| term(t, out));
        }
        Formula::Eq(t, s) => {
            term(t, out);
            term(s, out);
        }
        Formula::Quant(_, x, g) => {
            out.insert(x.clone());
            collect_names(g, out);
        }
        f => f.children().iter().for_each(|c| collect_names(c, out)),
    }
}

pub fn free_symbols(f: &Formula) -> Symbols {
    fn go(f: &Formula, bound_v: &mut Vec<String>, bound_p: &mut Vec<String>, out: &mut Symbols) {
        let term = |t: &Term, out: &mut Symbols| match t {
            Term::Var(x) if !bound_v.contains(x) => {
                out.vars.insert(x.clone());
            }
            Term::Var(_) => {}
            Term::Const(c) => {
                out.consts.insert(c.clone());
            }
        };
        match f {
            Formula::Atom(p, args) => {
                if !bound_p.contains(p) {
                    out.preds.insert((p.clone(), args.len()));
                }
                args.iter().for_each(|t| term(t, out));
            }
            Formula::Eq(t, s) => {
                term(t, out);
                term(s, out);
            }
            Formula::Quant(q, x, g) => {
                let stack = if q.binds_predicate() { &mut *bound_p } else { &mut *bound_v };
                stack.push(x.clone());
                go(g, bound_v, bound_p, out);
                if q.binds_predicate() {
                    bound_p.pop();
                } else {
                    bound_v.pop();
                }
            }
            f => f.children().iter().for_each(|c| go(c, bound_v, bound_p, out)),
        }
    }
    let mut out = Symbols::default();
    go(f, &mut Vec::new(), &mut Vec::new(), &mut out);
    out
}

/// Source of fresh names: a base name plus a numeric suffix, skipping every
/// name already reserved.
#[derive(Clone, Debug, Default)]
pub struct FreshNames {
    used: BTreeSet<String>,
    counters: BTreeMap<String, u32>,
}

impl FreshNames {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn for_formula(f: &Formula) -> Self {
        let mut names = Self::new();
        names.reserve_formula(f);
        names
    }

    pub fn reserve(&mut self, name: impl Into<String>) {
        self.used.insert(name.into());
    }

    pub fn reserve_formula(&mut self, f: &Formula) {
        self.used.extend(f.all_names());
    }

    pub fn is_used(&self, name: &str) -> bool {
        self.used.contains(name)
    }

    /// `base` itself when unused, otherwise a fresh variant of it.
    pub fn prefer(&mut self, base: &str) -> String {
        if self.used.insert(base.to_string()) {
            return base.to_string();
        }
        self.fresh(base)
    }

    pub fn fresh(&mut self, base: &str) -> String {
        let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
        let stem = if stem.is_empty() { "v" } else { stem };
        let counter = self.counters.entry(stem.to_string()).or_insert(0);
        loop {
            *counter += 1;
            let candidate = format!("{stem}{counter}");
            if !self.used.contains(&candidate) {
                self.used.insert(candidate.clone());
                return candidate;
            }
        }
    }
}

/// Replace free occurrences of the term `from` by `to`. Raises a capture
/// error when `to` is a variable that a binder above some replaced
/// occurrence would capture.
pub fn replace_term(f: &Formula, from: &Term, to: &Term) -> Result<Formula> {
    fn go(f: &Formula, from: &Term, to: &Term, bound: &mut Vec<String>) -> Result<Formula> {
        let sub = |t: &Term, bound: &Vec<String>| -> Result<Term> {
            if t == from {
                if let Term::Var(y) = to {
                    if bound.contains(y) {
                        return Err(Error::Capture(y.clone()));
                    }
                }
                Ok(to.clone())
            } else {
                Ok(t.clone())
            }
        };
        Ok(match f {
            Formula::Atom(p, args) => {
                Formula::Atom(p.clone(), args.iter().map(|t| sub(t, bound)).collect::<Result<_>>()?)
            }
            Formula::Eq(t, s) => Formula::Eq(sub(t, bound)?, sub(s, bound)?),
            Formula::Quant(q, x, g) => {
                if !q.binds_predicate() && from.is_var_named(x) {
                    return Ok(f.clone());
                }
                let pushed = !q.binds_predicate();
                if pushed {
                    bound.push(x.clone());
                }
                let body = go(g, from, to, bound);
                if pushed {
                    bound.pop();
                }
                Formula::Quant(*q, x.clone(), Box::new(body?))
            }
            Formula::Not(g) => Formula::Not(Box::new(go(g, from, to, bound)?)),
            Formula::And(v) => Formula::And(v.iter().map(|c| go(c, from, to, bound)).collect::<Result<_>>()?),
            Formula::Or(v) => Formula::Or(v.iter().map(|c| go(c, from, to, bound)).collect::<Result<_>>()?),
            Formula::True | Formula::False => f.clone(),
        })
    }
    if from == to {
        return Ok(f.clone());
    }
    go(f, from, to, &mut Vec::new())
}

/// Capture-avoiding replacement of the free variable `x` by `t`.
pub fn substitute(f: &Formula, x: &str, t: &Term) -> Result<Formula> {
    replace_term(f, &Term::Var(x.to_string()), t)
}

/// Replace every free atom `p(t1..tk)` by `body` with `params` instantiated
/// to the arguments. Raises a capture error if a free variable of `body`
/// (other than a parameter) or an argument variable would be captured.
pub fn substitute_pred(f: &Formula, p: &str, params: &[String], body: &Formula) -> Result<Formula> {
    let body_free: BTreeSet<String> = body
        .free_vars()
        .into_iter()
        .filter(|v| !params.contains(v))
        .collect();
    let mut names = FreshNames::for_formula(f);
    names.reserve_formula(body);
    params.iter().for_each(|x| names.reserve(x.clone()));
    fn go(
        f: &Formula,
        p: &str,
        params: &[String],
        body: &Formula,
        body_free: &BTreeSet<String>,
        bound: &mut Vec<String>,
        names: &mut FreshNames,
    ) -> Result<Formula> {
        Ok(match f {
            Formula::Atom(q, args) if q == p => {
                if args.len() != params.len() {
                    return Err(Error::BadArgs(format!("{p} applied to {} arguments", args.len())));
                }
                if let Some(v) = body_free.iter().find(|v| bound.contains(v)) {
                    return Err(Error::Capture(v.clone()));
                }
                // Rename parameters apart first so simultaneous instantiation
                // cannot confuse a parameter with an argument.
                let mut inst = rename_bound_with(body, names);
                let temps: Vec<String> = params.iter().map(|x| names.fresh(x)).collect();
                for (x, tmp) in params.iter().zip(&temps) {
                    inst = substitute(&inst, x, &Term::Var(tmp.clone()))?;
                }
                for (tmp, t) in temps.iter().zip(args) {
                    inst = substitute(&inst, tmp, t)?;
                }
                inst
            }
            Formula::Quant(q, y, g) if q.binds_predicate() && y == p => f.clone(),
            Formula::Quant(q, y, g) => {
                let pushed = !q.binds_predicate();
                if pushed {
                    bound.push(y.clone());
                }
                let r = go(g, p, params, body, body_free, bound, names);
                if pushed {
                    bound.pop();
                }
                Formula::Quant(*q, y.clone(), Box::new(r?))
            }
            Formula::Not(g) => Formula::Not(Box::new(go(g, p, params, body, body_free, bound, names)?)),
            Formula::And(v) => Formula::And(
                v.iter()
                    .map(|c| go(c, p, params, body, body_free, bound, names))
                    .collect::<Result<_>>()?,
            ),
            Formula::Or(v) => Formula::Or(
                v.iter()
                    .map(|c| go(c, p, params, body, body_free, bound, names))
                    .collect::<Result<_>>()?,
            ),
            _ => f.clone(),
        })
    }
    go(f, p, params, body, &body_free, &mut Vec::new(), &mut names)
}

/// Replace `p` by `q` in every free atom of `f`.
pub fn rename_pred(f: &Formula, p: &str, q: &str) -> Formula {
    match f {
        Formula::Atom(r, args) if r == p => Formula::Atom(q.to_string(), args.clone()),
        Formula::Quant(k, y, _) if k.binds_predicate() && y == p => f.clone(),
        Formula::Quant(k, y, g) => Formula::Quant(*k, y.clone(), Box::new(rename_pred(g, p, q))),
        Formula::Not(g) => Formula::Not(Box::new(rename_pred(g, p, q))),
        Formula::And(v) => Formula::And(v.iter().map(|c| rename_pred(c, p, q)).collect()),
        Formula::Or(v) => Formula::Or(v.iter().map(|c| rename_pred(c, p, q)).collect()),
        _ => f.clone(),
    }
}

/// ¬G ↦ G, otherwise F ↦ ¬F.
pub fn complement(f: &Formula) -> Formula {
    match f {
        Formula::Not(g) => (**g).clone(),
        f => Formula::not(f.clone()),
    }
}

/// Swap ⊤/⊥, ∧/∨ and every quantifier with its dual; atoms stay.
pub fn dual(f: &Formula) -> Formula {
    match f {
        Formula::True => Formula::False,
        Formula::False => Formula::True,
        Formula::Atom(..) | Formula::Eq(..) => f.clone(),
        Formula::Not(g) => Formula::not(dual(g)),
        Formula::And(v) => Formula::Or(v.iter().map(dual).collect()),
        Formula::Or(v) => Formula::And(v.iter().map(dual).collect()),
        Formula::Quant(q, x, g) => Formula::Quant(q.dual(), x.clone(), Box::new(dual(g))),
    }
}

/// Negation normal form: double negations removed and negations pushed
/// through ∧, ∨ and all quantifiers until they sit on atoms.
pub fn nnf(f: &Formula) -> Formula {
    match f {
        Formula::Not(g) => nnf_neg(g),
        Formula::And(v) => Formula::and(v.iter().map(nnf)),
        Formula::Or(v) => Formula::or(v.iter().map(nnf)),
        Formula::Quant(q, x, g) => Formula::quant(*q, x.clone(), nnf(g)),
        f => f.clone(),
    }
}

fn nnf_neg(f: &Formula) -> Formula {
    match f {
        Formula::Not(g) => nnf(g),
        Formula::And(v) => Formula::or(v.iter().map(nnf_neg)),
        Formula::Or(v) => Formula::and(v.iter().map(nnf_neg)),
        Formula::Quant(q, x, g) => Formula::quant(q.dual(), x.clone(), nnf_neg(g)),
        f => Formula::not(f.clone()),
    }
}

pub fn classify(f: &Formula) -> FormulaClass {
    let mut eq = false;
    let mut second = false;
    let mut general = false;
    fn go(f: &Formula, eq: &mut bool, second: &mut bool, general: &mut bool) {
        match f {
            Formula::Atom(_, args) if args.len() > 1 => *general = true,
            Formula::Eq(..) => *eq = true,
            Formula::Quant(q, _, g) => {
                match q {
                    Quantifier::ForallPred(a) | Quantifier::ExistsPred(a) => {
                        *second = true;
                        if *a > 1 {
                            *general = true;
                        }
                    }
                    Quantifier::AtLeast(n) | Quantifier::AllBut(n) if *n > 1 => *eq = true,
                    _ => {}
                }
                go(g, eq, second, general);
            }
            f => f.children().iter().for_each(|c| go(c, eq, second, general)),
        }
    }
    go(f, &mut eq, &mut second, &mut general);
    match (general, second, eq) {
        (true, _, _) => FormulaClass::General,
        (false, false, false) => FormulaClass::Mon,
        (false, false, true) => FormulaClass::MonEq,
        (false, true, false) => FormulaClass::QMon,
        (false, true, true) => FormulaClass::QMonEq,
    }
}

/// Give every individual binder a fresh, pairwise distinct name.
pub fn rename_bound(f: &Formula) -> Formula {
    let mut names = FreshNames::for_formula(f);
    rename_bound_with(f, &mut names)
}

pub fn rename_bound_with(f: &Formula, names: &mut FreshNames) -> Formula {
    match f {
        Formula::Quant(q, x, g) if !q.binds_predicate() => {
            let y = names.fresh(x);
            let body = rename_bound_with(g, names);
            let body = substitute(&body, x, &Term::Var(y.clone()))
                .expect("fresh binder names cannot be captured");
            Formula::Quant(*q, y, Box::new(body))
        }
        Formula::Quant(q, p, g) => Formula::Quant(*q, p.clone(), Box::new(rename_bound_with(g, names))),
        Formula::Not(g) => Formula::Not(Box::new(rename_bound_with(g, names))),
        Formula::And(v) => Formula::And(v.iter().map(|c| rename_bound_with(c, names)).collect()),
        Formula::Or(v) => Formula::Or(v.iter().map(|c| rename_bound_with(c, names)).collect()),
        f => f.clone(),
    }
}

/// Quantifier rank with counting quantifiers weighted by their index, the
/// rank of their first-order expansion.
pub fn quantifier_rank(f: &Formula) -> usize {
    match f {
        Formula::Quant(q, _, g) => {
            let w = match q {
                Quantifier::AtLeast(n) | Quantifier::AllBut(n) => *n as usize,
                Quantifier::Forall | Quantifier::Exists => 1,
                _ => 0,
            };
            w + quantifier_rank(g)
        }
        f => f.children().iter().map(quantifier_rank).max().unwrap_or(0),
    }
}
