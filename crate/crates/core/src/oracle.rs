//! Exhaustive finite-model semantics.
//!
//! Formulas are compiled to a slot-indexed form so that enumerating many
//! interpretations does not repeatedly resolve names. Predicate extensions
//! are bit sets over tuples, indexed by `Σ e_i·n^i`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{free_symbols, quantifier_rank, Formula, Quantifier, Term};

/// Default ceiling on domain sizes the oracle will enumerate.
pub const DEFAULT_MAX_DOMAIN: usize = 6;
/// Default ceiling on the number of interpretations visited by one check.
pub const DEFAULT_BUDGET: u64 = 20_000_000;
/// Largest tuple space a quantified predicate may range over.
const MAX_QUANTIFIED_TUPLES: usize = 24;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extension {
    pub arity: usize,
    pub bits: u64,
}

impl Extension {
    pub fn from_tuples(arity: usize, n: usize, tuples: &[Vec<usize>]) -> Self {
        let mut bits = 0;
        for t in tuples {
            bits |= 1 << tuple_index(t, n);
        }
        Extension { arity, bits }
    }

    pub fn contains(&self, tuple: &[usize], n: usize) -> bool {
        self.bits >> tuple_index(tuple, n) & 1 == 1
    }

    pub fn tuples(&self, n: usize) -> Vec<Vec<usize>> {
        let total = n.pow(self.arity as u32);
        (0..total)
            .filter(|i| self.bits >> i & 1 == 1)
            .map(|mut i| {
                let mut t = Vec::with_capacity(self.arity);
                for _ in 0..self.arity {
                    t.push(i % n);
                    i /= n;
                }
                t
            })
            .collect()
    }
}

fn tuple_index(t: &[usize], n: usize) -> usize {
    t.iter().rev().fold(0, |acc, &e| acc * n + e)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interpretation {
    pub domain_size: usize,
    pub preds: BTreeMap<String, Extension>,
    pub consts: BTreeMap<String, usize>,
    pub vars: BTreeMap<String, usize>,
}

impl Interpretation {
    pub fn new(domain_size: usize) -> Self {
        Interpretation { domain_size, preds: BTreeMap::new(), consts: BTreeMap::new(), vars: BTreeMap::new() }
    }

    pub fn with_pred(mut self, p: &str, tuples: &[Vec<usize>]) -> Self {
        let arity = tuples.first().map_or(1, Vec::len);
        self.preds.insert(p.to_string(), Extension::from_tuples(arity, self.domain_size, tuples));
        self
    }

    pub fn with_unary(self, p: &str, elems: &[usize]) -> Self {
        let tuples: Vec<Vec<usize>> = elems.iter().map(|&e| vec![e]).collect();
        let mut out = self.with_pred(p, &tuples);
        out.preds.get_mut(p).unwrap().arity = 1;
        out
    }

    pub fn with_nullary(mut self, p: &str, value: bool) -> Self {
        self.preds.insert(p.to_string(), Extension { arity: 0, bits: value as u64 });
        self
    }

    pub fn with_const(mut self, c: &str, e: usize) -> Self {
        self.consts.insert(c.to_string(), e);
        self
    }

    pub fn with_var(mut self, x: &str, e: usize) -> Self {
        self.vars.insert(x.to_string(), e);
        self
    }
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "domain size {}", self.domain_size)?;
        for (p, ext) in &self.preds {
            if ext.arity == 0 {
                writeln!(f, "{p} = {}", ext.bits & 1 == 1)?;
            } else {
                let items: Vec<String> = ext
                    .tuples(self.domain_size)
                    .iter()
                    .map(|t| {
                        if t.len() == 1 {
                            t[0].to_string()
                        } else {
                            let inner: Vec<String> = t.iter().map(usize::to_string).collect();
                            format!("({})", inner.join(", "))
                        }
                    })
                    .collect();
                writeln!(f, "{p} = {{{}}}", items.join(", "))?;
            }
        }
        for (c, e) in self.consts.iter().chain(&self.vars) {
            writeln!(f, "{c} = {e}")?;
        }
        Ok(())
    }
}

/// Symbols an enumeration has to interpret: predicates with arities and
/// individual names (constants and free variables).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub preds: Vec<(String, usize)>,
    pub consts: Vec<String>,
    pub vars: Vec<String>,
}

impl Signature {
    pub fn of(formulas: &[&Formula]) -> Result<Self> {
        let mut preds = BTreeMap::new();
        let mut consts = std::collections::BTreeSet::new();
        let mut vars = std::collections::BTreeSet::new();
        for f in formulas {
            let s = free_symbols(f);
            for (p, a) in s.preds {
                if let Some(&b) = preds.get(&p) {
                    if a != b {
                        return Err(Error::Arity { pred: p, first: b, second: a });
                    }
                }
                preds.insert(p, a);
            }
            consts.extend(s.consts);
            vars.extend(s.vars);
        }
        Ok(Signature {
            preds: preds.into_iter().collect(),
            consts: consts.into_iter().collect(),
            vars: vars.into_iter().collect(),
        })
    }
}

#[derive(Clone, Debug)]
enum Node {
    True,
    False,
    Atom(usize, Vec<usize>),
    Eq(usize, usize),
    Not(Box<Node>),
    And(Vec<Node>),
    Or(Vec<Node>),
    Ind(Quantifier, usize, Box<Node>),
    Pred { universal: bool, slot: usize, arity: usize, body: Box<Node> },
}

/// A formula compiled against a signature. Individual slots are the
/// signature's constants, then its free variables, then bound variables;
/// predicate slots are the signature's predicates, then bound predicates.
#[derive(Clone, Debug)]
pub struct Compiled {
    root: Node,
    ind_slots: usize,
    pred_slots: usize,
    max_pred_arity: usize,
}

struct CompileCtx<'a> {
    sig: &'a Signature,
    inds: Vec<(String, usize)>,
    preds: Vec<(String, usize)>,
    next_ind: usize,
    next_pred: usize,
    max_ind: usize,
    max_pred: usize,
    max_pred_arity: usize,
}

impl CompileCtx<'_> {
    fn term(&self, t: &Term) -> Result<usize> {
        match t {
            Term::Var(x) => {
                if let Some((_, s)) = self.inds.iter().rev().find(|(n, _)| n == x) {
                    return Ok(*s);
                }
                self.sig
                    .vars
                    .iter()
                    .position(|v| v == x)
                    .map(|i| self.sig.consts.len() + i)
                    .ok_or_else(|| Error::MissingSymbol(x.clone()))
            }
            Term::Const(c) => self.sig.consts.iter().position(|v| v == c).ok_or_else(|| Error::MissingSymbol(c.clone())),
        }
    }

    fn pred(&self, p: &str, arity: usize) -> Result<usize> {
        if let Some((_, s)) = self.preds.iter().rev().find(|(n, _)| n == p) {
            return Ok(*s);
        }
        self.sig
            .preds
            .iter()
            .position(|(q, a)| q == p && *a == arity)
            .ok_or_else(|| Error::MissingSymbol(p.to_string()))
    }

    fn compile(&mut self, f: &Formula) -> Result<Node> {
        Ok(match f {
            Formula::True => Node::True,
            Formula::False => Node::False,
            Formula::Atom(p, args) => {
                let slot = self.pred(p, args.len())?;
                Node::Atom(slot, args.iter().map(|t| self.term(t)).collect::<Result<_>>()?)
            }
            Formula::Eq(t, s) => Node::Eq(self.term(t)?, self.term(s)?),
            Formula::Not(g) => Node::Not(Box::new(self.compile(g)?)),
            Formula::And(v) => Node::And(v.iter().map(|c| self.compile(c)).collect::<Result<_>>()?),
            Formula::Or(v) => Node::Or(v.iter().map(|c| self.compile(c)).collect::<Result<_>>()?),
            Formula::Quant(q, x, g) if q.binds_predicate() => {
                let arity = match q {
                    Quantifier::ForallPred(a) | Quantifier::ExistsPred(a) => *a,
                    _ => unreachable!(),
                };
                let slot = self.next_pred;
                self.next_pred += 1;
                self.max_pred = self.max_pred.max(self.next_pred);
                self.max_pred_arity = self.max_pred_arity.max(arity);
                self.preds.push((x.clone(), slot));
                let body = self.compile(g);
                self.preds.pop();
                self.next_pred -= 1;
                Node::Pred { universal: q.is_universal(), slot, arity, body: Box::new(body?) }
            }
            Formula::Quant(q, x, g) => {
                let slot = self.next_ind;
                self.next_ind += 1;
                self.max_ind = self.max_ind.max(self.next_ind);
                self.inds.push((x.clone(), slot));
                let body = self.compile(g);
                self.inds.pop();
                self.next_ind -= 1;
                Node::Ind(*q, slot, Box::new(body?))
            }
        })
    }
}

impl Compiled {
    pub fn new(f: &Formula, sig: &Signature) -> Result<Self> {
        let base_ind = sig.consts.len() + sig.vars.len();
        let mut ctx = CompileCtx {
            sig,
            inds: Vec::new(),
            preds: Vec::new(),
            next_ind: base_ind,
            next_pred: sig.preds.len(),
            max_ind: base_ind,
            max_pred: sig.preds.len(),
            max_pred_arity: 0,
        };
        let root = ctx.compile(f)?;
        Ok(Compiled { root, ind_slots: ctx.max_ind, pred_slots: ctx.max_pred, max_pred_arity: ctx.max_pred_arity })
    }

    fn check_domain(&self, n: usize, budget: u64) -> Result<()> {
        if self.max_pred_arity > 0 && n.pow(self.max_pred_arity as u32) > MAX_QUANTIFIED_TUPLES {
            return Err(Error::BudgetExceeded { limit: budget });
        }
        Ok(())
    }

    /// Evaluate with the given individual values and predicate extensions for
    /// the signature's slots.
    pub fn eval(&self, n: usize, inds: &[usize], exts: &[u64]) -> bool {
        let mut vals = vec![0; self.ind_slots.max(inds.len())];
        vals[..inds.len()].copy_from_slice(inds);
        let mut ps = vec![0; self.pred_slots.max(exts.len())];
        ps[..exts.len()].copy_from_slice(exts);
        eval_node(&self.root, n, &mut vals, &mut ps)
    }
}

fn eval_node(node: &Node, n: usize, vals: &mut [usize], exts: &mut [u64]) -> bool {
    match node {
        Node::True => true,
        Node::False => false,
        Node::Atom(p, args) => {
            let idx = args.iter().rev().fold(0, |acc, &s| acc * n + vals[s]);
            exts[*p] >> idx & 1 == 1
        }
        Node::Eq(a, b) => vals[*a] == vals[*b],
        Node::Not(g) => !eval_node(g, n, vals, exts),
        Node::And(v) => v.iter().all(|c| eval_node(c, n, vals, exts)),
        Node::Or(v) => v.iter().any(|c| eval_node(c, n, vals, exts)),
        Node::Ind(q, slot, body) => {
            let sat = |e: usize, vals: &mut [usize], exts: &mut [u64]| {
                vals[*slot] = e;
                eval_node(body, n, vals, exts)
            };
            match q {
                Quantifier::Forall => (0..n).all(|e| sat(e, vals, exts)),
                Quantifier::Exists => (0..n).any(|e| sat(e, vals, exts)),
                Quantifier::AtLeast(k) => {
                    let k = *k as usize;
                    let mut count = 0;
                    for e in 0..n {
                        if count + (n - e) < k {
                            return false;
                        }
                        if sat(e, vals, exts) {
                            count += 1;
                            if count >= k {
                                return true;
                            }
                        }
                    }
                    count >= k
                }
                Quantifier::AllBut(k) => {
                    let k = *k as usize;
                    let mut failures = 0;
                    for e in 0..n {
                        if !sat(e, vals, exts) {
                            failures += 1;
                            if failures >= k {
                                return false;
                            }
                        }
                    }
                    true
                }
                _ => unreachable!(),
            }
        }
        Node::Pred { universal, slot, arity, body } => {
            let tuples = n.pow(*arity as u32);
            let saved = exts[*slot];
            let mut result = *universal;
            for bits in 0..(1u64 << tuples) {
                exts[*slot] = bits;
                let v = eval_node(body, n, vals, exts);
                if v != *universal {
                    result = v;
                    break;
                }
            }
            exts[*slot] = saved;
            result
        }
    }
}

/// Truth value of `f` in `interp`.
pub fn evaluate(f: &Formula, interp: &Interpretation) -> Result<bool> {
    let sig = Signature::of(&[f])?;
    let compiled = Compiled::new(f, &sig)?;
    compiled.check_domain(interp.domain_size, DEFAULT_BUDGET)?;
    let n = interp.domain_size;
    let mut inds = Vec::new();
    for c in &sig.consts {
        inds.push(*interp.consts.get(c).ok_or_else(|| Error::MissingSymbol(c.clone()))?);
    }
    for x in &sig.vars {
        let v = interp.vars.get(x).or_else(|| interp.consts.get(x));
        inds.push(*v.ok_or_else(|| Error::MissingSymbol(x.clone()))?);
    }
    if inds.iter().any(|&e| e >= n) {
        return Err(Error::BadArgs("denotation outside the domain".into()));
    }
    let mut exts = Vec::new();
    for (p, a) in &sig.preds {
        let ext = interp.preds.get(p).ok_or_else(|| Error::MissingSymbol(p.clone()))?;
        if ext.arity != *a {
            return Err(Error::Arity { pred: p.clone(), first: ext.arity, second: *a });
        }
        exts.push(ext.bits);
    }
    Ok(compiled.eval(n, &inds, &exts))
}

/// q·2^m with q the quantifier rank (counting quantifiers weighted by their
/// index) and m the number of distinct predicate symbols; never below 1.
pub fn small_model_bound(f: &Formula) -> usize {
    let q = quantifier_rank(f);
    let m = f.all_preds().len();
    (q.saturating_mul(1usize.checked_shl(m as u32).unwrap_or(usize::MAX))).max(1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_domain: usize,
    pub budget: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_domain: DEFAULT_MAX_DOMAIN, budget: DEFAULT_BUDGET }
    }
}

/// Enumerate interpretations of `sig` over domain sizes `sizes` in the
/// canonical order (size ascending, then predicate extensions
/// lexicographically, then constants, then free variables) and return the
/// first one on which `pred` holds.
pub fn search(
    sig: &Signature,
    sizes: std::ops::RangeInclusive<usize>,
    limits: Limits,
    mut pred: impl FnMut(usize, &[usize], &[u64]) -> bool,
) -> Result<Option<Interpretation>> {
    if *sizes.end() > limits.max_domain {
        return Err(Error::BudgetExceeded { limit: limits.budget });
    }
    let mut visited: u64 = 0;
    for n in sizes {
        let mut radices: Vec<u64> = Vec::new();
        for (_, a) in &sig.preds {
            let tuples = n.pow(*a as u32);
            if tuples >= 64 {
                return Err(Error::BudgetExceeded { limit: limits.budget });
            }
            radices.push(1u64 << tuples);
        }
        let individuals = sig.consts.len() + sig.vars.len();
        radices.extend(std::iter::repeat(n as u64).take(individuals));
        let total = radices.iter().try_fold(1u64, |acc, &r| acc.checked_mul(r));
        match total {
            Some(t) if visited.saturating_add(t) <= limits.budget => visited += t,
            _ => return Err(Error::BudgetExceeded { limit: limits.budget }),
        }
        let np = sig.preds.len();
        let mut digits = vec![0u64; radices.len()];
        let mut inds = vec![0usize; individuals];
        let mut exts = vec![0u64; np];
        loop {
            for (i, d) in digits.iter().enumerate() {
                if i < np {
                    exts[i] = *d;
                } else {
                    inds[i - np] = *d as usize;
                }
            }
            if pred(n, &inds, &exts) {
                let mut interp = Interpretation::new(n);
                for (i, (p, a)) in sig.preds.iter().enumerate() {
                    interp.preds.insert(p.clone(), Extension { arity: *a, bits: exts[i] });
                }
                for (i, c) in sig.consts.iter().enumerate() {
                    interp.consts.insert(c.clone(), inds[i]);
                }
                for (i, x) in sig.vars.iter().enumerate() {
                    interp.vars.insert(x.clone(), inds[sig.consts.len() + i]);
                }
                return Ok(Some(interp));
            }
            // Last digit varies fastest, giving lexicographic order.
            let mut carry = true;
            let mut i = digits.len();
            while carry && i > 0 {
                i -= 1;
                digits[i] += 1;
                if digits[i] < radices[i] {
                    carry = false;
                } else {
                    digits[i] = 0;
                }
            }
            if carry {
                break;
            }
        }
    }
    Ok(None)
}

fn compile_pair(f: &Formula, g: &Formula, max_domain: usize, limits: Limits) -> Result<(Signature, Compiled, Compiled)> {
    let sig = Signature::of(&[f, g])?;
    let cf = Compiled::new(f, &sig)?;
    let cg = Compiled::new(g, &sig)?;
    cf.check_domain(max_domain, limits.budget)?;
    cg.check_domain(max_domain, limits.budget)?;
    Ok((sig, cf, cg))
}

/// First interpretation with domain size ≤ `max_domain` on which `f` and `g`
/// differ, or `None`.
pub fn check_equiv(f: &Formula, g: &Formula, max_domain: usize) -> Result<Option<Interpretation>> {
    check_equiv_with(f, g, 1..=max_domain, Limits::default())
}

pub fn check_equiv_with(
    f: &Formula,
    g: &Formula,
    sizes: std::ops::RangeInclusive<usize>,
    limits: Limits,
) -> Result<Option<Interpretation>> {
    let (sig, cf, cg) = compile_pair(f, g, *sizes.end(), limits)?;
    search(&sig, sizes, limits, |n, inds, exts| cf.eval(n, inds, exts) != cg.eval(n, inds, exts))
}

/// Predicate atoms of `f` with each argument resolved to a free individual
/// name, or `None` for a bound variable. Atoms of bound predicates are skipped.
fn atom_patterns(f: &Formula, bound: &mut Vec<String>, bound_preds: &mut Vec<String>, out: &mut Vec<(String, Vec<Option<String>>)>) {
    match f {
        Formula::Atom(p, args) if !bound_preds.contains(p) => {
            let args = args
                .iter()
                .map(|t| match t {
                    Term::Var(x) if bound.contains(x) => None,
                    t => Some(t.name().to_string()),
                })
                .collect();
            out.push((p.clone(), args));
        }
        Formula::Quant(q, x, b) => {
            if q.binds_predicate() {
                bound_preds.push(x.clone());
            } else {
                bound.push(x.clone());
            }
            atom_patterns(b, bound, bound_preds, out);
            if q.binds_predicate() {
                bound_preds.pop();
            } else {
                bound.pop();
            }
        }
        f => {
            for c in f.children() {
                atom_patterns(c, bound, bound_preds, out);
            }
        }
    }
}

/// As [`check_equiv_with`], but only the tuples that some atom of `f` or `g`
/// can address under the current values of the individual names are
/// enumerated; all others stay empty. Since no other tuple can influence
/// either formula, the check is exact, and it stays feasible for polyadic
/// formulas whose atoms mostly carry constants.
pub fn check_equiv_relevant(
    f: &Formula,
    g: &Formula,
    sizes: std::ops::RangeInclusive<usize>,
    limits: Limits,
) -> Result<Option<Interpretation>> {
    let (sig, cf, cg) = compile_pair(f, g, *sizes.end(), limits)?;
    let mut patterns = Vec::new();
    atom_patterns(f, &mut Vec::new(), &mut Vec::new(), &mut patterns);
    atom_patterns(g, &mut Vec::new(), &mut Vec::new(), &mut patterns);
    let names: Vec<&String> = sig.consts.iter().chain(&sig.vars).collect();
    let mut visited: u64 = 0;
    for n in sizes {
        if n > limits.max_domain || sig.preds.iter().any(|(_, a)| n.pow(*a as u32) >= 64) {
            return Err(Error::BudgetExceeded { limit: limits.budget });
        }
        let k = names.len();
        let mut inds = vec![0usize; k];
        loop {
            let value = |name: &str| names.iter().position(|c| *c == name).map(|i| inds[i]);
            // Relevant tuple indices for every signature predicate.
            let mut relevant: Vec<std::collections::BTreeSet<usize>> = vec![Default::default(); sig.preds.len()];
            for (p, args) in &patterns {
                let Some(slot) = sig.preds.iter().position(|(q, _)| q == p) else { continue };
                let mut tuples: Vec<Vec<usize>> = vec![Vec::new()];
                for a in args {
                    let choices: Vec<usize> = match a.as_deref().and_then(value) {
                        Some(e) => vec![e],
                        None => (0..n).collect(),
                    };
                    tuples = tuples
                        .into_iter()
                        .flat_map(|t| choices.iter().map(move |&e| [t.clone(), vec![e]].concat()))
                        .collect();
                }
                for t in tuples {
                    relevant[slot].insert(tuple_index(&t, n));
                }
            }
            let bits: Vec<(usize, usize)> =
                relevant.iter().enumerate().flat_map(|(slot, set)| set.iter().map(move |&i| (slot, i))).collect();
            if bits.len() >= 40 {
                return Err(Error::BudgetExceeded { limit: limits.budget });
            }
            let total = 1u64 << bits.len();
            visited = visited.saturating_add(total);
            if visited > limits.budget {
                return Err(Error::BudgetExceeded { limit: limits.budget });
            }
            let mut exts = vec![0u64; sig.preds.len()];
            for mask in 0..total {
                exts.iter_mut().for_each(|e| *e = 0);
                for (b, (slot, i)) in bits.iter().enumerate() {
                    if mask >> b & 1 == 1 {
                        exts[*slot] |= 1 << i;
                    }
                }
                if cf.eval(n, &inds, &exts) != cg.eval(n, &inds, &exts) {
                    let mut interp = Interpretation::new(n);
                    for (i, (p, a)) in sig.preds.iter().enumerate() {
                        interp.preds.insert(p.clone(), Extension { arity: *a, bits: exts[i] });
                    }
                    for (i, c) in sig.consts.iter().enumerate() {
                        interp.consts.insert(c.clone(), inds[i]);
                    }
                    for (i, x) in sig.vars.iter().enumerate() {
                        interp.vars.insert(x.clone(), inds[sig.consts.len() + i]);
                    }
                    return Ok(Some(interp));
                }
            }
            let mut i = k;
            let mut carry = true;
            while carry && i > 0 {
                i -= 1;
                inds[i] += 1;
                if inds[i] < n {
                    carry = false;
                } else {
                    inds[i] = 0;
                }
            }
            if carry {
                break;
            }
        }
    }
    Ok(None)
}

/// First interpretation satisfying `f` but not `g`, or `None` when `f`
/// entails `g` on all domains up to `max_domain`.
pub fn check_entails(f: &Formula, g: &Formula, max_domain: usize) -> Result<Option<Interpretation>> {
    let limits = Limits::default();
    let (sig, cf, cg) = compile_pair(f, g, max_domain, limits)?;
    search(&sig, 1..=max_domain, limits, |n, inds, exts| cf.eval(n, inds, exts) && !cg.eval(n, inds, exts))
}

/// First model of `f` with domain size within `sizes`.
pub fn find_model(f: &Formula, sizes: std::ops::RangeInclusive<usize>) -> Result<Option<Interpretation>> {
    let limits = Limits::default();
    let sig = Signature::of(&[f])?;
    let cf = Compiled::new(f, &sig)?;
    cf.check_domain(*sizes.end(), limits.budget)?;
    search(&sig, sizes, limits, |n, inds, exts| cf.eval(n, inds, exts))
}

/// Truth value of a formula without free symbols at domain size `n`.
pub fn eval_closed(f: &Formula, n: usize) -> Result<bool> {
    evaluate(f, &Interpretation::new(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{dual, nnf, rename_bound};
    use crate::syntax::parse;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let f = p("atleast 2 x. p(x)");
        assert!(evaluate(&f, &Interpretation::new(3).with_unary("p", &[0, 1])).unwrap());
        assert!(!evaluate(&f, &Interpretation::new(3).with_unary("p", &[0])).unwrap());
        let g = p("exists2 q. forall x. (q(x) <-> p(x))");
        for ext in 0..8u64 {
            let mut i = Interpretation::new(3);
            i.preds.insert("p".into(), Extension { arity: 1, bits: ext });
            assert!(evaluate(&g, &i).unwrap());
        }
    }

    #[test]
    fn missing_symbol_is_reported() {
        let f = p("p(a)");
        assert_eq!(evaluate(&f, &Interpretation::new(2).with_unary("p", &[0])), Err(Error::MissingSymbol("a".into())));
    }

    #[test]
    fn small_model_bound_examples() {
        assert_eq!(small_model_bound(&p("exists x. p(x)")), 2);
        assert_eq!(small_model_bound(&p("atleast 3 x. true")), 3);
        assert_eq!(small_model_bound(&p("p(a) & ~q")), 1);
    }

    #[test]
    fn check_equiv_examples() {
        let f = p("forall x. (p(x) & q(x))");
        let g = p("forall x. p(x) & forall x. q(x)");
        assert_eq!(check_equiv(&f, &g, 3).unwrap(), None);
        let exact = p("exists u. exists v. u != v");
        let crude = p("exists x. true & exists x. true");
        let cex = check_equiv(&exact, &crude, 2).unwrap().unwrap();
        assert_eq!(cex.domain_size, 1);
        assert_eq!(check_equiv(&f, &f, 4).unwrap(), None);
    }

    #[test]
    fn counterexamples_replay() {
        let f = p("forall x. (p(x) | q(a))");
        let g = p("forall x. p(x) | exists y. q(y)");
        let cex = check_equiv(&f, &g, 3).unwrap().unwrap();
        assert_ne!(evaluate(&f, &cex).unwrap(), evaluate(&g, &cex).unwrap());
        assert_eq!(check_equiv(&g, &f, 3).unwrap().map(|i| i.domain_size), Some(cex.domain_size));
    }

    #[test]
    fn first_counterexample_is_smallest() {
        let f = p("p(a)");
        let g = p("p(b)");
        let cex = check_equiv(&f, &g, 3).unwrap().unwrap();
        assert_eq!(cex.domain_size, 2);
        assert_eq!(cex.preds["p"].bits, 1);
        assert_eq!((cex.consts["a"], cex.consts["b"]), (0, 1));
    }

    #[test]
    fn domain_ceiling_is_enforced() {
        let f = p("p");
        assert!(matches!(check_equiv(&f, &f, 7), Err(Error::BudgetExceeded { .. })));
        let limits = Limits { max_domain: 8, budget: DEFAULT_BUDGET };
        assert_eq!(check_equiv_with(&f, &f, 1..=8, limits).unwrap(), None);
    }

    #[test]
    fn counting_one_is_plain_existential() {
        assert_eq!(check_equiv(&p("atleast 1 x. p(x)"), &p("exists x. p(x)"), 5).unwrap(), None);
        assert_eq!(check_equiv(&p("allbut 1 x. p(x)"), &p("forall x. p(x)"), 5).unwrap(), None);
        assert_eq!(check_equiv(&p("allbut 2 x. p(x)"), &p("~atleast 2 x. ~p(x)"), 5).unwrap(), None);
    }

    #[test]
    fn duality_matches_negated_atoms() {
        let f = p("forall x. (p(x) | exists y. (q(y) & x = y)) & atleast 2 z. r(z) & s");
        let mut negated = dual(&f);
        negated = negate_atoms(&negated);
        assert_eq!(check_equiv(&negated, &Formula::not(f.clone()), 3).unwrap(), None);
        assert_eq!(check_equiv(&nnf(&Formula::not(f.clone())), &Formula::not(f.clone()), 3).unwrap(), None);
        assert_eq!(check_equiv(&rename_bound(&f), &f, 3).unwrap(), None);
    }

    fn negate_atoms(f: &Formula) -> Formula {
        match f {
            Formula::Atom(..) | Formula::Eq(..) => Formula::not(f.clone()),
            Formula::Not(g) => Formula::not(negate_atoms(g)),
            Formula::And(v) => Formula::And(v.iter().map(negate_atoms).collect()),
            Formula::Or(v) => Formula::Or(v.iter().map(negate_atoms).collect()),
            Formula::Quant(q, x, g) => Formula::quant(*q, x.clone(), negate_atoms(g)),
            f => f.clone(),
        }
    }

    #[test]
    fn binary_predicates_and_quantifiers() {
        let f = p("exists2 f. (forall x. exists y. (a(x, y) & f(x, y)) & forall x. exists z. (b(x, z) & ~f(x, z)))");
        let g = p("forall x. exists y. exists z. (a(x, y) & b(x, z) & y != z)");
        assert_eq!(check_equiv(&f, &g, 2).unwrap(), None);
    }

    #[test]
    fn relevant_tuples_suffice() {
        let f = p("forall z. (f(a, z) | g(z, b))");
        let g = p("forall z. (g(z, b) | f(a, z))");
        assert_eq!(check_equiv_relevant(&f, &g, 1..=3, Limits::default()).unwrap(), None);
        let h = p("forall z. f(a, z)");
        let cex = check_equiv_relevant(&f, &h, 1..=3, Limits::default()).unwrap().unwrap();
        assert_ne!(evaluate(&f, &cex).unwrap(), evaluate(&h, &cex).unwrap());
        assert!(check_equiv(&f, &h, 2).unwrap().is_some());
        let q = p("exists2 r. forall z. (r(a, z) | f(z, z))");
        assert_eq!(check_equiv_relevant(&q, &Formula::True, 1..=2, Limits::default()).unwrap(), None);
    }
}
