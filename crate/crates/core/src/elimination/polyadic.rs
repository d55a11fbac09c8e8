//! Polyadic input that monadic techniques can still handle: quantifier
//! switching and the shorthand encoding of atoms with one varying argument.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{arity_in, eliminate_all, eliminate_predicate};
use crate::counting::negate_boolean;
use crate::error::{Error, Result};
use crate::formula::{classify, substitute, substitute_pred, Formula, FormulaClass, FreshNames, Quantifier, Term};
use crate::rewriter::simplify;

/// `∃p ∀x F[p x t̄] ≡ ∀x ∃q F[q t̄]`, and dually `∀p ∃x F ≡ ∃x ∀q F`.
/// `f` is the whole left side; `p` must have `x` as first argument in every
/// occurrence, and `x` must not be rebound in the matrix.
pub fn quantifier_switch(p: &str, x: &str, f: &Formula) -> Result<Formula> {
    let (pq, arity, inner) = match f {
        Formula::Quant(q @ (Quantifier::ExistsPred(n) | Quantifier::ForallPred(n)), name, g) if name == p => (*q, *n, g),
        _ => return Err(Error::Shape(format!("{f} does not start with a quantifier upon {p}"))),
    };
    let (iq, matrix) = match &**inner {
        Formula::Quant(q @ (Quantifier::Forall | Quantifier::Exists), y, m) if y == x => (*q, m),
        _ => return Err(Error::Shape(format!("no quantifier upon {x} directly below {p}"))),
    };
    if iq.is_universal() == pq.is_universal() {
        return Err(Error::Shape("quantifiers do not alternate".into()));
    }
    if !matrix.mentions_pred(p) {
        return Ok((**inner).clone());
    }
    if arity == 0 {
        return Err(Error::Shape(format!("{p} is nullary")));
    }
    let mut names = FreshNames::for_formula(f);
    let q = names.prefer("q");
    let switched = switch_atoms(matrix, p, x, &q, false)?;
    let new_pq = if pq.is_universal() {
        Quantifier::ForallPred(arity - 1)
    } else {
        Quantifier::ExistsPred(arity - 1)
    };
    Ok(Formula::quant(iq, x, Formula::quant(new_pq, q, switched)))
}

fn switch_atoms(f: &Formula, p: &str, x: &str, q: &str, shadowed: bool) -> Result<Formula> {
    Ok(match f {
        Formula::Atom(r, args) if r == p => {
            if shadowed || args.first().map_or(true, |t| !t.is_var_named(x)) {
                return Err(Error::Shape(format!("{f} does not have {x} as first argument")));
            }
            Formula::Atom(q.to_string(), args[1..].to_vec())
        }
        Formula::Quant(k, y, _) if k.binds_predicate() && y == p => {
            return Err(Error::Shape(format!("{p} is rebound")));
        }
        Formula::Quant(k, y, g) => {
            let sh = shadowed || (!k.binds_predicate() && y == x);
            if sh && g.mentions_pred(p) {
                return Err(Error::Shape(format!("{x} is rebound above an occurrence of {p}")));
            }
            Formula::Quant(*k, y.clone(), Box::new(switch_atoms(g, p, x, q, sh)?))
        }
        Formula::Not(g) => Formula::not(switch_atoms(g, p, x, q, shadowed)?),
        Formula::And(v) => Formula::And(v.iter().map(|c| switch_atoms(c, p, x, q, shadowed)).collect::<Result<_>>()?),
        Formula::Or(v) => Formula::Or(v.iter().map(|c| switch_atoms(c, p, x, q, shadowed)).collect::<Result<_>>()?),
        f => f.clone(),
    })
}

/// A unary or nullary predicate standing for a slice of a polyadic one:
/// `args` holds the fixed arguments and `None` at the varying position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shorthand {
    pub name: String,
    pub pred: String,
    pub args: Vec<Option<Term>>,
    /// Whether the shorthand replaces the quantified predicate.
    pub quantified: bool,
}

impl Shorthand {
    fn hole(&self) -> Option<usize> {
        self.args.iter().position(Option::is_none)
    }

    /// The atom this shorthand abbreviates, with `z` at the varying position.
    pub fn expansion(&self, z: &str) -> Formula {
        Formula::atom(
            self.pred.clone(),
            self.args.iter().map(|a| a.clone().unwrap_or_else(|| Term::var(z))).collect(),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Monadization {
    pub encoded: Formula,
    pub shorthands: Vec<Shorthand>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PolyadicOutcome {
    Monadized(Monadization),
    NotMonadizable(String),
}

struct Encoder<'a> {
    phi: &'a str,
    shorthands: Vec<Shorthand>,
    names: FreshNames,
}

impl Encoder<'_> {
    fn key(&mut self, pred: &str, args: Vec<Option<Term>>) -> String {
        if let Some(s) = self.shorthands.iter().find(|s| s.pred == pred && s.args == args) {
            return s.name.clone();
        }
        let name = self.names.fresh(&format!("{pred}_"));
        self.shorthands.push(Shorthand { name: name.clone(), pred: pred.to_string(), args, quantified: pred == self.phi });
        name
    }

    fn encode(&mut self, f: &Formula, bound: &mut Vec<String>) -> std::result::Result<Formula, String> {
        Ok(match f {
            Formula::Atom(p, args) if args.len() >= 2 => {
                let varying: Vec<usize> = (0..args.len())
                    .filter(|&i| matches!(&args[i], Term::Var(v) if bound.contains(v)))
                    .collect();
                if varying.len() > 1 {
                    return Err(format!("{f} relates two bound variables"));
                }
                let key_args =
                    args.iter().enumerate().map(|(i, t)| (!varying.contains(&i)).then(|| t.clone())).collect();
                let name = self.key(p, key_args);
                match varying.first() {
                    Some(&i) => Formula::unary(name, args[i].clone()),
                    None => Formula::nullary(name),
                }
            }
            Formula::Quant(q, y, g) if !q.binds_predicate() => {
                bound.push(y.clone());
                let body = self.encode(g, bound);
                bound.pop();
                Formula::quant(*q, y.clone(), body?)
            }
            Formula::Quant(..) => return Err(format!("nested predicate quantifier in {f}")),
            Formula::Not(g) => Formula::not(self.encode(g, bound)?),
            Formula::And(v) => Formula::And(v.iter().map(|c| self.encode(c, bound)).collect::<std::result::Result<_, _>>()?),
            Formula::Or(v) => Formula::Or(v.iter().map(|c| self.encode(c, bound)).collect::<std::result::Result<_, _>>()?),
            f => f.clone(),
        })
    }
}

fn fixed_eq(a: &[Option<Term>], b: &[Option<Term>], skip: &[usize]) -> Formula {
    Formula::and(
        (0..a.len())
            .filter(|i| !skip.contains(i))
            .filter_map(|i| match (&a[i], &b[i]) {
                (Some(s), Some(t)) if s != t => Some(Formula::eq(s.clone(), t.clone())),
                _ => None,
            }),
    )
}

/// Both shorthands are slices of the same relation; where the slices
/// overlap they must agree.
fn link(k1: &Shorthand, k2: &Shorthand, z: &str) -> Formula {
    let atom = |k: &Shorthand, t: Option<Term>| match t {
        Some(t) => Formula::unary(k.name.clone(), t),
        None => Formula::nullary(k.name.clone()),
    };
    let (agree, skip) = match (k1.hole(), k2.hole()) {
        (Some(i), Some(j)) if i == j => (
            Formula::forall(z, Formula::iff(atom(k1, Some(Term::var(z))), atom(k2, Some(Term::var(z))))),
            vec![i],
        ),
        (Some(i), Some(j)) => (Formula::iff(atom(k1, k2.args[i].clone()), atom(k2, k1.args[j].clone())), vec![i, j]),
        (Some(i), None) => (Formula::iff(atom(k1, k2.args[i].clone()), atom(k2, None)), vec![i]),
        (None, Some(j)) => (Formula::iff(atom(k1, None), atom(k2, k1.args[j].clone())), vec![j]),
        (None, None) => (Formula::iff(atom(k1, None), atom(k2, None)), vec![]),
    };
    let cond = fixed_eq(&k1.args, &k2.args, &skip);
    match cond {
        Formula::True => agree,
        cond => Formula::or([negate_boolean(&cond), agree]),
    }
}

/// Encode `∃φ G` (or `∀φ G`) with first-order `G` as a monadic problem.
/// Every atom with at least two arguments may have at most one argument
/// bound inside `G`; it is replaced by a unary shorthand over that
/// argument, or a nullary one if all arguments are fixed. The shorthands
/// for `φ` are quantified and tied together by linking constraints.
pub fn polyadic_monadize(f: &Formula, phi: &str) -> Result<PolyadicOutcome> {
    let (q, arity, body) = match f {
        Formula::Quant(q, p, g) if q.binds_predicate() && p == phi => {
            let n = match q {
                Quantifier::ExistsPred(n) | Quantifier::ForallPred(n) => *n,
                _ => unreachable!(),
            };
            (*q, n, &**g)
        }
        _ => return Err(Error::Shape(format!("{f} does not start with a quantifier upon {phi}"))),
    };
    if body.has_pred_quantifier() {
        return Err(Error::Class(format!("{body} is not first-order")));
    }
    let mut names = FreshNames::for_formula(f);
    let body = rename_clashing(body, &body.free_vars(), &mut names);
    let mut enc = Encoder { phi, shorthands: Vec::new(), names };
    let encoded = match enc.encode(&body, &mut Vec::new()) {
        Ok(g) => g,
        Err(reason) => return Ok(PolyadicOutcome::NotMonadizable(reason)),
    };
    let keys: Vec<&Shorthand> = enc.shorthands.iter().filter(|s| s.quantified).collect();
    let z = enc.names.prefer("z");
    let mut links = Vec::new();
    for (i, k1) in keys.iter().enumerate() {
        for k2 in &keys[i + 1..] {
            links.push(link(k1, k2, &z));
        }
    }
    let links = Formula::and(links);
    let universal = q.is_universal();
    let mut out = if universal {
        Formula::or([negate_boolean(&links), encoded])
    } else {
        Formula::and([encoded, links])
    };
    if arity < 2 {
        out = Formula::quant(q, phi, out);
    }
    for k in keys.iter().rev() {
        let kq = match (universal, k.hole()) {
            (true, Some(_)) => Quantifier::ForallPred(1),
            (true, None) => Quantifier::ForallPred(0),
            (false, Some(_)) => Quantifier::ExistsPred(1),
            (false, None) => Quantifier::ExistsPred(0),
        };
        out = Formula::quant(kq, k.name.clone(), out);
    }
    Ok(PolyadicOutcome::Monadized(Monadization { encoded: out, shorthands: enc.shorthands }))
}

/// Rename binders whose names clash with `avoid`, so shorthands can be
/// expanded without capture.
fn rename_clashing(f: &Formula, avoid: &BTreeSet<String>, names: &mut FreshNames) -> Formula {
    match f {
        Formula::Quant(q, x, g) if !q.binds_predicate() && avoid.contains(x) => {
            let y = names.fresh(x);
            let body = substitute(g, x, &Term::var(&y)).expect("fresh binder names cannot be captured");
            Formula::quant(*q, y, rename_clashing(&body, avoid, names))
        }
        Formula::Quant(q, x, g) => Formula::quant(*q, x.clone(), rename_clashing(g, avoid, names)),
        Formula::Not(g) => Formula::not(rename_clashing(g, avoid, names)),
        Formula::And(v) => Formula::And(v.iter().map(|c| rename_clashing(c, avoid, names)).collect()),
        Formula::Or(v) => Formula::Or(v.iter().map(|c| rename_clashing(c, avoid, names)).collect()),
        f => f.clone(),
    }
}

/// Expand every shorthand back into the atom it abbreviates.
pub fn decode(f: &Formula, shorthands: &[Shorthand]) -> Result<Formula> {
    let mut names = FreshNames::for_formula(f);
    let mut fixed = BTreeSet::new();
    for s in shorthands {
        for t in s.args.iter().flatten() {
            if let Term::Var(v) = t {
                fixed.insert(v.clone());
            }
            names.reserve(t.name().to_string());
        }
    }
    let mut out = rename_clashing(f, &fixed, &mut names);
    let z = names.fresh("z");
    for s in shorthands {
        let params = if s.hole().is_some() { vec![z.clone()] } else { Vec::new() };
        out = substitute_pred(&out, &s.name, &params, &s.expansion(&z))?;
    }
    Ok(out)
}

fn monadic_elim(q: Quantifier, p: &str, body: &Formula) -> Result<Formula> {
    if q.is_universal() {
        Ok(negate_boolean(&eliminate_predicate(p, &negate_boolean(body))?))
    } else {
        eliminate_predicate(p, body)
    }
}

fn eliminate_polyadic_rec(f: &Formula) -> Result<Formula> {
    Ok(match f {
        Formula::Quant(q, p, g) if q.binds_predicate() => {
            let body = eliminate_polyadic_rec(g)?;
            let arity = arity_in(&body, p).unwrap_or(0);
            if arity <= 1 && classify(&body).within(FormulaClass::MonEq) {
                return monadic_elim(*q, p, &body);
            }
            let quantified = Formula::quant(*q, p.clone(), body);
            match polyadic_monadize(&quantified, p)? {
                PolyadicOutcome::Monadized(m) => decode(&eliminate_all(&m.encoded)?, &m.shorthands)?,
                PolyadicOutcome::NotMonadizable(reason) => return Err(Error::Eligibility(reason)),
            }
        }
        Formula::Quant(q, x, g) => Formula::quant(*q, x.clone(), eliminate_polyadic_rec(g)?),
        Formula::Not(g) => Formula::not(eliminate_polyadic_rec(g)?),
        Formula::And(v) => Formula::and(v.iter().map(eliminate_polyadic_rec).collect::<Result<Vec<_>>>()?),
        Formula::Or(v) => Formula::or(v.iter().map(eliminate_polyadic_rec).collect::<Result<Vec<_>>>()?),
        f => f.clone(),
    })
}

/// Eliminate every predicate quantifier, innermost first, monadizing the
/// scope of a quantifier whenever it is not already monadic.
pub fn eliminate_polyadic(f: &Formula) -> Result<Formula> {
    if !f.has_pred_quantifier() {
        return Ok(f.clone());
    }
    Ok(simplify(&eliminate_polyadic_rec(f)?))
}
