//! Auxiliary definitions and Ackermann's lemma.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{substitute, substitute_pred, Formula, Quantifier, Term};
use crate::rewriter::{polarity_at, Polarity};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DefinitionDirection {
    /// `∀x (px → G[x])`, for positive occurrences.
    Imp,
    /// `∀x (px ← G[x])`, for negative occurrences.
    RevImp,
}

/// `∀x (px ↔ G[x])`, the biconditional spelled out with ∧, ∨ and ¬.
pub fn definition(p: &str, x: &str, g: &Formula) -> Formula {
    Formula::forall(x, Formula::iff(Formula::unary(p, Term::var(x)), g.clone()))
}

fn one_sided(p: &str, dir: DefinitionDirection, x: &str, g: &Formula) -> Formula {
    let px = Formula::unary(p, Term::var(x));
    match dir {
        DefinitionDirection::Imp => Formula::forall(x, Formula::implies(px, g.clone())),
        DefinitionDirection::RevImp => Formula::forall(x, Formula::implies(g.clone(), px)),
    }
}

/// Replace the listed occurrences of `G[t_i]` in `f` by `p(t_i)` and add
/// the definition of `p`: `F[G[t_i]] ≡ ∃p (∀x (px ↔ G[x]) ∧ F[p t_i])`.
pub fn intro_definition(f: &Formula, x: &str, g: &Formula, occurrences: &[(Vec<usize>, Term)], p: &str) -> Result<Formula> {
    if f.all_preds().iter().chain(&g.all_preds()).any(|(q, _)| q == p) {
        return Err(Error::NotFresh(p.to_string()));
    }
    let g_free: Vec<String> = g.free_vars().into_iter().filter(|v| v != x).collect();
    for (i, (path, t)) in occurrences.iter().enumerate() {
        for (other, _) in &occurrences[i + 1..] {
            if other.starts_with(path) || path.starts_with(other) {
                return Err(Error::BadArgs(format!("nested occurrences {path:?} and {other:?}")));
            }
        }
        let expected = substitute(g, x, t)?;
        match f.at(path) {
            Some(h) if *h == expected => {}
            Some(h) => return Err(Error::Shape(format!("{h} at {path:?} is not {expected}"))),
            None => return Err(Error::BadArgs(format!("no subformula at {path:?}"))),
        }
        if let Some((_, v)) = f.binders_above(path).into_iter().find(|(q, v)| !q.binds_predicate() && g_free.contains(v)) {
            return Err(Error::Capture(v));
        }
    }
    let mut out = f.clone();
    for (path, t) in occurrences {
        *out.at_mut(path).expect("checked above") = Formula::unary(p, t.clone());
    }
    Ok(Formula::exists_pred(p, 1, Formula::and([definition(p, x, g), out])))
}

/// Inverse of [`intro_definition`]: replace every occurrence of `p` by its
/// definiens and drop the definition.
pub fn expand_definition(f: &Formula) -> Result<Formula> {
    let Formula::Quant(Quantifier::ExistsPred(1), p, body) = f else {
        return Err(Error::Shape(format!("{f} does not start with a unary predicate quantifier")));
    };
    let conjuncts = match &**body {
        Formula::And(v) => v.clone(),
        g => vec![g.clone()],
    };
    let (x, g) = match conjuncts.first() {
        Some(Formula::Quant(Quantifier::Forall, x, _)) => {
            let found = conjuncts[0].clone();
            let g = definiens(p, x, &found)
                .ok_or_else(|| Error::Shape(format!("{found} is not a definition of {p}")))?;
            (x.clone(), g)
        }
        _ => return Err(Error::Shape(format!("{f} lacks a leading definition"))),
    };
    if g.mentions_pred(p) {
        return Err(Error::EliminandInDefiniens(p.clone()));
    }
    let rest = Formula::and(conjuncts[1..].iter().cloned());
    substitute_pred(&rest, p, &[x], &g)
}

fn definiens(p: &str, x: &str, def: &Formula) -> Option<Formula> {
    let Formula::Quant(_, _, b) = def else { return None };
    let Formula::And(v) = &**b else { return None };
    let [Formula::Or(l), _] = v.as_slice() else { return None };
    let [_, g] = l.as_slice() else { return None };
    (definition(p, x, g) == *def).then(|| g.clone())
}

fn pred_paths(f: &Formula, p: &str, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    match f {
        Formula::Atom(q, _) if q == p => out.push(path.clone()),
        Formula::Quant(q, y, _) if q.binds_predicate() && y == p => {}
        _ => {
            for (i, c) in f.children().iter().enumerate() {
                path.push(i);
                pred_paths(c, p, path, out);
                path.pop();
            }
        }
    }
}

/// `∃p (∀x (px → G[x]) ∧ F[p t_i])` (or with ←), the left side of
/// Ackermann's lemma.
pub fn ackermann_input(p: &str, dir: DefinitionDirection, x: &str, g: &Formula, body: &Formula) -> Formula {
    Formula::exists_pred(p, 1, Formula::and([one_sided(p, dir, x, g), body.clone()]))
}

/// Ackermann's lemma: with all occurrences of `p` in `body` positive (for
/// `Imp`) or all negative (for `RevImp`), the left side is equivalent to
/// `body` with each `p(t)` replaced by `G[t]`.
pub fn ackermann_lemma_elim(p: &str, dir: DefinitionDirection, x: &str, g: &Formula, body: &Formula) -> Result<Formula> {
    if g.mentions_pred(p) {
        return Err(Error::EliminandInDefiniens(p.to_string()));
    }
    let wanted = match dir {
        DefinitionDirection::Imp => Polarity::Positive,
        DefinitionDirection::RevImp => Polarity::Negative,
    };
    let mut paths = Vec::new();
    pred_paths(body, p, &mut Vec::new(), &mut paths);
    if paths.iter().any(|path| polarity_at(body, path) != wanted) {
        return Err(Error::PolarityViolation(p.to_string()));
    }
    substitute_pred(body, p, &[x.to_string()], g)
}
