//! Node-level implementation of every rule in both directions.

use std::collections::BTreeSet;

use super::{Direction, Operand, RuleId};
use crate::error::{Error, Result};
use crate::formula::{complement, replace_term, substitute, rename_pred, Formula, Quantifier, Term};

use Direction::{L2R, R2L};

/// Conjunction or disjunction from a child list, without flattening.
pub(crate) fn rebuild(conj: bool, mut v: Vec<Formula>) -> Formula {
    match v.len() {
        0 if conj => Formula::True,
        0 => Formula::False,
        1 => v.pop().unwrap(),
        _ if conj => Formula::And(v),
        _ => Formula::Or(v),
    }
}

fn nomatch<T>(rule: RuleId, msg: &str) -> Result<T> {
    Err(Error::no_match(rule, msg))
}

fn op_index(op: Option<&Operand>) -> Option<usize> {
    match op {
        Some(Operand::Index(i)) => Some(*i),
        _ => None,
    }
}

fn op_formula(rule: RuleId, op: Option<&Operand>) -> Result<&Formula> {
    match op {
        Some(Operand::Formula(g)) => Ok(g),
        _ => nomatch(rule, "this direction needs a formula operand"),
    }
}

fn binds_free(q: Quantifier, v: &str, f: &Formula) -> bool {
    if q.binds_predicate() {
        f.has_free_pred(v)
    } else {
        f.has_free_var(v)
    }
}

/// Members of a clause: the children of a node of the clause connective,
/// otherwise the node itself.
fn members(clause: &Formula, clause_is_or: bool) -> Vec<&Formula> {
    match (clause, clause_is_or) {
        (Formula::Or(v), true) | (Formula::And(v), false) => v.iter().collect(),
        (f, _) => vec![f],
    }
}

fn is_complementary(a: &Formula, b: &Formula) -> bool {
    matches!(b, Formula::Not(g) if **g == *a) || matches!(a, Formula::Not(g) if **g == *b)
}

fn matrix(node: &Formula) -> Option<(bool, &Vec<Formula>)> {
    match node {
        Formula::And(v) => Some((true, v)),
        Formula::Or(v) => Some((false, v)),
        _ => None,
    }
}

pub(crate) fn apply_node(node: &Formula, rule: RuleId, dir: Direction, op: Option<&Operand>) -> Result<Formula> {
    use Formula as F;
    use RuleId::*;
    match (rule, dir) {
        (NotNot, L2R) => match node {
            F::Not(g) => match &**g {
                F::Not(h) => Ok((**h).clone()),
                _ => nomatch(rule, "expected a double negation"),
            },
            _ => nomatch(rule, "expected a double negation"),
        },
        (NotNot, R2L) => Ok(F::not(F::not(node.clone()))),

        (NotAnd | NotOr, L2R) => {
            let want_and = rule == NotAnd;
            match node {
                F::Not(g) => match (&**g, want_and) {
                    (F::And(v), true) => Ok(F::Or(v.iter().cloned().map(F::not).collect())),
                    (F::Or(v), false) => Ok(F::And(v.iter().cloned().map(F::not).collect())),
                    _ => nomatch(rule, "expected a negated connective"),
                },
                _ => nomatch(rule, "expected a negation"),
            }
        }
        (NotAnd | NotOr, R2L) => {
            let v = match (node, rule) {
                (F::Or(v), NotAnd) | (F::And(v), NotOr) => v,
                _ => return nomatch(rule, "expected a connective of negations"),
            };
            let inner: Option<Vec<Formula>> =
                v.iter().map(|c| if let F::Not(g) = c { Some((**g).clone()) } else { None }).collect();
            let inner = match inner {
                Some(i) => i,
                None => return nomatch(rule, "every member must be negated"),
            };
            Ok(F::not(if rule == NotAnd { F::And(inner) } else { F::Or(inner) }))
        }

        (NotAll | NotEx, L2R) => match node {
            F::Not(g) => match &**g {
                F::Quant(q, v, b) if q.is_universal() == (rule == NotAll) => {
                    Ok(F::Quant(q.dual(), v.clone(), Box::new(F::not((**b).clone()))))
                }
                _ => nomatch(rule, "expected a negated quantification"),
            },
            _ => nomatch(rule, "expected a negation"),
        },
        (NotAll | NotEx, R2L) => match node {
            F::Quant(q, v, b) if q.is_universal() != (rule == NotAll) => match &**b {
                F::Not(inner) => Ok(F::not(F::Quant(q.dual(), v.clone(), inner.clone()))),
                _ => nomatch(rule, "expected a quantified negation"),
            },
            _ => nomatch(rule, "expected a quantification"),
        },

        (AoAssoc, L2R) => {
            let (conj, v) = matrix(node).map_or_else(|| nomatch(rule, "expected a connective"), Ok)?;
            let pos = v.iter().enumerate().position(|(i, c)| {
                op_index(op).map_or(true, |k| k == i) && matrix(c).is_some_and(|(cc, _)| cc == conj)
            });
            let Some(i) = pos else { return nomatch(rule, "no nested child of the same connective") };
            let mut out = v[..i].to_vec();
            out.extend(v[i].children().iter().cloned());
            out.extend(v[i + 1..].iter().cloned());
            Ok(if conj { F::And(out) } else { F::Or(out) })
        }
        (AoAssoc, R2L) => {
            let (conj, v) = matrix(node).map_or_else(|| nomatch(rule, "expected a connective"), Ok)?;
            let i = op_index(op).unwrap_or(0);
            if v.len() < 3 || i + 1 >= v.len() {
                return nomatch(rule, "grouping needs three children");
            }
            let group = if conj { F::And(v[i..i + 2].to_vec()) } else { F::Or(v[i..i + 2].to_vec()) };
            let mut out = v[..i].to_vec();
            out.push(group);
            out.extend(v[i + 2..].iter().cloned());
            Ok(if conj { F::And(out) } else { F::Or(out) })
        }

        (AoComm, _) => {
            let (conj, v) = matrix(node).map_or_else(|| nomatch(rule, "expected a connective"), Ok)?;
            let i = op_index(op).unwrap_or(0);
            if i + 1 >= v.len() {
                return nomatch(rule, "need two children to swap");
            }
            let mut out = v.clone();
            out.swap(i, i + 1);
            Ok(if conj { F::And(out) } else { F::Or(out) })
        }

        (AoIdem, L2R) => {
            let (conj, v) = matrix(node).map_or_else(|| nomatch(rule, "expected a connective"), Ok)?;
            let mut seen = BTreeSet::new();
            let out: Vec<Formula> = v.iter().filter(|c| seen.insert(*c)).cloned().collect();
            if out.len() == v.len() {
                return nomatch(rule, "no repeated child");
            }
            Ok(rebuild(conj, out))
        }
        (AoIdem, R2L) => Ok(F::And(vec![node.clone(), node.clone()])),

        (TvNotT, L2R) => match node {
            F::Not(g) if **g == F::True => Ok(F::False),
            _ => nomatch(rule, "expected ¬⊤"),
        },
        (TvNotT, R2L) => match node {
            F::False => Ok(F::not(F::True)),
            _ => nomatch(rule, "expected ⊥"),
        },
        (TvNotF, L2R) => match node {
            F::Not(g) if **g == F::False => Ok(F::True),
            _ => nomatch(rule, "expected ¬⊥"),
        },
        (TvNotF, R2L) => match node {
            F::True => Ok(F::not(F::False)),
            _ => nomatch(rule, "expected ⊤"),
        },

        (TvAndT | TvOrF, L2R) => {
            let conj = rule == TvAndT;
            let unit = if conj { F::True } else { F::False };
            match matrix(node) {
                Some((c, v)) if c == conj && v.contains(&unit) => {
                    Ok(rebuild(conj, v.iter().filter(|c| **c != unit).cloned().collect()))
                }
                _ => nomatch(rule, "no neutral truth value among the children"),
            }
        }
        (TvAndT, R2L) => Ok(F::And(vec![F::True, node.clone()])),
        (TvOrF, R2L) => Ok(F::Or(vec![F::False, node.clone()])),

        (TvAndF | TvOrT, L2R) => {
            let conj = rule == TvAndF;
            let zero = if conj { F::False } else { F::True };
            match matrix(node) {
                Some((c, v)) if c == conj && v.contains(&zero) => Ok(zero),
                _ => nomatch(rule, "no absorbing truth value among the children"),
            }
        }
        (TvAndF | TvOrT, R2L) => {
            let conj = rule == TvAndF;
            let zero = if conj { F::False } else { F::True };
            if *node != zero {
                return nomatch(rule, "expected the absorbing truth value");
            }
            let g = op_formula(rule, op)?.clone();
            Ok(if conj { F::And(vec![zero, g]) } else { F::Or(vec![zero, g]) })
        }

        (TvQT | TvQF, L2R) => {
            let value = if rule == TvQT { F::True } else { F::False };
            match node {
                F::Quant(q, _, b) if **b == value && tv_quantifier_ok(*q, rule == TvQT) => Ok(value),
                _ => nomatch(rule, "expected a quantified truth value"),
            }
        }
        (TvQT | TvQF, R2L) => {
            let value = if rule == TvQT { F::True } else { F::False };
            match op {
                Some(Operand::Binder(q, v)) if *node == value && tv_quantifier_ok(*q, rule == TvQT) => {
                    Ok(F::quant(*q, v.clone(), value))
                }
                _ => nomatch(rule, "expected a truth value and a binder operand"),
            }
        }

        (ComplemAnd | ComplemOr, L2R) => {
            let conj = rule == ComplemAnd;
            match matrix(node) {
                Some((c, v)) if c == conj => {
                    let hit = v.iter().any(|a| v.iter().any(|b| matches!(b, F::Not(g) if **g == *a)));
                    if hit {
                        Ok(if conj { F::False } else { F::True })
                    } else {
                        nomatch(rule, "no complementary pair")
                    }
                }
                _ => nomatch(rule, "expected a connective"),
            }
        }
        (ComplemAnd | ComplemOr, R2L) => {
            let conj = rule == ComplemAnd;
            let expect = if conj { F::False } else { F::True };
            if *node != expect {
                return nomatch(rule, "expected a truth value");
            }
            let g = op_formula(rule, op)?.clone();
            let pair = vec![g.clone(), F::not(g)];
            Ok(if conj { F::And(pair) } else { F::Or(pair) })
        }

        (DistDnf | DistCnf, L2R) => {
            let conj = rule == DistDnf;
            let (c, v) = matrix(node).map_or_else(|| nomatch(rule, "expected a connective"), Ok)?;
            if c != conj {
                return nomatch(rule, "wrong outer connective");
            }
            let pos = v.iter().enumerate().position(|(i, ch)| {
                op_index(op).map_or(true, |k| k == i) && matrix(ch).is_some_and(|(cc, _)| cc != conj)
            });
            let Some(i) = pos else { return nomatch(rule, "no child to distribute over") };
            let parts: Vec<Formula> = v[i]
                .children()
                .iter()
                .map(|g| {
                    let mut w = v.clone();
                    w[i] = g.clone();
                    rebuild(conj, w)
                })
                .collect();
            Ok(rebuild(!conj, parts))
        }
        (DistDnf | DistCnf, R2L) => {
            let conj = rule == DistDnf;
            let (c, v) = matrix(node).map_or_else(|| nomatch(rule, "expected a connective"), Ok)?;
            if c == conj || v.len() < 2 {
                return nomatch(rule, "wrong outer connective");
            }
            let rows: Option<Vec<&Vec<Formula>>> =
                v.iter().map(|d| matrix(d).filter(|(cc, _)| *cc == conj).map(|(_, w)| w)).collect();
            let Some(rows) = rows else { return nomatch(rule, "children must share the inner connective") };
            let k = rows[0].len();
            if rows.iter().any(|r| r.len() != k) {
                return nomatch(rule, "children differ in length");
            }
            let differing: Vec<usize> = (0..k).filter(|&j| rows.iter().any(|r| r[j] != rows[0][j])).collect();
            if differing.len() != 1 {
                return nomatch(rule, "children must differ in exactly one position");
            }
            let j = differing[0];
            let mut out = rows[0].clone();
            out[j] = rebuild(!conj, rows.iter().map(|r| r[j].clone()).collect());
            Ok(rebuild(conj, out))
        }

        (AllOutAnd | ExOutOr, L2R) => {
            let conj = rule == AllOutAnd;
            let (c, v) = matrix(node).map_or_else(|| nomatch(rule, "expected a connective"), Ok)?;
            if c != conj {
                return nomatch(rule, "wrong connective");
            }
            let F::Quant(q0, x0, _) = &v[0] else { return nomatch(rule, "children must be quantified") };
            let plain = if conj {
                matches!(q0, Quantifier::Forall | Quantifier::ForallPred(_))
            } else {
                matches!(q0, Quantifier::Exists | Quantifier::ExistsPred(_))
            };
            if !plain {
                return nomatch(rule, "wrong quantifier");
            }
            let mut bodies = Vec::new();
            for ch in v {
                match ch {
                    F::Quant(q, x, b) if q == q0 && x == x0 => bodies.push((**b).clone()),
                    _ => return nomatch(rule, "children must share quantifier and variable"),
                }
            }
            Ok(F::Quant(*q0, x0.clone(), Box::new(rebuild(conj, bodies))))
        }
        (AllOutAnd | ExOutOr, R2L) => {
            let conj = rule == AllOutAnd;
            match node {
                F::Quant(q, x, b)
                    if (conj && matches!(q, Quantifier::Forall | Quantifier::ForallPred(_)))
                        || (!conj && matches!(q, Quantifier::Exists | Quantifier::ExistsPred(_))) =>
                {
                    match matrix(b) {
                        Some((c, v)) if c == conj => Ok(rebuild(
                            conj,
                            v.iter().map(|g| F::Quant(*q, x.clone(), Box::new(g.clone()))).collect(),
                        )),
                        _ => nomatch(rule, "body has the wrong connective"),
                    }
                }
                _ => nomatch(rule, "wrong quantifier"),
            }
        }

        (QOutAo, L2R) => {
            let (conj, v) = matrix(node).map_or_else(|| nomatch(rule, "expected a connective"), Ok)?;
            let ok = |i: usize| -> bool {
                match &v[i] {
                    F::Quant(q, x, _) => {
                        q_out_ok(*q, conj)
                            && v.iter().enumerate().all(|(j, g)| j == i || !binds_free(*q, x, g))
                    }
                    _ => false,
                }
            };
            let i = match op_index(op) {
                Some(i) if i < v.len() && ok(i) => i,
                Some(_) => return Err(Error::side(rule, "chosen child cannot be pulled out")),
                None => match (0..v.len()).find(|&i| ok(i)) {
                    Some(i) => i,
                    None => return nomatch(rule, "no quantified child can be pulled out"),
                },
            };
            let F::Quant(q, x, b) = &v[i] else { unreachable!() };
            let mut w = v.clone();
            w[i] = (**b).clone();
            Ok(F::Quant(*q, x.clone(), Box::new(if conj { F::And(w) } else { F::Or(w) })))
        }
        (QOutAo, R2L) => {
            let F::Quant(q, x, b) = node else { return nomatch(rule, "expected a quantification") };
            let (conj, v) = matrix(b).map_or_else(|| nomatch(rule, "body must be a connective"), Ok)?;
            if !q_out_ok(*q, conj) {
                return nomatch(rule, "quantifier does not distribute over this connective");
            }
            let inside: Vec<usize> = (0..v.len()).filter(|&i| binds_free(*q, x, &v[i])).collect();
            if inside.is_empty() || inside.len() == v.len() {
                return nomatch(rule, "nothing to move out of scope");
            }
            let scoped = rebuild(conj, inside.iter().map(|&i| v[i].clone()).collect());
            let mut out = Vec::new();
            for (i, g) in v.iter().enumerate() {
                if i == inside[0] {
                    out.push(F::Quant(*q, x.clone(), Box::new(scoped.clone())));
                } else if !inside.contains(&i) {
                    out.push(g.clone());
                }
            }
            Ok(if conj { F::And(out) } else { F::Or(out) })
        }

        (QuantDrop, L2R) => match node {
            F::Quant(q, x, b) if drop_ok(*q) && !binds_free(*q, x, b) => Ok((**b).clone()),
            F::Quant(..) => Err(Error::side(rule, "variable occurs free or quantifier is not droppable")),
            _ => nomatch(rule, "expected a quantification"),
        },
        (QuantDrop, R2L) => match op {
            Some(Operand::Binder(q, x)) if drop_ok(*q) && !binds_free(*q, x, node) => {
                Ok(F::quant(*q, x.clone(), node.clone()))
            }
            Some(Operand::Binder(..)) => Err(Error::side(rule, "variable occurs free")),
            _ => nomatch(rule, "needs a binder operand"),
        },

        (QuantFlip, _) => match node {
            F::Quant(q1, v, b) => match &**b {
                F::Quant(q2, w, g) if v != w && same_plain_type(*q1, *q2) => {
                    Ok(F::Quant(*q2, w.clone(), Box::new(F::Quant(*q1, v.clone(), g.clone()))))
                }
                _ => nomatch(rule, "expected two quantifiers of the same type"),
            },
            _ => nomatch(rule, "expected a quantification"),
        },

        (VarRename, _) => {
            let F::Quant(q, v, b) = node else { return nomatch(rule, "expected a quantification") };
            let Some(Operand::Var(w)) = op else { return nomatch(rule, "needs a variable operand") };
            if w == v {
                return nomatch(rule, "new name equals old name");
            }
            if binds_free(*q, w, b) {
                return Err(Error::side(rule, format!("{w} occurs free in the body")));
            }
            let body = if q.binds_predicate() {
                if b.mentions_pred(w) {
                    return Err(Error::side(rule, format!("{w} occurs in the body")));
                }
                rename_pred(b, v, w)
            } else {
                substitute(b, v, &Term::Var(w.clone())).map_err(|_| Error::side(rule, "renaming would capture"))?
            };
            Ok(F::Quant(*q, w.clone(), Box::new(body)))
        }

        (SubsAndAbsorp | SubsOrAbsorp, L2R) => {
            let conj = rule == SubsAndAbsorp;
            let (c, v) = matrix(node).map_or_else(|| nomatch(rule, "expected a connective"), Ok)?;
            if c != conj {
                return nomatch(rule, "wrong connective");
            }
            // In a conjunction an entailed member goes, in a disjunction an
            // entailing one.
            let removable = |j: usize| {
                v.iter().enumerate().any(|(i, g)| i != j && if conj { entails(g, &v[j]) } else { entails(&v[j], g) })
            };
            let j = match op_index(op) {
                Some(j) if j < v.len() && removable(j) => j,
                Some(_) => return Err(Error::side(rule, "chosen child is not absorbed")),
                None => match (0..v.len()).find(|&j| removable(j)) {
                    Some(j) => j,
                    None => return nomatch(rule, "no absorbed child"),
                },
            };
            let mut w = v.clone();
            w.remove(j);
            Ok(rebuild(conj, w))
        }
        (SubsAndAbsorp, R2L) => {
            let g = op_formula(rule, op)?;
            if !entails(node, g) {
                return Err(Error::side(rule, "operand is not entailed"));
            }
            Ok(F::And(vec![node.clone(), g.clone()]))
        }
        (SubsOrAbsorp, R2L) => {
            let g = op_formula(rule, op)?;
            if !entails(g, node) {
                return Err(Error::side(rule, "operand does not entail the formula"));
            }
            Ok(F::Or(vec![g.clone(), node.clone()]))
        }

        (Taut, L2R) => {
            let (conj, v) = matrix(node).map_or_else(|| nomatch(rule, "expected a matrix"), Ok)?;
            let taut = |c: &Formula| {
                let m = members(c, conj);
                m.iter().any(|a| m.iter().any(|b| is_complementary(a, b)))
            };
            match v.iter().position(taut) {
                Some(j) => {
                    let mut w = v.clone();
                    w.remove(j);
                    Ok(rebuild(conj, w))
                }
                None => nomatch(rule, "no clause with a complementary pair"),
            }
        }
        (Taut, R2L) => {
            let (conj, v) = matrix(node).map_or_else(|| nomatch(rule, "expected a matrix"), Ok)?;
            let g = op_formula(rule, op)?;
            let m = members(g, conj);
            if !m.iter().any(|a| m.iter().any(|b| is_complementary(a, b))) {
                return Err(Error::side(rule, "operand clause is not tautological"));
            }
            let mut w = v.clone();
            w.push(g.clone());
            Ok(if conj { F::And(w) } else { F::Or(w) })
        }

        (Subs, L2R) => {
            let (conj, v) = matrix(node).map_or_else(|| nomatch(rule, "expected a matrix"), Ok)?;
            let sets: Vec<BTreeSet<&Formula>> = v.iter().map(|c| members(c, conj).into_iter().collect()).collect();
            let j = (0..v.len()).find(|&j| (0..v.len()).any(|i| i != j && sets[i].is_subset(&sets[j])));
            match j {
                Some(j) => {
                    let mut w = v.clone();
                    w.remove(j);
                    Ok(rebuild(conj, w))
                }
                None => nomatch(rule, "no subsumed clause"),
            }
        }
        (Subs, R2L) => {
            let (conj, v) = matrix(node).map_or_else(|| nomatch(rule, "expected a matrix"), Ok)?;
            let g = op_formula(rule, op)?;
            let gs: BTreeSet<&Formula> = members(g, conj).into_iter().collect();
            if !v.iter().any(|c| members(c, conj).into_iter().collect::<BTreeSet<_>>().is_subset(&gs)) {
                return Err(Error::side(rule, "operand clause is not subsumed"));
            }
            let mut w = v.clone();
            w.push(g.clone());
            Ok(if conj { F::And(w) } else { F::Or(w) })
        }

        (Unit, L2R) => {
            let (conj, v) = matrix(node).map_or_else(|| nomatch(rule, "expected a matrix"), Ok)?;
            for (i, unit) in v.iter().enumerate() {
                let um = members(unit, conj);
                if um.len() != 1 {
                    continue;
                }
                for (j, c) in v.iter().enumerate() {
                    if i == j {
                        continue;
                    }
                    let cm = members(c, conj);
                    if let Some(k) = cm.iter().position(|m| is_complementary(um[0], m)) {
                        let rest: Vec<Formula> =
                            cm.iter().enumerate().filter(|(l, _)| *l != k).map(|(_, m)| (*m).clone()).collect();
                        let mut w = v.clone();
                        w[j] = rebuild(!conj, rest);
                        return Ok(if conj { F::And(w) } else { F::Or(w) });
                    }
                }
            }
            nomatch(rule, "no unit clause with a complement elsewhere")
        }
        (Unit, R2L) => {
            let (conj, v) = matrix(node).map_or_else(|| nomatch(rule, "expected a matrix"), Ok)?;
            let Some(Operand::Member(j, m)) = op else { return nomatch(rule, "needs a member operand") };
            if *j >= v.len() {
                return nomatch(rule, "clause index out of range");
            }
            let has_unit = v
                .iter()
                .enumerate()
                .any(|(i, c)| i != *j && members(c, conj).len() == 1 && is_complementary(members(c, conj)[0], m));
            if !has_unit {
                return Err(Error::side(rule, "complement of the member is not a unit clause"));
            }
            let mut cm: Vec<Formula> = members(&v[*j], conj).into_iter().cloned().collect();
            cm.push(m.clone());
            let mut w = v.clone();
            w[*j] = if conj { F::Or(cm) } else { F::And(cm) };
            Ok(if conj { F::And(w) } else { F::Or(w) })
        }

        (PulloutAll | PulloutEx, L2R) => {
            let Some(Operand::Term(t, x)) = op else { return nomatch(rule, "needs a term and a fresh variable") };
            if node.all_names().contains(x) || t.name() == x {
                return Err(Error::side(rule, format!("{x} is not fresh")));
            }
            if let Term::Var(y) = t {
                if binds_var_anywhere(node, y) {
                    return Err(Error::side(rule, format!("{y} is bound in the formula")));
                }
            }
            let fx = replace_term(node, t, &Term::Var(x.clone())).map_err(|e| Error::side(rule, e.to_string()))?;
            let xv = Term::Var(x.clone());
            Ok(if rule == PulloutAll {
                F::forall(x.clone(), F::Or(vec![F::neq(xv, t.clone()), fx]))
            } else {
                F::exists(x.clone(), F::And(vec![F::eq(xv, t.clone()), fx]))
            })
        }
        (PulloutAll | PulloutEx, R2L) => {
            let all = rule == PulloutAll;
            let (x, v) = match node {
                F::Quant(Quantifier::Forall, x, b) if all => match &**b {
                    F::Or(v) => (x, v),
                    _ => return nomatch(rule, "expected ∀x (x≠t ∨ F)"),
                },
                F::Quant(Quantifier::Exists, x, b) if !all => match &**b {
                    F::And(v) => (x, v),
                    _ => return nomatch(rule, "expected ∃x (x=t ∧ F)"),
                },
                _ => return nomatch(rule, "wrong quantifier"),
            };
            let witness = |g: &Formula| -> Option<Term> {
                let eq = if all {
                    match g {
                        F::Not(e) => &**e,
                        _ => return None,
                    }
                } else {
                    g
                };
                match eq {
                    F::Eq(a, b) if a.is_var_named(x) && !b.is_var_named(x) => Some(b.clone()),
                    F::Eq(a, b) if b.is_var_named(x) && !a.is_var_named(x) => Some(a.clone()),
                    _ => None,
                }
            };
            let Some((k, t)) = v.iter().enumerate().find_map(|(k, g)| witness(g).map(|t| (k, t))) else {
                return nomatch(rule, "no defining equation for the bound variable");
            };
            let rest: Vec<Formula> = v.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, g)| g.clone()).collect();
            let rest = rebuild(!all, rest);
            substitute(&rest, x, &t).map_err(|e| Error::side(rule, e.to_string()))
        }

        (InfV, L2R) => {
            let (conj, v) = matrix(node).map_or_else(|| nomatch(rule, "expected a conjunction"), Ok)?;
            if !conj {
                return nomatch(rule, "expected a conjunction");
            }
            match resolve_pair(v, |c| Some(c)) {
                Some((i, j, resolvent)) => Ok(replace_pair(v, i, j, resolvent)),
                None => nomatch(rule, "no resolvable pair of clauses"),
            }
        }
        (InfVQ, L2R) => {
            let (conj, v) = matrix(node).map_or_else(|| nomatch(rule, "expected a conjunction"), Ok)?;
            if !conj {
                return nomatch(rule, "expected a conjunction");
            }
            fn body(c: &Formula) -> Option<&Formula> {
                match c {
                    Formula::Quant(Quantifier::Forall, _, b) => Some(&**b),
                    _ => None,
                }
            }
            for (i, j, res) in resolve_pairs(v, body) {
                if let (F::Quant(_, x, _), F::Quant(_, y, _)) = (&v[i], &v[j]) {
                    if x == y {
                        let out = F::forall(x.clone(), res);
                        return Ok(replace_pair(v, i, j, out));
                    }
                }
            }
            nomatch(rule, "no resolvable pair of universal clauses over the same variable")
        }
        (InfVbarPos | InfVbarNeg | InfVbarPosStar | InfVbarNegStar, L2R) => {
            let positive = matches!(rule, InfVbarPos | InfVbarPosStar);
            let star = matches!(rule, InfVbarPosStar | InfVbarNegStar);
            vbar(node, rule, positive, star)
        }
        (_, R2L) => Err(Error::EntailmentReversed(rule.to_string())),
    }
}

fn tv_quantifier_ok(q: Quantifier, value: bool) -> bool {
    match q {
        Quantifier::AtLeast(n) if value => n == 1,
        Quantifier::AllBut(n) if !value => n == 1,
        _ => true,
    }
}

fn q_out_ok(q: Quantifier, conj: bool) -> bool {
    match q {
        Quantifier::AtLeast(n) => conj || n == 1,
        Quantifier::AllBut(n) => !conj || n == 1,
        _ => true,
    }
}

fn drop_ok(q: Quantifier) -> bool {
    !matches!(q, Quantifier::AtLeast(n) | Quantifier::AllBut(n) if n != 1)
}

fn same_plain_type(a: Quantifier, b: Quantifier) -> bool {
    let universal = |q| matches!(q, Quantifier::Forall | Quantifier::ForallPred(_));
    let existential = |q| matches!(q, Quantifier::Exists | Quantifier::ExistsPred(_));
    (universal(a) && universal(b)) || (existential(a) && existential(b))
}

fn binds_var_anywhere(f: &Formula, y: &str) -> bool {
    match f {
        Formula::Quant(q, x, b) => (!q.binds_predicate() && x == y) || binds_var_anywhere(b, y),
        f => f.children().iter().any(|c| binds_var_anywhere(c, y)),
    }
}

fn resolve_pairs(v: &[Formula], body: fn(&Formula) -> Option<&Formula>) -> Vec<(usize, usize, Formula)> {
    let mut out = Vec::new();
    for i in 0..v.len() {
        for j in 0..v.len() {
            if i == j {
                continue;
            }
            let (Some(ci), Some(cj)) = (body(&v[i]), body(&v[j])) else { continue };
            let mi = members(ci, true);
            let mj = members(cj, true);
            for (a, g) in mi.iter().enumerate() {
                if let Some(b) = mj.iter().position(|h| matches!(h, Formula::Not(n) if **n == **g)) {
                    let mut res: Vec<Formula> =
                        mi.iter().enumerate().filter(|(k, _)| *k != a).map(|(_, m)| (*m).clone()).collect();
                    res.extend(mj.iter().enumerate().filter(|(k, _)| *k != b).map(|(_, m)| (*m).clone()));
                    out.push((i, j, rebuild(false, res)));
                    break;
                }
            }
        }
    }
    out
}

fn resolve_pair(v: &[Formula], body: fn(&Formula) -> Option<&Formula>) -> Option<(usize, usize, Formula)> {
    resolve_pairs(v, body).into_iter().next()
}

fn replace_pair(v: &[Formula], i: usize, j: usize, new: Formula) -> Formula {
    let first = i.min(j);
    let mut out = Vec::new();
    for (k, g) in v.iter().enumerate() {
        if k == first {
            out.push(new.clone());
        } else if k != i && k != j {
            out.push(g.clone());
        }
    }
    rebuild(true, out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Polarity {
    Positive,
    Negative,
}

/// Polarity of the subformula at `path`, counting enclosing negations.
pub fn polarity_at(f: &Formula, path: &[usize]) -> Polarity {
    let mut negs = 0;
    let mut cur = f;
    for &i in path {
        if matches!(cur, Formula::Not(_)) {
            negs += 1;
        }
        cur = &cur.children()[i];
    }
    if negs % 2 == 0 {
        Polarity::Positive
    } else {
        Polarity::Negative
    }
}

fn find_occurrences(f: &Formula, g: &Formula, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if f == g {
        out.push(path.clone());
        return;
    }
    for (i, c) in f.children().iter().enumerate() {
        path.push(i);
        find_occurrences(c, g, path, out);
        path.pop();
    }
}

fn vbar(node: &Formula, rule: RuleId, positive: bool, star: bool) -> Result<Formula> {
    let Formula::And(v) = node else { return nomatch(rule, "expected a conjunction") };
    for j in 0..v.len() {
        // Strip the universal prefix of the implication clause.
        let mut clause = &v[j];
        let mut prefix: Vec<String> = Vec::new();
        while let Formula::Quant(Quantifier::Forall, x, b) = clause {
            if !star {
                break;
            }
            prefix.push(x.clone());
            clause = b;
        }
        if star && prefix.is_empty() {
            continue;
        }
        let Formula::Or(cm) = clause else { continue };
        for (k, m) in cm.iter().enumerate() {
            let rest = rebuild(false, cm.iter().enumerate().filter(|(l, _)| *l != k).map(|(_, c)| c.clone()).collect());
            let (g, h) = if positive {
                match m {
                    Formula::Not(g) => ((**g).clone(), rest),
                    _ => continue,
                }
            } else {
                (m.clone(), complement(&rest))
            };
            let mut free: BTreeSet<String> = g.free_vars();
            free.extend(h.free_vars());
            for p in &prefix {
                free.remove(p);
            }
            for i in 0..v.len() {
                if i == j {
                    continue;
                }
                let mut occ = Vec::new();
                find_occurrences(&v[i], &g, &mut Vec::new(), &mut occ);
                for path in occ {
                    let pol = polarity_at(&v[i], &path);
                    if (pol == Polarity::Positive) != positive {
                        continue;
                    }
                    let bound = v[i].binders_above(&path);
                    if bound.iter().any(|(q, x)| !q.binds_predicate() && free.contains(x)) {
                        continue;
                    }
                    let mut fi = v[i].clone();
                    *fi.at_mut(&path).unwrap() = h.clone();
                    let mut out = Vec::new();
                    for (l, c) in v.iter().enumerate() {
                        if l == i {
                            out.push(fi.clone());
                        } else if l != j {
                            out.push(c.clone());
                        }
                    }
                    return Ok(rebuild(true, out));
                }
            }
        }
    }
    nomatch(rule, "no implication clause with a matching occurrence")
}

/// Sound but incomplete syntactic entailment test used for absorption.
pub fn entails(f: &Formula, g: &Formula) -> bool {
    use Formula as F;
    if f == g || *g == F::True || *f == F::False {
        return true;
    }
    match (f, g) {
        (_, F::And(w)) => w.iter().all(|h| entails(f, h)),
        (F::Or(v), _) => v.iter().all(|h| entails(h, g)),
        (_, F::Or(w)) if w.iter().any(|h| entails(f, h)) => true,
        (F::And(v), _) if v.iter().any(|h| entails(h, g)) => true,
        (F::Quant(q1, x1, b1), F::Quant(q2, x2, b2)) if x1 != x2 && !q1.binds_predicate() => {
            // Compare bodies under a common bound variable.
            if q2.binds_predicate() || b2.has_free_var(x1) {
                return false;
            }
            match substitute(b2, x2, &Term::var(x1)) {
                Ok(b2) => entails(f, &F::Quant(*q2, x1.clone(), Box::new(b2))),
                Err(_) => false,
            }
        }
        (F::Quant(q1, x1, b1), F::Quant(q2, x2, b2)) if x1 == x2 => {
            let lower = |q: &Quantifier| match q {
                Quantifier::Exists => Some(1),
                Quantifier::AtLeast(n) => Some(*n),
                _ => None,
            };
            let upper = |q: &Quantifier| match q {
                Quantifier::Forall => Some(1),
                Quantifier::AllBut(n) => Some(*n),
                _ => None,
            };
            match (lower(q1), lower(q2), upper(q1), upper(q2)) {
                (Some(n), Some(m), _, _) => m <= n && entails(b1, b2),
                (_, _, Some(n), Some(m)) => n <= m && entails(b1, b2),
                _ => q1 == q2 && q1.binds_predicate() && entails(b1, b2),
            }
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::super::{apply_rule, Step};
    use super::*;
    use crate::syntax::parse;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn not_all_example() {
        let f = p("~forall x. p(x)");
        assert_eq!(apply_rule(&f, &Step::l2r(RuleId::NotAll, &[])).unwrap(), p("exists x. ~p(x)"));
    }

    #[test]
    fn ex_out_or_example() {
        let f = p("exists x. p(x) | exists x. q(x)");
        assert_eq!(apply_rule(&f, &Step::l2r(RuleId::ExOutOr, &[])).unwrap(), p("exists x. (p(x) | q(x))"));
    }

    #[test]
    fn inf_v_example() {
        let f = p("(f | g) & (h | ~g)");
        assert_eq!(apply_rule(&f, &Step::l2r(RuleId::InfV, &[])).unwrap(), p("f | h"));
        assert_eq!(
            apply_rule(&f, &Step::r2l(RuleId::InfV, &[])),
            Err(Error::EntailmentReversed("inf-v".into()))
        );
        assert!(matches!(
            apply_rule(&f, &Step::l2r(RuleId::InfV, &[]).dualized()),
            Err(Error::EntailmentReversed(_))
        ));
    }

    #[test]
    fn q_out_ao_side_condition() {
        let f = p("exists x. p(x) & q(x)");
        let Formula::And(_) = &f else { panic!() };
        let g = Formula::And(vec![p("exists x. p(x)"), Formula::unary("q", Term::var("x"))]);
        assert!(apply_rule(&g, &Step::l2r(RuleId::QOutAo, &[])).is_err());
        let h = p("exists x. p(x) & q(a)");
        assert_eq!(apply_rule(&h, &Step::l2r(RuleId::QOutAo, &[])).unwrap(), p("exists x. (p(x) & q(a))"));
        assert!(matches!(
            apply_rule(&g, &Step::l2r(RuleId::QOutAo, &[]).with(Operand::Index(0))),
            Err(Error::SideConditionViolated { .. })
        ));
    }

    #[test]
    fn dualized_step_mirrors_rule() {
        // all-out-and conjugated by duality is ex-out-or.
        let f = p("exists x. p(x) | exists x. q(x)");
        let a = apply_rule(&f, &Step::l2r(RuleId::AllOutAnd, &[]).dualized()).unwrap();
        let b = apply_rule(&f, &Step::l2r(RuleId::ExOutOr, &[])).unwrap();
        assert_eq!(a, b);
        let g = p("p(a)");
        let step = Step::l2r(RuleId::PulloutAll, &[]).with(Operand::Term(Term::constant("a"), "w".into()));
        assert!(apply_rule(&g, &step).is_ok());
        assert!(matches!(apply_rule(&g, &step.dualized()), Err(Error::SideConditionViolated { .. })));
    }

    #[test]
    fn pullout_round_trip() {
        let f = p("p(a) & q(a)");
        let step = Step::l2r(RuleId::PulloutAll, &[]).with(Operand::Term(Term::constant("a"), "x".into()));
        let g = apply_rule(&f, &step).unwrap();
        assert_eq!(g, p("forall x. (x != a | p(x) & q(x))"));
        assert_eq!(apply_rule(&g, &Step::r2l(RuleId::PulloutAll, &[])).unwrap(), f);
    }

    #[test]
    fn clause_rules() {
        let f = p("(p | ~p) & q");
        assert_eq!(apply_rule(&f, &Step::l2r(RuleId::Taut, &[])).unwrap(), p("q"));
        let f = p("p & (p | q)");
        assert_eq!(apply_rule(&f, &Step::l2r(RuleId::Subs, &[])).unwrap(), p("p"));
        let f = p("~p & (p | q)");
        assert_eq!(apply_rule(&f, &Step::l2r(RuleId::Unit, &[])).unwrap(), p("~p & q"));
    }

    #[test]
    fn vbar_replaces_positive_occurrence() {
        let f = p("(r | exists x. g(x)) & (~exists x. g(x) | h)");
        assert_eq!(apply_rule(&f, &Step::l2r(RuleId::InfVbarPos, &[])).unwrap(), p("r | h"));
        let f = p("(r | ~g(a)) & (g(a) | ~h)");
        assert_eq!(apply_rule(&f, &Step::l2r(RuleId::InfVbarNeg, &[])).unwrap(), p("r | ~h"));
        let f = p("exists y. (g(y) & r) & forall z. (~g(z) | h(z))");
        let s = Formula::And(vec![
            p("exists y. (g(y) & r)"),
            Formula::forall("y", Formula::Or(vec![Formula::not(Formula::unary("g", Term::var("y"))), Formula::unary("h", Term::var("y"))])),
        ]);
        assert!(apply_rule(&f, &Step::l2r(RuleId::InfVbarPosStar, &[])).is_err());
        assert_eq!(apply_rule(&s, &Step::l2r(RuleId::InfVbarPosStar, &[])).unwrap(), p("exists y. (h(y) & r)"));
        assert!(apply_rule(&s, &Step::l2r(RuleId::InfVbarPos, &[])).is_err());
    }

    #[test]
    fn entailment_check() {
        assert!(entails(&p("atleast 5 x. p(x)"), &p("atleast 2 x. p(x)")));
        assert!(!entails(&p("atleast 2 x. p(x)"), &p("atleast 5 x. p(x)")));
        assert!(entails(&p("p & q"), &p("q | r")));
        assert!(entails(&p("atleast 2 x. (p(x) & q(x))"), &p("exists x. p(x)")));
        assert!(entails(&p("forall x. p(x)"), &p("allbut 3 x. (p(x) | q(x))")));
    }
}
