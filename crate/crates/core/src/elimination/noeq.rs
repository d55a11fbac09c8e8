//! Elimination for formulas without equality.

use std::collections::BTreeMap;

use super::{arity_in, eliminate_predicate, require_class, split_with, Hauptform, HauptformSplit};
use crate::counting::normal_form_noeq;
use crate::error::{Error, Result};
use crate::formula::{substitute, Formula, FormulaClass, FreshNames, Quantifier, Term};
use crate::rewriter::simplify;

fn conj_at(groups: &[super::Group], x: &str, t: &Term) -> Result<Formula> {
    Ok(Formula::and(groups.iter().map(|g| substitute(&g.body, x, t)).collect::<Result<Vec<_>>>()?))
}

fn conj(groups: &[super::Group]) -> Formula {
    Formula::and(groups.iter().map(|g| g.body.clone()))
}

fn require_plain(h: &Hauptform) -> Result<()> {
    h.check()?;
    if h.generalized {
        return Err(Error::Shape("counting quantifiers in an equality-free Hauptform".into()));
    }
    Ok(())
}

pub(crate) fn hauptform_noeq_elim_with(h: &Hauptform, names: &mut FreshNames) -> Result<Formula> {
    require_plain(h)?;
    let x = &h.var;
    let us: Vec<String> = h.c.iter().map(|_| names.fresh("u")).collect();
    let vs: Vec<String> = h.d.iter().map(|_| names.fresh("v")).collect();
    let mut body = Vec::new();
    for u in &us {
        for v in &vs {
            body.push(Formula::neq(Term::var(u), Term::var(v)));
        }
    }
    for (g, u) in h.c.iter().zip(&us) {
        let t = Term::var(u);
        body.push(Formula::and([substitute(&g.body, x, &t)?, conj_at(&h.b, x, &t)?]));
    }
    for (g, v) in h.d.iter().zip(&vs) {
        let t = Term::var(v);
        body.push(Formula::and([substitute(&g.body, x, &t)?, conj_at(&h.a, x, &t)?]));
    }
    let witnesses = us.iter().chain(&vs).rev().fold(Formula::and(body), |acc, w| Formula::exists(w, acc));
    let universal = Formula::forall(x, Formula::or([conj(&h.a), conj(&h.b)]));
    Ok(Formula::and([universal, witnesses]))
}

/// The closed-form result for a plain Hauptform, unsimplified:
/// `∀x (⋀A_i ∨ ⋀B_i) ∧ ∃u.. ∃v.. (⋀ u_i≠v_j ∧ ⋀ (C_i[u_i] ∧ ⋀B_j[u_i]) ∧ ⋀ (D_i[v_i] ∧ ⋀A_j[v_i]))`.
pub fn hauptform_noeq_elim(h: &Hauptform) -> Result<Formula> {
    hauptform_noeq_elim_with(h, &mut FreshNames::for_formula(&h.to_formula()))
}

/// Schröder's crude resultant `∀x (A ∨ B) ∧ ⋀ ∃x (C_i ∧ B) ∧ ⋀ ∃x (D_i ∧ A)`,
/// entailed by the exact result.
pub fn crude_resultant(h: &Hauptform) -> Result<Formula> {
    require_plain(h)?;
    let x = &h.var;
    let (a, b) = (conj(&h.a), conj(&h.b));
    let mut out = vec![Formula::forall(x, Formula::or([a.clone(), b.clone()]))];
    out.extend(h.c.iter().map(|g| Formula::exists(x, Formula::and([g.body.clone(), b.clone()]))));
    out.extend(h.d.iter().map(|g| Formula::exists(x, Formula::and([g.body.clone(), a.clone()]))));
    Ok(Formula::and(out))
}

/// Hauptform split of a MON formula through the equality-free normal form.
/// The resulting forms have no counting quantifiers.
pub fn build_hauptform_noeq(p: &str, f: &Formula) -> Result<HauptformSplit> {
    require_class(f, FormulaClass::Mon)?;
    if let Some(n) = arity_in(f, p).filter(|n| *n != 1) {
        return Err(Error::BadArgs(format!("{p} has arity {n}, expected 1")));
    }
    let normalized = normal_form_noeq(f)?;
    let mut names = FreshNames::for_formula(f);
    names.reserve_formula(&normalized);
    split_with(p, &normalized, &mut names)
}

/// First-order equivalent of `∃p F` for a MON formula, through the
/// equality-free normal form and the closed-form result.
pub fn eliminate_noeq(p: &str, f: &Formula) -> Result<Formula> {
    require_class(f, FormulaClass::Mon)?;
    match arity_in(f, p) {
        None => return Ok(f.clone()),
        Some(1) => {}
        Some(_) => return eliminate_predicate(p, f),
    }
    let normalized = normal_form_noeq(f)?;
    let mut names = FreshNames::for_formula(f);
    names.reserve_formula(&normalized);
    let split = split_with(p, &normalized, &mut names)?;
    let mut parts = Vec::new();
    for d in &split.disjuncts {
        parts.push(match &d.form {
            None => d.rest.clone(),
            Some(h) => Formula::and([d.rest.clone(), hauptform_noeq_elim_with(h, &mut names)?]),
        });
    }
    let out = simplify(&Formula::or(parts));
    if out.mentions_pred(p) {
        return Err(Error::EliminandOccurs(format!("{p} survived elimination")));
    }
    Ok(out)
}

/// Read `∀x (F_S ∨ ⋁_{i∈S} p_i x ∨ ⋁_{i∉S} ¬p_i x)`, returning `S` as a bit
/// mask and `F_S` with the bound variable renamed to `x`.
fn read_clause(ps: &[String], clause: &Formula, x: &str) -> Result<(u64, Formula)> {
    let Formula::Quant(Quantifier::Forall, y, body) = clause else {
        return Err(Error::Shape(format!("{clause} is not a universal clause")));
    };
    let disjuncts = match &**body {
        Formula::Or(v) => v.clone(),
        g => vec![g.clone()],
    };
    let mut mask = 0u64;
    let mut seen = 0u64;
    let mut rest = Vec::new();
    for d in disjuncts {
        let (pos, atom) = match &d {
            Formula::Not(a) => (false, &**a),
            a => (true, a),
        };
        let hit = match atom {
            Formula::Atom(q, args) => ps.iter().position(|p| p == q).map(|i| (i, args)),
            _ => None,
        };
        match hit {
            Some((i, args)) => {
                if args.len() != 1 || !args[0].is_var_named(y) || seen & (1 << i) != 0 {
                    return Err(Error::Shape(format!("unexpected occurrence {d} in {clause}")));
                }
                seen |= 1 << i;
                if pos {
                    mask |= 1 << i;
                }
            }
            None => rest.push(d),
        }
    }
    if seen != (1u64 << ps.len()) - 1 {
        return Err(Error::Shape(format!("{clause} lacks a literal for some eliminand")));
    }
    let rest = Formula::or(rest);
    if let Some(p) = ps.iter().find(|p| rest.mentions_pred(p)) {
        return Err(Error::EliminandOccurs(p.clone()));
    }
    let rest = if y == x { rest } else { substitute(&rest, y, &Term::var(x))? };
    Ok((mask, rest))
}

/// `∃p1..∃pn ⋀_S ∀x (F_S ∨ ⋁_{i∈S} p_i x ∨ ⋁_{i∉S} ¬p_i x) ≡ ∀x ⋁_S F_S`.
/// The input is the conjunction of the 2^n clauses, with or without the
/// leading quantifiers upon the `p_i`.
pub fn simultaneous_elim(ps: &[String], f: &Formula) -> Result<Formula> {
    if ps.is_empty() || ps.len() > 16 {
        return Err(Error::BadArgs(format!("{} eliminands", ps.len())));
    }
    let mut body = f;
    for p in ps {
        match body {
            Formula::Quant(Quantifier::ExistsPred(1), q, g) if q == p => body = g,
            _ => break,
        }
    }
    let clauses = match body {
        Formula::And(v) => v.clone(),
        g => vec![g.clone()],
    };
    let x = match clauses.first() {
        Some(Formula::Quant(Quantifier::Forall, y, _)) => y.clone(),
        _ => return Err(Error::Shape(format!("{body} is not a conjunction of universal clauses"))),
    };
    let mut by_mask = BTreeMap::new();
    for c in &clauses {
        let (mask, rest) = read_clause(ps, c, &x)?;
        if by_mask.insert(mask, rest).is_some() {
            return Err(Error::Shape(format!("two clauses for the same sign pattern in {body}")));
        }
    }
    if by_mask.len() != 1 << ps.len() {
        return Err(Error::Shape(format!("expected {} clauses, got {}", 1 << ps.len(), by_mask.len())));
    }
    Ok(Formula::forall(x, Formula::or(by_mask.into_values())))
}

#[cfg(test)]
mod tests {
    use super::super::Group;
    use super::*;
    use crate::oracle::{check_entails, check_equiv};
    use crate::syntax::parse;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn equiv(f: &Formula, g: &Formula, n: usize) {
        assert_eq!(check_equiv(f, g, n).unwrap(), None, "{f}  vs  {g}");
    }

    fn ferio() -> Formula {
        p("forall x. (~q(x) | ~p(x)) & exists x. (r(x) & q(x))")
    }

    #[test]
    fn ferio_noeq() {
        let out = eliminate_noeq("q", &ferio()).unwrap();
        equiv(&out, &p("exists u. (r(u) & ~p(u))"), 3);
        equiv(&out, &eliminate_predicate("q", &ferio()).unwrap(), 3);
    }

    #[test]
    fn closed_form_shapes() {
        let x = || Term::var("x");
        let mut h = Hauptform::new("p", "x");
        h.a.push(Group::plain(Formula::unary("r", x())));
        h.b.push(Group::plain(Formula::unary("s", x())));
        let raw = hauptform_noeq_elim(&h).unwrap();
        assert_eq!(simplify(&raw), p("forall x. (r(x) | s(x))"));

        let mut h = Hauptform::new("p", "x");
        h.c.push(Group::plain(Formula::True));
        h.d.push(Group::plain(Formula::True));
        let raw = hauptform_noeq_elim(&h).unwrap();
        equiv(&raw, &p("exists u. exists v. u != v"), 3);
        equiv(&raw, &h.to_formula(), 3);
        let crude = crude_resultant(&h).unwrap();
        assert_eq!(simplify(&crude), Formula::True);
        assert!(check_entails(&crude, &raw, 3).unwrap().is_some());
    }

    #[test]
    fn crude_is_weaker() {
        let split = build_hauptform_noeq("q", &ferio()).unwrap();
        let h = split.disjuncts[0].form.clone().unwrap();
        let exact = hauptform_noeq_elim(&h).unwrap();
        let crude = crude_resultant(&h).unwrap();
        assert_eq!(check_entails(&exact, &crude, 3).unwrap(), None);
        let mut g = h.clone();
        g.c.clear();
        g.d.clear();
        equiv(&crude_resultant(&g).unwrap(), &hauptform_noeq_elim(&g).unwrap(), 3);
        let mut gen = h;
        gen.a.push(Group::new(2, Formula::True));
        assert!(crude_resultant(&gen.normalize_flag()).is_err());
    }

    #[test]
    fn simultaneous() {
        let ps = vec!["p".to_string()];
        let f = p("forall x. (a(x) | p(x)) & forall x. (b(x) | ~p(x))");
        assert_eq!(simultaneous_elim(&ps, &f).unwrap(), p("forall x. (b(x) | a(x))"));

        let ps = vec!["p".to_string(), "q".to_string()];
        let f = p("exists2 p. exists2 q. (forall x. (p(x) | q(x)) & forall x. (~p(x) | q(x)) & forall y. (p(y) | ~q(y)) & forall x. (~p(x) | ~q(x)))");
        let out = simultaneous_elim(&ps, &f).unwrap();
        assert_eq!(simplify(&out), Formula::False);

        let f = p("forall x. (r(x) | p(x) | q(x)) & forall x. (~r(x) | ~p(x) | q(x)) & forall x. (p(x) | ~q(x)) & forall x. (r(a) | ~p(x) | ~q(x))");
        let out = simultaneous_elim(&ps, &f).unwrap();
        let lhs = Formula::exists_pred("p", 1, Formula::exists_pred("q", 1, f));
        equiv(&out, &lhs, 3);

        let bad = p("forall x. (p(x) | q(x)) & forall x. (~p(x) | q(x))");
        assert!(matches!(simultaneous_elim(&ps, &bad), Err(Error::Shape(_))));
        let bad = p("forall x. (p(x) | q(x)) & forall x. (~p(x) | q(x)) & forall x. (p(x) | ~q(x)) & forall x. (p(a) | ~p(x) | ~q(x))");
        assert!(simultaneous_elim(&ps, &bad).is_err());
    }
}
