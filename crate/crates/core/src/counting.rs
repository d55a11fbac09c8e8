//! Counting quantifiers and the counting quantifier normal form.
//!
//! The normal form is a Boolean combination of basic formulas: nullary
//! atoms, unary atoms over terms, equalities between terms, and
//! `∃≥n x (L1[x] ∧ … ∧ Lm[x])` with pairwise different, non-complementary
//! unary literals on `x`. It is computed bottom-up: every individual
//! quantifier is eliminated as soon as its body is a Boolean combination of
//! basic formulas.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{classify, substitute, Formula, FormulaClass, FreshNames, Quantifier, Term};
use crate::rewriter::{dnf_clauses, simplify_with, Lit, RuleId, DEFAULT_SIZE_LIMIT};

use crate::rewriter::Direction::L2R;

/// Shape of a first-order expansion of a counting quantifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ExpansionMode {
    /// n quantified witnesses and their pairwise (dis)equalities.
    #[default]
    Poly,
    /// n−1 quantified witnesses around a single copy of the body.
    Lin,
}

/// Which of the two shapes of the guarded-existential elimination to emit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ElimMode {
    Disj,
    #[default]
    Conj,
}

fn check_count(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::BadCount(0));
    }
    Ok(())
}

fn witnesses(n: u32, x: &str, f: &Formula) -> Vec<String> {
    let mut names = FreshNames::for_formula(f);
    names.reserve(x);
    (0..n).map(|_| names.fresh(x)).collect()
}

fn instance(f: &Formula, x: &str, t: &str) -> Formula {
    substitute(f, x, &Term::var(t)).expect("fresh witnesses cannot be captured")
}

fn pairs(xs: &[String], eq: bool) -> Vec<Formula> {
    let mut out = Vec::new();
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            let (a, b) = (Term::var(&xs[i]), Term::var(&xs[j]));
            out.push(if eq { Formula::eq(a, b) } else { Formula::neq(a, b) });
        }
    }
    out
}

/// First-order formula equivalent to `∃≥n x F`.
pub fn expand_exists_counting(n: u32, x: &str, f: &Formula, mode: ExpansionMode) -> Result<Formula> {
    check_count(n)?;
    match mode {
        ExpansionMode::Poly => {
            let xs = witnesses(n, x, f);
            let body = Formula::and(xs.iter().map(|xi| instance(f, x, xi)).chain(pairs(&xs, false)));
            Ok(xs.iter().rev().fold(body, |acc, xi| Formula::exists(xi, acc)))
        }
        ExpansionMode::Lin => {
            let xs = witnesses(n - 1, x, f);
            let guards = xs.iter().map(|xi| Formula::neq(Term::var(x), Term::var(xi)));
            let body = Formula::exists(x, Formula::and(std::iter::once(f.clone()).chain(guards)));
            Ok(xs.iter().rev().fold(body, |acc, xi| Formula::forall(xi, acc)))
        }
    }
}

/// First-order formula equivalent to `∀^(<n) x F`.
pub fn expand_forall_counting(n: u32, x: &str, f: &Formula, mode: ExpansionMode) -> Result<Formula> {
    check_count(n)?;
    match mode {
        ExpansionMode::Poly => {
            let xs = witnesses(n, x, f);
            let body = Formula::or(xs.iter().map(|xi| instance(f, x, xi)).chain(pairs(&xs, true)));
            Ok(xs.iter().rev().fold(body, |acc, xi| Formula::forall(xi, acc)))
        }
        ExpansionMode::Lin => {
            let xs = witnesses(n - 1, x, f);
            let guards = xs.iter().map(|xi| Formula::eq(Term::var(x), Term::var(xi)));
            let body = Formula::forall(x, Formula::or(std::iter::once(f.clone()).chain(guards)));
            Ok(xs.iter().rev().fold(body, |acc, xi| Formula::exists(xi, acc)))
        }
    }
}

/// Replace every counting quantifier by its first-order expansion.
pub fn expand_counting(f: &Formula, mode: ExpansionMode) -> Result<Formula> {
    Ok(match f {
        Formula::Quant(q, x, g) => {
            let g = expand_counting(g, mode)?;
            match q {
                Quantifier::AtLeast(n) => expand_exists_counting(*n, x, &g, mode)?,
                Quantifier::AllBut(n) => expand_forall_counting(*n, x, &g, mode)?,
                q => Formula::quant(*q, x.clone(), g),
            }
        }
        Formula::Not(g) => Formula::not(expand_counting(g, mode)?),
        Formula::And(v) => Formula::And(v.iter().map(|g| expand_counting(g, mode)).collect::<Result<_>>()?),
        Formula::Or(v) => Formula::Or(v.iter().map(|g| expand_counting(g, mode)).collect::<Result<_>>()?),
        f => f.clone(),
    })
}

const COUNTING: &[(RuleId, crate::rewriter::Direction)] = &[
    (RuleId::TvNotT, L2R),
    (RuleId::TvNotF, L2R),
    (RuleId::TvAndF, L2R),
    (RuleId::TvOrT, L2R),
    (RuleId::TvAndT, L2R),
    (RuleId::TvOrF, L2R),
    (RuleId::TvQT, L2R),
    (RuleId::TvQF, L2R),
    (RuleId::ComplemAnd, L2R),
    (RuleId::ComplemOr, L2R),
    (RuleId::NotNot, L2R),
    (RuleId::AoAssoc, L2R),
    (RuleId::AoIdem, L2R),
    (RuleId::SubsAndAbsorp, L2R),
    (RuleId::SubsOrAbsorp, L2R),
];

/// Truth-value laws of the counting quantifiers and absorption between
/// comparable counting formulas, to a fixpoint.
pub fn counting_simplify(f: &Formula) -> Formula {
    simplify_with(f, COUNTING, false, None)
}

fn check_terms(x: &str, f: &Formula, ts: &[Term]) -> Result<()> {
    for (i, t) in ts.iter().enumerate() {
        if t.is_var_named(x) {
            return Err(Error::BadArgs(format!("term {t} is the quantified variable")));
        }
        if f.has_free_term(t) {
            return Err(Error::BadArgs(format!("term {t} occurs in the body")));
        }
        if ts[..i].contains(t) {
            return Err(Error::BadArgs(format!("term {t} is listed twice")));
        }
    }
    Ok(())
}

fn subsets(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < m - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, m, &mut Vec::new(), &mut out);
    out
}

/// Negation pushed through ∧ and ∨ only, so basic formulas stay intact.
pub(crate) fn negate_boolean(f: &Formula) -> Formula {
    match f {
        Formula::True => Formula::False,
        Formula::False => Formula::True,
        Formula::Not(g) => (**g).clone(),
        Formula::And(v) => Formula::or(v.iter().map(negate_boolean)),
        Formula::Or(v) => Formula::and(v.iter().map(negate_boolean)),
        f => Formula::not(f.clone()),
    }
}

fn ndt_unchecked(x: &str, f: &Formula, ts: &[Term], m: usize) -> Formula {
    Formula::and(subsets(ts.len(), m).into_iter().map(|s| {
        let neg = s.iter().map(|&i| negate_boolean(&substitute(f, x, &ts[i]).expect("terms are not bound in the body")));
        let mut eqs = Vec::new();
        for a in 0..s.len() {
            for b in a + 1..s.len() {
                eqs.push(Formula::eq(ts[s[a]].clone(), ts[s[b]].clone()));
            }
        }
        Formula::or(neg.chain(eqs))
    }))
}

/// "No m of the terms denote an individual satisfying F": the conjunction
/// over all m-element subsets S of T of `⋁ ¬F[t] ∨ ⋁ ti=tj`.
pub fn ndt(x: &str, f: &Formula, ts: &[Term], m: usize) -> Result<Formula> {
    check_terms(x, f, ts)?;
    if m == 0 || m > ts.len() {
        return Err(Error::BadArgs(format!("subset size {m} outside 1..={}", ts.len())));
    }
    Ok(ndt_unchecked(x, f, ts, m))
}

/// Counting-quantifier form of `∃x (F[x] ∧ x≠t1 ∧ … ∧ x≠tn)`. The NDT
/// parts do not mention `x` and are placed outside the counting scopes.
pub fn eliminate_guarded_exists(x: &str, f: &Formula, ts: &[Term], mode: ElimMode) -> Result<Formula> {
    check_terms(x, f, ts)?;
    let n = ts.len();
    let count = |k: usize| Formula::at_least(k as u32, x, f.clone());
    Ok(match mode {
        ElimMode::Disj => Formula::or(
            (1..=n)
                .map(|m| Formula::and([count(m), ndt_unchecked(x, f, ts, m)]))
                .chain(std::iter::once(count(n + 1))),
        ),
        ElimMode::Conj => Formula::and(
            std::iter::once(count(1)).chain((1..=n).map(|m| Formula::or([count(m + 1), ndt_unchecked(x, f, ts, m)]))),
        ),
    })
}

fn is_basic(f: &Formula) -> bool {
    matches!(f, Formula::Atom(..) | Formula::Eq(..) | Formula::Quant(..))
}

/// Literals on the bound variable in canonical order: by predicate, the
/// positive literal first.
fn canonical_conj(mut lits: Vec<Lit>) -> Formula {
    lits.sort_by(|a, b| a.atom.cmp(&b.atom).then(b.pos.cmp(&a.pos)));
    lits.dedup();
    Formula::and(lits.iter().map(Lit::to_formula))
}

fn orient(l: Lit, v: &str) -> Lit {
    match &l.atom {
        Formula::Eq(t, s) if s.is_var_named(v) && !t.is_var_named(v) => {
            Lit::new(l.pos, Formula::eq(s.clone(), t.clone()))
        }
        _ => l,
    }
}

/// Handle one conjunctive clause under `∃v`, steps 3.1 to 3.8.
fn exists_clause(v: &str, clause: Vec<Lit>, mode: ElimMode) -> Result<Formula> {
    let mut lits: Vec<Lit> = Vec::new();
    for l in clause {
        let l = orient(l, v);
        if let Formula::Eq(t, s) = &l.atom {
            if t == s {
                if l.pos {
                    continue;
                }
                return Ok(Formula::False);
            }
        }
        if lits.iter().any(|m| m.atom == l.atom && m.pos != l.pos) {
            return Ok(Formula::False);
        }
        if !lits.contains(&l) {
            lits.push(l);
        }
    }
    let v_first = lits.first().is_some_and(|l| l.atom.has_free_var(v));
    let (inner, outer): (Vec<Lit>, Vec<Lit>) = lits.into_iter().partition(|l| l.atom.has_free_var(v));
    let g = Formula::and(outer.iter().map(Lit::to_formula));
    let mut unary = Vec::new();
    let mut neq = Vec::new();
    let mut eqs = Vec::new();
    for l in inner {
        match (&l.atom, l.pos) {
            (Formula::Eq(_, t), true) => eqs.push(t.clone()),
            (Formula::Eq(_, t), false) => neq.push(t.clone()),
            _ => unary.push(l),
        }
    }
    if unary.is_empty() && neq.is_empty() && eqs.is_empty() {
        return Ok(g);
    }
    if let Some(u1) = eqs.first().cloned() {
        let mut out = vec![g];
        for l in &unary {
            let atom = substitute(&l.atom, v, &u1)?;
            out.push(Lit::new(l.pos, atom).to_formula());
        }
        out.extend(neq.iter().map(|t| Formula::neq(u1.clone(), t.clone())));
        out.extend(eqs[1..].iter().map(|u| Formula::eq(u1.clone(), u.clone())));
        return Ok(Formula::and(out));
    }
    let body = canonical_conj(unary);
    let elim = eliminate_guarded_exists(v, &body, &neq, mode)?;
    Ok(if v_first { Formula::and([elim, g]) } else { Formula::and([g, elim]) })
}

struct Cqnf<'a> {
    mode: ElimMode,
    names: &'a mut FreshNames,
}

impl Cqnf<'_> {
    fn run(&mut self, f: &Formula) -> Result<Formula> {
        Ok(match f {
            Formula::Not(g) => negate_boolean(&self.run(g)?),
            Formula::And(v) => Formula::and(v.iter().map(|g| self.run(g)).collect::<Result<Vec<_>>>()?),
            Formula::Or(v) => Formula::or(v.iter().map(|g| self.run(g)).collect::<Result<Vec<_>>>()?),
            Formula::Quant(q, x, g) => {
                let body = self.run(g)?;
                match q {
                    Quantifier::Exists => self.exists(x, &body)?,
                    Quantifier::Forall => negate_boolean(&self.exists(x, &negate_boolean(&body))?),
                    Quantifier::AtLeast(n) => self.at_least(*n, x, &body)?,
                    Quantifier::AllBut(n) => negate_boolean(&self.at_least(*n, x, &negate_boolean(&body))?),
                    _ => return Err(Error::Class(format!("predicate quantifier over {x}"))),
                }
            }
            f => f.clone(),
        })
    }

    fn exists(&mut self, v: &str, body: &Formula) -> Result<Formula> {
        let clauses = dnf_clauses(body, &is_basic, DEFAULT_SIZE_LIMIT)?;
        let parts = clauses.into_iter().map(|c| exists_clause(v, c, self.mode)).collect::<Result<Vec<_>>>()?;
        Ok(counting_simplify(&Formula::or(parts)))
    }

    fn at_least(&mut self, n: u32, v: &str, body: &Formula) -> Result<Formula> {
        check_count(n)?;
        if n == 1 {
            return self.exists(v, body);
        }
        let clauses = dnf_clauses(body, &is_basic, DEFAULT_SIZE_LIMIT)?;
        match clauses.as_slice() {
            [] => return Ok(Formula::False),
            [c] if c.iter().all(|l| !matches!(&l.atom, Formula::Eq(..)) || !l.atom.has_free_var(v)) => {
                if c.iter().any(|l| c.contains(&l.negated())) {
                    return Ok(Formula::False);
                }
                let (inner, outer): (Vec<Lit>, Vec<Lit>) = c.iter().cloned().partition(|l| l.atom.has_free_var(v));
                let g = Formula::and(outer.iter().map(Lit::to_formula));
                return Ok(counting_simplify(&Formula::and([g, Formula::at_least(n, v, canonical_conj(inner))])));
            }
            _ => {}
        }
        // No shortcut: expand into n witnesses and eliminate them one by one.
        self.names.reserve_formula(body);
        let xs: Vec<String> = (0..n).map(|_| self.names.fresh(v)).collect();
        let mut inner = Vec::new();
        for xi in &xs {
            inner.push(substitute(body, v, &Term::var(xi))?);
        }
        inner.extend(pairs(&xs, false));
        let expanded = xs.iter().rev().fold(Formula::and(inner), |acc, xi| Formula::exists(xi, acc));
        self.run(&expanded)
    }
}

/// Counting quantifier normal form of a MON= formula.
pub fn counting_normal_form(f: &Formula) -> Result<Formula> {
    counting_normal_form_with(f, ElimMode::default())
}

pub fn counting_normal_form_with(f: &Formula, mode: ElimMode) -> Result<Formula> {
    let class = classify(f);
    if !class.within(FormulaClass::MonEq) {
        return Err(Error::Class(format!("expected a MON= formula, got {class}")));
    }
    let mut names = FreshNames::for_formula(f);
    let out = Cqnf { mode, names: &mut names }.run(f)?;
    Ok(counting_simplify(&out))
}

fn plain_exists(f: &Formula) -> Formula {
    match f {
        Formula::Quant(Quantifier::AtLeast(1), x, g) => Formula::exists(x, (**g).clone()),
        Formula::Not(g) => Formula::not(plain_exists(g)),
        Formula::And(v) => Formula::And(v.iter().map(plain_exists).collect()),
        Formula::Or(v) => Formula::Or(v.iter().map(plain_exists).collect()),
        f => f.clone(),
    }
}

/// Normal form of an equality-free formula: the basic existential formulas
/// use plain `∃x`.
pub fn normal_form_noeq(f: &Formula) -> Result<Formula> {
    let class = classify(f);
    if class != FormulaClass::Mon {
        return Err(Error::Class(format!("expected a MON formula, got {class}")));
    }
    Ok(plain_exists(&counting_normal_form(f)?))
}

fn check_basic_exists(x: &str, body: &Formula) -> std::result::Result<(), String> {
    let lits: &[Formula] = match body {
        Formula::True => &[],
        Formula::And(v) => v,
        f => std::slice::from_ref(f),
    };
    for (i, l) in lits.iter().enumerate() {
        let atom = match l {
            Formula::Not(g) => &**g,
            g => g,
        };
        match atom {
            Formula::Atom(_, args) if args.len() == 1 && args[0].is_var_named(x) => {}
            _ => return Err(format!("{l} is not a unary literal on {x}")),
        }
        for m in &lits[..i] {
            if m == l {
                return Err(format!("literal {l} is repeated"));
            }
            if crate::formula::complement(m) == *l {
                return Err(format!("literals {m} and {l} are complementary"));
            }
        }
    }
    Ok(())
}

/// Check that `f` is a Boolean combination of the basic formulas of the
/// normal form. Without `allow_equality` no equalities are accepted and the
/// existential basics must be plain or `∃≥1`.
pub fn validate_cqnf(f: &Formula, allow_equality: bool) -> std::result::Result<(), String> {
    match f {
        Formula::True | Formula::False => Ok(()),
        Formula::Not(g) => validate_cqnf(g, allow_equality),
        Formula::And(v) | Formula::Or(v) => v.iter().try_for_each(|g| validate_cqnf(g, allow_equality)),
        Formula::Atom(_, args) if args.len() <= 1 => Ok(()),
        Formula::Atom(p, _) => Err(format!("predicate {p} is not monadic")),
        Formula::Eq(..) if allow_equality => Ok(()),
        Formula::Eq(..) => Err(format!("equality {f} is not allowed")),
        Formula::Quant(Quantifier::Exists | Quantifier::AtLeast(1), x, g) => check_basic_exists(x, g),
        Formula::Quant(Quantifier::AtLeast(_), x, g) if allow_equality => check_basic_exists(x, g),
        Formula::Quant(..) => Err(format!("{f} is not a basic formula")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::check_equiv;
    use crate::syntax::parse;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    /// Parse with `x` read as a variable.
    fn open(s: &str) -> Formula {
        crate::formula::replace_term(&p(s), &Term::constant("x"), &Term::var("x")).unwrap()
    }

    fn equiv(f: &Formula, g: &Formula, n: usize) {
        assert_eq!(check_equiv(f, g, n).unwrap(), None, "{f}  vs  {g}");
    }

    #[test]
    fn expansions() {
        let px = open("p(x)");
        assert_eq!(
            expand_exists_counting(2, "x", &px, ExpansionMode::Poly).unwrap(),
            p("exists x1. exists x2. (p(x1) & p(x2) & x1 != x2)")
        );
        assert_eq!(expand_exists_counting(1, "x", &px, ExpansionMode::Poly).unwrap(), p("exists x1. p(x1)"));
        assert_eq!(
            expand_exists_counting(2, "x", &px, ExpansionMode::Lin).unwrap(),
            p("forall x1. exists x. (p(x) & x != x1)")
        );
        assert_eq!(expand_forall_counting(1, "x", &px, ExpansionMode::Poly).unwrap(), p("forall x1. p(x1)"));
        assert_eq!(
            expand_forall_counting(2, "x", &Formula::False, ExpansionMode::Lin).unwrap(),
            p("exists x1. forall x. (false | x = x1)")
        );
        assert_eq!(
            expand_forall_counting(2, "x", &px, ExpansionMode::Poly).unwrap(),
            p("forall x1. forall x2. (p(x1) | p(x2) | x1 = x2)")
        );
        assert_eq!(expand_exists_counting(0, "x", &px, ExpansionMode::Poly), Err(Error::BadCount(0)));
        for n in 1..4 {
            for mode in [ExpansionMode::Poly, ExpansionMode::Lin] {
                equiv(&Formula::at_least(n, "x", px.clone()), &expand_exists_counting(n, "x", &px, mode).unwrap(), 4);
                equiv(&Formula::all_but(n, "x", px.clone()), &expand_forall_counting(n, "x", &px, mode).unwrap(), 4);
            }
        }
    }

    #[test]
    fn simplification_laws() {
        assert_eq!(counting_simplify(&p("atleast 3 x. false")), Formula::False);
        assert_eq!(counting_simplify(&p("atleast 2 x. p(x) & atleast 5 x. p(x)")), p("atleast 5 x. p(x)"));
        assert_eq!(counting_simplify(&p("atleast 2 x. p(x) | atleast 5 y. p(y)")), p("atleast 2 x. p(x)"));
        assert_eq!(counting_simplify(&p("atleast 1 x. true")), Formula::True);
        assert_eq!(counting_simplify(&p("allbut 4 x. true")), Formula::True);
        assert_eq!(counting_simplify(&p("allbut 1 x. false")), Formula::False);
    }

    #[test]
    fn ndt_examples() {
        let (a, b) = (Term::constant("a"), Term::constant("b"));
        let px = open("p(x)");
        assert_eq!(ndt("x", &px, &[a.clone()], 1).unwrap(), p("~p(a)"));
        assert_eq!(ndt("x", &px, &[a.clone(), b.clone()], 2).unwrap(), p("~p(a) | ~p(b) | a = b"));
        assert_eq!(ndt("x", &px, &[a.clone(), b.clone()], 1).unwrap(), p("~p(a) & ~p(b)"));
        assert!(matches!(ndt("x", &px, &[a.clone(), a.clone()], 1), Err(Error::BadArgs(_))));
        assert!(matches!(ndt("x", &px, &[a], 2), Err(Error::BadArgs(_))));
    }

    #[test]
    fn guarded_exists_examples() {
        let a = Term::constant("a");
        let px = open("p(x)");
        assert_eq!(
            eliminate_guarded_exists("x", &px, &[a.clone()], ElimMode::Disj).unwrap(),
            p("(atleast 1 x. p(x) & ~p(a)) | atleast 2 x. p(x)")
        );
        assert_eq!(
            eliminate_guarded_exists("x", &px, &[a.clone()], ElimMode::Conj).unwrap(),
            p("atleast 1 x. p(x) & (atleast 2 x. p(x) | ~p(a))")
        );
        for mode in [ElimMode::Disj, ElimMode::Conj] {
            assert_eq!(eliminate_guarded_exists("x", &px, &[], mode).unwrap(), p("atleast 1 x. p(x)"));
        }
        let ts = [a, Term::constant("b"), Term::constant("c")];
        let f = open("p(x) & ~q(x)");
        let lhs = p("exists x. (p(x) & ~q(x) & x != a & x != b & x != c)");
        for mode in [ElimMode::Disj, ElimMode::Conj] {
            equiv(&lhs, &eliminate_guarded_exists("x", &f, &ts, mode).unwrap(), 4);
        }
    }

    #[test]
    fn normal_form_examples() {
        let f = p("exists x. (p(x) & (q(x) | exists y. r(y)))");
        let g = counting_normal_form(&f).unwrap();
        assert_eq!(g, p("atleast 1 x. (p(x) & q(x)) | (atleast 1 x. p(x) & atleast 1 y. r(y))"));

        let f = p("exists x. (p(x) & x != a & x = c & x = d & x != b)");
        assert_eq!(counting_normal_form(&f).unwrap(), p("p(c) & c != a & c != b & c = d"));
        assert_eq!(counting_normal_form(&p("p(a)")).unwrap(), p("p(a)"));
        assert!(matches!(counting_normal_form(&p("exists2 q. q(a)")), Err(Error::Class(_))));
    }

    #[test]
    fn normal_form_is_equivalent_and_well_shaped() {
        for s in [
            "forall x. (p(x) | x = a)",
            "exists x. (p(x) & x != a & x != b)",
            "atleast 2 x. (p(x) | q(x))",
            "allbut 2 x. (p(x) & x != a)",
            "forall x. exists y. (x != y & (p(x) <-> p(y)))",
            "atleast 3 x. (p(x) & ~q(x)) -> exists y. (y = a & q(y))",
            "~exists x. forall y. (x = y | p(y))",
        ] {
            let f = p(s);
            let g = counting_normal_form(&f).unwrap();
            validate_cqnf(&g, true).unwrap();
            equiv(&f, &g, 4);
            let g = counting_normal_form_with(&f, ElimMode::Disj).unwrap();
            validate_cqnf(&g, true).unwrap();
            equiv(&f, &g, 4);
        }
    }

    #[test]
    fn noeq_examples() {
        assert_eq!(normal_form_noeq(&p("forall x. (p(x) | q(x))")).unwrap(), p("~exists x. (~p(x) & ~q(x))"));
        assert_eq!(normal_form_noeq(&p("exists x. p(x)")).unwrap(), p("exists x. p(x)"));
        assert_eq!(normal_form_noeq(&p("p | exists x. q(x)")).unwrap(), p("p | exists x. q(x)"));
        assert!(matches!(normal_form_noeq(&p("exists x. x = a")), Err(Error::Class(_))));
        let f = p("forall x. (p(x) -> exists y. (q(y) & ~p(y) | r))");
        let g = normal_form_noeq(&f).unwrap();
        validate_cqnf(&g, false).unwrap();
        equiv(&f, &g, 4);
    }

    #[test]
    fn validator_rejects_bad_shapes() {
        assert!(validate_cqnf(&p("exists x. (p(x) & ~p(x))"), true).is_err());
        assert!(validate_cqnf(&p("exists x. exists y. p(y)"), true).is_err());
        assert!(validate_cqnf(&p("atleast 2 x. p(x)"), false).is_err());
        assert!(validate_cqnf(&p("a = b"), false).is_err());
        assert!(validate_cqnf(&p("exists x. (p(x) & q(a))"), true).is_err());
        assert!(validate_cqnf(&p("~(r | atleast 2 x. (p(x) & q(x)))"), true).is_ok());
    }
}
