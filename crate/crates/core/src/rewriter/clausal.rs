//! Disjunctive and conjunctive normal forms over arbitrary basic formulas.
//!
//! A clause is a list of literals kept in first-occurrence order.
//! Contradictory conjunctive clauses are dropped as they are produced and
//! subsumed clauses are removed incrementally, so the intermediate forms
//! stay small for the inputs the elimination pipeline generates.

use serde::{Deserialize, Serialize};

use super::engine::{simplify_with, CLAUSAL};
use super::rules::rebuild;
use crate::error::{Error, Result};
use crate::formula::Formula;

pub const DEFAULT_SIZE_LIMIT: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormalForm {
    Cnf,
    Dnf,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit {
    pub pos: bool,
    pub atom: Formula,
}

impl Lit {
    pub fn new(pos: bool, atom: Formula) -> Self {
        Lit { pos, atom }
    }

    pub fn negated(&self) -> Lit {
        Lit { pos: !self.pos, atom: self.atom.clone() }
    }

    pub fn to_formula(&self) -> Formula {
        if self.pos {
            self.atom.clone()
        } else {
            Formula::not(self.atom.clone())
        }
    }

    fn clashes(&self, other: &Lit) -> bool {
        self.pos != other.pos && self.atom == other.atom
    }
}

type Clause = Vec<Lit>;

fn subset(a: &Clause, b: &Clause) -> bool {
    a.iter().all(|l| b.contains(l))
}

struct Builder {
    limit: usize,
}

impl Builder {
    fn size(clauses: &[Clause]) -> usize {
        clauses.iter().map(|c| c.len() + 1).sum()
    }

    fn check(&self, clauses: &[Clause]) -> Result<()> {
        if Self::size(clauses) > self.limit {
            return Err(Error::SizeLimitExceeded { limit: self.limit });
        }
        Ok(())
    }

    /// Add a conjunctive clause unless it is subsumed, dropping clauses it
    /// subsumes.
    fn add(out: &mut Vec<Clause>, c: Clause) {
        if out.iter().any(|e| subset(e, &c)) {
            return;
        }
        out.retain(|e| !subset(&c, e));
        out.push(c);
    }

    fn dnf(&self, f: &Formula, pos: bool, basic: &dyn Fn(&Formula) -> bool) -> Result<Vec<Clause>> {
        match (f, pos) {
            (Formula::True, true) | (Formula::False, false) => Ok(vec![vec![]]),
            (Formula::True, false) | (Formula::False, true) => Ok(vec![]),
            (Formula::Not(g), _) => self.dnf(g, !pos, basic),
            (Formula::And(v), true) | (Formula::Or(v), false) => {
                let mut acc: Vec<Clause> = vec![vec![]];
                for g in v {
                    let part = self.dnf(g, pos, basic)?;
                    let mut next = Vec::new();
                    for a in &acc {
                        for b in &part {
                            let mut c = a.clone();
                            let mut clash = false;
                            for l in b {
                                if c.iter().any(|m| m.clashes(l)) {
                                    clash = true;
                                    break;
                                }
                                if !c.contains(l) {
                                    c.push(l.clone());
                                }
                            }
                            if !clash {
                                Self::add(&mut next, c);
                            }
                        }
                        self.check(&next)?;
                    }
                    acc = next;
                    if acc.is_empty() {
                        break;
                    }
                }
                Ok(acc)
            }
            (Formula::Or(v), true) | (Formula::And(v), false) => {
                let mut acc = Vec::new();
                for g in v {
                    for c in self.dnf(g, pos, basic)? {
                        Self::add(&mut acc, c);
                    }
                    self.check(&acc)?;
                }
                Ok(acc)
            }
            (g, _) if basic(g) => Ok(vec![vec![Lit::new(pos, g.clone())]]),
            (g, _) => Err(Error::Shape(format!("{g} is not a basic formula"))),
        }
    }
}

/// Remove complements of unit clauses from other clauses and drop subsumed
/// clauses, to a fixpoint.
fn reduce(mut clauses: Vec<Clause>) -> Vec<Clause> {
    loop {
        let units: Vec<Lit> = clauses.iter().filter(|c| c.len() == 1).map(|c| c[0].clone()).collect();
        let mut changed = false;
        for c in clauses.iter_mut() {
            if c.len() == 1 {
                continue;
            }
            let before = c.len();
            c.retain(|l| !units.iter().any(|u| u.clashes(l)));
            changed |= c.len() != before;
        }
        let mut out = Vec::new();
        for c in clauses {
            Builder::add(&mut out, c);
        }
        clauses = out;
        if !changed {
            return clauses;
        }
    }
}

/// Clauses of a disjunctive normal form: each inner list is a conjunction of
/// literals over formulas accepted by `basic`.
pub fn dnf_clauses(f: &Formula, basic: &dyn Fn(&Formula) -> bool, limit: usize) -> Result<Vec<Vec<Lit>>> {
    Ok(reduce(Builder { limit }.dnf(f, true, basic)?))
}

/// Clauses of a conjunctive normal form: each inner list is a disjunction.
pub fn cnf_clauses(f: &Formula, basic: &dyn Fn(&Formula) -> bool, limit: usize) -> Result<Vec<Vec<Lit>>> {
    let neg = Builder { limit }.dnf(f, false, basic)?;
    Ok(reduce(neg).into_iter().map(|c| c.iter().map(Lit::negated).collect()).collect())
}

pub fn lits_to_formula(clauses: &[Vec<Lit>], form: NormalForm) -> Formula {
    let conj_outer = form == NormalForm::Cnf;
    rebuild(
        conj_outer,
        clauses
            .iter()
            .map(|c| rebuild(!conj_outer, c.iter().map(Lit::to_formula).collect()))
            .collect(),
    )
}

pub fn to_dnf_over_basics(f: &Formula, basic: &dyn Fn(&Formula) -> bool) -> Result<Formula> {
    Ok(lits_to_formula(&dnf_clauses(f, basic, DEFAULT_SIZE_LIMIT)?, NormalForm::Dnf))
}

pub fn to_cnf_over_basics(f: &Formula, basic: &dyn Fn(&Formula) -> bool) -> Result<Formula> {
    Ok(lits_to_formula(&cnf_clauses(f, basic, DEFAULT_SIZE_LIMIT)?, NormalForm::Cnf))
}

/// Tautology removal, subsumption and unit reduction on a clausal matrix.
pub fn clause_simplify(matrix: &Formula, form: NormalForm) -> Result<Formula> {
    let (outer_and, clause_or) = match form {
        NormalForm::Cnf => (true, true),
        NormalForm::Dnf => (false, false),
    };
    let clauses: &[Formula] = match (matrix, outer_and) {
        (Formula::And(v), true) | (Formula::Or(v), false) => v,
        _ => std::slice::from_ref(matrix),
    };
    for c in clauses {
        let members: &[Formula] = match (c, clause_or) {
            (Formula::Or(v), true) | (Formula::And(v), false) => v,
            _ => std::slice::from_ref(c),
        };
        for m in members {
            let inner = match m {
                Formula::Not(g) => &**g,
                g => g,
            };
            if matches!(inner, Formula::And(_) | Formula::Or(_)) {
                return Err(Error::Shape(format!("{m} is not a basic formula or its negation")));
            }
        }
    }
    if clauses.len() == 1 && !matches!(matrix, Formula::And(_) | Formula::Or(_)) {
        return Ok(matrix.clone());
    }
    Ok(simplify_with(matrix, CLAUSAL, true, None))
}
