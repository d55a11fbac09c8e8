//! Seeded random formula generators shared by the integration tests.

#![allow(dead_code)]

pub mod rules;

use monadic_elim::{Formula, Quantifier, Term};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const VARS: [&str; 3] = ["x", "y", "z"];

#[derive(Clone, Debug)]
pub struct Gen {
    pub rng: ChaCha8Rng,
    pub unary: Vec<String>,
    pub nullary: Vec<String>,
    pub consts: Vec<String>,
    pub equality: bool,
    pub counting: bool,
    pub max_count: u32,
}

impl Gen {
    /// Two unary predicates, two constants, equality and counting.
    pub fn new(seed: u64) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            unary: vec!["p".into(), "q".into()],
            nullary: Vec::new(),
            consts: vec!["a".into(), "b".into()],
            equality: true,
            counting: true,
            max_count: 3,
        }
    }

    pub fn without_equality(mut self) -> Self {
        self.equality = false;
        self.counting = false;
        self
    }

    pub fn with_unary(mut self, preds: &[&str]) -> Self {
        self.unary = preds.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn with_nullary(mut self, preds: &[&str]) -> Self {
        self.nullary = preds.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn with_consts(mut self, consts: &[&str]) -> Self {
        self.consts = consts.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn term(&mut self, scope: &[String]) -> Term {
        let total = scope.len() + self.consts.len();
        if total == 0 {
            return Term::constant("a");
        }
        let i = self.below(total);
        if i < scope.len() {
            Term::var(scope[i].clone())
        } else {
            Term::constant(self.consts[i - scope.len()].clone())
        }
    }

    pub fn atom(&mut self, scope: &[String]) -> Formula {
        let mut kinds = Vec::new();
        if !self.unary.is_empty() {
            kinds.extend(['u', 'u']);
        }
        if !self.nullary.is_empty() {
            kinds.push('n');
        }
        if self.equality && self.consts.len() + scope.len() >= 2 {
            kinds.push('e');
        }
        match kinds.choose(&mut self.rng).copied() {
            Some('n') => Formula::nullary(self.nullary.choose(&mut self.rng).unwrap().clone()),
            Some('e') => {
                let t = self.term(scope);
                let s = self.term(scope);
                Formula::eq(t, s)
            }
            Some(_) => {
                let p = self.unary.choose(&mut self.rng).unwrap().clone();
                let t = self.term(scope);
                Formula::unary(p, t)
            }
            None => Formula::True,
        }
    }

    pub fn literal(&mut self, scope: &[String]) -> Formula {
        let a = self.atom(scope);
        if self.chance(0.5) {
            Formula::not(a)
        } else {
            a
        }
    }

    fn quantifier(&mut self) -> Quantifier {
        let k = self.below(if self.counting { 4 } else { 2 });
        match k {
            0 => Quantifier::Forall,
            1 => Quantifier::Exists,
            2 => Quantifier::AtLeast(self.rng.gen_range(1..=self.max_count)),
            _ => Quantifier::AllBut(self.rng.gen_range(1..=self.max_count)),
        }
    }

    /// A formula of connective depth at most `depth` with at most `qdepth`
    /// nested individual quantifiers; `scope` lists the variables that may
    /// occur free.
    pub fn formula(&mut self, depth: usize, qdepth: usize, scope: &mut Vec<String>) -> Formula {
        if depth == 0 || self.chance(0.2) {
            return match self.below(8) {
                0 => Formula::True,
                1 => Formula::False,
                _ => self.atom(scope),
            };
        }
        let k = self.below(if qdepth > 0 { 5 } else { 3 });
        match k {
            0 => Formula::not(self.formula(depth - 1, qdepth, scope)),
            1 | 2 => {
                let n = self.rng.gen_range(2..=3);
                let items: Vec<Formula> = (0..n).map(|_| self.formula(depth - 1, qdepth, scope)).collect();
                if k == 1 {
                    Formula::And(items)
                } else {
                    Formula::Or(items)
                }
            }
            _ => {
                let x = VARS.choose(&mut self.rng).unwrap().to_string();
                let q = self.quantifier();
                scope.push(x.clone());
                let body = self.formula(depth - 1, qdepth - 1, scope);
                scope.pop();
                Formula::quant(q, x, body)
            }
        }
    }

    /// A sentence: no free variables, constants allowed.
    pub fn sentence(&mut self, depth: usize, qdepth: usize) -> Formula {
        self.formula(depth, qdepth, &mut Vec::new())
    }

    /// A formula in which `x` may occur free.
    pub fn open_in(&mut self, x: &str, depth: usize, qdepth: usize) -> Formula {
        self.formula(depth, qdepth, &mut vec![x.to_string()])
    }

    /// A closed Boolean formula over the nullary predicates, possibly with
    /// Boolean quantifiers and free nullary predicates.
    pub fn boolean(&mut self, depth: usize) -> Formula {
        if depth == 0 || self.chance(0.15) {
            return match self.below(10) {
                0 => Formula::True,
                1 => Formula::False,
                _ => Formula::nullary(self.nullary.choose(&mut self.rng).unwrap().clone()),
            };
        }
        match self.below(6) {
            0 => Formula::not(self.boolean(depth - 1)),
            1 | 2 => {
                let items: Vec<Formula> = (0..self.rng.gen_range(2..=3)).map(|_| self.boolean(depth - 1)).collect();
                Formula::And(items)
            }
            3 => {
                let items: Vec<Formula> = (0..self.rng.gen_range(2..=3)).map(|_| self.boolean(depth - 1)).collect();
                Formula::Or(items)
            }
            k => {
                let p = self.nullary.choose(&mut self.rng).unwrap().clone();
                let body = self.boolean(depth - 1);
                if k == 4 {
                    Formula::exists_pred(p, 0, body)
                } else {
                    Formula::forall_pred(p, 0, body)
                }
            }
        }
    }

    /// A Boolean combination of `∃≥n x ⊤` and `∀^(<n) x ⊥`.
    pub fn pure_counting(&mut self, depth: usize, max_count: u32) -> Formula {
        if depth == 0 || self.chance(0.25) {
            let n = self.rng.gen_range(1..=max_count);
            return match self.below(5) {
                0 => Formula::exists("x", Formula::True),
                1 => Formula::forall("x", Formula::False),
                2 => Formula::all_but(n, "x", Formula::False),
                _ => Formula::at_least(n, "x", Formula::True),
            };
        }
        match self.below(3) {
            0 => Formula::not(self.pure_counting(depth - 1, max_count)),
            k => {
                let items: Vec<Formula> = (0..2).map(|_| self.pure_counting(depth - 1, max_count)).collect();
                if k == 1 {
                    Formula::And(items)
                } else {
                    Formula::Or(items)
                }
            }
        }
    }
}

/// Replace constants named like variables by free variables, matching the
/// convention that unbound identifiers parse as constants.
pub fn open(f: &Formula, vars: &[&str]) -> Formula {
    vars.iter().fold(f.clone(), |acc, v| {
        monadic_elim::formula::replace_term(&acc, &Term::constant(*v), &Term::var(*v)).unwrap()
    })
}

/// Largest domain worth checking: the small-model bound, capped.
pub fn domains(f: &Formula, cap: usize) -> usize {
    monadic_elim::oracle::small_model_bound(f).clamp(1, cap)
}
