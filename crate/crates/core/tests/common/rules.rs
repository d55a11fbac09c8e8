//! Random instances of every rewrite rule, built from templates whose
//! holes are filled by random formulas.

use monadic_elim::formula::dual;
use monadic_elim::oracle::{check_entails, check_equiv};
use monadic_elim::rewriter::{apply_rule, Direction, Operand, RuleId, Step};
use monadic_elim::{Formula, Quantifier, Term};
use rand::seq::SliceRandom;
use rand::Rng;

use super::Gen;

/// One application: the formula and the step to apply to it.
pub struct Instance {
    pub formula: Formula,
    pub step: Step,
}

fn x() -> Term {
    Term::var("x")
}

fn conn(conj: bool, v: Vec<Formula>) -> Formula {
    if conj {
        Formula::And(v)
    } else {
        Formula::Or(v)
    }
}

impl Gen {
    /// Small formula whose free variables are among `scope`.
    fn piece(&mut self, scope: &[&str]) -> Formula {
        let mut s: Vec<String> = scope.iter().map(|v| v.to_string()).collect();
        self.formula(2, 1, &mut s)
    }

    /// Small formula in which `x` certainly occurs free.
    fn with_x(&mut self) -> Formula {
        let p = self.unary.choose(&mut self.rng).unwrap().clone();
        let lit = Formula::unary(p, x());
        let lit = if self.chance(0.5) { Formula::not(lit) } else { lit };
        let rest = self.piece(&["x"]);
        conn(self.chance(0.5), vec![lit, rest])
    }

    fn universal(&mut self) -> Quantifier {
        if self.chance(0.5) {
            Quantifier::Forall
        } else {
            Quantifier::AllBut(self.rng.gen_range(1..=3))
        }
    }

    fn existential(&mut self) -> Quantifier {
        if self.chance(0.5) {
            Quantifier::Exists
        } else {
            Quantifier::AtLeast(self.rng.gen_range(1..=3))
        }
    }

    fn any_quantifier(&mut self) -> Quantifier {
        if self.chance(0.5) {
            self.universal()
        } else {
            self.existential()
        }
    }

    fn random_literal(&mut self, scope: &[&str]) -> Formula {
        let s: Vec<String> = scope.iter().map(|v| v.to_string()).collect();
        self.literal(&s)
    }

    /// Node, operand and direction of a random match of `rule`.
    fn template(&mut self, rule: RuleId, dir: Direction) -> (Formula, Option<Operand>) {
        use Direction::*;
        use Formula as F;
        use RuleId::*;
        let c = self.chance(0.5);
        let s = &["x", "y"][..];
        match (rule, dir) {
            (NotNot, L2R) => (F::not(F::not(self.piece(s))), None),
            (NotNot, R2L) => (self.piece(s), None),
            (NotAnd | NotOr, L2R) => {
                let v = vec![self.piece(s), self.piece(s)];
                (F::not(conn(rule == NotAnd, v)), None)
            }
            (NotAnd | NotOr, R2L) => {
                let v = vec![F::not(self.piece(s)), F::not(self.piece(s))];
                (conn(rule == NotOr, v), None)
            }
            (NotAll, L2R) => (F::not(F::quant(self.universal(), "x", self.with_x())), None),
            (NotEx, L2R) => (F::not(F::quant(self.existential(), "x", self.with_x())), None),
            (NotAll, R2L) => (F::quant(self.existential(), "x", F::not(self.with_x())), None),
            (NotEx, R2L) => (F::quant(self.universal(), "x", F::not(self.with_x())), None),
            (AoAssoc, L2R) => {
                let inner = conn(c, vec![self.piece(s), self.piece(s)]);
                (conn(c, vec![self.piece(s), inner]), None)
            }
            (AoAssoc, R2L) => {
                let v = vec![self.piece(s), self.piece(s), self.piece(s)];
                (conn(c, v), Some(Operand::Index(self.below(2))))
            }
            (AoComm, _) => {
                let v = vec![self.piece(s), self.piece(s), self.piece(s)];
                (conn(c, v), Some(Operand::Index(self.below(2))))
            }
            (AoIdem, L2R) => {
                let f = self.piece(s);
                (conn(c, vec![f.clone(), self.piece(s), f]), None)
            }
            (AoIdem, R2L) => (self.piece(s), None),
            (TvNotT, L2R) => (F::not(F::True), None),
            (TvNotT, R2L) => (F::False, None),
            (TvNotF, L2R) => (F::not(F::False), None),
            (TvNotF, R2L) => (F::True, None),
            (TvAndT | TvOrF, L2R) => {
                let conj = rule == TvAndT;
                let unit = if conj { F::True } else { F::False };
                (conn(conj, vec![self.piece(s), unit, self.piece(s)]), None)
            }
            (TvAndT | TvOrF, R2L) => (self.piece(s), None),
            (TvAndF | TvOrT, L2R) => {
                let conj = rule == TvAndF;
                let zero = if conj { F::False } else { F::True };
                (conn(conj, vec![self.piece(s), zero]), None)
            }
            (TvAndF | TvOrT, R2L) => {
                let zero = if rule == TvAndF { F::False } else { F::True };
                (zero, Some(Operand::Formula(self.piece(s))))
            }
            (TvQT | TvQF, _) => {
                let value = rule == TvQT;
                let n = self.rng.gen_range(2..=3);
                let q = *[
                    Quantifier::Forall,
                    Quantifier::Exists,
                    if value { Quantifier::AtLeast(1) } else { Quantifier::AtLeast(n) },
                    if value { Quantifier::AllBut(n) } else { Quantifier::AllBut(1) },
                ]
                .choose(&mut self.rng)
                .unwrap();
                let tv = if value { F::True } else { F::False };
                if dir == L2R {
                    (F::quant(q, "x", tv), None)
                } else {
                    (tv, Some(Operand::Binder(q, "x".into())))
                }
            }
            (ComplemAnd | ComplemOr, L2R) => {
                let f = self.piece(s);
                (conn(rule == ComplemAnd, vec![f.clone(), self.piece(s), F::not(f)]), None)
            }
            (ComplemAnd | ComplemOr, R2L) => {
                let tv = if rule == ComplemAnd { F::False } else { F::True };
                (tv, Some(Operand::Formula(self.piece(s))))
            }
            (DistDnf | DistCnf, L2R) => {
                let conj = rule == DistDnf;
                let inner = conn(!conj, vec![self.piece(s), self.piece(s)]);
                (conn(conj, vec![self.piece(s), inner]), None)
            }
            (DistDnf | DistCnf, R2L) => {
                let conj = rule == DistDnf;
                let f = self.piece(s);
                let rows = vec![conn(conj, vec![f.clone(), self.piece(s)]), conn(conj, vec![f, self.piece(s)])];
                (conn(!conj, rows), None)
            }
            (AllOutAnd | ExOutOr, L2R) => {
                let conj = rule == AllOutAnd;
                let q = if conj { Quantifier::Forall } else { Quantifier::Exists };
                let v = vec![F::quant(q, "x", self.with_x()), F::quant(q, "x", self.with_x())];
                (conn(conj, v), None)
            }
            (AllOutAnd | ExOutOr, R2L) => {
                let conj = rule == AllOutAnd;
                let q = if conj { Quantifier::Forall } else { Quantifier::Exists };
                (F::quant(q, "x", conn(conj, vec![self.with_x(), self.with_x()])), None)
            }
            (QOutAo, _) => {
                let n = self.rng.gen_range(1..=3);
                let q = *[
                    Quantifier::Forall,
                    Quantifier::Exists,
                    if c { Quantifier::AtLeast(n) } else { Quantifier::AtLeast(1) },
                    if c { Quantifier::AllBut(1) } else { Quantifier::AllBut(n) },
                ]
                .choose(&mut self.rng)
                .unwrap();
                let g = self.piece(&["y"]);
                if dir == L2R {
                    (conn(c, vec![F::quant(q, "x", self.with_x()), g]), None)
                } else {
                    (F::quant(q, "x", conn(c, vec![self.with_x(), g])), None)
                }
            }
            (QuantDrop, _) => {
                let q = *[Quantifier::Forall, Quantifier::Exists, Quantifier::AtLeast(1), Quantifier::AllBut(1)]
                    .choose(&mut self.rng)
                    .unwrap();
                let g = self.piece(&["y"]);
                if dir == L2R {
                    (F::quant(q, "x", g), None)
                } else {
                    (g, Some(Operand::Binder(q, "x".into())))
                }
            }
            (QuantFlip, _) => {
                let q = if c { Quantifier::Forall } else { Quantifier::Exists };
                let body = conn(self.chance(0.5), vec![self.with_x(), self.piece(&["x", "y"])]);
                (F::quant(q, "x", F::quant(q, "y", body)), None)
            }
            (VarRename, _) => {
                let q = self.any_quantifier();
                (F::quant(q, "x", self.with_x()), Some(Operand::Var("w".into())))
            }
            (SubsAndAbsorp, L2R) => {
                let f = self.piece(s);
                (F::And(vec![f.clone(), F::Or(vec![self.piece(s), f])]), None)
            }
            (SubsAndAbsorp, R2L) => {
                let f = self.piece(s);
                let g = F::Or(vec![f.clone(), self.piece(s)]);
                (f, Some(Operand::Formula(g)))
            }
            (SubsOrAbsorp, L2R) => {
                let f = self.piece(s);
                (F::Or(vec![F::And(vec![f.clone(), self.piece(s)]), f]), None)
            }
            (SubsOrAbsorp, R2L) => {
                let f = self.piece(s);
                let g = F::And(vec![f.clone(), self.piece(s)]);
                (f, Some(Operand::Formula(g)))
            }
            (Taut, L2R) => {
                let l = self.random_literal(s);
                let clause = conn(!c, vec![l.clone(), self.piece(s), F::not(l)]);
                (conn(c, vec![clause, self.piece(s)]), None)
            }
            (Taut, R2L) => {
                let l = self.random_literal(s);
                let clause = conn(!c, vec![l.clone(), F::not(l)]);
                (conn(c, vec![self.piece(s), self.piece(s)]), Some(Operand::Formula(clause)))
            }
            (Subs, L2R) => {
                let (a, b, d) = (self.random_literal(s), self.random_literal(s), self.random_literal(s));
                let small = conn(!c, vec![a.clone(), b.clone()]);
                let big = conn(!c, vec![a, d, b]);
                (conn(c, vec![big, self.piece(s), small]), None)
            }
            (Subs, R2L) => {
                let (a, b, d) = (self.random_literal(s), self.random_literal(s), self.random_literal(s));
                let small = conn(!c, vec![a.clone(), b.clone()]);
                let big = conn(!c, vec![b, a, d]);
                (conn(c, vec![small, self.piece(s)]), Some(Operand::Formula(big)))
            }
            (Unit, L2R) => {
                let l = self.random_literal(s);
                let clause = conn(!c, vec![self.random_literal(s), F::not(l.clone()), self.random_literal(s)]);
                (conn(c, vec![l, clause]), None)
            }
            (Unit, R2L) => {
                let l = self.random_literal(s);
                let clause = conn(!c, vec![self.random_literal(s), self.random_literal(s)]);
                (conn(c, vec![l.clone(), clause]), Some(Operand::Member(1, F::not(l))))
            }
            (PulloutAll | PulloutEx, L2R) => {
                let a = Term::constant("a");
                let f = conn(c, vec![F::unary("p", a.clone()), self.piece(&["y"])]);
                (f, Some(Operand::Term(a, "w".into())))
            }
            (PulloutAll | PulloutEx, R2L) => {
                let w = Term::var("w");
                let a = Term::constant(self.consts.choose(&mut self.rng).unwrap().clone());
                let body = self.piece(&["w", "y"]);
                if rule == PulloutAll {
                    (F::forall("w", F::Or(vec![F::neq(w, a), body])), None)
                } else {
                    (F::exists("w", F::And(vec![F::eq(a, w), body])), None)
                }
            }
            (InfV, _) => {
                let l = self.random_literal(s);
                let first = F::Or(vec![l.clone(), self.piece(s)]);
                let second = F::Or(vec![self.piece(s), F::not(l)]);
                (F::And(vec![first, self.piece(s), second]), None)
            }
            (InfVQ, _) => {
                let px = F::unary(self.unary.choose(&mut self.rng).unwrap().clone(), x());
                let first = F::forall("x", F::Or(vec![px.clone(), self.piece(s)]));
                let second = F::forall("x", F::Or(vec![F::not(px), self.piece(s)]));
                (F::And(vec![first, second]), None)
            }
            (InfVbarPos, _) => {
                let g = self.piece(&[]);
                let user = F::Or(vec![self.piece(s), g.clone()]);
                let imp = F::Or(vec![F::not(g), self.piece(s)]);
                (F::And(vec![user, imp]), None)
            }
            (InfVbarNeg, _) => {
                let g = self.piece(&[]);
                let user = F::Or(vec![self.piece(s), F::not(g.clone())]);
                let imp = F::Or(vec![g, self.piece(s)]);
                (F::And(vec![user, imp]), None)
            }
            (InfVbarPosStar, _) => {
                let px = F::unary(self.unary.choose(&mut self.rng).unwrap().clone(), x());
                let user = F::exists("x", F::And(vec![px.clone(), self.piece(s)]));
                let imp = F::forall("x", F::Or(vec![F::not(px), self.with_x()]));
                (F::And(vec![user, imp]), None)
            }
            (InfVbarNegStar, _) => {
                let px = F::unary(self.unary.choose(&mut self.rng).unwrap().clone(), x());
                let user = F::exists("x", F::And(vec![F::not(px.clone()), self.piece(s)]));
                let imp = F::forall("x", F::Or(vec![px, self.with_x()]));
                (F::And(vec![user, imp]), None)
            }
        }
    }

    /// A random instance of `rule`, sometimes dualized and sometimes placed
    /// below the root.
    pub fn rule_instance(&mut self, rule: RuleId) -> Instance {
        let dir = if rule.is_entailment() || self.chance(0.5) { Direction::L2R } else { Direction::R2L };
        let (mut node, mut op) = self.template(rule, dir);
        let self_dual = matches!(rule, RuleId::PulloutAll | RuleId::PulloutEx);
        let dualize = !rule.is_entailment() && !self_dual && self.chance(0.5);
        if dualize {
            node = dual(&node);
            op = op.map(|o| match o {
                Operand::Formula(g) => Operand::Formula(dual(&g)),
                Operand::Binder(q, v) => Operand::Binder(q.dual(), v),
                Operand::Member(i, g) => Operand::Member(i, dual(&g)),
                o => o,
            });
        }
        let mut step = Step::new(rule, Vec::new(), dir);
        if dualize {
            step = step.dualized();
        }
        if let Some(o) = op {
            step = step.with(o);
        }
        // Entailment rules only weaken, so they stay at the root; an
        // equivalence may sit anywhere, including under a negation.
        let formula = if !rule.is_entailment() && self.chance(0.5) {
            let ctx = self.piece(&["y"]);
            let negate = self.chance(0.5);
            let inner = if negate { Formula::not(node) } else { node };
            step.position = if negate { vec![1, 0] } else { vec![1] };
            Formula::And(vec![ctx, inner])
        } else {
            node
        };
        Instance { formula, step }
    }
}

/// Apply the step and check soundness on domains 1..=n: equivalence for
/// equivalence rules, entailment for the others.
pub fn check_instance(inst: &Instance, n: usize) -> Result<(), String> {
    let out = apply_rule(&inst.formula, &inst.step).map_err(|e| format!("{e} applying {:?} to {}", inst.step, inst.formula))?;
    let cex = if inst.step.rule.is_entailment() {
        check_entails(&inst.formula, &out, n)
    } else {
        check_equiv(&inst.formula, &out, n)
    }
    .map_err(|e| e.to_string())?;
    match cex {
        None => Ok(()),
        Some(i) => Err(format!("{:?}: {}  ~>  {}\n{}", inst.step, inst.formula, out, i)),
    }
}
