//! The rule catalogue as position-addressed, direction-tagged rewrite steps.
//!
//! Positions are paths of child indices from the root; the body of a
//! quantifier and the operand of a negation are child 0. Rules that are
//! stated for binary connectives act on n-ary nodes as described on each
//! [`RuleId`] variant. Mirror-image rules are not duplicated: a step may be
//! `dualized`, which applies `dual ∘ rule ∘ dual`.

mod clausal;
mod engine;
mod rules;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{dual, Formula, Quantifier, Term};

pub use clausal::{
    clause_simplify, cnf_clauses, dnf_clauses, lits_to_formula, to_cnf_over_basics, to_dnf_over_basics, Lit,
    NormalForm, DEFAULT_SIZE_LIMIT,
};
pub use engine::{
    circumlocute, nnf_traced, simplify, simplify_traced, simplify_truth_values, simplify_with, Strategy, FULL,
    NNF, TRUTH_VALUES,
};
pub use rules::{entails, polarity_at, Polarity};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RuleId {
    /// ¬¬F ≡ F
    NotNot,
    /// ¬(F1 ∧ … ∧ Fn) ≡ ¬F1 ∨ … ∨ ¬Fn
    NotAnd,
    NotOr,
    /// ¬∀v F ≡ ∃v ¬F, also ¬∀^(<n) v F ≡ ∃≥n v ¬F
    NotAll,
    NotEx,
    /// L2R splices a nested child of the same connective, R2L groups two
    /// adjacent children (the first pair unless an index is given).
    AoAssoc,
    /// Swaps two adjacent children.
    AoComm,
    /// L2R removes repeated children, R2L duplicates a formula.
    AoIdem,
    TvNotT,
    TvNotF,
    TvAndT,
    TvAndF,
    TvOrT,
    TvOrF,
    TvQT,
    TvQF,
    ComplemAnd,
    ComplemOr,
    DistDnf,
    DistCnf,
    AllOutAnd,
    ExOutOr,
    /// Qv F ⊗ G ≡ Qv (F ⊗ G) if v is not free in G.
    QOutAo,
    QuantDrop,
    QuantFlip,
    VarRename,
    /// F ∧ G ≡ F if F ⊨ G
    SubsAndAbsorp,
    /// F ∨ G ≡ G if F ⊨ G
    SubsOrAbsorp,
    Taut,
    Subs,
    Unit,
    /// F[t] ≡ ∀x (x≠t ∨ F[x])
    PulloutAll,
    /// F[t] ≡ ∃x (x=t ∧ F[x])
    PulloutEx,
    InfV,
    InfVQ,
    InfVbarPos,
    InfVbarNeg,
    InfVbarPosStar,
    InfVbarNegStar,
}

impl RuleId {
    pub const ALL: [RuleId; 39] = [
        RuleId::NotNot,
        RuleId::NotAnd,
        RuleId::NotOr,
        RuleId::NotAll,
        RuleId::NotEx,
        RuleId::AoAssoc,
        RuleId::AoComm,
        RuleId::AoIdem,
        RuleId::TvNotT,
        RuleId::TvNotF,
        RuleId::TvAndT,
        RuleId::TvAndF,
        RuleId::TvOrT,
        RuleId::TvOrF,
        RuleId::TvQT,
        RuleId::TvQF,
        RuleId::ComplemAnd,
        RuleId::ComplemOr,
        RuleId::DistDnf,
        RuleId::DistCnf,
        RuleId::AllOutAnd,
        RuleId::ExOutOr,
        RuleId::QOutAo,
        RuleId::QuantDrop,
        RuleId::QuantFlip,
        RuleId::VarRename,
        RuleId::SubsAndAbsorp,
        RuleId::SubsOrAbsorp,
        RuleId::Taut,
        RuleId::Subs,
        RuleId::Unit,
        RuleId::PulloutAll,
        RuleId::PulloutEx,
        RuleId::InfV,
        RuleId::InfVQ,
        RuleId::InfVbarPos,
        RuleId::InfVbarNeg,
        RuleId::InfVbarPosStar,
        RuleId::InfVbarNegStar,
    ];

    /// Label in Behmann's numbering; `-` for rules he lists without one.
    pub fn label(self) -> &'static str {
        use RuleId::*;
        match self {
            NotNot => "I",
            AoAssoc => "II",
            QOutAo => "II*",
            AoComm => "III",
            QuantFlip => "III*",
            AoIdem => "IV",
            AllOutAnd | ExOutOr => "IV*",
            InfV => "V",
            InfVQ => "V*",
            InfVbarPos | InfVbarNeg => "V-bar",
            InfVbarPosStar | InfVbarNegStar => "V-bar*",
            NotAnd | NotOr => "VI",
            NotAll | NotEx => "VI*",
            DistDnf | DistCnf => "VII",
            Subs | Unit => "IX",
            SubsAndAbsorp | SubsOrAbsorp => "X",
            PulloutAll | PulloutEx => "XI",
            TvNotT | TvNotF | TvAndT | TvAndF | TvOrT | TvOrF | TvQT | TvQF | ComplemAnd | ComplemOr | QuantDrop
            | VarRename | Taut => "-",
        }
    }

    pub fn name(self) -> &'static str {
        use RuleId::*;
        match self {
            NotNot => "not-not",
            NotAnd => "not-and",
            NotOr => "not-or",
            NotAll => "not-all",
            NotEx => "not-ex",
            AoAssoc => "ao-assoc",
            AoComm => "ao-comm",
            AoIdem => "ao-idem",
            TvNotT => "tv-not-t",
            TvNotF => "tv-not-f",
            TvAndT => "tv-and-t",
            TvAndF => "tv-and-f",
            TvOrT => "tv-or-t",
            TvOrF => "tv-or-f",
            TvQT => "tv-q-t",
            TvQF => "tv-q-f",
            ComplemAnd => "complem-and",
            ComplemOr => "complem-or",
            DistDnf => "dist-dnf",
            DistCnf => "dist-cnf",
            AllOutAnd => "all-out-and",
            ExOutOr => "ex-out-or",
            QOutAo => "q-out-ao",
            QuantDrop => "quant-drop",
            QuantFlip => "quant-flip",
            VarRename => "var-rename",
            SubsAndAbsorp => "subs-and-absorp",
            SubsOrAbsorp => "subs-or-absorp",
            Taut => "taut",
            Subs => "subs",
            Unit => "unit",
            PulloutAll => "pullout-all",
            PulloutEx => "pullout-ex",
            InfV => "inf-v",
            InfVQ => "inf-v-q",
            InfVbarPos => "inf-vbar-pos",
            InfVbarNeg => "inf-vbar-neg",
            InfVbarPosStar => "inf-vbar-pos-star",
            InfVbarNegStar => "inf-vbar-neg-star",
        }
    }

    /// Entailment rules only weaken, left to right.
    pub fn is_entailment(self) -> bool {
        matches!(
            self,
            RuleId::InfV
                | RuleId::InfVQ
                | RuleId::InfVbarPos
                | RuleId::InfVbarNeg
                | RuleId::InfVbarPosStar
                | RuleId::InfVbarNegStar
        )
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    L2R,
    R2L,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::L2R => "L2R",
            Direction::R2L => "R2L",
        })
    }
}

/// Extra input some rules need: parts that occur only on the produced side,
/// or a choice among several matches.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Operand {
    Formula(Formula),
    Binder(Quantifier, String),
    Var(String),
    /// Term to circumlocute and the fresh variable to use.
    Term(Term, String),
    Index(usize),
    /// Member to add to the clause at the given index.
    Member(usize, Formula),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Step {
    pub rule: RuleId,
    pub position: Vec<usize>,
    pub direction: Direction,
    pub dualized: bool,
    pub operand: Option<Operand>,
}

impl Step {
    pub fn new(rule: RuleId, position: Vec<usize>, direction: Direction) -> Self {
        Step { rule, position, direction, dualized: false, operand: None }
    }

    pub fn l2r(rule: RuleId, position: &[usize]) -> Self {
        Step::new(rule, position.to_vec(), Direction::L2R)
    }

    pub fn r2l(rule: RuleId, position: &[usize]) -> Self {
        Step::new(rule, position.to_vec(), Direction::R2L)
    }

    pub fn dualized(mut self) -> Self {
        self.dualized = true;
        self
    }

    pub fn with(mut self, operand: Operand) -> Self {
        self.operand = Some(operand);
        self
    }
}

/// One certified step of a derivation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RewriteStep {
    pub step: Step,
    pub before: Formula,
    pub after: Formula,
}

impl RewriteStep {
    pub fn replays(&self) -> bool {
        apply_rule(&self.before, &self.step).map_or(false, |f| f == self.after)
    }

    /// `<label> @ <path> <direction>` followed by the rule name.
    pub fn header(&self) -> String {
        let label = if self.step.dualized {
            format!("VIII({})", self.step.rule.label())
        } else {
            self.step.rule.label().to_string()
        };
        let path = if self.step.position.is_empty() {
            "root".to_string()
        } else {
            self.step.position.iter().map(usize::to_string).collect::<Vec<_>>().join(".")
        };
        format!("{label} @ {path} {} [{}]", self.step.direction, self.step.rule)
    }
}

impl fmt::Display for RewriteStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.header())?;
        writeln!(f, "  before: {}", self.before)?;
        write!(f, "  after:  {}", self.after)
    }
}

/// Apply one step to `f`.
pub fn apply_rule(f: &Formula, step: &Step) -> Result<Formula> {
    let node = f
        .at(&step.position)
        .ok_or_else(|| Error::no_match(step.rule, format!("no subformula at {:?}", step.position)))?;
    let replaced = apply_at(node, step)?;
    let mut out = f.clone();
    *out.at_mut(&step.position).expect("position checked above") = replaced;
    Ok(out)
}

/// Apply one step to the subformula it addresses, returning the
/// replacement for that subformula.
pub(crate) fn apply_at(node: &Formula, step: &Step) -> Result<Formula> {
    if step.rule.is_entailment() && (step.direction == Direction::R2L || step.dualized) {
        return Err(Error::EntailmentReversed(step.rule.to_string()));
    }
    if step.dualized && matches!(step.rule, RuleId::PulloutAll | RuleId::PulloutEx) {
        // Duality keeps equality atoms, so it does not carry over rules
        // whose soundness rests on the meaning of equality.
        return Err(Error::side(step.rule, "the dual of a pullout step is not an equivalence"));
    }
    if step.dualized {
        let operand = step.operand.as_ref().map(dual_operand);
        let out = rules::apply_node(&dual(node), step.rule, step.direction, operand.as_ref())?;
        Ok(dual(&out))
    } else {
        rules::apply_node(node, step.rule, step.direction, step.operand.as_ref())
    }
}

fn dual_operand(op: &Operand) -> Operand {
    match op {
        Operand::Formula(g) => Operand::Formula(dual(g)),
        Operand::Binder(q, v) => Operand::Binder(q.dual(), v.clone()),
        Operand::Member(i, g) => Operand::Member(*i, dual(g)),
        other => other.clone(),
    }
}
