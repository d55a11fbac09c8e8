//! Bottom-up, rule-driven simplification with optional tracing.
//!
//! A strategy is an ordered rule list. The engine normalises the children
//! of a node first, then applies the first applicable rule at the node and
//! repeats until none applies.

use super::{apply_at, Direction, Operand, RewriteStep, RuleId, Step};
use crate::error::{Error, Result};
use crate::formula::{Formula, Quantifier, Term};

use Direction::{L2R, R2L};
use RuleId::*;

pub type Strategy = &'static [(RuleId, Direction)];

pub const NNF: Strategy = &[(NotNot, L2R), (NotAnd, L2R), (NotOr, L2R), (NotAll, L2R), (NotEx, L2R), (AoAssoc, L2R)];

pub const TRUTH_VALUES: Strategy = &[
    (TvNotT, L2R),
    (TvNotF, L2R),
    (TvAndF, L2R),
    (TvOrT, L2R),
    (TvAndT, L2R),
    (TvOrF, L2R),
    (TvQT, L2R),
    (TvQF, L2R),
    (ComplemAnd, L2R),
    (ComplemOr, L2R),
];

pub(crate) const CLAUSAL: Strategy = &[(Taut, L2R), (Subs, L2R), (Unit, L2R)];

pub const FULL: Strategy = &[
    (NotNot, L2R),
    (NotAnd, L2R),
    (NotOr, L2R),
    (NotAll, L2R),
    (NotEx, L2R),
    (TvNotT, L2R),
    (TvNotF, L2R),
    (TvAndF, L2R),
    (TvOrT, L2R),
    (TvAndT, L2R),
    (TvOrF, L2R),
    (TvQT, L2R),
    (TvQF, L2R),
    (AoAssoc, L2R),
    (AoIdem, L2R),
    (ComplemAnd, L2R),
    (ComplemOr, L2R),
    (QuantDrop, L2R),
    (PulloutAll, R2L),
    (PulloutEx, R2L),
    (QOutAo, R2L),
    (Taut, L2R),
    (Subs, L2R),
    (Unit, L2R),
    (SubsAndAbsorp, L2R),
    (SubsOrAbsorp, L2R),
];

const FUEL: usize = 1_000_000;

/// Cheap shape filter so the engine does not build error values for rules
/// that obviously cannot fire.
fn may_apply(rule: RuleId, dir: Direction, node: &Formula) -> bool {
    use Formula as F;
    match (rule, dir) {
        (NotNot | NotAnd | NotOr | NotAll | NotEx | TvNotT | TvNotF, L2R) => matches!(node, F::Not(_)),
        (TvQT | TvQF | QuantDrop, L2R) => matches!(node, F::Quant(..)),
        (PulloutAll | PulloutEx | QOutAo, R2L) => matches!(node, F::Quant(..)),
        (TvAndT | TvAndF | ComplemAnd | SubsAndAbsorp, L2R) => matches!(node, F::And(_)),
        (TvOrT | TvOrF | ComplemOr | SubsOrAbsorp, L2R) => matches!(node, F::Or(_)),
        (AoAssoc | AoIdem | Taut | Subs | Unit, L2R) => matches!(node, F::And(_) | F::Or(_)),
        _ => true,
    }
}

struct Engine<'a> {
    rules: &'a [(RuleId, Direction)],
    trace: Option<&'a mut Vec<RewriteStep>>,
    fuel: usize,
    root_only: bool,
}

impl Engine<'_> {
    fn run(&mut self, root: &mut Formula, path: &mut Vec<usize>) {
        if !self.root_only {
            self.children(root, path);
        }
        while self.fuel > 0 {
            let node = root.at(path).expect("engine paths stay valid");
            let mut hit = None;
            for &(rule, dir) in self.rules {
                if !may_apply(rule, dir, node) {
                    continue;
                }
                let step = Step::new(rule, path.clone(), dir);
                if let Ok(new) = apply_at(node, &step) {
                    if new != *node {
                        hit = Some((step, new));
                        break;
                    }
                }
            }
            let Some((step, new)) = hit else { break };
            self.fuel -= 1;
            match self.trace.as_deref_mut() {
                Some(trace) => {
                    let before = root.clone();
                    *root.at_mut(path).unwrap() = new;
                    trace.push(RewriteStep { step, before, after: root.clone() });
                }
                None => *root.at_mut(path).unwrap() = new,
            }
            if !self.root_only {
                self.children(root, path);
            }
        }
    }

    fn children(&mut self, root: &mut Formula, path: &mut Vec<usize>) {
        let n = root.at(path).map_or(0, |f| f.children().len());
        for i in 0..n {
            path.push(i);
            self.run(root, path);
            path.pop();
        }
    }
}

/// Normalise `f` under `strategy`. With `root_only` the rules are tried at
/// the root alone. Steps are appended to `trace` when given.
pub fn simplify_with(
    f: &Formula,
    strategy: &[(RuleId, Direction)],
    root_only: bool,
    trace: Option<&mut Vec<RewriteStep>>,
) -> Formula {
    let mut root = f.clone();
    let mut engine = Engine { rules: strategy, trace, fuel: FUEL, root_only };
    engine.run(&mut root, &mut Vec::new());
    root
}

/// Negation normal form derived step by step with rules I, VI, VI* and II.
pub fn nnf_traced(f: &Formula) -> (Formula, Vec<RewriteStep>) {
    let mut trace = Vec::new();
    let out = simplify_with(f, NNF, false, Some(&mut trace));
    (out, trace)
}

/// Fixpoint of the truth-value rules and complementary-pair cancellation.
pub fn simplify_truth_values(f: &Formula) -> Formula {
    simplify_with(f, TRUTH_VALUES, false, None)
}

/// The full post-processing simplifier.
pub fn simplify(f: &Formula) -> Formula {
    simplify_with(f, FULL, false, None)
}

pub fn simplify_traced(f: &Formula, strategy: &[(RuleId, Direction)]) -> (Formula, Vec<RewriteStep>) {
    let mut trace = Vec::new();
    let out = simplify_with(f, strategy, false, Some(&mut trace));
    (out, trace)
}

/// Rewrite `f` (in which `t` occurs) as ∀x (x≠t ∨ F[x]) or ∃x (x=t ∧ F[x]).
pub fn circumlocute(f: &Formula, t: &Term, x: &str, mode: Quantifier) -> Result<Formula> {
    let rule = match mode {
        Quantifier::Forall => PulloutAll,
        Quantifier::Exists => PulloutEx,
        _ => return Err(Error::BadArgs("circumlocution takes ∀ or ∃".into())),
    };
    let step = Step::l2r(rule, &[]).with(Operand::Term(t.clone(), x.to_string()));
    apply_at(f, &step).map_err(|e| match e {
        Error::SideConditionViolated { .. } => Error::Capture(x.to_string()),
        e => e,
    })
}
