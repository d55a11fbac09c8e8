//! Behmann-style predicate elimination for monadic first- and second-order
//! logic with equality.
//!
//! The crate is organised bottom-up:
//!
//! * [`formula`] holds terms, formulas and structural operations.
//! * [`syntax`] parses and prints the surface syntax.
//! * [`oracle`] evaluates formulas over finite interpretations and checks
//!   bounded equivalence; every transformation is tested against it.
//! * [`rewriter`] implements the rule catalogue as position-addressed steps
//!   with replayable traces, plus clausal normal forms over basic formulas.
//! * [`counting`] provides counting-quantifier algebra and the counting
//!   quantifier normal form.
//! * [`elimination`] eliminates predicate quantifiers.
//! * [`decision`] decides validity and satisfiability.
//! * [`corpus`] collects worked examples with their known results.
//!
//! Domains are nonempty throughout.

pub mod corpus;
pub mod counting;
pub mod decision;
pub mod elimination;
pub mod error;
pub mod formula;
pub mod oracle;
pub mod rewriter;
pub mod syntax;

pub use error::{Error, Result};
pub use formula::{Formula, FormulaClass, FreshNames, Quantifier, Term};
pub use syntax::{parse, print};
