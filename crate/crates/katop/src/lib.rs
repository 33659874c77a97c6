//! Decision engine for Kleene algebra with tests (KAT) extended with a top
//! constant, under three semantics:
//!
//! * `Kat` — plain guarded-string languages, where `top` is just another
//!   letter;
//! * `KatT` — guarded-string languages where `top` denotes the full language
//!   (a greatest element);
//! * `KatF` — binary relations where `top` denotes the full relation.
//!
//! Verdicts of inequivalence carry a witness guarded string, and for the
//! relational theory a finite countermodel that is re-checked by direct
//! evaluation before being reported.
//!
//! The decision procedure reduces `top` to an expression for the full
//! language ([`syntax::reduce_top`]), recognises the result with
//! boolean-matrix transition monoids ([`recogniser`]), and compares two
//! recognisers by breadth-first search over pairs of monoid elements
//! ([`decide`]). The remaining modules provide independent semantic oracles
//! (bounded denotations, rewrite closures, graph homomorphisms, relational
//! models) used to cross-check the decision path.

pub mod automata;
pub mod cli;
pub mod closure;
pub mod decide;
pub mod graphs;
pub mod gstring;
pub mod recogniser;
pub mod relmodel;
pub mod syntax;

pub use decide::{decide, leq, member, Holder, Limits, Theory, Verdict};
pub use gstring::GuardedString;
pub use syntax::{Alphabet, Expr};
