//! A desk-scale toolkit for iterated reflection over finite set universes.
//!
//! The crate is organised in layers.  `ord` provides ordinal notations in
//! Cantor normal form with two distinguished epsilon constants, closed under
//! sum, product and base-omega exponentiation.  `mahlo_index` builds finite
//! vectors and upper-triangular matrices of such notations together with the
//! tower encoding that flattens a vector back into a single notation.  `hf`
//! implements hereditarily finite sets and the transitive, rank-closed
//! carriers used as stand-ins for set universes.  `logic` is a small
//! negation-normal first-order language over those carriers with a Levy-style
//! classification, and `refl` computes reflection classes over finite
//! families of universes by well-founded recursion.  `calculus` ties it all
//! together: explicit derivation trees with ordinal bounds, a checker for the
//! side conditions, embedding constructors and predicative cut elimination.

pub mod calculus;
pub mod hf;
pub mod logic;
pub mod mahlo_index;
pub mod ord;
pub mod refl;

pub use calculus::{
    check, check_from, cut_elim_full, cut_elim_once, embed_foundation, embed_mh_axiom, embed_pi2,
    embed_tautology, invert, lift, re_rank, reduce, strip, weaken, CalcConfig, CalcError,
    Derivation, RuleTag, Verdict, Violation, ViolationKind,
};
pub use hf::{
    as_von_neumann, cumulative_stage, enumerate_transitive, von_neumann, Budget, HfError, HFSet,
    Universe,
};
pub use logic::{
    classify, constants, decompose, decompose_in, dp, eval, free_vars, is_delta0, negate,
    relativize, subst, ClassRef, DecKind, Decomposition, Formula, LevyClass, LogicError, Sequent,
    SetTerm,
};
pub use mahlo_index::{bullet, star, tower, vec_lt, IndexError, IndexMatrix, OrdVec};
pub use ord::{OrdTerm, RawTerm, TermError};
pub use refl::{iterate, m_op, mh, ClassOracle, FormulaPool, MhConfig, ReflError, StrictOrder};
