//! Set-theoretic formulas in negation normal form over hereditarily finite
//! constants, with atoms for membership in named universe classes.
//!
//! Everything downstream leans on three facts fixed here.  First, negation
//! is a syntactic involution, so sequents never mention a negation operator.
//! Second, every formula gets a level in the bounded-quantifier hierarchy;
//! quantifiers bounded by a set keep the level of their body, while
//! quantifiers bounded by a class count as unbounded (class membership is
//! not testable by looking inside a carrier).  Third, every sentence
//! decomposes as a disjunction or conjunction over a finite index of
//! hereditarily finite sets, which is the interface the sequent calculus
//! consumes.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::hf::{parse_hf_at, von_neumann, HFSet, Universe};
use crate::mahlo_index::{parse_matrix_at, parse_vec_at, IndexMatrix, OrdVec};
use crate::ord::Cursor;
use crate::refl::ClassOracle;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LogicError {
    #[error("free variable {0}")]
    FreeVariable(String),
    #[error("constant {0} outside the universe")]
    ConstantOutsideUniverse(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// A set-valued term: a literal or a variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SetTerm {
    Const(HFSet),
    Var(String),
}

/// A named class of universes, resolved by a `ClassOracle`.
///
/// `M(k)` is the plain level-`k` class, `MIter` an iterate of the level-`k`
/// operator along a strict order at a hereditarily finite stage, `Mh` the
/// vector-ramified class, and `MhMat` a staircase conjunction of those (its
/// extension is the intersection of `Mh(k + i, row_i)` over the rows).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassRef {
    M(u32),
    MIter { k: u32, a: HFSet },
    Mh { k: u32, index: OrdVec },
    MhMat { k: u32, rows: IndexMatrix },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    In(SetTerm, SetTerm),
    NotIn(SetTerm, SetTerm),
    InClass(SetTerm, ClassRef),
    NotInClass(SetTerm, ClassRef),
    Or(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    ExistsIn { var: String, bound: SetTerm, body: Box<Formula> },
    ForallIn { var: String, bound: SetTerm, body: Box<Formula> },
    ExistsInClass { var: String, class: ClassRef, body: Box<Formula> },
    ForallInClass { var: String, class: ClassRef, body: Box<Formula> },
    Exists { var: String, body: Box<Formula> },
    Forall { var: String, body: Box<Formula> },
}

/// De Morgan negation; an involution on the syntax.
pub fn negate(f: &Formula) -> Formula {
    match f {
        Formula::In(a, b) => Formula::NotIn(a.clone(), b.clone()),
        Formula::NotIn(a, b) => Formula::In(a.clone(), b.clone()),
        Formula::InClass(a, c) => Formula::NotInClass(a.clone(), c.clone()),
        Formula::NotInClass(a, c) => Formula::InClass(a.clone(), c.clone()),
        Formula::Or(a, b) => Formula::And(Box::new(negate(a)), Box::new(negate(b))),
        Formula::And(a, b) => Formula::Or(Box::new(negate(a)), Box::new(negate(b))),
        Formula::ExistsIn { var, bound, body } => Formula::ForallIn {
            var: var.clone(),
            bound: bound.clone(),
            body: Box::new(negate(body)),
        },
        Formula::ForallIn { var, bound, body } => Formula::ExistsIn {
            var: var.clone(),
            bound: bound.clone(),
            body: Box::new(negate(body)),
        },
        Formula::ExistsInClass { var, class, body } => Formula::ForallInClass {
            var: var.clone(),
            class: class.clone(),
            body: Box::new(negate(body)),
        },
        Formula::ForallInClass { var, class, body } => Formula::ExistsInClass {
            var: var.clone(),
            class: class.clone(),
            body: Box::new(negate(body)),
        },
        Formula::Exists { var, body } => {
            Formula::Forall { var: var.clone(), body: Box::new(negate(body)) }
        }
        Formula::Forall { var, body } => {
            Formula::Exists { var: var.clone(), body: Box::new(negate(body)) }
        }
    }
}

/// Position in the bounded-quantifier hierarchy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LevyClass {
    Delta0,
    Sigma(u32),
    Pi(u32),
}

impl LevyClass {
    /// Subsumption: everything at a strictly lower level embeds on both
    /// sides, and same-level same-side is reflexive.
    pub fn le(self, other: LevyClass) -> bool {
        use LevyClass::*;
        match (self, other) {
            (Delta0, _) => true,
            (_, Delta0) => false,
            (Sigma(n), Sigma(m)) | (Pi(n), Pi(m)) => n <= m,
            (Sigma(n), Pi(m)) | (Pi(n), Sigma(m)) => n < m,
        }
    }

    pub fn dual(self) -> LevyClass {
        match self {
            LevyClass::Delta0 => LevyClass::Delta0,
            LevyClass::Sigma(n) => LevyClass::Pi(n),
            LevyClass::Pi(n) => LevyClass::Sigma(n),
        }
    }

    fn join(self, other: LevyClass, prefer_sigma: bool) -> LevyClass {
        if self.le(other) {
            other
        } else if other.le(self) {
            self
        } else {
            // incomparable means a Sigma/Pi pair at the same level
            let n = match self {
                LevyClass::Sigma(n) | LevyClass::Pi(n) => n,
                LevyClass::Delta0 => 0,
            };
            if prefer_sigma {
                LevyClass::Sigma(n + 1)
            } else {
                LevyClass::Pi(n + 1)
            }
        }
    }

    pub fn or_join(self, other: LevyClass) -> LevyClass {
        self.join(other, true)
    }

    pub fn and_join(self, other: LevyClass) -> LevyClass {
        self.join(other, false)
    }
}

impl fmt::Display for LevyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LevyClass::Delta0 => write!(f, "Delta0"),
            LevyClass::Sigma(n) => write!(f, "Sigma{n}"),
            LevyClass::Pi(n) => write!(f, "Pi{n}"),
        }
    }
}

fn quant_class(body: LevyClass, exists: bool) -> LevyClass {
    use LevyClass::*;
    match (exists, body) {
        (true, Delta0) => Sigma(1),
        (true, Sigma(n)) => Sigma(n),
        (true, Pi(n)) => Sigma(n + 1),
        (false, Delta0) => Pi(1),
        (false, Pi(n)) => Pi(n),
        (false, Sigma(n)) => Pi(n + 1),
    }
}

/// Hierarchy level of a formula.  Class atoms are level 0 (they are decided
/// by the oracle, not by quantification), class-bounded quantifiers count as
/// unbounded, and set-bounded quantifiers are transparent.
pub fn classify(f: &Formula) -> LevyClass {
    match f {
        Formula::In(..) | Formula::NotIn(..) | Formula::InClass(..) | Formula::NotInClass(..) => {
            LevyClass::Delta0
        }
        Formula::Or(a, b) => classify(a).or_join(classify(b)),
        Formula::And(a, b) => classify(a).and_join(classify(b)),
        Formula::ExistsIn { body, .. } | Formula::ForallIn { body, .. } => classify(body),
        Formula::ExistsInClass { body, .. } | Formula::Exists { body, .. } => {
            quant_class(classify(body), true)
        }
        Formula::ForallInClass { body, .. } | Formula::Forall { body, .. } => {
            quant_class(classify(body), false)
        }
    }
}

pub fn is_delta0(f: &Formula) -> bool {
    classify(f) == LevyClass::Delta0
}

/// Cut degree: zero at level 0, otherwise one per connective or quantifier.
/// Never looks at constants, so substitution instances share a degree.
pub fn dp(f: &Formula) -> u32 {
    if is_delta0(f) {
        return 0;
    }
    match f {
        Formula::In(..) | Formula::NotIn(..) | Formula::InClass(..) | Formula::NotInClass(..) => 0,
        Formula::Or(a, b) | Formula::And(a, b) => dp(a).max(dp(b)) + 1,
        Formula::ExistsIn { body, .. }
        | Formula::ForallIn { body, .. }
        | Formula::ExistsInClass { body, .. }
        | Formula::ForallInClass { body, .. }
        | Formula::Exists { body, .. }
        | Formula::Forall { body, .. } => dp(body) + 1,
    }
}

/// Set constants appearing in atoms and quantifier bounds.  Class indices do
/// not count; they address the oracle, not the universe.
pub fn constants(f: &Formula) -> BTreeSet<HFSet> {
    fn go(f: &Formula, out: &mut BTreeSet<HFSet>) {
        let mut term = |t: &SetTerm| {
            if let SetTerm::Const(c) = t {
                out.insert(c.clone());
            }
        };
        match f {
            Formula::In(a, b) | Formula::NotIn(a, b) => {
                term(a);
                term(b);
            }
            Formula::InClass(a, _) | Formula::NotInClass(a, _) => term(a),
            Formula::Or(a, b) | Formula::And(a, b) => {
                go(a, out);
                go(b, out);
            }
            Formula::ExistsIn { bound, body, .. } | Formula::ForallIn { bound, body, .. } => {
                term(bound);
                go(body, out);
            }
            Formula::ExistsInClass { body, .. }
            | Formula::ForallInClass { body, .. }
            | Formula::Exists { body, .. }
            | Formula::Forall { body, .. } => go(body, out),
        }
    }
    let mut out = BTreeSet::new();
    go(f, &mut out);
    out
}

pub fn free_vars(f: &Formula) -> BTreeSet<String> {
    fn term(t: &SetTerm, out: &mut BTreeSet<String>) {
        if let SetTerm::Var(v) = t {
            out.insert(v.clone());
        }
    }
    fn go(f: &Formula, out: &mut BTreeSet<String>) {
        match f {
            Formula::In(a, b) | Formula::NotIn(a, b) => {
                term(a, out);
                term(b, out);
            }
            Formula::InClass(a, _) | Formula::NotInClass(a, _) => term(a, out),
            Formula::Or(a, b) | Formula::And(a, b) => {
                go(a, out);
                go(b, out);
            }
            Formula::ExistsIn { var, bound, body } | Formula::ForallIn { var, bound, body } => {
                term(bound, out);
                let mut inner = BTreeSet::new();
                go(body, &mut inner);
                inner.remove(var);
                out.extend(inner);
            }
            Formula::ExistsInClass { var, body, .. }
            | Formula::ForallInClass { var, body, .. }
            | Formula::Exists { var, body }
            | Formula::Forall { var, body } => {
                let mut inner = BTreeSet::new();
                go(body, &mut inner);
                inner.remove(var);
                out.extend(inner);
            }
        }
    }
    let mut out = BTreeSet::new();
    go(f, &mut out);
    out
}

/// A variable name not in `used`.
pub fn fresh_var(used: &BTreeSet<String>) -> String {
    (0..)
        .map(|i| format!("x{i}"))
        .find(|v| !used.contains(v))
        .unwrap()
}

/// Substitute the term `val` for free occurrences of `var`.
pub fn subst_term(f: &Formula, var: &str, val: &SetTerm) -> Formula {
    let st = |t: &SetTerm| match t {
        SetTerm::Var(v) if v == var => val.clone(),
        other => other.clone(),
    };
    match f {
        Formula::In(a, b) => Formula::In(st(a), st(b)),
        Formula::NotIn(a, b) => Formula::NotIn(st(a), st(b)),
        Formula::InClass(a, c) => Formula::InClass(st(a), c.clone()),
        Formula::NotInClass(a, c) => Formula::NotInClass(st(a), c.clone()),
        Formula::Or(a, b) => {
            Formula::Or(Box::new(subst_term(a, var, val)), Box::new(subst_term(b, var, val)))
        }
        Formula::And(a, b) => {
            Formula::And(Box::new(subst_term(a, var, val)), Box::new(subst_term(b, var, val)))
        }
        Formula::ExistsIn { var: v, bound, body } => Formula::ExistsIn {
            var: v.clone(),
            bound: st(bound),
            body: if v == var { body.clone() } else { Box::new(subst_term(body, var, val)) },
        },
        Formula::ForallIn { var: v, bound, body } => Formula::ForallIn {
            var: v.clone(),
            bound: st(bound),
            body: if v == var { body.clone() } else { Box::new(subst_term(body, var, val)) },
        },
        Formula::ExistsInClass { var: v, class, body } => Formula::ExistsInClass {
            var: v.clone(),
            class: class.clone(),
            body: if v == var { body.clone() } else { Box::new(subst_term(body, var, val)) },
        },
        Formula::ForallInClass { var: v, class, body } => Formula::ForallInClass {
            var: v.clone(),
            class: class.clone(),
            body: if v == var { body.clone() } else { Box::new(subst_term(body, var, val)) },
        },
        Formula::Exists { var: v, body } => Formula::Exists {
            var: v.clone(),
            body: if v == var { body.clone() } else { Box::new(subst_term(body, var, val)) },
        },
        Formula::Forall { var: v, body } => Formula::Forall {
            var: v.clone(),
            body: if v == var { body.clone() } else { Box::new(subst_term(body, var, val)) },
        },
    }
}

/// Substitute a set constant for a free variable.
pub fn subst(f: &Formula, var: &str, val: &HFSet) -> Formula {
    subst_term(f, var, &SetTerm::Const(val.clone()))
}

fn relativize_bound(f: &Formula, q: &SetTerm) -> Formula {
    match f {
        Formula::In(..) | Formula::NotIn(..) | Formula::InClass(..) | Formula::NotInClass(..) => {
            f.clone()
        }
        Formula::Or(a, b) => {
            Formula::Or(Box::new(relativize_bound(a, q)), Box::new(relativize_bound(b, q)))
        }
        Formula::And(a, b) => {
            Formula::And(Box::new(relativize_bound(a, q)), Box::new(relativize_bound(b, q)))
        }
        Formula::ExistsIn { var, bound, body } => Formula::ExistsIn {
            var: var.clone(),
            bound: bound.clone(),
            body: Box::new(relativize_bound(body, q)),
        },
        Formula::ForallIn { var, bound, body } => Formula::ForallIn {
            var: var.clone(),
            bound: bound.clone(),
            body: Box::new(relativize_bound(body, q)),
        },
        Formula::ExistsInClass { var, class, body } => Formula::ExistsInClass {
            var: var.clone(),
            class: class.clone(),
            body: Box::new(relativize_bound(body, q)),
        },
        Formula::ForallInClass { var, class, body } => Formula::ForallInClass {
            var: var.clone(),
            class: class.clone(),
            body: Box::new(relativize_bound(body, q)),
        },
        Formula::Exists { var, body } => Formula::ExistsIn {
            var: var.clone(),
            bound: q.clone(),
            body: Box::new(relativize_bound(body, q)),
        },
        Formula::Forall { var, body } => Formula::ForallIn {
            var: var.clone(),
            bound: q.clone(),
            body: Box::new(relativize_bound(body, q)),
        },
    }
}

/// Bound every unbounded quantifier by the constant `q`.  Commutes with
/// `negate`.  Class-bounded quantifiers are untouched.
pub fn relativize(f: &Formula, q: &HFSet) -> Formula {
    relativize_bound(f, &SetTerm::Const(q.clone()))
}

/// Bound every unbounded quantifier by the variable `v`, which the caller
/// promises is fresh for `f`.
pub fn relativize_to_var(f: &Formula, v: &str) -> Formula {
    relativize_bound(f, &SetTerm::Var(v.to_string()))
}

/// The extensional equality of two terms as a level-0 formula: each is a
/// subset of the other.
pub fn eq_formula(a: &SetTerm, b: &SetTerm) -> Formula {
    let mut used = BTreeSet::new();
    for t in [a, b] {
        if let SetTerm::Var(v) = t {
            used.insert(v.clone());
        }
    }
    let x = fresh_var(&used);
    let left = Formula::ForallIn {
        var: x.clone(),
        bound: a.clone(),
        body: Box::new(Formula::In(SetTerm::Var(x.clone()), b.clone())),
    };
    let right = Formula::ForallIn {
        var: x.clone(),
        bound: b.clone(),
        body: Box::new(Formula::In(SetTerm::Var(x), a.clone())),
    };
    Formula::And(Box::new(left), Box::new(right))
}

fn denote(t: &SetTerm) -> Result<HFSet, LogicError> {
    match t {
        SetTerm::Const(c) => Ok(c.clone()),
        SetTerm::Var(v) => Err(LogicError::FreeVariable(v.clone())),
    }
}

/// Truth of a sentence in a universe.  Unbounded quantifiers range over the
/// carrier; class-bounded quantifiers range over the oracle's universes whose
/// carriers are members of this one.  All constants must be members.
pub fn eval(f: &Formula, univ: &Universe, oracle: &ClassOracle) -> Result<bool, LogicError> {
    for c in constants(f) {
        if !univ.carrier().contains(&c) {
            return Err(LogicError::ConstantOutsideUniverse(c.to_string()));
        }
    }
    eval_closed(f, univ, oracle)
}

fn eval_closed(f: &Formula, univ: &Universe, oracle: &ClassOracle) -> Result<bool, LogicError> {
    match f {
        Formula::In(a, b) => Ok(denote(b)?.contains(&denote(a)?)),
        Formula::NotIn(a, b) => Ok(!denote(b)?.contains(&denote(a)?)),
        Formula::InClass(a, c) => {
            let x = denote(a)?;
            Ok(oracle.lookup(c).iter().any(|q| q.carrier() == &x))
        }
        Formula::NotInClass(a, c) => {
            let x = denote(a)?;
            Ok(!oracle.lookup(c).iter().any(|q| q.carrier() == &x))
        }
        Formula::Or(a, b) => Ok(eval_closed(a, univ, oracle)? || eval_closed(b, univ, oracle)?),
        Formula::And(a, b) => Ok(eval_closed(a, univ, oracle)? && eval_closed(b, univ, oracle)?),
        Formula::ExistsIn { var, bound, body } => {
            for e in denote(bound)?.elems() {
                if eval_closed(&subst(body, var, e), univ, oracle)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Formula::ForallIn { var, bound, body } => {
            for e in denote(bound)?.elems() {
                if !eval_closed(&subst(body, var, e), univ, oracle)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::ExistsInClass { var, class, body } => {
            for q in oracle.lookup(class) {
                if univ.carrier().contains(q.carrier())
                    && eval_closed(&subst(body, var, q.carrier()), univ, oracle)?
                {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Formula::ForallInClass { var, class, body } => {
            for q in oracle.lookup(class) {
                if univ.carrier().contains(q.carrier())
                    && !eval_closed(&subst(body, var, q.carrier()), univ, oracle)?
                {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::Exists { var, body } => {
            for e in univ.carrier().elems() {
                if eval_closed(&subst(body, var, e), univ, oracle)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Formula::Forall { var, body } => {
            for e in univ.carrier().elems() {
                if !eval_closed(&subst(body, var, e), univ, oracle)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// Which way a sentence branches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecKind {
    Or,
    And,
}

/// A sentence rendered as a finite disjunction or conjunction.  Each part is
/// indexed by a hereditarily finite set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub kind: DecKind,
    pub parts: Vec<(HFSet, Formula)>,
}

impl Decomposition {
    pub fn part(&self, idx: &HFSet) -> Option<&Formula> {
        self.parts.iter().find(|(i, _)| i == idx).map(|(_, f)| f)
    }
}

/// Decompose a sentence.  Level-0 sentences become an empty conjunction when
/// true and an empty disjunction when false, with truth taken in
/// `truth_univ`; level-0 truth does not depend on which transitive universe
/// evaluates it, as long as the constants are present.  Unbounded quantifiers
/// spread over the carrier of `j_univ`; class-bounded quantifiers spread over
/// the oracle's extension of the class.
pub fn decompose_in(
    f: &Formula,
    j_univ: &Universe,
    truth_univ: &Universe,
    oracle: &ClassOracle,
) -> Result<Decomposition, LogicError> {
    if is_delta0(f) {
        let kind = if eval(f, truth_univ, oracle)? { DecKind::And } else { DecKind::Or };
        return Ok(Decomposition { kind, parts: vec![] });
    }
    let dec = match f {
        Formula::Or(a, b) => Decomposition {
            kind: DecKind::Or,
            parts: vec![(von_neumann(0), (**a).clone()), (von_neumann(1), (**b).clone())],
        },
        Formula::And(a, b) => Decomposition {
            kind: DecKind::And,
            parts: vec![(von_neumann(0), (**a).clone()), (von_neumann(1), (**b).clone())],
        },
        Formula::ExistsIn { var, bound, body } | Formula::ForallIn { var, bound, body } => {
            let b = denote(bound)?;
            let parts = b
                .elems()
                .iter()
                .map(|e| (e.clone(), subst(body, var, e)))
                .collect();
            let kind = if matches!(f, Formula::ExistsIn { .. }) { DecKind::Or } else { DecKind::And };
            Decomposition { kind, parts }
        }
        Formula::ExistsInClass { var, class, body }
        | Formula::ForallInClass { var, class, body } => {
            let parts = oracle
                .lookup(class)
                .iter()
                .map(|q| (q.carrier().clone(), subst(body, var, q.carrier())))
                .collect();
            let kind =
                if matches!(f, Formula::ExistsInClass { .. }) { DecKind::Or } else { DecKind::And };
            Decomposition { kind, parts }
        }
        Formula::Exists { var, body } | Formula::Forall { var, body } => {
            let parts = j_univ
                .carrier()
                .elems()
                .iter()
                .map(|e| (e.clone(), subst(body, var, e)))
                .collect();
            let kind = if matches!(f, Formula::Exists { .. }) { DecKind::Or } else { DecKind::And };
            Decomposition { kind, parts }
        }
        // level-0 cases were already handled
        _ => unreachable!("atoms are level 0"),
    };
    Ok(dec)
}

/// Decompose with one universe supplying both the quantifier range and the
/// level-0 truth.
pub fn decompose(
    f: &Formula,
    univ: &Universe,
    oracle: &ClassOracle,
) -> Result<Decomposition, LogicError> {
    decompose_in(f, univ, univ, oracle)
}

/// A one-sided sequent: a finite set of formulas read disjunctively.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Sequent(pub BTreeSet<Formula>);

impl Sequent {
    pub fn new() -> Sequent {
        Sequent(BTreeSet::new())
    }

    pub fn from_formulas<I: IntoIterator<Item = Formula>>(it: I) -> Sequent {
        Sequent(it.into_iter().collect())
    }

    pub fn with(&self, f: Formula) -> Sequent {
        let mut s = self.clone();
        s.0.insert(f);
        s
    }

    pub fn union(&self, other: &Sequent) -> Sequent {
        Sequent(self.0.union(&other.0).cloned().collect())
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.0.contains(f)
    }

    pub fn is_subset(&self, other: &Sequent) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Formula> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Constants of all member formulas.
    pub fn constants(&self) -> BTreeSet<HFSet> {
        let mut out = BTreeSet::new();
        for f in &self.0 {
            out.extend(constants(f));
        }
        out
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", x)?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// concrete syntax

impl fmt::Display for SetTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetTerm::Const(c) => write!(f, "{c}"),
            SetTerm::Var(v) => write!(f, "{v}"),
        }
    }
}

impl fmt::Display for ClassRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassRef::M(k) => write!(f, "(M {k})"),
            ClassRef::MIter { k, a } => write!(f, "(Miter {k} {a})"),
            ClassRef::Mh { k, index } => write!(f, "(Mh {k} {index})"),
            ClassRef::MhMat { k, rows } => write!(f, "(Mh {k} {rows})"),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::In(a, b) => write!(f, "(in {a} {b})"),
            Formula::NotIn(a, b) => write!(f, "(notin {a} {b})"),
            Formula::InClass(a, c) => write!(f, "(in-class {a} {c})"),
            Formula::NotInClass(a, c) => write!(f, "(notin-class {a} {c})"),
            Formula::Or(a, b) => write!(f, "(or {a} {b})"),
            Formula::And(a, b) => write!(f, "(and {a} {b})"),
            Formula::ExistsIn { var, bound, body } => write!(f, "(exists-in {var} {bound} {body})"),
            Formula::ForallIn { var, bound, body } => write!(f, "(forall-in {var} {bound} {body})"),
            Formula::ExistsInClass { var, class, body } => {
                write!(f, "(exists-in-class {var} {class} {body})")
            }
            Formula::ForallInClass { var, class, body } => {
                write!(f, "(forall-in-class {var} {class} {body})")
            }
            Formula::Exists { var, body } => write!(f, "(exists {var} {body})"),
            Formula::Forall { var, body } => write!(f, "(forall {var} {body})"),
        }
    }
}

fn perr(cur: &Cursor<'_>, msg: impl Into<String>) -> LogicError {
    LogicError::Parse { pos: cur.pos, msg: msg.into() }
}

fn parse_symbol(cur: &mut Cursor<'_>) -> Result<String, LogicError> {
    cur.skip_ws();
    let start = cur.pos;
    while cur.pos < cur.s.len() {
        let c = cur.s[cur.pos];
        if c.is_ascii_alphanumeric() || c == b'-' || c == b'_' {
            cur.pos += 1;
        } else {
            break;
        }
    }
    if start == cur.pos {
        return Err(perr(cur, "expected a symbol"));
    }
    Ok(std::str::from_utf8(&cur.s[start..cur.pos]).unwrap().to_string())
}

fn parse_nat_u32(cur: &mut Cursor<'_>) -> Result<u32, LogicError> {
    let n = cur.nat().map_err(|_| perr(cur, "expected a number"))?;
    n.try_into().map_err(|_| perr(cur, "number too large"))
}

fn parse_set_term(cur: &mut Cursor<'_>) -> Result<SetTerm, LogicError> {
    match cur.peek() {
        Some(b'{') | Some(b'#') => {
            let h = parse_hf_at(cur).map_err(|e| match e {
                crate::hf::HfError::Parse { pos, msg } => LogicError::Parse { pos, msg },
                other => perr(cur, other.to_string()),
            })?;
            Ok(SetTerm::Const(h))
        }
        Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
            let v = parse_symbol(cur)?;
            Ok(SetTerm::Var(v))
        }
        _ => Err(perr(cur, "expected a set term")),
    }
}

pub(crate) fn parse_class_ref(cur: &mut Cursor<'_>) -> Result<ClassRef, LogicError> {
    if !cur.eat(b'(') {
        return Err(perr(cur, "expected a class reference"));
    }
    let sym = parse_symbol(cur)?;
    let class = match sym.as_str() {
        "M" => ClassRef::M(parse_nat_u32(cur)?),
        "Miter" => {
            let k = parse_nat_u32(cur)?;
            let a = parse_hf_at(cur).map_err(|e| match e {
                crate::hf::HfError::Parse { pos, msg } => LogicError::Parse { pos, msg },
                other => perr(cur, other.to_string()),
            })?;
            ClassRef::MIter { k, a }
        }
        "Mh" => {
            let k = parse_nat_u32(cur)?;
            // a '[' opening either a vector or a matrix; look one token ahead
            if cur.peek() != Some(b'[') {
                return Err(perr(cur, "expected '['"));
            }
            let mut probe = cur.pos + 1;
            while probe < cur.s.len() && cur.s[probe].is_ascii_whitespace() {
                probe += 1;
            }
            let matrixish = matches!(cur.s.get(probe), Some(b'[') | Some(b']'));
            if matrixish {
                let rows =
                    parse_matrix_at(cur).map_err(|e| index_err_to_logic(e, cur.pos))?;
                ClassRef::MhMat { k, rows }
            } else {
                let index = parse_vec_at(cur).map_err(|e| index_err_to_logic(e, cur.pos))?;
                ClassRef::Mh { k, index }
            }
        }
        other => return Err(perr(cur, format!("unknown class '{other}'"))),
    };
    if !cur.eat(b')') {
        return Err(perr(cur, "expected ')'"));
    }
    Ok(class)
}

fn index_err_to_logic(e: crate::mahlo_index::IndexError, fallback: usize) -> LogicError {
    match e {
        crate::mahlo_index::IndexError::Parse { pos, msg } => LogicError::Parse { pos, msg },
        other => LogicError::Parse { pos: fallback, msg: other.to_string() },
    }
}

pub(crate) fn parse_formula_at(cur: &mut Cursor<'_>) -> Result<Formula, LogicError> {
    if !cur.eat(b'(') {
        return Err(perr(cur, "expected '('"));
    }
    let sym = parse_symbol(cur)?;
    let f = match sym.as_str() {
        "in" => Formula::In(parse_set_term(cur)?, parse_set_term(cur)?),
        "notin" => Formula::NotIn(parse_set_term(cur)?, parse_set_term(cur)?),
        "in-class" => Formula::InClass(parse_set_term(cur)?, parse_class_ref(cur)?),
        "notin-class" => Formula::NotInClass(parse_set_term(cur)?, parse_class_ref(cur)?),
        "or" => Formula::Or(
            Box::new(parse_formula_at(cur)?),
            Box::new(parse_formula_at(cur)?),
        ),
        "and" => Formula::And(
            Box::new(parse_formula_at(cur)?),
            Box::new(parse_formula_at(cur)?),
        ),
        "exists-in" => {
            let var = parse_symbol(cur)?;
            let bound = parse_set_term(cur)?;
            let body = Box::new(parse_formula_at(cur)?);
            Formula::ExistsIn { var, bound, body }
        }
        "forall-in" => {
            let var = parse_symbol(cur)?;
            let bound = parse_set_term(cur)?;
            let body = Box::new(parse_formula_at(cur)?);
            Formula::ForallIn { var, bound, body }
        }
        "exists-in-class" => {
            let var = parse_symbol(cur)?;
            let class = parse_class_ref(cur)?;
            let body = Box::new(parse_formula_at(cur)?);
            Formula::ExistsInClass { var, class, body }
        }
        "forall-in-class" => {
            let var = parse_symbol(cur)?;
            let class = parse_class_ref(cur)?;
            let body = Box::new(parse_formula_at(cur)?);
            Formula::ForallInClass { var, class, body }
        }
        "exists" => {
            let var = parse_symbol(cur)?;
            let body = Box::new(parse_formula_at(cur)?);
            Formula::Exists { var, body }
        }
        "forall" => {
            let var = parse_symbol(cur)?;
            let body = Box::new(parse_formula_at(cur)?);
            Formula::Forall { var, body }
        }
        other => return Err(perr(cur, format!("unknown form '{other}'"))),
    };
    if !cur.eat(b')') {
        return Err(perr(cur, "expected ')'"));
    }
    Ok(f)
}

impl FromStr for Formula {
    type Err = LogicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cur = Cursor::new(s);
        let f = parse_formula_at(&mut cur)?;
        if !cur.at_end() {
            return Err(perr(&cur, "trailing input"));
        }
        Ok(f)
    }
}
