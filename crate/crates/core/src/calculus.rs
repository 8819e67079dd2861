//! Infinitary one-sided sequent calculus with ordinal bounds, cut ranks, and
//! a reflection rule driven by a class oracle.
//!
//! A derivation is a finite tree.  Every node carries the universe it works
//! in, an ordinal bound, a cut rank, a sequent, and the rule that justifies
//! it.  `check` replays a tree bottom-up against a configuration and reports
//! the first violation in preorder.  The transformation functions (weaken,
//! invert, strip, reduce, cut elimination) rebuild trees while keeping exact
//! control of the bounds, and the `embed_*` constructors produce derivations
//! of the standard axioms with their advertised bounds.
//!
//! Two conventions keep decomposition stable under the universe extensions
//! performed by the reflection rule: unbounded quantifiers always spread over
//! the carrier of the configured root universe, and level-0 truth is read in
//! the node's own universe, where it agrees with every other transitive
//! carrier containing the constants.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::hf::{numeral_in, Budget, HFSet, HfError, Universe};
use crate::logic::{
    classify, constants, decompose_in, dp, eval, free_vars, fresh_var, is_delta0, negate,
    parse_class_ref, relativize, relativize_to_var, subst, subst_term, ClassRef, DecKind, Formula,
    LevyClass, LogicError, Sequent, SetTerm,
};
use crate::mahlo_index::{bullet, vec_lt, IndexError, OrdVec};
use crate::ord::{Cursor, OrdTerm, TermError};
use crate::refl::ClassOracle;

#[derive(Debug, thiserror::Error)]
pub enum CalcError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("weakening cannot lower the bound from {from} to {to}")]
    WeakeningOrder { from: String, to: String },
    #[error("constant {0} is outside the target carrier")]
    ConstantsOutside(String),
    #[error("bound {0} is not admitted by the budget")]
    BudgetRefused(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("cannot strip: {0}")]
    NotStrippable(String),
    #[error("cut reduction does not apply: {0}")]
    NotReducible(String),
    #[error("derivation shape: {0}")]
    Malformed(String),
    #[error("rank: {0}")]
    Rank(String),
    #[error("no witness: {0}")]
    NoWitness(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("serialization: {0}")]
    Json(String),
    #[error(transparent)]
    Term(#[from] TermError),
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error(transparent)]
    Hf(#[from] HfError),
    #[error(transparent)]
    Logic(#[from] LogicError),
}

/// Fixed data shared by every node of a derivation: the scale `n`, the level
/// `k` the calculus works at, the control vector for the reflection rule, the
/// class oracle, and the root universe whose carrier interprets unbounded
/// quantifiers.
#[derive(Debug, Clone)]
pub struct CalcConfig {
    n: u32,
    k: u32,
    alpha_vec: OrdVec,
    oracle: ClassOracle,
    root: Universe,
}

impl CalcConfig {
    pub fn new(
        n: u32,
        k: u32,
        alpha_vec: OrdVec,
        oracle: ClassOracle,
        root: Universe,
    ) -> Result<CalcConfig, CalcError> {
        if k >= n {
            return Err(CalcError::Config(format!(
                "level {k} must lie strictly below the scale {n}"
            )));
        }
        let want = (n - k - 1) as usize;
        if alpha_vec.len() != want {
            return Err(CalcError::Config(format!(
                "control vector has length {}, the level calls for {want}",
                alpha_vec.len()
            )));
        }
        if !alpha_vec.is_empty() && alpha_vec.is_zero_vec() {
            return Err(CalcError::Config(
                "control vector must have a positive entry".into(),
            ));
        }
        Ok(CalcConfig { n, k, alpha_vec, oracle, root })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn alpha_vec(&self) -> &OrdVec {
        &self.alpha_vec
    }

    pub fn oracle(&self) -> &ClassOracle {
        &self.oracle
    }

    pub fn root(&self) -> &Universe {
        &self.root
    }
}

/// The rule justifying a node.  `And` covers conjunctive decompositions
/// including the empty one, so true level-0 sentences and empty conjunctions
/// are leaves.  `Mh` is the reflection rule: it commits to an index vector
/// and a finite set of existential side formulas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleTag {
    Or { witness: HFSet },
    And,
    Cut { formula: Formula },
    Mh { beta: OrdVec, delta: Sequent },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub universe: Universe,
    pub ordinal: OrdTerm,
    pub rank: u32,
    pub sequent: Sequent,
    pub rule: RuleTag,
    pub premises: Vec<Derivation>,
}

impl Derivation {
    pub fn node_count(&self) -> usize {
        1 + self.premises.iter().map(Derivation::node_count).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(Derivation::height).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    Constants,
    Budget,
    OrdinalNotDecreasing,
    RankMismatch,
    CutRank,
    PrincipalNotFound,
    WitnessNotInIndex,
    IncompleteBranching,
    PremiseMismatch,
    UniverseMismatch,
    DeltaNotSigma,
    VectorOrder,
    VectorOutsideUniverse,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Premise indices from the root down to the offending node.
    pub path: Vec<usize>,
    pub kind: ViolationKind,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at ", self.kind)?;
        if self.path.is_empty() {
            write!(f, "root")?;
        } else {
            for (i, p) in self.path.iter().enumerate() {
                if i > 0 {
                    write!(f, ".")?;
                }
                write!(f, "{p}")?;
            }
        }
        write!(f, ": {}", self.detail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Ok,
    Violation(Violation),
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, Verdict::Ok)
    }
}

fn fail(path: &[usize], kind: ViolationKind, detail: String) -> Violation {
    Violation { path: path.to_vec(), kind, detail }
}

/// Universes the reflection rule branches over for a committed vector.
fn mh_rights(cfg: &CalcConfig, beta: &OrdVec) -> Result<Vec<Universe>, IndexError> {
    let rows = bullet(beta, &cfg.alpha_vec)?;
    let class = ClassRef::MhMat { k: cfg.k + 1, rows };
    Ok(cfg.oracle.lookup(&class).into_iter().collect())
}

/// Check a derivation whose root must sit in the configured root universe.
pub fn check(cfg: &CalcConfig, d: &Derivation) -> Verdict {
    check_from(cfg, d, &cfg.root)
}

/// Check a derivation whose root sits in an explicitly given universe, as
/// subtrees produced by the reflection rule do.
pub fn check_from(cfg: &CalcConfig, d: &Derivation, expected: &Universe) -> Verdict {
    let mut path = Vec::new();
    match check_node(cfg, d, expected, &mut path) {
        Ok(()) => Verdict::Ok,
        Err(v) => Verdict::Violation(v),
    }
}

fn check_node(
    cfg: &CalcConfig,
    node: &Derivation,
    expected: &Universe,
    path: &mut Vec<usize>,
) -> Result<(), Violation> {
    if node.universe != *expected {
        return Err(fail(
            path,
            ViolationKind::UniverseMismatch,
            format!(
                "carrier {} where {} was expected",
                node.universe.carrier(),
                expected.carrier()
            ),
        ));
    }
    for f in node.sequent.iter() {
        let fv = free_vars(f);
        if !fv.is_empty() {
            return Err(fail(
                path,
                ViolationKind::Constants,
                format!("formula {f} has free variables"),
            ));
        }
    }
    for c in node.sequent.constants() {
        if !node.universe.carrier().contains(&c) {
            return Err(fail(
                path,
                ViolationKind::Constants,
                format!("constant {c} is missing from the carrier"),
            ));
        }
    }
    if !node.universe.budget().admits(&node.ordinal) {
        return Err(fail(
            path,
            ViolationKind::Budget,
            format!("bound {} exceeds the budget", node.ordinal),
        ));
    }
    for (i, p) in node.premises.iter().enumerate() {
        if p.rank != node.rank {
            path.push(i);
            let v = fail(
                path,
                ViolationKind::RankMismatch,
                format!("premise rank {} differs from node rank {}", p.rank, node.rank),
            );
            path.pop();
            return Err(v);
        }
        if p.ordinal >= node.ordinal {
            path.push(i);
            let v = fail(
                path,
                ViolationKind::OrdinalNotDecreasing,
                format!("premise bound {} does not descend below {}", p.ordinal, node.ordinal),
            );
            path.pop();
            return Err(v);
        }
    }
    let premise_universes = check_rule(cfg, node, path)?;
    for (i, p) in node.premises.iter().enumerate() {
        path.push(i);
        let r = check_node(cfg, p, &premise_universes[i], path);
        path.pop();
        r?;
    }
    Ok(())
}

/// Validate the rule of a single node and return the universe each premise
/// is expected to live in.
fn check_rule(
    cfg: &CalcConfig,
    node: &Derivation,
    path: &[usize],
) -> Result<Vec<Universe>, Violation> {
    match &node.rule {
        RuleTag::And => {
            let mut best: Option<(u8, Violation)> = None;
            let mut saw_candidate = false;
            for a in node.sequent.iter() {
                let dec = match decompose_in(a, &cfg.root, &node.universe, &cfg.oracle) {
                    Ok(d) => d,
                    Err(_) => continue,
                };
                if dec.kind != DecKind::And {
                    continue;
                }
                saw_candidate = true;
                if dec.parts.len() != node.premises.len() {
                    let v = fail(
                        path,
                        ViolationKind::IncompleteBranching,
                        format!(
                            "{a} calls for {} premises, found {}",
                            dec.parts.len(),
                            node.premises.len()
                        ),
                    );
                    if best.as_ref().is_none_or(|(s, _)| *s < 1) {
                        best = Some((1, v));
                    }
                    continue;
                }
                let mut ok = true;
                for (j, ((_, part), p)) in dec.parts.iter().zip(&node.premises).enumerate() {
                    let want = node.sequent.with(part.clone());
                    if p.sequent != want {
                        let v = fail(
                            path,
                            ViolationKind::PremiseMismatch,
                            format!("premise {j} of {a} should conclude '{want}'"),
                        );
                        if best.as_ref().is_none_or(|(s, _)| *s < 2) {
                            best = Some((2, v));
                        }
                        ok = false;
                        break;
                    }
                }
                if ok {
                    return Ok(vec![node.universe.clone(); node.premises.len()]);
                }
            }
            Err(match best {
                Some((_, v)) if saw_candidate => v,
                _ => fail(
                    path,
                    ViolationKind::PrincipalNotFound,
                    "no conjunctive formula in the sequent fits this rule".into(),
                ),
            })
        }
        RuleTag::Or { witness } => {
            if node.premises.len() != 1 {
                return Err(fail(
                    path,
                    ViolationKind::IncompleteBranching,
                    format!("a disjunction rule takes one premise, found {}", node.premises.len()),
                ));
            }
            let mut best: Option<(u8, Violation)> = None;
            let mut saw_disjunction = false;
            for a in node.sequent.iter() {
                let dec = match decompose_in(a, &cfg.root, &node.universe, &cfg.oracle) {
                    Ok(d) => d,
                    Err(_) => continue,
                };
                if dec.kind != DecKind::Or {
                    continue;
                }
                saw_disjunction = true;
                let part = match dec.part(witness) {
                    Some(p) => p.clone(),
                    None => continue,
                };
                let want = node.sequent.with(part);
                if node.premises[0].sequent == want {
                    return Ok(vec![node.universe.clone()]);
                }
                let v = fail(
                    path,
                    ViolationKind::PremiseMismatch,
                    format!("the premise of {a} at {witness} should conclude '{want}'"),
                );
                if best.as_ref().is_none_or(|(s, _)| *s < 2) {
                    best = Some((2, v));
                }
            }
            Err(match best {
                Some((_, v)) => v,
                None if saw_disjunction => fail(
                    path,
                    ViolationKind::WitnessNotInIndex,
                    format!("witness {witness} indexes no component"),
                ),
                None => fail(
                    path,
                    ViolationKind::PrincipalNotFound,
                    "no disjunctive formula in the sequent fits this rule".into(),
                ),
            })
        }
        RuleTag::Cut { formula } => {
            if dp(formula) >= node.rank {
                return Err(fail(
                    path,
                    ViolationKind::CutRank,
                    format!("cut formula has degree {} at rank {}", dp(formula), node.rank),
                ));
            }
            if node.premises.len() != 2 {
                return Err(fail(
                    path,
                    ViolationKind::IncompleteBranching,
                    format!("a cut takes two premises, found {}", node.premises.len()),
                ));
            }
            let left = node.sequent.with(negate(formula));
            let right = node.sequent.with(formula.clone());
            if node.premises[0].sequent != left {
                return Err(fail(
                    path,
                    ViolationKind::PremiseMismatch,
                    format!("the left premise should conclude '{left}'"),
                ));
            }
            if node.premises[1].sequent != right {
                return Err(fail(
                    path,
                    ViolationKind::PremiseMismatch,
                    format!("the right premise should conclude '{right}'"),
                ));
            }
            Ok(vec![node.universe.clone(); 2])
        }
        RuleTag::Mh { beta, delta } => {
            let cap = LevyClass::Sigma(cfg.k + 1);
            for f in delta.iter() {
                if !classify(f).le(cap) {
                    return Err(fail(
                        path,
                        ViolationKind::DeltaNotSigma,
                        format!("{f} is {} which exceeds {cap}", classify(f)),
                    ));
                }
            }
            match vec_lt(beta, &cfg.alpha_vec) {
                Ok(true) => {}
                Ok(false) => {
                    return Err(fail(
                        path,
                        ViolationKind::VectorOrder,
                        format!("{beta} is not strictly below the control vector {}", cfg.alpha_vec),
                    ));
                }
                Err(e) => {
                    return Err(fail(path, ViolationKind::VectorOrder, e.to_string()));
                }
            }
            for t in beta.entries() {
                if !node.universe.budget().admits(t) {
                    return Err(fail(
                        path,
                        ViolationKind::Budget,
                        format!("vector entry {t} exceeds the budget"),
                    ));
                }
            }
            for t in beta.entries() {
                let realizable = match t.as_nat() {
                    Some(n) => numeral_in(node.universe.carrier(), &n),
                    None => false,
                };
                if !realizable {
                    return Err(fail(
                        path,
                        ViolationKind::VectorOutsideUniverse,
                        format!("entry {t} has no numeral in the carrier"),
                    ));
                }
            }
            let qs = match mh_rights(cfg, beta) {
                Ok(qs) => qs,
                Err(e) => return Err(fail(path, ViolationKind::VectorOrder, e.to_string())),
            };
            let want = delta.len() + qs.len();
            if node.premises.len() != want {
                return Err(fail(
                    path,
                    ViolationKind::IncompleteBranching,
                    format!("the rule calls for {want} premises, found {}", node.premises.len()),
                ));
            }
            let mut universes = Vec::with_capacity(want);
            for (i, f) in delta.iter().enumerate() {
                let want_seq = node.sequent.with(negate(f));
                if node.premises[i].sequent != want_seq {
                    return Err(fail(
                        path,
                        ViolationKind::PremiseMismatch,
                        format!("premise {i} should conclude '{want_seq}'"),
                    ));
                }
                universes.push(node.universe.clone());
            }
            for (j, q) in qs.iter().enumerate() {
                let i = delta.len() + j;
                let mut want_seq = node.sequent.clone();
                for f in delta.iter() {
                    want_seq.0.insert(relativize(f, q.carrier()));
                }
                if node.premises[i].sequent != want_seq {
                    return Err(fail(
                        path,
                        ViolationKind::PremiseMismatch,
                        format!("premise {i} should conclude '{want_seq}'"),
                    ));
                }
                universes.push(node.universe.extend(q.carrier()));
            }
            Ok(universes)
        }
    }
}

// ---------------------------------------------------------------------------
// shape recovery for the transformation functions

/// What a rule adds to one premise.  Carrier extensions are recomputed from
/// the rule tag where they are needed, so they are not recorded here.
struct PremiseSpec {
    adds: Vec<Formula>,
}

fn find_and_principal(
    cfg: &CalcConfig,
    node: &Derivation,
) -> Result<(Formula, Vec<(HFSet, Formula)>), CalcError> {
    for a in node.sequent.iter() {
        let dec = match decompose_in(a, &cfg.root, &node.universe, &cfg.oracle) {
            Ok(d) => d,
            Err(_) => continue,
        };
        if dec.kind != DecKind::And || dec.parts.len() != node.premises.len() {
            continue;
        }
        let ok = dec
            .parts
            .iter()
            .zip(&node.premises)
            .all(|((_, part), p)| p.sequent == node.sequent.with(part.clone()));
        if ok {
            return Ok((a.clone(), dec.parts));
        }
    }
    Err(CalcError::Malformed("no conjunctive rule formula matches the premises".into()))
}

fn find_or_principal(
    cfg: &CalcConfig,
    node: &Derivation,
    witness: &HFSet,
) -> Result<(Formula, Formula), CalcError> {
    if node.premises.len() != 1 {
        return Err(CalcError::Malformed("a disjunction rule takes one premise".into()));
    }
    for a in node.sequent.iter() {
        let dec = match decompose_in(a, &cfg.root, &node.universe, &cfg.oracle) {
            Ok(d) => d,
            Err(_) => continue,
        };
        if dec.kind != DecKind::Or {
            continue;
        }
        if let Some(part) = dec.part(witness) {
            if node.premises[0].sequent == node.sequent.with(part.clone()) {
                return Ok((a.clone(), part.clone()));
            }
        }
    }
    Err(CalcError::Malformed("no disjunctive rule formula matches the premise".into()))
}

fn rule_specs(cfg: &CalcConfig, node: &Derivation) -> Result<Vec<PremiseSpec>, CalcError> {
    match &node.rule {
        RuleTag::And => {
            let (_, parts) = find_and_principal(cfg, node)?;
            Ok(parts
                .into_iter()
                .map(|(_, f)| PremiseSpec { adds: vec![f] })
                .collect())
        }
        RuleTag::Or { witness } => {
            let (_, part) = find_or_principal(cfg, node, witness)?;
            Ok(vec![PremiseSpec { adds: vec![part] }])
        }
        RuleTag::Cut { formula } => Ok(vec![
            PremiseSpec { adds: vec![negate(formula)] },
            PremiseSpec { adds: vec![formula.clone()] },
        ]),
        RuleTag::Mh { beta, delta } => {
            let qs = mh_rights(cfg, beta)?;
            let mut specs: Vec<PremiseSpec> = delta
                .iter()
                .map(|f| PremiseSpec { adds: vec![negate(f)] })
                .collect();
            for q in qs {
                let adds = delta.iter().map(|f| relativize(f, q.carrier())).collect();
                specs.push(PremiseSpec { adds });
            }
            Ok(specs)
        }
    }
}

fn seq_minus(s: &Sequent, f: &Formula) -> Sequent {
    let mut set = s.0.clone();
    set.remove(f);
    Sequent(set)
}

fn extend_for(u: &Universe, f: &Formula) -> Universe {
    let mut out = u.clone();
    for c in constants(f) {
        out = out.extend(&c);
    }
    out
}

// ---------------------------------------------------------------------------
// transformations

/// Raise the root bound and add side formulas to every sequent of the tree.
pub fn weaken(d: &Derivation, ordinal: &OrdTerm, extra: &Sequent) -> Result<Derivation, CalcError> {
    if *ordinal < d.ordinal {
        return Err(CalcError::WeakeningOrder {
            from: d.ordinal.to_string(),
            to: ordinal.to_string(),
        });
    }
    for c in extra.constants() {
        if !d.universe.carrier().contains(&c) {
            return Err(CalcError::ConstantsOutside(c.to_string()));
        }
    }
    for f in extra.iter() {
        if !free_vars(f).is_empty() {
            return Err(CalcError::Malformed(format!("side formula {f} has free variables")));
        }
    }
    if !d.universe.budget().admits(ordinal) {
        return Err(CalcError::BudgetRefused(ordinal.to_string()));
    }
    fn add_all(node: &Derivation, extra: &Sequent) -> Derivation {
        Derivation {
            universe: node.universe.clone(),
            ordinal: node.ordinal.clone(),
            rank: node.rank,
            sequent: node.sequent.union(extra),
            rule: node.rule.clone(),
            premises: node.premises.iter().map(|p| add_all(p, extra)).collect(),
        }
    }
    let mut out = add_all(d, extra);
    out.ordinal = ordinal.clone();
    Ok(out)
}

/// Weaken towards an exact target sequent; the target must contain the
/// current one.
fn weaken_to(d: &Derivation, ordinal: &OrdTerm, target: &Sequent) -> Result<Derivation, CalcError> {
    if !d.sequent.is_subset(target) {
        return Err(CalcError::Malformed(format!(
            "'{}' is not contained in the weakening target '{target}'",
            d.sequent
        )));
    }
    let extra = Sequent(target.0.difference(&d.sequent.0).cloned().collect());
    weaken(d, ordinal, &extra)
}

/// Move a derivation into another universe, keeping every bound.  The rule
/// shapes survive because unbounded quantifiers spread over the configured
/// root carrier, never over the ambient universe.
pub fn lift(cfg: &CalcConfig, d: &Derivation, target: &Universe) -> Result<Derivation, CalcError> {
    fn go(cfg: &CalcConfig, node: &Derivation, univ: Universe) -> Result<Derivation, CalcError> {
        for c in node.sequent.constants() {
            if !univ.carrier().contains(&c) {
                return Err(CalcError::ConstantsOutside(c.to_string()));
            }
        }
        if !univ.budget().admits(&node.ordinal) {
            return Err(CalcError::BudgetRefused(node.ordinal.to_string()));
        }
        let exts: Vec<Option<HFSet>> = match &node.rule {
            RuleTag::Mh { beta, delta } => {
                for t in beta.entries() {
                    let ok = match t.as_nat() {
                        Some(n) => numeral_in(univ.carrier(), &n),
                        None => false,
                    };
                    if !ok {
                        return Err(CalcError::Unsupported(format!(
                            "vector entry {t} has no numeral in the target carrier"
                        )));
                    }
                }
                let qs = mh_rights(cfg, beta)?;
                let mut exts = vec![None; delta.len()];
                exts.extend(qs.into_iter().map(|q| Some(q.carrier().clone())));
                exts
            }
            _ => vec![None; node.premises.len()],
        };
        if exts.len() != node.premises.len() {
            return Err(CalcError::Malformed("premise count differs from the rule shape".into()));
        }
        let mut premises = Vec::with_capacity(node.premises.len());
        for (p, ext) in node.premises.iter().zip(exts) {
            let next = match ext {
                Some(c) => univ.extend(&c),
                None => univ.clone(),
            };
            premises.push(go(cfg, p, next)?);
        }
        Ok(Derivation {
            universe: univ,
            ordinal: node.ordinal.clone(),
            rank: node.rank,
            sequent: node.sequent.clone(),
            rule: node.rule.clone(),
            premises,
        })
    }
    go(cfg, d, target.clone())
}

/// Inversion for conjunctive formulas: replace `target` by its component at
/// `iota` everywhere, keeping the root bound exactly.
pub fn invert(
    cfg: &CalcConfig,
    d: &Derivation,
    target: &Formula,
    iota: &HFSet,
) -> Result<Derivation, CalcError> {
    if is_delta0(target) {
        return Err(CalcError::NotInvertible("level-0 formulas have no components".into()));
    }
    let dec = decompose_in(target, &cfg.root, &d.universe, &cfg.oracle)?;
    if dec.kind != DecKind::And {
        return Err(CalcError::NotInvertible(format!("{target} is not conjunctive")));
    }
    let part = dec
        .part(iota)
        .ok_or_else(|| CalcError::NotInvertible(format!("{target} has no component at {iota}")))?
        .clone();
    if !d.sequent.contains(target) {
        return Err(CalcError::NotInvertible(format!("{target} is not in the sequent")));
    }

    fn go(
        cfg: &CalcConfig,
        node: &Derivation,
        target: &Formula,
        part: &Formula,
        iota: &HFSet,
    ) -> Result<Derivation, CalcError> {
        let new_univ = extend_for(&node.universe, part);
        let new_seq = seq_minus(&node.sequent, target).with(part.clone());
        if let RuleTag::And = node.rule {
            let dec = decompose_in(target, &cfg.root, &node.universe, &cfg.oracle)?;
            let on_target = dec.parts.len() == node.premises.len()
                && dec
                    .parts
                    .iter()
                    .zip(&node.premises)
                    .all(|((_, f), p)| p.sequent == node.sequent.with(f.clone()));
            if on_target {
                let j = dec
                    .parts
                    .iter()
                    .position(|(i, _)| i == iota)
                    .ok_or_else(|| CalcError::Malformed("component index disappeared".into()))?;
                let r = go(cfg, &node.premises[j], target, part, iota)?;
                return weaken_to(&r, &node.ordinal, &new_seq);
            }
        }
        let specs = rule_specs(cfg, node)?;
        let mut premises = Vec::with_capacity(node.premises.len());
        for (p, spec) in node.premises.iter().zip(&specs) {
            let r = go(cfg, p, target, part, iota)?;
            let mut want = new_seq.clone();
            for f in &spec.adds {
                want.0.insert(f.clone());
            }
            premises.push(weaken_to(&r, &p.ordinal, &want)?);
        }
        Ok(Derivation {
            universe: new_univ,
            ordinal: node.ordinal.clone(),
            rank: node.rank,
            sequent: new_seq,
            rule: node.rule.clone(),
            premises,
        })
    }
    go(cfg, d, target, &part, iota)
}

/// Remove a false level-0 formula that no rule in the tree introduces.
pub fn strip(cfg: &CalcConfig, d: &Derivation, f: &Formula) -> Result<Derivation, CalcError> {
    if !is_delta0(f) {
        return Err(CalcError::NotStrippable(format!("{f} is not level 0")));
    }
    if eval(f, &d.universe, &cfg.oracle)? {
        return Err(CalcError::NotStrippable(format!("{f} is true")));
    }
    fn go(cfg: &CalcConfig, node: &Derivation, f: &Formula) -> Result<Derivation, CalcError> {
        let specs = rule_specs(cfg, node)?;
        for spec in &specs {
            if spec.adds.contains(f) {
                return Err(CalcError::NotStrippable(format!("a rule introduces {f}")));
            }
        }
        let premises =
            node.premises.iter().map(|p| go(cfg, p, f)).collect::<Result<Vec<_>, _>>()?;
        Ok(Derivation {
            universe: node.universe.clone(),
            ordinal: node.ordinal.clone(),
            rank: node.rank,
            sequent: seq_minus(&node.sequent, f),
            rule: node.rule.clone(),
            premises,
        })
    }
    go(cfg, d, f)
}

/// Cut reduction.  From derivations of `Γ, ¬C` and `Δ, C` of equal rank `c`
/// with `dp(C) ≤ c` and `C` level 0 or disjunctive, build a derivation of
/// `Γ, Δ` with the bound `α + β` and the same rank; new cuts act on proper
/// components of `C`.
pub fn reduce(
    cfg: &CalcConfig,
    d1: &Derivation,
    d2: &Derivation,
    c: &Formula,
) -> Result<Derivation, CalcError> {
    let nc = negate(c);
    if d1.rank != d2.rank {
        return Err(CalcError::NotReducible("the ranks differ".into()));
    }
    if d1.universe != d2.universe {
        return Err(CalcError::NotReducible("the universes differ".into()));
    }
    if !d1.sequent.contains(&nc) {
        return Err(CalcError::NotReducible(format!("{nc} is not in the first sequent")));
    }
    if !d2.sequent.contains(c) {
        return Err(CalcError::NotReducible(format!("{c} is not in the second sequent")));
    }
    if dp(c) > d1.rank {
        return Err(CalcError::NotReducible(format!(
            "degree {} exceeds the rank {}",
            dp(c),
            d1.rank
        )));
    }
    let gamma = seq_minus(&d1.sequent, &nc);
    let alpha = &d1.ordinal;
    let target_root = seq_minus(&d2.sequent, c).union(&gamma);
    let root_ord = alpha.add(&d2.ordinal);
    if is_delta0(c) {
        let s = if eval(c, &d1.universe, &cfg.oracle)? {
            strip(cfg, d1, &nc)?
        } else {
            strip(cfg, d2, c)?
        };
        return weaken_to(&s, &root_ord, &target_root);
    }
    let dec = decompose_in(c, &cfg.root, &d1.universe, &cfg.oracle)?;
    if dec.kind != DecKind::Or {
        return Err(CalcError::Unsupported(
            "reduction works on the disjunctive side; negate the cut formula".into(),
        ));
    }

    #[allow(clippy::too_many_arguments)]
    fn go(
        cfg: &CalcConfig,
        node: &Derivation,
        d1: &Derivation,
        gamma: &Sequent,
        alpha: &OrdTerm,
        c: &Formula,
        nc: &Formula,
        dec_parts: &[(HFSet, Formula)],
    ) -> Result<Derivation, CalcError> {
        let new_seq = seq_minus(&node.sequent, c).union(gamma);
        let new_ord = alpha.add(&node.ordinal);
        if let RuleTag::Or { witness } = &node.rule {
            if let Some((_, part)) = dec_parts.iter().find(|(i, _)| i == witness) {
                if node.premises.len() == 1
                    && node.premises[0].sequent == node.sequent.with(part.clone())
                {
                    let p = &node.premises[0];
                    let r = go(cfg, p, d1, gamma, alpha, c, nc, dec_parts)?;
                    let lifted = lift(cfg, d1, &node.universe)?;
                    let inv = invert(cfg, &lifted, nc, witness)?;
                    let neg_part = negate(part);
                    let sub_ord = alpha.add(&p.ordinal);
                    let left = weaken_to(&inv, &sub_ord, &new_seq.with(neg_part))?;
                    let right = weaken_to(&r, &sub_ord, &new_seq.with(part.clone()))?;
                    return Ok(Derivation {
                        universe: node.universe.clone(),
                        ordinal: new_ord,
                        rank: node.rank,
                        sequent: new_seq,
                        rule: RuleTag::Cut { formula: part.clone() },
                        premises: vec![left, right],
                    });
                }
            }
        }
        let specs = rule_specs(cfg, node)?;
        let mut premises = Vec::with_capacity(node.premises.len());
        for (p, spec) in node.premises.iter().zip(&specs) {
            let r = go(cfg, p, d1, gamma, alpha, c, nc, dec_parts)?;
            let mut want = new_seq.clone();
            for f in &spec.adds {
                want.0.insert(f.clone());
            }
            premises.push(weaken_to(&r, &alpha.add(&p.ordinal), &want)?);
        }
        Ok(Derivation {
            universe: node.universe.clone(),
            ordinal: new_ord,
            rank: node.rank,
            sequent: new_seq,
            rule: node.rule.clone(),
            premises,
        })
    }
    let out = go(cfg, d2, d1, &gamma, alpha, c, &nc, &dec.parts)?;
    weaken_to(&out, &root_ord, &target_root)
}

/// One pass of cut elimination: rank `c + 1` drops to `c`, every bound is
/// normalized to the omega power of the old bound, and cuts of maximal
/// degree are reduced away.
pub fn cut_elim_once(cfg: &CalcConfig, d: &Derivation) -> Result<Derivation, CalcError> {
    if d.rank == 0 {
        return Err(CalcError::Rank("the derivation is already cut free".into()));
    }
    let c = d.rank - 1;
    fn go(cfg: &CalcConfig, node: &Derivation, c: u32) -> Result<Derivation, CalcError> {
        let new_ord = node.ordinal.omega_pow();
        if let RuleTag::Cut { formula } = &node.rule {
            if dp(formula) == c {
                let r1 = go(cfg, &node.premises[0], c)?;
                let r2 = go(cfg, &node.premises[1], c)?;
                let m = r1.ordinal.clone().max(r2.ordinal.clone());
                let r1 = weaken(&r1, &m, &Sequent::new())?;
                let r2 = weaken(&r2, &m, &Sequent::new())?;
                let reduced = if !is_delta0(formula)
                    && decompose_in(formula, &cfg.root, &node.universe, &cfg.oracle)?.kind
                        == DecKind::And
                {
                    reduce(cfg, &r2, &r1, &negate(formula))?
                } else {
                    reduce(cfg, &r1, &r2, formula)?
                };
                return weaken_to(&reduced, &new_ord, &node.sequent);
            }
        }
        let premises =
            node.premises.iter().map(|p| go(cfg, p, c)).collect::<Result<Vec<_>, _>>()?;
        Ok(Derivation {
            universe: node.universe.clone(),
            ordinal: new_ord,
            rank: c,
            sequent: node.sequent.clone(),
            rule: node.rule.clone(),
            premises,
        })
    }
    go(cfg, d, c)
}

/// Iterate `cut_elim_once` down to rank zero.  The input bound must lie
/// below the second constant so the resulting tower stays in the notation
/// system.
pub fn cut_elim_full(cfg: &CalcConfig, d: &Derivation) -> Result<Derivation, CalcError> {
    if d.ordinal >= OrdTerm::lambda() {
        return Err(CalcError::Unsupported("the bound must lie below the limit constant".into()));
    }
    let mut out = d.clone();
    while out.rank > 0 {
        out = cut_elim_once(cfg, &out)?;
    }
    Ok(out)
}

/// Uniformly change the rank of every node.  Raising is always possible;
/// lowering must keep every cut formula below the new rank.
pub fn re_rank(d: &Derivation, rank: u32) -> Result<Derivation, CalcError> {
    fn go(node: &Derivation, rank: u32) -> Result<Derivation, CalcError> {
        if let RuleTag::Cut { formula } = &node.rule {
            if dp(formula) >= rank {
                return Err(CalcError::Rank(format!(
                    "a cut formula of degree {} blocks rank {rank}",
                    dp(formula)
                )));
            }
        }
        let premises =
            node.premises.iter().map(|p| go(p, rank)).collect::<Result<Vec<_>, _>>()?;
        Ok(Derivation {
            universe: node.universe.clone(),
            ordinal: node.ordinal.clone(),
            rank,
            sequent: node.sequent.clone(),
            rule: node.rule.clone(),
            premises,
        })
    }
    go(d, rank)
}

// ---------------------------------------------------------------------------
// embeddings

fn ordn(n: u32) -> OrdTerm {
    OrdTerm::from_nat(n)
}

fn guard_sentence(cfg: &CalcConfig, f: &Formula) -> Result<(), CalcError> {
    if !free_vars(f).is_empty() {
        return Err(CalcError::Malformed(format!("{f} has free variables")));
    }
    for c in constants(f) {
        if !cfg.root.carrier().contains(&c) {
            return Err(CalcError::ConstantsOutside(c.to_string()));
        }
    }
    Ok(())
}

/// Derive `⊢ δ, ¬δ` at the root universe with the bound `2·dp(δ)` and rank 0.
pub fn embed_tautology(cfg: &CalcConfig, delta: &Formula) -> Result<Derivation, CalcError> {
    guard_sentence(cfg, delta)?;
    taut_at(cfg, delta, &cfg.root)
}

fn taut_at(cfg: &CalcConfig, delta: &Formula, univ: &Universe) -> Result<Derivation, CalcError> {
    let nd = negate(delta);
    let seq = Sequent::from_formulas([delta.clone(), nd.clone()]);
    if is_delta0(delta) {
        eval(delta, univ, &cfg.oracle)?;
        return Ok(Derivation {
            universe: univ.clone(),
            ordinal: OrdTerm::zero(),
            rank: 0,
            sequent: seq,
            rule: RuleTag::And,
            premises: vec![],
        });
    }
    let d_total = dp(delta);
    let dec_delta = decompose_in(delta, &cfg.root, univ, &cfg.oracle)?;
    let (conj, dec) = if dec_delta.kind == DecKind::And {
        (delta.clone(), dec_delta)
    } else {
        let dn = decompose_in(&nd, &cfg.root, univ, &cfg.oracle)?;
        (nd.clone(), dn)
    };
    let mut premises = Vec::with_capacity(dec.parts.len());
    for (iota, part) in &dec.parts {
        for cst in constants(part) {
            if !univ.carrier().contains(&cst) {
                return Err(CalcError::Unsupported(format!(
                    "component constant {cst} lies outside the carrier"
                )));
            }
        }
        let d_part = dp(part);
        let sub = taut_at(cfg, part, univ)?;
        let or_seq = seq.with(part.clone());
        let inner = or_seq.with(negate(part));
        let sub = weaken_to(&sub, &ordn(2 * d_part), &inner)?;
        premises.push(Derivation {
            universe: univ.clone(),
            ordinal: ordn(2 * d_part + 1),
            rank: 0,
            sequent: or_seq,
            rule: RuleTag::Or { witness: iota.clone() },
            premises: vec![sub],
        });
    }
    let _ = conj;
    Ok(Derivation {
        universe: univ.clone(),
        ordinal: ordn(2 * d_total),
        rank: 0,
        sequent: seq,
        rule: RuleTag::And,
        premises,
    })
}

/// Derive the foundation instance for `a`: either some set is an
/// epsilon-minimal failure of the template, or every member of `a` satisfies
/// it.  The bound is exactly `2·dp + 3·rank(a)` and the rank is 0.
pub fn embed_foundation(
    cfg: &CalcConfig,
    a: &HFSet,
    var: &str,
    body: &Formula,
) -> Result<Derivation, CalcError> {
    if !cfg.root.carrier().contains(a) {
        return Err(CalcError::ConstantsOutside(a.to_string()));
    }
    let fv = free_vars(body);
    if fv.iter().any(|v| v != var) {
        return Err(CalcError::Malformed("the template may only use the given variable".into()));
    }
    for c in constants(body) {
        if !cfg.root.carrier().contains(&c) {
            return Err(CalcError::ConstantsOutside(c.to_string()));
        }
    }
    let mut used = fv;
    used.insert(var.to_string());
    let y = fresh_var(&used);
    // the minimality conjunct reuses this body so components of the big
    // disjunction coincide syntactically with the local goals
    let body_y = subst_term(body, var, &SetTerm::Var(y.clone()));
    let big = Formula::Exists {
        var: var.to_string(),
        body: Box::new(Formula::And(
            Box::new(Formula::ForallIn {
                var: y.clone(),
                bound: SetTerm::Var(var.to_string()),
                body: Box::new(body_y.clone()),
            }),
            Box::new(negate(body)),
        )),
    };
    let d = dp(body);
    found_at(cfg, a, var, body, &y, &body_y, &big, d)
}

#[allow(clippy::too_many_arguments)]
fn found_at(
    cfg: &CalcConfig,
    b: &HFSet,
    var: &str,
    body: &Formula,
    y: &str,
    body_y: &Formula,
    big: &Formula,
    d: u32,
) -> Result<Derivation, CalcError> {
    let gb = Formula::ForallIn {
        var: y.to_string(),
        bound: SetTerm::Const(b.clone()),
        body: Box::new(body_y.clone()),
    };
    let seq = Sequent::from_formulas([big.clone(), gb.clone()]);
    let bound = ordn(2 * d + 3 * (b.rank() as u32));
    let univ = &cfg.root;
    if is_delta0(body) {
        if eval(&gb, univ, &cfg.oracle)? {
            return Ok(Derivation {
                universe: univ.clone(),
                ordinal: bound,
                rank: 0,
                sequent: seq,
                rule: RuleTag::And,
                premises: vec![],
            });
        }
        // a counterexample of least rank is epsilon-minimal
        let tc = b.transitive_closure();
        let mut star: Option<&HFSet> = None;
        for x in tc.elems() {
            if !eval(&subst(body, var, x), univ, &cfg.oracle)?
                && star.is_none_or(|s| x.rank() < s.rank())
            {
                star = Some(x);
            }
        }
        let star = star.ok_or_else(|| {
            CalcError::Malformed("a false bounded template must fail somewhere".into())
        })?;
        let cstar = match big {
            Formula::Exists { var: v, body: b2 } => subst(b2, v, star),
            _ => unreachable!(),
        };
        let leaf = Derivation {
            universe: univ.clone(),
            ordinal: OrdTerm::zero(),
            rank: 0,
            sequent: seq.with(cstar),
            rule: RuleTag::And,
            premises: vec![],
        };
        return Ok(Derivation {
            universe: univ.clone(),
            ordinal: bound,
            rank: 0,
            sequent: seq,
            rule: RuleTag::Or { witness: star.clone() },
            premises: vec![leaf],
        });
    }
    let mut premises = Vec::with_capacity(b.len());
    for m in b.elems() {
        let rm = m.rank() as u32;
        let am = subst(body, var, m);
        let gm = Formula::ForallIn {
            var: y.to_string(),
            bound: SetTerm::Const(m.clone()),
            body: Box::new(body_y.clone()),
        };
        let cm = match big {
            Formula::Exists { var: v, body: b2 } => subst(b2, v, m),
            _ => unreachable!(),
        };
        let s_or = seq.with(am.clone());
        let s_and = s_or.with(cm);
        let sub = found_at(cfg, m, var, body, y, body_y, big, d)?;
        let left = weaken_to(&sub, &ordn(2 * d + 3 * rm), &s_and.with(gm))?;
        let taut = taut_at(cfg, &am, univ)?;
        let right = weaken_to(&taut, &ordn(2 * d), &s_and.with(negate(&am)))?;
        let and_node = Derivation {
            universe: univ.clone(),
            ordinal: ordn(2 * d + 3 * rm + 1),
            rank: 0,
            sequent: s_and,
            rule: RuleTag::And,
            premises: vec![left, right],
        };
        premises.push(Derivation {
            universe: univ.clone(),
            ordinal: ordn(2 * d + 3 * rm + 2),
            rank: 0,
            sequent: s_or,
            rule: RuleTag::Or { witness: m.clone() },
            premises: vec![and_node],
        });
    }
    Ok(Derivation {
        universe: univ.clone(),
        ordinal: bound,
        rank: 0,
        sequent: seq,
        rule: RuleTag::And,
        premises,
    })
}

/// Derive a true two-universal one-existential sentence over a level-0
/// matrix, with the bound exactly 3 and rank 0.
pub fn embed_pi2(
    cfg: &CalcConfig,
    vars: (&str, &str, &str),
    theta: &Formula,
) -> Result<Derivation, CalcError> {
    let (x, y, z) = vars;
    if x == y || y == z || x == z {
        return Err(CalcError::Malformed("the three variables must be distinct".into()));
    }
    if !is_delta0(theta) {
        return Err(CalcError::Malformed("the matrix must be level 0".into()));
    }
    let fv = free_vars(theta);
    if fv.iter().any(|v| v != x && v != y && v != z) {
        return Err(CalcError::Malformed("the matrix may only use the given variables".into()));
    }
    for c in constants(theta) {
        if !cfg.root.carrier().contains(&c) {
            return Err(CalcError::ConstantsOutside(c.to_string()));
        }
    }
    let univ = &cfg.root;
    let inner = Formula::Exists { var: z.to_string(), body: Box::new(theta.clone()) };
    let middle = Formula::Forall { var: y.to_string(), body: Box::new(inner) };
    let outer = Formula::Forall { var: x.to_string(), body: Box::new(middle) };
    let root_seq = Sequent::from_formulas([outer.clone()]);
    let mut outer_premises = Vec::new();
    for a in univ.carrier().elems() {
        let fa = match &outer {
            Formula::Forall { var, body } => subst(body, var, a),
            _ => unreachable!(),
        };
        let s1 = root_seq.with(fa.clone());
        let mut mid_premises = Vec::new();
        for b in univ.carrier().elems() {
            let gab = match &fa {
                Formula::Forall { var, body } => subst(body, var, b),
                _ => unreachable!(),
            };
            let s2 = s1.with(gab.clone());
            let mut witness = None;
            for cand in univ.carrier().elems() {
                let t = match &gab {
                    Formula::Exists { var, body } => subst(body, var, cand),
                    _ => unreachable!(),
                };
                if eval(&t, univ, &cfg.oracle)? {
                    witness = Some((cand.clone(), t));
                    break;
                }
            }
            let (w, t) = witness.ok_or_else(|| {
                CalcError::NoWitness(format!("no witness for {x} = {a}, {y} = {b}"))
            })?;
            let leaf = Derivation {
                universe: univ.clone(),
                ordinal: OrdTerm::zero(),
                rank: 0,
                sequent: s2.with(t),
                rule: RuleTag::And,
                premises: vec![],
            };
            mid_premises.push(Derivation {
                universe: univ.clone(),
                ordinal: ordn(1),
                rank: 0,
                sequent: s2,
                rule: RuleTag::Or { witness: w },
                premises: vec![leaf],
            });
        }
        outer_premises.push(Derivation {
            universe: univ.clone(),
            ordinal: ordn(2),
            rank: 0,
            sequent: s1,
            rule: RuleTag::And,
            premises: mid_premises,
        });
    }
    Ok(Derivation {
        universe: univ.clone(),
        ordinal: ordn(3),
        rank: 0,
        sequent: root_seq,
        rule: RuleTag::And,
        premises: outer_premises,
    })
}

/// Derive the reflection axiom for a committed vector: either `δ` holds, or
/// some universe in the staircase class reflects its failure.  The bound is
/// exactly omega and the rank is 0.
pub fn embed_mh_axiom(
    cfg: &CalcConfig,
    beta: &OrdVec,
    delta: &Formula,
) -> Result<Derivation, CalcError> {
    guard_sentence(cfg, delta)?;
    if !classify(delta).le(LevyClass::Sigma(cfg.k + 1)) {
        return Err(CalcError::Unsupported(format!(
            "{delta} is {} which exceeds {}",
            classify(delta),
            LevyClass::Sigma(cfg.k + 1)
        )));
    }
    match vec_lt(beta, &cfg.alpha_vec) {
        Ok(true) => {}
        Ok(false) => {
            return Err(CalcError::Unsupported(format!(
                "{beta} is not strictly below the control vector {}",
                cfg.alpha_vec
            )));
        }
        Err(e) => return Err(CalcError::Index(e)),
    }
    for t in beta.entries() {
        let ok = match t.as_nat() {
            Some(n) => numeral_in(cfg.root.carrier(), &n),
            None => false,
        };
        if !ok {
            return Err(CalcError::Unsupported(format!(
                "vector entry {t} has no numeral in the root carrier"
            )));
        }
        if !cfg.root.budget().admits(t) {
            return Err(CalcError::BudgetRefused(t.to_string()));
        }
    }
    if !cfg.root.budget().admits(&OrdTerm::omega()) {
        return Err(CalcError::BudgetRefused(OrdTerm::omega().to_string()));
    }
    let rows = bullet(beta, &cfg.alpha_vec)?;
    let class = ClassRef::MhMat { k: cfg.k + 1, rows };
    let xv = fresh_var(&free_vars(delta));
    let goal = Formula::ExistsInClass {
        var: xv.clone(),
        class: class.clone(),
        body: Box::new(relativize_to_var(&negate(delta), &xv)),
    };
    let root_seq = Sequent::from_formulas([delta.clone(), goal.clone()]);
    let taut = embed_tautology(cfg, delta)?;
    let left = weaken_to(&taut, &ordn(2 * dp(delta)), &root_seq.with(negate(delta)))?;
    let mut premises = vec![left];
    for q in mh_rights(cfg, beta)? {
        let quniv = cfg.root.extend(q.carrier());
        let reld = relativize(delta, q.carrier());
        let or_seq = root_seq.with(reld.clone());
        let sub = taut_at(cfg, &reld, &quniv)?;
        let inner = weaken_to(&sub, &ordn(2 * dp(&reld)), &or_seq.with(negate(&reld)))?;
        premises.push(Derivation {
            universe: quniv,
            ordinal: ordn(2 * dp(&reld) + 1),
            rank: 0,
            sequent: or_seq,
            rule: RuleTag::Or { witness: q.carrier().clone() },
            premises: vec![inner],
        });
    }
    Ok(Derivation {
        universe: cfg.root.clone(),
        ordinal: OrdTerm::omega(),
        rank: 0,
        sequent: root_seq,
        rule: RuleTag::Mh { beta: beta.clone(), delta: Sequent::from_formulas([delta.clone()]) },
        premises,
    })
}

// ---------------------------------------------------------------------------
// serialization

#[derive(Serialize, Deserialize)]
struct UniverseDto {
    carrier: String,
    budget: BudgetDto,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum BudgetDto {
    All,
    MaxSize(usize),
}

#[derive(Serialize, Deserialize)]
struct DerivationDto {
    universe: UniverseDto,
    ordinal: String,
    rank: u32,
    sequent: Vec<String>,
    rule: RuleDto,
    #[serde(default)]
    premises: Vec<DerivationDto>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum RuleDto {
    Or { witness: String },
    And,
    Cut { formula: String },
    Mh { beta: String, delta: Vec<String> },
}

#[derive(Serialize, Deserialize)]
struct ConfigDto {
    n: u32,
    k: u32,
    alpha_vec: String,
    root: UniverseDto,
    #[serde(default)]
    oracle: Vec<OracleEntryDto>,
}

#[derive(Serialize, Deserialize)]
struct OracleEntryDto {
    class: String,
    members: Vec<UniverseDto>,
}

fn universe_to_dto(u: &Universe) -> UniverseDto {
    UniverseDto {
        carrier: u.carrier().to_string(),
        budget: match u.budget() {
            Budget::All => BudgetDto::All,
            Budget::MaxSize(n) => BudgetDto::MaxSize(*n),
        },
    }
}

fn universe_from_dto(d: &UniverseDto) -> Result<Universe, CalcError> {
    let carrier: HFSet = d.carrier.parse()?;
    let budget = match d.budget {
        BudgetDto::All => Budget::All,
        BudgetDto::MaxSize(n) => Budget::MaxSize(n),
    };
    Ok(Universe::new(carrier, budget)?)
}

fn sequent_to_dto(s: &Sequent) -> Vec<String> {
    s.iter().map(|f| f.to_string()).collect()
}

fn sequent_from_dto(v: &[String]) -> Result<Sequent, CalcError> {
    let mut out = Sequent::new();
    for s in v {
        out.0.insert(s.parse::<Formula>()?);
    }
    Ok(out)
}

fn derivation_to_dto(d: &Derivation) -> DerivationDto {
    DerivationDto {
        universe: universe_to_dto(&d.universe),
        ordinal: d.ordinal.to_string(),
        rank: d.rank,
        sequent: sequent_to_dto(&d.sequent),
        rule: match &d.rule {
            RuleTag::Or { witness } => RuleDto::Or { witness: witness.to_string() },
            RuleTag::And => RuleDto::And,
            RuleTag::Cut { formula } => RuleDto::Cut { formula: formula.to_string() },
            RuleTag::Mh { beta, delta } => {
                RuleDto::Mh { beta: beta.to_string(), delta: sequent_to_dto(delta) }
            }
        },
        premises: d.premises.iter().map(derivation_to_dto).collect(),
    }
}

fn derivation_from_dto(d: &DerivationDto) -> Result<Derivation, CalcError> {
    Ok(Derivation {
        universe: universe_from_dto(&d.universe)?,
        ordinal: d.ordinal.parse()?,
        rank: d.rank,
        sequent: sequent_from_dto(&d.sequent)?,
        rule: match &d.rule {
            RuleDto::Or { witness } => RuleTag::Or { witness: witness.parse()? },
            RuleDto::And => RuleTag::And,
            RuleDto::Cut { formula } => RuleTag::Cut { formula: formula.parse::<Formula>()? },
            RuleDto::Mh { beta, delta } => {
                RuleTag::Mh { beta: beta.parse()?, delta: sequent_from_dto(delta)? }
            }
        },
        premises: d.premises.iter().map(derivation_from_dto).collect::<Result<_, _>>()?,
    })
}

fn class_from_str(s: &str) -> Result<ClassRef, CalcError> {
    let mut cur = Cursor::new(s);
    let c = parse_class_ref(&mut cur)?;
    cur.skip_ws();
    if !cur.at_end() {
        return Err(CalcError::Json(format!("trailing input in class reference '{s}'")));
    }
    Ok(c)
}

impl Derivation {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&derivation_to_dto(self)).expect("derivations serialize")
    }

    pub fn from_json_str(s: &str) -> Result<Derivation, CalcError> {
        let dto: DerivationDto =
            serde_json::from_str(s).map_err(|e| CalcError::Json(e.to_string()))?;
        derivation_from_dto(&dto)
    }
}

impl CalcConfig {
    pub fn to_json_string(&self) -> String {
        let dto = ConfigDto {
            n: self.n,
            k: self.k,
            alpha_vec: self.alpha_vec.to_string(),
            root: universe_to_dto(&self.root),
            oracle: self
                .oracle
                .entries()
                .iter()
                .map(|(class, members)| OracleEntryDto {
                    class: class.to_string(),
                    members: members.iter().map(universe_to_dto).collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&dto).expect("configurations serialize")
    }

    pub fn from_json_str(s: &str) -> Result<CalcConfig, CalcError> {
        let dto: ConfigDto = serde_json::from_str(s).map_err(|e| CalcError::Json(e.to_string()))?;
        let mut oracle = ClassOracle::new();
        for e in &dto.oracle {
            let class = class_from_str(&e.class)?;
            let members = e
                .members
                .iter()
                .map(universe_from_dto)
                .collect::<Result<BTreeSet<_>, _>>()?;
            oracle.insert(class, members);
        }
        CalcConfig::new(dto.n, dto.k, dto.alpha_vec.parse()?, oracle, universe_from_dto(&dto.root)?)
    }
}
