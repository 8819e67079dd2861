//! Reflection operators over finite families of universes.
//!
//! The single step `m_op` keeps the universes that reflect every true pool
//! instance (up to a complexity cap tied to the level) into a member
//! universe drawn from a given class.  On top of it sit two transfinite
//! shapes cut down to finite size: `iterate`, which runs the step along a
//! well-founded strict order on hereditarily finite stages, and `mh`, the
//! vector-ramified recursion in which membership at index `alpha` demands
//! membership in the step applied to a staircase of classes at every
//! smaller index vector.  Class extensions are supplied and consumed
//! through a `ClassOracle`, the same table the sequent checker reads.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use thiserror::Error;

use crate::hf::{numeral_in, HFSet, Universe};
use crate::logic::{classify, constants, eval, free_vars, subst, ClassRef, Formula, LevyClass,
    LogicError};
use crate::mahlo_index::{bullet, OrdVec};
use crate::ord::OrdTerm;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReflError {
    #[error("template {formula} is {got}, above the pool cap {cap}")]
    TemplateTooComplex { formula: String, got: LevyClass, cap: LevyClass },
    #[error("order has a cycle through {0}")]
    CyclicOrder(String),
    #[error("index vector has {got} entries, level {level} of {top} needs {want}")]
    IndexShape { level: u32, top: u32, got: usize, want: usize },
    #[error(transparent)]
    Logic(#[from] LogicError),
}

/// The sentences a reflection step inspects: templates whose free variables
/// range over the carrier under test.  The cap bounds every template's
/// classification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaPool {
    level: u32,
    templates: Vec<Formula>,
}

impl FormulaPool {
    pub fn new(level: u32, templates: Vec<Formula>) -> Result<FormulaPool, ReflError> {
        let cap = pool_cap(level);
        for t in &templates {
            let got = classify(t);
            if !got.le(cap) {
                return Err(ReflError::TemplateTooComplex {
                    formula: t.to_string(),
                    got,
                    cap,
                });
            }
        }
        Ok(FormulaPool { level, templates })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn templates(&self) -> &[Formula] {
        &self.templates
    }

    /// Closed instances of the templates over `p`'s carrier.  Templates
    /// mentioning constants outside the carrier produce no instances.
    pub fn instances(&self, p: &Universe) -> BTreeSet<Formula> {
        let carrier = p.carrier();
        let mut out = BTreeSet::new();
        for t in &self.templates {
            if !constants(t).iter().all(|c| carrier.contains(c)) {
                continue;
            }
            let vars: Vec<String> = free_vars(t).into_iter().collect();
            let mut stack = vec![t.clone()];
            for v in &vars {
                let mut next = Vec::new();
                for g in &stack {
                    for e in carrier.elems() {
                        next.push(subst(g, v, e));
                    }
                }
                stack = next;
            }
            out.extend(stack);
        }
        out
    }
}

fn pool_cap(level: u32) -> LevyClass {
    if level == 0 {
        LevyClass::Delta0
    } else {
        LevyClass::Pi(level)
    }
}

/// An explicit strict order on hereditarily finite sets: exactly the listed
/// pairs, checked acyclic at construction.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StrictOrder {
    pairs: BTreeSet<(HFSet, HFSet)>,
}

impl StrictOrder {
    pub fn new(pairs: BTreeSet<(HFSet, HFSet)>) -> Result<StrictOrder, ReflError> {
        let order = StrictOrder { pairs };
        let mut states: BTreeMap<&HFSet, u8> = BTreeMap::new();
        let nodes: BTreeSet<&HFSet> =
            order.pairs.iter().flat_map(|(a, b)| [a, b]).collect();
        for node in nodes {
            order.cycle_from(node, &mut states)?;
        }
        Ok(order)
    }

    fn cycle_from<'a>(
        &'a self,
        node: &'a HFSet,
        states: &mut BTreeMap<&'a HFSet, u8>,
    ) -> Result<(), ReflError> {
        match states.get(node) {
            Some(2) => return Ok(()),
            Some(1) => return Err(ReflError::CyclicOrder(node.to_string())),
            _ => {}
        }
        states.insert(node, 1);
        for (a, b) in &self.pairs {
            if a == node {
                self.cycle_from(b, states)?;
            }
        }
        states.insert(node, 2);
        Ok(())
    }

    pub fn lt(&self, a: &HFSet, b: &HFSet) -> bool {
        self.pairs.contains(&(a.clone(), b.clone()))
    }

    pub fn predecessors(&self, a: &HFSet) -> Vec<HFSet> {
        self.pairs
            .iter()
            .filter(|(_, y)| y == a)
            .map(|(x, _)| x.clone())
            .collect()
    }

    pub fn pairs(&self) -> &BTreeSet<(HFSet, HFSet)> {
        &self.pairs
    }
}

/// Extensions of named classes.  Staircase references are never stored; they
/// are computed as intersections of their rows, and an empty staircase falls
/// back to the plain class at its level.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ClassOracle {
    entries: BTreeMap<ClassRef, BTreeSet<Universe>>,
}

impl ClassOracle {
    pub fn new() -> ClassOracle {
        ClassOracle::default()
    }

    pub fn insert(&mut self, class: ClassRef, universes: BTreeSet<Universe>) {
        self.entries.insert(class, universes);
    }

    pub fn lookup(&self, class: &ClassRef) -> BTreeSet<Universe> {
        match class {
            ClassRef::MhMat { k, rows } => {
                if rows.rows().is_empty() {
                    return self.lookup(&ClassRef::M(*k));
                }
                let mut acc: Option<BTreeSet<Universe>> = None;
                for (j, row) in rows.rows().iter().enumerate() {
                    let next = self.lookup(&ClassRef::Mh { k: k + j as u32, index: row.clone() });
                    acc = Some(match acc {
                        None => next,
                        Some(prev) => prev.intersection(&next).cloned().collect(),
                    });
                }
                acc.unwrap_or_default()
            }
            direct => self.entries.get(direct).cloned().unwrap_or_default(),
        }
    }

    pub fn entries(&self) -> &BTreeMap<ClassRef, BTreeSet<Universe>> {
        &self.entries
    }
}

/// One reflection step at `level`: keep the members of `family` for which
/// every true pool instance of classification at most the level's cap is
/// also true in some universe from `x` whose carrier is a member.
pub fn m_op(
    level: u32,
    x: &BTreeSet<Universe>,
    pool: &FormulaPool,
    family: &BTreeSet<Universe>,
    oracle: &ClassOracle,
) -> Result<BTreeSet<Universe>, ReflError> {
    let cap = LevyClass::Pi(level + 1);
    let mut out = BTreeSet::new();
    'family: for p in family {
        for inst in pool.instances(p) {
            if !classify(&inst).le(cap) {
                continue;
            }
            if eval(&inst, p, oracle)? {
                let reflected = x.iter().any(|q| {
                    p.carrier().contains(q.carrier())
                        && eval(&inst, q, oracle).unwrap_or(false)
                });
                if !reflected {
                    continue 'family;
                }
            }
        }
        out.insert(p.clone());
    }
    Ok(out)
}

/// Iterate the step along a strict order, taking intersections over all
/// predecessors; points with no predecessor start from the whole family.
pub fn iterate(
    level: u32,
    prec: &StrictOrder,
    a: &HFSet,
    pool: &FormulaPool,
    family: &BTreeSet<Universe>,
    oracle: &ClassOracle,
) -> Result<BTreeSet<Universe>, ReflError> {
    let mut memo = BTreeMap::new();
    let mut active = BTreeSet::new();
    iterate_memo(level, prec, a, pool, family, oracle, &mut memo, &mut active)
}

#[allow(clippy::too_many_arguments)]
fn iterate_memo(
    level: u32,
    prec: &StrictOrder,
    a: &HFSet,
    pool: &FormulaPool,
    family: &BTreeSet<Universe>,
    oracle: &ClassOracle,
    memo: &mut BTreeMap<HFSet, BTreeSet<Universe>>,
    active: &mut BTreeSet<HFSet>,
) -> Result<BTreeSet<Universe>, ReflError> {
    if let Some(v) = memo.get(a) {
        return Ok(v.clone());
    }
    if !active.insert(a.clone()) {
        return Err(ReflError::CyclicOrder(a.to_string()));
    }
    let mut x: Option<BTreeSet<Universe>> = None;
    for b in prec.predecessors(a) {
        let below = iterate_memo(level, prec, &b, pool, family, oracle, memo, active)?;
        x = Some(match x {
            None => below,
            Some(prev) => prev.intersection(&below).cloned().collect(),
        });
    }
    let x = x.unwrap_or_else(|| family.clone());
    let result = m_op(level, &x, pool, family, oracle)?;
    active.remove(a);
    memo.insert(a.clone(), result.clone());
    Ok(result)
}

/// Ambient data for the vector-ramified recursion: the top level `n`, the
/// candidate ordinals an index entry may step down through, and the class
/// closing off the hierarchy at level `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MhConfig {
    pub n: u32,
    pub ord_universe: BTreeSet<OrdTerm>,
    pub m_top: BTreeSet<Universe>,
}

/// The ramified class at `level` and index `alpha` (which must have length
/// `n - level`).  A universe belongs when the numeral of every finite index
/// entry is a member, and for every candidate vector strictly below `alpha`
/// whose numerals it contains, it survives the reflection step into the
/// intersection of the staircase classes one row at a time.
pub fn mh(
    level: u32,
    alpha: &OrdVec,
    cfg: &MhConfig,
    pool: &FormulaPool,
    family: &BTreeSet<Universe>,
    oracle: &ClassOracle,
) -> Result<BTreeSet<Universe>, ReflError> {
    let mut ctx = MhCtx::new(cfg, pool, family, oracle);
    let mut memo = BTreeMap::new();
    let bits = mh_bits(level, alpha, &mut ctx, &mut memo)?;
    Ok(ctx.to_universes(&bits))
}

/// Classes during the recursion travel as bitsets over the family indices.
type Bits = Vec<u64>;

fn bits_new(len: usize) -> Bits {
    vec![0; len.div_ceil(64)]
}

fn bit_set(b: &mut Bits, i: usize) {
    b[i / 64] |= 1 << (i % 64);
}

fn bit_get(b: &Bits, i: usize) -> bool {
    b[i / 64] >> (i % 64) & 1 == 1
}

fn bits_and(a: &mut Bits, b: &Bits) {
    for (x, y) in a.iter_mut().zip(b) {
        *x &= y;
    }
}

/// Pool instances of one universe with their classifications and cached
/// truth values: at the universe itself, and at each reflection target.
struct UnivInsts {
    insts: Vec<(LevyClass, Formula)>,
    at_self: Vec<Option<Result<bool, LogicError>>>,
    at_targets: Vec<Option<Vec<bool>>>,
}

/// Interned view of the family: universes addressed by index, the top class
/// as a bitset, and per universe the family members whose carriers are its
/// members (the only possible reflection witnesses).
struct MhCtx<'a> {
    cfg: &'a MhConfig,
    pool: &'a FormulaPool,
    oracle: &'a ClassOracle,
    fam: Vec<Universe>,
    top: Bits,
    targets: Vec<Vec<usize>>,
    per_u: Vec<Option<UnivInsts>>,
}

impl<'a> MhCtx<'a> {
    fn new(
        cfg: &'a MhConfig,
        pool: &'a FormulaPool,
        family: &BTreeSet<Universe>,
        oracle: &'a ClassOracle,
    ) -> MhCtx<'a> {
        let fam: Vec<Universe> = family.iter().cloned().collect();
        let mut by_carrier: BTreeMap<&HFSet, Vec<usize>> = BTreeMap::new();
        for (i, q) in fam.iter().enumerate() {
            by_carrier.entry(q.carrier()).or_default().push(i);
        }
        let mut targets = Vec::with_capacity(fam.len());
        for p in &fam {
            let mut t: Vec<usize> = Vec::new();
            for e in p.carrier().elems() {
                if let Some(is) = by_carrier.get(e) {
                    t.extend(is.iter().copied());
                }
            }
            t.sort_unstable();
            targets.push(t);
        }
        let mut top = bits_new(fam.len());
        for (i, q) in fam.iter().enumerate() {
            if cfg.m_top.contains(q) {
                bit_set(&mut top, i);
            }
        }
        let per_u = fam.iter().map(|_| None).collect();
        MhCtx { cfg, pool, oracle, fam, top, targets, per_u }
    }

    fn to_universes(&self, bits: &Bits) -> BTreeSet<Universe> {
        self.fam
            .iter()
            .enumerate()
            .filter(|(i, _)| bit_get(bits, *i))
            .map(|(_, p)| p.clone())
            .collect()
    }

    fn ensure_insts(&mut self, pi: usize) {
        if self.per_u[pi].is_none() {
            let insts: Vec<(LevyClass, Formula)> = self
                .pool
                .instances(&self.fam[pi])
                .into_iter()
                .map(|f| (classify(&f), f))
                .collect();
            let n = insts.len();
            self.per_u[pi] = Some(UnivInsts {
                insts,
                at_self: vec![None; n],
                at_targets: vec![None; n],
            });
        }
    }

    fn eval_at_self(&mut self, pi: usize, ii: usize) -> Result<bool, LogicError> {
        let rec = self.per_u[pi].as_mut().expect("instances are prepared");
        if rec.at_self[ii].is_none() {
            let f = rec.insts[ii].1.clone();
            let got = eval(&f, &self.fam[pi], self.oracle);
            self.per_u[pi].as_mut().expect("instances are prepared").at_self[ii] = Some(got);
        }
        self.per_u[pi].as_ref().expect("instances are prepared").at_self[ii]
            .clone()
            .expect("just filled")
    }

    fn eval_at_targets(&mut self, pi: usize, ii: usize) -> Vec<bool> {
        let rec = self.per_u[pi].as_ref().expect("instances are prepared");
        if let Some(v) = &rec.at_targets[ii] {
            return v.clone();
        }
        let f = rec.insts[ii].1.clone();
        let got: Vec<bool> = self.targets[pi]
            .iter()
            .map(|&qi| eval(&f, &self.fam[qi], self.oracle).unwrap_or(false))
            .collect();
        self.per_u[pi].as_mut().expect("instances are prepared").at_targets[ii] =
            Some(got.clone());
        got
    }

    /// One reflection step for a single universe, matching `m_op` on the
    /// singleton family: every true capped instance must hold in some
    /// target inside `x`.
    fn survives(&mut self, level: u32, pi: usize, x: &Bits) -> Result<bool, ReflError> {
        self.ensure_insts(pi);
        let cap = LevyClass::Pi(level + 1);
        let n = self.per_u[pi].as_ref().expect("instances are prepared").insts.len();
        for ii in 0..n {
            let cls = self.per_u[pi].as_ref().expect("instances are prepared").insts[ii].0;
            if !cls.le(cap) {
                continue;
            }
            if !self.eval_at_self(pi, ii)? {
                continue;
            }
            let wits = self.eval_at_targets(pi, ii);
            let reflected = self.targets[pi]
                .iter()
                .zip(&wits)
                .any(|(&qi, &w)| w && bit_get(x, qi));
            if !reflected {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn mh_bits(
    level: u32,
    alpha: &OrdVec,
    ctx: &mut MhCtx,
    memo: &mut BTreeMap<(u32, OrdVec), Bits>,
) -> Result<Bits, ReflError> {
    let want = ctx.cfg.n.saturating_sub(level) as usize;
    if level > ctx.cfg.n || alpha.len() != want {
        return Err(ReflError::IndexShape {
            level,
            top: ctx.cfg.n,
            got: alpha.len(),
            want,
        });
    }
    let key = (level, alpha.clone());
    if let Some(v) = memo.get(&key) {
        return Ok(v.clone());
    }
    if level == ctx.cfg.n {
        memo.insert(key, ctx.top.clone());
        return Ok(ctx.top.clone());
    }
    let mut out = bits_new(ctx.fam.len());
    'family: for pi in 0..ctx.fam.len() {
        for e in alpha.entries() {
            if let Some(nat) = e.as_nat() {
                if !numeral_in(ctx.fam[pi].carrier(), &nat) {
                    continue 'family;
                }
            }
        }
        for beta in candidate_vectors(alpha, &ctx.fam[pi], ctx.cfg) {
            let rows = bullet(&beta, alpha).expect("equal lengths");
            let mut x: Option<Bits> = None;
            for (j, row) in rows.rows().iter().enumerate() {
                let cls = mh_bits(level + j as u32, row, ctx, memo)?;
                x = Some(match x {
                    None => cls,
                    Some(mut prev) => {
                        bits_and(&mut prev, &cls);
                        prev
                    }
                });
            }
            let x = x.expect("alpha is nonempty below the top level");
            if !ctx.survives(level, pi, &x)? {
                continue 'family;
            }
        }
        bit_set(&mut out, pi);
    }
    memo.insert(key, out.clone());
    Ok(out)
}

/// Vectors strictly below `alpha` drawn from the candidate ordinals whose
/// numerals are members of `p`.
fn candidate_vectors(alpha: &OrdVec, p: &Universe, cfg: &MhConfig) -> Vec<OrdVec> {
    let mut per_slot: Vec<Vec<OrdTerm>> = Vec::with_capacity(alpha.len());
    for a in alpha.entries() {
        let cands: Vec<OrdTerm> = cfg
            .ord_universe
            .iter()
            .filter(|t| *t < a)
            .filter(|t| match t.as_nat() {
                Some(nat) => numeral_in(p.carrier(), &nat),
                None => false,
            })
            .cloned()
            .collect();
        if cands.is_empty() {
            return vec![];
        }
        per_slot.push(cands);
    }
    let mut acc: Vec<Vec<OrdTerm>> = vec![vec![]];
    for slot in &per_slot {
        let mut next = Vec::with_capacity(acc.len() * slot.len());
        for prefix in &acc {
            for t in slot {
                let mut v = prefix.clone();
                v.push(t.clone());
                next.push(v);
            }
        }
        acc = next;
    }
    acc.into_iter()
        .map(|entries| OrdVec::new(entries).expect("candidates are below L"))
        .collect()
}
