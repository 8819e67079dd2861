//! Shared fixtures for the integration suites: an independent
//! coefficient-list ordinal oracle below `w^w^w`, a memo-free evaluation of
//! the ramified reflection classes, seeded random generators for terms,
//! vectors and derivations, and a stock sequent-calculus configuration.

#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_traits::ToPrimitive;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use mahlo_core::{
    classify, cumulative_stage, decompose_in, dp, eval, negate, von_neumann, weaken, Budget,
    CalcConfig, ClassOracle, ClassRef, Derivation, Formula, FormulaPool, HFSet, LevyClass,
    MhConfig, OrdTerm, OrdVec, RuleTag, Sequent, Universe,
};

pub fn o(s: &str) -> OrdTerm {
    s.parse().unwrap()
}

pub fn ov(s: &str) -> OrdVec {
    s.parse().unwrap()
}

pub fn ff(s: &str) -> Formula {
    s.parse().unwrap()
}

pub fn hf(s: &str) -> HFSet {
    s.parse().unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The universe whose carrier is the cumulative stage `V_n`, with no budget.
pub fn stage_univ(n: u32) -> Universe {
    Universe::new(cumulative_stage(n).unwrap(), Budget::All).unwrap()
}

// ---------------------------------------------------------------------------
// coefficient-list ordinal oracle
//
// An ordinal below w^w is a finite list of natural coefficients indexed by
// exponent.  Addition absorbs everything in the left operand below the right
// operand's leading exponent; multiplication distributes over the right
// operand one monomial at a time.  Nothing here touches OrdTerm internals.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly(Vec<u64>);

impl Poly {
    pub fn new(mut coeffs: Vec<u64>) -> Poly {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn zero() -> Poly {
        Poly(Vec::new())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn deg(&self) -> usize {
        self.0.len() - 1
    }

    pub fn cmp_poly(&self, other: &Poly) -> Ordering {
        if self.0.len() != other.0.len() {
            return self.0.len().cmp(&other.0.len());
        }
        for (a, b) in self.0.iter().rev().zip(other.0.iter().rev()) {
            if a != b {
                return a.cmp(b);
            }
        }
        Ordering::Equal
    }

    pub fn add(&self, other: &Poly) -> Poly {
        if other.is_zero() {
            return self.clone();
        }
        let e = other.deg();
        let mut out = other.0.clone();
        if self.0.len() > e {
            out[e] += self.0[e];
            out.extend_from_slice(&self.0[e + 1..]);
        }
        Poly::new(out)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let da = self.deg();
        let mut acc = Poly::zero();
        for j in (0..other.0.len()).rev() {
            let c = other.0[j];
            if c == 0 {
                continue;
            }
            let part = if j > 0 {
                let mut v = vec![0; da + j + 1];
                v[da + j] = c;
                Poly::new(v)
            } else {
                let mut v = self.0.clone();
                v[da] *= c;
                Poly::new(v)
            };
            acc = acc.add(&part);
        }
        acc
    }

    pub fn to_term(&self) -> OrdTerm {
        let mut t = OrdTerm::zero();
        for j in (0..self.0.len()).rev() {
            if self.0[j] == 0 {
                continue;
            }
            let mono = OrdTerm::from_nat(j as u64).omega_pow().mul_nat(self.0[j]);
            t = t.add(&mono);
        }
        t
    }
}

/// Every coefficient list with exponents below `exps` and coefficients up to
/// `max_coeff`, zero included.
pub fn all_polys(exps: usize, max_coeff: u64) -> Vec<Poly> {
    let mut out = vec![Poly::zero()];
    for _ in 0..exps {
        let mut next = Vec::with_capacity(out.len() * (max_coeff as usize + 1));
        for p in &out {
            for c in 0..=max_coeff {
                let mut v = p.0.clone();
                v.insert(0, c);
                next.push(Poly::new(v));
            }
        }
        out = next;
    }
    out.sort_by(|a, b| a.cmp_poly(b));
    out.dedup();
    out
}

// ---------------------------------------------------------------------------
// memo-free reflection class oracle
//
// A direct recursive reading of the ramified class definition.  Nothing is
// memoized across recursive calls; within one call the staircase argument is
// computed once per distinct candidate vector.  The single-universe
// reflection step is reimplemented from the pool and plain evaluation.

fn numeral_member(carrier: &HFSet, t: &OrdTerm) -> Option<bool> {
    let n = t.as_nat()?.to_usize().expect("test entries are small");
    Some(carrier.contains(&von_neumann(n)))
}

fn oracle_candidates(alpha: &OrdVec, p: &Universe, cfg: &MhConfig) -> Vec<OrdVec> {
    let mut slots: Vec<Vec<OrdTerm>> = Vec::new();
    for a in alpha.entries() {
        let cands: Vec<OrdTerm> = cfg
            .ord_universe
            .iter()
            .filter(|t| *t < a && numeral_member(p.carrier(), t) == Some(true))
            .cloned()
            .collect();
        if cands.is_empty() {
            return Vec::new();
        }
        slots.push(cands);
    }
    let mut acc: Vec<Vec<OrdTerm>> = vec![Vec::new()];
    for slot in &slots {
        let mut next = Vec::new();
        for prefix in &acc {
            for t in slot {
                let mut v = prefix.clone();
                v.push(t.clone());
                next.push(v);
            }
        }
        acc = next;
    }
    acc.into_iter().map(|v| OrdVec::new(v).unwrap()).collect()
}

fn oracle_staircase(beta: &OrdVec, alpha: &OrdVec) -> Vec<OrdVec> {
    let l = beta.len();
    (0..l)
        .map(|i| {
            let mut row = vec![beta.entries()[i].clone()];
            row.extend(alpha.entries()[i + 1..].iter().cloned());
            OrdVec::new(row).unwrap()
        })
        .collect()
}

fn oracle_reflects(
    level: u32,
    p: &Universe,
    x: &BTreeSet<Universe>,
    pool: &FormulaPool,
    oracle: &ClassOracle,
) -> bool {
    let cap = LevyClass::Pi(level + 1);
    for inst in pool.instances(p) {
        if !classify(&inst).le(cap) {
            continue;
        }
        if eval(&inst, p, oracle).expect("instances are closed over the carrier") {
            let hit = x.iter().any(|q| {
                p.carrier().contains(q.carrier()) && eval(&inst, q, oracle).unwrap_or(false)
            });
            if !hit {
                return false;
            }
        }
    }
    true
}

pub fn oracle_mh(
    level: u32,
    alpha: &OrdVec,
    cfg: &MhConfig,
    pool: &FormulaPool,
    family: &BTreeSet<Universe>,
    oracle: &ClassOracle,
) -> BTreeSet<Universe> {
    if level == cfg.n {
        return cfg.m_top.intersection(family).cloned().collect();
    }
    let mut betas: BTreeSet<OrdVec> = BTreeSet::new();
    for p in family {
        betas.extend(oracle_candidates(alpha, p, cfg));
    }
    let mut staircases: Vec<(OrdVec, BTreeSet<Universe>)> = Vec::new();
    for beta in &betas {
        let mut x: Option<BTreeSet<Universe>> = None;
        for (j, row) in oracle_staircase(beta, alpha).iter().enumerate() {
            let cls = oracle_mh(level + j as u32, row, cfg, pool, family, oracle);
            x = Some(match x {
                None => cls,
                Some(prev) => prev.intersection(&cls).cloned().collect(),
            });
        }
        staircases.push((beta.clone(), x.expect("below the top level the index is nonempty")));
    }
    let lookup = |b: &OrdVec| {
        &staircases.iter().find(|(v, _)| v == b).expect("computed above").1
    };
    let mut out = BTreeSet::new();
    'family: for p in family {
        for e in alpha.entries() {
            if numeral_member(p.carrier(), e) == Some(false) {
                continue 'family;
            }
        }
        for beta in oracle_candidates(alpha, p, cfg) {
            if !oracle_reflects(level, p, lookup(&beta), pool, oracle) {
                continue 'family;
            }
        }
        out.insert(p.clone());
    }
    out
}

// ---------------------------------------------------------------------------
// random term and vector generators

/// A random normal-form term of bounded build depth, atoms included.
pub fn gen_term(r: &mut ChaCha8Rng, depth: u32) -> OrdTerm {
    if depth == 0 {
        return match r.gen_range(0..6) {
            0 => OrdTerm::zero(),
            1 | 2 => OrdTerm::from_nat(r.gen_range(1..6u64)),
            3 => OrdTerm::omega(),
            4 => OrdTerm::kappa(),
            _ => OrdTerm::lambda(),
        };
    }
    match r.gen_range(0..4) {
        0 => gen_term(r, depth - 1).omega_pow(),
        1 => gen_term(r, depth - 1).add(&gen_term(r, depth - 1)),
        2 => gen_term(r, depth - 1).mul(&gen_term(r, depth - 1)),
        _ => gen_term(r, depth - 1).mul_nat(r.gen_range(1..4u64)),
    }
}

/// A random term guaranteed below `L`: built without the `L` atom.
pub fn gen_term_no_lambda(r: &mut ChaCha8Rng, depth: u32) -> OrdTerm {
    if depth == 0 {
        return match r.gen_range(0..5) {
            0 => OrdTerm::zero(),
            1 | 2 => OrdTerm::from_nat(r.gen_range(1..6u64)),
            3 => OrdTerm::omega(),
            _ => OrdTerm::kappa(),
        };
    }
    match r.gen_range(0..4) {
        0 => gen_term_no_lambda(r, depth - 1).omega_pow(),
        1 => gen_term_no_lambda(r, depth - 1).add(&gen_term_no_lambda(r, depth - 1)),
        2 => gen_term_no_lambda(r, depth - 1).mul(&gen_term_no_lambda(r, depth - 1)),
        _ => gen_term_no_lambda(r, depth - 1).mul_nat(r.gen_range(1..4u64)),
    }
}

fn gen_positive_no_lambda(r: &mut ChaCha8Rng, depth: u32) -> OrdTerm {
    let t = gen_term_no_lambda(r, depth);
    if t.is_zero() {
        OrdTerm::from_nat(r.gen_range(1..4u64))
    } else {
        t
    }
}

/// A strictly dominated pair of all-positive vectors of the given length.
pub fn gen_vec_pair_lt(r: &mut ChaCha8Rng, len: usize) -> (OrdVec, OrdVec) {
    let mut lo = Vec::with_capacity(len);
    let mut hi = Vec::with_capacity(len);
    for _ in 0..len {
        let (db, da) = (r.gen_range(0..3), r.gen_range(0..3));
        let b = gen_positive_no_lambda(r, db);
        let a = b.add(&gen_positive_no_lambda(r, da));
        lo.push(b);
        hi.push(a);
    }
    (OrdVec::new(lo).unwrap(), OrdVec::new(hi).unwrap())
}

/// A random vector with entries below `L`.
pub fn gen_vec(r: &mut ChaCha8Rng, len: usize) -> OrdVec {
    let entries = (0..len)
        .map(|_| {
            let d = r.gen_range(0..3);
            gen_term_no_lambda(r, d)
        })
        .collect();
    OrdVec::new(entries).unwrap()
}

// ---------------------------------------------------------------------------
// derivation generators
//
// Trees are grown bottom-up from true level-0 leaves; every growth step
// produces premises by weakening the current tree, so validity is kept by
// construction.  The default configuration works over the stage-4 carrier
// at scale 2, level 0, with a two-entry staircase oracle.

pub fn test_oracle() -> ClassOracle {
    let mut oracle = ClassOracle::new();
    let u2 = Universe::new(cumulative_stage(2).unwrap(), Budget::All).unwrap();
    let u3 = Universe::new(cumulative_stage(3).unwrap(), Budget::All).unwrap();
    oracle.insert(ClassRef::Mh { k: 1, index: ov("[0]") }, BTreeSet::from([u2.clone()]));
    oracle.insert(ClassRef::Mh { k: 1, index: ov("[1]") }, BTreeSet::from([u2, u3]));
    oracle
}

pub fn test_config() -> CalcConfig {
    CalcConfig::new(2, 0, ov("[2]"), test_oracle(), stage_univ(4)).unwrap()
}

/// The same configuration with a root budget tight enough to refuse tall
/// exponential towers.
pub fn budgeted_config() -> CalcConfig {
    let root = Universe::new(cumulative_stage(4).unwrap(), Budget::MaxSize(48)).unwrap();
    CalcConfig::new(2, 0, ov("[2]"), test_oracle(), root).unwrap()
}

/// Level-0 sentences that hold in every stage universe.
fn true_leaf_catalog() -> Vec<Formula> {
    vec![
        ff("(in {} {{}})"),
        ff("(notin {{}} {})"),
        ff("(in {} #2)"),
        ff("(forall-in x {} (in x x))"),
    ]
}

/// Growth formulas above level 0 that decompose disjunctively: unbounded
/// existentials spread over the root carrier, and a disjunction whose left
/// half keeps the whole formula above level 0.
fn or_catalog() -> Vec<Formula> {
    vec![
        ff("(exists x (in {} x))"),
        ff("(exists x (in x #3))"),
        ff("(exists x (notin x {}))"),
        ff("(or (exists x (in x #1)) (in {} #1))"),
    ]
}

/// Growth formulas above level 0 that decompose conjunctively.  The binary
/// conjunctions stay narrow; the universal fans out over the whole carrier.
fn and_catalog() -> Vec<Formula> {
    vec![
        ff("(and (exists x (in x #1)) (in {} #1))"),
        ff("(and (in {} #2) (forall y (notin y {})))"),
        ff("(forall x (notin x x))"),
    ]
}

/// Cut formulas keyed by degree.  Degree 0 entries are level 0, the rest
/// alternate existential and universal shapes.
pub fn cut_catalog(degree: u32) -> Vec<Formula> {
    match degree {
        0 => vec![ff("(in {} #1)"), ff("(in #2 {})"), ff("(notin #1 #2)")],
        1 => vec![
            ff("(exists x (in #1 x))"),
            ff("(forall x (notin x {}))"),
            ff("(exists x (notin x #2))"),
        ],
        _ => vec![
            ff("(exists x (forall y (notin y x)))"),
            ff("(forall x (exists y (in x y)))"),
        ],
    }
}

pub fn leaf(cfg: &CalcConfig, r: &mut ChaCha8Rng, rank: u32) -> Derivation {
    let cat = true_leaf_catalog();
    let pick = cat[r.gen_range(0..cat.len())].clone();
    Derivation {
        universe: cfg.root().clone(),
        ordinal: OrdTerm::zero(),
        rank,
        sequent: Sequent::from_formulas([pick]),
        rule: RuleTag::And,
        premises: Vec::new(),
    }
}

fn bump(a: &OrdTerm, b: &OrdTerm) -> OrdTerm {
    if a >= b { a.add_nat(1u64) } else { b.add_nat(1u64) }
}

/// Stack a disjunction introduction on top of `d`.
pub fn grow_or(cfg: &CalcConfig, r: &mut ChaCha8Rng, d: Derivation) -> Derivation {
    let cat = or_catalog();
    let g = cat[r.gen_range(0..cat.len())].clone();
    let dec = decompose_in(&g, cfg.root(), &d.universe, cfg.oracle()).unwrap();
    let (witness, part) = dec.parts[r.gen_range(0..dec.parts.len())].clone();
    let extra = Sequent::from_formulas([g.clone(), part]);
    let premise = weaken(&d, &d.ordinal.clone(), &extra).unwrap();
    Derivation {
        universe: d.universe.clone(),
        ordinal: premise.ordinal.add_nat(1u64),
        rank: d.rank,
        sequent: d.sequent.with(g),
        rule: RuleTag::Or { witness },
        premises: vec![premise],
    }
}

/// Stack a conjunction introduction on top of `d`, one premise per part.
pub fn grow_and(cfg: &CalcConfig, r: &mut ChaCha8Rng, d: Derivation) -> Derivation {
    let cat = and_catalog();
    let g = cat[r.gen_range(0..cat.len())].clone();
    let dec = decompose_in(&g, cfg.root(), &d.universe, cfg.oracle()).unwrap();
    let mut premises = Vec::with_capacity(dec.parts.len());
    let mut top = OrdTerm::zero();
    for (_, part) in &dec.parts {
        let extra = Sequent::from_formulas([g.clone(), part.clone()]);
        let p = weaken(&d, &d.ordinal.clone(), &extra).unwrap();
        if p.ordinal > top {
            top = p.ordinal.clone();
        }
        premises.push(p);
    }
    Derivation {
        universe: d.universe.clone(),
        ordinal: top.add_nat(1u64),
        rank: d.rank,
        sequent: d.sequent.with(g),
        rule: RuleTag::And,
        premises,
    }
}

/// Join two trees with a cut on `c`.
pub fn join_cut(d1: Derivation, d2: Derivation, c: &Formula) -> Derivation {
    let merged = d1.sequent.union(&d2.sequent);
    let left = weaken(&d1, &d1.ordinal.clone(), &merged.with(negate(c))).unwrap();
    let right = weaken(&d2, &d2.ordinal.clone(), &merged.with(c.clone())).unwrap();
    Derivation {
        universe: d1.universe.clone(),
        ordinal: bump(&left.ordinal, &right.ordinal),
        rank: d1.rank,
        sequent: merged,
        rule: RuleTag::Cut { formula: c.clone() },
        premises: vec![left, right],
    }
}

/// Grow a valid derivation of the given rank with at most `max_nodes` nodes.
/// When `top_cut_degree` is set, the root becomes a cut on a formula of that
/// exact degree, which must lie strictly below the rank.
pub fn gen_derivation(
    cfg: &CalcConfig,
    r: &mut ChaCha8Rng,
    rank: u32,
    max_nodes: usize,
    top_cut_degree: Option<u32>,
) -> Derivation {
    let budget = if top_cut_degree.is_some() {
        (max_nodes / 2).saturating_sub(2).max(1)
    } else {
        max_nodes
    };
    let mut d = leaf(cfg, r, rank);
    for _ in 0..r.gen_range(1..6) {
        let next = match r.gen_range(0..4) {
            0 => grow_and(cfg, r, d.clone()),
            1 | 2 => grow_or(cfg, r, d.clone()),
            _ => {
                let cat = cut_catalog(r.gen_range(0..rank.max(1)));
                let c = cat[r.gen_range(0..cat.len())].clone();
                if dp(&c) >= rank {
                    d.clone()
                } else {
                    join_cut(d.clone(), leaf(cfg, r, rank), &c)
                }
            }
        };
        if next.node_count() > budget {
            break;
        }
        d = next;
    }
    if let Some(deg) = top_cut_degree {
        assert!(deg < rank, "a forced cut must respect the rank");
        let cat = cut_catalog(deg);
        let c = cat[r.gen_range(0..cat.len())].clone();
        let mut other = leaf(cfg, r, rank);
        if r.gen_bool(0.5) {
            other = grow_or(cfg, r, other);
        }
        d = join_cut(d, other, &c);
    }
    d
}

/// Cut formulas for reduction, chosen so that neither the formula nor its
/// negation can ever be introduced by a rule inside a generated tree;
/// stripping and inversion then never collide with an inner rule.
fn reduce_cut_catalog(degree: u32) -> Vec<Formula> {
    match degree {
        0 => vec![ff("(in #1 #3)"), ff("(in #3 #1)"), ff("(notin #3 #2)")],
        _ => vec![
            ff("(exists x (in #2 x))"),
            ff("(exists x (notin x #3))"),
            ff("(exists x (and (in x #3) (notin x #1)))"),
        ],
    }
}

/// A pair of same-rank derivations fit for cut reduction: the first proves
/// its sequent with the negation, the second with the formula itself, and
/// half of the time the second introduces the formula disjunctively at its
/// root rather than by weakening.
pub fn gen_reduce_pair(
    cfg: &CalcConfig,
    r: &mut ChaCha8Rng,
    rank: u32,
) -> (Derivation, Derivation, Formula) {
    let degree = r.gen_range(0..=rank.min(1));
    let cat = reduce_cut_catalog(degree);
    let c = cat[r.gen_range(0..cat.len())].clone();
    let base1 = gen_derivation(cfg, r, rank, 12, None);
    let d1 = weaken(&base1, &base1.ordinal.clone(), &base1.sequent.with(negate(&c))).unwrap();
    let base2 = gen_derivation(cfg, r, rank, 12, None);
    let principal = dp(&c) > 0 && r.gen_bool(0.5);
    let d2 = if principal {
        let dec = decompose_in(&c, cfg.root(), &base2.universe, cfg.oracle()).unwrap();
        let (witness, part) = dec.parts[r.gen_range(0..dec.parts.len())].clone();
        let extra = Sequent::from_formulas([c.clone(), part]);
        let premise = weaken(&base2, &base2.ordinal.clone(), &extra).unwrap();
        Derivation {
            universe: base2.universe.clone(),
            ordinal: premise.ordinal.add_nat(1u64),
            rank,
            sequent: base2.sequent.with(c.clone()),
            rule: RuleTag::Or { witness },
            premises: vec![premise],
        }
    } else {
        weaken(&base2, &base2.ordinal.clone(), &base2.sequent.with(c.clone())).unwrap()
    };
    (d1, d2, c)
}
