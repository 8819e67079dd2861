//! Hereditarily finite sets and the finite universes built from them.
//!
//! Sets are kept in a canonical form (elements sorted and deduplicated, all
//! the way down), so structural equality is extensional equality and sets can
//! live in ordered containers.  A `Universe` is a nonempty transitive carrier
//! that also contains the von Neumann numeral of every member's rank; that
//! closure condition is what makes rank talk inside a universe meaningful.
//! Universes carry a `Budget` saying which ordinal annotations they are
//! willing to admit in derivations.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::ord::{Cursor, OrdTerm};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HfError {
    #[error("carrier is empty")]
    EmptyCarrier,
    #[error("carrier is not transitive: {0} has a member outside")]
    NotTransitive(String),
    #[error("carrier is not rank closed: missing numeral for rank of {0}")]
    NotRankClosed(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// A hereditarily finite set in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct HFSet {
    elems: Vec<HFSet>,
}

impl HFSet {
    pub fn empty() -> HFSet {
        HFSet { elems: vec![] }
    }

    /// Canonicalize: sort and drop duplicates.  Inputs are already canonical
    /// HFSet values, so one pass suffices.
    pub fn new(mut elems: Vec<HFSet>) -> HFSet {
        elems.sort();
        elems.dedup();
        HFSet { elems }
    }

    pub fn singleton(x: HFSet) -> HFSet {
        HFSet { elems: vec![x] }
    }

    pub fn elems(&self) -> &[HFSet] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, x: &HFSet) -> bool {
        self.elems.binary_search(x).is_ok()
    }

    pub fn is_subset(&self, other: &HFSet) -> bool {
        self.elems.iter().all(|e| other.contains(e))
    }

    pub fn insert(&self, x: HFSet) -> HFSet {
        let mut elems = self.elems.clone();
        elems.push(x);
        HFSet::new(elems)
    }

    pub fn union(&self, other: &HFSet) -> HFSet {
        let mut elems = self.elems.clone();
        elems.extend(other.elems.iter().cloned());
        HFSet::new(elems)
    }

    pub fn rank(&self) -> usize {
        self.elems.iter().map(|e| e.rank() + 1).max().unwrap_or(0)
    }

    /// All sets reachable by membership chains from `self` (not including
    /// `self` unless it reaches itself, which well-foundedness forbids).
    pub fn transitive_closure(&self) -> HFSet {
        let mut seen: BTreeSet<HFSet> = BTreeSet::new();
        let mut stack: Vec<&HFSet> = self.elems.iter().collect();
        while let Some(x) = stack.pop() {
            if seen.insert(x.clone()) {
                stack.extend(x.elems.iter());
            }
        }
        HFSet { elems: seen.into_iter().collect() }
    }

    pub fn is_transitive(&self) -> bool {
        self.elems.iter().all(|x| x.is_subset(self))
    }
}

/// The von Neumann numeral for `n`.
pub fn von_neumann(n: usize) -> HFSet {
    let mut v = HFSet::empty();
    for _ in 0..n {
        let next = v.insert(v.clone());
        v = next;
    }
    v
}

/// Whether the numeral for `n` is a member of `carrier`.  A transitive set
/// containing the numeral for `n` has more than `n` members, so oversized
/// `n` is rejected without building anything.
pub(crate) fn numeral_in(carrier: &HFSet, n: &num_bigint::BigUint) -> bool {
    let n: usize = match n.try_into() {
        Ok(n) => n,
        Err(_) => return false,
    };
    n < carrier.len() && carrier.contains(&von_neumann(n))
}

/// Inverse of `von_neumann`, when the set is a numeral.
pub fn as_von_neumann(s: &HFSet) -> Option<usize> {
    let n = s.len();
    if *s == von_neumann(n) {
        Some(n)
    } else {
        None
    }
}

/// The cumulative stage `V_n`: empty at 0, powerset at each step.
/// Sizes explode (`|V_5|` is 65536), so anything past 5 is refused.
pub fn cumulative_stage(n: u32) -> Result<HFSet, HfError> {
    if n > 5 {
        return Err(HfError::BudgetExceeded(format!("stage {n} is astronomically large")));
    }
    let mut v = HFSet::empty();
    for _ in 0..n {
        v = powerset(&v);
    }
    Ok(v)
}

fn powerset(s: &HFSet) -> HFSet {
    let mut subsets = vec![HFSet::empty()];
    for e in &s.elems {
        let mut grown: Vec<HFSet> = subsets.iter().map(|t| t.insert(e.clone())).collect();
        subsets.append(&mut grown);
    }
    HFSet::new(subsets)
}

/// Which ordinal annotations a universe admits.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Budget {
    All,
    MaxSize(usize),
}

impl Budget {
    pub fn admits(&self, t: &OrdTerm) -> bool {
        match self {
            Budget::All => true,
            Budget::MaxSize(s) => t.size() <= *s,
        }
    }
}

/// A nonempty transitive rank-closed carrier with an ordinal budget.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Universe {
    carrier: HFSet,
    budget: Budget,
}

impl Universe {
    pub fn new(carrier: HFSet, budget: Budget) -> Result<Universe, HfError> {
        if carrier.is_empty() {
            return Err(HfError::EmptyCarrier);
        }
        for x in carrier.elems() {
            if !x.is_subset(&carrier) {
                return Err(HfError::NotTransitive(x.to_string()));
            }
        }
        for x in carrier.elems() {
            if !carrier.contains(&von_neumann(x.rank())) {
                return Err(HfError::NotRankClosed(x.to_string()));
            }
        }
        Ok(Universe { carrier, budget })
    }

    pub fn carrier(&self) -> &HFSet {
        &self.carrier
    }

    pub fn budget(&self) -> &Budget {
        &self.budget
    }

    /// The least universe extending this one whose carrier contains `iota`.
    /// Closes under members and rank numerals until nothing new appears.
    pub fn extend(&self, iota: &HFSet) -> Universe {
        let mut out: BTreeSet<HFSet> = self.carrier.elems().iter().cloned().collect();
        let mut work: Vec<HFSet> = vec![iota.clone()];
        while let Some(x) = work.pop() {
            if out.contains(&x) {
                continue;
            }
            work.extend(x.elems().iter().cloned());
            work.push(von_neumann(x.rank()));
            out.insert(x);
        }
        Universe {
            carrier: HFSet { elems: out.into_iter().collect() },
            budget: self.budget.clone(),
        }
    }
}

/// Every universe whose carrier is a subset of the stage `V_n`, with the
/// unrestricted budget.  Exhaustive bitmask sweep over the stage, which caps
/// `n` at 4: the count of qualifying carriers inside `V_5` already has tens
/// of thousands of digits.
pub fn enumerate_transitive(n: u32) -> Result<Vec<Universe>, HfError> {
    if n > 4 {
        return Err(HfError::BudgetExceeded(format!(
            "enumeration inside stage {n} is astronomically large"
        )));
    }
    let stage = cumulative_stage(n)?;
    let elems = stage.elems();
    let m = elems.len();
    // member sets and rank numerals as masks over the stage
    let idx_of = |x: &HFSet| elems.binary_search(x).expect("stages are transitive");
    let mut member_mask = vec![0u32; m];
    let mut rank_bit = vec![0u32; m];
    for (i, x) in elems.iter().enumerate() {
        for y in x.elems() {
            member_mask[i] |= 1 << idx_of(y);
        }
        rank_bit[i] = 1 << idx_of(&von_neumann(x.rank()));
    }
    let mut out = Vec::new();
    for mask in 1u32..(1u32 << m) {
        let ok = (0..m).all(|i| {
            mask & (1 << i) == 0 || (member_mask[i] & !mask == 0 && rank_bit[i] & mask != 0)
        });
        if ok {
            let carrier = HFSet {
                elems: elems
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, x)| x.clone())
                    .collect(),
            };
            out.push(Universe { carrier, budget: Budget::All });
        }
    }
    Ok(out)
}

impl fmt::Display for HFSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elems.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", e)?;
        }
        write!(f, "}}")
    }
}

pub(crate) fn parse_hf_at(cur: &mut Cursor<'_>) -> Result<HFSet, HfError> {
    match cur.peek() {
        Some(b'#') => {
            cur.pos += 1;
            let n = cur
                .nat()
                .map_err(|_| HfError::Parse { pos: cur.pos, msg: "expected a number after '#'".into() })?;
            let n: usize = n
                .try_into()
                .map_err(|_| HfError::Parse { pos: cur.pos, msg: "numeral too large".into() })?;
            if n > 64 {
                return Err(HfError::Parse { pos: cur.pos, msg: "numeral too large".into() });
            }
            Ok(von_neumann(n))
        }
        Some(b'{') => {
            cur.pos += 1;
            let mut elems = Vec::new();
            if cur.eat(b'}') {
                return Ok(HFSet::empty());
            }
            loop {
                elems.push(parse_hf_at(cur)?);
                if cur.eat(b'}') {
                    break;
                }
                if !cur.eat(b',') {
                    return Err(HfError::Parse { pos: cur.pos, msg: "expected ',' or '}'".into() });
                }
            }
            Ok(HFSet::new(elems))
        }
        _ => Err(HfError::Parse { pos: cur.pos, msg: "expected '{' or '#'".into() }),
    }
}

impl FromStr for HFSet {
    type Err = HfError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cur = Cursor::new(s);
        let x = parse_hf_at(&mut cur)?;
        if !cur.at_end() {
            return Err(HfError::Parse { pos: cur.pos, msg: "trailing input".into() });
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(s: &str) -> HFSet {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_form_deduplicates() {
        let a = HFSet::new(vec![von_neumann(1), HFSet::empty(), von_neumann(1)]);
        assert_eq!(a.len(), 2);
        assert_eq!(a, h("{{},{{}}}"));
        assert_eq!(h("{{{}},{}}"), h("{{},{{}}}"));
    }

    #[test]
    fn numerals() {
        assert_eq!(von_neumann(0), HFSet::empty());
        assert_eq!(von_neumann(2), h("{{},{{}}}"));
        assert_eq!(h("#3"), h("{{},{{}},{{},{{}}}}"));
        assert_eq!(as_von_neumann(&von_neumann(5)), Some(5));
        assert_eq!(as_von_neumann(&h("{{{}}}")), None);
        assert_eq!(von_neumann(4).rank(), 4);
    }

    #[test]
    fn ranks() {
        assert_eq!(HFSet::empty().rank(), 0);
        assert_eq!(h("{{}}").rank(), 1);
        assert_eq!(h("{{{}}}").rank(), 2);
        assert_eq!(h("{{},{{}}}").rank(), 2);
    }

    #[test]
    fn transitive_closure_collects_reachables() {
        let a = h("{{{}}}");
        assert_eq!(a.transitive_closure(), h("{{},{{}}}"));
        assert!(HFSet::empty().transitive_closure().is_empty());
        let tc = von_neumann(3).transitive_closure();
        assert_eq!(tc, von_neumann(3));
    }

    #[test]
    fn stages() {
        assert_eq!(cumulative_stage(0).unwrap(), HFSet::empty());
        assert_eq!(cumulative_stage(2).unwrap(), h("{{},{{}}}"));
        assert_eq!(cumulative_stage(3).unwrap().len(), 4);
        assert_eq!(cumulative_stage(4).unwrap().len(), 16);
        assert!(cumulative_stage(6).is_err());
        assert!(cumulative_stage(4).unwrap().is_transitive());
    }

    #[test]
    fn universe_validation() {
        assert_eq!(Universe::new(HFSet::empty(), Budget::All), Err(HfError::EmptyCarrier));
        assert!(Universe::new(h("{{}}"), Budget::All).is_ok());
        // {{{}}} alone: member {{}} is missing, not transitive
        assert!(matches!(
            Universe::new(HFSet::singleton(h("{{}}")), Budget::All),
            Err(HfError::NotTransitive(_))
        ));
        // transitive but missing the numeral for rank 2
        assert!(matches!(
            Universe::new(h("{{},{{}},{{{}}}}"), Budget::All),
            Err(HfError::NotRankClosed(_))
        ));
        assert!(Universe::new(h("#3"), Budget::All).is_ok());
    }

    #[test]
    fn budgets() {
        // sizes count syntactic nodes: a natural number has three, each
        // omega layer adds two more
        let small = Budget::MaxSize(5);
        assert!(small.admits(&"7".parse().unwrap()));
        assert!(small.admits(&"w^(1)".parse().unwrap()));
        assert!(!small.admits(&"w^(w^(1))".parse().unwrap()));
        assert!(Budget::All.admits(&"w^(w^(w^(K+1)))*9".parse().unwrap()));
    }

    #[test]
    fn extension_is_a_closure() {
        let u = Universe::new(h("{{}}"), Budget::All).unwrap();
        let v = u.extend(&h("{{{}}}"));
        // must pull in the member {{}} and the numeral 2 for the rank
        assert!(v.carrier().contains(&h("{{{}}}")));
        assert!(v.carrier().contains(&h("{{}}")));
        assert!(v.carrier().contains(&von_neumann(2)));
        assert!(Universe::new(v.carrier().clone(), Budget::All).is_ok());
        // idempotent
        assert_eq!(v.extend(&h("{{{}}}")), v);
        // already-present element is a no-op
        assert_eq!(u.extend(&HFSet::empty()), u);
        // order of a pair of extensions does not matter
        let a = h("{{},{{}}}");
        let b = h("{{{}}}");
        assert_eq!(u.extend(&a).extend(&b), u.extend(&b).extend(&a));
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_transitive(0).unwrap().len(), 0);
        assert_eq!(enumerate_transitive(1).unwrap().len(), 1);
        assert_eq!(enumerate_transitive(2).unwrap().len(), 2);
        let u3 = enumerate_transitive(3).unwrap();
        assert_eq!(u3.len(), 4);
        for u in &u3 {
            assert!(Universe::new(u.carrier().clone(), Budget::All).is_ok());
        }
        assert!(enumerate_transitive(5).is_err());
    }

    #[test]
    fn enumeration_is_exhaustive_at_four() {
        let u4 = enumerate_transitive(4).unwrap();
        assert!(u4.len() > 4);
        let stage = cumulative_stage(4).unwrap();
        for u in &u4 {
            assert!(u.carrier().is_subset(&stage));
        }
        // distinct carriers
        let set: BTreeSet<_> = u4.iter().map(|u| u.carrier().clone()).collect();
        assert_eq!(set.len(), u4.len());
    }

    #[test]
    fn display_round_trip() {
        for s in ["{}", "{{}}", "{{},{{}}}", "{{},{{}},{{},{{}}}}"] {
            assert_eq!(h(s).to_string(), s);
            assert_eq!(h(s).to_string().parse::<HFSet>().unwrap(), h(s));
        }
        assert!(matches!("{".parse::<HFSet>(), Err(HfError::Parse { .. })));
        assert!(matches!("{},".parse::<HFSet>(), Err(HfError::Parse { .. })));
    }
}
