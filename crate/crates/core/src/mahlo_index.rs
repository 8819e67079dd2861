//! Index vectors and staircase matrices for ramified reflection.
//!
//! Reflection degrees are addressed by finite vectors of ordinals below `L`.
//! Two constructions matter: prepending a head entry (`star`) and pairing a
//! vector against a strictly larger one to produce a staircase matrix of
//! diagonal rows (`bullet`).  The `tower` encoding maps a vector to a single
//! ordinal so that the componentwise strict order embeds into the ordinal
//! order; this is what lets a single ordinal bound a whole vector-indexed
//! recursion.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::ord::{Cursor, OrdTerm};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IndexError {
    #[error("vector entry {0} is not below L")]
    EntryTooLarge(String),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("row {row} has length {got}, expected {want}")]
    RowShape { row: usize, got: usize, want: usize },
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// A finite vector of ordinal terms, every entry strictly below `L`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct OrdVec {
    entries: Vec<OrdTerm>,
}

impl OrdVec {
    pub fn new(entries: Vec<OrdTerm>) -> Result<OrdVec, IndexError> {
        let lambda = OrdTerm::lambda();
        for e in &entries {
            if *e >= lambda {
                return Err(IndexError::EntryTooLarge(e.to_string()));
            }
        }
        Ok(OrdVec { entries })
    }

    pub fn empty() -> OrdVec {
        OrdVec { entries: vec![] }
    }

    pub fn entries(&self) -> &[OrdTerm] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Nonempty and identically zero.  The zero vector is the base of the
    /// vector-indexed recursions; the empty vector is a different object.
    pub fn is_zero_vec(&self) -> bool {
        !self.entries.is_empty() && self.entries.iter().all(|e| e.is_zero())
    }
}

/// Componentwise strict comparison of equal-length vectors.
pub fn vec_lt(a: &OrdVec, b: &OrdVec) -> Result<bool, IndexError> {
    if a.len() != b.len() {
        return Err(IndexError::LengthMismatch(a.len(), b.len()));
    }
    Ok(a.entries.iter().zip(&b.entries).all(|(x, y)| x < y))
}

/// Prepend `head` to `v`.
pub fn star(head: &OrdTerm, v: &OrdVec) -> Result<OrdVec, IndexError> {
    let mut entries = Vec::with_capacity(v.len() + 1);
    entries.push(head.clone());
    entries.extend(v.entries.iter().cloned());
    OrdVec::new(entries)
}

/// Staircase matrix whose row `i` is `beta[i]` followed by the tail of
/// `alpha` after position `i`.  Both vectors must have the same length.
pub fn bullet(beta: &OrdVec, alpha: &OrdVec) -> Result<IndexMatrix, IndexError> {
    if beta.len() != alpha.len() {
        return Err(IndexError::LengthMismatch(beta.len(), alpha.len()));
    }
    let l = beta.len();
    let mut rows = Vec::with_capacity(l);
    for i in 0..l {
        let mut row = Vec::with_capacity(l - i);
        row.push(beta.entries[i].clone());
        row.extend(alpha.entries[i + 1..].iter().cloned());
        rows.push(OrdVec { entries: row });
    }
    IndexMatrix::from_rows(rows)
}

/// Collapse a vector to one ordinal, folding from the right:
/// the last entry seeds the accumulator `t`, and each earlier entry `a`
/// replaces it by `L^t * a`.  Strictly monotone for componentwise order
/// once every entry being stepped over is at least 1.
pub fn tower(v: &OrdVec) -> OrdTerm {
    let mut it = v.entries.iter().rev();
    let Some(last) = it.next() else {
        return OrdTerm::zero();
    };
    let mut t = last.clone();
    for a in it {
        t = lambda_pow(&t).mul(a);
    }
    t
}

/// `L^t` as an ordinal term: `w^(L*t)` for positive `t`, and 1 at zero.
fn lambda_pow(t: &OrdTerm) -> OrdTerm {
    if t.is_zero() {
        OrdTerm::one()
    } else {
        OrdTerm::lambda().mul(t).omega_pow()
    }
}

/// A staircase of rows with strictly shrinking lengths `R, R-1, ..., 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct IndexMatrix {
    rows: Vec<OrdVec>,
}

impl IndexMatrix {
    pub fn from_rows(rows: Vec<OrdVec>) -> Result<IndexMatrix, IndexError> {
        let r = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != r - i {
                return Err(IndexError::RowShape { row: i, got: row.len(), want: r - i });
            }
        }
        Ok(IndexMatrix { rows })
    }

    pub fn empty() -> IndexMatrix {
        IndexMatrix { rows: vec![] }
    }

    pub fn rows(&self) -> &[OrdVec] {
        &self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

impl fmt::Display for OrdVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", e)?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for IndexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if f.alternate() {
            // one row per line, for eyeballing staircases
            writeln!(f, "[")?;
            for row in &self.rows {
                writeln!(f, "  {row}")?;
            }
            write!(f, "]")
        } else {
            write!(f, "[")?;
            for (i, row) in self.rows.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{row}")?;
            }
            write!(f, "]")
        }
    }
}

fn term_err(e: crate::ord::TermError, fallback_pos: usize) -> IndexError {
    match e {
        crate::ord::TermError::Parse { pos, msg } => IndexError::Parse { pos, msg },
        other => IndexError::Parse { pos: fallback_pos, msg: other.to_string() },
    }
}

pub(crate) fn parse_vec_at(cur: &mut Cursor<'_>) -> Result<OrdVec, IndexError> {
    if !cur.eat(b'[') {
        return Err(IndexError::Parse { pos: cur.pos, msg: "expected '['".into() });
    }
    let mut entries = Vec::new();
    if cur.eat(b']') {
        return OrdVec::new(entries);
    }
    loop {
        let t = crate::ord::parse_term_at(cur).map_err(|e| term_err(e, cur.pos))?;
        entries.push(t);
        if cur.eat(b']') {
            break;
        }
        if !cur.eat(b',') {
            return Err(IndexError::Parse { pos: cur.pos, msg: "expected ',' or ']'".into() });
        }
    }
    OrdVec::new(entries)
}

impl FromStr for OrdVec {
    type Err = IndexError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cur = Cursor::new(s);
        let v = parse_vec_at(&mut cur)?;
        if !cur.at_end() {
            return Err(IndexError::Parse { pos: cur.pos, msg: "trailing input".into() });
        }
        Ok(v)
    }
}

pub(crate) fn parse_matrix_at(cur: &mut Cursor<'_>) -> Result<IndexMatrix, IndexError> {
    if !cur.eat(b'[') {
        return Err(IndexError::Parse { pos: cur.pos, msg: "expected '['".into() });
    }
    let mut rows = Vec::new();
    if cur.eat(b']') {
        return IndexMatrix::from_rows(rows);
    }
    loop {
        rows.push(parse_vec_at(cur)?);
        if cur.eat(b']') {
            break;
        }
        if !cur.eat(b',') {
            return Err(IndexError::Parse { pos: cur.pos, msg: "expected ',' or ']'".into() });
        }
    }
    IndexMatrix::from_rows(rows)
}

impl FromStr for IndexMatrix {
    type Err = IndexError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cur = Cursor::new(s);
        let m = parse_matrix_at(&mut cur)?;
        if !cur.at_end() {
            return Err(IndexError::Parse { pos: cur.pos, msg: "trailing input".into() });
        }
        Ok(m)
    }
}
