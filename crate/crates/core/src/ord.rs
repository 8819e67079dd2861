//! Ordinal notations in Cantor normal form.
//!
//! A term is a finite sum `w^(e_1)*c_1 + ... + w^(e_m)*c_m` with strictly
//! decreasing exponents and positive integer coefficients.  Two constants are
//! built in: `K`, a distinguished epsilon number standing for the order type
//! of the class of ordinals as seen from inside a universe, and `L`, the next
//! epsilon number above it.  Both are fixed points of base-omega
//! exponentiation (`w^(K) = K`, `w^(L) = L`), so the smart constructor for
//! `w^(_)` collapses them and every value has exactly one representation.
//! Sums, products and towers of these terms stay below the next epsilon
//! number after `L`, which is the ceiling of this notation system.
//!
//! Coefficients are arbitrary-precision naturals; repeated cut elimination
//! doubles additive bounds often enough that fixed-width counters are a trap.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TermError {
    #[error("coefficient must be positive")]
    NonPositiveCoefficient,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// Additively indecomposable part of a monomial.
///
/// `Omega(e)` is `w^(e)` where `e` is itself a normal term distinct from the
/// two epsilon constants; those appear as their own heads.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Head {
    Omega(OrdTerm),
    Kappa,
    Lambda,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Monomial {
    head: Head,
    coeff: BigUint,
}

/// An ordinal notation in normal form.  The empty sum is zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct OrdTerm {
    monomials: Vec<Monomial>,
}

impl Head {
    /// The exponent this head carries: comparing heads is comparing exponents,
    /// since base-omega exponentiation is strictly monotone.
    fn exponent(&self) -> OrdTerm {
        match self {
            Head::Omega(e) => e.clone(),
            Head::Kappa => OrdTerm::kappa(),
            Head::Lambda => OrdTerm::lambda(),
        }
    }

    fn cmp(&self, other: &Head) -> Ordering {
        match (self, other) {
            (Head::Kappa, Head::Kappa) | (Head::Lambda, Head::Lambda) => Ordering::Equal,
            (Head::Kappa, Head::Lambda) => Ordering::Less,
            (Head::Lambda, Head::Kappa) => Ordering::Greater,
            (Head::Omega(a), Head::Omega(b)) => a.cmp(b),
            (Head::Omega(a), _) => a.cmp(&other.exponent()),
            (_, Head::Omega(b)) => self.exponent().cmp(b),
        }
    }
}

impl OrdTerm {
    pub fn zero() -> OrdTerm {
        OrdTerm { monomials: vec![] }
    }

    pub fn one() -> OrdTerm {
        OrdTerm::from_nat(1u32)
    }

    pub fn omega() -> OrdTerm {
        OrdTerm::one().omega_pow()
    }

    /// The constant `K`.
    pub fn kappa() -> OrdTerm {
        OrdTerm {
            monomials: vec![Monomial { head: Head::Kappa, coeff: BigUint::one() }],
        }
    }

    /// The constant `L`, the next epsilon number above `K`.
    pub fn lambda() -> OrdTerm {
        OrdTerm {
            monomials: vec![Monomial { head: Head::Lambda, coeff: BigUint::one() }],
        }
    }

    pub fn from_nat<N: Into<BigUint>>(n: N) -> OrdTerm {
        let n: BigUint = n.into();
        if n.is_zero() {
            OrdTerm::zero()
        } else {
            OrdTerm {
                monomials: vec![Monomial { head: Head::Omega(OrdTerm::zero()), coeff: n }],
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    /// The value as a natural number, when the term is below omega.
    pub fn as_nat(&self) -> Option<BigUint> {
        match self.monomials.as_slice() {
            [] => Some(BigUint::zero()),
            [m] if matches!(&m.head, Head::Omega(e) if e.is_zero()) => Some(m.coeff.clone()),
            _ => None,
        }
    }

    pub fn is_kappa(&self) -> bool {
        matches!(self.monomials.as_slice(), [m] if m.head == Head::Kappa && m.coeff.is_one())
    }

    pub fn is_lambda(&self) -> bool {
        matches!(self.monomials.as_slice(), [m] if m.head == Head::Lambda && m.coeff.is_one())
    }

    /// Number of syntactic nodes; the unit for size budgets.
    pub fn size(&self) -> usize {
        1 + self
            .monomials
            .iter()
            .map(|m| match &m.head {
                Head::Omega(e) => 1 + e.size(),
                Head::Kappa | Head::Lambda => 1,
            })
            .sum::<usize>()
    }

    fn lead(&self) -> Option<&Monomial> {
        self.monomials.first()
    }

    /// `w^(self)`, collapsing the two epsilon fixed points.
    pub fn omega_pow(&self) -> OrdTerm {
        if self.is_kappa() {
            OrdTerm::kappa()
        } else if self.is_lambda() {
            OrdTerm::lambda()
        } else {
            OrdTerm {
                monomials: vec![Monomial { head: Head::Omega(self.clone()), coeff: BigUint::one() }],
            }
        }
    }

    /// Ordinal sum.  Everything in the left argument strictly below the
    /// leading exponent of the right argument is absorbed.
    pub fn add(&self, rhs: &OrdTerm) -> OrdTerm {
        let Some(lead) = rhs.lead() else {
            return self.clone();
        };
        let mut out: Vec<Monomial> = Vec::with_capacity(self.monomials.len() + rhs.monomials.len());
        let mut merged = false;
        for m in &self.monomials {
            match m.head.cmp(&lead.head) {
                Ordering::Greater => out.push(m.clone()),
                Ordering::Equal => {
                    let mut first = lead.clone();
                    first.coeff += &m.coeff;
                    out.push(first);
                    merged = true;
                    break;
                }
                Ordering::Less => break,
            }
        }
        if !merged {
            out.push(lead.clone());
        }
        out.extend(rhs.monomials[1..].iter().cloned());
        OrdTerm { monomials: out }
    }

    /// Ordinal product, distributing over the right argument.
    pub fn mul(&self, rhs: &OrdTerm) -> OrdTerm {
        if self.is_zero() || rhs.is_zero() {
            return OrdTerm::zero();
        }
        let lead_exp = self.monomials[0].head.exponent();
        let mut acc = OrdTerm::zero();
        for m in &rhs.monomials {
            let part = if matches!(&m.head, Head::Omega(e) if e.is_zero()) {
                // finite factor: scale the leading coefficient, keep the tail
                let mut ms = self.monomials.clone();
                ms[0].coeff = &ms[0].coeff * &m.coeff;
                OrdTerm { monomials: ms }
            } else {
                let e = lead_exp.add(&m.head.exponent());
                let mut p = e.omega_pow();
                p.monomials[0].coeff = m.coeff.clone();
                p
            };
            acc = acc.add(&part);
        }
        acc
    }

    pub fn mul_nat<N: Into<BigUint>>(&self, n: N) -> OrdTerm {
        self.mul(&OrdTerm::from_nat(n))
    }

    /// Successor-style convenience: `self + n`.
    pub fn add_nat<N: Into<BigUint>>(&self, n: N) -> OrdTerm {
        self.add(&OrdTerm::from_nat(n))
    }

    /// Iterated exponential: `omega_tower(0, a) = a`,
    /// `omega_tower(n+1, a) = w^(omega_tower(n, a))`.
    pub fn omega_tower(n: u32, a: &OrdTerm) -> OrdTerm {
        let mut t = a.clone();
        for _ in 0..n {
            t = t.omega_pow();
        }
        t
    }

    /// Faithful raw image of a normal term; normalizing it gives the term back.
    pub fn to_raw(&self) -> RawTerm {
        let mut parts: Vec<RawTerm> = self
            .monomials
            .iter()
            .map(|m| match &m.head {
                Head::Omega(e) if e.is_zero() => RawTerm::Nat(m.coeff.clone()),
                Head::Omega(e) => {
                    let p = RawTerm::OmegaPow(Box::new(e.to_raw()));
                    scale(p, &m.coeff)
                }
                Head::Kappa => scale(RawTerm::Kappa, &m.coeff),
                Head::Lambda => scale(RawTerm::Lambda, &m.coeff),
            })
            .collect();
        match parts.len() {
            0 => RawTerm::Zero,
            1 => parts.pop().unwrap(),
            _ => {
                let mut it = parts.into_iter();
                let first = it.next().unwrap();
                it.fold(first, |a, b| RawTerm::Add(Box::new(a), Box::new(b)))
            }
        }
    }
}

fn scale(t: RawTerm, c: &BigUint) -> RawTerm {
    if c.is_one() {
        t
    } else {
        RawTerm::MulNat(Box::new(t), c.clone())
    }
}

impl Ord for OrdTerm {
    fn cmp(&self, other: &Self) -> Ordering {
        let mut i = 0;
        loop {
            match (self.monomials.get(i), other.monomials.get(i)) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some(a), Some(b)) => {
                    match a.head.cmp(&b.head) {
                        Ordering::Equal => {}
                        ord => return ord,
                    }
                    match a.coeff.cmp(&b.coeff) {
                        Ordering::Equal => {}
                        ord => return ord,
                    }
                }
            }
            i += 1;
        }
    }
}

impl PartialOrd for OrdTerm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::ops::Add for &OrdTerm {
    type Output = OrdTerm;
    fn add(self, rhs: &OrdTerm) -> OrdTerm {
        OrdTerm::add(self, rhs)
    }
}

impl std::ops::Mul for &OrdTerm {
    type Output = OrdTerm;
    fn mul(self, rhs: &OrdTerm) -> OrdTerm {
        OrdTerm::mul(self, rhs)
    }
}

/// Unnormalized term syntax, the target of the parser.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawTerm {
    Zero,
    Nat(BigUint),
    Kappa,
    Lambda,
    OmegaPow(Box<RawTerm>),
    Add(Box<RawTerm>, Box<RawTerm>),
    MulNat(Box<RawTerm>, BigUint),
}

/// Evaluate raw syntax into the unique normal form.
pub fn normalize(raw: &RawTerm) -> Result<OrdTerm, TermError> {
    match raw {
        RawTerm::Zero => Ok(OrdTerm::zero()),
        RawTerm::Nat(n) => Ok(OrdTerm::from_nat(n.clone())),
        RawTerm::Kappa => Ok(OrdTerm::kappa()),
        RawTerm::Lambda => Ok(OrdTerm::lambda()),
        RawTerm::OmegaPow(e) => Ok(normalize(e)?.omega_pow()),
        RawTerm::Add(a, b) => Ok(normalize(a)?.add(&normalize(b)?)),
        RawTerm::MulNat(t, n) => {
            if n.is_zero() {
                return Err(TermError::NonPositiveCoefficient);
            }
            Ok(normalize(t)?.mul_nat(n.clone()))
        }
    }
}

impl fmt::Display for OrdTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, m) in self.monomials.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            match &m.head {
                Head::Omega(e) if e.is_zero() => write!(f, "{}", m.coeff)?,
                Head::Omega(e) => {
                    write!(f, "w^({})", e)?;
                    if !m.coeff.is_one() {
                        write!(f, "*{}", m.coeff)?;
                    }
                }
                Head::Kappa => {
                    write!(f, "K")?;
                    if !m.coeff.is_one() {
                        write!(f, "*{}", m.coeff)?;
                    }
                }
                Head::Lambda => {
                    write!(f, "L")?;
                    if !m.coeff.is_one() {
                        write!(f, "*{}", m.coeff)?;
                    }
                }
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// parsing

pub(crate) struct Cursor<'a> {
    pub s: &'a [u8],
    pub pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(s: &'a str) -> Cursor<'a> {
        Cursor { s: s.as_bytes(), pos: 0 }
    }

    pub fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    pub fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    pub fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, c: u8, what: &str) -> Result<(), TermError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    pub fn err(&self, msg: String) -> TermError {
        TermError::Parse { pos: self.pos, msg }
    }

    pub fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    pub fn nat(&mut self) -> Result<BigUint, TermError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number".into()));
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        Ok(BigUint::from_str(text).unwrap())
    }
}

pub(crate) fn parse_term_at(cur: &mut Cursor<'_>) -> Result<OrdTerm, TermError> {
    let raw = parse_sum(cur)?;
    normalize(&raw)
}

fn parse_sum(cur: &mut Cursor<'_>) -> Result<RawTerm, TermError> {
    let mut acc = parse_prod(cur)?;
    while cur.eat(b'+') {
        let rhs = parse_prod(cur)?;
        acc = RawTerm::Add(Box::new(acc), Box::new(rhs));
    }
    Ok(acc)
}

fn parse_prod(cur: &mut Cursor<'_>) -> Result<RawTerm, TermError> {
    let mut acc = parse_atom(cur)?;
    while cur.eat(b'*') {
        let n = cur.nat()?;
        acc = RawTerm::MulNat(Box::new(acc), n);
    }
    Ok(acc)
}

fn parse_atom(cur: &mut Cursor<'_>) -> Result<RawTerm, TermError> {
    match cur.peek() {
        Some(b'K') => {
            cur.pos += 1;
            Ok(RawTerm::Kappa)
        }
        Some(b'L') => {
            cur.pos += 1;
            Ok(RawTerm::Lambda)
        }
        Some(b'w') => {
            cur.pos += 1;
            cur.expect(b'^', "'^' after w")?;
            cur.expect(b'(', "'(' after w^")?;
            let e = parse_sum(cur)?;
            cur.expect(b')', "')'")?;
            Ok(RawTerm::OmegaPow(Box::new(e)))
        }
        Some(b'(') => {
            cur.pos += 1;
            let t = parse_sum(cur)?;
            cur.expect(b')', "')'")?;
            Ok(t)
        }
        Some(c) if c.is_ascii_digit() => {
            let n = cur.nat()?;
            if n.is_zero() {
                Ok(RawTerm::Zero)
            } else {
                Ok(RawTerm::Nat(n))
            }
        }
        _ => Err(cur.err("expected a term".into())),
    }
}

impl FromStr for OrdTerm {
    type Err = TermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cur = Cursor::new(s);
        let t = parse_term_at(&mut cur)?;
        if !cur.at_end() {
            return Err(cur.err("trailing input".into()));
        }
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> OrdTerm {
        s.parse().unwrap()
    }

    #[test]
    fn constants_are_fixed_points() {
        assert_eq!(OrdTerm::kappa().omega_pow(), OrdTerm::kappa());
        assert_eq!(OrdTerm::lambda().omega_pow(), OrdTerm::lambda());
        assert!(OrdTerm::kappa() < OrdTerm::lambda());
    }

    #[test]
    fn additive_absorption() {
        assert_eq!(t("1").add(&t("w^(1)")), t("w^(1)"));
        assert_eq!(t("w^(1)*2+1").add(&t("w^(1)")), t("w^(1)*3"));
        assert_eq!(t("w^(K+1)").add(&t("w^(K+1)*2")), t("w^(K+1)*3"));
        assert_eq!(t("w^(2)+w^(1)").add(&t("w^(1)+3")), t("w^(2)+w^(1)*2+3"));
    }

    #[test]
    fn comparison_examples() {
        assert_eq!(t("w^(w^(1))*3").cmp(&t("w^(w^(1)+1)")), Ordering::Less);
        assert_eq!(t("K").cmp(&t("w^(K+1)")), Ordering::Less);
        assert_eq!(t("L").cmp(&t("w^(K+1)")), Ordering::Greater);
        assert!(t("0") < t("5"));
        assert!(t("5") < t("w^(1)"));
        assert!(t("w^(w^(w^(1)))") < t("K"));
    }

    #[test]
    fn product_examples() {
        assert_eq!(t("w^(1)+1").mul(&t("2")), t("w^(1)*2+1"));
        assert_eq!(t("2").mul(&t("K")), t("K"));
        assert_eq!(t("K").mul(&t("2")), t("K*2"));
        assert_eq!(t("w^(1)").mul(&t("w^(1)")), t("w^(2)"));
        assert_eq!(t("w^(1)+1").mul(&t("w^(1)")), t("w^(2)"));
        assert_eq!(t("L").mul(&t("w^(1)")), t("w^(L+1)"));
        assert!(t("w^(2)*3").mul(&OrdTerm::zero()).is_zero());
    }

    #[test]
    fn exponentiation_examples() {
        assert_eq!(t("K+1").omega_pow(), t("w^(K+1)"));
        assert_eq!(OrdTerm::omega_tower(2, &t("K+1")), t("w^(w^(K+1))"));
        assert_eq!(OrdTerm::omega_tower(0, &t("7")), t("7"));
        assert_eq!(t("0").omega_pow(), t("1"));
    }

    #[test]
    fn zero_coefficient_rejected() {
        assert_eq!("w^(1)*0".parse::<OrdTerm>(), Err(TermError::NonPositiveCoefficient));
        let raw = RawTerm::MulNat(Box::new(RawTerm::Kappa), BigUint::zero());
        assert_eq!(normalize(&raw), Err(TermError::NonPositiveCoefficient));
    }

    #[test]
    fn parse_print_round_trip() {
        for s in [
            "0",
            "3",
            "K",
            "L*2",
            "w^(1)",
            "w^(1)*2+1",
            "w^(K+1)*3+K*2+5",
            "w^(L*2)+K*4",
            "w^(K+w^(w^(1)*2))",
        ] {
            let t: OrdTerm = s.parse().unwrap();
            assert_eq!(t.to_string(), s);
            assert_eq!(t.to_string().parse::<OrdTerm>().unwrap(), t);
        }
    }

    #[test]
    fn normalize_is_idempotent() {
        for s in ["0", "w^(1)*2+1", "K*3+w^(2)", "w^(L+1)*2"] {
            let t: OrdTerm = s.parse().unwrap();
            assert_eq!(normalize(&t.to_raw()).unwrap(), t);
        }
    }

    #[test]
    fn parse_errors_are_positional() {
        assert!(matches!("w^3".parse::<OrdTerm>(), Err(TermError::Parse { .. })));
        assert!(matches!("1+".parse::<OrdTerm>(), Err(TermError::Parse { .. })));
        assert!(matches!("(1".parse::<OrdTerm>(), Err(TermError::Parse { .. })));
        assert!(matches!("1 2".parse::<OrdTerm>(), Err(TermError::Parse { .. })));
    }

    #[test]
    fn nat_round_trip() {
        assert_eq!(t("17").as_nat(), Some(BigUint::from(17u32)));
        assert_eq!(t("w^(1)").as_nat(), None);
        assert_eq!(t("0").as_nat(), Some(BigUint::zero()));
    }
}
