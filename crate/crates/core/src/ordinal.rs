//! Ordinals below epsilon-zero in Cantor normal form.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

/// `ω^e1·c1 + ω^e2·c2 + ...` with `e1 > e2 > ...` and every `ci >= 1`.
/// The empty sum is 0.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    terms: Vec<Term>,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Term {
    pub exponent: Ordinal,
    pub coefficient: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrdinalError {
    #[error("ordinal syntax error at byte {pos}: {reason}")]
    Parse { pos: usize, reason: String },
    #[error("{0} is not a limit ordinal")]
    NotLimit(Ordinal),
    #[error("coefficient overflow")]
    Overflow,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn nat(n: u64) -> Self {
        if n == 0 {
            Ordinal::zero()
        } else {
            Ordinal { terms: vec![Term { exponent: Ordinal::zero(), coefficient: n }] }
        }
    }

    pub fn omega() -> Self {
        Ordinal::omega_pow(Ordinal::nat(1))
    }

    /// `ω^e`.
    pub fn omega_pow(e: Ordinal) -> Self {
        Ordinal { terms: vec![Term { exponent: e, coefficient: 1 }] }
    }

    /// Builds from terms, checking the normal-form invariants.
    pub fn from_terms(terms: Vec<Term>) -> Option<Self> {
        if terms.iter().any(|t| t.coefficient == 0) {
            return None;
        }
        if terms.windows(2).any(|w| w[0].exponent <= w[1].exponent) {
            return None;
        }
        Some(Ordinal { terms })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value if this ordinal is finite.
    pub fn as_nat(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [t] if t.exponent.is_zero() => Some(t.coefficient),
            _ => None,
        }
    }

    pub fn is_successor(&self) -> bool {
        self.terms.last().is_some_and(|t| t.exponent.is_zero())
    }

    pub fn is_limit(&self) -> bool {
        self.terms.last().is_some_and(|t| !t.exponent.is_zero())
    }

    /// `β` for `self = β + 1`.
    pub fn predecessor(&self) -> Option<Ordinal> {
        if !self.is_successor() {
            return None;
        }
        let mut terms = self.terms.clone();
        let last = terms.last_mut().unwrap();
        if last.coefficient == 1 {
            terms.pop();
        } else {
            last.coefficient -= 1;
        }
        Some(Ordinal { terms })
    }

    pub fn succ(&self) -> Ordinal {
        self.add(&Ordinal::nat(1))
    }

    /// Ordinal addition; terms of `self` below the leading exponent of
    /// `other` are absorbed.
    pub fn add(&self, other: &Ordinal) -> Ordinal {
        let Some(lead) = other.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<Term> =
            self.terms.iter().take_while(|t| t.exponent > lead.exponent).cloned().collect();
        let mut rest = other.terms.iter();
        if let Some(same) = self.terms.iter().find(|t| t.exponent == lead.exponent) {
            let first = rest.next().unwrap();
            terms.push(Term {
                exponent: first.exponent.clone(),
                coefficient: same.coefficient.saturating_add(first.coefficient),
            });
        }
        terms.extend(rest.cloned());
        Ordinal { terms }
    }

    /// Right multiplication by a natural number.
    pub fn mul_nat(&self, c: u64) -> Ordinal {
        if c == 0 || self.is_zero() {
            return Ordinal::zero();
        }
        let mut terms = self.terms.clone();
        terms[0].coefficient = terms[0].coefficient.saturating_mul(c);
        Ordinal { terms }
    }

    /// The `x`-th element of the standard fundamental sequence:
    /// `(γ + ω^(β+1))[x] = γ + ω^β·x` and `(γ + ω^λ)[x] = γ + ω^(λ[x])`.
    pub fn fundamental(&self, x: u64) -> Result<Ordinal, OrdinalError> {
        if !self.is_limit() {
            return Err(OrdinalError::NotLimit(self.clone()));
        }
        let mut terms = self.terms.clone();
        let last = terms.pop().unwrap();
        if last.coefficient > 1 {
            terms.push(Term { exponent: last.exponent.clone(), coefficient: last.coefficient - 1 });
        }
        let prefix = Ordinal { terms };
        let tail = match last.exponent.predecessor() {
            Some(beta) => Ordinal::omega_pow(beta).mul_nat(x),
            None => Ordinal::omega_pow(last.exponent.fundamental(x)?),
        };
        Ok(prefix.add(&tail))
    }

    /// The `i`-th ω-tower: ω, ω^ω, ω^ω^ω, ...
    pub fn tower(i: usize) -> Ordinal {
        let mut o = Ordinal::omega();
        for _ in 0..i {
            o = Ordinal::omega_pow(o);
        }
        o
    }

    /// Number of terms, counting those inside exponents.
    pub fn size(&self) -> usize {
        self.terms.iter().map(|t| 1 + t.exponent.size()).sum()
    }

    /// Nesting depth of exponents (0 for finite ordinals).
    pub fn height(&self) -> usize {
        self.terms.iter().map(|t| if t.exponent.is_zero() { 0 } else { 1 + t.exponent.height() }).max().unwrap_or(0)
    }
}

pub fn clock_index_ordinal(i: usize) -> Ordinal {
    Ordinal::tower(i)
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            let ord = a.exponent.cmp(&b.exponent).then(a.coefficient.cmp(&b.coefficient));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            if t.exponent.is_zero() {
                write!(f, "{}", t.coefficient)?;
                continue;
            }
            f.write_str("w")?;
            if t.exponent != Ordinal::nat(1) {
                let simple = t.exponent.as_nat().is_some()
                    || (t.exponent.terms.len() == 1 && t.exponent.terms[0].coefficient == 1);
                if simple {
                    write!(f, "^{}", t.exponent)?;
                } else {
                    write!(f, "^({})", t.exponent)?;
                }
            }
            if t.coefficient > 1 {
                write!(f, "*{}", t.coefficient)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ordinal({})", self)
    }
}

/// Accepts `0`, naturals, `w`, `w^a`, `w^(a+b)`, `a*c` and sums with `+`.
/// Exponentiation is right associative: `w^w^2` is `ω^(ω^2)`.
impl FromStr for Ordinal {
    type Err = OrdinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser { src: s.as_bytes(), pos: 0 };
        let o = p.sum()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(o)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, reason: &str) -> OrdinalError {
        OrdinalError::Parse { pos: self.pos, reason: reason.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<Ordinal, OrdinalError> {
        let mut acc = self.product()?;
        while self.eat(b'+') {
            acc = acc.add(&self.product()?);
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<Ordinal, OrdinalError> {
        let mut acc = self.power()?;
        while self.eat(b'*') {
            let c = self.nat()?;
            acc = acc.mul_nat(c);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Ordinal, OrdinalError> {
        match self.peek() {
            Some(b'w') => {
                self.pos += 1;
                if self.eat(b'^') {
                    let e = self.power()?;
                    Ok(Ordinal::omega_pow(e))
                } else {
                    Ok(Ordinal::omega())
                }
            }
            Some(b'(') => {
                self.pos += 1;
                let o = self.sum()?;
                if !self.eat(b')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(o)
            }
            Some(c) if c.is_ascii_digit() => Ok(Ordinal::nat(self.nat()?)),
            _ => Err(self.error("expected `w`, a number or `(`")),
        }
    }

    fn nat(&mut self) -> Result<u64, OrdinalError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| OrdinalError::Overflow)
    }
}
