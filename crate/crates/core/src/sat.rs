//! CNF formulas, their bit coding, the verifier `V`, the exhaustive solver
//! `E`, and the counterexample search `f¬A`.
//!
//! Bit coding: a literal is its polarity bit (`0` positive, `1` negated)
//! followed by the variable index in unary, `1^i 0`. Literals of a clause
//! are concatenated; clauses are separated by `00`, which cannot start a
//! literal. The formula `(v1)` is `010`.
//!
//! Numbers cross the machine boundary as numerals (see [`crate::words`]).
//! `V(<x, y>)` decodes the numeral word of `x` as a formula and the numeral
//! word of `y` as an assignment; bit `i` of the assignment is the value of
//! variable `i + 1`, and its length must equal the formula's variable count.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::codec::{self, CodedMachine};
use crate::par::{self, Exec};
use crate::registry::FRegistry;
use crate::words::{numeral_word, pair, unpair, word_numeral, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: u32,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: u32) -> Self {
        Literal { var, positive: true }
    }

    pub fn neg(var: u32) -> Self {
        Literal { var, positive: false }
    }
}

/// A CNF formula. Its variables are `1..=num_vars()`, where `num_vars` is
/// the largest index that occurs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CnfFormula {
    clauses: Vec<Vec<Literal>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CnfError {
    #[error("malformed formula word")]
    Malformed,
    #[error("empty clause")]
    EmptyClause,
    #[error("variable index 0")]
    ZeroVariable,
    #[error("dimacs line {line}: {reason}")]
    Dimacs { line: usize, reason: String },
}

impl CnfFormula {
    pub fn new(clauses: Vec<Vec<Literal>>) -> Result<Self, CnfError> {
        for c in &clauses {
            if c.is_empty() {
                return Err(CnfError::EmptyClause);
            }
            if c.iter().any(|l| l.var == 0) {
                return Err(CnfError::ZeroVariable);
            }
        }
        Ok(CnfFormula { clauses })
    }

    pub fn clauses(&self) -> &[Vec<Literal>] {
        &self.clauses
    }

    pub fn num_vars(&self) -> u32 {
        self.clauses.iter().flatten().map(|l| l.var).max().unwrap_or(0)
    }

    /// Whether `assignment` (bit `i` for variable `i + 1`) satisfies every
    /// clause. Assignments of the wrong length never do.
    pub fn satisfied_by(&self, assignment: &Word) -> bool {
        if assignment.len() != self.num_vars() as usize {
            return false;
        }
        let bits = assignment.bits();
        self.clauses
            .iter()
            .all(|c| c.iter().any(|l| bits[(l.var - 1) as usize] == l.positive))
    }
}

impl fmt::Display for CnfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p cnf {} {}", self.num_vars(), self.clauses.len())?;
        for c in &self.clauses {
            for l in c {
                let v = l.var as i64;
                write!(f, "{} ", if l.positive { v } else { -v })?;
            }
            writeln!(f, "0")?;
        }
        Ok(())
    }
}

/// DIMACS input: `c` comment lines, a `p cnf V C` header, then clauses of
/// signed literals each terminated by `0`.
impl FromStr for CnfFormula {
    type Err = CnfError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut header: Option<(u32, usize)> = None;
        let mut clauses = Vec::new();
        let mut current = Vec::new();
        let mut last_line = 0;
        for (i, line) in s.lines().enumerate() {
            last_line = i + 1;
            let bad = |reason: &str| CnfError::Dimacs { line: i + 1, reason: reason.to_string() };
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            if line.starts_with('p') {
                let f: Vec<&str> = line.split_whitespace().collect();
                if header.is_some() || f.len() != 4 || f[1] != "cnf" {
                    return Err(bad("expected a single `p cnf V C` header"));
                }
                let v = f[2].parse().map_err(|_| bad("bad variable count"))?;
                let c = f[3].parse().map_err(|_| bad("bad clause count"))?;
                header = Some((v, c));
                continue;
            }
            let (vars, _) = header.ok_or_else(|| bad("clause before header"))?;
            for tok in line.split_whitespace() {
                let lit: i64 = tok.parse().map_err(|_| bad("bad literal"))?;
                if lit == 0 {
                    if current.is_empty() {
                        return Err(bad("empty clause"));
                    }
                    clauses.push(std::mem::take(&mut current));
                } else {
                    let var = lit.unsigned_abs();
                    if var > vars as u64 {
                        return Err(bad("literal exceeds declared variable count"));
                    }
                    current.push(Literal { var: var as u32, positive: lit > 0 });
                }
            }
        }
        let bad = |reason: &str| CnfError::Dimacs { line: last_line, reason: reason.to_string() };
        let (_, count) = header.ok_or_else(|| bad("missing header"))?;
        if !current.is_empty() {
            return Err(bad("unterminated clause"));
        }
        if clauses.len() != count {
            return Err(bad("clause count does not match header"));
        }
        CnfFormula::new(clauses)
    }
}

pub fn encode_cnf(f: &CnfFormula) -> Word {
    let mut w = Word::empty();
    for (i, clause) in f.clauses.iter().enumerate() {
        if i > 0 {
            w.push(false);
            w.push(false);
        }
        for l in clause {
            w.push(!l.positive);
            for _ in 0..l.var {
                w.push(true);
            }
            w.push(false);
        }
    }
    w
}

pub fn decode_cnf(w: &Word) -> Result<CnfFormula, CnfError> {
    decode_counting(w, &mut 0)
}

fn decode_counting(w: &Word, ops: &mut u64) -> Result<CnfFormula, CnfError> {
    let bits = w.bits();
    let mut pos = 0;
    let mut clauses = Vec::new();
    let mut clause = Vec::new();
    while pos < bits.len() {
        let polarity = bits[pos];
        pos += 1;
        let mut ones: u64 = 0;
        loop {
            *ops += 1;
            match bits.get(pos) {
                None => return Err(CnfError::Malformed),
                Some(true) => ones += 1,
                Some(false) => break,
            }
            pos += 1;
        }
        pos += 1;
        if ones == 0 {
            // `00` separates clauses; `10` is never valid
            if polarity || clause.is_empty() || pos >= bits.len() {
                return Err(CnfError::Malformed);
            }
            clauses.push(std::mem::take(&mut clause));
        } else {
            let var = u32::try_from(ones).map_err(|_| CnfError::Malformed)?;
            clause.push(Literal { var, positive: !polarity });
        }
    }
    if !clause.is_empty() {
        clauses.push(clause);
    }
    Ok(CnfFormula { clauses })
}

/// `V` on words: 1 iff `x` decodes and `y` satisfies it.
pub fn verify_words(x: &Word, y: &Word) -> bool {
    match decode_cnf(x) {
        Ok(f) => f.satisfied_by(y),
        Err(_) => false,
    }
}

/// The verifier `V(z)`, with `V(<0, 0>) = 1`.
pub fn verify(z: &BigUint) -> bool {
    verify_with_cost(z).0
}

/// [`verify`] together with the number of elementary bit operations used.
pub fn verify_with_cost(z: &BigUint) -> (bool, u64) {
    let (x, y) = unpair(z);
    if x.is_zero() && y.is_zero() {
        return (true, 1);
    }
    let xw = numeral_word(&x);
    let yw = numeral_word(&y);
    let mut ops = 0;
    let Ok(f) = decode_counting(&xw, &mut ops) else {
        return (false, ops);
    };
    if yw.len() != f.num_vars() as usize {
        return (false, ops + 1);
    }
    let bits = yw.bits();
    for c in f.clauses() {
        let mut sat = false;
        for l in c {
            ops += 1;
            if bits[(l.var - 1) as usize] == l.positive {
                sat = true;
                break;
            }
        }
        if !sat {
            return (false, ops);
        }
    }
    (true, ops)
}

/// All assignments of length `n` in canonical order.
fn assignments(n: u32) -> impl Iterator<Item = Word> {
    let n = n as usize;
    (0..(1u64 << n)).map(move |v| Word::new((0..n).rev().map(|i| (v >> i) & 1 == 1).collect()))
}

/// The solver `E`: the numeral of the first satisfying assignment in
/// canonical word order, or 0 when there is none.
pub fn solve_e(x: &BigUint) -> BigUint {
    let Ok(f) = decode_cnf(&numeral_word(x)) else {
        return BigUint::zero();
    };
    let n = f.num_vars();
    if n == 0 || n > 40 {
        return BigUint::zero();
    }
    assignments(n)
        .find(|a| f.satisfied_by(a))
        .and_then(|a| word_numeral(&a))
        .unwrap_or_default()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("machine ran out of fuel")]
pub struct FuelExhausted;

/// `¬A(m, z)`: `V(z) = 1` and machine `m`'s output on `π1 z` does not
/// satisfy `π1 z`. A blank output is not a numeral and never satisfies.
pub fn neg_a_decoded(m: &CodedMachine, z: &BigUint, fuel: u64) -> Result<bool, FuelExhausted> {
    if !verify(z) {
        return Ok(false);
    }
    let x = unpair(z).0;
    let out = m.run(&numeral_word(&x), fuel)?;
    Ok(match word_numeral(&out) {
        Some(y) => !verify(&pair(&x, &y)),
        None => true,
    })
}

pub fn neg_a(m: &BigUint, z: &BigUint, fuel: u64) -> Result<bool, FuelExhausted> {
    neg_a_decoded(&codec::decode_index(m), z, fuel)
}

/// `A(m, z)`, the negation of [`neg_a`].
pub fn a_predicate(m: &BigUint, z: &BigUint, fuel: u64) -> Result<bool, FuelExhausted> {
    neg_a(m, z, fuel).map(|v| !v)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found { witness: BigUint, value: BigUint },
    Exhausted { budget: u64 },
}

impl fmt::Display for SearchOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchOutcome::Found { value, .. } => write!(f, "{value}"),
            SearchOutcome::Exhausted { budget } => write!(f, "exhausted({budget})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("machine fuel ran out at z = {0}; the least counterexample cannot be certified")]
    Indeterminate(u64),
}

/// `μz ¬A(m, z)` over `z < budget`.
pub fn f_neg_a_decoded(m: &CodedMachine, budget: u64, fuel: u64, exec: Exec) -> Result<SearchOutcome, SearchError> {
    let first = par::find_map_first(exec, 0..budget, |z| match neg_a_decoded(m, &BigUint::from(z), fuel) {
        Ok(true) => Some(Ok(z)),
        Ok(false) => None,
        Err(FuelExhausted) => Some(Err(SearchError::Indeterminate(z))),
    });
    match first {
        None => Ok(SearchOutcome::Exhausted { budget }),
        Some(Ok(z)) => Ok(SearchOutcome::Found { witness: z.into(), value: z.into() }),
        Some(Err(e)) => Err(e),
    }
}

pub fn f_neg_a(m: &BigUint, budget: u64, fuel: u64) -> Result<SearchOutcome, SearchError> {
    f_neg_a_decoded(&codec::decode_index(m), budget, fuel, Exec::default())
}

/// The extension `f'`: `f¬A` on σ-images and registered finite-output
/// machines, 0 elsewhere.
pub fn f_prime(m: &BigUint, registry: &FRegistry, budget: u64, fuel: u64) -> Result<SearchOutcome, SearchError> {
    let decoded = codec::decode_index(m);
    if decoded.is_clocked() || registry.contains(m) {
        f_neg_a_decoded(&decoded, budget, fuel, Exec::default())
    } else {
        Ok(SearchOutcome::Found { witness: BigUint::zero(), value: BigUint::zero() })
    }
}
