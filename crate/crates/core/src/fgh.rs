//! Budgeted evaluation of the fast-growing hierarchy
//!
//! ```text
//! F_0(x) = 0,  F_1(x) = 2x,  F_(β+1)(x) = F_β^(x)(1),  F_λ(x) = F_(λ[x])(x)
//! ```
//!
//! Every call of `F` costs one unit of budget, and so does every term of
//! an ordinal built by a fundamental-sequence step; deep towers grow their
//! notation faster than their call count. Values above a caller-given
//! threshold stop the evaluation early: for `α >= 1` every `F_α` is
//! inflationary, so once an iterate reaches the threshold the final value
//! does too.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::ordinal::{Ordinal, OrdinalError};
use crate::par::{self, Exec};

/// Budgets above this evaluate on a dedicated thread with a large stack;
/// recursion depth is bounded by the number of calls.
const DEEP_BUDGET: u64 = 20_000;
const DEEP_STACK_BYTES: usize = 1 << 30;

/// Index of a hierarchy function: an ordinal below ε₀, or the diagonal
/// `F_ε₀(n) = F_τ(n)(n)` with `τ(n)` the `n`-th ω-tower.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum HierarchyIndex {
    Ordinal(Ordinal),
    EpsilonDiagonal,
}

impl fmt::Display for HierarchyIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HierarchyIndex::Ordinal(o) => write!(f, "{o}"),
            HierarchyIndex::EpsilonDiagonal => f.write_str("e0"),
        }
    }
}

impl FromStr for HierarchyIndex {
    type Err = OrdinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "e0" | "eps0" => Ok(HierarchyIndex::EpsilonDiagonal),
            other => other.parse().map(HierarchyIndex::Ordinal),
        }
    }
}

impl From<Ordinal> for HierarchyIndex {
    fn from(o: Ordinal) -> Self {
        HierarchyIndex::Ordinal(o)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalOutcome {
    Value { value: BigUint, cost: u64 },
    Overflow { budget: u64 },
}

impl EvalOutcome {
    pub fn value(&self) -> Option<&BigUint> {
        match self {
            EvalOutcome::Value { value, .. } => Some(value),
            EvalOutcome::Overflow { .. } => None,
        }
    }
}

impl fmt::Display for EvalOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalOutcome::Value { value, .. } => write!(f, "{value}"),
            EvalOutcome::Overflow { budget } => write!(f, "overflow({budget})"),
        }
    }
}

/// Result of a lower-bound query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AtLeast {
    True,
    False,
    Unknown,
}

#[derive(Debug)]
enum Partial {
    Exact(BigUint),
    // proven >= cap
    Reached,
}

struct BudgetOut;

struct Evaluator {
    budget: u64,
    used: u64,
    // calls plus terms of every ordinal built along the way
    work: u64,
    cap: Option<BigUint>,
}

impl Evaluator {
    fn capped(&self, v: BigUint) -> Partial {
        match &self.cap {
            Some(cap) if v >= *cap => Partial::Reached,
            _ => Partial::Exact(v),
        }
    }

    fn eval(&mut self, alpha: &Ordinal, x: BigUint) -> Result<Partial, BudgetOut> {
        self.used += 1;
        self.work += 1;
        if self.work > self.budget {
            return Err(BudgetOut);
        }
        if alpha.is_zero() {
            return Ok(self.capped(BigUint::zero()));
        }
        if alpha.as_nat() == Some(1) {
            return Ok(self.capped(x * 2u32));
        }
        if let Some(beta) = alpha.predecessor() {
            // x iterations cost at least x calls, so a huge x cannot finish
            let rounds = x.to_u64().ok_or(BudgetOut)?;
            let mut v = BigUint::from(1u32);
            for _ in 0..rounds {
                match self.eval(&beta, v)? {
                    Partial::Exact(next) => v = next,
                    Partial::Reached => return Ok(Partial::Reached),
                }
            }
            return Ok(self.capped(v));
        }
        let n = x.to_u64().ok_or(BudgetOut)?;
        let next = alpha.fundamental(n).expect("limit ordinal");
        self.work = self.work.saturating_add(next.size() as u64);
        self.eval(&next, x)
    }

    fn eval_index(&mut self, index: &HierarchyIndex, x: BigUint) -> Result<Partial, BudgetOut> {
        match index {
            HierarchyIndex::Ordinal(a) => self.eval(a, x),
            HierarchyIndex::EpsilonDiagonal => {
                let n = x.to_usize().ok_or(BudgetOut)?;
                if n as u64 > self.budget {
                    return Err(BudgetOut);
                }
                self.eval(&Ordinal::tower(n), x)
            }
        }
    }
}

fn run_evaluator(
    index: &HierarchyIndex,
    x: &BigUint,
    cap: Option<BigUint>,
    budget: u64,
) -> (Result<Partial, BudgetOut>, u64) {
    let work = {
        let index = index.clone();
        let x = x.clone();
        move || {
            let mut ev = Evaluator { budget, used: 0, work: 0, cap };
            let r = ev.eval_index(&index, x);
            (r, ev.used)
        }
    };
    if budget <= DEEP_BUDGET {
        work()
    } else {
        std::thread::Builder::new()
            .stack_size(DEEP_STACK_BYTES)
            .spawn(work)
            .expect("spawn evaluator thread")
            .join()
            .expect("evaluator thread panicked")
    }
}

/// `F_α(x)`, or `Overflow` once the work exceeds `budget`. The reported
/// cost is the number of calls.
pub fn fgh_eval(index: &HierarchyIndex, x: &BigUint, budget: u64) -> EvalOutcome {
    match run_evaluator(index, x, None, budget) {
        (Ok(Partial::Exact(value)), cost) => EvalOutcome::Value { value, cost },
        (Ok(Partial::Reached), _) => unreachable!("no cap set"),
        (Err(BudgetOut), _) => EvalOutcome::Overflow { budget },
    }
}

pub fn fgh_eval_u64(alpha: &Ordinal, x: u64, budget: u64) -> EvalOutcome {
    fgh_eval(&HierarchyIndex::Ordinal(alpha.clone()), &BigUint::from(x), budget)
}

/// Decides `F_α(x) >= threshold` with early exit.
pub fn fgh_at_least(index: &HierarchyIndex, x: &BigUint, threshold: &BigUint, budget: u64) -> AtLeast {
    if threshold.is_zero() {
        return AtLeast::True;
    }
    match run_evaluator(index, x, Some(threshold.clone()), budget).0 {
        Ok(Partial::Reached) => AtLeast::True,
        Ok(Partial::Exact(v)) => {
            if v >= *threshold {
                AtLeast::True
            } else {
                AtLeast::False
            }
        }
        Err(BudgetOut) => AtLeast::Unknown,
    }
}

/// A polynomial with natural coefficients, constant term first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolynomialSpec {
    coefficients: Vec<BigUint>,
}

impl PolynomialSpec {
    pub fn new(coefficients: Vec<BigUint>) -> Option<Self> {
        coefficients.iter().any(|c| !c.is_zero()).then_some(PolynomialSpec { coefficients })
    }

    pub fn coefficients(&self) -> &[BigUint] {
        &self.coefficients
    }

    pub fn eval(&self, x: &BigUint) -> BigUint {
        self.coefficients.iter().rev().fold(BigUint::zero(), |acc, c| acc * x + c)
    }
}

impl fmt::Display for PolynomialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coefficients.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// A function of one natural argument, for window comparisons.
///
/// Text forms: `<index>` (e.g. `w`, `3`, `e0`), `<index>@c0,c1,...` for
/// `F_index(p(x))`, and `table:v0,v1,...` for tabulated values from `x = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FnDesc {
    Hierarchy(HierarchyIndex),
    Composed(HierarchyIndex, PolynomialSpec),
    Table(Vec<BigUint>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DescError {
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
    #[error("bad function descriptor {0:?}")]
    Syntax(String),
}

fn parse_naturals(s: &str) -> Option<Vec<BigUint>> {
    s.split(',').map(|p| p.trim().parse::<BigUint>().ok()).collect()
}

impl FromStr for FnDesc {
    type Err = DescError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || DescError::Syntax(s.to_string());
        if let Some(rest) = s.strip_prefix("table:") {
            return parse_naturals(rest).map(FnDesc::Table).ok_or_else(bad);
        }
        match s.split_once('@') {
            Some((idx, poly)) => {
                let p = parse_naturals(poly).and_then(PolynomialSpec::new).ok_or_else(bad)?;
                Ok(FnDesc::Composed(idx.parse()?, p))
            }
            None => Ok(FnDesc::Hierarchy(s.parse()?)),
        }
    }
}

impl fmt::Display for FnDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FnDesc::Hierarchy(i) => write!(f, "{i}"),
            FnDesc::Composed(i, p) => write!(f, "{i}@{p}"),
            FnDesc::Table(vs) => {
                let parts: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
                write!(f, "table:{}", parts.join(","))
            }
        }
    }
}

impl FnDesc {
    /// Exact value, if computable within `budget`. Tabulated functions are
    /// undefined past their table.
    pub fn eval(&self, x: u64, budget: u64) -> Option<BigUint> {
        let xb = BigUint::from(x);
        match self {
            FnDesc::Hierarchy(i) => fgh_eval(i, &xb, budget).value().cloned(),
            FnDesc::Composed(i, p) => fgh_eval(i, &p.eval(&xb), budget).value().cloned(),
            FnDesc::Table(vs) => vs.get(x as usize).cloned(),
        }
    }

    pub fn at_least(&self, x: u64, threshold: &BigUint, budget: u64) -> AtLeast {
        let xb = BigUint::from(x);
        match self {
            FnDesc::Hierarchy(i) => fgh_at_least(i, &xb, threshold, budget),
            FnDesc::Composed(i, p) => fgh_at_least(i, &p.eval(&xb), threshold, budget),
            FnDesc::Table(vs) => match vs.get(x as usize) {
                Some(v) if v >= threshold => AtLeast::True,
                Some(_) => AtLeast::False,
                None => AtLeast::Unknown,
            },
        }
    }
}

/// Outcome of checking `f(x) >= g(x)` over a finite window. `Holds` is a
/// certificate for the window only; it says nothing about larger `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowVerdict {
    Holds,
    FailsAt(u64),
    Unknown(u64),
}

/// Pointwise `f >= g` on `lo..=hi`; the lowest failing or undecided `x`
/// is reported.
pub fn dominates_on_window(f: &FnDesc, g: &FnDesc, lo: u64, hi: u64, budget: u64, exec: Exec) -> WindowVerdict {
    if lo > hi {
        return WindowVerdict::Holds;
    }
    let first_bad = par::find_map_first(exec, lo..hi + 1, |x| {
        let Some(gx) = g.eval(x, budget) else {
            return Some(WindowVerdict::Unknown(x));
        };
        match f.at_least(x, &gx, budget) {
            AtLeast::True => None,
            AtLeast::False => Some(WindowVerdict::FailsAt(x)),
            AtLeast::Unknown => Some(WindowVerdict::Unknown(x)),
        }
    });
    first_bad.unwrap_or(WindowVerdict::Holds)
}
