//! Polynomial clocks and clocked machines.
//!
//! A clock with exponent `E` lets a machine run `|x|^E + E` steps on input
//! `x`. A machine still running when the clock expires is stopped and its
//! output is the word `"0"`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{Pow, ToPrimitive};

use crate::fgh::{fgh_eval_u64, EvalOutcome};
use crate::machine::{self, MachineTable, RunResult};
use crate::ordinal::Ordinal;
use crate::threshold::ThresholdMachine;
use crate::words::Word;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClockError {
    #[error("clock exponent not evaluable within budget {budget}")]
    BudgetExceeded { budget: u64 },
    #[error("clock exponent does not fit in 64 bits")]
    ExponentTooLarge,
    #[error("bad clock spec {0:?}: expected `poly:p` or `fgh:alpha:k`")]
    Syntax(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ClockKind {
    /// `|x|^p + p`
    PlainPoly(u64),
    /// `|x|^F_α(k) + F_α(k)`
    Parametrized { alpha: Ordinal, k: u64 },
}

/// A clock whose exponent has been materialized.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClockSpec {
    kind: ClockKind,
    exponent: u64,
    // fixed bit width of the parameter field when Goedel-coded
    param_width: Option<u32>,
}

impl ClockSpec {
    pub fn poly(p: u64) -> Self {
        ClockSpec { kind: ClockKind::PlainPoly(p), exponent: p, param_width: None }
    }

    pub fn parametrized(alpha: Ordinal, k: u64, budget: u64) -> Result<Self, ClockError> {
        let exponent = match fgh_eval_u64(&alpha, k, budget) {
            EvalOutcome::Value { value, .. } => value.to_u64().ok_or(ClockError::ExponentTooLarge)?,
            EvalOutcome::Overflow { budget } => return Err(ClockError::BudgetExceeded { budget }),
        };
        Ok(ClockSpec { kind: ClockKind::Parametrized { alpha, k }, exponent, param_width: None })
    }

    pub fn with_param_width(mut self, bits: u32) -> Self {
        self.param_width = Some(bits);
        self
    }

    pub fn kind(&self) -> &ClockKind {
        &self.kind
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn param_width(&self) -> Option<u32> {
        self.param_width
    }

    /// The numeric parameter carried by the clock: `p` or `k`.
    pub fn parameter(&self) -> u64 {
        match &self.kind {
            ClockKind::PlainPoly(p) => *p,
            ClockKind::Parametrized { k, .. } => *k,
        }
    }

    pub fn parse(s: &str, budget: u64) -> Result<Self, ClockError> {
        let bad = || ClockError::Syntax(s.to_string());
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["poly", p] => Ok(ClockSpec::poly(p.parse().map_err(|_| bad())?)),
            ["fgh", alpha, k] => {
                let alpha = alpha.parse().map_err(|_| bad())?;
                ClockSpec::parametrized(alpha, k.parse().map_err(|_| bad())?, budget)
            }
            _ => Err(bad()),
        }
    }

    /// `len^E + E`.
    pub fn bound(&self, len: u64) -> BigUint {
        let e = self.exponent;
        BigUint::from(len).pow(BigUint::from(e)) + e
    }

    /// [`ClockSpec::bound`] clamped to `u64`, for use as fuel.
    pub fn bound_fuel(&self, len: u64) -> u64 {
        let e = self.exponent;
        let power = match len {
            0 => u64::from(e == 0),
            1 => 1,
            _ => match u32::try_from(e).ok().and_then(|e| len.checked_pow(e)) {
                Some(v) => v,
                None => return u64::MAX,
            },
        };
        power.saturating_add(e)
    }
}

impl fmt::Display for ClockSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ClockKind::PlainPoly(p) => write!(f, "poly:{p}"),
            ClockKind::Parametrized { alpha, k } => write!(f, "fgh:{alpha}:{k}"),
        }
    }
}

impl FromStr for ClockSpec {
    type Err = ClockError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ClockSpec::parse(s, crate::DEFAULT_BUDGET)
    }
}

/// The machine half of a clocked pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MachineBody {
    Table(MachineTable),
    /// A finite-output threshold program, run through its dispatch table.
    Threshold(Arc<ThresholdMachine>),
    /// Run the first pair, then the second on its output.
    Composite(Box<ClockedMachine>, Box<ClockedMachine>),
}

impl MachineBody {
    /// Runs with at most `fuel` steps in total.
    pub fn run(&self, input: &Word, fuel: u64) -> RunResult {
        match self {
            MachineBody::Table(t) => machine::run(t, input, fuel),
            MachineBody::Threshold(q) => machine::run(q.table(), input, fuel),
            MachineBody::Composite(first, second) => {
                let a = match first.run_with_fuel(input, fuel) {
                    Some(r) => r,
                    None => return RunResult::OutOfFuel { steps: fuel },
                };
                match second.run_with_fuel(&a.output, fuel - a.steps) {
                    Some(b) => RunResult::Halted { output: b.output, steps: a.steps + b.steps },
                    None => RunResult::OutOfFuel { steps: fuel },
                }
            }
        }
    }
}

impl From<MachineTable> for MachineBody {
    fn from(t: MachineTable) -> Self {
        MachineBody::Table(t)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClockedMachine {
    pub body: MachineBody,
    pub clock: ClockSpec,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClockedRun {
    pub output: Word,
    pub steps: u64,
    pub cut: bool,
}

impl ClockedMachine {
    pub fn new(body: impl Into<MachineBody>, clock: ClockSpec) -> Self {
        ClockedMachine { body: body.into(), clock }
    }

    pub fn run(&self, input: &Word) -> ClockedRun {
        self.run_with_fuel(input, u64::MAX).expect("clock bound never exceeds u64::MAX fuel")
    }

    /// Clocked semantics under an extra outer fuel limit; `None` when the
    /// outer fuel runs out before the clock does.
    pub fn run_with_fuel(&self, input: &Word, fuel: u64) -> Option<ClockedRun> {
        let bound = self.clock.bound_fuel(input.len() as u64);
        let limit = bound.min(fuel);
        match self.body.run(input, limit) {
            RunResult::Halted { output, steps } => Some(ClockedRun { output, steps, cut: false }),
            RunResult::OutOfFuel { .. } if bound <= fuel => {
                Some(ClockedRun { output: zero_word(), steps: bound, cut: true })
            }
            RunResult::OutOfFuel { .. } => None,
        }
    }
}

/// The numeral 0, written by a clock that cuts a run.
pub fn zero_word() -> Word {
    Word::new(vec![false])
}

pub fn clock_bound(c: &ClockSpec, input_len: u64) -> BigUint {
    c.bound(input_len)
}

pub fn clocked_run(p: &ClockedMachine, input: &Word) -> ClockedRun {
    p.run(input)
}

/// Exponent of the clock bounding the composite of pairs with exponents
/// `e1` and `e2`:
///
/// ```text
/// E = (e1 + 2)(e2 + 2) + (e1 + 2)^e2 + e1 + e2
/// ```
///
/// The second stage reads the first stage's output, which can be as long as
/// `|x| + bound_e1(|x|)`, so `E` must satisfy
/// `|x|^E + E >= bound_e1(|x|) + bound_e2(|x| + bound_e1(|x|))`.
/// For `|x| >= 2`, `|x| + |x|^e1 + e1 <= |x|^(e1 + 2)` gives the product
/// term; at `|x| = 1` the right side is `1 + e1 + (e1 + 2)^e2 + e2`, which the
/// power term covers.
pub fn composite_exponent(e1: u64, e2: u64) -> Option<u64> {
    let a = e1.checked_add(2)?;
    let b = e2.checked_add(2)?;
    let power = a.checked_pow(u32::try_from(e2).ok()?)?;
    a.checked_mul(b)?.checked_add(power)?.checked_add(e1)?.checked_add(e2)
}

/// A clocked pair computing `x -> p2(p1(x))`.
pub fn compose(p1: &ClockedMachine, p2: &ClockedMachine) -> Result<ClockedMachine, ClockError> {
    let e = composite_exponent(p1.clock.exponent(), p2.clock.exponent()).ok_or(ClockError::ExponentTooLarge)?;
    Ok(ClockedMachine {
        body: MachineBody::Composite(Box::new(p1.clone()), Box::new(p2.clone())),
        clock: ClockSpec::poly(e),
    })
}
