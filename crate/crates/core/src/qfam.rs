//! Finite-output families: lookup machines that agree with a given machine
//! up to a threshold, the solver family `Q` indexed by `n`, the spacing of
//! their indices, and the counterexample peaks they produce.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

use crate::clock::{ClockError, ClockSpec, ClockedMachine, MachineBody};
use crate::codec::{self, CodecError};
use crate::fgh::{FnDesc, HierarchyIndex};
use crate::machine::{run, MachineTable, RunResult};
use crate::ordinal::Ordinal;
use crate::par::{self, Exec};
use crate::registry::FRegistry;
use crate::sat::{f_neg_a_decoded, SearchError, SearchOutcome};
use crate::threshold::{dispatch_table, BuildError, ThresholdMachine, MAX_THRESHOLD};
use crate::words::{numeral_word, pair};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QfamError {
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Clock(#[from] ClockError),
    #[error(transparent)]
    Search(#[from] SearchError),
}

/// Largest step count of `table` over the numerals `0..=k`.
pub fn measure_steps(table: &MachineTable, k: u64, fuel: u64, exec: Exec) -> Result<u64, BuildError> {
    let steps = par::map_range(exec, 0..k + 1, |x| match run(table, &numeral_word(&BigUint::from(x)), fuel) {
        RunResult::Halted { steps, .. } => Ok(steps),
        RunResult::OutOfFuel { .. } => Err(BuildError::FuelExhausted { x }),
    });
    steps.into_iter().try_fold(0, |m, s| s.map(|s| m.max(s)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PghBuild {
    pub table: MachineTable,
    /// `H(n)`
    pub threshold: u64,
    /// Worst step count over inputs up to the threshold. Inputs above it
    /// take `|x| + 1` steps.
    pub max_steps: u64,
    pub godel: BigUint,
}

/// The machine equal to `g` on numerals `x <= h(n)` and to 0 above.
/// `corpus_bound` caps the threshold that will be expanded.
pub fn build_pgh(
    g: &MachineTable,
    h: &FnDesc,
    n: u64,
    corpus_bound: u64,
    fuel: u64,
    budget: u64,
    registry: &mut FRegistry,
) -> Result<PghBuild, BuildError> {
    let hn = h.eval(n, budget).ok_or(BuildError::Overflow { budget })?;
    let limit = corpus_bound.min(MAX_THRESHOLD);
    let k = match hn.to_u64() {
        Some(k) if k <= limit => k,
        _ => return Err(BuildError::ThresholdTooLarge { threshold: hn, limit }),
    };
    let outputs = par::map_range(Exec::default(), 0..k + 1, |x| {
        let input = numeral_word(&BigUint::from(x));
        match run(g, &input, fuel) {
            RunResult::Halted { output, .. } => Ok((input, output)),
            RunResult::OutOfFuel { .. } => Err(BuildError::FuelExhausted { x }),
        }
    });
    let entries = outputs.into_iter().collect::<Result<Vec<_>, _>>()?;
    let table = dispatch_table(entries.iter().map(|(a, b)| (a, b)));
    let max_steps = measure_steps(&table, k, fuel, Exec::default())?;
    let godel = codec::encode_table(&table);
    registry.insert(godel.clone());
    Ok(PghBuild { table, threshold: k, max_steps, godel })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSpec {
    pub alpha: String,
    pub n: u64,
    /// `F_α(n)`
    pub k: BigUint,
    pub width: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QBuild {
    pub machine: Arc<ThresholdMachine>,
    /// Index of the threshold program.
    pub godel: BigUint,
    pub spec: QSpec,
    pub clock: ClockSpec,
    pub clock_index: BigUint,
    /// Index of the clocked pair (machine, clock).
    pub sigma: BigUint,
    pub max_steps: u64,
}

impl QBuild {
    pub fn table(&self) -> &MachineTable {
        self.machine.table()
    }

    pub fn clocked(&self) -> ClockedMachine {
        ClockedMachine::new(MachineBody::Threshold(self.machine.clone()), self.clock.clone())
    }
}

/// The clock paired with `Q` for parameter `n`: exponent `F_1(n + 2)`,
/// with its parameter in a field of the same width as `n`.
pub fn bounding_clock(n: u64, width: u32, budget: u64) -> Result<ClockSpec, ClockError> {
    let k = n.checked_add(2).ok_or(ClockError::ExponentTooLarge)?;
    Ok(ClockSpec::parametrized(Ordinal::nat(1), k, budget)?.with_param_width(width))
}

pub fn build_q(index: &HierarchyIndex, n: u64, width: u32, budget: u64) -> Result<QBuild, QfamError> {
    let machine = Arc::new(ThresholdMachine::new(index.clone(), n, width, budget)?);
    let k = machine.threshold().clone();
    let k64 = k.to_u64().expect("threshold already bounded");
    let max_steps = measure_steps(machine.table(), k64, u64::MAX, Exec::default())?;
    let godel = codec::encode_threshold(&machine)?;
    let clock = bounding_clock(n, width, budget)?;
    let clock_index = codec::clock_index(&clock)?;
    let spec = QSpec { alpha: index.to_string(), n, k, width };
    let mut built = QBuild { machine, godel, spec, clock, clock_index, sigma: BigUint::zero(), max_steps };
    built.sigma = codec::sigma_embed(&built.clocked())?;
    Ok(built)
}

/// [`build_q`], recording the program index in `registry`.
pub fn build_q_registered(
    index: &HierarchyIndex,
    n: u64,
    width: u32,
    budget: u64,
    registry: &mut FRegistry,
) -> Result<QBuild, QfamError> {
    let q = build_q(index, n, width, budget)?;
    registry.insert(q.godel.clone());
    Ok(q)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrideReport {
    pub indices: Vec<BigUint>,
    pub base: Option<BigUint>,
    /// Common difference, when the indices form an arithmetic progression
    /// of at least two terms.
    pub stride: Option<BigInt>,
}

impl StrideReport {
    pub fn new(indices: Vec<BigUint>) -> Self {
        let base = indices.first().cloned();
        let diffs: Vec<BigInt> = indices.windows(2).map(|w| BigInt::from(w[1].clone()) - BigInt::from(w[0].clone())).collect();
        let stride = match diffs.split_first() {
            Some((d, rest)) if rest.iter().all(|e| e == d) => Some(d.clone()),
            _ => None,
        };
        StrideReport { indices, base, stride }
    }
}

/// Least `d` such that the `d`-th finite differences of `values` are
/// constant, if some level with at least two entries is.
pub fn difference_degree(values: &[BigUint]) -> Option<usize> {
    let mut level: Vec<BigInt> = values.iter().cloned().map(BigInt::from).collect();
    for d in 0.. {
        if level.len() < 2 {
            return None;
        }
        if level.iter().all(|v| v == &level[0]) {
            return Some(d);
        }
        level = level.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    unreachable!()
}

pub fn p_index(q_godel: &BigUint, clock_godel: &BigUint) -> BigUint {
    pair(q_godel, clock_godel)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrideAnalysis {
    pub machines: StrideReport,
    pub clocks: StrideReport,
    pub sigma: StrideReport,
    pub p_indices: Vec<BigUint>,
    pub p_degree: Option<usize>,
}

pub fn stride_analysis(
    index: &HierarchyIndex,
    n_range: std::ops::Range<u64>,
    width: u32,
    budget: u64,
    exec: Exec,
) -> Result<StrideAnalysis, QfamError> {
    let built = par::map_range(exec, n_range, |n| build_q(index, n, width, budget));
    let built = built.into_iter().collect::<Result<Vec<_>, _>>()?;
    let p_indices: Vec<BigUint> = built.iter().map(|q| p_index(&q.godel, &q.clock_index)).collect();
    Ok(StrideAnalysis {
        machines: StrideReport::new(built.iter().map(|q| q.godel.clone()).collect()),
        clocks: StrideReport::new(built.iter().map(|q| q.clock_index.clone()).collect()),
        sigma: StrideReport::new(built.iter().map(|q| q.sigma.clone()).collect()),
        p_degree: difference_degree(&p_indices),
        p_indices,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeakProbe {
    /// Index of the clocked `Q`.
    pub index: BigUint,
    pub outcome: SearchOutcome,
    pub threshold: BigUint,
}

/// Runs the counterexample search on the clocked `Q` for `n`.
pub fn peak_probe(
    alpha: &HierarchyIndex,
    n: u64,
    width: u32,
    eval_budget: u64,
    search_budget: u64,
    fuel: u64,
    exec: Exec,
) -> Result<PeakProbe, QfamError> {
    let q = build_q(alpha, n, width, eval_budget)?;
    let m = codec::decode_index(&q.sigma);
    let outcome = f_neg_a_decoded(&m, search_budget, fuel, exec)?;
    Ok(PeakProbe { index: q.sigma, outcome, threshold: q.spec.k })
}
