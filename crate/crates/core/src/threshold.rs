//! Finite lookup machines.
//!
//! A dispatch table reads its input left to right through a binary trie,
//! erasing as it goes. At the end of the input it writes the stored output
//! for that word, or the numeral 0 when the word has no entry. A run on an
//! input of length `L` with output length `m` takes `L + max(m, 1)` steps.

use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::fgh::{fgh_eval, EvalOutcome, HierarchyIndex};
use crate::machine::{MachineTable, Move, Rule, Symbol};
use crate::par::{self, Exec};
use crate::sat::solve_e;
use crate::words::{numeral_word, Word};

/// Largest threshold expanded into a dispatch table.
pub const MAX_THRESHOLD: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BuildError {
    #[error("threshold not evaluable within budget {budget}")]
    Overflow { budget: u64 },
    #[error("threshold {threshold} exceeds the expansion limit {limit}")]
    ThresholdTooLarge { threshold: BigUint, limit: u64 },
    #[error("parameter {n} does not fit in {width} bits")]
    WidthTooSmall { n: u64, width: u32 },
    #[error("machine ran out of fuel on input {x}")]
    FuelExhausted { x: u64 },
}

#[derive(Default)]
struct Node {
    child: [Option<usize>; 2],
    output: Option<Word>,
}

/// Dispatch table mapping each `entries` key to its value and every other
/// word to `"0"`. A repeated key keeps its last value.
pub fn dispatch_table<'a, I>(entries: I) -> MachineTable
where
    I: IntoIterator<Item = (&'a Word, &'a Word)>,
{
    let mut nodes = vec![Node::default()];
    for (key, value) in entries {
        let mut at = 0;
        for &b in key.bits() {
            let slot = b as usize;
            at = match nodes[at].child[slot] {
                Some(c) => c,
                None => {
                    nodes.push(Node::default());
                    let c = nodes.len() - 1;
                    nodes[at].child[slot] = Some(c);
                    c
                }
            };
        }
        nodes[at].output = Some(value.clone());
    }

    // breadth-first state numbers, root = 1
    let mut state = vec![0u32; nodes.len()];
    let mut order = Vec::with_capacity(nodes.len());
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        order.push(i);
        state[i] = order.len() as u32;
        queue.extend(nodes[i].child.iter().flatten());
    }
    let reject = order.len() as u32 + 1;
    let mut next_free = reject + 1;

    let mut rules = Vec::new();
    for &i in &order {
        let s = state[i];
        for (slot, sym) in [Symbol::Zero, Symbol::One].into_iter().enumerate() {
            let to = nodes[i].child[slot].map_or(reject, |c| state[c]);
            rules.push(Rule::new(s, sym, to, Symbol::Blank, Move::Right));
        }
        match &nodes[i].output {
            None => rules.push(Rule::new(s, Symbol::Blank, 0, Symbol::Zero, Move::Stay)),
            Some(out) if out.is_empty() => rules.push(Rule::new(s, Symbol::Blank, 0, Symbol::Blank, Move::Stay)),
            Some(out) => {
                // write right to left, ending on the first symbol
                let bits = out.bits();
                let mut from = s;
                for j in (0..bits.len()).rev() {
                    let sym = Symbol::from_bit(bits[j]);
                    if j == 0 {
                        rules.push(Rule::new(from, Symbol::Blank, 0, sym, Move::Stay));
                    } else {
                        rules.push(Rule::new(from, Symbol::Blank, next_free, sym, Move::Left));
                        from = next_free;
                        next_free += 1;
                    }
                }
            }
        }
    }
    rules.push(Rule::new(reject, Symbol::Zero, reject, Symbol::Blank, Move::Right));
    rules.push(Rule::new(reject, Symbol::One, reject, Symbol::Blank, Move::Right));
    rules.push(Rule::new(reject, Symbol::Blank, 0, Symbol::Zero, Move::Stay));
    MachineTable::new(rules).expect("dispatch rules have distinct nonzero sources")
}

/// Steps a dispatch table takes on an input of length `input_len` whose
/// stored output has length `output_len`.
pub fn dispatch_steps(input_len: u64, output_len: u64) -> u64 {
    input_len + output_len.max(1)
}

/// The machine that agrees with the solver up to a threshold `K = F(n)` and
/// outputs 0 above it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdMachine {
    n: u64,
    width: u32,
    index: HierarchyIndex,
    k: BigUint,
    table: MachineTable,
}

impl ThresholdMachine {
    pub fn new(index: HierarchyIndex, n: u64, width: u32, budget: u64) -> Result<Self, BuildError> {
        if width < 64 && n >> width != 0 {
            return Err(BuildError::WidthTooSmall { n, width });
        }
        let k = match fgh_eval(&index, &BigUint::from(n), budget) {
            EvalOutcome::Value { value, .. } => value,
            EvalOutcome::Overflow { budget } => return Err(BuildError::Overflow { budget }),
        };
        let kk = match k.to_u64() {
            Some(v) if v <= MAX_THRESHOLD => v,
            _ => return Err(BuildError::ThresholdTooLarge { threshold: k, limit: MAX_THRESHOLD }),
        };
        let entries = par::map_range(Exec::default(), 0..kk + 1, |x| {
            let x = BigUint::from(x);
            (numeral_word(&x), numeral_word(&solve_e(&x)))
        });
        let table = dispatch_table(entries.iter().map(|(a, b)| (a, b)));
        Ok(ThresholdMachine { n, width, index, k, table })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn index(&self) -> &HierarchyIndex {
        &self.index
    }

    pub fn threshold(&self) -> &BigUint {
        &self.k
    }

    pub fn table(&self) -> &MachineTable {
        &self.table
    }

    /// The function the machine computes, from its definition.
    pub fn expected(&self, x: &BigUint) -> BigUint {
        if x <= &self.k {
            solve_e(x)
        } else {
            BigUint::default()
        }
    }
}
