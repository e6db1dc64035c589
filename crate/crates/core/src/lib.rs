//! Machines, their Goedel numbers and clocks, a SAT verifier and solver, the
//! counterexample search `f¬A`, and the fast-growing hierarchy, all at a
//! scale where every claim can be checked by running it.
//!
//! Natural numbers cross the machine boundary as numerals: `n` is written
//! as the `(n + 1)`-th word of the canonical enumeration, so `0` is `"0"`,
//! `1` is `"1"` and `2` is `"00"`. The empty word is blank and names no
//! number.

pub mod cli;
pub mod clock;
pub mod codec;
pub mod fgh;
pub mod machine;
pub mod ordinal;
pub mod par;
pub mod qfam;
pub mod registry;
pub mod sat;
pub mod threshold;
pub mod words;

/// Default step budget for searches and hierarchy evaluation.
pub const DEFAULT_BUDGET: u64 = 10_000;
/// Default fuel for unclocked machine runs.
pub const DEFAULT_FUEL: u64 = 1_000_000;
/// Default bit width of the fixed parameter field.
pub const DEFAULT_WIDTH: u32 = 16;

pub use clock::{compose, ClockSpec, ClockedMachine, MachineBody};
pub use codec::{decode_index, encode_table, is_sigma_image, sigma_embed, CodedMachine};
pub use fgh::{fgh_at_least, fgh_eval, AtLeast, EvalOutcome, FnDesc, HierarchyIndex};
pub use machine::{run, trivial_machine, MachineTable, RunResult};
pub use ordinal::Ordinal;
pub use par::Exec;
pub use registry::FRegistry;
pub use sat::{f_neg_a, f_prime, solve_e, verify, SearchOutcome};
pub use words::{index_word, numeral_word, pair, proj1, proj2, unpair, word_index, word_numeral, Word};
