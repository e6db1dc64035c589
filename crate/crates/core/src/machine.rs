//! Deterministic single-tape machines over `{0, 1}` plus blank.
//!
//! States are numbered `0..=n`; state 0 is final and state 1 is the start
//! state. A `(state, symbol)` pair without a rule moves the machine to state
//! 0 in one step without touching the tape, so the empty table reproduces
//! its input.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::words::Word;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Zero,
    One,
    Blank,
}

impl Symbol {
    pub fn from_bit(b: bool) -> Self {
        if b {
            Symbol::One
        } else {
            Symbol::Zero
        }
    }

    fn slot(self) -> usize {
        match self {
            Symbol::Zero => 0,
            Symbol::One => 1,
            Symbol::Blank => 2,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Symbol::Zero => '0',
            Symbol::One => '1',
            Symbol::Blank => '_',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            '0' => Some(Symbol::Zero),
            '1' => Some(Symbol::One),
            '_' => Some(Symbol::Blank),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    Left,
    Right,
    Stay,
}

impl Move {
    pub fn as_char(self) -> char {
        match self {
            Move::Left => 'L',
            Move::Right => 'R',
            Move::Stay => 'N',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'L' => Some(Move::Left),
            'R' => Some(Move::Right),
            'N' => Some(Move::Stay),
            _ => None,
        }
    }

    fn delta(self) -> i64 {
        match self {
            Move::Left => -1,
            Move::Right => 1,
            Move::Stay => 0,
        }
    }
}

/// One quintuple `(state, read) -> (next, write, move)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rule {
    pub state: u32,
    pub read: Symbol,
    pub next: u32,
    pub write: Symbol,
    pub mv: Move,
}

impl Rule {
    pub fn new(state: u32, read: Symbol, next: u32, write: Symbol, mv: Move) -> Self {
        Rule { state, read, next, write, mv }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MachineError {
    #[error("invalid table: {0}")]
    InvalidTable(String),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("machine has not halted (state {0})")]
    NotHalted(u32),
}

/// A validated machine table. Rule order is preserved as given; two tables
/// with permuted rules are different tables computing the same function.
#[derive(Clone)]
pub struct MachineTable {
    rules: Vec<Rule>,
    states: u32,
    // lookup[state - 1][symbol] is the index of the matching rule
    lookup: Vec<[Option<u32>; 3]>,
}

impl MachineTable {
    pub fn new(rules: Vec<Rule>) -> Result<Self, MachineError> {
        let states = rules.iter().map(|r| r.state.max(r.next)).max().unwrap_or(0);
        let mut lookup = vec![[None; 3]; states as usize];
        for (i, r) in rules.iter().enumerate() {
            if r.state == 0 {
                return Err(MachineError::InvalidTable(format!(
                    "rule {} leaves the final state 0",
                    i + 1
                )));
            }
            let slot = &mut lookup[(r.state - 1) as usize][r.read.slot()];
            if slot.is_some() {
                return Err(MachineError::InvalidTable(format!(
                    "two rules for state {} reading {}",
                    r.state,
                    r.read.as_char()
                )));
            }
            *slot = Some(i as u32);
        }
        Ok(MachineTable { rules, states, lookup })
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Number of non-final states, i.e. the largest state index used.
    pub fn states(&self) -> u32 {
        self.states
    }

    pub fn is_trivial(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn rule_for(&self, state: u32, read: Symbol) -> Option<&Rule> {
        if state == 0 || state > self.states {
            return None;
        }
        self.lookup[(state - 1) as usize][read.slot()].map(|i| &self.rules[i as usize])
    }

    /// The same table with rules sorted by state, then read symbol.
    pub fn canonical(&self) -> MachineTable {
        let mut rules = self.rules.clone();
        rules.sort_by_key(|r| (r.state, r.read));
        MachineTable::new(rules).expect("sorting preserves validity")
    }
}

impl PartialEq for MachineTable {
    fn eq(&self, other: &Self) -> bool {
        self.rules == other.rules
    }
}

impl Eq for MachineTable {}

impl fmt::Debug for MachineTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.rules).finish()
    }
}

/// Text form: one `q a q' a' d` rule per line, decimal states, `_` blank,
/// moves `L`, `R`, `N`. Blank lines are ignored.
impl fmt::Display for MachineTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            writeln!(
                f,
                "{} {} {} {} {}",
                r.state,
                r.read.as_char(),
                r.next,
                r.write.as_char(),
                r.mv.as_char()
            )?;
        }
        Ok(())
    }
}

impl FromStr for MachineTable {
    type Err = MachineError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut rules = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let bad = |reason: &str| MachineError::Parse { line: i + 1, reason: reason.to_string() };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 5 {
                return Err(bad("expected five fields `q a q' a' d`"));
            }
            let state: u32 = fields[0].parse().map_err(|_| bad("bad state"))?;
            let next: u32 = fields[2].parse().map_err(|_| bad("bad next state"))?;
            let symbol = |s: &str| {
                let mut cs = s.chars();
                match (cs.next().and_then(Symbol::from_char), cs.next()) {
                    (Some(sym), None) => Ok(sym),
                    _ => Err(bad("symbol must be 0, 1 or _")),
                }
            };
            let read = symbol(fields[1])?;
            let write = symbol(fields[3])?;
            let mv = match fields[4] {
                "L" => Move::Left,
                "R" => Move::Right,
                "N" => Move::Stay,
                _ => return Err(bad("move must be L, R or N")),
            };
            rules.push(Rule::new(state, read, next, write, mv));
        }
        MachineTable::new(rules)
    }
}

/// The empty table.
pub fn trivial_machine() -> MachineTable {
    MachineTable::new(Vec::new()).expect("empty table is valid")
}

/// A two-way infinite tape, stored as a window that grows on demand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tape {
    cells: Vec<Symbol>,
    origin: i64,
}

impl Tape {
    pub fn with_word(w: &Word) -> Self {
        Tape { cells: w.bits().iter().map(|&b| Symbol::from_bit(b)).collect(), origin: 0 }
    }

    pub fn from_cells(cells: HashMap<i64, Symbol>) -> Self {
        let mut tape = Tape { cells: Vec::new(), origin: 0 };
        for (pos, sym) in cells {
            tape.write(pos, sym);
        }
        tape
    }

    pub fn read(&self, pos: i64) -> Symbol {
        let idx = pos - self.origin;
        if idx < 0 || idx >= self.cells.len() as i64 {
            Symbol::Blank
        } else {
            self.cells[idx as usize]
        }
    }

    pub fn write(&mut self, pos: i64, sym: Symbol) {
        if self.cells.is_empty() {
            if sym == Symbol::Blank {
                return;
            }
            self.origin = pos;
        }
        let mut idx = pos - self.origin;
        if idx < 0 {
            if sym == Symbol::Blank {
                return;
            }
            let grow = (-idx) as usize;
            let mut cells = vec![Symbol::Blank; grow];
            cells.extend_from_slice(&self.cells);
            self.cells = cells;
            self.origin = pos;
            idx = 0;
        } else if idx >= self.cells.len() as i64 {
            if sym == Symbol::Blank {
                return;
            }
            self.cells.resize(idx as usize + 1, Symbol::Blank);
        }
        self.cells[idx as usize] = sym;
    }

    /// Smallest and largest non-blank positions, if any.
    pub fn extent(&self) -> Option<(i64, i64)> {
        let first = self.cells.iter().position(|&s| s != Symbol::Blank)?;
        let last = self.cells.iter().rposition(|&s| s != Symbol::Blank)?;
        Some((self.origin + first as i64, self.origin + last as i64))
    }

    pub fn non_blank_count(&self) -> usize {
        self.cells.iter().filter(|&&s| s != Symbol::Blank).count()
    }
}

/// A machine snapshot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    pub tape: Tape,
    pub head: i64,
    pub state: u32,
    pub steps: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("configuration is already in the final state")]
pub struct AlreadyHalted;

impl Configuration {
    /// Input written from cell 0, head on cell 0, start state 1.
    pub fn initial(input: &Word) -> Self {
        Configuration { tape: Tape::with_word(input), head: 0, state: 1, steps: 0 }
    }

    pub fn is_halted(&self) -> bool {
        self.state == 0
    }

    /// Advances one step in place.
    pub fn advance(&mut self, table: &MachineTable) -> Result<(), AlreadyHalted> {
        if self.state == 0 {
            return Err(AlreadyHalted);
        }
        match table.rule_for(self.state, self.tape.read(self.head)) {
            Some(rule) => {
                self.tape.write(self.head, rule.write);
                self.head += rule.mv.delta();
                self.state = rule.next;
            }
            None => self.state = 0,
        }
        self.steps += 1;
        Ok(())
    }
}

pub fn step(table: &MachineTable, c: &Configuration) -> Result<Configuration, AlreadyHalted> {
    let mut next = c.clone();
    next.advance(table)?;
    Ok(next)
}

/// The maximal non-blank word around the head of a halted configuration.
pub fn output_word(c: &Configuration) -> Result<Word, MachineError> {
    if c.state != 0 {
        return Err(MachineError::NotHalted(c.state));
    }
    Ok(word_under_head(&c.tape, c.head))
}

fn word_under_head(tape: &Tape, head: i64) -> Word {
    let bit = |pos: i64| match tape.read(pos) {
        Symbol::Zero => Some(false),
        Symbol::One => Some(true),
        Symbol::Blank => None,
    };
    if bit(head).is_none() {
        return Word::empty();
    }
    let mut lo = head;
    while bit(lo - 1).is_some() {
        lo -= 1;
    }
    let mut bits = Vec::new();
    let mut pos = lo;
    while let Some(b) = bit(pos) {
        bits.push(b);
        pos += 1;
    }
    Word::new(bits)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunResult {
    Halted { output: Word, steps: u64 },
    OutOfFuel { steps: u64 },
}

impl RunResult {
    pub fn steps(&self) -> u64 {
        match self {
            RunResult::Halted { steps, .. } | RunResult::OutOfFuel { steps } => *steps,
        }
    }

    pub fn output(&self) -> Option<&Word> {
        match self {
            RunResult::Halted { output, .. } => Some(output),
            RunResult::OutOfFuel { .. } => None,
        }
    }
}

/// Runs `table` on `input` for at most `fuel` steps.
pub fn run(table: &MachineTable, input: &Word, fuel: u64) -> RunResult {
    let mut c = Configuration::initial(input);
    while c.state != 0 {
        if c.steps >= fuel {
            return RunResult::OutOfFuel { steps: c.steps };
        }
        c.advance(table).expect("state checked above");
    }
    RunResult::Halted { output: word_under_head(&c.tape, c.head), steps: c.steps }
}
