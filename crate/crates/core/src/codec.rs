//! Goedel numbering of machines and clocked pairs.
//!
//! A machine is serialized as a string over the 8-character alphabet
//! `0 1 _ L R N`, space and newline, each character packed into 3 bits
//! (`'0'` = 000 through `'\n'` = 111). The index of the machine is the
//! position of the packed word in the canonical enumeration. Indices whose
//! word does not parse, or parses to a non-canonical string, code the
//! trivial machine.
//!
//! Layouts, by first character:
//!
//! ```text
//! plain table   rules "q a q' a' d" joined by newlines, states in binary
//! '_'           threshold program: '_' [n, fixed width] [hierarchy code] "RLN"
//! 'L'           clocked pair: 'L' [clock param] [clock program] [body]
//! ```
//!
//! The clock program is `'L'` for `|x|^p + p`, or `'R'` followed by the
//! hierarchy code of `α` for the exponent `F_α(k)`. The body is a plain
//! table, a threshold program, or `'N' [length of first] pair pair` for a
//! composite of two clocked pairs.
//!
//! A numeric field `[v]` is `'N'` repeated `k` times, a space, then `k`
//! characters read as base-8 digits. Variable fields use the fewest digits;
//! fixed-width fields always use the same count, so the field contributes
//! `v * 2^t` to the index for a fixed `t`.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::clock::{ClockKind, ClockSpec, ClockedMachine, ClockedRun, MachineBody};
use crate::fgh::HierarchyIndex;
use crate::machine::{self, trivial_machine, MachineTable, Move, Rule, RunResult, Symbol};
use crate::ordinal::{Ordinal, Term};
use crate::sat::FuelExhausted;
use crate::threshold::ThresholdMachine;
use crate::words::{index_word, word_index, Word};

/// Budget for materializing clocks and thresholds while decoding.
pub const DECODE_BUDGET: u64 = 1_000_000;

const ALPHABET: [char; 8] = ['0', '1', '_', 'L', 'R', 'N', ' ', '\n'];

const C0: u8 = 0;
const C1: u8 = 1;
const BLANK: u8 = 2;
const L: u8 = 3;
const R: u8 = 4;
const N: u8 = 5;
const SPACE: u8 = 6;
const NEWLINE: u8 = 7;

const MAX_ORDINAL_DEPTH: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodecError {
    #[error("invalid clocked pair: {0}")]
    InvalidPair(String),
    #[error("character {0:?} is outside the code alphabet")]
    BadChar(char),
}

/// What an index decodes to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CodedMachine {
    Plain(MachineBody),
    Clocked(ClockedMachine),
}

impl CodedMachine {
    pub fn is_clocked(&self) -> bool {
        matches!(self, CodedMachine::Clocked(_))
    }

    /// The flat transition table, when the machine is one.
    pub fn table(&self) -> Option<&MachineTable> {
        let body = match self {
            CodedMachine::Plain(b) => b,
            CodedMachine::Clocked(c) => &c.body,
        };
        match body {
            MachineBody::Table(t) => Some(t),
            MachineBody::Threshold(q) => Some(q.table()),
            MachineBody::Composite(..) => None,
        }
    }

    /// Output on `input`. Clocked machines follow the clocked semantics;
    /// anything that needs more than `fuel` steps is an error.
    pub fn run(&self, input: &Word, fuel: u64) -> Result<Word, FuelExhausted> {
        match self {
            CodedMachine::Plain(b) => match b.run(input, fuel) {
                RunResult::Halted { output, .. } => Ok(output),
                RunResult::OutOfFuel { .. } => Err(FuelExhausted),
            },
            CodedMachine::Clocked(c) => c.run_with_fuel(input, fuel).map(|r| r.output).ok_or(FuelExhausted),
        }
    }

    /// Like [`CodedMachine::run`], with the step count and whether a clock
    /// cut the run.
    pub fn run_detailed(&self, input: &Word, fuel: u64) -> Result<ClockedRun, FuelExhausted> {
        match self {
            CodedMachine::Plain(b) => match b.run(input, fuel) {
                RunResult::Halted { output, steps } => Ok(ClockedRun { output, steps, cut: false }),
                RunResult::OutOfFuel { .. } => Err(FuelExhausted),
            },
            CodedMachine::Clocked(c) => c.run_with_fuel(input, fuel).ok_or(FuelExhausted),
        }
    }
}

fn trivial() -> CodedMachine {
    CodedMachine::Plain(MachineBody::Table(trivial_machine()))
}

pub fn codes_to_string(codes: &[u8]) -> String {
    codes.iter().map(|&c| ALPHABET[c as usize]).collect()
}

pub fn string_to_codes(s: &str) -> Result<Vec<u8>, CodecError> {
    s.chars()
        .map(|ch| ALPHABET.iter().position(|&a| a == ch).map(|p| p as u8).ok_or(CodecError::BadChar(ch)))
        .collect()
}

pub fn codes_to_index(codes: &[u8]) -> BigUint {
    let mut bits = Vec::with_capacity(codes.len() * 3);
    for &c in codes {
        bits.extend([c & 4 != 0, c & 2 != 0, c & 1 != 0]);
    }
    word_index(&Word::new(bits))
}

/// The character codes of an index, if its word length is a multiple of 3.
pub fn index_to_codes(i: &BigUint) -> Option<Vec<u8>> {
    let word = index_word(i);
    let bits = word.bits();
    if bits.len() % 3 != 0 {
        return None;
    }
    Some(bits.chunks(3).map(|b| (b[0] as u8) << 2 | (b[1] as u8) << 1 | b[2] as u8).collect())
}

/// The serialization string of an index, if it has one.
pub fn serialization(i: &BigUint) -> Option<String> {
    index_to_codes(i).map(|c| codes_to_string(&c))
}

/// Characters used by a fixed-width field of `bits` bits.
pub fn field_chars(bits: u32) -> usize {
    (bits as usize).div_ceil(3)
}

fn push_field(out: &mut Vec<u8>, v: &BigUint, chars: Option<usize>) -> Result<(), CodecError> {
    let mut digits = if v.is_zero() { Vec::new() } else { v.to_radix_be(8) };
    if let Some(c) = chars {
        if digits.len() > c {
            return Err(CodecError::InvalidPair(format!("{v} does not fit in {c} field characters")));
        }
        let mut padded = vec![0; c - digits.len()];
        padded.append(&mut digits);
        digits = padded;
    }
    out.extend(std::iter::repeat(N).take(digits.len()));
    out.push(SPACE);
    out.extend(digits);
    Ok(())
}

fn push_binary(out: &mut Vec<u8>, v: u32) {
    if v == 0 {
        out.push(C0);
        return;
    }
    let bits = 32 - v.leading_zeros();
    for i in (0..bits).rev() {
        out.push(((v >> i) & 1) as u8);
    }
}

fn symbol_code(s: Symbol) -> u8 {
    match s {
        Symbol::Zero => C0,
        Symbol::One => C1,
        Symbol::Blank => BLANK,
    }
}

fn move_code(m: Move) -> u8 {
    match m {
        Move::Left => L,
        Move::Right => R,
        Move::Stay => N,
    }
}

fn table_codes(t: &MachineTable) -> Vec<u8> {
    let mut out = Vec::new();
    for (i, r) in t.rules().iter().enumerate() {
        if i > 0 {
            out.push(NEWLINE);
        }
        push_binary(&mut out, r.state);
        out.push(SPACE);
        out.push(symbol_code(r.read));
        out.push(SPACE);
        push_binary(&mut out, r.next);
        out.push(SPACE);
        out.push(symbol_code(r.write));
        out.push(SPACE);
        out.push(move_code(r.mv));
    }
    out
}

/// The table's serialization string.
pub fn table_text(t: &MachineTable) -> String {
    codes_to_string(&table_codes(t))
}

/// Index of a plain table, keeping its rule order.
pub fn encode_table(t: &MachineTable) -> BigUint {
    codes_to_index(&table_codes(t))
}

fn ordinal_bits(o: &Ordinal, out: &mut Vec<bool>) {
    for t in o.terms() {
        out.push(true);
        ordinal_bits(&t.exponent, out);
        out.extend(std::iter::repeat(true).take((t.coefficient - 1) as usize));
        out.push(false);
    }
    out.push(false);
}

/// The integer coding a hierarchy index: binary `1 1` for the ε₀ diagonal,
/// `1 0 <ordinal>` otherwise, where an ordinal is its terms followed by `0`
/// and a term `ω^e·c` is `1 <e> 1^(c-1) 0`.
pub fn hierarchy_code(idx: &HierarchyIndex) -> BigUint {
    let mut bits = vec![true];
    match idx {
        HierarchyIndex::EpsilonDiagonal => bits.push(true),
        HierarchyIndex::Ordinal(o) => {
            bits.push(false);
            ordinal_bits(o, &mut bits);
        }
    }
    Word::new(bits).value()
}

fn read_ordinal(bits: &[bool], pos: &mut usize, depth: usize) -> Option<Ordinal> {
    if depth > MAX_ORDINAL_DEPTH {
        return None;
    }
    let mut terms = Vec::new();
    loop {
        let b = *bits.get(*pos)?;
        *pos += 1;
        if !b {
            break;
        }
        let exponent = read_ordinal(bits, pos, depth + 1)?;
        let mut coefficient: u64 = 1;
        while *bits.get(*pos)? {
            coefficient = coefficient.checked_add(1)?;
            *pos += 1;
        }
        *pos += 1;
        terms.push(Term { exponent, coefficient });
    }
    Ordinal::from_terms(terms)
}

pub fn decode_hierarchy_code(v: &BigUint) -> Option<HierarchyIndex> {
    if v.is_zero() {
        return None;
    }
    let bits: Vec<bool> = (0..v.bits()).rev().map(|i| v.bit(i)).collect();
    match &bits[1..] {
        [true] => Some(HierarchyIndex::EpsilonDiagonal),
        [false, rest @ ..] => {
            let mut pos = 0;
            let o = read_ordinal(rest, &mut pos, 0)?;
            (pos == rest.len()).then_some(HierarchyIndex::Ordinal(o))
        }
        _ => None,
    }
}

fn clock_codes(c: &ClockSpec, out: &mut Vec<u8>) -> Result<(), CodecError> {
    out.push(L);
    let width = c.param_width().map(field_chars);
    push_field(out, &BigUint::from(c.parameter()), width)?;
    match c.kind() {
        ClockKind::PlainPoly(_) => out.push(L),
        ClockKind::Parametrized { alpha, .. } => {
            out.push(R);
            push_field(out, &hierarchy_code(&HierarchyIndex::Ordinal(alpha.clone())), None)?;
        }
    }
    Ok(())
}

fn threshold_codes(q: &ThresholdMachine, out: &mut Vec<u8>) -> Result<(), CodecError> {
    out.push(BLANK);
    push_field(out, &BigUint::from(q.n()), Some(field_chars(q.width())))?;
    push_field(out, &hierarchy_code(q.index()), None)?;
    out.extend([R, L, N]);
    Ok(())
}

fn body_codes(b: &MachineBody, out: &mut Vec<u8>) -> Result<(), CodecError> {
    match b {
        MachineBody::Table(t) => out.extend(table_codes(t)),
        MachineBody::Threshold(q) => threshold_codes(q, out)?,
        MachineBody::Composite(first, second) => {
            let a = sigma_codes(first)?;
            out.push(N);
            push_field(out, &BigUint::from(a.len()), None)?;
            out.extend(a);
            out.extend(sigma_codes(second)?);
        }
    }
    Ok(())
}

fn sigma_codes(p: &ClockedMachine) -> Result<Vec<u8>, CodecError> {
    let mut out = Vec::new();
    clock_codes(&p.clock, &mut out)?;
    body_codes(&p.body, &mut out)?;
    Ok(out)
}

fn coded_codes(m: &CodedMachine) -> Result<Vec<u8>, CodecError> {
    match m {
        CodedMachine::Clocked(p) => sigma_codes(p),
        CodedMachine::Plain(b @ (MachineBody::Table(_) | MachineBody::Threshold(_))) => {
            let mut out = Vec::new();
            body_codes(b, &mut out)?;
            Ok(out)
        }
        CodedMachine::Plain(MachineBody::Composite(..)) => {
            Err(CodecError::InvalidPair("a composite has no unclocked coding".into()))
        }
    }
}

/// The embedding of clocked pairs into indices.
pub fn sigma_embed(p: &ClockedMachine) -> Result<BigUint, CodecError> {
    sigma_codes(p).map(|c| codes_to_index(&c))
}

/// Index of a threshold program run without a clock.
pub fn encode_threshold(q: &ThresholdMachine) -> Result<BigUint, CodecError> {
    let mut out = Vec::new();
    threshold_codes(q, &mut out)?;
    Ok(codes_to_index(&out))
}

/// Index of a clock on its own, which is also the index of the clock
/// paired with the trivial machine.
pub fn clock_index(c: &ClockSpec) -> Result<BigUint, CodecError> {
    let mut out = Vec::new();
    clock_codes(c, &mut out)?;
    Ok(codes_to_index(&out))
}

pub fn encode_coded(m: &CodedMachine) -> Result<BigUint, CodecError> {
    coded_codes(m).map(|c| codes_to_index(&c))
}

struct Reader<'a> {
    codes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn peek(&self) -> Option<u8> {
        self.codes.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Option<()> {
        (self.peek()? == c).then(|| self.pos += 1)
    }

    fn take(&mut self, n: usize) -> Option<&'a [u8]> {
        let s = self.codes.get(self.pos..self.pos.checked_add(n)?)?;
        self.pos += n;
        Some(s)
    }

    fn rest(&mut self) -> &'a [u8] {
        let s = &self.codes[self.pos..];
        self.pos = self.codes.len();
        s
    }

    /// A numeric field and its digit count.
    fn field(&mut self) -> Option<(BigUint, usize)> {
        let mut k = 0;
        while self.peek()? == N {
            k += 1;
            self.pos += 1;
        }
        self.expect(SPACE)?;
        let digits = self.take(k)?;
        let v = if k == 0 { BigUint::zero() } else { BigUint::from_radix_be(digits, 8)? };
        Some((v, k))
    }
}

fn parse_binary(s: &[u8]) -> Option<u32> {
    if s.is_empty() || (s.len() > 1 && s[0] == C0) || s.len() > 32 {
        return None;
    }
    s.iter().try_fold(0u32, |acc, &c| match c {
        C0 | C1 => Some(acc << 1 | c as u32),
        _ => None,
    })
}

fn parse_symbol(s: &[u8]) -> Option<Symbol> {
    match s {
        [C0] => Some(Symbol::Zero),
        [C1] => Some(Symbol::One),
        [BLANK] => Some(Symbol::Blank),
        _ => None,
    }
}

fn parse_move(s: &[u8]) -> Option<Move> {
    match s {
        [L] => Some(Move::Left),
        [R] => Some(Move::Right),
        [N] => Some(Move::Stay),
        _ => None,
    }
}

fn parse_table(codes: &[u8]) -> Option<MachineTable> {
    if codes.is_empty() {
        return Some(trivial_machine());
    }
    let mut rules = Vec::new();
    for line in codes.split(|&c| c == NEWLINE) {
        let f: Vec<&[u8]> = line.split(|&c| c == SPACE).collect();
        let [q, a, q2, a2, d] = f.as_slice() else { return None };
        rules.push(Rule::new(parse_binary(q)?, parse_symbol(a)?, parse_binary(q2)?, parse_symbol(a2)?, parse_move(d)?));
    }
    MachineTable::new(rules).ok()
}

fn parse_threshold(r: &mut Reader) -> Option<ThresholdMachine> {
    r.expect(BLANK)?;
    let (n, chars) = r.field()?;
    let (code, _) = r.field()?;
    r.expect(R)?;
    r.expect(L)?;
    r.expect(N)?;
    let index = decode_hierarchy_code(&code)?;
    let width = u32::try_from(chars.checked_mul(3)?).ok()?;
    ThresholdMachine::new(index, n.to_u64()?, width, DECODE_BUDGET).ok()
}

fn parse_body(codes: &[u8]) -> Option<MachineBody> {
    let mut r = Reader { codes, pos: 0 };
    let body = match r.peek() {
        None | Some(C1) => MachineBody::Table(parse_table(codes)?),
        Some(BLANK) => MachineBody::Threshold(Arc::new(parse_threshold(&mut r)?)),
        Some(N) => {
            r.expect(N)?;
            let (len, _) = r.field()?;
            let first = parse_sigma(r.take(len.to_usize()?)?)?;
            let second = parse_sigma(r.rest())?;
            MachineBody::Composite(Box::new(first), Box::new(second))
        }
        Some(_) => return None,
    };
    if !matches!(body, MachineBody::Table(_)) && r.pos != codes.len() {
        return None;
    }
    Some(body)
}

fn parse_sigma(codes: &[u8]) -> Option<ClockedMachine> {
    let mut r = Reader { codes, pos: 0 };
    r.expect(L)?;
    let (param, chars) = r.field()?;
    let width = u32::try_from(chars.checked_mul(3)?).ok()?;
    let param = param.to_u64()?;
    let clock = match r.peek()? {
        L => {
            r.pos += 1;
            ClockSpec::poly(param)
        }
        R => {
            r.pos += 1;
            let (code, _) = r.field()?;
            let HierarchyIndex::Ordinal(alpha) = decode_hierarchy_code(&code)? else { return None };
            ClockSpec::parametrized(alpha, param, DECODE_BUDGET).ok()?
        }
        _ => return None,
    };
    let body = parse_body(r.rest())?;
    Some(ClockedMachine { body, clock: clock.with_param_width(width) })
}

fn parse_coded(codes: &[u8]) -> Option<CodedMachine> {
    let m = match codes.first() {
        Some(&L) => CodedMachine::Clocked(parse_sigma(codes)?),
        _ => CodedMachine::Plain(parse_body(codes)?),
    };
    if let CodedMachine::Plain(MachineBody::Composite(..)) = m {
        return None;
    }
    // only canonical strings code anything
    (coded_codes(&m).ok()? == codes).then_some(m)
}

/// Decodes any natural number; garbage codes the trivial machine.
pub fn decode_index(i: &BigUint) -> CodedMachine {
    index_to_codes(i).and_then(|c| parse_coded(&c)).unwrap_or_else(trivial)
}

/// Decodes to a flat table: plain tables as themselves, threshold programs
/// as their dispatch tables, everything else as the trivial machine.
pub fn decode_table(i: &BigUint) -> MachineTable {
    match decode_index(i) {
        CodedMachine::Plain(MachineBody::Table(t)) => t,
        CodedMachine::Plain(MachineBody::Threshold(q)) => q.table().clone(),
        _ => trivial_machine(),
    }
}

/// Whether `i` codes a clocked pair.
pub fn is_sigma_image(i: &BigUint) -> bool {
    decode_index(i).is_clocked()
}

/// Runs the machine coded by `i` without a clock. Clocked pairs use their
/// clocked semantics.
pub fn run_index(i: &BigUint, input: &Word, fuel: u64) -> Result<Word, FuelExhausted> {
    decode_index(i).run(input, fuel)
}

/// The plain interpreter on a decoded flat table.
pub fn run_table_index(i: &BigUint, input: &Word, fuel: u64) -> RunResult {
    machine::run(&decode_table(i), input, fuel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clock::clocked_run;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn t(s: &str) -> MachineTable {
        s.parse().unwrap()
    }

    fn sample_tables() -> Vec<MachineTable> {
        vec![
            trivial_machine(),
            t("1 _ 0 1 N"),
            t("1 0 1 1 R\n1 1 1 0 R\n1 _ 2 _ L\n2 0 2 0 L\n2 1 2 1 L\n2 _ 0 _ R"),
            t("3 1 0 0 N\n1 _ 3 1 L"),
            t("1 _ 1 _ N\n1 0 1 0 N\n1 1 1 1 N"),
        ]
    }

    #[test]
    fn trivial_machine_is_index_zero() {
        assert_eq!(encode_table(&trivial_machine()), BigUint::zero());
        assert_eq!(decode_index(&BigUint::zero()), trivial());
        assert!(!is_sigma_image(&BigUint::zero()));
    }

    #[test]
    fn table_roundtrip() {
        for tab in sample_tables() {
            let i = encode_table(&tab);
            let d = decode_index(&i);
            assert_eq!(d.table().unwrap(), &tab);
            assert_eq!(d.table().unwrap().canonical(), tab.canonical());
            assert!(!d.is_clocked());
        }
        assert_eq!(table_text(&t("3 1 0 0 N")), "11 1 0 0 N");
    }

    #[test]
    fn permuted_rules_get_different_indices() {
        let a = t("1 0 1 1 R\n1 _ 0 _ N");
        let b = t("1 _ 0 _ N\n1 0 1 1 R");
        assert_ne!(encode_table(&a), encode_table(&b));
        for x in ["", "0", "00", "010"] {
            assert_eq!(machine::run(&a, &w(x), 100), machine::run(&b, &w(x), 100));
        }
    }

    #[test]
    fn garbage_decodes_to_trivial() {
        // word length not a multiple of 3
        assert_eq!(decode_index(&BigUint::from(1u32)), trivial());
        for s in ["1 0", "01 0 0 0 N", "1 0 1 1 R\n", "0 0 1 1 R", "1 0 1 1 R\n1 0 1 0 L", "L", "_ RLN"] {
            let i = codes_to_index(&string_to_codes(s).unwrap());
            assert_eq!(decode_index(&i), trivial(), "{s:?}");
        }
        // leading zero digit in a variable field
        let digits = hierarchy_code(&Ordinal::nat(1).into()).to_radix_be(8);
        let mut codes = string_to_codes("L R").unwrap();
        codes.extend(std::iter::repeat(N).take(digits.len()));
        codes.push(SPACE);
        codes.extend(&digits);
        assert!(is_sigma_image(&codes_to_index(&codes)));
        let mut padded = string_to_codes("L R").unwrap();
        padded.extend(std::iter::repeat(N).take(digits.len() + 1));
        padded.push(SPACE);
        padded.push(C0);
        padded.extend(&digits);
        assert_eq!(decode_index(&codes_to_index(&padded)), trivial());
    }

    #[test]
    fn decode_is_total() {
        for i in 0..100_000u32 {
            let _ = decode_index(&BigUint::from(i));
        }
    }

    #[test]
    fn hierarchy_codes_roundtrip() {
        let idx: Vec<HierarchyIndex> = ["0", "1", "5", "w", "w+3", "w^2*3+w+1", "w^w", "w^(w+1)*2", "e0"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        for i in &idx {
            assert_eq!(decode_hierarchy_code(&hierarchy_code(i)).as_ref(), Some(i), "{i}");
        }
        // binary 1 0 1 0 0 0 is F_1
        assert_eq!(hierarchy_code(&Ordinal::nat(1).into()), BigUint::from(0b101000u32));
        assert_eq!(decode_hierarchy_code(&BigUint::zero()), None);
        assert_eq!(decode_hierarchy_code(&BigUint::from(0b1010u32)), None);
        // ω^0 + ω^1 is not in normal form
        let bad = Word::new(vec![true, false, true, false, true, true, false, false, false, false]).value();
        assert_eq!(decode_hierarchy_code(&bad), None);
    }

    #[test]
    fn sigma_examples() {
        let p = ClockedMachine::new(trivial_machine(), ClockSpec::poly(1));
        let i = sigma_embed(&p).unwrap();
        assert!(is_sigma_image(&i));
        assert_eq!(i, clock_index(&ClockSpec::poly(1)).unwrap());
        let CodedMachine::Clocked(d) = decode_index(&i) else { panic!() };
        for len in 0..=6usize {
            for v in 0..(1u64 << len) {
                let x = Word::from_value(&BigUint::from(v), len);
                let r = clocked_run(&d, &x);
                assert_eq!(r, clocked_run(&p, &x));
                assert!(r.steps <= len as u64 + 1);
            }
        }
        assert!(!is_sigma_image(&encode_table(&trivial_machine())));
    }

    #[test]
    fn sigma_roundtrip_parametrized_and_composite() {
        let c = ClockSpec::parametrized(Ordinal::omega(), 2, 1000).unwrap().with_param_width(16);
        let p1 = ClockedMachine::new(t("1 _ 0 1 N"), c);
        let p2 = ClockedMachine::new(t("1 1 1 0 R"), ClockSpec::poly(2));
        let comp = crate::clock::compose(&p1, &p2).unwrap();
        for p in [&p1, &p2, &comp] {
            let i = sigma_embed(p).unwrap();
            let CodedMachine::Clocked(d) = decode_index(&i) else { panic!("{p:?}") };
            assert_eq!(sigma_embed(&d).unwrap(), i);
            for x in ["", "1", "0110"] {
                assert_eq!(clocked_run(&d, &w(x)), clocked_run(p, &w(x)));
            }
        }
    }

    #[test]
    fn unmaterializable_clock_decodes_to_trivial() {
        let mut codes = vec![L];
        push_field(&mut codes, &BigUint::from(6u32), None).unwrap();
        codes.push(R);
        push_field(&mut codes, &hierarchy_code(&Ordinal::omega().into()), None).unwrap();
        // F_ω(6) is far beyond the decode budget
        assert_eq!(decode_index(&codes_to_index(&codes)), trivial());
    }

    #[test]
    fn threshold_program_roundtrip() {
        let q = ThresholdMachine::new(Ordinal::nat(1).into(), 3, 16, 1000).unwrap();
        let i = encode_threshold(&q).unwrap();
        let d = decode_index(&i);
        assert_eq!(d.table(), Some(q.table()));
        assert!(!d.is_clocked());
        // oversized thresholds fall back
        let mut codes = vec![BLANK];
        push_field(&mut codes, &BigUint::from(20u32), Some(6)).unwrap();
        push_field(&mut codes, &hierarchy_code(&Ordinal::nat(2).into()), None).unwrap();
        codes.extend([R, L, N]);
        assert_eq!(decode_index(&codes_to_index(&codes)), trivial());
    }

    #[test]
    fn fixed_width_overflow_is_rejected() {
        let c = ClockSpec::poly(300).with_param_width(6);
        assert!(matches!(clock_index(&c), Err(CodecError::InvalidPair(_))));
    }

    fn arb_table() -> impl Strategy<Value = MachineTable> {
        let sym = prop_oneof![Just(Symbol::Zero), Just(Symbol::One), Just(Symbol::Blank)];
        let mv = prop_oneof![Just(Move::Left), Just(Move::Right), Just(Move::Stay)];
        proptest::collection::vec((1u32..6, sym.clone(), 0u32..6, sym, mv), 0..10).prop_map(|rs| {
            let mut seen = std::collections::HashSet::new();
            let rules = rs
                .into_iter()
                .filter(|(q, a, ..)| seen.insert((*q, *a)))
                .map(|(q, a, q2, a2, d)| Rule::new(q, a, q2, a2, d))
                .collect();
            MachineTable::new(rules).unwrap()
        })
    }

    proptest! {
        #[test]
        fn encode_decode_roundtrip(tab in arb_table()) {
            let d = decode_index(&encode_table(&tab));
            prop_assert_eq!(d.table(), Some(&tab));
        }

        #[test]
        fn sigma_is_recognized(tab in arb_table(), p in 0u64..9) {
            let pair = ClockedMachine::new(tab, ClockSpec::poly(p));
            let i = sigma_embed(&pair).unwrap();
            prop_assert!(is_sigma_image(&i));
            prop_assert_eq!(decode_index(&i), CodedMachine::Clocked(pair.clone()).normalized());
        }
    }

    impl CodedMachine {
        // the decoder records every clock parameter field as fixed width
        fn normalized(self) -> CodedMachine {
            match self {
                CodedMachine::Clocked(mut c) => {
                    let chars = if c.clock.parameter() == 0 { 0 } else { (64 - c.clock.parameter().leading_zeros()).div_ceil(3) };
                    c.clock = c.clock.clone().with_param_width(chars * 3);
                    CodedMachine::Clocked(c)
                }
                other => other,
            }
        }
    }
}
