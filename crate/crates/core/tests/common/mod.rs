//! Reference implementations used as oracles. They share no code with the
//! library; most work on small integers with plain loops.

#![allow(dead_code)]

use std::collections::HashMap;

use num_bigint::BigUint;

/// Literal as a signed variable index.
pub type Clause = Vec<i32>;

pub fn cantor(x: u128, y: u128) -> u128 {
    (x + y) * (x + y + 1) / 2 + y
}

pub fn uncantor(z: u128) -> (u128, u128) {
    let mut d = 0u128;
    while (d + 1) * (d + 2) / 2 <= z {
        d += 1;
    }
    let y = z - d * (d + 1) / 2;
    (d - y, y)
}

/// All words of length `len` in lexicographic order.
pub fn words_of_len(len: usize) -> Vec<String> {
    (0..1u64 << len).map(|v| (0..len).rev().map(|i| if v >> i & 1 == 1 { '1' } else { '0' }).collect()).collect()
}

pub fn cantor_big(x: &BigUint, y: &BigUint) -> BigUint {
    let s = x + y;
    (&s * (&s + 1u32)) / 2u32 + y
}

/// The number a nonempty word names, at any length.
pub fn word_number_big(w: &str) -> BigUint {
    let mut v = BigUint::from(1u32);
    for c in w.chars() {
        v = v * 2u32 + u32::from(c == '1');
    }
    v - 2u32
}

/// Words in canonical order, shortest first, as many as requested.
pub fn canonical_words(count: usize) -> Vec<String> {
    let mut out = Vec::with_capacity(count);
    let mut len = 0;
    while out.len() < count {
        out.extend(words_of_len(len));
        len += 1;
    }
    out.truncate(count);
    out
}

pub fn word_position(w: &str) -> u128 {
    let v = w.chars().fold(0u128, |acc, c| acc * 2 + (c == '1') as u128);
    (1u128 << w.len()) - 1 + v
}

pub fn position_word(i: u128) -> String {
    let mut len = 0;
    while (1u128 << (len + 1)) - 1 <= i {
        len += 1;
    }
    let v = i - ((1u128 << len) - 1);
    (0..len).rev().map(|b| if v >> b & 1 == 1 { '1' } else { '0' }).collect()
}

/// The number a nonempty word names.
pub fn word_number(w: &str) -> Option<u128> {
    (!w.is_empty()).then(|| word_position(w) - 1)
}

pub fn number_word(n: u128) -> String {
    position_word(n + 1)
}

pub fn encode_formula(clauses: &[Clause]) -> String {
    let mut s = String::new();
    for (i, c) in clauses.iter().enumerate() {
        if i > 0 {
            s.push_str("00");
        }
        for &l in c {
            s.push(if l > 0 { '0' } else { '1' });
            s.push_str(&"1".repeat(l.unsigned_abs() as usize));
            s.push('0');
        }
    }
    s
}

pub fn decode_formula(w: &str) -> Option<Vec<Clause>> {
    let b: Vec<char> = w.chars().collect();
    let mut i = 0;
    let mut clauses = Vec::new();
    let mut cur = Vec::new();
    while i < b.len() {
        let neg = b[i] == '1';
        i += 1;
        let mut k = 0;
        while i < b.len() && b[i] == '1' {
            k += 1;
            i += 1;
        }
        if i >= b.len() {
            return None;
        }
        i += 1;
        if k == 0 {
            if neg || cur.is_empty() || i >= b.len() {
                return None;
            }
            clauses.push(std::mem::take(&mut cur));
        } else {
            cur.push(if neg { -k } else { k });
        }
    }
    if !cur.is_empty() {
        clauses.push(cur);
    }
    Some(clauses)
}

pub fn var_count(clauses: &[Clause]) -> usize {
    clauses.iter().flatten().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0)
}

/// Truth-table evaluation; `assignment[i]` is variable `i + 1`.
pub fn satisfies(clauses: &[Clause], assignment: &[bool]) -> bool {
    clauses.iter().all(|c| c.iter().any(|&l| assignment[l.unsigned_abs() as usize - 1] == (l > 0)))
}

pub fn bits(w: &str) -> Vec<bool> {
    w.chars().map(|c| c == '1').collect()
}

/// The verifier on small integers.
pub fn verify_small(z: u128) -> bool {
    if z == 0 {
        return true;
    }
    let (x, y) = uncantor(z);
    let Some(f) = decode_formula(&number_word(x)) else { return false };
    let a = number_word(y);
    a.len() == var_count(&f) && satisfies(&f, &bits(&a))
}

/// Least satisfying assignment as a number, 0 if none.
pub fn solve_small(x: u128) -> u128 {
    let Some(f) = decode_formula(&number_word(x)) else { return 0 };
    let n = var_count(&f);
    if n == 0 {
        return 0;
    }
    words_of_len(n)
        .into_iter()
        .find(|a| satisfies(&f, &bits(a)))
        .and_then(|a| word_number(&a))
        .unwrap_or(0)
}

/// Every clause is a nonempty set of literals over `1..=vars`, listed by
/// increasing variable with the positive literal first.
pub fn all_clauses(vars: i32) -> Vec<Clause> {
    let lits: Vec<i32> = (1..=vars).flat_map(|v| [v, -v]).collect();
    (1u32..1 << lits.len())
        .map(|mask| lits.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &l)| l).collect())
        .collect()
}

/// Rule `(state, read) -> (next, write, move)` over symbols `'0' '1' '_'`.
pub type SimpleRules = HashMap<(u32, char), (u32, char, i64)>;

/// A direct interpreter: returns `(output, steps)` or `None` when `fuel`
/// steps pass without halting.
pub fn simulate(rules: &SimpleRules, input: &str, fuel: u64) -> Option<(String, u64)> {
    let mut tape: HashMap<i64, char> = input.chars().enumerate().map(|(i, c)| (i as i64, c)).collect();
    let (mut head, mut state, mut steps) = (0i64, 1u32, 0u64);
    while state != 0 {
        if steps == fuel {
            return None;
        }
        let read = *tape.get(&head).unwrap_or(&'_');
        match rules.get(&(state, read)) {
            Some(&(next, write, mv)) => {
                tape.insert(head, write);
                head += mv;
                state = next;
            }
            None => state = 0,
        }
        steps += 1;
    }
    let at = |p: i64| tape.get(&p).copied().filter(|&c| c != '_');
    if at(head).is_none() {
        return Some((String::new(), steps));
    }
    let mut lo = head;
    while at(lo - 1).is_some() {
        lo -= 1;
    }
    let mut out = String::new();
    while let Some(c) = at(lo) {
        out.push(c);
        lo += 1;
    }
    Some((out, steps))
}

/// `len^e + e`, saturating.
pub fn poly_bound(e: u64, len: u64) -> u128 {
    let mut p: u128 = 1;
    for _ in 0..e {
        p = p.saturating_mul(len as u128);
    }
    p.saturating_add(e as u128)
}

/// Table text in the decimal rule format.
pub fn rules_text(rules: &[(u32, char, u32, char, char)]) -> String {
    rules.iter().map(|(q, a, q2, b, d)| format!("{q} {a} {q2} {b} {d}")).collect::<Vec<_>>().join("\n")
}

pub fn to_simple(rules: &[(u32, char, u32, char, char)]) -> SimpleRules {
    rules
        .iter()
        .map(|&(q, a, q2, b, d)| ((q, a), (q2, b, match d { 'L' => -1, 'R' => 1, _ => 0 })))
        .collect()
}

/// Recurrence for the finite levels: `F_0 = 0`, `F_1(x) = 2x`, and
/// `F_{k+1}(x)` iterates `F_k` x times from 1.
pub fn fgh_finite(k: u32, x: u128) -> u128 {
    match k {
        0 => 0,
        1 => 2 * x,
        _ => (0..x).fold(1, |acc, _| fgh_finite(k - 1, acc)),
    }
}
