mod common;

use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use tmlab::clock::{compose, ClockSpec, ClockedMachine};
use tmlab::codec::{self, CodedMachine};
use tmlab::fgh::HierarchyIndex;
use tmlab::machine::{trivial_machine, MachineTable};
use tmlab::ordinal::Ordinal;
use tmlab::par::Exec;
use tmlab::qfam;
use tmlab::registry::FRegistry;
use tmlab::sat::{self, SearchOutcome};
use tmlab::words::{numeral_word, word_numeral, Word};

fn nat(k: u64) -> HierarchyIndex {
    Ordinal::nat(k).into()
}

fn random_table(rng: &mut ChaCha8Rng) -> MachineTable {
    let states = rng.gen_range(1..=4u32);
    let syms = ['0', '1', '_'];
    let mut rules = Vec::new();
    for q in 1..=states {
        for a in syms {
            if rng.gen_bool(0.8) {
                rules.push((q, a, rng.gen_range(0..=states), syms[rng.gen_range(0..3)], ['L', 'R', 'N'][rng.gen_range(0..3)]));
            }
        }
    }
    rules_text(&rules).parse().unwrap()
}

fn random_pair(rng: &mut ChaCha8Rng) -> ClockedMachine {
    ClockedMachine::new(random_table(rng), ClockSpec::poly(rng.gen_range(0..=3)))
}

/// Counterexamples of the machine computing `out` on numerals, by direct
/// scan over `0..budget`.
fn scan(out: impl Fn(u128) -> Option<u128>, budget: u128) -> Vec<u128> {
    (0..budget)
        .filter(|&z| {
            if !verify_small(z) {
                return false;
            }
            let x = uncantor(z).0;
            match out(x) {
                Some(y) => !verify_small(cantor(x, y)),
                None => true,
            }
        })
        .collect()
}

fn q_output(k: u128) -> impl Fn(u128) -> Option<u128> {
    move |x| Some(if x <= k { solve_small(x) } else { 0 })
}

#[test]
fn search_is_least_and_matches_scan() {
    let trivial = codec::encode_table(&trivial_machine());
    let got = sat::f_neg_a(&trivial, 3000, 1000).unwrap();
    let oracle = scan(|x| Some(x), 3000);
    assert_eq!(got, SearchOutcome::Found { witness: BigUint::from(oracle[0]), value: BigUint::from(oracle[0]) });

    for n in [0u64, 3, 8] {
        let q = qfam::build_q(&nat(1), n, 16, 10_000).unwrap();
        let k = q.spec.k.to_u128().unwrap();
        for exec in [Exec::Sequential, Exec::Parallel] {
            let got = sat::f_neg_a_decoded(&codec::decode_index(&q.sigma), 3000, 100_000, exec).unwrap();
            let oracle = scan(q_output(k), 3000);
            let SearchOutcome::Found { witness, .. } = got else { panic!("n={n}") };
            assert_eq!(witness.to_u128(), oracle.first().copied(), "n={n}");
        }
    }
}

#[test]
fn search_on_random_tables_matches_simulation() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..40 {
        let t = random_table(&mut rng);
        let simple: SimpleRules = t
            .rules()
            .iter()
            .map(|r| ((r.state, r.read.as_char()), (r.next, r.write.as_char(), match r.mv.as_char() { 'L' => -1, 'R' => 1, _ => 0 })))
            .collect();
        let fuel = 200;
        let out = |x: u128| simulate(&simple, &number_word(x), fuel).map(|(o, _)| o);
        let oracle = (0..600u128).find_map(|z| {
            if !verify_small(z) {
                return None;
            }
            let x = uncantor(z).0;
            match out(x) {
                None => Some(Err(z)),
                Some(o) => match word_number(&o) {
                    Some(y) if verify_small(cantor(x, y)) => None,
                    _ => Some(Ok(z)),
                },
            }
        });
        let got = sat::f_neg_a(&codec::encode_table(&t), 600, fuel);
        match oracle {
            None => assert_eq!(got, Ok(SearchOutcome::Exhausted { budget: 600 })),
            Some(Ok(z)) => assert_eq!(got, Ok(SearchOutcome::Found { witness: BigUint::from(z), value: BigUint::from(z) })),
            Some(Err(z)) => assert_eq!(got, Err(sat::SearchError::Indeterminate(z as u64))),
        }
    }
}

// A Q with K < 8 answers every formula above K with 0, and its first two
// counterexamples are 46 and 279 > 4 * 46, so the doubling window is only
// checked where K reaches the first satisfiable formulas.
#[test]
fn counterexamples_recur_within_four_times_the_first() {
    let trivial = scan(|x| Some(x), 2000);
    assert!(trivial.len() >= 2 && trivial[1] <= 4 * trivial[0], "{trivial:?}");

    let q = qfam::build_q(&nat(1), 8, 16, 10_000).unwrap();
    let k = q.spec.k.to_u128().unwrap();
    assert_eq!(k, 16);
    let z0 = match sat::f_neg_a(&q.sigma, 10_000, 100_000).unwrap() {
        SearchOutcome::Found { witness, .. } => witness.to_u128().unwrap(),
        other => panic!("{other:?}"),
    };
    let all = scan(q_output(k), 4 * z0 + 1);
    assert_eq!(all[0], z0);
    assert!(all.len() >= 2, "no second counterexample up to {}", 4 * z0);

    let small = scan(q_output(0), 2000);
    assert_eq!(&small[..2], &[46, 279]);
}

#[test]
fn peak_witnesses_recheck() {
    for n in 0..3 {
        let p = qfam::peak_probe(&nat(1), n, 16, 10_000, 10_000, 1_000_000, Exec::default()).unwrap();
        let SearchOutcome::Found { witness, .. } = p.outcome else { panic!() };
        let z = witness.to_u128().unwrap();
        assert!(verify_small(z));
        let x = uncantor(z).0;
        let out = codec::decode_index(&p.index).run(&numeral_word(&BigUint::from(x)), 1000).unwrap();
        let y = word_number(&out.to_string()).unwrap();
        assert!(!verify_small(cantor(x, y)));
    }
}

#[test]
fn threshold_split_against_oracle() {
    for (a, n) in [(1, 0), (1, 2), (1, 7), (2, 4), (2, 6)] {
        let q = qfam::build_q(&nat(a), n, 16, 10_000).unwrap();
        let k = q.spec.k.to_u128().unwrap();
        let m = codec::decode_index(&q.godel);
        let checked: Vec<u128> = (0..=k.min(64)).chain(k + 1..=k + 16).collect();
        for x in checked {
            let out = m.run(&numeral_word(&BigUint::from(x)), 10_000).unwrap();
            let want = if x <= k { solve_small(x) } else { 0 };
            assert_eq!(word_number(&out.to_string()), Some(want), "a={a} n={n} x={x}");
        }
    }
}

#[test]
fn registry_coherence() {
    let mut reg = FRegistry::new();
    for n in 0..4 {
        let q = qfam::build_q_registered(&nat(1), n, 16, 10_000, &mut reg).unwrap();
        assert_eq!(sat::f_prime(&q.godel, &reg, 1500, 10_000), sat::f_neg_a(&q.godel, 1500, 10_000));
        assert!(!codec::is_sigma_image(&q.godel));
        assert!(codec::is_sigma_image(&q.sigma));
    }
}

#[test]
fn sigma_image_recognition() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut images = HashSet::new();
    for _ in 0..500 {
        let p = random_pair(&mut rng);
        let i = codec::sigma_embed(&p).unwrap();
        assert!(codec::is_sigma_image(&i));
        images.insert(i);
    }
    // distinct pairs give distinct indices
    let mut seen = HashSet::new();
    let mut distinct = Vec::new();
    while distinct.len() < 100 {
        let p = random_pair(&mut rng);
        if seen.insert(format!("{}|{}", p.clock, codec::table_text(p.body_table()))) {
            distinct.push(codec::sigma_embed(&p).unwrap());
        }
    }
    assert_eq!(distinct.iter().collect::<HashSet<_>>().len(), 100);

    let mut positives = 0;
    for _ in 0..10_000 {
        let bits = rng.gen_range(1..=160);
        let mut v = BigUint::zero();
        for _ in 0..bits {
            v = v * 2u32 + u32::from(rng.gen_bool(0.5));
        }
        if images.contains(&v) {
            continue;
        }
        if codec::is_sigma_image(&v) {
            positives += 1;
            let CodedMachine::Clocked(c) = codec::decode_index(&v) else { unreachable!() };
            assert_eq!(codec::sigma_embed(&c).unwrap(), v);
        }
    }
    assert_eq!(positives, 0);
}

trait BodyTable {
    fn body_table(&self) -> &MachineTable;
}

impl BodyTable for ClockedMachine {
    fn body_table(&self) -> &MachineTable {
        match &self.body {
            tmlab::clock::MachineBody::Table(t) => t,
            _ => unreachable!(),
        }
    }
}

#[test]
fn composition_on_inputs_up_to_eight() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let inputs: Vec<Word> = (0..=8usize).flat_map(words_of_len).map(|s| s.parse().unwrap()).collect();
    for _ in 0..30 {
        let p1 = random_pair(&mut rng);
        let p2 = random_pair(&mut rng);
        let c = compose(&p1, &p2).unwrap();
        let embedded = codec::decode_index(&codec::sigma_embed(&c).unwrap());
        for x in &inputs {
            let want = p2.run(&p1.run(x).output).output;
            assert_eq!(c.run(x).output, want);
            assert_eq!(embedded.run(x, u64::MAX).unwrap(), want);
        }
    }
}

#[test]
fn embedded_clock_matches_clocked_run() {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    let inputs: Vec<Word> = (0..=6usize).flat_map(words_of_len).map(|s| s.parse().unwrap()).collect();
    for _ in 0..100 {
        let p = random_pair(&mut rng);
        let m = codec::decode_index(&codec::sigma_embed(&p).unwrap());
        for x in &inputs {
            let r = m.run_detailed(x, u64::MAX).unwrap();
            assert_eq!(r, p.run(x));
            assert!(u128::from(r.steps) <= poly_bound(p.clock.exponent(), x.len() as u64));
        }
    }
}

proptest! {
    #[test]
    fn pairing_inverts(x in 0u64..1_000_000, y in 0u64..1_000_000) {
        let z = tmlab::words::pair_u64(x, y);
        prop_assert_eq!(z.to_u128().unwrap(), cantor(x as u128, y as u128));
        prop_assert_eq!(tmlab::words::unpair(&z), (BigUint::from(x), BigUint::from(y)));
    }

    #[test]
    fn numerals_round_trip(n in 0u128..1 << 100) {
        let w = numeral_word(&BigUint::from(n));
        prop_assert_eq!(w.to_string(), number_word(n));
        prop_assert_eq!(word_numeral(&w), Some(BigUint::from(n)));
    }

    #[test]
    fn verify_matches_small_oracle(z in 0u128..200_000) {
        prop_assert_eq!(sat::verify(&BigUint::from(z)), verify_small(z));
    }

    #[test]
    fn solver_matches_small_oracle(x in 0u128..20_000) {
        prop_assert_eq!(sat::solve_e(&BigUint::from(x)), BigUint::from(solve_small(x)));
    }

    #[test]
    fn decode_never_panics(bits in proptest::collection::vec(any::<bool>(), 0..240)) {
        let i = Word::new(bits).value();
        let _ = codec::decode_index(&i);
    }
}
