//! Property tests against brute-force oracles.

use std::collections::BTreeSet;

use itertools::Itertools;
use proptest::prelude::*;

use symweight::capability::{
    capability_profile, e_table, f_star_table, growth_compare, windowed_capability, Capability,
    Growth,
};
use symweight::channel::{DetectorOutput, ErrorPlan, NarrowbandEvent};
use symweight::code::{classify, hamming, min_distance, min_symbol_weight, symbol_stats, Code};
use symweight::decoder::{dist, min_dist_decode};
use symweight::gf::FieldSpec;

fn code_strategy(max_n: usize, max_q: usize, max_words: usize) -> impl Strategy<Value = Code> {
    (1..=max_n, 1..=max_q).prop_flat_map(move |(n, q)| {
        prop::collection::vec(prop::collection::vec(0..q as u8, n), 1..=max_words).prop_map(
            move |words| {
                let set: BTreeSet<Vec<u8>> = words.into_iter().collect();
                Code::new(n, q, set.into_iter().collect(), "random").unwrap()
            },
        )
    })
}

/// Equitable words: position `i` holds symbol `perm[i mod q]`, then the
/// positions are permuted.
fn equitable_word_strategy() -> impl Strategy<Value = (usize, Vec<u8>)> {
    (1..=30usize, 1..=12usize).prop_flat_map(|(n, q)| {
        let perm = Just((0..q as u8).collect::<Vec<u8>>()).prop_shuffle();
        (Just(q), perm).prop_flat_map(move |(q, perm)| {
            let word: Vec<u8> = (0..n).map(|i| perm[i % q]).collect();
            (Just(q), Just(word).prop_shuffle())
        })
    })
}

fn top_sum(word: &[u8], q: usize, e: usize) -> usize {
    let mut counts = vec![0usize; q];
    for &s in word {
        counts[s as usize] += 1;
    }
    counts.sort_unstable_by(|a, b| b.cmp(a));
    counts[..e].iter().sum()
}

/// `min` over every word of `[0,q)^n` of the sum of the `e` largest counts.
fn f_star_brute(n: usize, q: usize) -> Vec<usize> {
    let mut best = vec![usize::MAX; q];
    for word in (0..n).map(|_| 0..q as u8).multi_cartesian_product() {
        for (e, b) in best.iter_mut().enumerate() {
            *b = (*b).min(top_sum(&word, q, e + 1));
        }
    }
    best
}

/// `E(e;L,C)` by enumerating every symbol set, duration and start.
fn windowed_brute(code: &Code, e: usize, durations: &[usize]) -> usize {
    let n = code.n() as i64;
    let mut best = 0;
    for w in code.words() {
        for &l in durations {
            for gamma in (0..code.q() as u8).combinations(e) {
                let total: usize = gamma
                    .iter()
                    .map(|&s| {
                        (1 - l as i64..n)
                            .map(|start| {
                                (start.max(0)..(start + l as i64).min(n))
                                    .filter(|&i| w[i as usize] == s)
                                    .count()
                            })
                            .max()
                            .unwrap_or(0)
                    })
                    .sum();
                best = best.max(total);
            }
        }
    }
    best
}

#[test]
fn f_star_matches_brute_force_small() {
    for n in 1..=7 {
        for q in 1..=4 {
            assert_eq!(
                f_star_table(n, q).unwrap(),
                f_star_brute(n, q),
                "n={n} q={q}"
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn e_table_dominates_f_star_and_is_monotone(code in code_strategy(9, 6, 12)) {
        let table = e_table(&code);
        let fstar = f_star_table(code.n(), code.q()).unwrap();
        for (e, (&a, &b)) in table.iter().zip(&fstar).enumerate() {
            prop_assert!(a >= b, "E({}) = {a} < f* = {b}", e + 1);
        }
        prop_assert!(table.windows(2).all(|w| w[0] <= w[1]));
        prop_assert_eq!(*table.last().unwrap(), code.n());
        prop_assert!(!matches!(growth_compare(&table, &fstar).unwrap(), Growth::FirstLess(_)));
    }

    #[test]
    fn capability_bounds(code in code_strategy(9, 6, 12)) {
        prop_assume!(code.len() >= 2);
        let d = min_distance(&code).unwrap();
        let p = capability_profile(&code, d).unwrap();
        let r = classify(&code).bounded_symbol_weight;
        match p.capability {
            Capability::Index(c) => {
                prop_assert!(c >= d.div_ceil(r));
                prop_assert!(c <= d.min(code.q()));
            }
            Capability::NoBreakdown => prop_assert!(false, "d <= n always breaks down"),
        }
    }

    #[test]
    fn profile_equals_f_star_iff_equitable(code in code_strategy(8, 5, 6)) {
        let equal = e_table(&code) == f_star_table(code.n(), code.q()).unwrap();
        prop_assert_eq!(equal, classify(&code).equitable);
    }

    #[test]
    fn equitable_codes_attain_f_star(words in prop::collection::vec(equitable_word_strategy(), 1..2)) {
        let (q, w) = words[0].clone();
        let code = Code::new(w.len(), q, vec![w], "eq").unwrap();
        prop_assert!(classify(&code).equitable);
        prop_assert_eq!(e_table(&code), f_star_table(code.n(), q).unwrap());
    }

    #[test]
    fn equitable_partition_shape((q, w) in equitable_word_strategy()) {
        let n = w.len();
        let r = min_symbol_weight(n, q);
        let t = q * r - n;
        let mut expected = vec![r; q - t];
        expected.extend(std::iter::repeat(r - 1).take(t));
        prop_assert_eq!(symbol_stats(&w, q).unwrap().partition, expected);
    }

    #[test]
    fn windowed_matches_enumeration(
        code in code_strategy(6, 4, 4),
        durations in prop::collection::btree_set(1usize..9, 1..4),
    ) {
        let l: Vec<usize> = durations.into_iter().collect();
        for e in 1..=code.q() {
            prop_assert_eq!(windowed_capability(&code, e, &l).unwrap(), windowed_brute(&code, e, &l));
        }
        let longest = l.iter().copied().max().unwrap().min(code.n());
        for e in 1..=code.q() {
            prop_assert_eq!(
                windowed_capability(&code, e, &l).unwrap(),
                windowed_capability(&code, e, &[longest]).unwrap()
            );
        }
    }

    #[test]
    fn min_distance_matches_pairwise(code in code_strategy(20, 8, 15)) {
        prop_assume!(code.len() >= 2);
        let brute = (0..code.len())
            .tuple_combinations()
            .map(|(a, b)| hamming(code.word(a), code.word(b)))
            .min()
            .unwrap();
        prop_assert_eq!(min_distance(&code).unwrap(), brute);
    }

    #[test]
    fn adding_symbols_never_increases_distance(
        u in prop::collection::vec(0u8..6, 1..10),
        extra in prop::collection::vec((0usize..10, 0u8..6), 0..12),
    ) {
        let v = DetectorOutput::from_codeword(&u, 6).unwrap();
        let mut sets = v.to_sets();
        for (i, s) in extra {
            if i < sets.len() && !sets[i].contains(&s) {
                sets[i].push(s);
            }
        }
        let bigger = DetectorOutput::from_sets(6, &sets).unwrap();
        let w: Vec<u8> = u.iter().map(|&s| (s + 1) % 6).collect();
        prop_assert!(dist(&w, &bigger).unwrap() <= dist(&w, &v).unwrap());
        prop_assert_eq!(dist(&u, &bigger).unwrap(), 0);
    }

    #[test]
    fn noiseless_decoding_is_unique(code in code_strategy(8, 6, 10), pick in any::<prop::sample::Index>()) {
        let i = pick.index(code.len());
        let v = DetectorOutput::from_codeword(code.word(i), code.q()).unwrap();
        prop_assert!(min_dist_decode(&code, &v).unwrap().uniquely_correct(i));
    }

    #[test]
    fn plan_effects(
        u in prop::collection::vec(0u8..7, 1..12),
        fading in prop::collection::btree_set(0u8..7, 0..4),
        impulses in prop::collection::btree_set(0usize..12, 0..4),
        nb in prop::collection::vec((0u8..7, -12i64..12, 1usize..15), 0..3),
    ) {
        let n = u.len();
        let impulses: Vec<usize> = impulses.into_iter().filter(|&i| i < n).collect();
        let nb: Vec<NarrowbandEvent> = nb
            .into_iter()
            .filter(|&(_, s, _)| s < n as i64)
            .map(|(symbol, start, duration)| NarrowbandEvent { symbol, start, duration })
            .collect();
        let plan = ErrorPlan {
            narrowband: nb.clone(),
            fading: fading.iter().copied().collect(),
            impulses: impulses.clone(),
            ..ErrorPlan::default()
        };
        let v = plan.apply(&u, 7).unwrap();
        for i in 0..n {
            if impulses.contains(&i) {
                prop_assert_eq!(v.slot(i).len(), 7);
                continue;
            }
            for s in 0..7u8 {
                let covered = nb.iter().any(|e| {
                    e.symbol == s && e.start <= i as i64 && (i as i64) < e.start + e.duration as i64
                });
                let expect = !fading.contains(&s) && (u[i] == s || covered);
                prop_assert_eq!(v.contains(i, s), expect, "slot {} symbol {}", i, s);
            }
        }
        prop_assert_eq!(ErrorPlan::from_log(&plan.to_log()).unwrap(), plan);
    }
}

#[test]
fn field_axioms() {
    for m in 2..=6 {
        let f = FieldSpec::new(m).unwrap();
        let q = f.q();
        for a in 0..q as u8 {
            assert_eq!(f.mul(a, 1), a);
            assert_eq!(f.add(a, a), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1, "m={m} a={a}");
            }
            for b in 0..q as u8 {
                assert_eq!(f.mul(a, b), f.mul(b, a));
            }
        }
        let orbit: BTreeSet<u8> = (0..q - 1).map(|i| f.alpha_pow(i)).collect();
        assert_eq!(orbit.len(), q - 1, "alpha is primitive for m={m}");
    }
}
