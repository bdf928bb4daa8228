//! Exhaustive oracle verdicts against the combined error bound.

use symweight::capability::capability_profile;
use symweight::construct::table::find_row;
use symweight::decoder::min_dist_decode;
use symweight::sim::{prop1_witness, theorem1_oracle, theorem1_sum, Budget, DEFAULT_ORACLE_CAP};
use symweight::{min_distance, Code, Error};

fn cyclic5() -> Code {
    let words = (0..5u8)
        .map(|s| (0..5u8).map(|i| (i + s) % 5).collect())
        .collect();
    Code::new(5, 5, words, "cyc5").unwrap()
}

fn four_word_code() -> Code {
    Code::new(
        3,
        4,
        vec![vec![0, 1, 2], vec![1, 2, 3], vec![2, 3, 0], vec![3, 0, 1]],
        "four",
    )
    .unwrap()
}

/// Every budget whose bound sum is below `d` is corrected.
fn check_all_small_budgets(code: &Code) -> usize {
    let d = min_distance(code).unwrap();
    let profile = capability_profile(code, d).unwrap();
    let q = code.q();
    let mut checked = 0;
    for nb in 0..=q {
        for fa in 0..=q {
            for imp in 0..d {
                for ins in 0..d {
                    for del in 0..d {
                        let b = Budget::new(nb, fa, imp, ins, del);
                        if theorem1_sum(&profile, &b).unwrap() >= d {
                            continue;
                        }
                        let v = theorem1_oracle(code, &b, DEFAULT_ORACLE_CAP).unwrap();
                        assert!(
                            v.all_correct,
                            "{}: budget {b} failed: {:?}",
                            code.id(),
                            v.failure
                        );
                        checked += 1;
                    }
                }
            }
        }
    }
    checked
}

#[test]
fn budgets_below_distance_are_corrected() {
    assert!(check_all_small_budgets(&cyclic5()) > 100);
    assert!(check_all_small_budgets(&four_word_code()) > 10);
}

#[test]
fn distance_many_impulses_defeat_the_decoder() {
    for code in [cyclic5(), four_word_code()] {
        let d = min_distance(&code).unwrap();
        let v = theorem1_oracle(&code, &Budget::new(0, 0, d, 0, 0), DEFAULT_ORACLE_CAP).unwrap();
        let (ui, plan) = v.failure.expect("a failing placement");
        let out = plan.apply(code.word(ui), code.q()).unwrap();
        assert!(!min_dist_decode(&code, &out).unwrap().uniquely_correct(ui));
    }
}

#[test]
fn narrowband_reaching_distance_defeats_the_decoder() {
    // E(5) = 5 = d for the cyclic code.
    let v = theorem1_oracle(&cyclic5(), &Budget::new(5, 0, 0, 0, 0), DEFAULT_ORACLE_CAP).unwrap();
    assert!(!v.all_correct && v.agrees_with_bound());
}

#[test]
fn witness_for_the_length_eleven_pair() {
    let (esw, _) = find_row("ESW(11,6,2)_10").unwrap().build(0).unwrap();
    let (msw, _) = find_row("MSW(11,6,2)_10").unwrap().build(0).unwrap();
    let w = prop1_witness(&esw, &msw, DEFAULT_ORACLE_CAP).unwrap();
    assert_eq!((w.e_prime, w.e_first, w.e_second), (2, 3, 4));
    assert_eq!(w.budget, Budget::new(2, 0, 2, 0, 0));
    assert!(w.certified);
    assert!(matches!(
        prop1_witness(&msw, &esw, DEFAULT_ORACLE_CAP),
        Err(Error::NoWitness(_))
    ));
}
