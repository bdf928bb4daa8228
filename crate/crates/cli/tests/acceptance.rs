//! Acceptance suite: one PASS/FAIL line per criterion.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use symweight::capability::{capability_profile, e_table, f_star_table, windowed_capability};
use symweight::channel::StartPolicy;
use symweight::code::{classify, min_distance, symbol_stats, Code};
use symweight::construct::table::{find_row, ROWS};
use symweight::decoder::min_dist_decode;
use symweight::sim::{
    prop1_witness, run_ser, theorem1_oracle, theorem1_sum, Budget, ExperimentSpec, SerReport,
    Sweep, DEFAULT_ORACLE_CAP,
};
use symweight::waveform::{modulate, sigma2_at_sample, sigma2_time_average, WaveformConfig};
use symweight::Capability;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn within(limit_s: u64, start: Instant) -> (bool, String) {
    let t = start.elapsed();
    (
        t <= Duration::from_secs(limit_s),
        format!("{:.1} s of {limit_s} s", t.as_secs_f64()),
    )
}

fn build(label: &str) -> Code {
    find_row(label).unwrap().build(0).unwrap().0
}

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

/// Counts within `{⌊n/q⌋, ⌈n/q⌉}` for every symbol.
fn is_equitable_word(w: &[u8], q: usize) -> bool {
    let n = w.len();
    let (lo, hi) = (n / q, n.div_ceil(q));
    (0..q as u8).all(|s| {
        let c = w.iter().filter(|&&x| x == s).count();
        c == lo || c == hi
    })
}

/// Symbol `perm[i mod q]` at position `i`, then a random position order.
fn random_equitable_word(n: usize, q: usize, rng: &mut ChaCha8Rng) -> Vec<u8> {
    let mut perm: Vec<u8> = (0..q as u8).collect();
    perm.shuffle(rng);
    let mut w: Vec<u8> = (0..n).map(|i| perm[i % q]).collect();
    w.shuffle(rng);
    w
}

fn random_word(n: usize, q: usize, rng: &mut ChaCha8Rng) -> Vec<u8> {
    (0..n).map(|_| rng.gen_range(0..q as u8)).collect()
}

fn random_code(
    n: usize,
    q: usize,
    max_words: usize,
    p_equitable: f64,
    rng: &mut ChaCha8Rng,
) -> Code {
    let m = rng.gen_range(1..=max_words);
    let mut words: Vec<Vec<u8>> = (0..m)
        .map(|_| {
            if rng.gen_bool(p_equitable) {
                random_equitable_word(n, q, rng)
            } else {
                random_word(n, q, rng)
            }
        })
        .collect();
    words.sort();
    words.dedup();
    Code::new(n, q, words, "random").unwrap()
}

fn c1_table() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    for row in &ROWS {
        let (code, _) = row.build(0).unwrap();
        let d = min_distance(&code).unwrap();
        let c = capability_profile(&code, d).unwrap().capability;
        let swt = classify(&code).bounded_symbol_weight;
        if (code.n(), d, swt, code.len(), c)
            != (
                row.n,
                row.d,
                row.swt,
                row.size,
                Capability::Index(row.capability),
            )
        {
            bad.push(format!(
                "{} got ({},{},{},{},{c})",
                row.label,
                code.n(),
                d,
                swt,
                code.len()
            ));
        }
    }
    let (fast, t) = within(300, start);
    outcome(
        bad.is_empty() && fast,
        format!(
            "{}/{} rows match (n, d, swt, size, c); {t}; {}",
            ROWS.len() - bad.len(),
            ROWS.len(),
            bad.join("; ")
        ),
    )
}

/// Every count vector of `n` over `q` symbols, i.e. every word up to
/// permutation.
fn compositions(n: usize, q: usize, prefix: &mut Vec<usize>, out: &mut dyn FnMut(&[usize])) {
    if prefix.len() == q - 1 {
        let used: usize = prefix.iter().sum();
        prefix.push(n - used);
        out(prefix);
        prefix.pop();
        return;
    }
    let used: usize = prefix.iter().sum();
    for c in 0..=n - used {
        prefix.push(c);
        compositions(n, q, prefix, out);
        prefix.pop();
    }
}

fn c2_f_star() -> Outcome {
    let start = Instant::now();
    let mut cases = 0;
    let mut bad = Vec::new();
    for n in 1..=12 {
        for q in 1..=6 {
            let mut best = vec![usize::MAX; q];
            compositions(n, q, &mut Vec::new(), &mut |counts| {
                let mut c = counts.to_vec();
                c.sort_unstable_by(|a, b| b.cmp(a));
                let mut acc = 0;
                for (e, v) in c.iter().enumerate() {
                    acc += v;
                    best[e] = best[e].min(acc);
                }
            });
            cases += q;
            if f_star_table(n, q).unwrap() != best {
                bad.push(format!("(n={n}, q={q})"));
            }
        }
    }
    let (fast, t) = within(120, start);
    outcome(
        bad.is_empty() && fast,
        format!("{cases} (n, q, e) values agree; {t} {}", bad.join(" ")),
    )
}

fn c3_partition_shape() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut bad = 0;
    for _ in 0..10_000 {
        let n = rng.gen_range(1..=40);
        let q = rng.gen_range(1..=16);
        let w = random_equitable_word(n, q, &mut rng);
        let r = n.div_ceil(q);
        let t = q * r - n;
        let mut expected = vec![r; q - t];
        expected.extend(std::iter::repeat(r - 1).take(t));
        let stats = symbol_stats(&w, q).unwrap();
        if !is_equitable_word(&w, q) || stats.partition != expected {
            bad += 1;
        }
    }
    outcome(
        bad == 0,
        format!(
            "{} of 10000 equitable words have partition r^(q-t) (r-1)^t",
            10_000 - bad
        ),
    )
}

/// `E(e;L,C)` over every symbol set, duration and start.
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
                            .map(|st| {
                                (st.max(0)..(st + l as i64).min(n))
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

fn c4_longest_duration() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut checks = 0;
    let mut bad = 0;
    for _ in 0..100 {
        let n = rng.gen_range(1..=8);
        let q = rng.gen_range(1..=5);
        let code = random_code(n, q, 20, 0.0, &mut rng);
        for _ in 0..10 {
            let k = rng.gen_range(1..=4);
            let mut l: Vec<usize> = (0..k).map(|_| rng.gen_range(1..=12)).collect();
            l.sort_unstable();
            l.dedup();
            let reference = (*l.iter().max().unwrap()).min(n);
            for e in 1..=q {
                let lhs = windowed_brute(&code, e, &l);
                let rhs = windowed_brute(&code, e, &[reference]);
                let lib = windowed_capability(&code, e, &l).unwrap();
                checks += 1;
                if lhs != rhs || lib != lhs {
                    bad += 1;
                }
            }
        }
    }
    outcome(
        bad == 0,
        format!("{}/{checks} (code, L, e) cases equal", checks - bad),
    )
}

fn c5_bound_oracle() -> Outcome {
    let start = Instant::now();
    let mut budgets = 0;
    let mut failures = Vec::new();
    let mut impulse_defeats = 0;
    for code in [cyclic5(), four_word_code()] {
        let d = min_distance(&code).unwrap();
        let profile = capability_profile(&code, d).unwrap();
        let q = code.q();
        let tuples = (0..=q)
            .cartesian_product(0..=q)
            .cartesian_product((0..d).cartesian_product(0..d).cartesian_product(0..d));
        for ((nb, fa), ((imp, ins), del)) in tuples {
            let b = Budget::new(nb, fa, imp, ins, del);
            if theorem1_sum(&profile, &b).unwrap() >= d {
                continue;
            }
            budgets += 1;
            let v = theorem1_oracle(&code, &b, DEFAULT_ORACLE_CAP).unwrap();
            if !v.all_correct {
                failures.push(format!("{} budget {b}", code.id()));
            }
        }
        let v = theorem1_oracle(&code, &Budget::new(0, 0, d, 0, 0), DEFAULT_ORACLE_CAP).unwrap();
        if let Some((ui, plan)) = v.failure {
            let out = plan.apply(code.word(ui), q).unwrap();
            if !min_dist_decode(&code, &out).unwrap().uniquely_correct(ui) {
                impulse_defeats += 1;
            }
        }
    }
    let (fast, t) = within(600, start);
    outcome(
        failures.is_empty() && impulse_defeats == 2 && fast,
        format!(
            "{budgets} budgets below d all corrected; e_IMP = d defeats {impulse_defeats}/2 codes; {t} {}",
            failures.join("; ")
        ),
    )
}

fn c6_divergence_witness(esw: &Code, msw: &Code) -> Outcome {
    match prop1_witness(esw, msw, DEFAULT_ORACLE_CAP) {
        Ok(w) => {
            let (ui, _, plan) = &w.failing_plan;
            let out = plan.apply(msw.word(*ui), msw.q()).unwrap();
            let defeated = !min_dist_decode(msw, &out).unwrap().uniquely_correct(*ui);
            let shape = plan.narrowband.len() == 9 && plan.impulses.len() == 6;
            let ok = w.e_prime == 9
                && w.budget == Budget::new(9, 0, 6, 0, 0)
                && w.certified
                && defeated
                && shape;
            outcome(
                ok,
                format!(
                    "e'={} budget {} NB + {} impulse; ESW certified={} ({}); MSW plan defeats decoder={defeated}",
                    w.e_prime, w.budget.narrowband, w.budget.impulse, w.certified, w.method
                ),
            )
        }
        Err(e) => outcome(false, format!("no witness: {e}")),
    }
}

fn c7_optimal_iff_equitable() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut eq, mut neq, mut bad) = (0, 0, 0);
    for _ in 0..1000 {
        let n = rng.gen_range(1..=10);
        let q = rng.gen_range(1..=6);
        let code = random_code(n, q, 6, 0.7, &mut rng);
        let equitable = classify(&code).equitable;
        let by_definition = code.words().all(|w| is_equitable_word(w, q));
        let optimal = e_table(&code) == f_star_table(n, q).unwrap();
        if equitable {
            eq += 1;
        } else {
            neq += 1;
        }
        if optimal != equitable || equitable != by_definition {
            bad += 1;
        }
    }
    outcome(
        bad == 0 && eq > 0 && neq > 0,
        format!(
            "{} of 1000 codes agree ({eq} equitable, {neq} not)",
            1000 - bad
        ),
    )
}

fn sers(rep: &SerReport, id: &str) -> Vec<f64> {
    rep.rows_for(id).map(|r| r.ser()).collect()
}

fn c8_ser_ordering(pairs: &[(Code, Code)]) -> Outcome {
    let start = Instant::now();
    let p: Vec<f64> = vec![0.1, 0.2, 0.3, 0.4, 0.5];
    let spec = ExperimentSpec {
        sweep: Sweep::Channel {
            p_values: p.clone(),
            background: 0.05,
            durations: None,
            start_policy: StartPolicy::Overlapping,
        },
        trials: 10_000,
        nb_detection: true,
        seed: 0,
    };
    let mut ok = true;
    let mut parts = Vec::new();
    for (esw, msw) in pairs {
        let rep = run_ser(&[esw.clone(), msw.clone()], &spec).unwrap();
        let (a, b) = (sers(&rep, esw.id()), sers(&rep, msw.id()));
        let mut cells = Vec::new();
        for k in 0..p.len() {
            let good = p[k] < 0.2 || a[k] < b[k];
            ok &= good;
            cells.push(format!(
                "p={}:{:.2e}{}{:.2e}",
                p[k],
                a[k],
                if a[k] < b[k] { "<" } else { ">=" },
                b[k]
            ));
        }
        parts.push(format!("{} vs {}: {}", esw.id(), msw.id(), cells.join(" ")));
    }
    let (fast, t) = within(600, start);
    outcome(ok && fast, format!("{}; {t}", parts.join(" | ")))
}

fn c9_cyclostationary() -> Outcome {
    let cfg = WaveformConfig::default();
    let avg = sigma2_time_average(200_000);
    let period = cfg.samples_per_half_cycle() as i64;
    let worst_period = (0..4 * period)
        .map(|k| {
            let a = sigma2_at_sample(k, &cfg);
            ((a - sigma2_at_sample(k + period, &cfg)) / a).abs()
        })
        .fold(0.0, f64::max);
    let bursts: Vec<Vec<f64>> = (0..cfg.q as u8)
        .map(|m| modulate(&[m], &cfg).unwrap())
        .collect();
    let energy = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
    let mut worst_orth: f64 = 0.0;
    for (a, b) in (0..cfg.q).tuple_combinations() {
        let dot: f64 = bursts[a].iter().zip(&bursts[b]).map(|(x, y)| x * y).sum();
        worst_orth =
            worst_orth.max(dot.abs() / energy(&bursts[a]).sqrt() / energy(&bursts[b]).sqrt());
    }
    let ok = (0.90..=1.00).contains(&avg) && worst_period <= 1e-12 && worst_orth <= 1e-9;
    outcome(
        ok,
        format!("mean variance {avg:.4}; periodicity error {worst_period:.1e}; worst tone correlation {worst_orth:.1e}"),
    )
}

fn c10_waveform(esw: &Code, msw: &Code) -> Outcome {
    let start = Instant::now();
    let esn0: Vec<f64> = vec![-2.0, 0.0, 2.0, 4.0, 6.0, 8.0];
    let spec = ExperimentSpec {
        sweep: Sweep::Waveform {
            esn0_db: esn0.clone(),
            config: WaveformConfig::default(),
        },
        trials: 1000,
        nb_detection: true,
        seed: 0,
    };
    let rep = run_ser(&[esw.clone(), msw.clone()], &spec).unwrap();
    let (a, b) = (sers(&rep, esw.id()), sers(&rep, msw.id()));
    let monotone = |s: &[f64]| s.windows(2).all(|w| w[1] <= w[0]);
    let violations: Vec<String> = esn0
        .iter()
        .zip(a.iter().zip(&b))
        .filter(|(_, (x, y))| (**x > 1e-3 || **y > 1e-3) && x > y)
        .map(|(s, _)| format!("{s} dB"))
        .collect();
    let fmt = |s: &[f64]| s.iter().map(|x| format!("{x:.3e}")).join(",");
    let (_, t) = within(600, start);
    outcome(
        monotone(&a) && monotone(&b) && violations.is_empty(),
        format!(
            "Es/N0 -2..8 dB: ESW [{}] MSW [{}]; ESW > MSW at [{}]; {t}",
            fmt(&a),
            fmt(&b),
            violations.join(", ")
        ),
    )
}

fn run_cli(args: &[&str], cwd: &Path) -> (bool, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_symweight"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs");
    (out.status.success(), out.stdout)
}

fn c11_determinism(esw: &Code, msw: &Code) -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    esw.write_file(&dir.path().join("esw.txt"), &[]).unwrap();
    msw.write_file(&dir.path().join("msw.txt"), &[]).unwrap();
    cyclic5()
        .write_file(&dir.path().join("cyc.txt"), &[])
        .unwrap();
    let invocations: Vec<Vec<&str>> = vec![
        vec!["fstar", "--n", "25", "--q", "17"],
        vec!["analyze", "esw.txt"],
        vec!["construct", "table", "ESW(11,6,2)_10"],
        vec![
            "construct",
            "esw",
            "--n",
            "6",
            "--q",
            "4",
            "--d",
            "4",
            "--size",
            "8",
        ],
        vec![
            "construct",
            "rsc",
            "--n",
            "7",
            "--q",
            "8",
            "--k",
            "2",
            "--r",
            "2",
        ],
        vec![
            "simulate", "esw.txt", "msw.txt", "--trials", "2000", "--p", "0.3,0.5",
        ],
        vec!["waveform", "esw.txt", "--esn0", "0,2", "--trials", "40"],
        vec!["verify", "theorem1", "cyc.txt", "--budget", "1,0,1,1,0"],
        vec!["verify", "prop1", "esw.txt", "msw.txt"],
        vec!["verify", "lemma2", "cyc.txt", "--durations", "2,3,9"],
    ];
    let mut bad = Vec::new();
    for inv in &invocations {
        let mut outputs = Vec::new();
        for threads in ["1", "1", "4"] {
            let mut args = vec!["--seed", "11", "--threads", threads];
            args.extend(inv.iter().copied());
            outputs.push(run_cli(&args, dir.path()));
        }
        let ok = outputs.iter().all(|o| o.0 && !o.1.is_empty())
            && outputs.iter().all(|o| o.1 == outputs[0].1);
        if !ok {
            bad.push(inv.join(" "));
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "{}/{} invocations byte-identical across 2 runs and 1 vs 4 threads {}",
            invocations.len() - bad.len(),
            invocations.len(),
            bad.join("; ")
        ),
    )
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() {
    let esw25 = build("ESW(25,24,2)_17");
    let msw25 = build("MSW(25,24,2)_17");
    let pairs = [
        (build("ESW(11,6,2)_10"), build("MSW(11,6,2)_10")),
        (esw25.clone(), msw25.clone()),
    ];
    let criteria: Vec<Criterion> = vec![
        ("capability table reproduction", Box::new(c1_table)),
        ("f* closed form vs brute force", Box::new(c2_f_star)),
        ("equitable partition shape", Box::new(c3_partition_shape)),
        ("longest duration suffices", Box::new(c4_longest_duration)),
        ("combined error bound oracle", Box::new(c5_bound_oracle)),
        (
            "divergence witness (25,17)",
            Box::new(|| c6_divergence_witness(&esw25, &msw25)),
        ),
        (
            "optimal profile iff equitable",
            Box::new(c7_optimal_iff_equitable),
        ),
        (
            "SER ordering ESW < MSW",
            Box::new(|| c8_ser_ordering(&pairs)),
        ),
        ("cyclostationary noise model", Box::new(c9_cyclostationary)),
        (
            "waveform SER sanity",
            Box::new(|| c10_waveform(&esw25, &msw25)),
        ),
        (
            "CLI determinism",
            Box::new(|| c11_determinism(&esw25, &msw25)),
        ),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        println!(
            "{} [{:>2}] {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
        if !o.pass {
            failed.push(i + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", criteria.len());
    } else {
        println!(
            "acceptance: {} of {} criteria fail: {failed:?}",
            failed.len(),
            criteria.len()
        );
        std::process::exit(1);
    }
}
