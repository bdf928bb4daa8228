//! Exhaustive adversarial oracles for the combined error bound, the
//! divergence witness between two profiles, and the duration reduction of
//! windowed capability.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use rayon::prelude::*;

use crate::capability::{
    capability_profile, growth_compare, windowed_capability, CapabilityProfile, Growth,
};
use crate::channel::{ErrorPlan, NarrowbandEvent};
use crate::code::{min_distance, Code};
use crate::decoder::{dist_masks, min_dist_decode};
use crate::error::{check_range, Error, Result};

/// Default cap on decoder invocations for exhaustive enumeration.
pub const DEFAULT_ORACLE_CAP: u128 = 100_000_000;

/// Maximum error counts per class.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Budget {
    pub narrowband: usize,
    pub fading: usize,
    pub impulse: usize,
    pub insertion: usize,
    pub deletion: usize,
}

impl Budget {
    pub fn new(
        narrowband: usize,
        fading: usize,
        impulse: usize,
        insertion: usize,
        deletion: usize,
    ) -> Self {
        Budget {
            narrowband,
            fading,
            impulse,
            insertion,
            deletion,
        }
    }
}

impl fmt::Display for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{},{},{}",
            self.narrowband, self.fading, self.impulse, self.insertion, self.deletion
        )
    }
}

impl FromStr for Budget {
    type Err = Error;

    /// Parses `nb,fading,impulse,insertion,deletion`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<usize> = s
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| {
                Error::Config(format!("budget {s:?} is not five non-negative integers"))
            })?;
        match parts[..] {
            [a, b, c, d, e] => Ok(Budget::new(a, b, c, d, e)),
            _ => Err(Error::Config(format!("budget {s:?} must have five fields"))),
        }
    }
}

/// `e_DEL + e_IMP + e_INS + E(e_F;C) + E(e_N;C)`.
pub fn theorem1_sum(profile: &CapabilityProfile, b: &Budget) -> Result<usize> {
    check_range("narrowband count", b.narrowband as i64, 0, profile.q as i64)?;
    check_range("fading count", b.fading as i64, 0, profile.q as i64)?;
    Ok(b.deletion + b.impulse + b.insertion + profile.e(b.fading) + profile.e(b.narrowband))
}

fn binomial_prefix(m: usize, e: usize) -> u128 {
    let mut total = 0u128;
    let mut c = 1u128;
    for k in 0..=e.min(m) {
        total = total.saturating_add(c);
        c = c.saturating_mul((m - k) as u128) / (k as u128 + 1);
    }
    total
}

/// Decoder invocations needed to enumerate every placement of at most the
/// budgeted errors for every transmitted codeword.
pub fn enumeration_size(code: &Code, b: &Budget) -> u128 {
    let (n, q) = (code.n(), code.q());
    [
        binomial_prefix(q, b.narrowband),
        binomial_prefix(q, b.fading),
        binomial_prefix(n, b.impulse),
        binomial_prefix(n * (q - 1), b.insertion),
        binomial_prefix(n, b.deletion),
    ]
    .iter()
    .fold(code.len() as u128, |acc, &x| acc.saturating_mul(x))
}

/// Result of an exhaustive run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theorem1Verdict {
    pub budget: Budget,
    pub d: usize,
    /// `e_DEL + e_IMP + e_INS + E(e_F;C) + E(e_N;C)`.
    pub sum: usize,
    /// Decoder invocations the enumeration covers.
    pub cases: u128,
    /// Every placement decodes to the transmitted word as the unique winner.
    pub all_correct: bool,
    /// First failure: transmitted codeword index and the placement.
    pub failure: Option<(usize, ErrorPlan)>,
}

impl Theorem1Verdict {
    /// The bound holds on this budget: all-correct exactly when `sum < d`.
    pub fn agrees_with_bound(&self) -> bool {
        self.all_correct == (self.sum < self.d)
    }
}

fn subsets(m: usize, e: usize) -> Vec<Vec<usize>> {
    (0..=e.min(m))
        .flat_map(|k| (0..m).combinations(k))
        .collect()
}

fn symbol_mask(set: &[usize]) -> u64 {
    set.iter().fold(0u64, |m, &s| m | 1 << s)
}

/// Enumerates, for every codeword, every placement of at most the budgeted
/// errors: narrowband symbol sets covering all `n` slots, fading symbol
/// sets, impulse, insertion and deletion position sets. Placements apply
/// in channel order (insertions, narrowband, deletions, fading, impulse).
pub fn theorem1_oracle(code: &Code, budget: &Budget, cap: u128) -> Result<Theorem1Verdict> {
    let d = min_distance(code)?;
    let profile = capability_profile(code, d)?;
    let sum = theorem1_sum(&profile, budget)?;
    let cases = enumeration_size(code, budget);
    if cases > cap {
        return Err(Error::CapExceeded {
            estimate: cases,
            cap,
        });
    }
    let (n, q) = (code.n(), code.q());
    let full = if q == 64 { u64::MAX } else { (1u64 << q) - 1 };
    let nb_sets = subsets(q, budget.narrowband);
    let fade_sets = subsets(q, budget.fading);
    let imp_sets = subsets(n, budget.impulse);
    let del_sets = subsets(n, budget.deletion);

    let failure = (0..code.len()).into_par_iter().find_map_first(|ui| {
        let u = code.word(ui);
        let pairs: Vec<(usize, u8)> = (0..n)
            .flat_map(|i| {
                (0..q as u8)
                    .filter(move |&s| s != u[i])
                    .map(move |s| (i, s))
            })
            .collect();
        let base: Vec<u64> = u.iter().map(|&s| 1u64 << s).collect();
        let fails = |masks: &[u64]| {
            let du = dist_masks(u, masks);
            code.words()
                .enumerate()
                .any(|(wi, w)| wi != ui && dist_masks(w, masks) <= du)
        };
        for ins in (0..=budget.insertion.min(pairs.len()))
            .flat_map(|k| pairs.iter().copied().combinations(k))
        {
            let mut m_ins = base.clone();
            for &(i, s) in &ins {
                m_ins[i] |= 1 << s;
            }
            for nb in &nb_sets {
                let nb_mask = symbol_mask(nb);
                let m_nb: Vec<u64> = m_ins.iter().map(|m| m | nb_mask).collect();
                for del in &del_sets {
                    let mut m_del = m_nb.clone();
                    for &i in del {
                        m_del[i] &= !(1u64 << u[i]);
                    }
                    for fade in &fade_sets {
                        let keep = !symbol_mask(fade);
                        let m_fade: Vec<u64> = m_del.iter().map(|m| m & keep).collect();
                        for imp in &imp_sets {
                            let mut masks = m_fade.clone();
                            for &i in imp {
                                masks[i] = full;
                            }
                            if fails(&masks) {
                                let plan = ErrorPlan {
                                    narrowband: nb
                                        .iter()
                                        .map(|&s| NarrowbandEvent {
                                            symbol: s as u8,
                                            start: 0,
                                            duration: n,
                                        })
                                        .collect(),
                                    fading: fade.iter().map(|&s| s as u8).collect(),
                                    impulses: imp.clone(),
                                    insertions: ins.clone(),
                                    deletions: del.clone(),
                                };
                                return Some((ui, plan));
                            }
                        }
                    }
                }
            }
        }
        None
    });
    Ok(Theorem1Verdict {
        budget: *budget,
        d,
        sum,
        cases,
        all_correct: failure.is_none(),
        failure,
    })
}

/// How the witnessed code was certified.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertificationMethod {
    /// Full placement enumeration.
    Exhaustive,
    /// Exact pairwise reduction for narrowband-plus-impulse budgets.
    PairwiseReduction,
}

impl fmt::Display for CertificationMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CertificationMethod::Exhaustive => "exhaustive",
            CertificationMethod::PairwiseReduction => "pairwise-reduction",
        })
    }
}

/// A budget one code corrects and the other does not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prop1Witness {
    /// First `e` at which the profiles differ.
    pub e_prime: usize,
    pub d: usize,
    /// `E(e′)` of the first and second code.
    pub e_first: usize,
    pub e_second: usize,
    pub budget: Budget,
    /// The first code decodes uniquely under every placement of the budget.
    pub certified: bool,
    pub method: CertificationMethod,
    /// Transmitted index in the second code, the rival index and the plan.
    pub failing_plan: (usize, usize, ErrorPlan),
}

/// Narrowband-plus-impulse attack on `u` in favour of `w`: the `e_nb`
/// symbols covering most disagreeing positions, and the uncovered
/// disagreeing positions to be hit by impulses.
fn pair_attack(u: &[u8], w: &[u8], q: usize, e_nb: usize) -> (Vec<u8>, Vec<usize>) {
    let mut cnt = vec![0usize; q];
    for (&a, &b) in u.iter().zip(w) {
        if a != b {
            cnt[b as usize] += 1;
        }
    }
    let mut order: Vec<u8> = (0..q as u8).collect();
    order.sort_by(|&a, &b| cnt[b as usize].cmp(&cnt[a as usize]).then(a.cmp(&b)));
    let gamma: Vec<u8> = order[..e_nb].to_vec();
    let rest = u
        .iter()
        .zip(w)
        .enumerate()
        .filter(|(_, (&a, &b))| a != b && !gamma.contains(&b))
        .map(|(i, _)| i)
        .collect();
    (gamma, rest)
}

/// First `(u, w)` such that `e_nb` full-length narrowband symbols plus
/// `e_imp` impulses let `w` tie or beat `u`.
fn first_defeated_pair(code: &Code, e_nb: usize, e_imp: usize) -> Option<(usize, usize)> {
    (0..code.len()).into_par_iter().find_map_first(|ui| {
        let u = code.word(ui);
        (0..code.len())
            .filter(|&wi| wi != ui)
            .find(|&wi| pair_attack(u, code.word(wi), code.q(), e_nb).1.len() <= e_imp)
            .map(|wi| (ui, wi))
    })
}

fn pad<T: Copy + PartialEq>(mut set: Vec<T>, pool: impl Iterator<Item = T>, size: usize) -> Vec<T> {
    for x in pool {
        if set.len() >= size {
            break;
        }
        if !set.contains(&x) {
            set.push(x);
        }
    }
    set
}

/// Finds the first index `e′` where `first` grows strictly slower than
/// `second`, sets the budget to `e′` narrowband errors and
/// `d − E(e′;first) − 1` impulses, certifies `first` under it and returns a
/// verified failing plan for `second`.
///
/// With only narrowband and impulse errors the transmitted word is never
/// at positive distance, so a placement fails exactly when some rival has
/// every disagreeing position covered by a narrowband symbol or an
/// impulse. Checking every ordered pair with the best symbol choice is
/// therefore exact; full enumeration is used instead when it fits `cap`.
pub fn prop1_witness(first: &Code, second: &Code, cap: u128) -> Result<Prop1Witness> {
    if (first.n(), first.q()) != (second.n(), second.q()) {
        return Err(Error::NoWitness(
            "codes differ in length or alphabet".into(),
        ));
    }
    let d = min_distance(first)?;
    let d2 = min_distance(second)?;
    if d != d2 {
        return Err(Error::NoWitness(format!(
            "minimum distances differ ({d} vs {d2})"
        )));
    }
    let pa = capability_profile(first, d)?;
    let pb = capability_profile(second, d)?;
    let e_prime = match growth_compare(&pa.e_table, &pb.e_table)? {
        Growth::FirstLess(e) => e,
        Growth::Equal => return Err(Error::NoWitness("profiles are equal".into())),
        Growth::SecondLess(e) => {
            return Err(Error::NoWitness(format!(
                "the second code grows slower (first divergence at e = {e})"
            )))
        }
    };
    let e_first = pa.e(e_prime);
    if e_first >= d {
        return Err(Error::NoWitness(format!(
            "E({e_prime}) = {e_first} is not below d = {d}"
        )));
    }
    let e_imp = d - e_first - 1;
    let budget = Budget::new(e_prime, 0, e_imp, 0, 0);

    let (certified, method) = match theorem1_oracle(first, &budget, cap) {
        Ok(v) => (v.all_correct, CertificationMethod::Exhaustive),
        Err(Error::CapExceeded { .. }) => (
            first_defeated_pair(first, e_prime, e_imp).is_none(),
            CertificationMethod::PairwiseReduction,
        ),
        Err(e) => return Err(e),
    };

    let (ui, wi) = first_defeated_pair(second, e_prime, e_imp)
        .ok_or_else(|| Error::NoWitness("no failing placement for the second code".into()))?;
    let (n, q) = (second.n(), second.q());
    let u = second.word(ui);
    let (gamma, hits) = pair_attack(u, second.word(wi), q, e_prime);
    let gamma = pad(gamma, 0..q as u8, e_prime);
    let impulses = pad(hits, 0..n, e_imp);
    let plan = ErrorPlan {
        narrowband: gamma
            .iter()
            .map(|&s| NarrowbandEvent {
                symbol: s,
                start: 0,
                duration: n,
            })
            .collect(),
        impulses,
        ..ErrorPlan::default()
    };
    let v = plan.apply(u, q)?;
    if min_dist_decode(second, &v)?.uniquely_correct(ui) {
        return Err(Error::NoWitness(
            "constructed plan did not defeat the decoder".into(),
        ));
    }
    Ok(Prop1Witness {
        e_prime,
        d,
        e_first,
        e_second: pb.e(e_prime),
        budget,
        certified,
        method,
        failing_plan: (ui, wi, plan),
    })
}

/// Windowed capability against the single longest useful duration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lemma2Report {
    pub durations: Vec<usize>,
    /// `min(n, max L)`.
    pub reference: usize,
    /// `(e, E(e;L,C), E(e;{reference},C))` for `e = 1..=q`.
    pub rows: Vec<(usize, usize, usize)>,
}

impl Lemma2Report {
    pub fn holds(&self) -> bool {
        self.rows.iter().all(|&(_, a, b)| a == b)
    }
}

pub fn lemma2_check(code: &Code, durations: &[usize]) -> Result<Lemma2Report> {
    let max = *durations.iter().max().ok_or(Error::InvalidDurations)?;
    let reference = max.min(code.n()).max(1);
    let rows = (1..=code.q())
        .map(|e| {
            Ok((
                e,
                windowed_capability(code, e, durations)?,
                windowed_capability(code, e, &[reference])?,
            ))
        })
        .collect::<Result<_>>()?;
    Ok(Lemma2Report {
        durations: durations.to_vec(),
        reference,
        rows,
    })
}
