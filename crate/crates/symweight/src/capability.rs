//! Narrowband capability `E(e;C)`, the capability `c(C)`, the optimal
//! growth function `f*` and the growth order between profiles.

use std::cmp::Ordering;

use crate::code::{counts_into, min_symbol_weight, Code};
use crate::error::{check_range, Error, Result};

/// Narrowband error-correcting capability of a code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Capability {
    /// Smallest `e` with `E(e;C) >= d`.
    Index(usize),
    /// `E(q;C) < d`: no number of pure narrowband errors defeats the code.
    NoBreakdown,
}

impl std::fmt::Display for Capability {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Capability::Index(e) => write!(f, "{e}"),
            Capability::NoBreakdown => write!(f, "none"),
        }
    }
}

/// The table `e -> E(e;C)` for `e` in `1..=q` and the derived capability.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CapabilityProfile {
    pub n: usize,
    pub q: usize,
    /// Distance the capability was computed against.
    pub d: usize,
    /// `e_table[e - 1] = E(e;C)`.
    pub e_table: Vec<usize>,
    pub capability: Capability,
}

impl CapabilityProfile {
    /// `E(e;C)` with `E(0;C) = 0`.
    pub fn e(&self, e: usize) -> usize {
        if e == 0 {
            0
        } else {
            self.e_table[e - 1]
        }
    }
}

/// `E(e;C)` for `e = 1..=q`: the largest sum of the `e` biggest symbol
/// counts over all codewords.
pub fn e_table(code: &Code) -> Vec<usize> {
    let q = code.q();
    let mut best = vec![0usize; q];
    let mut counts = vec![0usize; q];
    for w in code.words() {
        counts_into(w, &mut counts);
        counts.sort_unstable_by(|a, b| b.cmp(a));
        let mut acc = 0;
        for (e, &c) in counts.iter().enumerate() {
            acc += c;
            best[e] = best[e].max(acc);
        }
    }
    best
}

/// Smallest `e` with `table[e-1] >= d`.
pub fn capability_from_table(table: &[usize], d: usize) -> Capability {
    table
        .iter()
        .position(|&v| v >= d)
        .map_or(Capability::NoBreakdown, |i| Capability::Index(i + 1))
}

pub fn capability_profile(code: &Code, d: usize) -> Result<CapabilityProfile> {
    if d == 0 {
        return Err(Error::OutOfRange {
            what: "d",
            value: 0,
            lo: 1,
            hi: code.n() as i64,
        });
    }
    let e_table = e_table(code);
    let capability = capability_from_table(&e_table, d);
    Ok(CapabilityProfile {
        n: code.n(),
        q: code.q(),
        d,
        e_table,
        capability,
    })
}

/// Pointwise-least achievable profile value at `e`.
pub fn f_star(n: usize, q: usize, e: usize) -> Result<usize> {
    if q == 0 || n == 0 {
        return Err(Error::Config("n and q must be positive".into()));
    }
    check_range("e", e as i64, 1, q as i64)?;
    let r = min_symbol_weight(n, q);
    let t = q * r - n;
    Ok(if e <= q - t {
        r * e
    } else {
        r * (q - t) + (e - (q - t)) * (r - 1)
    })
}

/// `f*(e)` for `e = 1..=q`.
pub fn f_star_table(n: usize, q: usize) -> Result<Vec<usize>> {
    (1..=q).map(|e| f_star(n, q, e)).collect()
}

/// Outcome of comparing two profiles in the growth order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Growth {
    Equal,
    /// The first table is smaller at the first differing `e` (1-based).
    FirstLess(usize),
    /// The second table is smaller at the first differing `e` (1-based).
    SecondLess(usize),
}

/// Compares tables at their first point of divergence.
pub fn growth_compare(f: &[usize], g: &[usize]) -> Result<Growth> {
    if f.len() != g.len() {
        return Err(Error::LengthMismatch {
            expected: f.len(),
            got: g.len(),
        });
    }
    for (i, (a, b)) in f.iter().zip(g).enumerate() {
        match a.cmp(b) {
            Ordering::Less => return Ok(Growth::FirstLess(i + 1)),
            Ordering::Greater => return Ok(Growth::SecondLess(i + 1)),
            Ordering::Equal => {}
        }
    }
    Ok(Growth::Equal)
}

/// Growth comparison restricted to profiles over the same `(n, q)`.
pub fn compare_profiles(a: &CapabilityProfile, b: &CapabilityProfile) -> Result<Growth> {
    if (a.n, a.q) != (b.n, b.q) {
        return Err(Error::Config(format!(
            "profiles over ({}, {}) and ({}, {}) are not comparable",
            a.n, a.q, b.n, b.q
        )));
    }
    growth_compare(&a.e_table, &b.e_table)
}

/// Largest number of positions holding `sigma` inside any window of
/// length `l` clipped to the word.
pub fn max_window_coverage(word: &[u8], sigma: u8, l: usize) -> usize {
    let n = word.len();
    if l >= n {
        return word.iter().filter(|&&s| s == sigma).count();
    }
    let mut cur = word[..l].iter().filter(|&&s| s == sigma).count();
    let mut best = cur;
    for i in l..n {
        cur += usize::from(word[i] == sigma);
        cur -= usize::from(word[i - l] == sigma);
        best = best.max(cur);
    }
    best
}

/// `E(e;L,C)`: narrowband coverage when each of `e` symbols persists for a
/// duration drawn from `durations`, starting anywhere that overlaps the word.
pub fn windowed_capability(code: &Code, e: usize, durations: &[usize]) -> Result<usize> {
    if durations.is_empty() || durations.contains(&0) {
        return Err(Error::InvalidDurations);
    }
    let q = code.q();
    check_range("e", e as i64, 1, q as i64)?;
    let mut best = 0;
    let mut cover = vec![0usize; q];
    for w in code.words() {
        for l in durations {
            for (s, c) in cover.iter_mut().enumerate() {
                *c = max_window_coverage(w, s as u8, *l);
            }
            cover.sort_unstable_by(|a, b| b.cmp(a));
            best = best.max(cover[..e].iter().sum());
        }
    }
    Ok(best)
}
