//! Code constructions: Reed–Solomon codes with low-weight cosets and
//! expurgated subcodes, constant-partition codes by randomized search,
//! injection codes from permutation groups, and codes from cyclic
//! Kirkman triple systems.

mod injection;
mod kirkman;
mod rs;
mod search;
pub mod table;

use std::fmt::Write as _;

pub use injection::{injection_esw, InjectionPool};
pub use kirkman::{kirkman_applicable, kirkman_partition_code, label_design, CyclicKirkman};
pub use rs::{coset, rs_code, rs_coset, rs_subcode_expurgate, CosetReport, ReedSolomon};
pub use search::search_partition_code;

use crate::code::{min_symbol_weight, Code};
use crate::error::{Error, Result};

/// Parameters a construction must meet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionTarget {
    pub n: usize,
    pub q: usize,
    pub d_min: usize,
    pub size_target: usize,
    /// Bound on the symbol weight of every codeword.
    pub r: usize,
    /// Exact partition of every codeword (descending, zeros optional).
    pub partition_target: Option<Vec<usize>>,
    pub seed: u64,
    /// Candidate budget for randomized searches; `None` uses the default.
    pub budget: Option<u64>,
}

impl ConstructionTarget {
    pub fn new(n: usize, q: usize, d_min: usize, size_target: usize, r: usize) -> Self {
        ConstructionTarget {
            n,
            q,
            d_min,
            size_target,
            r,
            partition_target: None,
            seed: 0,
            budget: None,
        }
    }

    pub fn with_partition(mut self, partition: Vec<usize>) -> Self {
        self.partition_target = Some(partition);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = Some(budget);
        self
    }

    /// Checks internal consistency and returns the normalized partition
    /// (descending, padded with zeros to length `q`) when one is set.
    pub fn validate(&self) -> Result<Option<Vec<usize>>> {
        if self.n == 0 || self.q == 0 || self.size_target == 0 {
            return Err(Error::Config("n, q and size must be positive".into()));
        }
        if self.q > crate::code::MAX_Q {
            return Err(Error::Config(format!(
                "alphabet size {} exceeds 64",
                self.q
            )));
        }
        let Some(p) = &self.partition_target else {
            return Ok(None);
        };
        let mut parts: Vec<usize> = p.clone();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        while parts.last() == Some(&0) && parts.len() > self.q {
            parts.pop();
        }
        if parts.len() > self.q {
            return Err(Error::Config(format!(
                "partition has {} nonzero parts but q = {}",
                parts.len(),
                self.q
            )));
        }
        parts.resize(self.q, 0);
        let sum: usize = parts.iter().sum();
        if sum != self.n {
            return Err(Error::Config(format!(
                "partition sums to {sum}, expected n = {}",
                self.n
            )));
        }
        if parts[0] > self.r {
            return Err(Error::Config(format!(
                "largest part {} exceeds symbol weight bound {}",
                parts[0], self.r
            )));
        }
        Ok(Some(parts))
    }

    /// One-line description for provenance headers.
    pub fn describe(&self) -> String {
        let mut s = format!(
            "n={} q={} d={} size={} r={}",
            self.n, self.q, self.d_min, self.size_target, self.r
        );
        if let Some(p) = &self.partition_target {
            let _ = write!(s, " partition={}", format_partition(p));
        }
        s
    }
}

/// Partition of an equitable word of length `n` over `q` symbols:
/// `q - t` parts equal to `r = ⌈n/q⌉` and `t = qr - n` parts equal to `r - 1`.
pub fn equitable_partition(n: usize, q: usize) -> Vec<usize> {
    let r = min_symbol_weight(n, q);
    let t = q * r - n;
    let mut p = vec![r; q - t];
    p.extend(std::iter::repeat(r - 1).take(t));
    p
}

/// Renders a partition in exponent notation, e.g. `2^8,1^9`.
pub fn format_partition(parts: &[usize]) -> String {
    let mut sorted = parts.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let mut out: Vec<String> = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let v = sorted[i];
        let mut j = i;
        while j < sorted.len() && sorted[j] == v {
            j += 1;
        }
        out.push(if j - i == 1 {
            v.to_string()
        } else {
            format!("{v}^{}", j - i)
        });
        i = j;
    }
    out.join(",")
}

/// Parses exponent notation (`2^12,1,0^4`) or a plain comma list.
pub fn parse_partition(text: &str) -> Result<Vec<usize>> {
    let mut parts = Vec::new();
    for tok in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let bad = || Error::Config(format!("bad partition token {tok:?}"));
        let (v, k) = match tok.split_once('^') {
            Some((v, k)) => (
                v.trim().parse::<usize>().map_err(|_| bad())?,
                k.trim().parse::<usize>().map_err(|_| bad())?,
            ),
            None => (tok.parse::<usize>().map_err(|_| bad())?, 1),
        };
        parts.extend(std::iter::repeat(v).take(k));
    }
    if parts.is_empty() {
        return Err(Error::Config("empty partition".into()));
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    Ok(parts)
}

/// Builds a constant-partition code, choosing the construction from the
/// target: injection pools for all-distinct words, cyclic Kirkman systems
/// when their parameters fit, randomized search otherwise.
pub fn partition_code(target: &ConstructionTarget) -> Result<(Code, &'static str)> {
    let parts = target
        .validate()?
        .ok_or_else(|| Error::Config("a partition is required".into()))?;
    if parts.iter().all(|&p| p <= 1) {
        return injection_esw(target).map(|c| (c, "injection"));
    }
    if kirkman_applicable(target) {
        return kirkman_partition_code(target).map(|c| (c, "kirkman"));
    }
    search_partition_code(target).map(|c| (c, "search"))
}
