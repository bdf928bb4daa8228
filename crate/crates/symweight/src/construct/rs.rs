use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ConstructionTarget;
use crate::code::{counts_into, symbol_stats, Code};
use crate::error::{Error, Result};
use crate::gf::FieldSpec;

/// Largest code `rs_code` will enumerate.
const MAX_RS_WORDS: usize = 1 << 22;

/// Default number of random translates tried by [`rs_coset`].
pub const DEFAULT_COSET_BUDGET: u64 = 100_000;

/// A Reed–Solomon code: evaluations of polynomials of degree `< k` at
/// `α^0, …, α^(n-1)`.
#[derive(Clone, Debug)]
pub struct ReedSolomon {
    field: FieldSpec,
    n: usize,
    k: usize,
    points: Vec<u8>,
}

impl ReedSolomon {
    pub fn new(field: FieldSpec, n: usize, k: usize) -> Result<Self> {
        let q = field.q();
        if n == 0 || n > q - 1 {
            return Err(Error::UnsupportedLength { n, q });
        }
        if k == 0 || k > n {
            return Err(Error::OutOfRange {
                what: "k",
                value: k as i64,
                lo: 1,
                hi: n as i64,
            });
        }
        let points = (0..n).map(|i| field.alpha_pow(i)).collect();
        Ok(ReedSolomon {
            field,
            n,
            k,
            points,
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn points(&self) -> &[u8] {
        &self.points
    }

    /// Designed distance `n - k + 1`.
    pub fn distance(&self) -> usize {
        self.n - self.k + 1
    }

    pub fn encode(&self, coeffs: &[u8]) -> Vec<u8> {
        self.points
            .iter()
            .map(|&x| self.field.eval(coeffs, x))
            .collect()
    }

    /// All `q^k` codewords, messages in lexicographic order of
    /// `(c_0, …, c_{k-1})`.
    pub fn code(&self) -> Result<Code> {
        let q = self.field.q();
        let size = q
            .checked_pow(self.k as u32)
            .filter(|&s| s <= MAX_RS_WORDS)
            .ok_or_else(|| {
                Error::Config(format!("RS code with q^k = {q}^{} is too large", self.k))
            })?;
        let mut flat = Vec::with_capacity(size * self.n);
        let mut coeffs = vec![0u8; self.k];
        for idx in 0..size {
            let mut x = idx;
            for c in coeffs.iter_mut().rev() {
                *c = (x % q) as u8;
                x /= q;
            }
            flat.extend(self.encode(&coeffs));
        }
        Code::from_flat(self.n, q, flat, format!("RS({},{})_{}", self.n, self.k, q))
    }
}

/// `rs_code(field, n, k)` as a plain [`Code`].
pub fn rs_code(field: &FieldSpec, n: usize, k: usize) -> Result<Code> {
    ReedSolomon::new(field.clone(), n, k)?.code()
}

/// The translate `{c + v : c ∈ base}` over GF(2^m).
pub fn coset(base: &Code, v: &[u8]) -> Result<Code> {
    if v.len() != base.n() {
        return Err(Error::LengthMismatch {
            expected: base.n(),
            got: v.len(),
        });
    }
    let flat = base
        .words()
        .flat_map(|w| w.iter().zip(v).map(|(a, b)| a ^ b))
        .collect();
    Code::from_flat(base.n(), base.q(), flat, base.id().to_string())
}

/// Result of the coset search.
#[derive(Clone, Debug)]
pub struct CosetReport {
    pub translate: Vec<u8>,
    /// Bounded symbol weight of the chosen coset.
    pub swt: usize,
    /// Which candidate produced the translate.
    pub source: &'static str,
    /// Candidates evaluated.
    pub evaluated: u64,
}

/// Bounded symbol weight of `base + v`, or `None` once it exceeds `cap`.
fn coset_swt(base: &Code, v: &[u8], cap: usize) -> Option<usize> {
    let mut counts = vec![0usize; base.q()];
    let mut buf = vec![0u8; base.n()];
    let mut worst = 0;
    for w in base.words() {
        for ((b, a), t) in buf.iter_mut().zip(w).zip(v) {
            *b = a ^ t;
        }
        counts_into(&buf, &mut counts);
        worst = worst.max(counts.iter().copied().max().unwrap_or(0));
        if worst > cap {
            return None;
        }
    }
    Some(worst)
}

/// Finds a translate of an RS code with small bounded symbol weight.
///
/// The first candidate is the evaluation of `x^k`: adding it turns every
/// codeword into a monic degree-`k` polynomial, which takes each value at
/// most `k` times. Every coset contains a word with some symbol `k` times
/// (interpolate through any `k` points), so `k` is optimal and the search
/// stops there. Otherwise up to `budget` seeded random translates are
/// tried and the best kept.
pub fn rs_coset(rs: &ReedSolomon, target: &ConstructionTarget) -> Result<(Code, CosetReport)> {
    let base = rs.code()?;
    let n = rs.n();
    let lower = rs.k().min(n);
    let q = rs.field().q();
    let mut mono = vec![0u8; rs.k() + 1];
    mono[rs.k()] = 1;
    let candidates: Vec<(&'static str, Vec<u8>)> =
        vec![("monomial", rs.encode(&mono)), ("zero", vec![0u8; n])];
    let mut best: Option<CosetReport> = None;
    let mut evaluated = 0u64;
    let mut consider = |source: &'static str, v: Vec<u8>, best: &mut Option<CosetReport>| {
        evaluated += 1;
        let cap = best.as_ref().map_or(n, |b| b.swt.saturating_sub(1));
        if let Some(swt) = coset_swt(&base, &v, cap) {
            *best = Some(CosetReport {
                translate: v,
                swt,
                source,
                evaluated: 0,
            });
        }
    };
    for (source, v) in candidates {
        consider(source, v, &mut best);
    }
    if best.as_ref().map_or(true, |b| b.swt > lower) {
        let mut rng = ChaCha8Rng::seed_from_u64(target.seed);
        let budget = target.budget.unwrap_or(DEFAULT_COSET_BUDGET);
        for _ in 0..budget {
            let v: Vec<u8> = (0..n).map(|_| rng.gen_range(0..q) as u8).collect();
            consider("random", v, &mut best);
            if best.as_ref().is_some_and(|b| b.swt <= lower) {
                break;
            }
        }
    }
    let mut report = best.expect("the zero translate always yields a weight");
    report.evaluated = evaluated;
    if report.swt > target.r {
        return Err(Error::ConstructionFailed(format!(
            "best coset has symbol weight {} > {}",
            report.swt, target.r
        )));
    }
    let mut code = coset(&base, &report.translate)?;
    code.set_id(format!("RSC({},{},{})_{}", n, rs.distance(), report.swt, q));
    Ok((code, report))
}

/// Keeps the codewords of `base` with symbol weight at most `target.r`,
/// ordered by symbol weight then lexicographically, truncated to
/// `target.size_target`.
pub fn rs_subcode_expurgate(base: &Code, target: &ConstructionTarget) -> Result<Code> {
    let q = base.q();
    let mut kept: Vec<(usize, &[u8])> = base
        .words()
        .filter_map(|w| {
            let swt = symbol_stats(w, q).map(|s| s.swt).ok()?;
            (swt <= target.r).then_some((swt, w))
        })
        .collect();
    if kept.len() < target.size_target {
        return Err(Error::ConstructionFailed(format!(
            "only {} codewords have symbol weight <= {}, need {}",
            kept.len(),
            target.r,
            target.size_target
        )));
    }
    kept.sort_unstable();
    kept.truncate(target.size_target);
    let flat = kept
        .into_iter()
        .flat_map(|(_, w)| w.iter().copied())
        .collect();
    Code::from_flat(base.n(), q, flat, base.id().to_string())
}
