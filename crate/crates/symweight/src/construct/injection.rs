use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{search_partition_code, ConstructionTarget};
use crate::code::Code;
use crate::error::{Error, Result};
use crate::gf::FieldSpec;

/// Algebraic sources of injection codewords with a guaranteed distance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InjectionPool {
    /// Even permutations of `q` symbols; any two differ in at least 3
    /// places, so dropping the last coordinate leaves distance 2.
    Alternating,
    /// Möbius maps `x -> (ax+b)/(cx+d)` on the projective line over a prime
    /// field, `q = p + 1`. Distinct maps agree on at most 2 points.
    Mobius,
    /// Affine maps `x -> L(x) + b` over GF(2^m) with `L` a bijective
    /// linearized polynomial of degree at most `2^j`. Distinct maps agree
    /// on at most `2^j` points.
    AffineLinearized { j: u32 },
}

impl InjectionPool {
    pub fn name(&self) -> String {
        match self {
            InjectionPool::Alternating => "alternating".into(),
            InjectionPool::Mobius => "mobius".into(),
            InjectionPool::AffineLinearized { j } => format!("affine-linearized-{j}"),
        }
    }
}

fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Pools whose guaranteed distance meets the target, with their sizes.
fn applicable_pools(t: &ConstructionTarget) -> Vec<(InjectionPool, usize)> {
    let (n, q, d) = (t.n, t.q, t.d_min);
    let mut out = Vec::new();
    let p = q.wrapping_sub(1);
    if q >= 4 && is_prime(p) && (n == p || n == q) && d + 2 <= n {
        out.push((InjectionPool::Mobius, p * (p * p - 1)));
    }
    if q.is_power_of_two() && (4..=64).contains(&q) && (n == q - 1 || n == q) && n > d {
        let j = (n - d).ilog2();
        if (1usize << j) < q - 1 && q.pow(j + 1) <= 1 << 22 {
            out.push((InjectionPool::AffineLinearized { j }, usize::MAX));
        }
    }
    if (2..=10).contains(&q) && ((n == q - 1 && d <= 2) || (n == q && d <= 3)) {
        out.push((InjectionPool::Alternating, (1..=q).product::<usize>() / 2));
    }
    out
}

fn mobius_words(p: usize, n: usize) -> Vec<Vec<u8>> {
    let inv = |x: usize| (1..p).find(|&y| x * y % p == 1).expect("nonzero element");
    let inf = p;
    let mut seen = HashSet::new();
    let mut words = Vec::new();
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                for d in 0..p {
                    if (a * d + p * p - b * c) % p == 0 {
                        continue;
                    }
                    let image = |x: usize| -> usize {
                        if x == inf {
                            return if c == 0 { inf } else { a * inv(c) % p };
                        }
                        let den = (c * x + d) % p;
                        if den == 0 {
                            inf
                        } else {
                            (a * x + b) % p * inv(den) % p
                        }
                    };
                    let w: Vec<u8> = (0..n)
                        .map(|x| image(if x == p { inf } else { x }) as u8)
                        .collect();
                    if seen.insert(w.clone()) {
                        words.push(w);
                    }
                }
            }
        }
    }
    words
}

fn affine_linearized_words(q: usize, n: usize, j: u32) -> Result<Vec<Vec<u8>>> {
    let field = FieldSpec::with_size(q)?;
    let points: Vec<u8> = if n == q {
        std::iter::once(0)
            .chain((0..q - 1).map(|i| field.alpha_pow(i)))
            .collect()
    } else {
        (0..q - 1).map(|i| field.alpha_pow(i)).collect()
    };
    let terms = j as usize + 1;
    let mut words = Vec::new();
    let mut coeffs = vec![0u8; terms];
    let linearized = |coeffs: &[u8], x: u8| -> u8 {
        coeffs
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &a)| acc ^ field.mul(a, field.pow(x, 1 << i)))
    };
    for idx in 0..q.pow(terms as u32) {
        let mut v = idx;
        for c in coeffs.iter_mut() {
            *c = (v % q) as u8;
            v /= q;
        }
        if (1..q).any(|x| linearized(&coeffs, x as u8) == 0) {
            continue;
        }
        let base: Vec<u8> = points.iter().map(|&x| linearized(&coeffs, x)).collect();
        for b in 0..q as u8 {
            words.push(base.iter().map(|&y| y ^ b).collect());
        }
    }
    Ok(words)
}

fn alternating_words(q: usize, n: usize) -> Vec<Vec<u8>> {
    let mut perm: Vec<u8> = (0..q as u8).collect();
    let mut words = Vec::new();
    loop {
        let inversions = (0..q)
            .flat_map(|i| (i + 1..q).map(move |j| (i, j)))
            .filter(|&(i, j)| perm[i] > perm[j])
            .count();
        if inversions % 2 == 0 {
            words.push(perm[..n].to_vec());
        }
        // Advance to the next permutation in lexicographic order.
        let Some(i) = (0..q - 1).rev().find(|&i| perm[i] < perm[i + 1]) else {
            break;
        };
        let j = (i + 1..q)
            .rev()
            .find(|&j| perm[j] > perm[i])
            .expect("successor exists");
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
    words
}

/// Builds the words of a pool for the target's `(n, q)`.
pub fn pool_words(pool: InjectionPool, t: &ConstructionTarget) -> Result<Vec<Vec<u8>>> {
    match pool {
        InjectionPool::Alternating => Ok(alternating_words(t.q, t.n)),
        InjectionPool::Mobius => Ok(mobius_words(t.q - 1, t.n)),
        InjectionPool::AffineLinearized { j } => affine_linearized_words(t.q, t.n, j),
    }
}

/// Injection code (all symbols of every word distinct) meeting the target.
///
/// Uses the first applicable algebraic pool with enough words; a larger
/// pool is subsampled with the target seed. Falls back to randomized
/// search when no pool applies.
pub fn injection_esw(target: &ConstructionTarget) -> Result<Code> {
    let (n, q) = (target.n, target.q);
    if n > q {
        return Err(Error::Config(format!(
            "injection codes need n <= q, got n={n} q={q}"
        )));
    }
    let mut t = target.clone();
    t.r = t.r.max(1);
    let mut partition = vec![1usize; n];
    partition.resize(q, 0);
    if let Some(p) = t.validate()? {
        if p != partition {
            return Err(Error::Config("injection codes have partition 1^n".into()));
        }
    }
    t.partition_target = Some(partition);
    for (pool, size) in applicable_pools(&t) {
        if size < t.size_target {
            continue;
        }
        let mut words = pool_words(pool, &t)?;
        if words.len() < t.size_target {
            continue;
        }
        if words.len() > t.size_target {
            let mut rng = ChaCha8Rng::seed_from_u64(t.seed);
            words.shuffle(&mut rng);
            words.truncate(t.size_target);
        }
        words.sort_unstable();
        return Code::new(n, q, words, format!("{}({n},{})_{q}", pool.name(), t.d_min));
    }
    search_partition_code(&t)
}
