//! Codes from Kirkman triple systems on `3p` points with a cyclic `Z_p`
//! action, `p` prime.
//!
//! Points are `(y, s)` with `y ∈ Z_p` and level `s ∈ {0, 1, 2}`; each point
//! is a codeword and each parallel class is a coordinate. Labelling the `p`
//! blocks of a class with distinct symbols gives a code of length
//! `(3p - 1) / 2` over `p` symbols in which any two words agree in exactly
//! one coordinate. The system has `(p - 1) / 2` classes that are the
//! translates of a single transversal triple, and `p` classes that are the
//! translates of one base class found by exact cover.
//!
//! Word `(x, s)` holds the multiset `x + M_s` for a level multiset `M_s`, so
//! the partition of every word is fixed by three multisets, and the block
//! labels are chosen by backtracking to hit a target partition.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ConstructionTarget;
use crate::code::Code;
use crate::error::{Error, Result};

const COVER_NODE_LIMIT: u64 = 200_000;
const LABEL_NODE_LIMIT: u64 = 2_000_000;
const MAX_ATTEMPTS: usize = 64;

type Point = (usize, usize);

/// A Kirkman triple system on `Z_p × {0,1,2}` invariant under translation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicKirkman {
    pub p: usize,
    /// Transversal triples `{(0,0), (a,1), (b,2)}` stored as `(a, b)`.
    pub invariant: Vec<(usize, usize)>,
    /// Base parallel class; its `p` translates are the remaining classes.
    pub base_class: Vec<[Point; 3]>,
}

fn pair_item(p: usize, a: Point, b: Point) -> usize {
    let h = (p - 1) / 2;
    let (a, b) = if a.1 <= b.1 { (a, b) } else { (b, a) };
    if a.1 == b.1 {
        let d = (b.0 + p - a.0) % p;
        3 * p + a.1 * h + d.min(p - d) - 1
    } else {
        let pair = a.1 + b.1 - 1;
        3 * p + 3 * h + pair * p + (b.0 + p - a.0) % p
    }
}

struct ExactCover {
    options: Vec<[usize; 6]>,
    item_options: Vec<Vec<usize>>,
    covered: Vec<bool>,
    nodes: u64,
    limit: u64,
}

impl ExactCover {
    fn live(&self, o: usize) -> bool {
        self.options[o].iter().all(|&i| !self.covered[i])
    }

    fn solve(&mut self, sol: &mut Vec<usize>) -> bool {
        self.nodes += 1;
        if self.nodes > self.limit {
            return false;
        }
        let mut best: Option<(usize, usize)> = None;
        for item in 0..self.covered.len() {
            if self.covered[item] {
                continue;
            }
            let cap = best.map_or(usize::MAX, |b| b.1);
            let mut count = 0;
            for &o in &self.item_options[item] {
                if self.live(o) {
                    count += 1;
                    if count >= cap {
                        break;
                    }
                }
            }
            if count < cap {
                best = Some((item, count));
                if count == 0 {
                    return false;
                }
            }
        }
        let Some((item, _)) = best else {
            return true;
        };
        let candidates: Vec<usize> = self.item_options[item]
            .iter()
            .copied()
            .filter(|&o| self.live(o))
            .collect();
        for o in candidates {
            for &i in &self.options[o] {
                self.covered[i] = true;
            }
            sol.push(o);
            if self.solve(sol) {
                return true;
            }
            sol.pop();
            for &i in &self.options[o] {
                self.covered[i] = false;
            }
        }
        false
    }
}

impl CyclicKirkman {
    /// Seeded search: sample transversal triples with distinct mixed
    /// differences, then complete a base class by exact cover.
    pub fn search(p: usize, rng: &mut ChaCha8Rng) -> Result<Self> {
        if p < 5 || !(2..p).take_while(|d| d * d <= p).all(|d| p % d != 0) {
            return Err(Error::Config(format!(
                "cyclic Kirkman systems need a prime p >= 5, got {p}"
            )));
        }
        let h = (p - 1) / 2;
        let n_items = 6 * p + 3 * h;
        for _ in 0..MAX_ATTEMPTS {
            let invariant = loop {
                let mut a: Vec<usize> = (0..p).collect();
                let mut b: Vec<usize> = (0..p).collect();
                a.shuffle(rng);
                b.shuffle(rng);
                let pairs: Vec<(usize, usize)> =
                    a[..h].iter().copied().zip(b[..h].iter().copied()).collect();
                let mut diffs: Vec<usize> = pairs.iter().map(|&(x, y)| (y + p - x) % p).collect();
                diffs.sort_unstable();
                diffs.dedup();
                if diffs.len() == h {
                    break pairs;
                }
            };
            let mut covered = vec![false; n_items];
            for &(a, b) in &invariant {
                covered[pair_item(p, (0, 0), (a, 1))] = true;
                covered[pair_item(p, (0, 0), (b, 2))] = true;
                covered[pair_item(p, (a, 1), (b, 2))] = true;
            }
            let points: Vec<Point> = (0..3).flat_map(|s| (0..p).map(move |y| (y, s))).collect();
            let mut options = Vec::new();
            let mut triples = Vec::new();
            for i in 0..points.len() {
                for j in i + 1..points.len() {
                    for k in j + 1..points.len() {
                        let (a, b, c) = (points[i], points[j], points[k]);
                        let items = [pair_item(p, a, b), pair_item(p, a, c), pair_item(p, b, c)];
                        if items[0] == items[1] || items[0] == items[2] || items[1] == items[2] {
                            continue;
                        }
                        if items.iter().any(|&it| covered[it]) {
                            continue;
                        }
                        options.push([i, j, k, items[0], items[1], items[2]]);
                        triples.push([a, b, c]);
                    }
                }
            }
            let mut item_options = vec![Vec::new(); n_items];
            for (o, opt) in options.iter().enumerate() {
                for &i in opt {
                    item_options[i].push(o);
                }
            }
            let mut solver = ExactCover {
                options,
                item_options,
                covered,
                nodes: 0,
                limit: COVER_NODE_LIMIT,
            };
            let mut sol = Vec::new();
            if solver.solve(&mut sol) {
                let base_class = sol.into_iter().map(|o| triples[o]).collect();
                return Ok(CyclicKirkman {
                    p,
                    invariant,
                    base_class,
                });
            }
        }
        Err(Error::ConstructionFailed(format!(
            "no cyclic Kirkman system on {} points found in {MAX_ATTEMPTS} attempts",
            3 * p
        )))
    }

    /// Code length `(3p - 1) / 2`.
    pub fn n(&self) -> usize {
        (3 * self.p - 1) / 2
    }

    fn block_of(&self) -> Vec<usize> {
        let mut j = vec![0usize; 3 * self.p];
        for (b, tri) in self.base_class.iter().enumerate() {
            for &(y, s) in tri {
                j[s * self.p + y] = b;
            }
        }
        j
    }

    fn offsets(&self, k: usize) -> [usize; 3] {
        let (a, b) = self.invariant[k];
        [0, a, b]
    }

    /// Codewords for block labels `mu` (base class) and `c` (transversal
    /// classes). Word `(x, s)` has index `s * p + x`.
    pub fn words(&self, mu: &[usize], c: &[usize]) -> Vec<Vec<u8>> {
        let p = self.p;
        let j = self.block_of();
        let mut words = Vec::with_capacity(3 * p);
        for s in 0..3 {
            for x in 0..p {
                let mut w = Vec::with_capacity(self.n());
                for (k, &ck) in c.iter().enumerate() {
                    w.push(((x + p - self.offsets(k)[s] + ck) % p) as u8);
                }
                for t in 0..p {
                    w.push(((mu[j[s * p + (x + p - t) % p]] + t) % p) as u8);
                }
                words.push(w);
            }
        }
        words
    }
}

struct Labeler {
    p: usize,
    vars: Vec<(bool, Vec<(usize, usize)>)>,
    counts: [Vec<usize>; 3],
    remaining: [usize; 3],
    used_mu: Vec<bool>,
    value: Vec<Option<usize>>,
    n_zero: usize,
    max_part: usize,
    nodes: u64,
    limit: u64,
}

impl Labeler {
    fn feasible(&self, v: usize, val: usize) -> bool {
        let (is_mu, offs) = &self.vars[v];
        if *is_mu && self.used_mu[val] {
            return false;
        }
        // Two offsets of one variable may land on the same level and symbol.
        for (slot, &(s, o)) in offs.iter().enumerate() {
            let sym = (val + o) % self.p;
            let dup = offs[..slot]
                .iter()
                .filter(|&&(s2, o2)| s2 == s && (val + o2) % self.p == sym)
                .count();
            if self.counts[s][sym] + dup + 1 > self.max_part {
                return false;
            }
        }
        true
    }

    fn apply(&mut self, v: usize, val: usize, add: bool) {
        let offs = self.vars[v].1.clone();
        for (s, o) in offs {
            let sym = (val + o) % self.p;
            if add {
                self.counts[s][sym] += 1;
                self.remaining[s] -= 1;
            } else {
                self.counts[s][sym] -= 1;
                self.remaining[s] += 1;
            }
        }
        if self.vars[v].0 {
            self.used_mu[val] = add;
        }
    }

    fn level_ok(&self, s: usize) -> bool {
        let zeros = self.counts[s].iter().filter(|&&x| x == 0).count();
        if zeros < self.n_zero || zeros - self.n_zero > self.remaining[s] {
            return false;
        }
        let capacity: usize = self.counts[s].iter().map(|&x| self.max_part - x).sum();
        capacity >= self.max_part * self.n_zero + self.remaining[s]
    }

    fn solve(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.limit {
            return false;
        }
        let mut best: Option<(usize, Vec<usize>)> = None;
        for v in 0..self.vars.len() {
            if self.value[v].is_some() {
                continue;
            }
            let vals: Vec<usize> = (0..self.p).filter(|&x| self.feasible(v, x)).collect();
            if vals.is_empty() {
                return false;
            }
            if best.as_ref().map_or(true, |b| vals.len() < b.1.len()) {
                best = Some((v, vals));
            }
        }
        let Some((v, vals)) = best else {
            return true;
        };
        for val in vals {
            self.apply(v, val, true);
            if (0..3).all(|s| self.level_ok(s)) {
                self.value[v] = Some(val);
                if self.solve() {
                    return true;
                }
                self.value[v] = None;
            }
            self.apply(v, val, false);
        }
        false
    }
}

/// Searches block labels so that every word has the partition
/// `2^n_double 1^n_single 0^(p - n_double - n_single)`. Returns `(mu, c)`.
pub fn label_design(
    design: &CyclicKirkman,
    n_double: usize,
    n_single: usize,
    node_limit: u64,
) -> Option<(Vec<usize>, Vec<usize>)> {
    let p = design.p;
    if 2 * n_double + n_single != design.n() || n_double + n_single > p {
        return None;
    }
    let mut vars = Vec::new();
    for tri in &design.base_class {
        vars.push((true, tri.iter().map(|&(y, s)| (s, (p - y) % p)).collect()));
    }
    for k in 0..design.invariant.len() {
        let offs = design.offsets(k);
        vars.push((false, (0..3).map(|s| (s, (p - offs[s]) % p)).collect()));
    }
    let n_vars = vars.len();
    let mut lab = Labeler {
        p,
        vars,
        counts: [vec![0; p], vec![0; p], vec![0; p]],
        remaining: [design.n(); 3],
        used_mu: vec![false; p],
        value: vec![None; n_vars],
        n_zero: p - n_double - n_single,
        max_part: if n_double > 0 { 2 } else { 1 },
        nodes: 0,
        limit: node_limit,
    };
    if !lab.solve() {
        return None;
    }
    let values: Vec<usize> = lab
        .value
        .into_iter()
        .map(|v| v.expect("assigned"))
        .collect();
    let (mu, c) = values.split_at(p);
    Some((mu.to_vec(), c.to_vec()))
}

/// Whether [`kirkman_partition_code`] handles the target.
pub fn kirkman_applicable(t: &ConstructionTarget) -> bool {
    let p = t.q;
    let prime = p >= 5 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0);
    let Ok(Some(parts)) = t.validate() else {
        return false;
    };
    prime && 2 * t.n + 1 == 3 * p && t.d_min < t.n && t.size_target <= 3 * p && parts[0] <= 2
}

/// Constant-partition code with distance `n - 1` from a cyclic Kirkman
/// triple system.
pub fn kirkman_partition_code(t: &ConstructionTarget) -> Result<Code> {
    if !kirkman_applicable(t) {
        return Err(Error::Config(format!(
            "Kirkman construction needs prime q >= 5, n = (3q-1)/2, size <= 3q and parts <= 2 (got {})",
            t.describe()
        )));
    }
    let parts = t.validate()?.expect("checked above");
    let n_double = parts.iter().filter(|&&x| x == 2).count();
    let n_single = parts.iter().filter(|&&x| x == 1).count();
    let mut rng = ChaCha8Rng::seed_from_u64(t.seed);
    for _ in 0..MAX_ATTEMPTS {
        let design = CyclicKirkman::search(t.q, &mut rng)?;
        if let Some((mu, c)) = label_design(&design, n_double, n_single, LABEL_NODE_LIMIT) {
            let mut words = design.words(&mu, &c);
            words.truncate(t.size_target);
            return Code::new(
                t.n,
                t.q,
                words,
                format!("kirkman({},{})_{}", t.n, t.n - 1, t.q),
            );
        }
        // Perturb the stream so the next design differs.
        let _: u64 = rng.gen();
    }
    Err(Error::ConstructionFailed(format!(
        "no labelling with partition 2^{n_double} 1^{n_single} found"
    )))
}
