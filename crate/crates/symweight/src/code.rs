//! Codes, per-word symbol statistics, class flags and minimum distance.
//!
//! Symbols are 0-based integers in `[0, q)` with `q <= 64`, so a detector
//! slot fits a `u64` bitmask.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Largest supported alphabet.
pub const MAX_Q: usize = 64;

/// `⌈n/q⌉`, the smallest possible symbol weight of a length-`n` word.
pub fn min_symbol_weight(n: usize, q: usize) -> usize {
    n.div_ceil(q)
}

/// A q-ary block code stored as a flat row-major symbol array.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Code {
    n: usize,
    q: usize,
    symbols: Vec<u8>,
    id: String,
}

impl Code {
    /// Builds a code, checking lengths, symbol range and distinctness.
    pub fn new(n: usize, q: usize, words: Vec<Vec<u8>>, id: impl Into<String>) -> Result<Self> {
        let mut symbols = Vec::with_capacity(words.len() * n);
        for (k, w) in words.iter().enumerate() {
            if w.len() != n {
                return Err(Error::InvalidCode(format!(
                    "word {k} has length {}, expected {n}",
                    w.len()
                )));
            }
            symbols.extend_from_slice(w);
        }
        Self::from_flat(n, q, symbols, id)
    }

    /// Builds a code from `M * n` symbols laid out word after word.
    pub fn from_flat(n: usize, q: usize, symbols: Vec<u8>, id: impl Into<String>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidCode("length must be positive".into()));
        }
        if q == 0 || q > MAX_Q {
            return Err(Error::InvalidCode(format!(
                "alphabet size {q} not in [1, {MAX_Q}]"
            )));
        }
        if symbols.is_empty() || symbols.len() % n != 0 {
            return Err(Error::InvalidCode(
                "a code needs at least one full word".into(),
            ));
        }
        if let Some(&s) = symbols.iter().find(|&&s| s as usize >= q) {
            return Err(Error::InvalidCode(format!("symbol {s} outside [0, {q})")));
        }
        let mut seen = HashSet::with_capacity(symbols.len() / n);
        for w in symbols.chunks_exact(n) {
            if !seen.insert(w) {
                return Err(Error::InvalidCode(format!("repeated word {w:?}")));
            }
        }
        Ok(Code {
            n,
            q,
            symbols,
            id: id.into(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Number of codewords.
    pub fn len(&self) -> usize {
        self.symbols.len() / self.n
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn set_id(&mut self, id: impl Into<String>) {
        self.id = id.into();
    }

    pub fn word(&self, i: usize) -> &[u8] {
        &self.symbols[i * self.n..(i + 1) * self.n]
    }

    pub fn words(&self) -> std::slice::ChunksExact<'_, u8> {
        self.symbols.chunks_exact(self.n)
    }

    /// Codewords as owned vectors.
    pub fn to_vecs(&self) -> Vec<Vec<u8>> {
        self.words().map(<[u8]>::to_vec).collect()
    }

    /// Parses the text format: a `n q M` header line, then `M` lines of `n`
    /// symbols. Lines starting with `#` are comments; a `# id=<label>`
    /// comment sets the identifier, otherwise `default_id` is used.
    pub fn parse(text: &str, default_id: &str) -> Result<Self> {
        let mut id = default_id.to_string();
        let mut header: Option<(usize, usize, usize)> = None;
        let mut symbols = Vec::new();
        let mut rows = 0usize;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let lineno = lineno + 1;
            if let Some(comment) = line.strip_prefix('#') {
                if let Some(v) = comment.trim().strip_prefix("id=") {
                    id = v.trim().to_string();
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let nums = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>().map_err(|e| Error::Parse {
                        line: lineno,
                        msg: format!("{t:?}: {e}"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            match header {
                None => {
                    if nums.len() != 3 {
                        return Err(Error::Parse {
                            line: lineno,
                            msg: "header must be `n q M`".into(),
                        });
                    }
                    header = Some((nums[0], nums[1], nums[2]));
                }
                Some((n, q, _)) => {
                    if nums.len() != n {
                        return Err(Error::Parse {
                            line: lineno,
                            msg: format!("expected {n} symbols, found {}", nums.len()),
                        });
                    }
                    for &s in &nums {
                        if s >= q {
                            return Err(Error::Parse {
                                line: lineno,
                                msg: format!("symbol {s} outside [0, {q})"),
                            });
                        }
                        symbols.push(s as u8);
                    }
                    rows += 1;
                }
            }
        }
        let (n, q, m) = header.ok_or(Error::Parse {
            line: 0,
            msg: "missing header".into(),
        })?;
        if rows != m {
            return Err(Error::Parse {
                line: 0,
                msg: format!("header announces {m} words, found {rows}"),
            });
        }
        Code::from_flat(n, q, symbols, id)
    }

    /// Renders the text format, preceded by the given comment lines.
    pub fn to_text(&self, comments: &[String]) -> String {
        let mut out = String::with_capacity(self.symbols.len() * 3 + 64);
        for c in comments {
            let _ = writeln!(out, "# {c}");
        }
        let _ = writeln!(out, "{} {} {}", self.n, self.q, self.len());
        for w in self.words() {
            let mut first = true;
            for &s in w {
                if !first {
                    out.push(' ');
                }
                first = false;
                let _ = write!(out, "{s}");
            }
            out.push('\n');
        }
        out
    }

    /// Reads a code file; the file stem is the default identifier.
    pub fn read_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        Code::parse(&text, &stem)
    }

    pub fn write_file(&self, path: &Path, comments: &[String]) -> Result<()> {
        std::fs::write(path, self.to_text(comments))?;
        Ok(())
    }
}

/// Per-word symbol counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolStats {
    /// `counts[σ]` is the number of positions holding `σ`.
    pub counts: Vec<usize>,
    /// Largest count.
    pub swt: usize,
    /// Counts sorted in descending order (length `q`, zeros included).
    pub partition: Vec<usize>,
}

pub(crate) fn counts_into(u: &[u8], counts: &mut [usize]) {
    counts.iter_mut().for_each(|c| *c = 0);
    for &s in u {
        counts[s as usize] += 1;
    }
}

/// Symbol counts, symbol weight and partition of `u` over `[0, q)`.
pub fn symbol_stats(u: &[u8], q: usize) -> Result<SymbolStats> {
    if let Some(&s) = u.iter().find(|&&s| s as usize >= q) {
        return Err(Error::InvalidCodeword(format!(
            "symbol {s} outside [0, {q})"
        )));
    }
    let mut counts = vec![0usize; q];
    counts_into(u, &mut counts);
    let swt = counts.iter().copied().max().unwrap_or(0);
    let mut partition = counts.clone();
    partition.sort_unstable_by(|a, b| b.cmp(a));
    Ok(SymbolStats {
        counts,
        swt,
        partition,
    })
}

/// Class membership flags computed over all codewords.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassLabel {
    /// Bounded symbol weight: the largest symbol weight of any codeword.
    pub bounded_symbol_weight: usize,
    pub constant_composition: bool,
    pub constant_partition: bool,
    /// Every codeword has symbol weight exactly `⌈n/q⌉`.
    pub minimum_symbol_weight: bool,
    /// Every symbol appears `⌊n/q⌋` or `⌈n/q⌉` times in every codeword.
    pub equitable: bool,
    /// `q` divides `n` and every symbol appears exactly `n/q` times.
    pub fpa: bool,
    /// `n <= q` and the symbols of every codeword are distinct.
    pub injection: bool,
    /// `n = q` and every codeword is a permutation of the alphabet.
    pub permutation: bool,
}

/// Scans all codewords and computes the class flags.
pub fn classify(code: &Code) -> ClassLabel {
    let (n, q) = (code.n(), code.q());
    let lo = n / q;
    let hi = min_symbol_weight(n, q);
    let mut counts = vec![0usize; q];
    let mut first_counts: Option<Vec<usize>> = None;
    let mut first_partition: Option<Vec<usize>> = None;
    let mut label = ClassLabel {
        bounded_symbol_weight: 0,
        constant_composition: true,
        constant_partition: true,
        minimum_symbol_weight: true,
        equitable: true,
        fpa: n % q == 0,
        injection: n <= q,
        permutation: n == q,
    };
    for w in code.words() {
        counts_into(w, &mut counts);
        let swt = counts.iter().copied().max().unwrap_or(0);
        label.bounded_symbol_weight = label.bounded_symbol_weight.max(swt);
        if swt != hi {
            label.minimum_symbol_weight = false;
        }
        if counts.iter().any(|&c| c < lo || c > hi) {
            label.equitable = false;
        }
        if counts.iter().any(|&c| c > 1) {
            label.injection = false;
        }
        match &first_counts {
            None => first_counts = Some(counts.clone()),
            Some(f) if *f != counts => label.constant_composition = false,
            _ => {}
        }
        let mut partition = counts.clone();
        partition.sort_unstable_by(|a, b| b.cmp(a));
        match &first_partition {
            None => first_partition = Some(partition),
            Some(f) if *f != partition => label.constant_partition = false,
            _ => {}
        }
    }
    label.fpa = label.fpa && label.equitable;
    label.permutation = label.permutation && label.injection;
    label
}

/// Number of positions where `a` and `b` differ.
pub fn hamming(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

const LANE: usize = 16;
const LOW7: u128 = u128::from_ne_bytes([0x7f; 16]);
const HIGH: u128 = u128::from_ne_bytes([0x80; 16]);

/// Number of 16-symbol lanes needed for a length-`n` word.
pub(crate) fn lanes_for(n: usize) -> usize {
    n.div_ceil(LANE)
}

/// Appends `w` to `out` as 16-symbol lanes, zero padded.
pub(crate) fn pack_into(w: &[u8], out: &mut Vec<u128>) {
    for chunk in w.chunks(LANE) {
        let mut bytes = [0u8; LANE];
        bytes[..chunk.len()].copy_from_slice(chunk);
        out.push(u128::from_ne_bytes(bytes));
    }
}

fn pack_words(code: &Code) -> (Vec<u128>, usize) {
    let lanes = lanes_for(code.n());
    let mut packed = Vec::with_capacity(code.len() * lanes);
    for w in code.words() {
        pack_into(w, &mut packed);
    }
    (packed, lanes)
}

#[inline]
fn nonzero_bytes(x: u128) -> u32 {
    ((((x & LOW7).wrapping_add(LOW7)) | x) & HIGH).count_ones()
}

/// Hamming distance between two packed words.
#[inline]
pub(crate) fn packed_distance(a: &[u128], b: &[u128]) -> usize {
    a.iter()
        .zip(b)
        .map(|(x, y)| nonzero_bytes(x ^ y))
        .sum::<u32>() as usize
}

/// Minimum pairwise Hamming distance over all codeword pairs.
pub fn min_distance(code: &Code) -> Result<usize> {
    let m = code.len();
    if m < 2 {
        return Err(Error::UndefinedDistance(m));
    }
    let (packed, lanes) = pack_words(code);
    let d = (0..m - 1)
        .into_par_iter()
        .map(|i| {
            let a = &packed[i * lanes..(i + 1) * lanes];
            let mut best = usize::MAX;
            for j in i + 1..m {
                let b = &packed[j * lanes..(j + 1) * lanes];
                best = best.min(packed_distance(a, b));
            }
            best
        })
        .min()
        .expect("at least one pair");
    Ok(d)
}
