//! Hard-decision minimum-distance decoding over set-valued slots.

use crate::channel::DetectorOutput;
use crate::code::Code;
use crate::error::{Error, Result};

/// Number of positions whose slot misses the codeword symbol.
pub fn dist(u: &[u8], v: &DetectorOutput) -> Result<usize> {
    if u.len() != v.n() {
        return Err(Error::LengthMismatch {
            expected: v.n(),
            got: u.len(),
        });
    }
    Ok(dist_masks(u, v.masks()))
}

#[inline]
pub(crate) fn dist_masks(u: &[u8], masks: &[u64]) -> usize {
    u.iter()
        .zip(masks)
        .filter(|(&s, &m)| m >> s & 1 == 0)
        .count()
}

/// Outcome of minimum-distance decoding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeResult {
    /// Indices of every codeword at minimum distance, ascending.
    pub winners: Vec<usize>,
    /// Index of the lexicographically smallest winning codeword.
    pub chosen: usize,
    pub distance: usize,
    pub tie: bool,
}

impl DecodeResult {
    /// Decoding is correct only when the transmitted word is the unique winner.
    pub fn uniquely_correct(&self, transmitted: usize) -> bool {
        self.winners.len() == 1 && self.winners[0] == transmitted
    }
}

pub fn min_dist_decode(code: &Code, v: &DetectorOutput) -> Result<DecodeResult> {
    if code.n() != v.n() {
        return Err(Error::LengthMismatch {
            expected: code.n(),
            got: v.n(),
        });
    }
    let masks = v.masks();
    let mut best = usize::MAX;
    let mut winners = Vec::new();
    for (i, w) in code.words().enumerate() {
        let d = dist_masks(w, masks);
        if d < best {
            best = d;
            winners.clear();
        }
        if d == best {
            winners.push(i);
        }
    }
    let chosen = *winners
        .iter()
        .min_by(|&&a, &&b| code.word(a).cmp(code.word(b)))
        .expect("codes are nonempty");
    Ok(DecodeResult {
        tie: winners.len() > 1,
        winners,
        chosen,
        distance: best,
    })
}

/// Stripping threshold `⌊(n + r) / 2⌋`.
pub fn narrowband_threshold(n: usize, r: usize) -> usize {
    (n + r) / 2
}

/// Removes every symbol present in more than `⌊(n + r) / 2⌋` slots, where
/// `r` is the bounded symbol weight of the code.
pub fn narrowband_detect(v: &DetectorOutput, n: usize, r: usize) -> DetectorOutput {
    let tau = narrowband_threshold(n, r);
    let mut strip = 0u64;
    for s in 0..v.q() as u8 {
        if v.occurrences(s) > tau {
            strip |= 1 << s;
        }
    }
    let masks = v.masks().iter().map(|&m| m & !strip).collect();
    DetectorOutput::from_masks(v.q(), masks)
}
