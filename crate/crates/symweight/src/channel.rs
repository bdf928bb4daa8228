//! Symbol-level channel with set-valued detector output.
//!
//! Positions are 0-based. A narrowband event on symbol `σ` with start `i`
//! and duration `l` covers the slots `[i, i + l - 1] ∩ [0, n - 1]`; starts
//! may be negative to model interference that began before the word.

use std::fmt::Write as _;

use rand::Rng;

use crate::code::MAX_Q;
use crate::error::{check_range, Error, Result};

/// One received slot per time instance, each a set of symbols in `[0, q)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DetectorOutput {
    q: usize,
    slots: Vec<u64>,
}

fn full_mask(q: usize) -> u64 {
    if q == 64 {
        u64::MAX
    } else {
        (1u64 << q) - 1
    }
}

impl DetectorOutput {
    /// `n` empty slots.
    pub fn empty(n: usize, q: usize) -> Result<Self> {
        check_range("q", q as i64, 1, MAX_Q as i64)?;
        Ok(DetectorOutput {
            q,
            slots: vec![0; n],
        })
    }

    /// Singleton slots `({u_0}, …, {u_{n-1}})`.
    pub fn from_codeword(u: &[u8], q: usize) -> Result<Self> {
        check_range("q", q as i64, 1, MAX_Q as i64)?;
        if let Some(&s) = u.iter().find(|&&s| s as usize >= q) {
            return Err(Error::InvalidCodeword(format!(
                "symbol {s} outside [0, {q})"
            )));
        }
        Ok(DetectorOutput {
            q,
            slots: u.iter().map(|&s| 1u64 << s).collect(),
        })
    }

    /// Builds an output from explicit symbol sets.
    pub fn from_sets(q: usize, sets: &[Vec<u8>]) -> Result<Self> {
        let mut v = Self::empty(sets.len(), q)?;
        for (slot, set) in v.slots.iter_mut().zip(sets) {
            for &s in set {
                if s as usize >= q {
                    return Err(Error::InvalidCodeword(format!(
                        "symbol {s} outside [0, {q})"
                    )));
                }
                *slot |= 1 << s;
            }
        }
        Ok(v)
    }

    pub(crate) fn from_masks(q: usize, slots: Vec<u64>) -> Self {
        DetectorOutput { q, slots }
    }

    pub fn n(&self) -> usize {
        self.slots.len()
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Slot bitmasks; bit `σ` of slot `i` is set when `σ ∈ v_i`.
    pub fn masks(&self) -> &[u64] {
        &self.slots
    }

    pub fn contains(&self, i: usize, sigma: u8) -> bool {
        self.slots[i] >> sigma & 1 == 1
    }

    /// Symbols of slot `i` in increasing order.
    pub fn slot(&self, i: usize) -> Vec<u8> {
        (0..self.q as u8).filter(|&s| self.contains(i, s)).collect()
    }

    /// All slots as sorted symbol lists.
    pub fn to_sets(&self) -> Vec<Vec<u8>> {
        (0..self.n()).map(|i| self.slot(i)).collect()
    }

    /// Number of slots containing `sigma`.
    pub fn occurrences(&self, sigma: u8) -> usize {
        self.slots.iter().filter(|&&m| m >> sigma & 1 == 1).count()
    }

    fn check_symbol(&self, sigma: u8) -> Result<()> {
        check_range("symbol", sigma as i64, 0, self.q as i64 - 1)
    }

    fn check_position(&self, i: usize) -> Result<()> {
        check_range("position", i as i64, 0, self.n() as i64 - 1)
    }

    /// Adds `sigma` to the slots of the clipped window `[start, start + l - 1]`.
    pub fn apply_narrowband(&mut self, sigma: u8, start: i64, l: usize) -> Result<()> {
        self.check_symbol(sigma)?;
        check_range("start", start, i64::MIN, self.n() as i64 - 1)?;
        check_range("duration", l as i64, 1, i64::MAX)?;
        let lo = start.max(0) as usize;
        let hi = (start + l as i64).min(self.n() as i64);
        for i in lo..hi.max(lo as i64) as usize {
            self.slots[i] |= 1 << sigma;
        }
        Ok(())
    }

    /// Removes every faded symbol from every slot.
    pub fn apply_fading(&mut self, symbols: &[u8]) -> Result<()> {
        let mut mask = 0u64;
        for &s in symbols {
            self.check_symbol(s)?;
            mask |= 1 << s;
        }
        for slot in &mut self.slots {
            *slot &= !mask;
        }
        Ok(())
    }

    /// Sets the listed slots to the full alphabet.
    pub fn apply_impulse(&mut self, positions: &[usize]) -> Result<()> {
        for &i in positions {
            self.check_position(i)?;
        }
        let full = full_mask(self.q);
        for &i in positions {
            self.slots[i] = full;
        }
        Ok(())
    }

    /// Adds spurious symbols and removes transmitted symbols.
    pub fn apply_background(
        &mut self,
        u: &[u8],
        insertions: &[(usize, u8)],
        deletions: &[usize],
    ) -> Result<()> {
        self.apply_insertions(u, insertions)?;
        self.apply_deletions(u, deletions)
    }

    fn apply_insertions(&mut self, u: &[u8], insertions: &[(usize, u8)]) -> Result<()> {
        self.check_len(u)?;
        for &(i, s) in insertions {
            self.check_position(i)?;
            self.check_symbol(s)?;
            if u[i] == s {
                return Err(Error::InvalidPlan(format!(
                    "insertion ({i}, {s}) repeats the transmitted symbol"
                )));
            }
            self.slots[i] |= 1 << s;
        }
        Ok(())
    }

    fn apply_deletions(&mut self, u: &[u8], deletions: &[usize]) -> Result<()> {
        self.check_len(u)?;
        for &i in deletions {
            self.check_position(i)?;
            self.slots[i] &= !(1u64 << u[i]);
        }
        Ok(())
    }

    fn check_len(&self, u: &[u8]) -> Result<()> {
        if u.len() != self.n() {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                got: u.len(),
            });
        }
        Ok(())
    }
}

/// How narrowband start instances are drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum StartPolicy {
    /// Uniform over every start whose window overlaps the word:
    /// `[1 - l, n - 1]`.
    #[default]
    Overlapping,
    /// Always start at position 0.
    Aligned,
}

/// Error probabilities and narrowband durations.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelConfig {
    /// Per-symbol narrowband probability.
    pub p: f64,
    /// Per-event probability of fading, impulse, insertion and deletion.
    pub background: f64,
    /// Narrowband durations, drawn uniformly per event.
    pub durations: Vec<usize>,
    pub start_policy: StartPolicy,
}

impl ChannelConfig {
    /// Durations default to `{b·n : b = 1..10}`.
    pub fn new(p: f64, background: f64, n: usize) -> Self {
        ChannelConfig {
            p,
            background,
            durations: (1..=10).map(|b| b * n).collect(),
            start_policy: StartPolicy::Overlapping,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("p", self.p), ("Q", self.background)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Config(format!("{name} = {v} is not a probability")));
            }
        }
        if self.durations.is_empty() || self.durations.contains(&0) {
            return Err(Error::InvalidDurations);
        }
        Ok(())
    }
}

/// A narrowband event.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NarrowbandEvent {
    pub symbol: u8,
    pub start: i64,
    pub duration: usize,
}

/// Every error applied to one transmission.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ErrorPlan {
    pub narrowband: Vec<NarrowbandEvent>,
    pub fading: Vec<u8>,
    pub impulses: Vec<usize>,
    pub insertions: Vec<(usize, u8)>,
    pub deletions: Vec<usize>,
}

impl ErrorPlan {
    pub fn is_empty(&self) -> bool {
        self.narrowband.is_empty()
            && self.fading.is_empty()
            && self.impulses.is_empty()
            && self.insertions.is_empty()
            && self.deletions.is_empty()
    }

    /// Detector output for transmitted `u`: insertions, narrowband,
    /// deletions, fading, then impulses.
    pub fn apply(&self, u: &[u8], q: usize) -> Result<DetectorOutput> {
        let mut v = DetectorOutput::from_codeword(u, q)?;
        v.apply_insertions(u, &self.insertions)?;
        for e in &self.narrowband {
            v.apply_narrowband(e.symbol, e.start, e.duration)?;
        }
        v.apply_deletions(u, &self.deletions)?;
        v.apply_fading(&self.fading)?;
        v.apply_impulse(&self.impulses)?;
        Ok(v)
    }

    /// One event per line.
    pub fn to_log(&self) -> String {
        let mut out = String::new();
        for &(i, s) in &self.insertions {
            let _ = writeln!(out, "insertion position={i} symbol={s}");
        }
        for e in &self.narrowband {
            let _ = writeln!(
                out,
                "narrowband symbol={} start={} duration={}",
                e.symbol, e.start, e.duration
            );
        }
        for &i in &self.deletions {
            let _ = writeln!(out, "deletion position={i}");
        }
        for &s in &self.fading {
            let _ = writeln!(out, "fading symbol={s}");
        }
        for &i in &self.impulses {
            let _ = writeln!(out, "impulse position={i}");
        }
        out
    }

    /// Parses the output of [`ErrorPlan::to_log`].
    pub fn from_log(text: &str) -> Result<Self> {
        let mut plan = ErrorPlan::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: &str| Error::Parse {
                line: lineno + 1,
                msg: msg.to_string(),
            };
            let mut words = line.split_whitespace();
            let kind = words.next().ok_or_else(|| err("empty line"))?;
            let mut field = |name: &str| -> Result<i64> {
                let tok = words
                    .next()
                    .ok_or_else(|| err(&format!("missing {name}")))?;
                let value = tok
                    .strip_prefix(name)
                    .and_then(|t| t.strip_prefix('='))
                    .ok_or_else(|| err(&format!("expected {name}=…, found {tok}")))?;
                value
                    .parse()
                    .map_err(|_| err(&format!("bad {name} value {value}")))
            };
            let to_usize = |v: i64, what: &str| {
                usize::try_from(v).map_err(|_| err(&format!("negative {what}")))
            };
            let to_sym = |v: i64| u8::try_from(v).map_err(|_| err("symbol out of range"));
            match kind {
                "narrowband" => {
                    let symbol = to_sym(field("symbol")?)?;
                    let start = field("start")?;
                    let duration = to_usize(field("duration")?, "duration")?;
                    plan.narrowband.push(NarrowbandEvent {
                        symbol,
                        start,
                        duration,
                    });
                }
                "fading" => plan.fading.push(to_sym(field("symbol")?)?),
                "impulse" => plan
                    .impulses
                    .push(to_usize(field("position")?, "position")?),
                "insertion" => {
                    let i = to_usize(field("position")?, "position")?;
                    let s = to_sym(field("symbol")?)?;
                    plan.insertions.push((i, s));
                }
                "deletion" => plan
                    .deletions
                    .push(to_usize(field("position")?, "position")?),
                other => return Err(err(&format!("unknown event kind {other}"))),
            }
        }
        Ok(plan)
    }
}

/// Samples an error plan for transmitted `u` and applies it.
///
/// Draw order: narrowband per symbol (then duration and start), fading per
/// symbol, impulse per position, insertion per `(position, symbol ≠ u_i)`,
/// deletion per position.
pub fn transmit<R: Rng + ?Sized>(
    u: &[u8],
    q: usize,
    cfg: &ChannelConfig,
    rng: &mut R,
) -> Result<(DetectorOutput, ErrorPlan)> {
    cfg.validate()?;
    let n = u.len();
    let mut plan = ErrorPlan::default();
    for sigma in 0..q as u8 {
        if rng.gen_bool(cfg.p) {
            let duration = cfg.durations[rng.gen_range(0..cfg.durations.len())];
            let start = match cfg.start_policy {
                StartPolicy::Overlapping => rng.gen_range(1 - duration as i64..n as i64),
                StartPolicy::Aligned => 0,
            };
            plan.narrowband.push(NarrowbandEvent {
                symbol: sigma,
                start,
                duration,
            });
        }
    }
    for sigma in 0..q as u8 {
        if rng.gen_bool(cfg.background) {
            plan.fading.push(sigma);
        }
    }
    for i in 0..n {
        if rng.gen_bool(cfg.background) {
            plan.impulses.push(i);
        }
    }
    for (i, &ui) in u.iter().enumerate() {
        for sigma in (0..q as u8).filter(|&s| s != ui) {
            if rng.gen_bool(cfg.background) {
                plan.insertions.push((i, sigma));
            }
        }
    }
    for i in 0..n {
        if rng.gen_bool(cfg.background) {
            plan.deletions.push(i);
        }
    }
    let v = plan.apply(u, q)?;
    Ok((v, plan))
}
