//! Monte Carlo symbol-error-rate experiments, exhaustive oracles and CSV
//! reports.
//!
//! Every trial draws from its own ChaCha8 stream keyed by
//! `(seed, code id, sweep index, trial index)`, and per-point results are
//! integer sums, so output does not depend on the thread schedule.

mod oracle;
mod report;
mod rng;

pub use oracle::{
    enumeration_size, lemma2_check, prop1_witness, theorem1_oracle, theorem1_sum, Budget,
    CertificationMethod, Lemma2Report, Prop1Witness, Theorem1Verdict, DEFAULT_ORACLE_CAP,
};
pub use report::{emit_csv, format_ser, write_csv, CsvLayout, SerReport, SerRow, SweepPoint};
pub use rng::trial_rng;

use rayon::prelude::*;

use crate::channel::{transmit, ChannelConfig, StartPolicy};
use crate::code::{classify, hamming, min_distance, Code};
use crate::decoder::{min_dist_decode, narrowband_detect};
use crate::error::{Error, Result};
use crate::waveform::{WaveformConfig, WaveformModel};

/// Trials per sweep point when none is given.
pub const DEFAULT_TRIALS: u64 = 10_000;

/// Parameter sweep of an experiment.
#[derive(Clone, Debug, PartialEq)]
pub enum Sweep {
    /// Symbol channel over narrowband probabilities `p`.
    Channel {
        p_values: Vec<f64>,
        /// Fading, impulse, insertion and deletion probability `Q`.
        background: f64,
        /// Narrowband durations; `None` means `{b·n : b = 1..10}`.
        durations: Option<Vec<usize>>,
        start_policy: StartPolicy,
    },
    /// Waveform path over `E_s/N_0` values in dB.
    Waveform {
        esn0_db: Vec<f64>,
        config: WaveformConfig,
    },
}

impl Sweep {
    pub fn len(&self) -> usize {
        match self {
            Sweep::Channel { p_values, .. } => p_values.len(),
            Sweep::Waveform { esn0_db, .. } => esn0_db.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A complete experiment description.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub sweep: Sweep,
    pub trials: u64,
    pub nb_detection: bool,
    pub seed: u64,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.sweep.is_empty() {
            return Err(Error::Config("sweep is empty".into()));
        }
        match &self.sweep {
            Sweep::Channel {
                p_values,
                background,
                durations,
                start_policy,
            } => {
                for &p in p_values {
                    let mut cfg = ChannelConfig::new(p, *background, 1);
                    cfg.start_policy = *start_policy;
                    if let Some(l) = durations {
                        cfg.durations = l.clone();
                    }
                    cfg.validate()?;
                }
            }
            Sweep::Waveform { esn0_db, config } => {
                config.validate()?;
                if esn0_db.iter().any(|x| !x.is_finite()) {
                    return Err(Error::Config("Es/N0 values must be finite".into()));
                }
            }
        }
        Ok(())
    }
}

#[derive(Default, Clone, Copy)]
struct Tally {
    errors: u64,
    ties: u64,
}

impl Tally {
    fn merge(self, o: Tally) -> Tally {
        Tally {
            errors: self.errors + o.errors,
            ties: self.ties + o.ties,
        }
    }
}

/// Runs every sweep point for every code, in code order then sweep order.
pub fn run_ser(codes: &[Code], spec: &ExperimentSpec) -> Result<SerReport> {
    spec.validate()?;
    let mut rows = Vec::new();
    for code in codes {
        let d = if code.len() >= 2 {
            Some(min_distance(code)?)
        } else {
            None
        };
        let swt = classify(code).bounded_symbol_weight;
        match &spec.sweep {
            Sweep::Channel {
                p_values,
                background,
                durations,
                start_policy,
            } => {
                for (k, &p) in p_values.iter().enumerate() {
                    let mut cfg = ChannelConfig::new(p, *background, code.n());
                    cfg.start_policy = *start_policy;
                    if let Some(l) = durations {
                        cfg.durations = l.clone();
                    }
                    let tally = run_point(code, spec, k, swt, |u, rng| {
                        transmit(u, code.q(), &cfg, rng).map(|(v, _)| v)
                    })?;
                    rows.push(SerRow::new(
                        code,
                        d,
                        swt,
                        SweepPoint::Probability(p),
                        Some(*background),
                        spec,
                        tally.ties,
                        tally.errors,
                    ));
                }
            }
            Sweep::Waveform { esn0_db, config } => {
                if code.q() != config.q {
                    return Err(Error::Config(format!(
                        "code {} has q = {} but the waveform uses {} tones",
                        code.id(),
                        code.q(),
                        config.q
                    )));
                }
                for (k, &snr) in esn0_db.iter().enumerate() {
                    let model = WaveformModel::new(WaveformConfig {
                        esn0_db: snr,
                        ..config.clone()
                    })?;
                    let tally = run_point(code, spec, k, swt, |u, rng| model.transmit(u, rng))?;
                    rows.push(SerRow::new(
                        code,
                        d,
                        swt,
                        SweepPoint::EsN0Db(snr),
                        None,
                        spec,
                        tally.ties,
                        tally.errors,
                    ));
                }
            }
        }
    }
    Ok(SerReport { rows })
}

fn run_point<F>(
    code: &Code,
    spec: &ExperimentSpec,
    sweep_index: usize,
    r: usize,
    channel: F,
) -> Result<Tally>
where
    F: Fn(&[u8], &mut rand_chacha::ChaCha8Rng) -> Result<crate::channel::DetectorOutput> + Sync,
{
    use rand::Rng;
    let n = code.n();
    (0..spec.trials)
        .into_par_iter()
        .map(|t| -> Result<Tally> {
            let mut rng = trial_rng(spec.seed, code.id(), sweep_index as u64, t);
            let idx = rng.gen_range(0..code.len());
            let u = code.word(idx);
            let mut v = channel(u, &mut rng)?;
            if spec.nb_detection {
                v = narrowband_detect(&v, n, r);
            }
            let res = min_dist_decode(code, &v)?;
            Ok(Tally {
                errors: hamming(code.word(res.chosen), u) as u64,
                ties: u64::from(res.tie),
            })
        })
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))
}
