//! MFSK waveform path: cyclostationary Gaussian noise with exponential
//! spectral shaping, tone-burst modulation and square-law detection.
//!
//! Symbol `m` (0-based) is a tone with `(m + 1) * tone_step` cycles per
//! burst, so every tone sits on an exact FFT bin of the burst and distinct
//! tones are orthogonal over one burst.

use std::f64::consts::PI;
use std::sync::Arc;

use rand::Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::channel::DetectorOutput;
use crate::code::MAX_Q;
use crate::error::{Error, Result};

/// Physical-layer parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveformConfig {
    /// Mains period in seconds.
    pub t_ac: f64,
    /// Symbol bursts per half mains cycle.
    pub symbols_per_half_cycle: usize,
    pub samples_per_symbol: usize,
    /// Alphabet size.
    pub q: usize,
    /// Tone spacing in cycles per burst.
    pub tone_step: usize,
    /// Filter constant of `H(f) = sqrt(a/2) exp(-a|f|/2)`.
    pub a: f64,
    /// Energy per symbol burst.
    pub es: f64,
    /// Ratio of `E_s` to the average noise spectral density, in dB.
    pub esn0_db: f64,
    /// Use the periodic variance `σ²(t)`; otherwise unit variance.
    pub cyclostationary: bool,
    /// Apply `H(f)`; otherwise leave the noise white.
    pub filtered: bool,
}

impl Default for WaveformConfig {
    fn default() -> Self {
        WaveformConfig {
            t_ac: 1.0 / 60.0,
            symbols_per_half_cycle: 9,
            samples_per_symbol: 500,
            q: 17,
            tone_step: 10,
            a: 1.2e-5,
            es: 1.0,
            esn0_db: 20.0,
            cyclostationary: true,
            filtered: true,
        }
    }
}

impl WaveformConfig {
    pub fn symbol_period(&self) -> f64 {
        self.t_ac / 2.0 / self.symbols_per_half_cycle as f64
    }

    pub fn sample_rate(&self) -> f64 {
        self.samples_per_symbol as f64 / self.symbol_period()
    }

    /// Samples in one period `T_AC / 2` of the noise variance.
    pub fn samples_per_half_cycle(&self) -> usize {
        self.samples_per_symbol * self.symbols_per_half_cycle
    }

    /// FFT bin of symbol `m` within a burst.
    pub fn tone_bin(&self, m: usize) -> usize {
        (m + 1) * self.tone_step
    }

    /// Tone frequency of symbol `m` in Hz.
    pub fn tone_frequency(&self, m: usize) -> f64 {
        self.tone_bin(m) as f64 / self.symbol_period()
    }

    /// Detection threshold `E_s / 4`.
    pub fn threshold(&self) -> f64 {
        self.es / 4.0
    }

    /// Target average noise spectral density.
    pub fn n0(&self) -> f64 {
        self.es / 10f64.powf(self.esn0_db / 10.0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.q == 0 || self.q > MAX_Q {
            return Err(Error::Config(format!(
                "alphabet size {} not in [1, 64]",
                self.q
            )));
        }
        if self.samples_per_symbol < 2 || self.symbols_per_half_cycle == 0 || self.tone_step == 0 {
            return Err(Error::Config("framing parameters must be positive".into()));
        }
        if 2 * self.tone_bin(self.q - 1) >= self.samples_per_symbol {
            return Err(Error::Config(format!(
                "highest tone bin {} is not below Nyquist for {} samples",
                self.tone_bin(self.q - 1),
                self.samples_per_symbol
            )));
        }
        if !(self.t_ac > 0.0 && self.es > 0.0 && self.a >= 0.0 && self.esn0_db.is_finite()) {
            return Err(Error::Config(
                "physical constants must be positive and finite".into(),
            ));
        }
        Ok(())
    }

    /// Amplitude response `H(f)`.
    pub fn amplitude_response(&self, f: f64) -> f64 {
        if self.filtered {
            (self.a / 2.0).sqrt() * (-self.a * f.abs() / 2.0).exp()
        } else {
            1.0
        }
    }
}

/// Noise variance `σ²(t)`, periodic with period `T_AC / 2`.
pub fn sigma2(t: f64, t_ac: f64) -> f64 {
    sigma2_phase((t / t_ac).rem_euclid(0.5))
}

/// `σ²` at phase `φ = t / T_AC`.
fn sigma2_phase(phase: f64) -> f64 {
    let x = 2.0 * PI * phase;
    0.23 + 1.38 * (x - 0.10).sin().abs().powf(1.91) + 7.17 * (x - 0.61).sin().abs().powf(157_000.0)
}

/// `σ²` at absolute sample index `k`; bit-identical every half cycle.
pub fn sigma2_at_sample(k: i64, cfg: &WaveformConfig) -> f64 {
    if !cfg.cyclostationary {
        return 1.0;
    }
    let period = cfg.samples_per_half_cycle() as i64;
    let j = k.rem_euclid(period) as f64;
    sigma2_phase(j / (2.0 * period as f64))
}

/// Time average of `σ²` over one period by composite Simpson quadrature.
pub fn sigma2_time_average(intervals: usize) -> f64 {
    let m = intervals + intervals % 2;
    let h = 0.5 / m as f64;
    let mut acc = sigma2_phase(0.0) + sigma2_phase(0.5);
    for i in 1..m {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * sigma2_phase(i as f64 * h);
    }
    acc * h / 3.0 / 0.5
}

/// Average of `σ²` over the sample grid of one period.
pub fn sigma2_grid_average(cfg: &WaveformConfig) -> f64 {
    let p = cfg.samples_per_half_cycle() as i64;
    (0..p).map(|k| sigma2_at_sample(k, cfg)).sum::<f64>() / p as f64
}

/// Tone bursts for codeword `u`, `n * samples_per_symbol` samples.
pub fn modulate(u: &[u8], cfg: &WaveformConfig) -> Result<Vec<f64>> {
    let ns = cfg.samples_per_symbol;
    let amp = (2.0 * cfg.es / cfg.symbol_period()).sqrt();
    let mut out = Vec::with_capacity(u.len() * ns);
    for &m in u {
        if m as usize >= cfg.q {
            return Err(Error::InvalidCodeword(format!(
                "symbol {m} outside [0, {})",
                cfg.q
            )));
        }
        let bin = cfg.tone_bin(m as usize) as f64;
        out.extend((0..ns).map(|k| amp * (2.0 * PI * bin * k as f64 / ns as f64).cos()));
    }
    Ok(out)
}

/// Precomputed FFT plans, filter gains and noise scale for one configuration.
pub struct WaveformModel {
    cfg: WaveformConfig,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    window: Vec<f64>,
    gains: Vec<f64>,
    scale: f64,
}

impl WaveformModel {
    pub fn new(cfg: WaveformConfig) -> Result<Self> {
        cfg.validate()?;
        let ns = cfg.samples_per_symbol;
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(ns);
        let inverse = planner.plan_fft_inverse(ns);
        let window = (0..ns)
            .map(|k| 0.5 - 0.5 * (2.0 * PI * k as f64 / ns as f64).cos())
            .collect();
        let bin_hz = cfg.sample_rate() / ns as f64;
        let gains = (0..ns)
            .map(|k| cfg.amplitude_response(k.min(ns - k) as f64 * bin_hz))
            .collect();
        let mean_var = if cfg.cyclostationary {
            sigma2_grid_average(&cfg)
        } else {
            1.0
        };
        let mean_gain2 = (0..cfg.q)
            .map(|m| cfg.amplitude_response(cfg.tone_frequency(m)).powi(2))
            .sum::<f64>()
            / cfg.q as f64;
        let unscaled_n0 = 2.0 * mean_var / cfg.sample_rate() * mean_gain2;
        let scale = (cfg.n0() / unscaled_n0).sqrt();
        Ok(WaveformModel {
            cfg,
            forward,
            inverse,
            window,
            gains,
            scale,
        })
    }

    pub fn config(&self) -> &WaveformConfig {
        &self.cfg
    }

    /// Overall noise amplitude scale applied after shaping.
    pub fn noise_scale(&self) -> f64 {
        self.scale
    }

    /// Unscaled noise: white Gaussian samples times `sqrt(σ²)`, starting at
    /// absolute sample `start`, then shaped by `H(f)`.
    pub fn shaped_noise<R: Rng + ?Sized>(&self, len: usize, start: i64, rng: &mut R) -> Vec<f64> {
        let ns = self.cfg.samples_per_symbol;
        if !self.cfg.filtered {
            return (0..len)
                .map(|k| {
                    let z: f64 = rng.sample(StandardNormal);
                    z * sigma2_at_sample(start + k as i64, &self.cfg).sqrt()
                })
                .collect();
        }
        let margin = ns;
        let total = len + 2 * margin;
        let raw: Vec<f64> = (0..total)
            .map(|k| {
                let z: f64 = rng.sample(StandardNormal);
                z * sigma2_at_sample(start + k as i64 - margin as i64, &self.cfg).sqrt()
            })
            .collect();
        let mut out = vec![0.0; total];
        let hop = ns / 2;
        let mut buf = vec![Complex::new(0.0, 0.0); ns];
        let mut scratch = vec![Complex::new(0.0, 0.0); self.forward.get_inplace_scratch_len()];
        let mut frame_start = -(hop as i64);
        while frame_start < total as i64 {
            for (k, b) in buf.iter_mut().enumerate() {
                let idx = frame_start + k as i64;
                let x = if (0..total as i64).contains(&idx) {
                    raw[idx as usize]
                } else {
                    0.0
                };
                *b = Complex::new(x * self.window[k], 0.0);
            }
            self.forward.process_with_scratch(&mut buf, &mut scratch);
            for (b, g) in buf.iter_mut().zip(&self.gains) {
                *b *= *g;
            }
            self.inverse.process_with_scratch(&mut buf, &mut scratch);
            for (k, b) in buf.iter().enumerate() {
                let idx = frame_start + k as i64;
                if (0..total as i64).contains(&idx) {
                    out[idx as usize] += b.re / ns as f64;
                }
            }
            frame_start += hop as i64;
        }
        out.drain(..margin);
        out.truncate(len);
        out
    }

    /// Calibrated noise for `len` samples starting at absolute sample `start`.
    pub fn gen_noise<R: Rng + ?Sized>(&self, len: usize, start: i64, rng: &mut R) -> Vec<f64> {
        let mut x = self.shaped_noise(len, start, rng);
        x.iter_mut().for_each(|s| *s *= self.scale);
        x
    }

    /// Energy estimate `2 (I² + Q²) / (f_s N)` of every tone in one burst.
    pub fn tone_energies(&self, burst: &[f64]) -> Vec<f64> {
        let ns = self.cfg.samples_per_symbol;
        let mut buf: Vec<Complex<f64>> = burst.iter().map(|&x| Complex::new(x, 0.0)).collect();
        self.forward.process(&mut buf);
        let norm = 2.0 / (self.cfg.sample_rate() * ns as f64);
        (0..self.cfg.q)
            .map(|m| buf[self.cfg.tone_bin(m)].norm_sqr() * norm)
            .collect()
    }

    /// Per burst, the set of tones whose energy exceeds `E_s / 4`.
    pub fn square_law_detect(&self, samples: &[f64]) -> Result<DetectorOutput> {
        let ns = self.cfg.samples_per_symbol;
        if samples.len() % ns != 0 {
            return Err(Error::Framing {
                len: samples.len(),
                frame: ns,
            });
        }
        let threshold = self.cfg.threshold();
        let masks = samples
            .chunks_exact(ns)
            .map(|burst| {
                self.tone_energies(burst)
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > threshold)
                    .fold(0u64, |m, (s, _)| m | 1 << s)
            })
            .collect();
        Ok(DetectorOutput::from_masks(self.cfg.q, masks))
    }

    /// Modulates `u`, adds noise from a uniformly drawn mains phase and
    /// detects.
    pub fn transmit<R: Rng + ?Sized>(&self, u: &[u8], rng: &mut R) -> Result<DetectorOutput> {
        let mut s = modulate(u, &self.cfg)?;
        let start = rng.gen_range(0..self.cfg.samples_per_half_cycle() as i64);
        let noise = self.gen_noise(s.len(), start, rng);
        s.iter_mut().zip(&noise).for_each(|(x, w)| *x += w);
        self.square_law_detect(&s)
    }
}

/// Square-law detection with a freshly planned model.
pub fn square_law_detect(samples: &[f64], cfg: &WaveformConfig) -> Result<DetectorOutput> {
    WaveformModel::new(cfg.clone())?.square_law_detect(samples)
}

/// Calibrated noise with a freshly planned model.
pub fn gen_noise<R: Rng + ?Sized>(
    cfg: &WaveformConfig,
    len: usize,
    start: i64,
    rng: &mut R,
) -> Result<Vec<f64>> {
    Ok(WaveformModel::new(cfg.clone())?.gen_noise(len, start, rng))
}
