//! Symbol-weight analysis of codes for MFSK power-line communication.
//!
//! * [`code`] and [`capability`]: symbol statistics, class flags, minimum
//!   distance, the narrowband capability profile `E(e;C)`, `c(C)`, `f*` and
//!   windowed capability.
//! * [`gf`] and [`construct`]: GF(2^m) arithmetic and code constructions.
//! * [`channel`]: the set-valued symbol channel with narrowband, fading,
//!   impulse, insertion and deletion errors.
//! * [`decoder`]: minimum-distance decoding and narrowband stripping.
//! * [`waveform`]: cyclostationary noise, MFSK modulation and square-law
//!   detection.
//! * [`sim`]: Monte Carlo SER experiments, exhaustive oracles and CSV output.

pub mod capability;
pub mod channel;
pub mod code;
pub mod construct;
pub mod decoder;
pub mod error;
pub mod gf;
pub mod sim;
pub mod waveform;

pub use capability::{
    capability_profile, f_star, f_star_table, growth_compare, windowed_capability, Capability,
    CapabilityProfile, Growth,
};
pub use code::{classify, min_distance, symbol_stats, ClassLabel, Code, SymbolStats};
pub use error::{Error, Result};
