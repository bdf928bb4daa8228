use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// Independent stream for one trial of one sweep point of one code.
pub fn trial_rng(seed: u64, code_id: &str, sweep_index: u64, trial: u64) -> ChaCha8Rng {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update((code_id.len() as u64).to_le_bytes());
    h.update(code_id.as_bytes());
    h.update(sweep_index.to_le_bytes());
    h.update(trial.to_le_bytes());
    ChaCha8Rng::from_seed(h.finalize().into())
}
