use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::ConstructionTarget;
use crate::code::{lanes_for, pack_into, packed_distance, Code};
use crate::error::{Error, Result};

/// Default candidate budget for [`search_partition_code`].
pub const DEFAULT_SEARCH_BUDGET: u64 = 5_000_000;

/// Seeded greedy search for a constant-partition code.
///
/// Each candidate assigns the parts of the target partition to a shuffled
/// symbol order, then shuffles the positions. A candidate is accepted when
/// it is at distance at least `d_min` from every accepted word.
pub fn search_partition_code(target: &ConstructionTarget) -> Result<Code> {
    let parts = target
        .validate()?
        .ok_or_else(|| Error::Config("a partition is required".into()))?;
    let (n, q) = (target.n, target.q);
    let lanes = lanes_for(n);
    let budget = target.budget.unwrap_or(DEFAULT_SEARCH_BUDGET);
    let mut rng = ChaCha8Rng::seed_from_u64(target.seed);
    let mut symbols: Vec<u8> = (0..q as u8).collect();
    let mut word = Vec::with_capacity(n);
    let mut packed: Vec<u128> = Vec::new();
    let mut cand: Vec<u128> = Vec::with_capacity(lanes);
    let mut flat: Vec<u8> = Vec::with_capacity(target.size_target * n);
    let mut accepted = 0usize;
    let mut tried = 0u64;
    while accepted < target.size_target && tried < budget {
        tried += 1;
        symbols.shuffle(&mut rng);
        word.clear();
        for (&count, &s) in parts.iter().zip(&symbols) {
            word.extend(std::iter::repeat(s).take(count));
        }
        word.shuffle(&mut rng);
        cand.clear();
        pack_into(&word, &mut cand);
        let ok = packed
            .chunks_exact(lanes)
            .all(|w| packed_distance(w, &cand) >= target.d_min);
        if ok {
            packed.extend_from_slice(&cand);
            flat.extend_from_slice(&word);
            accepted += 1;
        }
    }
    if accepted < target.size_target {
        return Err(Error::ConstructionFailed(format!(
            "randomized search reached {accepted} of {} words after {tried} candidates",
            target.size_target
        )));
    }
    Code::from_flat(
        n,
        q,
        flat,
        format!("search({n},{},{})_{q}", target.d_min, target.r),
    )
}
