//! Seed derivation. A single master seed fans out into one independent
//! stream per (run, purpose), so runs and grid cells can execute in any
//! order and still replay bit-exactly.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::types::Stock;

/// The generator used for every stochastic stream.
pub type SimRng = ChaCha8Rng;

/// What a random stream is used for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StreamLabel {
    /// Strategy tables for one stock.
    AgentInit(Stock),
    /// Per-agent coupling coefficients.
    Couplings,
    /// Random decisions during warm-up.
    WarmUp(Stock),
    /// Tie-breaks in strategy selection.
    TieBreak(Stock),
    /// External event occurrence and sign.
    Events(Stock),
    /// Free stream for analysis tooling (oracles, fixtures).
    Analysis(u8),
}

impl StreamLabel {
    fn code(self) -> u64 {
        match self {
            StreamLabel::AgentInit(s) => s.index() as u64,
            StreamLabel::Couplings => 2,
            StreamLabel::WarmUp(s) => 3 + s.index() as u64,
            StreamLabel::TieBreak(s) => 5 + s.index() as u64,
            StreamLabel::Events(s) => 7 + s.index() as u64,
            StreamLabel::Analysis(k) => 16 + u64::from(k),
        }
    }
}

const LABEL_BITS: u32 = 9;

/// SplitMix64 finalizer; a bijection on `u64`.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for one (run, purpose) stream. Injective in `(run_index, label)`
/// for `run_index < 2^55`.
pub fn derive_seed(master_seed: u64, run_index: u64, label: StreamLabel) -> u64 {
    debug_assert!(run_index < 1 << (64 - LABEL_BITS));
    let key = (run_index << LABEL_BITS) | label.code();
    mix64(mix64(master_seed) ^ key)
}

pub fn stream(master_seed: u64, run_index: u64, label: StreamLabel) -> SimRng {
    SimRng::seed_from_u64(derive_seed(master_seed, run_index, label))
}

/// Master seed for a grid cell, keyed by the parameter values that define
/// the cell rather than by its position in execution order.
pub fn cell_seed(master_seed: u64, coordinates: &[f64]) -> u64 {
    coordinates.iter().fold(mix64(master_seed ^ 0x5ce1_1000), |acc, x| {
        // -0.0 and 0.0 name the same cell.
        let bits = if *x == 0.0 { 0 } else { x.to_bits() };
        mix64(acc ^ mix64(bits))
    })
}
