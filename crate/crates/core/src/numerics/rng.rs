use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Stream identifiers for the per-run named RNG streams. One master seed is
/// split into independent streams so components never perturb each other's
/// draw sequences.
pub mod streams {
    pub const ENV: u64 = 1;
    pub const PLANNER: u64 = 2;
    pub const AGENT: u64 = 3;
    pub const MODEL: u64 = 4;
    pub const EVAL: u64 = 5;
    pub const INIT: u64 = 6;
}

/// SplitMix64 finalizer; used only to derive child seeds from (tag, index).
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn mix2(a: u64, b: u64) -> u64 {
    mix(a ^ mix(b))
}

/// A seeded counter-based RNG stream. Identical seeds yield identical draw
/// sequences; `fork_indexed` derives independent child streams without
/// mutating the parent, so parallel workers stay reproducible.
#[derive(Debug, Clone)]
pub struct RngStream {
    rng: ChaCha8Rng,
    tag: u64,
}

impl RngStream {
    pub fn from_seed(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            tag: seed,
        }
    }

    /// Named stream of a run: `seed` is the run's master seed, `stream` one of
    /// the [`streams`] constants.
    pub fn named(seed: u64, stream: u64) -> Self {
        Self::from_seed(mix2(seed, stream))
    }

    /// Child stream for worker `index`; pure in the parent.
    pub fn fork_indexed(&self, index: u64) -> Self {
        Self::from_seed(mix2(self.tag, index.wrapping_add(0x517c_c1b7_2722_0a95)))
    }

    /// Child stream drawn from the parent's sequence.
    pub fn fork(&mut self) -> Self {
        let seed = self.rng.next_u64();
        Self::from_seed(mix2(self.tag, seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Uniform in [lo, hi).
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform integer in [0, n).
    pub fn index(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        self.rng.random_range(0..n)
    }

    /// Standard normal draw.
    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    pub fn state(&self) -> RngStreamState {
        RngStreamState {
            seed: self.rng.get_seed(),
            stream: self.rng.get_stream(),
            word_pos: self.rng.get_word_pos(),
            tag: self.tag,
        }
    }

    pub fn restore(state: &RngStreamState) -> Self {
        let mut rng = ChaCha8Rng::from_seed(state.seed);
        rng.set_stream(state.stream);
        rng.set_word_pos(state.word_pos);
        Self {
            rng,
            tag: state.tag,
        }
    }
}

/// Serializable snapshot of an [`RngStream`]; round-trips bitwise.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RngStreamState {
    pub seed: [u8; 32],
    pub stream: u64,
    pub word_pos: u128,
    pub tag: u64,
}

/// `mean + diag_std ⊙ z` with `z` standard normal.
pub fn gaussian_sample(rng: &mut RngStream, mean: &[f64], diag_std: &[f64]) -> Result<Vec<f64>> {
    if mean.len() != diag_std.len() {
        return Err(Error::Dimension(format!(
            "gaussian_sample: mean length {} vs std length {}",
            mean.len(),
            diag_std.len()
        )));
    }
    if diag_std.iter().any(|s| !(*s > 0.0)) {
        return Err(Error::Parameter(
            "gaussian_sample: std entries must be positive".into(),
        ));
    }
    Ok(mean
        .iter()
        .zip(diag_std)
        .map(|(m, s)| m + s * rng.normal())
        .collect())
}
