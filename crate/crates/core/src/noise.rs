//! Keyed, stateless uniform noise.
//!
//! Every random factor used by a noisy objective is a pure function of
//! `(run_seed, eval_index, component)`. There is no generator object to carry
//! around, so evaluations can be replayed in any order and from any thread.
//!
//! Internally the key selects a ChaCha8 keystream position: the run seed is the
//! cipher key, the evaluation index is the stream id, and the component picks
//! the 64-bit word inside that stream.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Identifies one objective evaluation within one run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct NoiseKey {
    pub run_seed: u64,
    pub eval_index: u64,
}

impl NoiseKey {
    pub fn new(run_seed: u64, eval_index: u64) -> Self {
        Self {
            run_seed,
            eval_index,
        }
    }
}

/// How often the noise factors of a noisy objective are redrawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoisePolicy {
    /// A fresh draw for every objective call.
    #[default]
    PerEvaluation,
    /// One draw at `eval_index = 0`, reused for the whole run.
    FixedPerRun,
}

impl NoisePolicy {
    /// Maps a caller key to the key actually used for drawing.
    pub fn effective_key(self, key: NoiseKey) -> NoiseKey {
        match self {
            NoisePolicy::PerEvaluation => key,
            NoisePolicy::FixedPerRun => NoiseKey::new(key.run_seed, 0),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            NoisePolicy::PerEvaluation => "per_evaluation",
            NoisePolicy::FixedPerRun => "fixed_per_run",
        }
    }
}

impl std::str::FromStr for NoisePolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "per_evaluation" | "per-evaluation" => Ok(NoisePolicy::PerEvaluation),
            "fixed_per_run" | "fixed-per-run" => Ok(NoisePolicy::FixedPerRun),
            other => Err(format!("unknown noise policy '{other}'")),
        }
    }
}

/// Uniform draw in `[0, 1)` for the given key and component index.
pub fn uniform(key: NoiseKey, component: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(key.run_seed);
    rng.set_stream(key.eval_index);
    // one f64 consumes one u64 = two 32-bit words
    rng.set_word_pos(2 * component as u128);
    rng.gen::<f64>()
}

/// Fills `out` with the draws for components `0..out.len()`.
pub fn uniform_vec(key: NoiseKey, out: &mut [f64]) {
    let mut rng = ChaCha8Rng::seed_from_u64(key.run_seed);
    rng.set_stream(key.eval_index);
    for o in out.iter_mut() {
        *o = rng.gen::<f64>();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_key_same_value() {
        let k = NoiseKey::new(42, 7);
        assert_eq!(uniform(k, 0).to_bits(), uniform(k, 0).to_bits());
    }

    #[test]
    fn vec_matches_scalar() {
        let k = NoiseKey::new(3, 11);
        let mut v = [0.0; 9];
        uniform_vec(k, &mut v);
        for (i, x) in v.iter().enumerate() {
            assert_eq!(x.to_bits(), uniform(k, i).to_bits());
        }
    }

    #[test]
    fn keys_differ() {
        let a = uniform(NoiseKey::new(1, 0), 0);
        let b = uniform(NoiseKey::new(1, 1), 0);
        let c = uniform(NoiseKey::new(2, 0), 0);
        let d = uniform(NoiseKey::new(1, 0), 1);
        assert!(a != b && a != c && a != d);
    }

    #[test]
    fn empirical_mean_and_quartile() {
        let n = 100_000u64;
        let mut sum = 0.0;
        let mut below = 0usize;
        for i in 0..n {
            let u = uniform(NoiseKey::new(2024, i), 0);
            assert!((0.0..1.0).contains(&u));
            sum += u;
            if u < 0.25 {
                below += 1;
            }
        }
        let mean = sum / n as f64;
        let frac = below as f64 / n as f64;
        assert!((mean - 0.5).abs() < 0.01, "mean {mean}");
        assert!((frac - 0.25).abs() < 0.01, "fraction {frac}");
    }

    #[test]
    fn fixed_policy_ignores_index() {
        let p = NoisePolicy::FixedPerRun;
        assert_eq!(
            p.effective_key(NoiseKey::new(5, 99)),
            p.effective_key(NoiseKey::new(5, 0))
        );
        let q = NoisePolicy::PerEvaluation;
        assert_eq!(q.effective_key(NoiseKey::new(5, 99)).eval_index, 99);
    }

    #[test]
    fn concurrent_calls_agree() {
        let keys: Vec<_> = (0..64).map(|i| NoiseKey::new(9, i)).collect();
        let serial: Vec<u64> = keys.iter().map(|&k| uniform(k, 3).to_bits()).collect();
        let threaded: Vec<u64> = std::thread::scope(|s| {
            let hs: Vec<_> = keys
                .iter()
                .rev()
                .map(|&k| s.spawn(move || uniform(k, 3).to_bits()))
                .collect();
            let mut v: Vec<u64> = hs.into_iter().map(|h| h.join().unwrap()).collect();
            v.reverse();
            v
        });
        assert_eq!(serial, threaded);
    }
}
