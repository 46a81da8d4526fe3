//! Seeded random states and words for the verification suite.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::state::BoxBallState;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub seed: u64,
    pub count: usize,
    pub max_window: usize,
    pub max_balls: usize,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        Self { seed: 42, count: 500, max_window: 40, max_balls: 12 }
    }
}

impl CorpusSpec {
    /// `count` states with `1 ≤ N ≤ max_balls` balls placed uniformly in a
    /// window of random length `≤ max_window`, at a random offset.
    pub fn states(&self) -> Vec<BoxBallState> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let max_window = self.max_window.max(1);
        (0..self.count)
            .map(|_| {
                let window = rng.gen_range(1..=max_window);
                let balls = rng.gen_range(1..=self.max_balls.max(1).min(window));
                let offset: i64 = rng.gen_range(-20..=20);
                let positions: Vec<i64> =
                    sample(&mut rng, window, balls).into_iter().map(|i| offset + i as i64).collect();
                BoxBallState::from_positions(&positions)
            })
            .collect()
    }

    /// `count` words of length `≤ max_len` over letters `1..=alphabet`.
    pub fn words(&self, max_len: usize, alphabet: usize) -> Vec<Vec<usize>> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ 0x5eed_0fa1);
        (0..self.count)
            .map(|_| {
                let len = rng.gen_range(0..=max_len);
                (0..len).map(|_| rng.gen_range(1..=alphabet)).collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_respects_bounds_and_seed() {
        let spec = CorpusSpec { count: 200, ..CorpusSpec::default() };
        let states = spec.states();
        assert_eq!(states.len(), 200);
        for p in &states {
            assert!((1..=12).contains(&p.ball_count()));
            assert!(p.cells().len() <= 40);
        }
        assert_eq!(states, spec.states());
        assert_ne!(states, CorpusSpec { seed: 7, ..spec }.states());
    }
}
