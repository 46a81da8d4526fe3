use std::fmt;

use serde::{Deserialize, Serialize};

/// An integer partition: weakly decreasing positive parts.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Sorts the parts into decreasing order and drops zeros.
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self { parts }
    }

    /// Accepts `parts` only if they are already weakly decreasing (trailing
    /// zeros are dropped, interior zeros are rejected).
    pub fn from_decreasing(mut parts: Vec<usize>) -> Option<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        let ok = parts.windows(2).all(|w| w[0] >= w[1]) && parts.iter().all(|&p| p > 0);
        ok.then_some(Self { parts })
    }

    /// Successive differences of `0, sums[0], sums[1], …`, trailing zeros
    /// dropped. `None` if the differences are not a partition.
    pub fn from_partial_sums(sums: &[usize]) -> Option<Self> {
        let mut prev = 0usize;
        let mut parts = Vec::with_capacity(sums.len());
        for &s in sums {
            parts.push(s.checked_sub(prev)?);
            prev = s;
        }
        Self::from_decreasing(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// `λ_k`, zero beyond the last part. `k` is 1-based.
    pub fn part(&self, k: usize) -> usize {
        k.checked_sub(1).and_then(|i| self.parts.get(i)).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// `λ_1 + … + λ_k`.
    pub fn partial_sum(&self, k: usize) -> usize {
        self.parts.iter().take(k).sum()
    }

    /// The conjugate partition: `λ'_j = #{i : λ_i ≥ j}`.
    pub fn transpose(&self) -> Self {
        let width = self.parts.first().copied().unwrap_or(0);
        let parts = (1..=width).map(|j| self.parts.iter().filter(|&&p| p >= j).count()).collect();
        Self { parts }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn transpose_examples() {
        let p = |v: Vec<usize>| Partition::new(v);
        assert_eq!(p(vec![3, 2, 1]).transpose(), p(vec![3, 2, 1]));
        assert_eq!(p(vec![3, 1, 1]).transpose(), p(vec![3, 1, 1]));
        assert_eq!(p(vec![4]).transpose(), p(vec![1, 1, 1, 1]));
        assert_eq!(p(vec![]).transpose(), p(vec![]));
    }

    #[test]
    fn partial_sums() {
        let lam = Partition::from_partial_sums(&[3, 5, 6, 6]).unwrap();
        assert_eq!(lam.parts(), &[3, 2, 1]);
        assert!(Partition::from_partial_sums(&[2, 5]).is_none());
        assert!(Partition::from_partial_sums(&[3, 2]).is_none());
    }

    proptest! {
        #[test]
        fn transpose_is_an_involution(parts in proptest::collection::vec(0usize..12, 0..10)) {
            let lam = Partition::new(parts);
            prop_assert_eq!(lam.transpose().size(), lam.size());
            prop_assert_eq!(lam.transpose().transpose(), lam);
        }
    }
}
