//! Permutation posets and their Greene invariants.
//!
//! `I_k` (resp. `D_k`) is the largest number of points covered by `k`
//! disjoint chains (resp. antichains). They are computed here by exhaustive
//! search over point subsets, which is exact but exponential, so posets are
//! capped at [`BRUTE_FORCE_LIMIT`] points. For permutation posets the same
//! numbers are available in polynomial time from the RSK shape
//! ([`crate::rsk`]) and, for stack permutations of box-ball states, from the
//! depth chains built by [`depth_chains`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matching::{stack_permutation, ParenSeq};
use crate::partition::Partition;

/// Default cap for the exhaustive Greene search.
pub const BRUTE_FORCE_LIMIT: usize = 14;

/// A point `(i, w(i))`, both coordinates 1-based.
pub type Point = (usize, usize);

/// Points in the plane with distinct coordinates, ordered componentwise.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermutationPoset {
    points: Vec<Point>,
}

impl PermutationPoset {
    /// The poset of a permutation word `w(1) … w(n)`.
    pub fn from_permutation(word: &[usize]) -> Self {
        Self { points: word.iter().enumerate().map(|(i, &v)| (i + 1, v)).collect() }
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The product order.
    pub fn le(a: Point, b: Point) -> bool {
        a.0 <= b.0 && a.1 <= b.1
    }

    pub fn comparable(a: Point, b: Point) -> bool {
        Self::le(a, b) || Self::le(b, a)
    }

    pub fn is_chain(points: &[Point]) -> bool {
        points.iter().enumerate().all(|(x, &a)| points[x + 1..].iter().all(|&b| Self::comparable(a, b)))
    }

    pub fn is_antichain(points: &[Point]) -> bool {
        points.iter().enumerate().all(|(x, &a)| points[x + 1..].iter().all(|&b| !Self::comparable(a, b)))
    }

    /// Covering relations `a ⋖ b`: `a < b` with nothing strictly between.
    pub fn covers(&self) -> Vec<(Point, Point)> {
        let lt = |a: Point, b: Point| a != b && Self::le(a, b);
        let mut out = Vec::new();
        for &a in &self.points {
            for &b in &self.points {
                if lt(a, b) && !self.points.iter().any(|&c| lt(a, c) && lt(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Exhaustive Greene invariants with the default size cap.
    pub fn greene(&self) -> Result<GreeneInvariants> {
        self.greene_with_limit(BRUTE_FORCE_LIMIT)
    }

    pub fn greene_with_limit(&self, limit: usize) -> Result<GreeneInvariants> {
        let n = self.points.len();
        if n > limit || n >= usize::BITS as usize {
            return Err(Error::TooLarge { size: n, limit });
        }
        let comparable: Vec<usize> = (0..n)
            .map(|a| {
                (0..n)
                    .filter(|&b| a != b && Self::comparable(self.points[a], self.points[b]))
                    .fold(0, |mask, b| mask | 1 << b)
            })
            .collect();
        let full = (1usize << n) - 1;
        let mut is_chain = vec![true; full + 1];
        let mut is_antichain = vec![true; full + 1];
        for s in 1..=full {
            let low = s.trailing_zeros() as usize;
            let rest = s & (s - 1);
            is_chain[s] = is_chain[rest] && rest & !comparable[low] == 0;
            is_antichain[s] = is_antichain[rest] && rest & comparable[low] == 0;
        }
        Ok(GreeneInvariants {
            increasing: max_covered(n, &is_chain),
            decreasing: max_covered(n, &is_antichain),
        })
    }

    pub fn greene_i(&self, k: usize) -> Result<usize> {
        Ok(self.greene()?.i(k))
    }

    pub fn greene_d(&self, k: usize) -> Result<usize> {
        Ok(self.greene()?.d(k))
    }

    pub fn lambda(&self) -> Result<Partition> {
        Ok(self.greene()?.lambda())
    }

    pub fn lambda_prime(&self) -> Result<Partition> {
        Ok(self.greene()?.lambda_prime())
    }
}

/// `max{|S| : S splits into at most k members of the family}` for
/// `k = 1..=n`, where `family[S]` says whether subset `S` is one member.
///
/// `cover[S]` is the fewest family members partitioning `S`; the member
/// holding the lowest point of `S` is enumerated over all submasks.
fn max_covered(n: usize, family: &[bool]) -> Vec<usize> {
    let full = (1usize << n) - 1;
    let mut cover = vec![u8::MAX; full + 1];
    cover[0] = 0;
    let mut best_by_cover = vec![0usize; n + 1];
    for s in 1..=full {
        let low = s & s.wrapping_neg();
        let rest = s ^ low;
        let mut best = u8::MAX;
        let mut sub = rest;
        loop {
            let member = sub | low;
            if family[member] {
                best = best.min(cover[s ^ member].saturating_add(1));
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        cover[s] = best;
        let c = best as usize;
        best_by_cover[c] = best_by_cover[c].max(s.count_ones() as usize);
    }
    let mut out = Vec::with_capacity(n);
    let mut running = 0;
    for &b in best_by_cover.iter().skip(1) {
        running = running.max(b);
        out.push(running);
    }
    out
}

/// `I_1..I_n` and `D_1..D_n` of a poset with `n` points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreeneInvariants {
    pub increasing: Vec<usize>,
    pub decreasing: Vec<usize>,
}

impl GreeneInvariants {
    /// `I_k`; `I_0 = 0` and `I_k = n` for `k ≥ n`.
    pub fn i(&self, k: usize) -> usize {
        pick(&self.increasing, k)
    }

    pub fn d(&self, k: usize) -> usize {
        pick(&self.decreasing, k)
    }

    pub fn lambda(&self) -> Partition {
        Partition::from_partial_sums(&self.increasing).expect("Greene differences form a partition")
    }

    pub fn lambda_prime(&self) -> Partition {
        Partition::from_partial_sums(&self.decreasing).expect("Greene differences form a partition")
    }
}

fn pick(values: &[usize], k: usize) -> usize {
    match k {
        0 => 0,
        _ => values.get(k - 1).or(values.last()).copied().unwrap_or(0),
    }
}

/// The poset of a word over `1..=r`, equal letters ordered by position.
///
/// Point `i` is sent to the rank of `(x_i, i)` among all `(letter, position)`
/// pairs, which makes the word a permutation.
pub fn poset_of_word(x: &[usize]) -> PermutationPoset {
    PermutationPoset::from_permutation(&standardize(x))
}

/// The permutation obtained by ranking `(x_i, i)` lexicographically.
pub fn standardize(x: &[usize]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by_key(|&i| (x[i], i));
    let mut w = vec![0; x.len()];
    for (rank, i) in order.into_iter().enumerate() {
        w[i] = rank + 1;
    }
    w
}

/// The permutation poset of a state's stack permutation.
pub fn poset_of_seq(seq: &ParenSeq) -> PermutationPoset {
    PermutationPoset::from_permutation(&stack_permutation(seq).word)
}

/// The poset point of a pair: the rank of its `)` among closings and its
/// own id, i.e. `(i, w(i))`.
pub fn pair_points(seq: &ParenSeq) -> Vec<Point> {
    seq.close_ranks().into_iter().enumerate().map(|(k, rank)| (rank, k + 1)).collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainFamily {
    pub chains: Vec<Vec<Point>>,
}

impl ChainFamily {
    /// `|C_1 ⊔ … ⊔ C_k|`.
    pub fn covered(&self, k: usize) -> usize {
        self.chains.iter().take(k).map(Vec::len).sum()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AntichainFamily {
    pub antichains: Vec<Vec<Point>>,
}

/// `C_k` = the points of all pairs of depth `k`, for `k = 1..=max depth`.
pub fn depth_chains(seq: &ParenSeq) -> Result<ChainFamily> {
    let points = pair_points(seq);
    let mut chains = vec![Vec::new(); seq.max_depth()];
    for pair in &seq.pairs {
        chains[pair.depth - 1].push(points[pair.pair_id - 1]);
    }
    for (k, chain) in chains.iter_mut().enumerate() {
        chain.sort_unstable();
        if !PermutationPoset::is_chain(chain) {
            return Err(Error::Inconsistent(format!("depth {} pairs are not a chain", k + 1)));
        }
    }
    Ok(ChainFamily { chains })
}

/// Partition of the pairs into groups holding one pair of each depth
/// `1..=l`, as pair ids ordered by depth.
///
/// Pairs are taken by increasing depth; a pair of depth `k > 1` joins the
/// group of the leftmost unclaimed depth-`(k-1)` pair nested inside it.
pub fn antichain_groups(seq: &ParenSeq) -> Result<Vec<Vec<usize>>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    // group index of each pair id, once assigned
    let mut group_of = vec![usize::MAX; seq.pairs.len()];
    let mut claimed = vec![false; seq.pairs.len()];
    for depth in 1..=seq.max_depth() {
        for pair in seq.pairs.iter().filter(|p| p.depth == depth) {
            let g = if depth == 1 {
                groups.push(Vec::new());
                groups.len() - 1
            } else {
                let host = seq
                    .pairs
                    .iter()
                    .filter(|q| q.depth == depth - 1 && !claimed[q.pair_id - 1] && pair.contains(q))
                    .min_by_key(|q| q.open_pos)
                    .ok_or_else(|| {
                        Error::Inconsistent(format!("pair {} has no free depth-{} box inside", pair.pair_id, depth - 1))
                    })?;
                claimed[host.pair_id - 1] = true;
                group_of[host.pair_id - 1]
            };
            group_of[pair.pair_id - 1] = g;
            groups[g].push(pair.pair_id);
        }
    }
    Ok(groups)
}

/// The antichain decomposition matching [`antichain_groups`], as poset points.
pub fn antichain_decomposition(seq: &ParenSeq) -> Result<AntichainFamily> {
    let points = pair_points(seq);
    let antichains: Vec<Vec<Point>> = antichain_groups(seq)?
        .into_iter()
        .map(|ids| ids.into_iter().map(|id| points[id - 1]).collect())
        .collect();
    if let Some(bad) = antichains.iter().find(|a| !PermutationPoset::is_antichain(a)) {
        return Err(Error::Inconsistent(format!("{bad:?} is not an antichain")));
    }
    Ok(AntichainFamily { antichains })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::match_stack;
    use crate::state::BoxBallState;

    fn seq(s: &str) -> ParenSeq {
        match_stack(&s.parse::<BoxBallState>().unwrap())
    }

    #[test]
    fn example_word_poset() {
        let poset = poset_of_word(&[3, 1, 2, 1, 4, 3]);
        assert_eq!(standardize(&[3, 1, 2, 1, 4, 3]), vec![4, 1, 3, 2, 6, 5]);
        let g = poset.greene().unwrap();
        assert_eq!((1..=4).map(|k| g.i(k)).collect::<Vec<_>>(), vec![3, 5, 6, 6]);
        assert_eq!(g.lambda().parts(), &[3, 2, 1]);
        // the eight arrows of the Hasse diagram
        let covers = poset.covers();
        assert_eq!(covers.len(), 8);
        assert!(covers.contains(&((2, 1), (3, 3))));
        assert!(covers.contains(&((1, 4), (5, 6))));
        assert!(covers.contains(&((1, 4), (6, 5))));
    }

    #[test]
    fn repeated_letter_is_a_chain() {
        let poset = poset_of_word(&[1, 1]);
        assert!(PermutationPoset::is_chain(poset.points()));
        assert_eq!(poset.greene_i(1).unwrap(), 2);
    }

    #[test]
    fn permutation_word_is_literal() {
        let poset = poset_of_word(&[2, 3, 1]);
        assert_eq!(poset.points(), &[(1, 2), (2, 3), (3, 1)]);
    }

    #[test]
    fn antichain_poset() {
        let poset = PermutationPoset::from_permutation(&[4, 3, 2, 1]);
        let g = poset.greene().unwrap();
        assert_eq!((g.i(1), g.d(1)), (1, 4));
        assert_eq!(g.lambda().parts(), &[1, 1, 1, 1]);
    }

    #[test]
    fn stack_permutation_poset() {
        let poset = PermutationPoset::from_permutation(&[1, 3, 5, 4, 2]);
        let g = poset.greene().unwrap();
        assert_eq!((g.i(1), g.i(2), g.i(3)), (3, 4, 5));
        assert_eq!(g.lambda().parts(), &[3, 1, 1]);
        assert_eq!(g.lambda_prime(), g.lambda().transpose());
    }

    #[test]
    fn empty_poset() {
        let g = PermutationPoset::default().greene().unwrap();
        assert!(g.lambda().is_empty());
        assert_eq!(g.i(3), 0);
    }

    #[test]
    fn size_cap() {
        let big = PermutationPoset::from_permutation(&(1..=15).collect::<Vec<_>>());
        assert_eq!(big.greene(), Err(Error::TooLarge { size: 15, limit: 14 }));
        assert!(big.greene_with_limit(15).is_ok());
    }

    #[test]
    fn example_depth_chains() {
        let s = seq("0010011011");
        let chains = depth_chains(&s).unwrap();
        let sizes: Vec<usize> = chains.chains.iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![3, 1, 1]);
        assert_eq!(chains.chains[0], vec![(1, 1), (2, 3), (3, 5)]);
        assert_eq!(pair_points(&s), vec![(1, 1), (5, 2), (2, 3), (4, 4), (3, 5)]);
    }

    #[test]
    fn disjoint_and_nested_chains() {
        let chains = depth_chains(&seq("101010")).unwrap();
        assert_eq!(chains.chains.len(), 1);
        assert_eq!(chains.chains[0].len(), 3);
        let nested = depth_chains(&seq("111000")).unwrap();
        assert_eq!(nested.chains.iter().map(Vec::len).collect::<Vec<_>>(), vec![1, 1, 1]);
    }

    #[test]
    fn example_antichains() {
        let s = seq("0010011011");
        let groups = antichain_groups(&s).unwrap();
        // pair ids: 1 = (0,1) d1, 3 = (4,5) d1, 5 = (7,8) d1, 4 = (6,9) d2, 2 = (3,10) d3
        assert_eq!(groups, vec![vec![1], vec![3], vec![5, 4, 2]]);
        let fam = antichain_decomposition(&s).unwrap();
        assert_eq!(fam.antichains.iter().map(Vec::len).collect::<Vec<_>>(), vec![1, 1, 3]);
    }

    #[test]
    fn small_antichain_examples() {
        let flat = antichain_decomposition(&seq("1010")).unwrap();
        assert_eq!(flat.antichains.len(), 2);
        let nested = antichain_decomposition(&seq("111000")).unwrap();
        assert_eq!(nested.antichains, vec![vec![(1, 3), (2, 2), (3, 1)]]);
    }
}
