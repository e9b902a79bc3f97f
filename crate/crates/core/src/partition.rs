//! Set partitions of `[n] = {1, ..., n}` with their noncrossing structure.
//!
//! Text form: blocks as comma-separated sorted integers joined by `|`,
//! e.g. `1,8|2,3,4,5|6,7`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::enumerate::{BlockShape, Enumerator};
use crate::error::{Error, Result};

/// A partition of `[n]`; blocks are sorted internally and ordered by minimum.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

/// Depth and number of nearest inner blocks of one block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockStats {
    pub depth: usize,
    pub nearest_inner_count: usize,
}

impl Partition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n + 1];
        let mut blocks = blocks;
        for b in blocks.iter_mut() {
            if b.is_empty() {
                return Err(Error::EmptyBlock);
            }
            b.sort_unstable();
            for &x in b.iter() {
                if x == 0 || x > n {
                    return Err(Error::InvalidPartition(format!("element {x} outside [1, {n}]")));
                }
                if seen[x] {
                    return Err(Error::InvalidPartition(format!("element {x} repeated")));
                }
                seen[x] = true;
            }
        }
        if let Some(x) = (1..=n).find(|&x| !seen[x]) {
            return Err(Error::InvalidPartition(format!("element {x} not covered")));
        }
        Ok(Self::from_sorted_blocks(n, blocks))
    }

    // blocks already valid and internally sorted
    pub(crate) fn from_sorted_blocks(n: usize, mut blocks: Vec<Vec<usize>>) -> Self {
        blocks.sort_unstable_by_key(|b| b[0]);
        Partition { n, blocks }
    }

    pub fn one_block(n: usize) -> Self {
        Partition { n, blocks: vec![(1..=n).collect()] }
    }

    pub fn singletons(n: usize) -> Self {
        Partition { n, blocks: (1..=n).map(|x| vec![x]).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Index of the block containing each element, indexed by element (slot 0 unused).
    pub fn block_index(&self) -> Vec<usize> {
        let mut idx = vec![usize::MAX; self.n + 1];
        for (i, b) in self.blocks.iter().enumerate() {
            for &x in b {
                idx[x] = i;
            }
        }
        idx
    }

    /// No `a < b < c < d` with `a, c` in one block and `b, d` in another.
    pub fn is_noncrossing(&self) -> bool {
        let idx = self.block_index();
        // two blocks cross iff their merged element sequence has >= 4 runs
        for (i, bi) in self.blocks.iter().enumerate() {
            let (lo, hi) = (bi[0], *bi.last().unwrap());
            for j in i + 1..self.blocks.len() {
                let mut runs = 0;
                let mut last = usize::MAX;
                for x in lo..=hi.max(*self.blocks[j].last().unwrap()) {
                    let b = idx[x];
                    if b == i || b == j {
                        if b != last {
                            runs += 1;
                            last = b;
                        }
                    }
                }
                if runs >= 4 {
                    return false;
                }
            }
        }
        true
    }

    /// Cycle view: block `{s_1 < ... < s_m}` maps `s_i -> s_{i+1}` and `s_m -> s_1`.
    /// Returned vector is indexed by element; slot 0 is unused.
    pub fn as_permutation(&self) -> Vec<usize> {
        let mut perm = vec![0; self.n + 1];
        for b in &self.blocks {
            for (i, &x) in b.iter().enumerate() {
                perm[x] = b[(i + 1) % b.len()];
            }
        }
        perm
    }

    /// Partition into the cycles of a permutation given in the
    /// [`as_permutation`](Self::as_permutation) layout.
    pub fn from_permutation(perm: &[usize]) -> Result<Self> {
        if perm.is_empty() {
            return Err(Error::InvalidPartition("empty permutation".into()));
        }
        let n = perm.len() - 1;
        let mut seen = vec![false; n + 1];
        let mut blocks = Vec::new();
        for start in 1..=n {
            if seen[start] {
                continue;
            }
            let mut block = Vec::new();
            let mut x = start;
            while !seen[x] {
                if x == 0 || x > n {
                    return Err(Error::InvalidPartition(format!("image {x} outside [1, {n}]")));
                }
                seen[x] = true;
                block.push(x);
                x = perm[x];
                if x == 0 || x > n {
                    return Err(Error::InvalidPartition(format!("image {x} outside [1, {n}]")));
                }
            }
            if x != start {
                return Err(Error::InvalidPartition("not a permutation".into()));
            }
            blocks.push(block);
        }
        Partition::new(n, blocks)
    }

    /// For every block, the index of its nearest outer block.
    pub fn nearest_outer(&self) -> Vec<Option<usize>> {
        let m = self.blocks.len();
        let mut out = vec![None; m];
        for (i, inner) in self.blocks.iter().enumerate() {
            let (lo, hi) = (inner[0], *inner.last().unwrap());
            let mut best: Option<usize> = None;
            for (j, outer) in self.blocks.iter().enumerate() {
                if i == j {
                    continue;
                }
                // outer = A ∪ B with A < inner < B, A and B nonempty
                let below = outer.iter().filter(|&&x| x < lo).count();
                if below == 0 || below == outer.len() || outer[below] <= hi {
                    continue;
                }
                // innermost enclosing block has the largest minimum
                if best.is_none_or(|b| self.blocks[b][0] < outer[0]) {
                    best = Some(j);
                }
            }
            out[i] = best;
        }
        out
    }

    /// Depth (outermost blocks have depth 1) and nearest-inner counts of all blocks.
    pub fn all_block_stats(&self) -> Vec<BlockStats> {
        let outer = self.nearest_outer();
        let m = self.blocks.len();
        let mut depth = vec![0usize; m];
        let mut inner_count = vec![0usize; m];
        for o in outer.iter().flatten() {
            inner_count[*o] += 1;
        }
        // blocks are ordered by minimum, and an outer block starts before its inner ones
        for i in 0..m {
            depth[i] = match outer[i] {
                None => 1,
                Some(o) => depth[o] + 1,
            };
        }
        depth
            .into_iter()
            .zip(inner_count)
            .map(|(depth, nearest_inner_count)| BlockStats { depth, nearest_inner_count })
            .collect()
    }

    pub fn block_stats(&self, block_index: usize) -> Result<BlockStats> {
        if block_index >= self.blocks.len() {
            return Err(Error::InvalidIndex { index: block_index, len: self.blocks.len() });
        }
        if !self.is_noncrossing() {
            return Err(Error::NotNoncrossing);
        }
        Ok(self.all_block_stats()[block_index])
    }

    /// Kreweras complement `K(π) = π^{-1} γ` with `γ = (1 2 ... n)`.
    pub fn kreweras_complement(&self) -> Result<Partition> {
        if !self.is_noncrossing() {
            return Err(Error::NotNoncrossing);
        }
        let n = self.n;
        let perm = self.as_permutation();
        let mut inv = vec![0; n + 1];
        for x in 1..=n {
            inv[perm[x]] = x;
        }
        let mut k = vec![0; n + 1];
        for x in 1..=n {
            k[x] = inv[x % n + 1];
        }
        Partition::from_permutation(&k)
    }

    /// Relabels every element `x` as `x + shift (mod n)`.
    pub fn rotate(&self, shift: usize) -> Partition {
        let n = self.n;
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                let mut nb: Vec<usize> = b.iter().map(|&x| (x - 1 + shift) % n + 1).collect();
                nb.sort_unstable();
                nb
            })
            .collect();
        Partition::from_sorted_blocks(n, blocks)
    }

    pub fn is_pairing(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 2)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            for (j, x) in b.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut blocks = Vec::new();
        for part in s.trim().split('|') {
            let block: Vec<usize> = part
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad element `{t}` in `{s}`")))
                })
                .collect::<Result<_>>()?;
            blocks.push(block);
        }
        let n = blocks.iter().map(Vec::len).sum();
        Partition::new(n, blocks)
    }
}

/// A pair partition of `[n]`, `n` even; pairs stored as `(a, b)` with `a < b`, sorted by `a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PairPartition {
    n: usize,
    pairs: Vec<(usize, usize)>,
}

impl PairPartition {
    pub fn new(n: usize, pairs: Vec<(usize, usize)>) -> Result<Self> {
        if n % 2 != 0 {
            return Err(Error::InvalidPartition(format!("pair partition of odd set [{n}]")));
        }
        let blocks = pairs.iter().map(|&(a, b)| vec![a, b]).collect();
        let p = Partition::new(n, blocks)?;
        PairPartition::try_from(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Partner of each element (slot 0 unused).
    pub fn partner(&self) -> Vec<usize> {
        let mut p = vec![0; self.n + 1];
        for &(a, b) in &self.pairs {
            p[a] = b;
            p[b] = a;
        }
        p
    }

    pub fn to_partition(&self) -> Partition {
        Partition::from_sorted_blocks(self.n, self.pairs.iter().map(|&(a, b)| vec![a, b]).collect())
    }

    pub fn is_noncrossing(&self) -> bool {
        // stack check: each closing element must match the most recent open one
        let partner = self.partner();
        let mut stack = Vec::new();
        for x in 1..=self.n {
            if partner[x] > x {
                stack.push(x);
            } else if stack.pop() != Some(partner[x]) {
                return false;
            }
        }
        true
    }
}

impl TryFrom<Partition> for PairPartition {
    type Error = Error;

    fn try_from(p: Partition) -> Result<Self> {
        if !p.is_pairing() {
            return Err(Error::InvalidPartition("not every block is a pair".into()));
        }
        let pairs = p.blocks.iter().map(|b| (b[0], b[1])).collect();
        Ok(PairPartition { n: p.n, pairs })
    }
}

impl fmt::Display for PairPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_partition().fmt(f)
    }
}

impl FromStr for PairPartition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PairPartition::try_from(s.parse::<Partition>()?)
    }
}

/// Every noncrossing partition of `[n]`, in canonical (sorted) order.
pub fn enumerate_noncrossing(n: usize, cap: usize) -> Result<Vec<Partition>> {
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    if n == 0 {
        return Ok(vec![Partition::from_sorted_blocks(0, Vec::new())]);
    }
    let mut out = Vec::new();
    Enumerator::new(n, BlockShape::Any, |_, _| true).for_each(&mut |blocks| {
        out.push(Partition::from_sorted_blocks(n, blocks.to_vec()));
    });
    out.sort_unstable();
    Ok(out)
}

/// Every noncrossing pair partition of `[n]`.
pub fn enumerate_noncrossing_pairings(n: usize, cap: usize) -> Result<Vec<PairPartition>> {
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    let mut out = Vec::new();
    if n == 0 {
        return Ok(out);
    }
    Enumerator::new(n, BlockShape::Pair, |_, _| true).for_each(&mut |blocks| {
        let p = Partition::from_sorted_blocks(n, blocks.to_vec());
        out.push(PairPartition::try_from(p).expect("pair shape"));
    });
    out.sort_unstable();
    Ok(out)
}

/// Restriction of the Kreweras complement of a noncrossing pairing of `[2n]`
/// to the odd elements, with `2i - 1` relabelled as `i`.
pub fn kreweras_restrict(s: &PairPartition) -> Result<Partition> {
    if !s.is_noncrossing() {
        return Err(Error::NotNoncrossing);
    }
    let n = s.n / 2;
    let partner = s.partner();
    // K(s)(x) = s(x + 1) since s is an involution; odd x maps to odd
    let mut perm = vec![0; n + 1];
    for i in 1..=n {
        let x = 2 * i - 1;
        let y = partner[x % s.n + 1];
        debug_assert!(y % 2 == 1);
        perm[i] = (y + 1) / 2;
    }
    Partition::from_permutation(&perm)
}

/// `α(π) = {{2s, 2π(s) - 1} : s ∈ [n]}`, a noncrossing pairing of `[2n]`.
pub fn alpha(p: &Partition) -> Result<PairPartition> {
    if !p.is_noncrossing() {
        return Err(Error::NotNoncrossing);
    }
    let perm = p.as_permutation();
    let mut pairs: Vec<(usize, usize)> = (1..=p.n)
        .map(|s| {
            let (x, y) = (2 * s, 2 * perm[s] - 1);
            (x.min(y), x.max(y))
        })
        .collect();
    pairs.sort_unstable();
    Ok(PairPartition { n: 2 * p.n, pairs })
}

/// Inverse of [`alpha`].
pub fn alpha_inverse(s: &PairPartition) -> Result<Partition> {
    kreweras_restrict(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbers::catalan;

    fn brute_force_set_partitions(n: usize) -> Vec<Partition> {
        // restricted growth strings
        fn rec(i: usize, n: usize, rgs: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if i == n {
                let m = rgs.iter().max().map_or(0, |&v| v + 1);
                let mut blocks = vec![Vec::new(); m];
                for (x, &b) in rgs.iter().enumerate() {
                    blocks[b].push(x + 1);
                }
                out.push(Partition::new(n, blocks).unwrap());
                return;
            }
            let m = rgs.iter().max().map_or(0, |&v| v + 1);
            for b in 0..=m {
                rgs.push(b);
                rec(i + 1, n, rgs, out);
                rgs.pop();
            }
        }
        let mut out = Vec::new();
        rec(0, n, &mut Vec::new(), &mut out);
        out
    }

    fn nested16() -> Partition {
        "1,16|2,15|3,10|4,5|6,7|8,9|11,14|12,13".parse().unwrap()
    }

    #[test]
    fn crossing_examples() {
        assert!(!"1,3|2,4".parse::<Partition>().unwrap().is_noncrossing());
        assert!("1,4|2,3".parse::<Partition>().unwrap().is_noncrossing());
        for n in 1..8 {
            assert!(Partition::one_block(n).is_noncrossing());
        }
    }

    #[test]
    fn enumeration_matches_brute_force_filter() {
        for n in 1..=7 {
            let mut bf: Vec<Partition> = brute_force_set_partitions(n)
                .into_iter()
                .filter(Partition::is_noncrossing)
                .collect();
            bf.sort_unstable();
            assert_eq!(enumerate_noncrossing(n, 24).unwrap(), bf, "n = {n}");
        }
        assert_eq!(enumerate_noncrossing(3, 24).unwrap().len(), 5);
        assert_eq!(enumerate_noncrossing(4, 24).unwrap().len(), 14);
        assert_eq!(enumerate_noncrossing(1, 24).unwrap(), vec![Partition::one_block(1)]);
    }

    #[test]
    fn enumeration_respects_cap() {
        assert_eq!(enumerate_noncrossing(25, 24), Err(Error::CapExceeded { n: 25, cap: 24 }));
    }

    #[test]
    fn counts_are_catalan() {
        for n in 1..=10u64 {
            let got = enumerate_noncrossing(n as usize, 24).unwrap().len() as u64;
            assert_eq!(num_bigint::BigInt::from(got), catalan(n));
        }
    }

    #[test]
    fn depth_and_nearest_inner_of_figure_partition() {
        let p = nested16();
        let idx = |first: usize| p.blocks().iter().position(|b| b[0] == first).unwrap();
        assert_eq!(
            p.block_stats(idx(3)).unwrap(),
            BlockStats { depth: 3, nearest_inner_count: 3 }
        );
        assert_eq!(
            p.block_stats(idx(1)).unwrap(),
            BlockStats { depth: 1, nearest_inner_count: 1 }
        );
        assert_eq!(p.block_stats(idx(11)).unwrap().nearest_inner_count, 1);
        assert_eq!(p.block_stats(idx(2)).unwrap().depth, 2);
        assert_eq!(p.block_stats(idx(4)).unwrap().depth, 4);
        let stats = p.all_block_stats();
        assert_eq!(stats.iter().filter(|s| s.depth % 2 == 1).count(), 3);
        assert_eq!(stats.iter().filter(|s| s.depth % 2 == 0).count(), 5);
        assert_eq!(
            Partition::one_block(6).block_stats(0).unwrap(),
            BlockStats { depth: 1, nearest_inner_count: 0 }
        );
        assert!(matches!(p.block_stats(8), Err(Error::InvalidIndex { .. })));
    }

    #[test]
    fn depths_step_by_one_to_nearest_outer() {
        for p in enumerate_noncrossing(7, 24).unwrap() {
            let stats = p.all_block_stats();
            for (i, o) in p.nearest_outer().iter().enumerate() {
                if let Some(o) = o {
                    assert_eq!(stats[i].depth, stats[*o].depth + 1);
                } else {
                    assert_eq!(stats[i].depth, 1);
                }
            }
        }
    }

    #[test]
    fn permutation_view() {
        let p: Partition = "1,8|2,3,4,5|6,7".parse().unwrap();
        let perm = p.as_permutation();
        assert_eq!(perm[5], 2);
        assert_eq!(perm[8], 1);
        assert_eq!(perm[2], 3);
        let s: Partition = "1|2,3".parse().unwrap();
        assert_eq!(s.as_permutation()[1], 1);
        for q in enumerate_noncrossing(6, 24).unwrap() {
            assert_eq!(Partition::from_permutation(&q.as_permutation()).unwrap(), q);
        }
    }

    #[test]
    fn kreweras_squared_is_rotation() {
        for n in 1..=6 {
            for p in enumerate_noncrossing(n, 24).unwrap() {
                let kk = p.kreweras_complement().unwrap().kreweras_complement().unwrap();
                // K^2(π) = γ^{-1} π γ: every element shifted down by one
                assert_eq!(kk, p.rotate(n - 1), "π = {p}");
            }
        }
        assert_eq!(Partition::one_block(4).kreweras_complement().unwrap(), Partition::singletons(4));
        assert_eq!(Partition::singletons(4).kreweras_complement().unwrap(), Partition::one_block(4));
    }

    #[test]
    fn kreweras_is_order_reversing_on_block_counts() {
        for n in 1..=6 {
            for p in enumerate_noncrossing(n, 24).unwrap() {
                let k = p.kreweras_complement().unwrap();
                assert!(k.is_noncrossing());
                assert_eq!(p.num_blocks() + k.num_blocks(), n + 1);
            }
        }
    }

    #[test]
    fn alpha_of_three_block_partition() {
        let p: Partition = "1,8|2,3,4,5|6,7".parse().unwrap();
        let s = alpha(&p).unwrap();
        assert_eq!(s.to_partition(), nested16());
        assert_eq!(kreweras_restrict(&s).unwrap(), p);
        let one: Partition = "1".parse().unwrap();
        assert_eq!(alpha(&one).unwrap(), "1,2".parse().unwrap());
    }

    #[test]
    fn kreweras_restrict_small_values() {
        let s: PairPartition = "1,2".parse().unwrap();
        assert_eq!(kreweras_restrict(&s).unwrap(), "1".parse().unwrap());
        // adjacent pairing of [4]: K = {1}{2,4}{3}, odd part {1}{3} -> {1}{2}
        let s: PairPartition = "1,2|3,4".parse().unwrap();
        assert_eq!(kreweras_restrict(&s).unwrap(), "1|2".parse().unwrap());
        // adjacent pairing of [6] -> singletons of [3]
        let s: PairPartition = "1,2|3,4|5,6".parse().unwrap();
        assert_eq!(kreweras_restrict(&s).unwrap(), Partition::singletons(3));
        let crossing: PairPartition = "1,3|2,4".parse().unwrap();
        assert_eq!(kreweras_restrict(&crossing), Err(Error::NotNoncrossing));
    }

    #[test]
    fn alpha_is_a_bijection_onto_pairings() {
        for n in 1..=6 {
            let mut images: Vec<PairPartition> = enumerate_noncrossing(n, 24)
                .unwrap()
                .iter()
                .map(|p| {
                    let s = alpha(p).unwrap();
                    assert_eq!(&alpha_inverse(&s).unwrap(), p);
                    s
                })
                .collect();
            images.sort_unstable();
            assert_eq!(images, enumerate_noncrossing_pairings(2 * n, 24).unwrap());
        }
    }

    #[test]
    fn text_round_trip_and_errors() {
        let p: Partition = "6,7|1,8|2,3,4,5".parse().unwrap();
        assert_eq!(p.to_string(), "1,8|2,3,4,5|6,7");
        assert!("1,2|2,3".parse::<Partition>().is_err());
        assert!("1,3".parse::<Partition>().is_err());
        assert!("1,x".parse::<Partition>().is_err());
    }
}
