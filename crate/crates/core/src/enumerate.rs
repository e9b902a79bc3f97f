//! Generate-and-prune enumeration of noncrossing partitions whose blocks obey
//! a local step predicate.
//!
//! A block `{s_1 < ... < s_m}` is accepted when every cyclic step
//! `s_i -> s_{i+1}` (including the closing step `s_m -> s_1`) passes the step
//! predicate and the block size fits the [`BlockShape`]. An interval
//! feasibility table is built first so the recursion never enters a branch
//! that cannot be completed.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum BlockShape {
    Any,
    Even,
    Pair,
}

impl BlockShape {
    /// Size class tracked by the feasibility table.
    fn class(self, len: usize) -> usize {
        match self {
            BlockShape::Any => 0,
            BlockShape::Even => len % 2,
            BlockShape::Pair => len.min(2) - 1,
        }
    }

    fn classes(self) -> usize {
        match self {
            BlockShape::Any => 1,
            BlockShape::Even | BlockShape::Pair => 2,
        }
    }

    fn can_close(self, len: usize) -> bool {
        match self {
            BlockShape::Any => true,
            BlockShape::Even => len % 2 == 0,
            BlockShape::Pair => len == 2,
        }
    }

    fn can_extend(self, len: usize) -> bool {
        !matches!(self, BlockShape::Pair) || len < 2
    }

    fn next_class(self, class: usize) -> usize {
        match self {
            BlockShape::Any => 0,
            BlockShape::Even => 1 - class,
            BlockShape::Pair => 1,
        }
    }
}

pub(crate) struct Enumerator<F: Fn(usize, usize) -> bool> {
    n: usize,
    shape: BlockShape,
    step: F,
    // feasible[a][b + 1 - a] for 1 <= a <= n + 1; empty intervals are feasible
    feasible: Vec<Vec<bool>>,
}

impl<F: Fn(usize, usize) -> bool> Enumerator<F> {
    /// `step(s, t)` is queried with 1-based positions; for the closing step
    /// `t` is the first element of the block.
    pub(crate) fn new(n: usize, shape: BlockShape, step: F) -> Self {
        let mut e = Enumerator {
            n,
            shape,
            step,
            feasible: vec![Vec::new(); n + 2],
        };
        e.build_feasibility();
        e
    }

    fn is_feasible(&self, a: usize, b: usize) -> bool {
        if a > b {
            return true;
        }
        self.feasible[a][b + 1 - a]
    }

    fn build_feasibility(&mut self) {
        let n = self.n;
        let classes = self.shape.classes();
        self.feasible[n + 1] = vec![true];
        for a in (1..=n).rev() {
            self.feasible[a] = vec![false; n + 2 - a];
            self.feasible[a][0] = true;
            // reach[s][c]: a partial block starting at `a` can end at leg `s`
            // with size class `c`, all gaps fillable.
            let mut reach = vec![vec![false; classes]; n + 1];
            reach[a][self.shape.class(1)] = true;
            for s in a..=n {
                for c in 0..classes {
                    if !reach[s][c] {
                        continue;
                    }
                    if self.shape == BlockShape::Pair && s != a {
                        continue;
                    }
                    for t in s + 1..=n {
                        if (self.step)(s, t) && self.is_feasible(s + 1, t - 1) {
                            reach[t][self.shape.next_class(c)] = true;
                        }
                    }
                }
            }
            for b in a..=n {
                let mut ok = false;
                'outer: for s in a..=b {
                    for c in 0..classes {
                        if reach[s][c]
                            && self.class_can_close(c)
                            && (self.step)(s, a)
                            && self.is_feasible(s + 1, b)
                        {
                            ok = true;
                            break 'outer;
                        }
                    }
                }
                self.feasible[a][b + 1 - a] = ok;
            }
        }
    }

    fn class_can_close(&self, class: usize) -> bool {
        match self.shape {
            BlockShape::Any => true,
            BlockShape::Even | BlockShape::Pair => class == 1 - self.shape.class(1),
        }
    }

    /// Calls `visit` once per admissible partition of `[n]`; blocks are
    /// sorted internally but not ordered among themselves.
    pub(crate) fn for_each(&self, visit: &mut dyn FnMut(&[Vec<usize>])) {
        if !self.is_feasible(1, self.n) {
            return;
        }
        let mut pending = vec![(1, self.n)];
        let mut blocks = Vec::new();
        self.fill(&mut pending, &mut blocks, visit);
    }

    #[cfg(test)]
    pub(crate) fn count(&self) -> u64 {
        let mut c = 0u64;
        self.for_each(&mut |_| c += 1);
        c
    }

    fn fill(
        &self,
        pending: &mut Vec<(usize, usize)>,
        blocks: &mut Vec<Vec<usize>>,
        visit: &mut dyn FnMut(&[Vec<usize>]),
    ) {
        let Some((a, b)) = pending.pop() else {
            visit(blocks);
            return;
        };
        if a > b {
            self.fill(pending, blocks, visit);
        } else {
            let mut block = vec![a];
            self.grow(a, b, &mut block, pending, blocks, visit);
        }
        pending.push((a, b));
    }

    fn grow(
        &self,
        a: usize,
        b: usize,
        block: &mut Vec<usize>,
        pending: &mut Vec<(usize, usize)>,
        blocks: &mut Vec<Vec<usize>>,
        visit: &mut dyn FnMut(&[Vec<usize>]),
    ) {
        let s = *block.last().expect("block is never empty");
        let len = block.len();
        if self.shape.can_close(len) && (self.step)(s, a) && self.is_feasible(s + 1, b) {
            pending.push((s + 1, b));
            blocks.push(block.clone());
            self.fill(pending, blocks, visit);
            blocks.pop();
            pending.pop();
        }
        if self.shape.can_extend(len) {
            for t in s + 1..=b {
                if (self.step)(s, t) && self.is_feasible(s + 1, t - 1) {
                    pending.push((s + 1, t - 1));
                    block.push(t);
                    self.grow(a, b, block, pending, blocks, visit);
                    block.pop();
                    pending.pop();
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unconstrained_counts_are_catalan() {
        let want = [1u64, 1, 2, 5, 14, 42, 132, 429, 1430, 4862];
        for (n, &w) in want.iter().enumerate().skip(1) {
            let e = Enumerator::new(n, BlockShape::Any, |_, _| true);
            assert_eq!(e.count(), w, "n = {n}");
        }
    }

    #[test]
    fn pair_and_even_shapes() {
        // noncrossing pairings of [2m] are Catalan(m)
        for m in 1..7 {
            let e = Enumerator::new(2 * m, BlockShape::Pair, |_, _| true);
            assert_eq!(e.count(), crate::numbers::catalan(m as u64).try_into().unwrap());
        }
        // odd ground set has no pairing and no even-block partition
        assert_eq!(Enumerator::new(5, BlockShape::Pair, |_, _| true).count(), 0);
        assert_eq!(Enumerator::new(5, BlockShape::Even, |_, _| true).count(), 0);
        // 2-divisible noncrossing partitions of [2k] are F_k(2): 1, 3, 12, 55
        let want = [1u64, 3, 12, 55];
        for (i, &w) in want.iter().enumerate() {
            let k = i + 1;
            assert_eq!(Enumerator::new(2 * k, BlockShape::Even, |_, _| true).count(), w);
        }
    }
}
