//! Words over the starred alphabet and partitions adapted to them.
//!
//! A letter `j` moves the segment color from `j` to `j + 1`, a letter `j*`
//! moves it back from `j + 1` to `j`. The word `W = 1 2 ... p p* ... 2* 1*`
//! is therefore a closed walk on the colors `1..=p+1`, and so is every power
//! and cyclic shift of it.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::enumerate::{BlockShape, Enumerator};
use crate::error::{Error, Result};
use crate::model::Label;
use crate::partition::{PairPartition, Partition};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub color: usize,
    pub star: bool,
    pub label: Label,
}

impl Letter {
    pub fn new(color: usize, star: bool, label: Label) -> Self {
        Letter { color, star, label }
    }

    /// Segment color entering the letter.
    pub fn color_before(&self) -> usize {
        if self.star {
            self.color + 1
        } else {
            self.color
        }
    }

    /// Segment color leaving the letter.
    pub fn color_after(&self) -> usize {
        if self.star {
            self.color
        } else {
            self.color + 1
        }
    }

    /// Position of the letter inside `W` for alphabet size `p`:
    /// `j -> j`, `j* -> 2p + 1 - j`.
    pub fn index_in(&self, p: usize) -> usize {
        if self.star {
            2 * p + 1 - self.color
        } else {
            self.color
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}@{}", self.color, if self.star { "*" } else { "" }, self.label)
    }
}

impl FromStr for Letter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (head, label) = match s.split_once('@') {
            Some((h, l)) if !l.is_empty() => (h, Label::from(l)),
            Some(_) => return Err(Error::Parse(format!("empty label in letter `{s}`"))),
            None => (s, Label::from("u")),
        };
        let (num, star) = match head.strip_suffix('*') {
            Some(n) => (n, true),
            None => (head, false),
        };
        let color: usize = num
            .parse()
            .map_err(|_| Error::Parse(format!("bad letter `{s}`")))?;
        if color == 0 {
            return Err(Error::Parse(format!("letter color must be positive in `{s}`")));
        }
        Ok(Letter { color, star, label })
    }
}

/// A finite word over the alphabet with colors `1..=p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word {
    p: usize,
    letters: Vec<Letter>,
}

/// Colors `c(V) = i_1 ... i_{m-1}` of the segments between consecutive legs of one block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentColoring {
    pub colors: Vec<usize>,
}

impl fmt::Display for SegmentColoring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.colors {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// `i_m = j + 1` for a leg `j` and `i_m = j` for a leg `j*`; the last leg carries no segment.
pub fn segment_coloring(legs: &[Letter]) -> Result<SegmentColoring> {
    let Some((_, init)) = legs.split_last() else {
        return Err(Error::EmptyBlock);
    };
    Ok(SegmentColoring { colors: init.iter().map(Letter::color_after).collect() })
}

/// Segment coloring padded with the color before the first leg and after the last one.
pub fn extended_coloring(legs: &[Letter]) -> Result<SegmentColoring> {
    let first = legs.first().ok_or(Error::EmptyBlock)?;
    let mut colors = vec![first.color_before()];
    colors.extend(legs.iter().map(Letter::color_after));
    Ok(SegmentColoring { colors })
}

impl Word {
    pub fn new(p: usize, letters: Vec<Letter>) -> Result<Self> {
        if let Some(l) = letters.iter().find(|l| l.color == 0 || l.color > p) {
            return Err(Error::Parse(format!("letter {l} outside the alphabet of size {p}")));
        }
        Ok(Word { p, letters })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Letter at 1-based position `s`.
    pub fn at(&self, s: usize) -> &Letter {
        &self.letters[s - 1]
    }

    pub fn power(&self, k: usize) -> Word {
        let letters = (0..k).flat_map(|_| self.letters.iter().cloned()).collect();
        Word { p: self.p, letters }
    }

    /// Cyclic shift moving the first `shift` letters to the end.
    pub fn rotate(&self, shift: usize) -> Word {
        let mut letters = self.letters.clone();
        if !letters.is_empty() {
            let s = shift % letters.len();
            letters.rotate_left(s);
        }
        Word { p: self.p, letters }
    }

    /// True when consecutive letters chain their colors and the walk is closed.
    pub fn is_closed_walk(&self) -> bool {
        let n = self.letters.len();
        (0..n).all(|i| self.letters[i].color_after() == self.letters[(i + 1) % n].color_before())
    }

    fn legs(&self, block: &[usize]) -> Vec<Letter> {
        block.iter().map(|&s| self.at(s).clone()).collect()
    }

    fn check_size(&self, n: usize) -> Result<()> {
        if n != self.letters.len() {
            return Err(Error::SizeMismatch { expected: self.letters.len(), found: n });
        }
        Ok(())
    }

    /// Segment coloring of one block given by its sorted positions.
    pub fn block_coloring(&self, block: &[usize]) -> Result<SegmentColoring> {
        if let Some(&s) = block.iter().find(|&&s| s == 0 || s > self.len()) {
            return Err(Error::InvalidIndex { index: s, len: self.len() });
        }
        segment_coloring(&self.legs(block))
    }

    /// Shift (`ℓ' ≡ ℓ + 1`) or reflection (`ℓ' ≡ 1 - ℓ`) modulo `2p` on letter indices.
    fn step_allowed(&self, s: usize, t: usize) -> bool {
        let m = 2 * self.p;
        let a = self.at(s).index_in(self.p);
        let b = self.at(t).index_in(self.p);
        b % m == (a + 1) % m || (a + b) % m == 1 % m
    }

    pub fn is_color_adapted(&self, p: &Partition) -> Result<bool> {
        self.check_size(p.n())?;
        if p.blocks().iter().any(|b| b.len() % 2 != 0) {
            return Ok(false);
        }
        let perm = p.as_permutation();
        Ok((1..=p.n()).all(|s| self.step_allowed(s, perm[s])))
    }

    pub fn is_label_adapted(&self, p: &Partition) -> Result<bool> {
        self.check_size(p.n())?;
        Ok(p.blocks().iter().all(|b| {
            let l = &self.at(b[0]).label;
            b.iter().all(|&s| &self.at(s).label == l)
        }))
    }

    /// Member of `NC(w)`: noncrossing, color adapted and label adapted.
    pub fn is_adapted(&self, p: &Partition) -> Result<bool> {
        Ok(p.is_noncrossing() && self.is_color_adapted(p)? && self.is_label_adapted(p)?)
    }

    /// Slow reference check by bracket reduction of the extended coloring:
    /// repeatedly pick a block whose legs are adjacent after earlier
    /// reductions, require equal colors on both sides of it and collapse it.
    pub fn is_color_adapted_by_reduction(&self, p: &Partition) -> Result<bool> {
        self.check_size(p.n())?;
        if !p.is_noncrossing() || !self.is_closed_walk() {
            return Ok(false);
        }
        #[derive(Clone, Copy, PartialEq)]
        enum Tok {
            Color(usize),
            Leg(usize),
        }
        let idx = p.block_index();
        let mut toks = vec![Tok::Color(self.at(1).color_before())];
        for s in 1..=p.n() {
            toks.push(Tok::Leg(idx[s]));
            toks.push(Tok::Color(self.at(s).color_after()));
        }
        let mut remaining = p.num_blocks();
        while remaining > 0 {
            // an innermost block: its legs alternate with single colors
            let mut found = None;
            for b in 0..p.num_blocks() {
                let pos: Vec<usize> =
                    (0..toks.len()).filter(|&i| toks[i] == Tok::Leg(b)).collect();
                if !pos.is_empty() && pos.windows(2).all(|w| w[1] == w[0] + 2) {
                    found = Some((pos[0], *pos.last().unwrap()));
                    break;
                }
            }
            let Some((i, j)) = found else {
                return Ok(false);
            };
            let legs = (j - i) / 2 + 1;
            if toks[i - 1] != toks[j + 1] || legs % 2 != 0 {
                return Ok(false);
            }
            toks.drain(i..=j + 1);
            remaining -= 1;
        }
        Ok(toks.len() == 1)
    }

    /// All partitions in `NC(w)`, in canonical order.
    pub fn enumerate_adapted(&self, cap: usize) -> Result<Vec<Partition>> {
        let mut out = Vec::new();
        self.for_each_adapted(cap, &mut |blocks| {
            out.push(Partition::from_sorted_blocks(self.len(), blocks.to_vec()));
        })?;
        out.sort_unstable();
        Ok(out)
    }

    /// Streams the blocks of each partition in `NC(w)`, unordered, without allocation per partition.
    pub fn for_each_adapted(
        &self,
        cap: usize,
        visit: &mut dyn FnMut(&[Vec<usize>]),
    ) -> Result<()> {
        let n = self.len();
        if n > cap {
            return Err(Error::CapExceeded { n, cap });
        }
        if n == 0 {
            return Ok(());
        }
        let labels = label_ids(self);
        let step = |s: usize, t: usize| labels[s] == labels[t] && self.step_allowed(s, t);
        Enumerator::new(n, BlockShape::Even, step).for_each(visit);
        Ok(())
    }

    pub fn count_adapted(&self, cap: usize) -> Result<u64> {
        let mut c = 0u64;
        self.for_each_adapted(cap, &mut |_| c += 1)?;
        Ok(c)
    }
}

fn label_ids(w: &Word) -> Vec<usize> {
    let mut uniq: Vec<&Label> = Vec::new();
    let mut ids = vec![usize::MAX];
    for l in &w.letters {
        let id = match uniq.iter().position(|u| *u == &l.label) {
            Some(i) => i,
            None => {
                uniq.push(&l.label);
                uniq.len() - 1
            }
        };
        ids.push(id);
    }
    ids
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    /// The alphabet size is taken as the largest color present.
    fn from_str(s: &str) -> Result<Self> {
        let letters: Vec<Letter> = s.split_whitespace().map(str::parse).collect::<Result<_>>()?;
        let p = letters.iter().map(|l| l.color).max().unwrap_or(0);
        Word::new(p, letters)
    }
}

fn check_labels(p: usize, labels: &[Label]) -> Result<()> {
    if p == 0 {
        return Err(Error::InvalidModel("p must be at least 1".into()));
    }
    if labels.len() != p {
        return Err(Error::SizeMismatch { expected: p, found: labels.len() });
    }
    Ok(())
}

/// `W = 1 2 ... p p* ... 2* 1*`, letters `j` and `j*` labelled `labels[j - 1]`.
pub fn make_w(p: usize, labels: &[Label]) -> Result<Word> {
    check_labels(p, labels)?;
    let up = (1..=p).map(|j| Letter::new(j, false, labels[j - 1].clone()));
    let down = (1..=p).rev().map(|j| Letter::new(j, true, labels[j - 1].clone()));
    Ok(Word { p, letters: up.chain(down).collect() })
}

/// `W̃ = 1 2 ... 2p (2p)* ... 1*` over the alphabet of size `2p`;
/// colors `2j - 1` and `2j` inherit the label of color `j` in `W`.
pub fn make_wtilde(p: usize, labels: &[Label]) -> Result<Word> {
    check_labels(p, labels)?;
    let lab = |c: usize| labels[(c - 1) / 2].clone();
    let up = (1..=2 * p).map(|c| Letter::new(c, false, lab(c)));
    let down = (1..=2 * p).rev().map(|c| Letter::new(c, true, lab(c)));
    Ok(Word { p: 2 * p, letters: up.chain(down).collect() })
}

/// Presentation color in `W₀ = 1 2 2* 4 4* ... 2p (2p)* ... 4 4* 2 2* 1*` of a letter of `W̃`.
pub fn w0_letter(l: &Letter) -> Letter {
    let (color, star) = match (l.color, l.star) {
        (1, s) => (1, s),
        (c, s) if c % 2 == 0 => (c, s),
        // odd c = 2i + 1 > 1
        (c, false) => (c - 1, true),
        (c, true) => (c - 1, false),
    };
    Letter::new(color, star, l.label.clone())
}

/// `W₀` with the labels inherited from `W̃`; used for presentation and for the dimension weights.
pub fn make_w0(p: usize, labels: &[Label]) -> Result<Word> {
    let wt = make_wtilde(p, labels)?;
    Ok(Word { p: 2 * p, letters: wt.letters.iter().map(w0_letter).collect() })
}

/// Can two positions of `W̃^k` form a block: `{i, i*}`, `{2i, 2i+1}` or
/// `{(2i+1)*, (2i)*}` with equal labels.
fn tilde_pair_allowed(a: &Letter, b: &Letter) -> bool {
    if a.label != b.label {
        return false;
    }
    if a.color == b.color {
        return a.star != b.star;
    }
    if a.star != b.star {
        return false;
    }
    let lo = a.color.min(b.color);
    a.color.abs_diff(b.color) == 1 && lo % 2 == 0
}

/// All pair partitions in `NC²(W̃^k)`, in canonical order.
pub fn enumerate_pair_adapted(
    p: usize,
    k: usize,
    labels: &[Label],
    cap: usize,
) -> Result<Vec<PairPartition>> {
    let mut out = Vec::new();
    for_each_pair_adapted(p, k, labels, cap, &mut |pairs| {
        out.push(pairs.to_vec());
    })?;
    let n = 4 * p * k;
    let mut res: Vec<PairPartition> = out
        .into_iter()
        .map(|pairs| PairPartition::new(n, pairs).expect("enumerator yields pairings"))
        .collect();
    res.sort_unstable();
    Ok(res)
}

/// Streams each pair partition in `NC²(W̃^k)` as a list of `(a, b)` with `a < b`.
pub fn for_each_pair_adapted(
    p: usize,
    k: usize,
    labels: &[Label],
    cap: usize,
    visit: &mut dyn FnMut(&[(usize, usize)]),
) -> Result<()> {
    let w = make_wtilde(p, labels)?.power(k);
    let n = w.len();
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    let letters = w.letters();
    let step = |s: usize, t: usize| tilde_pair_allowed(&letters[s - 1], &letters[t - 1]);
    let mut pairs = Vec::with_capacity(n / 2);
    Enumerator::new(n, BlockShape::Pair, step).for_each(&mut |blocks| {
        pairs.clear();
        pairs.extend(blocks.iter().map(|b| (b[0], b[1])));
        visit(&pairs);
    });
    Ok(())
}

/// `NC(W^k)` for `W = make_w(p, labels)`.
pub fn enumerate_adapted(p: usize, k: usize, labels: &[Label], cap: usize) -> Result<Vec<Partition>> {
    make_w(p, labels)?.power(k).enumerate_adapted(cap)
}

/// Pair partitions adapted to `W^k` itself: the blocks of size two in `NC(W^k)`.
pub fn enumerate_pairings_of_w(
    p: usize,
    k: usize,
    labels: &[Label],
    cap: usize,
) -> Result<Vec<PairPartition>> {
    let w = make_w(p, labels)?.power(k);
    let n = w.len();
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    let ids = label_ids(&w);
    let step = |s: usize, t: usize| ids[s] == ids[t] && w.step_allowed(s, t);
    let mut out = Vec::new();
    Enumerator::new(n, BlockShape::Pair, step).for_each(&mut |blocks| {
        let pairs = blocks.iter().map(|b| (b[0], b[1])).collect();
        out.push(PairPartition::new(n, pairs).expect("enumerator yields pairings"));
    });
    out.sort_unstable();
    Ok(out)
}

pub use crate::partition::{alpha, alpha_inverse};
