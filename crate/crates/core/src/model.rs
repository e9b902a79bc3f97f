//! Model parameters: asymptotic dimensions, labels and free cumulants.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{is_positive, parse_rational, parse_rational_list, Rational};

/// Opaque label of a random matrix; letters with equal labels come from the same matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Label(pub String);

impl Label {
    pub fn new(s: impl Into<String>) -> Self {
        Label(s.into())
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Self {
        Label(s.to_string())
    }
}

/// How the `p` blocks are assigned to matrices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LabelPattern {
    /// All blocks from one matrix.
    Same,
    /// Every block from its own independent matrix.
    Distinct,
    Explicit(Vec<Label>),
}

impl LabelPattern {
    pub fn labels(&self, p: usize) -> Result<Vec<Label>> {
        match self {
            LabelPattern::Same => Ok(vec![Label::new("u"); p]),
            LabelPattern::Distinct => Ok((1..=p).map(|i| Label(format!("u{i}"))).collect()),
            LabelPattern::Explicit(v) if v.len() == p => Ok(v.clone()),
            LabelPattern::Explicit(v) => Err(Error::SizeMismatch { expected: p, found: v.len() }),
        }
    }
}

impl FromStr for LabelPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "same" => Ok(LabelPattern::Same),
            "distinct" => Ok(LabelPattern::Distinct),
            other => {
                let labels: Vec<Label> = other
                    .split(',')
                    .map(|t| t.trim())
                    .filter(|t| !t.is_empty())
                    .map(Label::from)
                    .collect();
                if labels.is_empty() {
                    return Err(Error::Parse(format!("empty label pattern `{s}`")));
                }
                Ok(LabelPattern::Explicit(labels))
            }
        }
    }
}

/// Free cumulants `r_1, r_2, ...` truncated at a fixed length.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CumulantSequence {
    values: Vec<Rational>,
}

impl CumulantSequence {
    pub fn new(values: Vec<Rational>) -> Self {
        CumulantSequence { values }
    }

    /// `r_n = δ_{n,2}`.
    pub fn semicircle(len: usize) -> Self {
        let values = (1..=len)
            .map(|n| if n == 2 { Rational::one() } else { Rational::zero() })
            .collect();
        CumulantSequence { values }
    }

    /// `r_n = 1` for all `n`.
    pub fn free_poisson(len: usize) -> Self {
        Self::marchenko_pastur(Rational::one(), len)
    }

    /// `r_n = t` for all `n`.
    pub fn marchenko_pastur(t: Rational, len: usize) -> Self {
        CumulantSequence { values: vec![t; len] }
    }

    pub fn zero(len: usize) -> Self {
        CumulantSequence { values: vec![Rational::zero(); len] }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// `r_n`, 1-indexed. Asking beyond the truncation is an error, never zero.
    pub fn get(&self, n: usize) -> Result<&Rational> {
        if n == 0 || n > self.values.len() {
            return Err(Error::TruncationTooShort { needed: n, available: self.values.len() });
        }
        Ok(&self.values[n - 1])
    }

    pub fn require(&self, needed: usize) -> Result<()> {
        if needed > self.values.len() {
            return Err(Error::TruncationTooShort { needed, available: self.values.len() });
        }
        Ok(())
    }
}

/// Textual cumulant spec: `semicircle`, `free-poisson`, `mp:t` or `list:r1,r2,...`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CumulantSpec {
    Semicircle,
    FreePoisson,
    MarchenkoPastur(Rational),
    List(Vec<Rational>),
}

impl CumulantSpec {
    /// Materialize; explicit lists keep their own length.
    pub fn sequence(&self, len: usize) -> CumulantSequence {
        match self {
            CumulantSpec::Semicircle => CumulantSequence::semicircle(len),
            CumulantSpec::FreePoisson => CumulantSequence::free_poisson(len),
            CumulantSpec::MarchenkoPastur(t) => CumulantSequence::marchenko_pastur(t.clone(), len),
            CumulantSpec::List(v) => CumulantSequence::new(v.clone()),
        }
    }
}

impl FromStr for CumulantSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "semicircle" | "gaussian" => return Ok(CumulantSpec::Semicircle),
            "free-poisson" | "poisson" => return Ok(CumulantSpec::FreePoisson),
            _ => {}
        }
        if let Some(t) = s.strip_prefix("mp:") {
            return Ok(CumulantSpec::MarchenkoPastur(parse_rational(t)?));
        }
        if let Some(list) = s.strip_prefix("list:") {
            return Ok(CumulantSpec::List(parse_rational_list(list)?));
        }
        Err(Error::UnknownLaw(s.to_string()))
    }
}

/// `p`, dimensions `d_1..d_{p+1}`, labels `u_1..u_p` and a cumulant sequence per label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelParams {
    pub p: usize,
    pub dims: Vec<Rational>,
    pub labels: Vec<Label>,
    pub cumulants: BTreeMap<Label, CumulantSequence>,
}

impl ModelParams {
    pub fn new(
        p: usize,
        dims: Vec<Rational>,
        labels: Vec<Label>,
        cumulants: BTreeMap<Label, CumulantSequence>,
    ) -> Result<Self> {
        let m = ModelParams { p, dims, labels, cumulants };
        m.validate()?;
        Ok(m)
    }

    /// Every label gets the same cumulant sequence.
    pub fn uniform(
        p: usize,
        dims: Vec<Rational>,
        pattern: &LabelPattern,
        cumulants: CumulantSequence,
    ) -> Result<Self> {
        let labels = pattern.labels(p)?;
        let map = labels.iter().map(|l| (l.clone(), cumulants.clone())).collect();
        Self::new(p, dims, labels, map)
    }

    /// Block `j` (1-based) uses `cumulants[j - 1]` under the label pattern;
    /// blocks sharing a label must share the sequence.
    pub fn per_block(
        p: usize,
        dims: Vec<Rational>,
        pattern: &LabelPattern,
        cumulants: Vec<CumulantSequence>,
    ) -> Result<Self> {
        if cumulants.len() != p {
            return Err(Error::SizeMismatch { expected: p, found: cumulants.len() });
        }
        let labels = pattern.labels(p)?;
        let mut map: BTreeMap<Label, CumulantSequence> = BTreeMap::new();
        for (l, c) in labels.iter().zip(cumulants) {
            if let Some(prev) = map.get(l) {
                if *prev != c {
                    return Err(Error::InvalidModel(format!(
                        "label {l} carries two different cumulant sequences"
                    )));
                }
            }
            map.insert(l.clone(), c);
        }
        Self::new(p, dims, labels, map)
    }

    pub fn validate(&self) -> Result<()> {
        if self.p == 0 {
            return Err(Error::InvalidModel("p must be at least 1".into()));
        }
        if self.dims.len() != self.p + 1 {
            return Err(Error::InvalidModel(format!(
                "dims: expected {} values, found {}",
                self.p + 1,
                self.dims.len()
            )));
        }
        if let Some(i) = self.dims.iter().position(|d| !is_positive(d)) {
            return Err(Error::InvalidModel(format!("dims: d_{} must be positive", i + 1)));
        }
        if self.labels.len() != self.p {
            return Err(Error::InvalidModel(format!(
                "labels: expected {} values, found {}",
                self.p,
                self.labels.len()
            )));
        }
        for l in &self.labels {
            if !self.cumulants.contains_key(l) {
                return Err(Error::InvalidModel(format!("cumulants: no sequence for label {l}")));
            }
        }
        Ok(())
    }

    /// True when the `p` labels are pairwise different.
    pub fn labels_distinct(&self) -> bool {
        let mut v = self.labels.clone();
        v.sort();
        v.dedup();
        v.len() == self.p
    }

    /// Cumulant sequence of block `j` (1-based).
    pub fn block_cumulants(&self, j: usize) -> &CumulantSequence {
        &self.cumulants[&self.labels[j - 1]]
    }

    /// Distinct labels in order of first use, and each block's index into that list.
    pub(crate) fn label_classes(&self) -> (Vec<Label>, Vec<usize>) {
        let mut uniq: Vec<Label> = Vec::new();
        let ids = self
            .labels
            .iter()
            .map(|l| match uniq.iter().position(|u| u == l) {
                Some(i) => i,
                None => {
                    uniq.push(l.clone());
                    uniq.len() - 1
                }
            })
            .collect();
        (uniq, ids)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn get_is_one_indexed_and_strict() {
        let c = CumulantSequence::semicircle(4);
        assert_eq!(*c.get(2).unwrap(), int(1));
        assert_eq!(*c.get(4).unwrap(), int(0));
        assert_eq!(c.get(5), Err(Error::TruncationTooShort { needed: 5, available: 4 }));
        assert!(c.get(0).is_err());
    }

    #[test]
    fn spec_parsing() {
        assert_eq!("semicircle".parse::<CumulantSpec>().unwrap(), CumulantSpec::Semicircle);
        assert_eq!(
            "mp:1/2".parse::<CumulantSpec>().unwrap(),
            CumulantSpec::MarchenkoPastur(frac(1, 2))
        );
        assert_eq!(
            "list:1,2,3/4".parse::<CumulantSpec>().unwrap(),
            CumulantSpec::List(vec![int(1), int(2), frac(3, 4)])
        );
        assert!(matches!("cauchy".parse::<CumulantSpec>(), Err(Error::UnknownLaw(_))));
    }

    #[test]
    fn label_patterns() {
        assert_eq!(LabelPattern::Same.labels(3).unwrap().len(), 3);
        let d = LabelPattern::Distinct.labels(2).unwrap();
        assert_ne!(d[0], d[1]);
        let e: LabelPattern = "a,b,a".parse().unwrap();
        assert_eq!(e.labels(3).unwrap()[2], Label::from("a"));
        assert!(e.labels(2).is_err());
    }

    #[test]
    fn validation_names_the_field() {
        let err = ModelParams::uniform(
            2,
            vec![int(1), int(0), int(1)],
            &LabelPattern::Same,
            CumulantSequence::free_poisson(4),
        )
        .unwrap_err();
        assert!(err.to_string().contains("d_2"));
        let err = ModelParams::uniform(
            2,
            vec![int(1); 2],
            &LabelPattern::Same,
            CumulantSequence::free_poisson(4),
        )
        .unwrap_err();
        assert!(err.to_string().contains("dims"));
    }

    #[test]
    fn per_block_rejects_conflicting_sequences() {
        let r = ModelParams::per_block(
            2,
            vec![int(1); 3],
            &LabelPattern::Same,
            vec![CumulantSequence::semicircle(4), CumulantSequence::free_poisson(4)],
        );
        assert!(r.is_err());
        let ok = ModelParams::per_block(
            2,
            vec![int(1); 3],
            &LabelPattern::Distinct,
            vec![CumulantSequence::semicircle(4), CumulantSequence::free_poisson(4)],
        )
        .unwrap();
        assert!(ok.labels_distinct());
        assert_eq!(*ok.block_cumulants(2).get(3).unwrap(), int(1));
    }
}
