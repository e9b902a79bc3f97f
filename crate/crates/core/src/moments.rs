//! Exact limit moments `m_k = lim τ₁((BB*)^k)` by weighted enumeration.
//!
//! Two enumerative routes are implemented:
//!
//! * blocks of `π ∈ NC(W^k)` weighted by `d(V) r_{|V|}(u_V)`;
//! * pairings `σ ∈ NC²(W̃^k)` weighted by depth parity: an odd-depth block
//!   gets `r_{𝔦(V)+1}(u_V)` (𝔦 = number of nearest inner blocks), an
//!   even-depth block gets one dimension read off its colors in `W₀`.
//!
//! Both produce a [`SymbolicMoment`], a multiset of monomials in the
//! dimensions and cumulants, so the routes can be compared term by term.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Label, ModelParams};
use crate::partition::{alpha, PairPartition, Partition};
use crate::rational::{pow, Rational};
use crate::series::solve;
use crate::words::{for_each_pair_adapted, make_w, make_wtilde, w0_letter, Word};

/// Coefficients `N_k(𝐣)` keyed by the exponent vector `(j_1, ..., j_{p+1})` of `d_1^{j_1} ... d_{p+1}^{j_{p+1}}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedCount {
    pub terms: BTreeMap<Vec<u32>, Rational>,
}

impl WeightedCount {
    pub fn add(&mut self, exponents: Vec<u32>, coeff: Rational) {
        let e = self.terms.entry(exponents).or_insert_with(Rational::zero);
        *e += coeff;
    }

    /// Drops zero coefficients so that equal polynomials compare equal.
    pub fn normalized(mut self) -> Self {
        self.terms.retain(|_, c| !c.is_zero());
        self
    }

    pub fn evaluate(&self, dims: &[Rational]) -> Rational {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(dims)
                    .fold(c.clone(), |acc, (&j, d)| acc * pow(d, j))
            })
            .sum()
    }

    /// Sum of all coefficients (the value at unit dimensions).
    pub fn total(&self) -> Rational {
        self.terms.values().sum()
    }
}

/// One cumulant factor `r_order(label)`; `label` indexes [`SymbolicMoment::labels`].
pub type CumulantFactor = (usize, usize);

/// Key of a symbolic monomial: dimension exponents and sorted cumulant factors.
pub type MonomialKey = (Vec<u32>, Vec<CumulantFactor>);

/// Integer multiplicities of monomials `d^𝐣 · Π r_m(u)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicMoment {
    pub labels: Vec<Label>,
    pub terms: BTreeMap<MonomialKey, u64>,
    pub partitions: u64,
}

impl SymbolicMoment {
    pub fn weighted_count(&self, params: &ModelParams) -> Result<WeightedCount> {
        let mut wc = WeightedCount::default();
        for ((exps, cums), &mult) in &self.terms {
            let mut c = Rational::from_integer(mult.into());
            for &(l, m) in cums {
                c *= params.cumulants[&self.labels[l]].get(m)?;
            }
            wc.add(exps.clone(), c);
        }
        Ok(wc.normalized())
    }

    pub fn evaluate(&self, params: &ModelParams) -> Result<Rational> {
        Ok(self.weighted_count(params)?.evaluate(&params.dims))
    }
}

/// Result of one enumerative moment computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentResult {
    pub k: usize,
    pub moment: Rational,
    pub monomials: WeightedCount,
    pub partitions: u64,
}

impl MomentResult {
    fn from_symbolic(k: usize, sym: &SymbolicMoment, params: &ModelParams) -> Result<Self> {
        let monomials = sym.weighted_count(params)?;
        Ok(MomentResult {
            k,
            moment: monomials.evaluate(&params.dims),
            monomials,
            partitions: sym.partitions,
        })
    }
}

/// Dimension weight `d(V)` of a block (sorted positions in `word`).
///
/// Legs must chain: the color leaving one leg equals the color entering the
/// next one, cyclically, as is the case for every block of an adapted partition.
pub fn dimension_weight(block: &[usize], word: &Word, dims: &[Rational]) -> Result<Rational> {
    let coloring = word.block_coloring(block)?;
    let m = block.len();
    for i in 0..m {
        let (a, b) = (word.at(block[i]), word.at(block[(i + 1) % m]));
        if a.color_after() != b.color_before() {
            return Err(Error::InconsistentColoring(format!(
                "leg {} leaves color {} but leg {} enters with {}",
                block[i],
                a.color_after(),
                block[(i + 1) % m],
                b.color_before()
            )));
        }
    }
    coloring.colors.iter().try_fold(Rational::one(), |acc, &c| {
        let d = dims.get(c - 1).ok_or_else(|| {
            Error::InconsistentColoring(format!("segment color {c} has no dimension"))
        })?;
        Ok(acc * d)
    })
}

struct Layout {
    labels: Vec<Label>,
    // per position (1-based, slot 0 unused)
    label_of: Vec<usize>,
    color_after: Vec<usize>,
}

fn layout_w(params: &ModelParams, k: usize) -> Result<(Word, Layout)> {
    params.validate()?;
    let (labels, ids) = params.label_classes();
    let w = make_w(params.p, &params.labels)?.power(k);
    let mut label_of = vec![0];
    let mut color_after = vec![0];
    for l in w.letters() {
        label_of.push(ids[l.color - 1]);
        color_after.push(l.color_after());
    }
    Ok((w, Layout { labels, label_of, color_after }))
}

fn check_orders(sym: &SymbolicMoment, params: &ModelParams) -> Result<()> {
    for (_, cums) in sym.terms.keys() {
        for &(l, m) in cums {
            params.cumulants[&sym.labels[l]].get(m)?;
        }
    }
    Ok(())
}

/// Symbolic form of the sum over `NC(W^k)` of `Π_V d(V) r_{|V|}(u_V)`.
pub fn symbolic_enumerative(k: usize, params: &ModelParams, cap: usize) -> Result<SymbolicMoment> {
    let (w, lay) = layout_w(params, k)?;
    let p = params.p;
    let mut counts: HashMap<MonomialKey, u64> = HashMap::new();
    let mut partitions = 0u64;
    w.for_each_adapted(cap, &mut |blocks| {
        let mut exps = vec![0u32; p + 1];
        let mut cums: Vec<CumulantFactor> = Vec::with_capacity(blocks.len());
        for b in blocks {
            for &s in &b[..b.len() - 1] {
                exps[lay.color_after[s] - 1] += 1;
            }
            cums.push((lay.label_of[b[0]], b.len()));
        }
        cums.sort_unstable();
        *counts.entry((exps, cums)).or_insert(0) += 1;
        partitions += 1;
    })?;
    let sym = SymbolicMoment { labels: lay.labels, terms: counts.into_iter().collect(), partitions };
    check_orders(&sym, params)?;
    Ok(sym)
}

/// Depth-parity monomial of one pairing of `W̃^k`; `label_of` and `w0` are per position.
fn pair_monomial(
    pairs: &[(usize, usize)],
    n: usize,
    p: usize,
    label_of: &[usize],
    w0: &[(usize, bool)],
) -> Result<MonomialKey> {
    let mut partner = vec![0usize; n + 1];
    for &(a, b) in pairs {
        partner[a] = b;
        partner[b] = a;
    }
    let mut stack: Vec<usize> = Vec::new();
    let mut depth = vec![0usize; n + 1];
    let mut inner = vec![0usize; n + 1];
    for x in 1..=n {
        if partner[x] > x {
            if let Some(&parent) = stack.last() {
                inner[parent] += 1;
            }
            stack.push(x);
            depth[x] = stack.len();
        } else {
            stack.pop();
        }
    }
    let mut exps = vec![0u32; p + 1];
    let mut cums = Vec::new();
    for &(a, b) in pairs {
        if depth[a] % 2 == 1 {
            cums.push((label_of[a], inner[a] + 1));
        } else {
            let ((ca, sa), (cb, sb)) = (w0[a], w0[b]);
            let idx = match (ca, sa, cb, sb) {
                (1, true, 1, false) => 0,
                (c, _, c2, _) if c == c2 && c % 2 == 0 && sa != sb => c / 2,
                _ => {
                    return Err(Error::InconsistentColoring(format!(
                        "even-depth pair {{{a},{b}}} has no dimension"
                    )))
                }
            };
            exps[idx] += 1;
        }
    }
    cums.sort_unstable();
    Ok((exps, cums))
}

struct PairLayout {
    labels: Vec<Label>,
    label_of: Vec<usize>,
    w0: Vec<(usize, bool)>,
}

fn layout_wtilde(params: &ModelParams, k: usize) -> Result<PairLayout> {
    params.validate()?;
    let (labels, ids) = params.label_classes();
    let wt = make_wtilde(params.p, &params.labels)?.power(k);
    let mut label_of = vec![0];
    let mut w0 = vec![(0, false)];
    for l in wt.letters() {
        label_of.push(ids[(l.color - 1) / 2]);
        let m = w0_letter(l);
        w0.push((m.color, m.star));
    }
    Ok(PairLayout { labels, label_of, w0 })
}

/// Symbolic form of the depth-parity sum over `NC²(W̃^k)`.
pub fn symbolic_pair(k: usize, params: &ModelParams, cap: usize) -> Result<SymbolicMoment> {
    let lay = layout_wtilde(params, k)?;
    let (p, n) = (params.p, 4 * params.p * k);
    let mut counts: HashMap<MonomialKey, u64> = HashMap::new();
    let mut partitions = 0u64;
    let mut err = None;
    for_each_pair_adapted(p, k, &params.labels, cap, &mut |pairs| {
        match pair_monomial(pairs, n, p, &lay.label_of, &lay.w0) {
            Ok(key) => *counts.entry(key).or_insert(0) += 1,
            Err(e) => {
                err.get_or_insert(e);
            }
        }
        partitions += 1;
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    let sym = SymbolicMoment { labels: lay.labels, terms: counts.into_iter().collect(), partitions };
    check_orders(&sym, params)?;
    Ok(sym)
}

/// `m_k` as the weighted sum over `NC(W^k)`.
pub fn limit_moment_enumerative(k: usize, params: &ModelParams, cap: usize) -> Result<MomentResult> {
    MomentResult::from_symbolic(k, &symbolic_enumerative(k, params, cap)?, params)
}

/// `m_k` as the depth-parity weighted sum over `NC²(W̃^k)`.
pub fn limit_moment_pair(k: usize, params: &ModelParams, cap: usize) -> Result<MomentResult> {
    MomentResult::from_symbolic(k, &symbolic_pair(k, params, cap)?, params)
}

/// Weight `Π_V d(V) r_{|V|}(u_V)` of a single partition of `[2pk]`.
pub fn partition_weight(pi: &Partition, params: &ModelParams) -> Result<Rational> {
    let k = pi.n() / (2 * params.p);
    let w = make_w(params.p, &params.labels)?.power(k);
    if w.len() != pi.n() {
        return Err(Error::SizeMismatch { expected: w.len(), found: pi.n() });
    }
    let mut acc = Rational::one();
    for b in pi.blocks() {
        let label = &w.at(b[0]).label;
        acc *= dimension_weight(b, &w, &params.dims)?;
        acc *= params.cumulants[label].get(b.len())?;
    }
    Ok(acc)
}

/// Depth-parity weight of a single pairing of `[4pk]`.
pub fn pair_weight(sigma: &PairPartition, params: &ModelParams) -> Result<Rational> {
    let k = sigma.n() / (4 * params.p);
    if 4 * params.p * k != sigma.n() {
        return Err(Error::SizeMismatch { expected: 4 * params.p * k.max(1), found: sigma.n() });
    }
    let lay = layout_wtilde(params, k)?;
    let (exps, cums) = pair_monomial(sigma.pairs(), sigma.n(), params.p, &lay.label_of, &lay.w0)?;
    let mut acc = Rational::one();
    for (j, d) in exps.iter().zip(&params.dims) {
        acc *= pow(d, *j);
    }
    for (l, m) in cums {
        acc *= params.cumulants[&lay.labels[l]].get(m)?;
    }
    Ok(acc)
}

/// One row of a [`CrossValidation`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RouteRow {
    pub k: usize,
    pub enumerative: Rational,
    pub pair: Rational,
    /// `d₁⁻¹ Σ_r P_{k,r} T_{k,r}`; only for distinct labels.
    pub closed_form: Option<Rational>,
    /// Coefficient of the functional-equation solution; only for distinct labels.
    pub series: Option<Rational>,
}

impl RouteRow {
    pub fn agree(&self) -> bool {
        let e = &self.enumerative;
        *e == self.pair
            && self.closed_form.as_ref().is_none_or(|c| c == e)
            && self.series.as_ref().is_none_or(|s| s == e)
    }
}

/// A partition whose two route weights differ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub k: usize,
    pub partition: String,
    pub pairing: String,
    pub enumerative_weight: Rational,
    pub pair_weight: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossValidation {
    pub rows: Vec<RouteRow>,
    pub mismatch: Option<Mismatch>,
}

impl CrossValidation {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none() && self.rows.iter().all(RouteRow::agree)
    }
}

/// Series routes need independent labels and `r_2 ≠ 0` for every label.
fn series_applicable(params: &ModelParams) -> bool {
    params.labels_distinct()
        && params
            .cumulants
            .values()
            .all(|c| c.get(2).is_ok_and(|r2| !r2.is_zero()))
}

/// Compares every available route for `k = 1..=k_max`.
///
/// When the two enumerative routes disagree, the first partition `π` with
/// `weight(π) ≠ weight(α(π))` is reported.
pub fn cross_validate(k_max: usize, params: &ModelParams, cap: usize) -> Result<CrossValidation> {
    let with_series = series_applicable(params);
    let psi = if with_series {
        Some(solve::solve_psi_independent(params, k_max)?)
    } else {
        None
    };
    let mut rows = Vec::new();
    let mut mismatch = None;
    for k in 1..=k_max {
        let enumerative = limit_moment_enumerative(k, params, cap)?.moment;
        let pair = limit_moment_pair(k, params, cap)?.moment;
        let (closed_form, series) = if with_series {
            (
                Some(solve::moments_closed_form(params, k)?),
                psi.as_ref().map(|s| s.coeff(k)),
            )
        } else {
            (None, None)
        };
        if enumerative != pair && mismatch.is_none() {
            mismatch = localize(k, params, cap)?;
        }
        rows.push(RouteRow { k, enumerative, pair, closed_form, series });
    }
    Ok(CrossValidation { rows, mismatch })
}

fn localize(k: usize, params: &ModelParams, cap: usize) -> Result<Option<Mismatch>> {
    let w = make_w(params.p, &params.labels)?.power(k);
    for pi in w.enumerate_adapted(cap)? {
        let sigma = alpha(&pi)?;
        let (a, b) = (partition_weight(&pi, params)?, pair_weight(&sigma, params)?);
        if a != b {
            return Ok(Some(Mismatch {
                k,
                partition: pi.to_string(),
                pairing: sigma.to_string(),
                enumerative_weight: a,
                pair_weight: b,
            }));
        }
    }
    Ok(None)
}
