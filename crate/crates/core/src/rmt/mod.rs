//! Monte Carlo estimates of `τ₁((BB*)^k)` for finite random matrices.
//!
//! Each label gets one Hermitian matrix per trial; `X_l` is its block with
//! rows in block `l` and columns in block `l + 1`, and `B = X_1 ... X_p`.
//! Unitary invariance stands in for the asymptotic freeness assumptions,
//! which cannot be checked at finite size.
//!
//! Trial `i` draws from `ChaCha8Rng::seed_from_u64(seed)` on stream `i`, so
//! parallel and serial schedules give bit-identical results.

pub mod cmatrix;
pub mod sampling;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CumulantSequence, Label, ModelParams};
use crate::moments::limit_moment_enumerative;
use crate::rational::{parse_rational_list, to_f64, Rational};
use crate::series::Distribution;

pub use cmatrix::CMatrix;
pub use sampling::{sample_haar_unitary, sample_marchenko_pastur};

/// Limit spectral law of one labelled matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum SpectralLaw {
    /// GUE, standard semicircle.
    Semicircle,
    /// Complex Wishart `H H*` with limit law Marchenko-Pastur of rate `t`.
    MarchenkoPastur(f64),
    /// `U diag(λ) U*` with i.i.d. Marchenko-Pastur eigenvalues.
    MarchenkoPasturInvariant(f64),
    /// `U diag(λ) U*` with eigenvalues drawn uniformly from the list
    /// (used verbatim when the list has exactly `n` entries).
    Explicit(Vec<Rational>),
}

impl FromStr for SpectralLaw {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let num = |t: &str| -> Result<f64> {
            let q = crate::rational::parse_rational(t)?;
            Ok(to_f64(&q))
        };
        match s {
            "semicircle" | "gue" => return Ok(SpectralLaw::Semicircle),
            "free-poisson" | "wishart" => return Ok(SpectralLaw::MarchenkoPastur(1.0)),
            _ => {}
        }
        if let Some(t) = s.strip_prefix("mp:") {
            return Ok(SpectralLaw::MarchenkoPastur(num(t)?));
        }
        if let Some(t) = s.strip_prefix("mp-invariant:") {
            return Ok(SpectralLaw::MarchenkoPasturInvariant(num(t)?));
        }
        if let Some(l) = s.strip_prefix("list:") {
            return Ok(SpectralLaw::Explicit(parse_rational_list(l)?));
        }
        Err(Error::UnknownLaw(s.to_string()))
    }
}

impl fmt::Display for SpectralLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectralLaw::Semicircle => f.write_str("semicircle"),
            SpectralLaw::MarchenkoPastur(t) => write!(f, "mp:{t}"),
            SpectralLaw::MarchenkoPasturInvariant(t) => write!(f, "mp-invariant:{t}"),
            SpectralLaw::Explicit(v) => {
                let s: Vec<String> = v.iter().map(ToString::to_string).collect();
                write!(f, "list:{}", s.join(","))
            }
        }
    }
}

impl SpectralLaw {
    /// Free cumulants `r_1..r_len` of the limit law.
    pub fn cumulants(&self, len: usize) -> Result<CumulantSequence> {
        match self {
            SpectralLaw::Semicircle => Ok(CumulantSequence::semicircle(len)),
            SpectralLaw::MarchenkoPastur(t) | SpectralLaw::MarchenkoPasturInvariant(t) => {
                let q = Rational::from_float(*t)
                    .ok_or_else(|| Error::InvalidModel(format!("rate {t} is not finite")))?;
                Ok(CumulantSequence::marchenko_pastur(q, len))
            }
            SpectralLaw::Explicit(v) => {
                if v.is_empty() {
                    return Err(Error::InvalidModel("empty eigenvalue list".into()));
                }
                let n = Rational::from_integer(v.len().into());
                let moments = (1..=len as u32)
                    .map(|m| v.iter().map(|x| crate::rational::pow(x, m)).sum::<Rational>() / &n)
                    .collect();
                Distribution::from_moments(moments).cumulants()
            }
        }
    }
}

/// Reference size for the entry variance `1 / N_ref` and the dimensions `d_j = n_j / N_ref`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Normalization {
    /// `N_ref = n`; dimensions are block fractions of the whole matrix.
    #[default]
    Total,
    /// `N_ref = n_1`, so `d_1 = 1`.
    FirstBlock,
}

impl FromStr for Normalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "total" => Ok(Normalization::Total),
            "first-block" | "first" => Ok(Normalization::FirstBlock),
            other => Err(Error::Parse(format!("unknown normalization `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    /// `n_1..n_{p+1}`.
    pub block_sizes: Vec<usize>,
    /// `u_1..u_p`.
    pub labels: Vec<Label>,
    pub laws: BTreeMap<Label, SpectralLaw>,
    pub trials: usize,
    pub seed: u64,
    #[serde(default)]
    pub normalization: Normalization,
}

impl EnsembleSpec {
    /// Same law for every label.
    pub fn uniform(block_sizes: Vec<usize>, labels: Vec<Label>, law: SpectralLaw, trials: usize, seed: u64) -> Self {
        let laws = labels.iter().map(|l| (l.clone(), law.clone())).collect();
        EnsembleSpec { block_sizes, labels, laws, trials, seed, normalization: Normalization::Total }
    }

    pub fn with_normalization(mut self, normalization: Normalization) -> Self {
        self.normalization = normalization;
        self
    }

    pub fn p(&self) -> usize {
        self.labels.len()
    }

    pub fn n(&self) -> usize {
        self.block_sizes.iter().sum()
    }

    fn n_ref(&self) -> usize {
        match self.normalization {
            Normalization::Total => self.n(),
            Normalization::FirstBlock => self.block_sizes[0],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let p = self.p();
        if p == 0 {
            return Err(Error::DimensionMismatch("labels: at least one block is needed".into()));
        }
        if self.block_sizes.len() != p + 1 {
            return Err(Error::DimensionMismatch(format!(
                "block_sizes: expected {} sizes for p = {p}, found {}",
                p + 1,
                self.block_sizes.len()
            )));
        }
        if self.block_sizes.contains(&0) {
            return Err(Error::DimensionMismatch("block_sizes: sizes must be positive".into()));
        }
        if self.trials < 2 {
            return Err(Error::InvalidModel("trials: at least 2 are needed for a standard error".into()));
        }
        for l in &self.labels {
            let law = self
                .laws
                .get(l)
                .ok_or_else(|| Error::InvalidModel(format!("laws: no spectral law for label {l}")))?;
            if let SpectralLaw::Explicit(_) = law {
                if self.normalization != Normalization::Total {
                    return Err(Error::InvalidModel(
                        "explicit spectra need the total normalization".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Dimensions `n_j / N_ref` and the limit cumulants of each law.
    pub fn model_params(&self, cumulant_len: usize) -> Result<ModelParams> {
        self.validate()?;
        let n_ref = Rational::from_integer(self.n_ref().into());
        let dims = self
            .block_sizes
            .iter()
            .map(|&s| Rational::from_integer(s.into()) / &n_ref)
            .collect();
        let mut cumulants = BTreeMap::new();
        for l in &self.labels {
            cumulants.insert(l.clone(), self.laws[l].cumulants(cumulant_len)?);
        }
        ModelParams::new(self.p(), dims, self.labels.clone(), cumulants)
    }
}

/// Hermitian `n × n` sample with entry scale `1 / n_ref`, whose limit law is
/// `law` when `n_ref = n`. For `n_ref ≠ n` the sample is `λ Y'` with `λ = n / n_ref`
/// and `Y'` following `law` with rate `t / λ`, which keeps the free cumulants
/// relative to `n_ref` equal to those of `law`.
pub fn sample_matrix_scaled<R: rand::Rng + ?Sized>(law: &SpectralLaw, n: usize, n_ref: usize, rng: &mut R) -> Result<CMatrix> {
    let nr = n_ref as f64;
    let lambda = n as f64 / nr;
    Ok(match law {
        SpectralLaw::Semicircle => sampling::sample_gue(n, nr, rng),
        SpectralLaw::MarchenkoPastur(t) => {
            let cols = (t * nr).round().max(1.0) as usize;
            sampling::sample_wishart(n, cols, nr, rng)
        }
        SpectralLaw::MarchenkoPasturInvariant(t) => {
            let ev: Vec<f64> = (0..n).map(|_| lambda * sample_marchenko_pastur(t / lambda, rng)).collect();
            sampling::sample_invariant(&ev, rng)
        }
        SpectralLaw::Explicit(v) => {
            if n != n_ref {
                return Err(Error::InvalidModel("explicit spectra need n_ref = n".into()));
            }
            if v.is_empty() {
                return Err(Error::InvalidModel("empty eigenvalue list".into()));
            }
            let vf: Vec<f64> = v.iter().map(to_f64).collect();
            let ev: Vec<f64> = if vf.len() == n {
                vf
            } else {
                (0..n).map(|_| vf[rng.random_range(0..vf.len())]).collect()
            };
            sampling::sample_invariant(&ev, rng)
        }
    })
}

/// Hermitian `n × n` sample normalized by `n`.
pub fn sample_matrix<R: rand::Rng + ?Sized>(law: &SpectralLaw, n: usize, rng: &mut R) -> Result<CMatrix> {
    sample_matrix_scaled(law, n, n, rng)
}

/// Estimate of one moment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationRow {
    pub k: usize,
    pub estimate: f64,
    pub stderr: f64,
    pub trials: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationResult {
    pub rows: Vec<SimulationRow>,
}

/// `(1/n_1) Tr((BB*)^k)` for `k = 1..=k_max` in one trial.
fn one_trial(spec: &EnsembleSpec, k_max: usize, trial: usize) -> Result<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(trial as u64);
    let n = spec.n();
    let n_ref = spec.n_ref();
    let mut offsets = vec![0];
    for s in &spec.block_sizes {
        offsets.push(offsets.last().unwrap() + s);
    }
    // one matrix per distinct label, in order of first use
    let mut samples: Vec<(Label, CMatrix)> = Vec::new();
    for l in &spec.labels {
        if samples.iter().all(|(m, _)| m != l) {
            let y = sample_matrix_scaled(&spec.laws[l], n, n_ref, &mut rng)?;
            samples.push((l.clone(), y));
        }
    }
    let mut b: Option<CMatrix> = None;
    for (i, l) in spec.labels.iter().enumerate() {
        let y = &samples.iter().find(|(m, _)| m == l).unwrap().1;
        let x = y.block(offsets[i], offsets[i + 1], spec.block_sizes[i], spec.block_sizes[i + 1]);
        b = Some(match b {
            None => x,
            Some(acc) => acc.mul(&x),
        });
    }
    let b = b.expect("p >= 1");
    let c = b.mul_adjoint(&b);
    let n1 = spec.block_sizes[0] as f64;
    let mut out = Vec::with_capacity(k_max);
    let mut pw = c.clone();
    for k in 1..=k_max {
        if k > 1 {
            pw = pw.mul(&c);
        }
        out.push(pw.trace().re / n1);
    }
    Ok(out)
}

/// Mean and standard error (sample std over `√trials`) of `τ₁((BB*)^k)`.
pub fn empirical_wishart_moments(spec: &EnsembleSpec, k_max: usize) -> Result<SimulationResult> {
    spec.validate()?;
    let per_trial: Vec<Vec<f64>> = (0..spec.trials)
        .into_par_iter()
        .map(|t| one_trial(spec, k_max, t))
        .collect::<Result<_>>()?;
    let t = spec.trials as f64;
    let rows = (0..k_max)
        .map(|i| {
            let mean = per_trial.iter().map(|v| v[i]).sum::<f64>() / t;
            let var = per_trial.iter().map(|v| (v[i] - mean).powi(2)).sum::<f64>() / (t - 1.0);
            SimulationRow { k: i + 1, estimate: mean, stderr: (var / t).sqrt(), trials: spec.trials }
        })
        .collect();
    Ok(SimulationResult { rows })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub k: usize,
    pub estimate: f64,
    pub stderr: f64,
    pub exact: Rational,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

/// Default relative tolerance floor.
pub const DEFAULT_REL_TOL: f64 = 0.08;

/// Flags every `k` with `|estimate - exact| > max(4 stderr, rel_tol |exact|)`;
/// exact values come from the enumerative route with `params`.
pub fn convergence_report(
    spec: &EnsembleSpec,
    params: &ModelParams,
    k_max: usize,
    rel_tol: f64,
    cap: usize,
) -> Result<ConvergenceReport> {
    let sim = empirical_wishart_moments(spec, k_max)?;
    let mut rows = Vec::new();
    for r in sim.rows {
        let exact = limit_moment_enumerative(r.k, params, cap)?.moment;
        let ex = exact.to_f64().unwrap_or(f64::NAN);
        let tolerance = (4.0 * r.stderr).max(rel_tol * ex.abs());
        let pass = (r.estimate - ex).abs() <= tolerance || (exact.is_zero() && r.estimate.abs() <= tolerance);
        rows.push(ConvergenceRow { k: r.k, estimate: r.estimate, stderr: r.stderr, exact, tolerance, pass });
    }
    Ok(ConvergenceReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn spec(sizes: Vec<usize>, labels: &[&str], law: SpectralLaw, trials: usize) -> EnsembleSpec {
        EnsembleSpec::uniform(sizes, labels.iter().map(|&s| Label::from(s)).collect(), law, trials, 42)
    }

    #[test]
    fn law_parsing() {
        assert_eq!("mp:1/2".parse::<SpectralLaw>().unwrap(), SpectralLaw::MarchenkoPastur(0.5));
        assert_eq!("semicircle".parse::<SpectralLaw>().unwrap(), SpectralLaw::Semicircle);
        assert!(matches!("cauchy".parse::<SpectralLaw>(), Err(Error::UnknownLaw(_))));
    }

    #[test]
    fn explicit_law_cumulants() {
        let c = SpectralLaw::Explicit(vec![int(1), int(3)]).cumulants(3).unwrap();
        // mean 2, variance 1, third central moment 0
        assert_eq!(c.values(), &[int(2), int(1), int(0)]);
    }

    #[test]
    fn reproducible_for_fixed_seed() {
        let s = spec(vec![20, 20], &["a"], SpectralLaw::Semicircle, 8);
        let a = empirical_wishart_moments(&s, 3).unwrap();
        let b = empirical_wishart_moments(&s, 3).unwrap();
        assert_eq!(a, b);
        let mut s2 = s.clone();
        s2.seed = 43;
        assert_ne!(a, empirical_wishart_moments(&s2, 3).unwrap());
    }

    #[test]
    fn model_params_follow_normalization() {
        let s = spec(vec![30, 60], &["a"], SpectralLaw::Semicircle, 4);
        assert_eq!(s.model_params(4).unwrap().dims, vec![frac(1, 3), frac(2, 3)]);
        let s = s.with_normalization(Normalization::FirstBlock);
        assert_eq!(s.model_params(4).unwrap().dims, vec![int(1), int(2)]);
    }

    #[test]
    fn validation() {
        assert!(spec(vec![10], &["a"], SpectralLaw::Semicircle, 4).validate().is_err());
        assert!(spec(vec![10, 0], &["a"], SpectralLaw::Semicircle, 4).validate().is_err());
        let s = spec(vec![10, 10], &["a"], SpectralLaw::Explicit(vec![int(1)]), 4)
            .with_normalization(Normalization::FirstBlock);
        assert!(s.validate().is_err());
    }

    #[test]
    fn explicit_constant_spectrum_gives_exact_moments() {
        // Y = 2 I: off-diagonal blocks vanish
        let s = spec(vec![6, 6], &["a"], SpectralLaw::Explicit(vec![int(2)]), 3);
        let r = empirical_wishart_moments(&s, 2).unwrap();
        assert!(r.rows.iter().all(|row| row.estimate.abs() < 1e-12));
    }
}
