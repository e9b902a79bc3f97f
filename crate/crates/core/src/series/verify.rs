//! Self-checks of the series machinery, returned as reports instead of panics.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CumulantSequence, LabelPattern, ModelParams};
use crate::moments::cross_validate;
use crate::numbers::raney;
use crate::rational::{frac, int, pow, Rational};
use crate::series::distribution::{cumulant_series, free_meixner_even_cumulants, nu_tilde, Distribution};
use crate::series::fps::FormalPowerSeries;
use crate::series::solve::{dependent_moments, q_sequence, solve_psi_independent};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub name: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(name: impl Into<String>) -> Self {
        Report { name: name.into(), checks: Vec::new() }
    }

    pub fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
    }

    /// Records a zero-residual check.
    pub fn push_residual(&mut self, name: impl Into<String>, residual: &FormalPowerSeries) {
        let passed = residual.is_zero();
        let detail = if passed {
            format!("zero to order {}", residual.order())
        } else {
            format!("residual {residual}")
        };
        self.push(name, passed, detail);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}] {}", if self.passed() { "PASS" } else { "FAIL" }, self.name)?;
        for c in &self.checks {
            let mark = if c.passed { "ok  " } else { "FAIL" };
            if c.detail.is_empty() {
                writeln!(f, "  {mark} {}", c.name)?;
            } else {
                writeln!(f, "  {mark} {}: {}", c.name, c.detail)?;
            }
        }
        Ok(())
    }
}

/// `ψ = Σ Q_n z^n` must satisfy `ψ = R_ν̃(z (ψ + 1)(ψ^{(s)} + 1))` to order `K`.
pub fn dependent_residual(c: &CumulantSequence, order: usize) -> Result<FormalPowerSeries> {
    let q = q_sequence(c, order)?;
    let mut psi = FormalPowerSeries::new(q);
    psi.set_coeff(0, Rational::zero());
    let r = nu_tilde_r(c, order)?;
    let one = FormalPowerSeries::one(order);
    let arg = &(&FormalPowerSeries::z(order) * &(&psi + &one)) * &(&psi.even_part() + &one);
    Ok(&psi - &r.compose(&arg)?)
}

fn nu_tilde_r(c: &CumulantSequence, order: usize) -> Result<FormalPowerSeries> {
    c.require(2 * order)?;
    let even: Vec<Rational> = (1..=order).map(|n| c.values()[2 * n - 1].clone()).collect();
    Ok(cumulant_series(&even, order))
}

/// `ψ_μ(z) = M_μ(z) - 1` of two dependent blocks, order `K`.
fn dependent_psi(c: &CumulantSequence, order: usize) -> Result<FormalPowerSeries> {
    let mut coeffs = vec![Rational::zero()];
    coeffs.extend(dependent_moments(c, order)?);
    Ok(FormalPowerSeries::new(coeffs))
}

/// Residual of `M² = 1 + 4 z M⁶` for the free-Poisson dependent-block moments.
pub fn free_poisson_quadratic_residual(order: usize) -> Result<FormalPowerSeries> {
    let mut m = dependent_psi(&CumulantSequence::free_poisson(4 * order), order)?;
    m.set_coeff(0, Rational::one());
    let rhs = &FormalPowerSeries::one(order) + &m.pow(6).mul_z().scale(&int(4));
    Ok(&m.pow(2) - &rhs)
}

/// Residual of `ψ_μ = z (ψ_μ + 1)³` for the semicircle dependent-block moments.
pub fn semicircle_cubic_residual(order: usize) -> Result<FormalPowerSeries> {
    let psi = dependent_psi(&CumulantSequence::semicircle(4 * order), order)?;
    let rhs = (&psi + &FormalPowerSeries::one(order)).pow(3).mul_z();
    Ok(&psi - &rhs)
}

/// `Σ_{k=0}^{n} R_k(p, r) R_{n-k}(p, s) = R_n(p, r + s)`.
pub fn raney_convolution_holds(n: u64, p: u64, r: &Rational, s: &Rational) -> bool {
    let lhs: Rational = (0..=n).map(|k| raney(k, p, r) * raney(n - k, p, s)).sum();
    lhs == raney(n, p, &(r + s))
}

/// Dependent-block residual plus the two closed-form specializations.
pub fn verify_dependent(c: &CumulantSequence, order: usize) -> Result<Report> {
    let mut rep = Report::new("dependent blocks: functional equation");
    rep.push_residual("ψ = R_ν̃(z(ψ+1)(ψ^(s)+1))", &dependent_residual(c, order)?);
    rep.push_residual("free Poisson: M² = 1 + 4zM⁶", &free_poisson_quadratic_residual(order)?);
    rep.push_residual("semicircle: ψ = z(ψ+1)³", &semicircle_cubic_residual(order)?);
    let fp = dependent_moments(&CumulantSequence::free_poisson(4 * order), order)?;
    let raney_ok = fp
        .iter()
        .enumerate()
        .all(|(i, m)| *m == pow(&int(4), i as u32 + 1) * raney(i as u64 + 1, 2, &frac(1, 2)));
    rep.push("free Poisson: m_n = 4^n R_n(2, 1/2)", raney_ok, format!("m = {}", join(&fp)));
    let conv = (0..=6u64).all(|n| {
        [(frac(1, 2), frac(1, 2)), (int(1), frac(3, 2)), (frac(1, 3), int(2))]
            .iter()
            .all(|(r, s)| raney_convolution_holds(n, 2, r, s) && raney_convolution_holds(n, 3, r, s))
    });
    rep.push("Raney convolution", conv, "n ≤ 6, p ∈ {2, 3}");
    Ok(rep)
}

fn join(v: &[Rational]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn distribution_of(psi: &FormalPowerSeries) -> Distribution {
    Distribution::from_moments(psi.coeffs()[1..].to_vec())
}

/// `V_{d₁}(μ) = V_{d₁}(ξ₁) ⊠ ... ⊠ V_{d_p}(ξ_p)` and `V_{d_i}(ξ_i) = ν̃_i ⊠ ρ_{d_{i+1}}` to order `K`.
pub fn verify_s_factorization(params: &ModelParams, order: usize) -> Result<Report> {
    let mut rep = Report::new("independent blocks: S-transform factorization");
    let d = &params.dims;
    let mu = distribution_of(&solve_psi_independent(params, order)?);
    let mut rhs: Option<Distribution> = None;
    for i in 1..=params.p {
        let c = params.block_cumulants(i).clone();
        let single = ModelParams::uniform(1, vec![d[i - 1].clone(), d[i].clone()], &LabelPattern::Same, c.clone())?;
        let xi = distribution_of(&solve_psi_independent(&single, order)?);
        let v = xi.v_transform(&d[i - 1])?;
        let factor = nu_tilde(&c, order)?.box_times(&Distribution::marchenko_pastur(&d[i], order)?)?;
        rep.push(
            format!("V_d{i}(ξ_{i}) = ν̃_{i} ⊠ ρ_d{}", i + 1),
            v == factor,
            format!("order {order}"),
        );
        rhs = Some(match rhs {
            None => v,
            Some(a) => a.box_times(&v)?,
        });
    }
    let lhs = mu.v_transform(&d[0])?;
    let rhs = rhs.expect("p >= 1");
    rep.push(
        "V_d1(μ) = ⊠_i V_di(ξ_i)",
        lhs == rhs,
        format!("lhs m = [{}], rhs m = [{}]", join(lhs.moments()), join(rhs.moments())),
    );
    Ok(rep)
}

/// `S_μ(z) = Π_{j=1}^{p} (d_{j+1} + d₁ z)^{-1}` for semicircle factors, order `K - 1`.
pub fn gaussian_s_transform(dims: &[Rational], order: usize) -> Result<FormalPowerSeries> {
    let mut acc = FormalPowerSeries::one(order - 1);
    for dj in &dims[1..] {
        let f = FormalPowerSeries::from_coeffs(vec![dj.clone(), dims[0].clone()], order - 1);
        acc = &acc * &f.reciprocal()?;
    }
    Ok(acc)
}

/// Named groups of checks run by [`run_suite`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Suite {
    Routes,
    Dependent,
    Independent,
    Hankel,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "routes" | "cross-validate" => Ok(Suite::Routes),
            "dependent" => Ok(Suite::Dependent),
            "independent" => Ok(Suite::Independent),
            "hankel" => Ok(Suite::Hankel),
            "all" => Ok(Suite::All),
            other => Err(Error::Parse(format!(
                "unknown suite `{other}` (expected routes, dependent, independent, hankel or all)"
            ))),
        }
    }
}

fn route_models(k_max: usize) -> Result<Vec<(String, ModelParams)>> {
    let len = 4 * k_max + 4;
    let dims2 = vec![frac(1, 2), int(1), frac(3, 2)];
    Ok(vec![
        (
            "p=1 semicircle d=(1, 2/3)".into(),
            ModelParams::uniform(1, vec![int(1), frac(2, 3)], &LabelPattern::Same, CumulantSequence::semicircle(len))?,
        ),
        (
            "p=2 semicircle distinct".into(),
            ModelParams::uniform(2, dims2.clone(), &LabelPattern::Distinct, CumulantSequence::semicircle(len))?,
        ),
        (
            "p=2 mixed semicircle/free-Poisson distinct".into(),
            ModelParams::per_block(
                2,
                dims2.clone(),
                &LabelPattern::Distinct,
                vec![CumulantSequence::semicircle(len), CumulantSequence::free_poisson(len)],
            )?,
        ),
        (
            "p=2 free-Poisson same label".into(),
            ModelParams::uniform(2, vec![int(1); 3], &LabelPattern::Same, CumulantSequence::free_poisson(len))?,
        ),
        (
            "p=2 mp(1/3) same label".into(),
            ModelParams::uniform(2, dims2, &LabelPattern::Same, CumulantSequence::marchenko_pastur(frac(1, 3), len))?,
        ),
    ])
}

/// Runs a suite with moments up to `k_max` and series to order `2 k_max` (at least 8).
pub fn run_suite(suite: Suite, k_max: usize, cap: usize) -> Result<Vec<Report>> {
    let order = (2 * k_max).max(8);
    let mut out = Vec::new();
    if matches!(suite, Suite::Routes | Suite::All) {
        for (name, m) in route_models(k_max)? {
            let cv = cross_validate(k_max, &m, cap)?;
            let mut rep = Report::new(format!("routes agree: {name}"));
            for row in &cv.rows {
                rep.push(
                    format!("k={}", row.k),
                    row.agree(),
                    format!(
                        "enumerative {} pair {} closed {} series {}",
                        row.enumerative,
                        row.pair,
                        opt(&row.closed_form),
                        opt(&row.series)
                    ),
                );
            }
            if let Some(mm) = &cv.mismatch {
                rep.push(
                    "first mismatching partition",
                    false,
                    format!("k={} π={} σ={} {} vs {}", mm.k, mm.partition, mm.pairing, mm.enumerative_weight, mm.pair_weight),
                );
            }
            out.push(rep);
        }
        let fp = ModelParams::uniform(2, vec![int(1); 3], &LabelPattern::Same, CumulantSequence::free_poisson(4 * k_max))?;
        let mut rep = Report::new("same-label enumeration vs dependent-block recurrence");
        let q = dependent_moments(&CumulantSequence::free_poisson(4 * k_max), k_max)?;
        for k in 1..=k_max {
            let e = crate::moments::limit_moment_enumerative(k, &fp, cap)?.moment;
            rep.push(format!("k={k}"), e == q[k - 1], format!("enumerative {e} recurrence {}", q[k - 1]));
        }
        out.push(rep);
    }
    if matches!(suite, Suite::Dependent | Suite::All) {
        out.push(verify_dependent(&CumulantSequence::free_poisson(2 * order), order)?);
        let c = CumulantSequence::new((1..=2 * order as i64).map(|i| frac(i, i + 2)).collect());
        let mut rep = Report::new("dependent blocks: generic cumulants");
        rep.push_residual("ψ = R_ν̃(z(ψ+1)(ψ^(s)+1))", &dependent_residual(&c, order)?);
        out.push(rep);
    }
    if matches!(suite, Suite::Independent | Suite::All) {
        let c = CumulantSequence::new((1..=2 * order as i64 + 2).map(|i| frac(i + 1, 2 * i)).collect());
        for p in 1..=2 {
            let dims = [int(1), frac(1, 2), int(2)][..=p].to_vec();
            let m = ModelParams::uniform(p, dims, &LabelPattern::Distinct, c.clone())?;
            let mut rep = verify_s_factorization(&m, order)?;
            rep.name = format!("{} (p={p})", rep.name);
            out.push(rep);
        }
    }
    if matches!(suite, Suite::Hankel | Suite::All) {
        let mut rep = Report::new("Hankel positivity");
        let meixner = Distribution::from_cumulants(&free_meixner_even_cumulants(&int(2), &int(1), 4), 4)?;
        rep.push(
            "free Meixner ν̃ (a=2, b=1) fails at depth 2",
            !meixner.hankel_positive(2)?,
            format!("m1 = {}, m2 = {}", meixner.moment(1), meixner.moment(2)),
        );
        rep.push("semicircle passes to depth 3", Distribution::semicircle(6)?.hankel_positive(3)?, "");
        out.push(rep);
    }
    Ok(out)
}

fn opt(x: &Option<Rational>) -> String {
    x.as_ref().map_or_else(|| "-".to_string(), ToString::to_string)
}
