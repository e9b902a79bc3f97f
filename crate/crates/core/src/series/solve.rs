//! Functional equations for the moment series and their closed-form solutions.
//!
//! Independent blocks: `φ = d₁ψ_μ` solves `φ = R_ν̃(z (φ + d₁) ... (φ + d_{p+1}))`
//! where `ν̃ = ν̃₁ ⊠ ... ⊠ ν̃_p`, and Lagrange inversion gives
//! `m_k = d₁⁻¹ Σ_{r=1}^{k} P_{k,r}(d) T_{k,r}(t)`.
//!
//! Two dependent blocks of one matrix: `ψ = R_ν̃(z (ψ + 1)(ψ^{(s)} + 1))`,
//! with `m_k = Q_{2k}`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::model::{CumulantSequence, ModelParams};
use crate::moments::WeightedCount;
use crate::rational::{binomial, pow, Rational};
use crate::series::distribution::{cumulant_series, nu_tilde, Distribution};
use crate::series::fps::FormalPowerSeries;

fn require_independent(params: &ModelParams) -> Result<()> {
    params.validate()?;
    if !params.labels_distinct() {
        return Err(Error::InvalidModel(
            "labels: the series route needs pairwise distinct labels".into(),
        ));
    }
    Ok(())
}

/// `ν̃ = ν̃₁ ⊠ ... ⊠ ν̃_p` to order `K`; needs `r_1..r_{2K}` per label.
pub fn nu_tilde_product(params: &ModelParams, order: usize) -> Result<Distribution> {
    require_independent(params)?;
    let mut acc: Option<Distribution> = None;
    for j in 1..=params.p {
        let nj = nu_tilde(params.block_cumulants(j), order)?;
        acc = Some(match acc {
            None => nj,
            Some(a) => a.box_times(&nj)?,
        });
    }
    Ok(acc.expect("p >= 1"))
}

/// `z Π_j (φ + d_j)`.
fn argument(phi: &FormalPowerSeries, dims: &[Rational]) -> FormalPowerSeries {
    let order = phi.order();
    let mut acc = FormalPowerSeries::z(order);
    for d in dims {
        let mut f = phi.clone();
        f.set_coeff(0, &f.coeff(0) + d);
        acc = &acc * &f;
    }
    acc
}

/// `ψ_μ` to order `K` by coefficient recursion: the right-hand side has no
/// constant term, so `[z^n]` of it only involves `φ_1..φ_{n-1}`.
pub fn solve_psi_independent(params: &ModelParams, order: usize) -> Result<FormalPowerSeries> {
    let r = nu_tilde_product(params, order)?.r_transform()?;
    let mut phi = FormalPowerSeries::zero(order);
    for n in 1..=order {
        let lower = phi.truncate(n);
        let rhs = r.truncate(n).compose(&argument(&lower, &params.dims))?;
        phi.set_coeff(n, rhs.coeff(n));
    }
    Ok(phi.scale(&params.dims[0].recip()))
}

/// Same solution by fixed-point iteration of the whole series, `K` rounds from zero.
pub fn solve_psi_fixed_point(params: &ModelParams, order: usize) -> Result<FormalPowerSeries> {
    let r = nu_tilde_product(params, order)?.r_transform()?;
    let mut phi = FormalPowerSeries::zero(order);
    for _ in 0..order {
        phi = r.compose(&argument(&phi, &params.dims))?;
    }
    Ok(phi.scale(&params.dims[0].recip()))
}

/// `d₁ψ - R_ν̃(z Π_j (d₁ψ + d_j))` for a candidate `ψ`; zero to order `K` for the solution.
pub fn independent_residual(params: &ModelParams, psi: &FormalPowerSeries) -> Result<FormalPowerSeries> {
    let order = psi.order();
    let r = nu_tilde_product(params, order)?.r_transform()?;
    let phi = psi.scale(&params.dims[0]);
    Ok(&phi - &r.compose(&argument(&phi, &params.dims))?)
}

/// Calls `visit` on every `(j_1..j_parts)` with `0 ≤ j_i ≤ max` and `Σ j_i = total`.
pub fn for_each_bounded_composition(
    total: usize,
    parts: usize,
    max: usize,
    visit: &mut dyn FnMut(&[usize]),
) {
    fn rec(rest: usize, parts: usize, max: usize, cur: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if cur.len() + 1 == parts {
            if rest <= max {
                cur.push(rest);
                visit(cur);
                cur.pop();
            }
            return;
        }
        for j in 0..=rest.min(max) {
            cur.push(j);
            rec(rest - j, parts, max, cur, visit);
            cur.pop();
        }
    }
    if parts == 0 {
        if total == 0 {
            visit(&[]);
        }
        return;
    }
    rec(total, parts, max, &mut Vec::with_capacity(parts), visit);
}

/// `P_{k,r}(d) = Σ_{|𝐣| = kp + r} (1/k) Π_i binom(k, j_i) d_i^{j_i}`.
pub fn p_kr(k: usize, r: usize, dims: &[Rational]) -> Rational {
    let p = dims.len() - 1;
    let mut acc = Rational::zero();
    for_each_bounded_composition(k * p + r, p + 1, k, &mut |j| {
        let mut term = Rational::one();
        for (ji, d) in j.iter().zip(dims) {
            term *= Rational::from_integer(binomial(k as u64, *ji as u64)) * pow(d, *ji as u32);
        }
        acc += term;
    });
    acc / Rational::from_integer(k.into())
}

/// `T_{k,r} = Σ_{i_1 + ... + i_k = r - 1} t_{i_1} ... t_{i_k}`; needs `t_0..t_{r-1}`.
pub fn t_kr(k: usize, r: usize, t: &[Rational]) -> Result<Rational> {
    if t.len() < r {
        return Err(Error::TruncationTooShort { needed: r, available: t.len() });
    }
    let mut acc = Rational::zero();
    for_each_bounded_composition(r - 1, k, r - 1, &mut |i| {
        acc += i.iter().map(|&x| t[x].clone()).product::<Rational>();
    });
    Ok(acc)
}

/// `t_0..t_K` of `T_ν̃ = Π_i z / R^{-1}_{ν̃_i}(z)`; needs `r_1..r_{2K+2}` per label and `r_2 ≠ 0`.
pub fn t_coefficients(params: &ModelParams, order: usize) -> Result<Vec<Rational>> {
    require_independent(params)?;
    let mut acc = FormalPowerSeries::one(order);
    for j in 1..=params.p {
        let c = params.block_cumulants(j);
        c.require(2 * order + 2)?;
        let even: Vec<Rational> = (1..=order + 1).map(|n| c.values()[2 * n - 1].clone()).collect();
        let r = cumulant_series(&even, order + 1);
        let inv = r.compositional_inverse()?;
        acc = &acc * &inv.div_z()?.reciprocal()?;
    }
    Ok(acc.coeffs().to_vec())
}

/// `m_k = d₁⁻¹ Σ_{r=1}^{k} P_{k,r}(d) T_{k,r}(t)`.
pub fn moments_closed_form(params: &ModelParams, k: usize) -> Result<Rational> {
    if k == 0 {
        return Ok(Rational::one());
    }
    let t = t_coefficients(params, k - 1)?;
    let mut acc = Rational::zero();
    for r in 1..=k {
        acc += p_kr(k, r, &params.dims) * t_kr(k, r, &t)?;
    }
    Ok(acc / &params.dims[0])
}

/// Closed form resolved by monomial: `N_k(𝐣)` for `d₁^{j₁} ... d_{p+1}^{j_{p+1}}`.
pub fn closed_form_monomials(params: &ModelParams, k: usize) -> Result<WeightedCount> {
    let p = params.p;
    let t = t_coefficients(params, k.saturating_sub(1))?;
    let mut wc = WeightedCount::default();
    for r in 1..=k {
        let tkr = t_kr(k, r, &t)?;
        for_each_bounded_composition(k * p + r, p + 1, k, &mut |j| {
            let mut c = tkr.clone() / Rational::from_integer(k.into());
            for ji in j {
                c *= Rational::from_integer(binomial(k as u64, *ji as u64));
            }
            let mut e: Vec<u32> = j.iter().map(|&x| x as u32).collect();
            // |𝐣| = kp + r and every j_i ≤ k force j_1 ≥ r ≥ 1
            e[0] -= 1;
            wc.add(e, c);
        });
    }
    Ok(wc.normalized())
}

fn binom_or_zero(n: i64, k: i64) -> Rational {
    if k < 0 || n < 0 || k > n {
        Rational::zero()
    } else {
        Rational::from_integer(binomial(n as u64, k as u64))
    }
}

/// Gaussian case: `N_k(𝐣) = (1/k) binom(k, j_1 + 1) Π_{i≥2} binom(k, j_i)` for `|𝐣| = pk`, zero otherwise.
pub fn gaussian_count(k: usize, j: &[u32]) -> Rational {
    mixed_count(k, j, 0)
}

/// Mixed semicircle / free-Poisson case with `q` free-Poisson factors:
/// the Gaussian count times `binom(kq, |𝐣| - kp)`.
pub fn mixed_count(k: usize, j: &[u32], q: usize) -> Rational {
    let p = j.len() as i64 - 1;
    let k = k as i64;
    let total: i64 = j.iter().map(|&x| x as i64).sum();
    let mut c = binom_or_zero(k, j[0] as i64 + 1);
    for &ji in &j[1..] {
        c *= binom_or_zero(k, ji as i64);
    }
    c * binom_or_zero(k * q as i64, total - k * p) / Rational::from_integer(k.into())
}

/// `Q_0..Q_{n_max}` for two blocks of one matrix with cumulants `r`:
/// `Q_n = Σ_{k=1}^{n} r_{2k} [z^{n-k}] (Q(z) Q^{(s)}(z))^k`; needs `r_1..r_{2 n_max}`.
pub fn q_sequence(c: &CumulantSequence, n_max: usize) -> Result<Vec<Rational>> {
    c.require(2 * n_max)?;
    let mut q = vec![Rational::one()];
    for n in 1..=n_max {
        let known = FormalPowerSeries::new(q.clone());
        let x = &known * &known.even_part();
        let mut xk = FormalPowerSeries::one(n - 1);
        let mut qn = Rational::zero();
        for k in 1..=n {
            xk = &xk * &x;
            qn += c.get(2 * k)? * xk.coeff(n - k);
        }
        q.push(qn);
    }
    Ok(q)
}

/// `m_1..m_{k_max}` of `BB*` with `B = X_1 X_2` two square blocks of one matrix: `m_k = Q_{2k}`.
pub fn dependent_moments(c: &CumulantSequence, k_max: usize) -> Result<Vec<Rational>> {
    let q = q_sequence(c, 2 * k_max)?;
    Ok((1..=k_max).map(|k| q[2 * k].clone()).collect())
}
