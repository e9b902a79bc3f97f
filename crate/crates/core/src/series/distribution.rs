//! Distributions as truncated moment sequences, with the S- and T-transforms,
//! free multiplicative convolution and the `U_s`, `V_s` maps.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::CumulantSequence;
use crate::rational::{binomial, int, is_positive, pow, Rational};
use crate::series::fps::FormalPowerSeries;

/// Moments `m_1..m_K` of a (possibly only formal) distribution; `m_0 = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Distribution {
    moments: Vec<Rational>,
}

impl Distribution {
    /// From `m_1..m_K`.
    pub fn from_moments(moments: Vec<Rational>) -> Self {
        Distribution { moments }
    }

    /// From free cumulants via `M(z) = 1 + R(z M(z))`; needs `r_1..r_K`.
    pub fn from_cumulants(c: &CumulantSequence, order: usize) -> Result<Self> {
        c.require(order)?;
        let r = cumulant_series(&c.values()[..order], order);
        let one = FormalPowerSeries::one(order);
        let mut m = one.clone();
        // each pass fixes one more coefficient
        for _ in 0..order {
            m = &one + &r.compose(&m.mul_z())?;
        }
        Ok(Distribution { moments: m.coeffs()[1..].to_vec() })
    }

    pub fn order(&self) -> usize {
        self.moments.len()
    }

    /// `m_1..m_K`.
    pub fn moments(&self) -> &[Rational] {
        &self.moments
    }

    /// `m_n`, with `m_0 = 1`.
    pub fn moment(&self, n: usize) -> Rational {
        if n == 0 {
            Rational::one()
        } else {
            self.moments[n - 1].clone()
        }
    }

    pub fn truncate(&self, order: usize) -> Self {
        Distribution { moments: self.moments[..order.min(self.order())].to_vec() }
    }

    /// `M(z) = Σ_{n≥0} m_n z^n`.
    pub fn moment_series(&self) -> FormalPowerSeries {
        let mut c = vec![Rational::one()];
        c.extend_from_slice(&self.moments);
        FormalPowerSeries::new(c)
    }

    /// `ψ(z) = M(z) - 1`.
    pub fn psi(&self) -> FormalPowerSeries {
        let mut c = vec![Rational::zero()];
        c.extend_from_slice(&self.moments);
        FormalPowerSeries::new(c)
    }

    /// Free cumulants `r_1..r_K` from `R(w) = (M - 1)(h^{-1}(w))`, `h = z M(z)`.
    pub fn cumulants(&self) -> Result<CumulantSequence> {
        let order = self.order();
        if order == 0 {
            return Ok(CumulantSequence::new(Vec::new()));
        }
        let h = self.moment_series().mul_z();
        let r = self.psi().compose(&h.compositional_inverse()?)?;
        Ok(CumulantSequence::new(r.coeffs()[1..].to_vec()))
    }

    /// `R(z) = Σ_{n≥1} r_n z^n`, order `K`.
    pub fn r_transform(&self) -> Result<FormalPowerSeries> {
        let c = self.cumulants()?;
        Ok(cumulant_series(c.values(), self.order()))
    }

    /// `S(z) = (1 + z)/z · ψ^{-1}(z)`, of order `K - 1`; needs `m_1 ≠ 0`.
    pub fn s_transform(&self) -> Result<FormalPowerSeries> {
        if self.moments.first().is_none_or(Zero::is_zero) {
            return Err(Error::SeriesPrecondition("S-transform needs m_1 ≠ 0".into()));
        }
        let inv = self.psi().compositional_inverse()?.div_z()?;
        let one_plus_z = FormalPowerSeries::from_coeffs(vec![int(1), int(1)], inv.order());
        Ok(&inv * &one_plus_z)
    }

    /// `T = 1 / S`, of order `K - 1`.
    pub fn t_transform(&self) -> Result<FormalPowerSeries> {
        self.s_transform()?.reciprocal()
    }

    /// Inverse of [`s_transform`](Self::s_transform): an order-`(K-1)` S-series gives `K` moments,
    /// through `ψ^{-1}(z) = z S(z) / (1 + z)`.
    pub fn from_s_transform(s: &FormalPowerSeries) -> Result<Self> {
        let order = s.order() + 1;
        if s.coeff(0).is_zero() {
            return Err(Error::SeriesPrecondition("S-transform needs S(0) ≠ 0".into()));
        }
        let mut c = vec![Rational::zero()];
        c.extend_from_slice(s.coeffs());
        let zs = FormalPowerSeries::new(c);
        let one_plus_z = FormalPowerSeries::from_coeffs(vec![int(1), int(1)], order);
        let psi_inv = &zs * &one_plus_z.reciprocal()?;
        let psi = psi_inv.compositional_inverse()?;
        Ok(Distribution { moments: psi.coeffs()[1..].to_vec() })
    }

    /// `a ⊠ b` through `S_{a⊠b} = S_a S_b`.
    pub fn box_times(&self, other: &Self) -> Result<Self> {
        let s = &self.s_transform()? * &other.s_transform()?;
        Self::from_s_transform(&s)
    }

    /// `U_s`: from `G_{U_s μ} = s G_μ + (1 - s)/z`, i.e. `m_k -> s m_k` for `k ≥ 1`.
    pub fn u_transform(&self, s: &Rational) -> Result<Self> {
        check_positive(s)?;
        Ok(Distribution { moments: self.moments.iter().map(|m| m * s).collect() })
    }

    /// `V_s`: `S_{V_s μ}(z) = S_μ(z / s)`.
    pub fn v_transform(&self, s: &Rational) -> Result<Self> {
        check_positive(s)?;
        Self::from_s_transform(&self.s_transform()?.scale_argument(&s.recip()))
    }

    /// Dirac mass at `a`: `m_k = a^k`.
    pub fn point_mass(a: &Rational, order: usize) -> Self {
        Distribution { moments: (1..=order as u32).map(|k| pow(a, k)).collect() }
    }

    /// Marchenko-Pastur law `ρ_t`: every free cumulant equals `t`.
    pub fn marchenko_pastur(t: &Rational, order: usize) -> Result<Self> {
        Self::from_cumulants(&CumulantSequence::marchenko_pastur(t.clone(), order), order)
    }

    pub fn semicircle(order: usize) -> Result<Self> {
        Self::from_cumulants(&CumulantSequence::semicircle(order), order)
    }

    /// `m_{i+j}` Hankel positivity: every leading principal minor of order `1..=depth` is `≥ 0`.
    pub fn hankel_positive(&self, depth: usize) -> Result<bool> {
        let needed = (2 * depth).saturating_sub(2);
        if needed > self.order() {
            return Err(Error::TruncationTooShort { needed, available: self.order() });
        }
        let m: Vec<Rational> = (0..=self.order()).map(|n| self.moment(n)).collect();
        Ok(hankel_positive(&m, depth))
    }
}

fn check_positive(s: &Rational) -> Result<()> {
    if !is_positive(s) {
        return Err(Error::SeriesPrecondition(format!("scale {s} must be positive")));
    }
    Ok(())
}

/// `Σ_{n=1}^{K} r_n z^n` from `r_1, r_2, ...` (missing entries are zero).
pub fn cumulant_series(r: &[Rational], order: usize) -> FormalPowerSeries {
    let mut c = vec![Rational::zero()];
    c.extend(r.iter().take(order).cloned());
    FormalPowerSeries::from_coeffs(c, order)
}

/// `ν̃`: the distribution whose `n`-th free cumulant is `r_{2n}(ν)`; needs `r_1..r_{2K}`.
pub fn nu_tilde(c: &CumulantSequence, order: usize) -> Result<Distribution> {
    c.require(2 * order)?;
    let even: Vec<Rational> = (1..=order).map(|n| c.values()[2 * n - 1].clone()).collect();
    Distribution::from_cumulants(&CumulantSequence::new(even), order)
}

/// Even free cumulants `r_2, r_4, ..., r_{2n}` of the free Meixner law,
/// `r_{2n} = a (b - a)^{n-1} / n · binom(2n - 2, n - 1)`; these are the cumulants of `ν̃`.
pub fn free_meixner_even_cumulants(a: &Rational, b: &Rational, n: usize) -> CumulantSequence {
    let ba = b - a;
    let values = (1..=n as u64)
        .map(|k| {
            a * pow(&ba, (k - 1) as u32) * Rational::from_integer(binomial(2 * k - 2, k - 1))
                / Rational::from_integer(k.into())
        })
        .collect();
    CumulantSequence::new(values)
}

/// Hankel check on `m_0, m_1, ...`: all leading principal minors of `(m_{i+j})` up to `depth` are `≥ 0`.
pub fn hankel_positive(moments: &[Rational], depth: usize) -> bool {
    (1..=depth).all(|d| !determinant(hankel(moments, d)).is_negative())
}

fn hankel(m: &[Rational], d: usize) -> Vec<Vec<Rational>> {
    (0..d).map(|i| (0..d).map(|j| m[i + j].clone()).collect()).collect()
}

/// Exact determinant by fraction-field Gaussian elimination.
pub fn determinant(mut a: Vec<Vec<Rational>>) -> Rational {
    let n = a.len();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            for c in col..n {
                let v = &f * &a[col][c];
                a[r][c] -= v;
            }
        }
    }
    det
}
