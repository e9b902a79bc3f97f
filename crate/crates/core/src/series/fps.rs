//! Formal power series with exact rational coefficients, truncated at order `K`.
//!
//! Every binary operation truncates to the smaller order of its operands.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// `Σ_{i=0}^{K} c_i z^i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormalPowerSeries {
    coeffs: Vec<Rational>,
}

impl FormalPowerSeries {
    /// Coefficients `c_0..=c_K`; must be nonempty.
    pub fn new(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least the constant term");
        FormalPowerSeries { coeffs }
    }

    /// Pads or cuts `coeffs` to order `order`.
    pub fn from_coeffs(mut coeffs: Vec<Rational>, order: usize) -> Self {
        coeffs.resize(order + 1, Rational::zero());
        FormalPowerSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        FormalPowerSeries { coeffs: vec![Rational::zero(); order + 1] }
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    /// The series `z`.
    pub fn z(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = Rational::one();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// `c_i`, zero beyond the stored order.
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn set_coeff(&mut self, i: usize, c: Rational) {
        self.coeffs[i] = c;
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_coeffs(self.coeffs[..=order.min(self.order())].to_vec(), order)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        FormalPowerSeries { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// `f(z) -> f(s z)`.
    pub fn scale_argument(&self, s: &Rational) -> Self {
        let mut pw = Rational::one();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            coeffs.push(c * &pw);
            pw *= s;
        }
        FormalPowerSeries { coeffs }
    }

    /// `z f(z)`, same order.
    pub fn mul_z(&self) -> Self {
        let mut coeffs = vec![Rational::zero()];
        coeffs.extend_from_slice(&self.coeffs[..self.order()]);
        FormalPowerSeries { coeffs }
    }

    /// `f(z) / z`; needs `c_0 = 0` and loses one order.
    pub fn div_z(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::SeriesPrecondition("division by z needs a zero constant term".into()));
        }
        if self.order() == 0 {
            return Err(Error::SeriesPrecondition("division by z of an order-0 series".into()));
        }
        Ok(FormalPowerSeries { coeffs: self.coeffs[1..].to_vec() })
    }

    pub fn mul_trunc(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut out = vec![Rational::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                out[i + j] += a * b;
            }
        }
        FormalPowerSeries { coeffs: out }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.order());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_trunc(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_trunc(&base);
            }
        }
        acc
    }

    /// `1 / f`; needs `c_0 ≠ 0`.
    pub fn reciprocal(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::SeriesPrecondition("reciprocal needs a nonzero constant term".into()));
        }
        let inv0 = c0.recip();
        let mut g = vec![Rational::zero(); self.coeffs.len()];
        g[0] = inv0.clone();
        for n in 1..g.len() {
            let mut s = Rational::zero();
            for i in 1..=n {
                s += &self.coeffs[i] * &g[n - i];
            }
            g[n] = -s * &inv0;
        }
        Ok(FormalPowerSeries { coeffs: g })
    }

    /// `f(g(z))`; needs `g(0) = 0`. Horner scheme, order `min` of both.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::SeriesPrecondition("inner series of a composition needs g(0) = 0".into()));
        }
        let order = self.order().min(inner.order());
        let inner = inner.truncate(order);
        let mut acc = Self::constant(self.coeff(order), order);
        for i in (0..order).rev() {
            acc = acc.mul_trunc(&inner);
            acc.coeffs[0] += &self.coeffs[i];
        }
        Ok(acc)
    }

    /// `g` with `f(g(z)) = g(f(z)) = z`, by Lagrange inversion:
    /// `[z^k] g = (1/k) [w^{k-1}] φ(w)^k` with `φ(w) = w / f(w)`.
    pub fn compositional_inverse(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::SeriesPrecondition("inverse needs f(0) = 0".into()));
        }
        let order = self.order();
        if order == 0 {
            return Ok(Self::zero(0));
        }
        if self.coeffs[1].is_zero() {
            return Err(Error::SeriesPrecondition("inverse needs f'(0) ≠ 0".into()));
        }
        let phi = self.div_z()?.reciprocal()?;
        let mut g = Self::zero(order);
        let mut phik = Self::one(phi.order());
        for k in 1..=order {
            phik = phik.mul_trunc(&phi);
            g.coeffs[k] = phik.coeff(k - 1) / Rational::from_integer(k.into());
        }
        Ok(g)
    }

    /// Even part `Σ c_{2i} z^{2i}`.
    pub fn even_part(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 0 { c.clone() } else { Rational::zero() })
            .collect();
        FormalPowerSeries { coeffs }
    }

    pub fn odd_part(&self) -> Self {
        self - &self.even_part()
    }
}

impl Add for &FormalPowerSeries {
    type Output = FormalPowerSeries;

    fn add(self, rhs: Self) -> FormalPowerSeries {
        let order = self.order().min(rhs.order());
        let coeffs = (0..=order).map(|i| &self.coeffs[i] + &rhs.coeffs[i]).collect();
        FormalPowerSeries { coeffs }
    }
}

impl Sub for &FormalPowerSeries {
    type Output = FormalPowerSeries;

    fn sub(self, rhs: Self) -> FormalPowerSeries {
        let order = self.order().min(rhs.order());
        let coeffs = (0..=order).map(|i| &self.coeffs[i] - &rhs.coeffs[i]).collect();
        FormalPowerSeries { coeffs }
    }
}

impl Mul for &FormalPowerSeries {
    type Output = FormalPowerSeries;

    fn mul(self, rhs: Self) -> FormalPowerSeries {
        self.mul_trunc(rhs)
    }
}

impl Neg for &FormalPowerSeries {
    type Output = FormalPowerSeries;

    fn neg(self) -> FormalPowerSeries {
        FormalPowerSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl fmt::Display for FormalPowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{i}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(z^{})", self.order() + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn s(v: &[i64]) -> FormalPowerSeries {
        FormalPowerSeries::new(v.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn reciprocal_of_one_minus_z() {
        let g = s(&[1, -1, 0, 0, 0]).reciprocal().unwrap();
        assert_eq!(g, s(&[1, 1, 1, 1, 1]));
        assert!(s(&[0, 1]).reciprocal().is_err());
    }

    #[test]
    fn inverse_of_identity_and_geometric() {
        assert_eq!(FormalPowerSeries::z(6).compositional_inverse().unwrap(), FormalPowerSeries::z(6));
        // z / (1 - z) inverts to z / (1 + z)
        let f = s(&[0, 1, 1, 1, 1, 1, 1]);
        assert_eq!(f.compositional_inverse().unwrap(), s(&[0, 1, -1, 1, -1, 1, -1]));
        assert!(s(&[1, 1]).compositional_inverse().is_err());
        assert!(s(&[0, 0, 1]).compositional_inverse().is_err());
    }

    #[test]
    fn composition_with_inverse_is_identity() {
        let f = FormalPowerSeries::new(vec![int(0), frac(2, 3), int(-1), frac(5, 2), int(7), frac(-1, 9)]);
        let g = f.compositional_inverse().unwrap();
        assert_eq!(f.compose(&g).unwrap(), FormalPowerSeries::z(5));
        assert_eq!(g.compose(&f).unwrap(), FormalPowerSeries::z(5));
    }

    #[test]
    fn powers_and_parts() {
        let f = s(&[1, 1, 0, 0, 0]);
        assert_eq!(f.pow(3), s(&[1, 3, 3, 1, 0]));
        assert_eq!(f.pow(0), s(&[1, 0, 0, 0, 0]));
        let g = s(&[1, 2, 3, 4]);
        assert_eq!(g.even_part(), s(&[1, 0, 3, 0]));
        assert_eq!(&g.even_part() + &g.odd_part(), g);
        assert_eq!(g.scale_argument(&int(2)), s(&[1, 4, 12, 32]));
        assert_eq!(g.mul_z(), s(&[0, 1, 2, 3]));
        assert_eq!(s(&[0, 1, 2]).div_z().unwrap(), s(&[1, 2]));
    }
}
