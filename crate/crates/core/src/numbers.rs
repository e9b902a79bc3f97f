//! Catalan, Fuss-Catalan and Raney numbers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::rational::{binomial, generalized_binomial, int, Rational};

/// `C_n = binom(2n, n) / (n + 1)`.
pub fn catalan(n: u64) -> BigInt {
    binomial(2 * n, n) / BigInt::from(n + 1)
}

/// `F_k(p) = (1/k) binom((p+1)k, pk+1)`, with `F_0(p) = 1`.
pub fn fuss_catalan(k: u64, p: u64) -> Rational {
    if k == 0 {
        return Rational::one();
    }
    BigRational::new(binomial((p + 1) * k, p * k + 1), BigInt::from(k))
}

/// `R_n(p, r) = r / ((p+1)n + r) * binom((p+1)n + r, n)` with the generalized
/// binomial, so half-integer `r` stays exact.
pub fn raney(n: u64, p: u64, r: &Rational) -> Rational {
    if n == 0 {
        return Rational::one();
    }
    let top = int(((p + 1) * n) as i64) + r;
    r / &top * generalized_binomial(&top, n)
}
