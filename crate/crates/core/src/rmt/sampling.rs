//! Random matrix samplers.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::rmt::cmatrix::CMatrix;

/// Haar unitary: QR of a complex Ginibre matrix with `Q ← Q diag(R_ii / |R_ii|)`.
pub fn sample_haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<Complex64> {
    let g = DMatrix::from_fn(n, n, |_, _| {
        let (x, y): (f64, f64) = (rng.sample(StandardNormal), rng.sample(StandardNormal));
        Complex64::new(x, y) * std::f64::consts::FRAC_1_SQRT_2
    });
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// GUE with `E|Y_ij|² = 1 / n_ref`: off-diagonal `(x + iy)/√(2 n_ref)`, diagonal `x/√n_ref`.
pub fn sample_gue<R: Rng + ?Sized>(n: usize, n_ref: f64, rng: &mut R) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    let off = (2.0 * n_ref).sqrt().recip();
    let diag = n_ref.sqrt().recip();
    for i in 0..n {
        m.re[(i, i)] = rng.sample::<f64, _>(StandardNormal) * diag;
        for j in i + 1..n {
            let x = rng.sample::<f64, _>(StandardNormal) * off;
            let y = rng.sample::<f64, _>(StandardNormal) * off;
            m.re[(i, j)] = x;
            m.im[(i, j)] = y;
            m.re[(j, i)] = x;
            m.im[(j, i)] = -y;
        }
    }
    m
}

/// Complex Wishart `H H*`, `H` of size `n × cols` with `E|H_ij|² = 1 / n_ref`.
pub fn sample_wishart<R: Rng + ?Sized>(n: usize, cols: usize, n_ref: f64, rng: &mut R) -> CMatrix {
    let s = (2.0 * n_ref).sqrt().recip();
    let mut h = CMatrix::zeros(n, cols);
    for j in 0..cols {
        for i in 0..n {
            h.re[(i, j)] = rng.sample::<f64, _>(StandardNormal) * s;
            h.im[(i, j)] = rng.sample::<f64, _>(StandardNormal) * s;
        }
    }
    let mut y = h.mul_adjoint(&h);
    // exact symmetry for downstream checks
    for i in 0..n {
        y.im[(i, i)] = 0.0;
        for j in i + 1..n {
            y.re[(j, i)] = y.re[(i, j)];
            y.im[(j, i)] = -y.im[(i, j)];
        }
    }
    y
}

/// `U diag(λ) U*` with a fresh Haar unitary.
pub fn sample_invariant<R: Rng + ?Sized>(eigenvalues: &[f64], rng: &mut R) -> CMatrix {
    let n = eigenvalues.len();
    let u = CMatrix::from_complex(&sample_haar_unitary(n, rng));
    let mut y = u.scale_columns(eigenvalues).mul_adjoint(&u);
    for i in 0..n {
        y.im[(i, i)] = 0.0;
        for j in i + 1..n {
            let (re, im) = (0.5 * (y.re[(i, j)] + y.re[(j, i)]), 0.5 * (y.im[(i, j)] - y.im[(j, i)]));
            y.re[(i, j)] = re;
            y.re[(j, i)] = re;
            y.im[(i, j)] = im;
            y.im[(j, i)] = -im;
        }
    }
    y
}

/// One draw from the Marchenko-Pastur law of rate `t`: an atom at 0 of mass
/// `max(0, 1 - t)` plus density `√((b - x)(x - a)) / (2πx)` on `[a, b]`,
/// `a, b = (1 ∓ √t)²`. Rejection sampling in `y = √x`, where the density is
/// proportional to `√((b - y²)(y² - a)) / y`, bounded by `√b - √a`.
pub fn sample_marchenko_pastur<R: Rng + ?Sized>(t: f64, rng: &mut R) -> f64 {
    if t < 1.0 && rng.random::<f64>() < 1.0 - t {
        return 0.0;
    }
    let (ra, rb) = ((1.0 - t.sqrt()).abs(), 1.0 + t.sqrt());
    let (a, b) = (ra * ra, rb * rb);
    let bound = rb - ra;
    loop {
        let y = ra + (rb - ra) * rng.random::<f64>();
        let y2 = y * y;
        let g = if y > 0.0 { ((b - y2) * (y2 - a)).max(0.0).sqrt() / y } else { bound };
        if rng.random::<f64>() * bound <= g {
            return y2;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn haar_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let u = sample_haar_unitary(24, &mut rng);
        let id = DMatrix::<Complex64>::identity(24, 24);
        assert!((&u * u.adjoint() - &id).norm() < 1e-10);
        assert!((u.determinant().norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn haar_first_entry_has_mean_one_over_n() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 8;
        let xs: Vec<f64> = (0..4000).map(|_| sample_haar_unitary(n, &mut rng)[(0, 0)].norm_sqr()).collect();
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
        let se = (var / xs.len() as f64).sqrt();
        assert!((mean - 1.0 / n as f64).abs() < 4.0 * se, "mean {mean} se {se}");
    }

    #[test]
    fn gue_is_hermitian_with_unit_second_moment() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 512;
        let y = sample_gue(n, n as f64, &mut rng);
        assert!(y.hermitian_defect() < 1e-12);
        let m2 = y.mul(&y).trace().re / n as f64;
        assert!((m2 - 1.0).abs() < 0.05, "m2 = {m2}");
    }

    #[test]
    fn constant_spectrum_gives_scalar_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let y = sample_invariant(&[2.5; 16], &mut rng);
        let want = CMatrix::identity(16).scale(2.5);
        assert!((&y.re - &want.re).abs().max() < 1e-12);
        assert!(y.im.abs().max() < 1e-12);
    }

    #[test]
    fn marchenko_pastur_draws_have_mean_t() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for t in [0.5, 1.0, 2.0] {
            let xs: Vec<f64> = (0..40000).map(|_| sample_marchenko_pastur(t, &mut rng)).collect();
            let mean = xs.iter().sum::<f64>() / xs.len() as f64;
            let m2 = xs.iter().map(|x| x * x).sum::<f64>() / xs.len() as f64;
            // free cumulants all t: m1 = t, m2 = t + t²
            assert!((mean - t).abs() < 0.03 * t.max(1.0), "t={t} mean={mean}");
            assert!((m2 - t - t * t).abs() < 0.05 * (t + t * t), "t={t} m2={m2}");
        }
    }
}
