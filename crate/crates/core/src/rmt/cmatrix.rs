//! Dense complex matrices stored as a real and an imaginary `f64` part.
//!
//! Keeping the parts separate lets every product run through the real GEMM
//! kernel (four real multiplications per complex one).

use nalgebra::DMatrix;
use num_complex::Complex64;

#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    pub re: DMatrix<f64>,
    pub im: DMatrix<f64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix { re: DMatrix::zeros(rows, cols), im: DMatrix::zeros(rows, cols) }
    }

    pub fn identity(n: usize) -> Self {
        CMatrix { re: DMatrix::identity(n, n), im: DMatrix::zeros(n, n) }
    }

    pub fn from_complex(m: &DMatrix<Complex64>) -> Self {
        CMatrix { re: m.map(|z| z.re), im: m.map(|z| z.im) }
    }

    pub fn to_complex(&self) -> DMatrix<Complex64> {
        self.re.zip_map(&self.im, Complex64::new)
    }

    pub fn nrows(&self) -> usize {
        self.re.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.re.ncols()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        Complex64::new(self.re[(i, j)], self.im[(i, j)])
    }

    pub fn mul(&self, rhs: &CMatrix) -> CMatrix {
        let re = &self.re * &rhs.re - &self.im * &rhs.im;
        let im = &self.re * &rhs.im + &self.im * &rhs.re;
        CMatrix { re, im }
    }

    /// `self · rhs*`.
    pub fn mul_adjoint(&self, rhs: &CMatrix) -> CMatrix {
        let (rt, it) = (rhs.re.transpose(), rhs.im.transpose());
        let re = &self.re * &rt + &self.im * &it;
        let im = &self.im * &rt - &self.re * &it;
        CMatrix { re, im }
    }

    pub fn adjoint(&self) -> CMatrix {
        CMatrix { re: self.re.transpose(), im: -self.im.transpose() }
    }

    pub fn scale(&self, s: f64) -> CMatrix {
        CMatrix { re: &self.re * s, im: &self.im * s }
    }

    /// Multiplies column `j` by `d[j]`.
    pub fn scale_columns(&self, d: &[f64]) -> CMatrix {
        let mut out = self.clone();
        for (j, &s) in d.iter().enumerate() {
            out.re.column_mut(j).scale_mut(s);
            out.im.column_mut(j).scale_mut(s);
        }
        out
    }

    /// Rows `r0..r0+rows`, columns `c0..c0+cols`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> CMatrix {
        CMatrix {
            re: self.re.view((r0, c0), (rows, cols)).into_owned(),
            im: self.im.view((r0, c0), (rows, cols)).into_owned(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        Complex64::new(self.re.trace(), self.im.trace())
    }

    /// `max |a_ij - conj(a_ji)|`.
    pub fn hermitian_defect(&self) -> f64 {
        let dr = (&self.re - self.re.transpose()).abs().max();
        let di = (&self.im + self.im.transpose()).abs().max();
        dr.max(di)
    }
}
