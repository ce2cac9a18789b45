//! Split real/imaginary storage and the kernels built on it.

use crate::{CMat, C64};
use ndarray::Array2;

/// Operation applied to a matrix operand in [`gemm`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    /// Use the matrix as stored.
    N,
    /// Plain transpose.
    T,
    /// Conjugate transpose.
    H,
}

impl Op {
    /// Dimensions of `op(A)` given the storage dimensions of `A`.
    pub fn dims(self, rows: usize, cols: usize) -> (usize, usize) {
        match self {
            Op::N => (rows, cols),
            Op::T | Op::H => (cols, rows),
        }
    }

    fn strides(self, rows: usize) -> (isize, isize) {
        // Column-major storage: row stride 1, column stride = rows.
        match self {
            Op::N => (1, rows as isize),
            Op::T | Op::H => (rows as isize, 1),
        }
    }

    fn imag_sign(self) -> f64 {
        match self {
            Op::H => -1.0,
            _ => 1.0,
        }
    }
}

/// Complex matrix stored as two column-major `f64` buffers.
#[derive(Debug, Clone)]
pub struct SplitMat {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl SplitMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SplitMat {
            rows,
            cols,
            re: vec![0.0; rows * cols],
            im: vec![0.0; rows * cols],
        }
    }

    pub fn from_cmat(a: &CMat) -> Self {
        let (rows, cols) = a.dim();
        let mut m = SplitMat::zeros(rows, cols);
        for j in 0..cols {
            let base = j * rows;
            for i in 0..rows {
                let z = a[[i, j]];
                m.re[base + i] = z.re;
                m.im[base + i] = z.im;
            }
        }
        m
    }

    pub fn to_cmat(&self) -> CMat {
        Array2::from_shape_fn((self.rows, self.cols), |(i, j)| {
            let idx = j * self.rows + i;
            C64::new(self.re[idx], self.im[idx])
        })
    }

    #[inline]
    pub fn col(&self, j: usize) -> (&[f64], &[f64]) {
        let base = j * self.rows;
        (
            &self.re[base..base + self.rows],
            &self.im[base..base + self.rows],
        )
    }

    /// `y = A x` with `A` square or rectangular, `x.len() == cols`.
    pub fn gemv_into(&self, x: &SplitVec, y: &mut SplitVec) {
        debug_assert_eq!(x.len(), self.cols);
        debug_assert_eq!(y.len(), self.rows);
        y.re.fill(0.0);
        y.im.fill(0.0);
        for j in 0..self.cols {
            let (ar, ai) = self.col(j);
            let xr = x.re[j];
            let xi = x.im[j];
            if xr == 0.0 && xi == 0.0 {
                continue;
            }
            axpy_complex(xr, xi, ar, ai, &mut y.re, &mut y.im);
        }
    }

    /// `y = A x` where `x` is a column of another split matrix.
    pub fn gemv_cols_into(&self, x: (&[f64], &[f64]), y: &mut SplitVec) {
        debug_assert_eq!(x.0.len(), self.cols);
        y.re.fill(0.0);
        y.im.fill(0.0);
        for j in 0..self.cols {
            let (ar, ai) = self.col(j);
            let xr = x.0[j];
            let xi = x.1[j];
            axpy_complex(xr, xi, ar, ai, &mut y.re, &mut y.im);
        }
    }

    /// Hermitian rank-one update `A += c v v^H` with real `c`.
    pub fn rank1_herm_update(&mut self, c: f64, v: &SplitVec) {
        debug_assert_eq!(self.rows, self.cols);
        debug_assert_eq!(v.len(), self.rows);
        let n = self.rows;
        for j in 0..n {
            // c * conj(v_j)
            let alpha = c * v.re[j];
            let beta = c * v.im[j];
            let base = j * n;
            let (cr, ci) = (&mut self.re[base..base + n], &mut self.im[base..base + n]);
            for (((cr, ci), &vr), &vi) in cr
                .iter_mut()
                .zip(ci.iter_mut())
                .zip(v.re.iter())
                .zip(v.im.iter())
            {
                *cr += alpha * vr + beta * vi;
                *ci += alpha * vi - beta * vr;
            }
        }
    }
}

/// `y += (xr + i xi) * (ar + i ai)`, elementwise over slices.
#[inline]
fn axpy_complex(xr: f64, xi: f64, ar: &[f64], ai: &[f64], yr: &mut [f64], yi: &mut [f64]) {
    let n = ar.len();
    debug_assert!(ai.len() == n && yr.len() == n && yi.len() == n);
    for (((yr, yi), &ar), &ai) in yr
        .iter_mut()
        .zip(yi.iter_mut())
        .zip(ar.iter())
        .zip(ai.iter())
    {
        *yr += ar * xr - ai * xi;
        *yi += ar * xi + ai * xr;
    }
}

/// Complex vector in split storage.
#[derive(Debug, Clone)]
pub struct SplitVec {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl SplitVec {
    pub fn zeros(n: usize) -> Self {
        SplitVec {
            re: vec![0.0; n],
            im: vec![0.0; n],
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.re.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.re.is_empty()
    }
}

/// `Re(x^H y)` where `x` is given as column slices.
#[inline]
pub fn dot_re_conj(x: (&[f64], &[f64]), y: &SplitVec) -> f64 {
    let mut acc = 0.0;
    for (((&xr, &xi), &yr), &yi) in x
        .0
        .iter()
        .zip(x.1.iter())
        .zip(y.re.iter())
        .zip(y.im.iter())
    {
        acc += xr * yr + xi * yi;
    }
    acc
}

/// `Re(x^H y)` for two split vectors.
#[inline]
pub fn dot_re_conj_vv(x: &SplitVec, y: &SplitVec) -> f64 {
    dot_re_conj((&x.re, &x.im), y)
}

/// `C = alpha * op(A) op(B) + beta * C`, all operands split column-major.
pub fn gemm(alpha: f64, op_a: Op, a: &SplitMat, op_b: Op, b: &SplitMat, beta: f64, c: &mut SplitMat) {
    let (m, ka) = op_a.dims(a.rows, a.cols);
    let (kb, n) = op_b.dims(b.rows, b.cols);
    assert_eq!(ka, kb, "gemm inner dimensions");
    assert_eq!(c.rows, m, "gemm output rows");
    assert_eq!(c.cols, n, "gemm output cols");
    let k = ka;
    let (rsa, csa) = op_a.strides(a.rows);
    let (rsb, csb) = op_b.strides(b.rows);
    let sa = op_a.imag_sign();
    let sb = op_b.imag_sign();
    let (rsc, csc) = (1isize, m as isize);
    unsafe {
        use matrixmultiply::dgemm;
        // C_re = alpha (Ar Br - sa sb Ai Bi) + beta C_re
        dgemm(
            m, k, n, alpha, a.re.as_ptr(), rsa, csa, b.re.as_ptr(), rsb, csb, beta,
            c.re.as_mut_ptr(), rsc, csc,
        );
        dgemm(
            m, k, n, -alpha * sa * sb, a.im.as_ptr(), rsa, csa, b.im.as_ptr(), rsb, csb, 1.0,
            c.re.as_mut_ptr(), rsc, csc,
        );
        // C_im = alpha (sb Ar Bi + sa Ai Br) + beta C_im
        dgemm(
            m, k, n, alpha * sb, a.re.as_ptr(), rsa, csa, b.im.as_ptr(), rsb, csb, beta,
            c.im.as_mut_ptr(), rsc, csc,
        );
        dgemm(
            m, k, n, alpha * sa, a.im.as_ptr(), rsa, csa, b.re.as_ptr(), rsb, csb, 1.0,
            c.im.as_mut_ptr(), rsc, csc,
        );
    }
}
