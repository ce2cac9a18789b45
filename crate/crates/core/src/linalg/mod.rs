//! Dense complex linear algebra used by the detectors and estimators.
//!
//! Complex matrices cross module boundaries as `ndarray` arrays; internally
//! the hot kernels work on a split real/imaginary column-major layout
//! ([`split::SplitMat`]) so the inner loops stay on plain `f64` slices and
//! large products route through `matrixmultiply`.

pub mod chol;
pub mod split;

pub use chol::Cholesky;
pub use split::{Op, SplitMat, SplitVec};

use crate::{CMat, C64};

/// `op(a) * op(b)` for ndarray complex matrices.
pub fn cgemm(op_a: Op, a: &CMat, op_b: Op, b: &CMat) -> CMat {
    let sa = SplitMat::from_cmat(a);
    let sb = SplitMat::from_cmat(b);
    let (m, _) = op_a.dims(sa.rows, sa.cols);
    let (_, n) = op_b.dims(sb.rows, sb.cols);
    let mut c = SplitMat::zeros(m, n);
    split::gemm(1.0, op_a, &sa, op_b, &sb, 0.0, &mut c);
    c.to_cmat()
}

/// Hermitian-symmetrize in place: `a <- (a + a^H)/2`.
pub fn hermitize(a: &mut CMat) {
    let n = a.nrows();
    debug_assert_eq!(n, a.ncols());
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (a[[i, j]] + a[[j, i]].conj());
            a[[i, j]] = v;
            a[[j, i]] = v.conj();
        }
        a[[i, i]] = C64::new(a[[i, i]].re, 0.0);
    }
}

/// Frobenius norm.
pub fn fro_norm(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;

    fn naive_mul(a: &CMat, b: &CMat) -> CMat {
        let (m, k) = a.dim();
        let n = b.ncols();
        let mut c = Array2::zeros((m, n));
        for i in 0..m {
            for j in 0..n {
                let mut acc = C64::new(0.0, 0.0);
                for t in 0..k {
                    acc += a[[i, t]] * b[[t, j]];
                }
                c[[i, j]] = acc;
            }
        }
        c
    }

    fn rand_mat(rows: usize, cols: usize, seed: u64) -> CMat {
        use rand::Rng;
        let mut rng = crate::rng::stream(seed, 0, "linalg-test");
        Array2::from_shape_fn((rows, cols), |_| {
            C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
        })
    }

    #[test]
    fn gemm_matches_naive() {
        let a = rand_mat(7, 5, 1);
        let b = rand_mat(5, 9, 2);
        let c = cgemm(Op::N, &a, Op::N, &b);
        let expect = naive_mul(&a, &b);
        for (x, y) in c.iter().zip(expect.iter()) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn gemm_adjoint_and_transpose() {
        let a = rand_mat(6, 4, 3);
        let b = rand_mat(6, 5, 4);
        let c = cgemm(Op::H, &a, Op::N, &b);
        let expect = naive_mul(&a.t().mapv(|z| z.conj()), &b);
        for (x, y) in c.iter().zip(expect.iter()) {
            assert!((x - y).norm() < 1e-12);
        }
        let bt = rand_mat(5, 6, 5);
        let c = cgemm(Op::N, &bt, Op::T, &a);
        let expect = naive_mul(&bt, &a.t().to_owned());
        for (x, y) in c.iter().zip(expect.iter()) {
            assert!((x - y).norm() < 1e-12);
        }
    }
}
