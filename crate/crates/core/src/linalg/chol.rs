//! Cholesky factorization of complex Hermitian positive-definite matrices.

use crate::error::{Error, Result};
use crate::{CMat, C64};
use ndarray::Array2;

/// Lower-triangular factor `L` with `A = L L^H`.
#[derive(Debug, Clone)]
pub struct Cholesky {
    l: Vec<C64>, // row-major n x n, upper part zeroed
    n: usize,
}

impl Cholesky {
    /// Factor a Hermitian positive-definite matrix.
    pub fn factor(a: &CMat) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(Error::Shape(format!(
                "cholesky needs a square matrix, got {}x{}",
                n,
                a.ncols()
            )));
        }
        let mut l: Vec<C64> = a.iter().copied().collect();
        debug_assert!(a.is_standard_layout());
        for j in 0..n {
            let mut d = l[j * n + j].re;
            for k in 0..j {
                d -= l[j * n + k].norm_sqr();
            }
            if !(d > 0.0) || !d.is_finite() {
                return Err(Error::Numerical(format!(
                    "matrix not positive definite at pivot {j} (d = {d})"
                )));
            }
            let dj = d.sqrt();
            l[j * n + j] = C64::new(dj, 0.0);
            for i in (j + 1)..n {
                let mut acc = l[i * n + j];
                let (ri, rj) = (i * n, j * n);
                for k in 0..j {
                    acc -= l[ri + k] * l[rj + k].conj();
                }
                l[ri + j] = acc / dj;
            }
        }
        // Zero the strictly upper part so reconstruction is unambiguous.
        for i in 0..n {
            for j in (i + 1)..n {
                l[i * n + j] = C64::new(0.0, 0.0);
            }
        }
        Ok(Cholesky { l, n })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Natural log-determinant of the factored matrix.
    pub fn ln_det(&self) -> f64 {
        (0..self.n).map(|j| 2.0 * self.l[j * self.n + j].re.ln()).sum()
    }

    /// Solve `A x = b` in place.
    pub fn solve_in_place(&self, b: &mut [C64]) {
        let n = self.n;
        debug_assert_eq!(b.len(), n);
        // L y = b
        for i in 0..n {
            let mut acc = b[i];
            for k in 0..i {
                acc -= self.l[i * n + k] * b[k];
            }
            b[i] = acc / self.l[i * n + i].re;
        }
        // L^H x = y
        for i in (0..n).rev() {
            let mut acc = b[i];
            for k in (i + 1)..n {
                acc -= self.l[k * n + i].conj() * b[k];
            }
            b[i] = acc / self.l[i * n + i].re;
        }
    }

    /// Solve `A X = B` column by column.
    pub fn solve_mat(&self, b: &CMat) -> CMat {
        let n = self.n;
        debug_assert_eq!(b.nrows(), n);
        let mut out = b.clone();
        let cols = b.ncols();
        let mut buf = vec![C64::new(0.0, 0.0); n];
        for j in 0..cols {
            for i in 0..n {
                buf[i] = out[[i, j]];
            }
            self.solve_in_place(&mut buf);
            for i in 0..n {
                out[[i, j]] = buf[i];
            }
        }
        out
    }

    /// Full inverse of the factored matrix.
    pub fn inverse(&self) -> CMat {
        let n = self.n;
        let eye = Array2::from_shape_fn((n, n), |(i, j)| {
            if i == j {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        self.solve_mat(&eye)
    }

    /// `tr(A^{-1} B)` for a Hermitian `B`.
    pub fn trace_solve(&self, b: &CMat) -> f64 {
        let x = self.solve_mat(b);
        (0..self.n).map(|i| x[[i, i]].re).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{cgemm, Op};
    use rand::Rng;

    fn random_hpd(n: usize, seed: u64) -> CMat {
        let mut rng = crate::rng::stream(seed, 0, "chol-test");
        let b = Array2::from_shape_fn((n, n), |_| {
            C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
        });
        let mut a = cgemm(Op::N, &b, Op::H, &b);
        for i in 0..n {
            a[[i, i]] += C64::new(0.5, 0.0);
        }
        a
    }

    #[test]
    fn factor_reconstructs() {
        let a = random_hpd(6, 1);
        let ch = Cholesky::factor(&a).unwrap();
        let lm = Array2::from_shape_fn((6, 6), |(i, j)| ch.l[i * 6 + j]);
        let rec = cgemm(Op::N, &lm, Op::H, &lm);
        for (x, y) in rec.iter().zip(a.iter()) {
            assert!((x - y).norm() < 1e-10);
        }
    }

    #[test]
    fn solve_and_inverse() {
        let a = random_hpd(5, 2);
        let ch = Cholesky::factor(&a).unwrap();
        let inv = ch.inverse();
        let prod = cgemm(Op::N, &a, Op::N, &inv);
        for i in 0..5 {
            for j in 0..5 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((prod[[i, j]] - C64::new(expect, 0.0)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn ln_det_matches_diagonal_case() {
        let mut a = CMat::zeros((3, 3));
        a[[0, 0]] = C64::new(2.0, 0.0);
        a[[1, 1]] = C64::new(0.5, 0.0);
        a[[2, 2]] = C64::new(4.0, 0.0);
        let ch = Cholesky::factor(&a).unwrap();
        assert!((ch.ln_det() - (2.0f64 * 0.5 * 4.0).ln()).abs() < 1e-12);
    }

    #[test]
    fn rejects_indefinite() {
        let mut a = CMat::zeros((2, 2));
        a[[0, 0]] = C64::new(1.0, 0.0);
        a[[1, 1]] = C64::new(-1.0, 0.0);
        assert!(Cholesky::factor(&a).is_err());
    }
}
