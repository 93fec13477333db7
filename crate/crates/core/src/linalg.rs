//! Dense and block-tridiagonal complex linear solvers.
//!
//! The constants systems are at most 10x10, so a plain LU with partial
//! pivoting is all that is needed. The finite-difference oracle uses the
//! block-tridiagonal solver with one dense LU per diagonal block.

use crate::{c64, Error, Result};
use num_complex::Complex64;

/// Dense column-major complex matrix.
#[derive(Debug, Clone)]
pub struct CMat {
    pub n_rows: usize,
    pub n_cols: usize,
    pub data: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        CMat { n_rows, n_cols, data: vec![c64(0.0, 0.0); n_rows * n_cols] }
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let n_rows = rows.len();
        let n_cols = rows[0].len();
        let mut m = CMat::zeros(n_rows, n_cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), n_cols);
            for (j, &v) in r.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.data[i + j * self.n_rows]
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.n_cols);
        let mut y = vec![c64(0.0, 0.0); self.n_rows];
        for j in 0..self.n_cols {
            let xj = x[j];
            for i in 0..self.n_rows {
                y[i] += self.at(i, j) * xj;
            }
        }
        y
    }

    pub fn norm_one(&self) -> f64 {
        (0..self.n_cols)
            .map(|j| (0..self.n_rows).map(|i| self.at(i, j).norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i + j * self.n_rows]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i + j * self.n_rows]
    }
}

/// LU factorization with partial pivoting.
pub struct CLu {
    lu: CMat,
    piv: Vec<usize>,
}

impl CLu {
    pub fn factor(a: &CMat) -> Result<CLu> {
        assert_eq!(a.n_rows, a.n_cols);
        let n = a.n_rows;
        let mut lu = a.clone();
        let mut piv = vec![0usize; n];
        for k in 0..n {
            let mut p = k;
            let mut best = lu[(k, k)].norm();
            for i in (k + 1)..n {
                let v = lu[(i, k)].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == 0.0 {
                return Err(Error::SingularSystem { cond: f64::INFINITY });
            }
            piv[k] = p;
            if p != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
            }
            let pivot = lu[(k, k)];
            for i in (k + 1)..n {
                let factor = lu[(i, k)] / pivot;
                lu[(i, k)] = factor;
                for j in (k + 1)..n {
                    let sub = factor * lu[(k, j)];
                    lu[(i, j)] -= sub;
                }
            }
        }
        Ok(CLu { lu, piv })
    }

    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.lu.n_rows;
        assert_eq!(b.len(), n);
        let mut x = b.to_vec();
        for k in 0..n {
            x.swap(k, self.piv[k]);
            let xk = x[k];
            for i in (k + 1)..n {
                let sub = self.lu[(i, k)] * xk;
                x[i] -= sub;
            }
        }
        for k in (0..n).rev() {
            x[k] /= self.lu[(k, k)];
            let xk = x[k];
            for i in 0..k {
                let sub = self.lu[(i, k)] * xk;
                x[i] -= sub;
            }
        }
        x
    }

    /// Explicit inverse; the systems are small enough that this is the
    /// simplest honest route to a condition estimate.
    pub fn inverse(&self) -> CMat {
        let n = self.lu.n_rows;
        let mut inv = CMat::zeros(n, n);
        for j in 0..n {
            let mut e = vec![c64(0.0, 0.0); n];
            e[j] = c64(1.0, 0.0);
            let col = self.solve(&e);
            for i in 0..n {
                inv[(i, j)] = col[i];
            }
        }
        inv
    }
}

/// Solve a small dense system, returning the solution together with the
/// 1-norm condition estimate and the residual norm.
pub fn solve_dense(a: &CMat, b: &[Complex64]) -> Result<(Vec<Complex64>, f64, f64)> {
    let lu = CLu::factor(a)?;
    let x = lu.solve(b);
    let cond = a.norm_one() * lu.inverse().norm_one();
    let ax = a.matvec(&x);
    let res: f64 = ax.iter().zip(b).map(|(l, r)| (l - r).norm_sqr()).sum::<f64>().sqrt();
    Ok((x, cond, res))
}

/// Block-tridiagonal solver: blocks `lower[i] x[i-1] + diag[i] x[i] +
/// upper[i] x[i+1] = rhs[i]`. Block sizes may vary; `lower[0]` and the last
/// `upper` are unused. Forward elimination stores the modified diagonal LUs
/// for the back-substitution pass.
pub struct BlockTridiag {
    pub lower: Vec<CMat>,
    pub diag: Vec<CMat>,
    pub upper: Vec<CMat>,
}

impl BlockTridiag {
    pub fn solve(mut self, rhs: Vec<Vec<Complex64>>) -> Result<Vec<Vec<Complex64>>> {
        let n = self.diag.len();
        assert_eq!(rhs.len(), n);
        let mut rhs = rhs;
        let mut lus: Vec<CLu> = Vec::with_capacity(n);
        // Forward sweep: diag[i+1] -= lower[i+1] * diag[i]^{-1} * upper[i].
        for i in 0..n {
            let lu = CLu::factor(&self.diag[i]).map_err(|_| Error::SingularDiscretization)?;
            if i + 1 < n {
                let li = std::mem::replace(&mut self.lower[i + 1], CMat::zeros(0, 0));
                let up = &self.upper[i];
                // W = diag[i]^{-1} * upper[i], column by column.
                let cols = up.n_cols;
                let mut w = CMat::zeros(up.n_rows, cols);
                for j in 0..cols {
                    let col: Vec<Complex64> = (0..up.n_rows).map(|r| up.at(r, j)).collect();
                    let s = lu.solve(&col);
                    for r in 0..up.n_rows {
                        w[(r, j)] = s[r];
                    }
                }
                // diag[i+1] -= lower[i+1] * W
                let d = &mut self.diag[i + 1];
                for j in 0..cols.min(d.n_cols) {
                    for r in 0..d.n_rows {
                        let mut acc = c64(0.0, 0.0);
                        for t in 0..li.n_cols {
                            acc += li.at(r, t) * w.at(t, j);
                        }
                        d[(r, j)] -= acc;
                    }
                }
                // rhs[i+1] -= lower[i+1] * diag[i]^{-1} * rhs[i]
                let s = lu.solve(&rhs[i]);
                for r in 0..rhs[i + 1].len() {
                    let mut acc = c64(0.0, 0.0);
                    for t in 0..li.n_cols {
                        acc += li.at(r, t) * s[t];
                    }
                    rhs[i + 1][r] -= acc;
                }
                self.lower[i + 1] = li;
            }
            lus.push(lu);
        }
        // Back substitution.
        let mut x: Vec<Vec<Complex64>> = vec![Vec::new(); n];
        for i in (0..n).rev() {
            let mut b = rhs[i].clone();
            if i + 1 < n {
                let up = &self.upper[i];
                for r in 0..b.len() {
                    let mut acc = c64(0.0, 0.0);
                    for t in 0..up.n_cols {
                        acc += up.at(r, t) * x[i + 1][t];
                    }
                    b[r] -= acc;
                }
            }
            x[i] = lus[i].solve(&b);
        }
        Ok(x)
    }
}
