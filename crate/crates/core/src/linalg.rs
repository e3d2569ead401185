//! Small dense linear algebra: vectors as `&[f64]`, row-major matrices,
//! LU solves, Gram-Schmidt QR and a one-sided Jacobi SVD.
//!
//! Everything here targets tiny sizes (ambient dimension <= 8, stacked
//! systems up to a few thousand rows), so simplicity and accuracy win over
//! asymptotics. The Jacobi SVD computes small singular values with absolute
//! error on the order of machine epsilon times the largest singular value,
//! which the rank decisions downstream rely on.

use crate::error::{Error, Result};

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn norm1(a: &[f64]) -> f64 {
    a.iter().map(|x| x.abs()).sum()
}

pub fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn scaled(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| s * x).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// a + s*b
pub fn add_scaled(a: &[f64], s: f64, b: &[f64]) -> Vec<f64> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

/// Cross product of two 3-vectors.
pub fn cross3(a: &[f64], b: &[f64]) -> Vec<f64> {
    debug_assert_eq!(a.len(), 3);
    debug_assert_eq!(b.len(), 3);
    vec![
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn all_finite(a: &[f64]) -> bool {
    a.iter().all(|x| x.is_finite())
}

pub fn check_finite(a: &[f64], what: &str) -> Result<()> {
    if all_finite(a) {
        Ok(())
    } else {
        Err(Error::invalid(format!("{what} contains a non-finite entry")))
    }
}

pub fn check_dim(a: &[f64], dim: usize) -> Result<()> {
    if a.len() == dim {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: dim,
            got: a.len(),
        })
    }
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<f64>,
}

impl std::fmt::Debug for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::invalid("matrix needs at least one row"));
        }
        let cols = rows[0].len();
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            check_dim(r, cols)?;
            check_finite(r, "matrix row")?;
            data.extend_from_slice(r);
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Matrix with the given columns.
    pub fn from_cols(cols: &[Vec<f64>]) -> Result<Self> {
        if cols.is_empty() {
            return Err(Error::invalid("matrix needs at least one column"));
        }
        let rows = cols[0].len();
        let mut m = Matrix::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            check_dim(c, rows)?;
            check_finite(c, "matrix column")?;
            for i in 0..rows {
                m[(i, j)] = c[i];
            }
        }
        Ok(m)
    }

    /// Rank-one product x * y^T.
    pub fn outer(x: &[f64], y: &[f64]) -> Self {
        let mut m = Matrix::zeros(x.len(), y.len());
        for i in 0..x.len() {
            for j in 0..y.len() {
                m[(i, j)] = x[i] * y[j];
            }
        }
        m
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.cols);
        (0..self.rows).map(|i| dot(self.row(i), x)).collect()
    }

    /// A^T x without forming the transpose.
    pub fn tr_matvec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.rows);
        let mut out = vec![0.0; self.cols];
        for i in 0..self.rows {
            let xi = x[i];
            if xi != 0.0 {
                for j in 0..self.cols {
                    out[j] += xi * self[(i, j)];
                }
            }
        }
        out
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self[(i, k)];
                if aik != 0.0 {
                    for j in 0..other.cols {
                        out[(i, j)] += aik * other[(k, j)];
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        out
    }

    pub fn scale_mut(&mut self, s: f64) {
        for a in self.data.iter_mut() {
            *a *= s;
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m: f64, x| m.max(x.abs()))
    }

    /// max |self - other| entrywise.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m: f64, (a, b)| m.max((a - b).abs()))
    }

    pub fn is_finite(&self) -> bool {
        all_finite(&self.data)
    }

    /// LU factorization with partial pivoting. Returns (lu, perm, sign) or an
    /// error on singularity to working precision.
    fn lu(&self) -> Result<(Matrix, Vec<usize>, f64)> {
        if self.rows != self.cols {
            return Err(Error::invalid("LU needs a square matrix"));
        }
        let n = self.rows;
        let mut lu = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for k in 0..n {
            let mut p = k;
            let mut best = lu[(k, k)].abs();
            for i in (k + 1)..n {
                let v = lu[(i, k)].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best < 1e-300 {
                return Err(Error::numerical("singular matrix in LU factorization"));
            }
            if p != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let pivot = lu[(k, k)];
            for i in (k + 1)..n {
                let f = lu[(i, k)] / pivot;
                lu[(i, k)] = f;
                for j in (k + 1)..n {
                    let v = lu[(k, j)];
                    lu[(i, j)] -= f * v;
                }
            }
        }
        Ok((lu, perm, sign))
    }

    pub fn det(&self) -> f64 {
        match self.lu() {
            Ok((lu, _, sign)) => {
                let mut d = sign;
                for i in 0..self.rows {
                    d *= lu[(i, i)];
                }
                d
            }
            Err(_) => 0.0,
        }
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        check_dim(b, self.rows)?;
        let (lu, perm, _) = self.lu()?;
        let n = self.rows;
        let mut x: Vec<f64> = perm.iter().map(|&i| b[i]).collect();
        for i in 1..n {
            for j in 0..i {
                let v = lu[(i, j)] * x[j];
                x[i] -= v;
            }
        }
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                let v = lu[(i, j)] * x[j];
                x[i] -= v;
            }
            x[i] /= lu[(i, i)];
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        let n = self.rows;
        let mut out = Matrix::zeros(n, n);
        let mut e = vec![0.0; n];
        for j in 0..n {
            e[j] = 1.0;
            let col = self.solve(&e)?;
            for i in 0..n {
                out[(i, j)] = col[i];
            }
            e[j] = 0.0;
        }
        Ok(out)
    }

    /// Orthonormalizes the columns by modified Gram-Schmidt with a second
    /// pass. Requires full column rank.
    pub fn qr_q(&self) -> Result<Matrix> {
        let (m, n) = (self.rows, self.cols);
        if n > m {
            return Err(Error::invalid("QR needs rows >= cols"));
        }
        let mut q: Vec<Vec<f64>> = (0..n).map(|j| self.col(j)).collect();
        for j in 0..n {
            for _pass in 0..2 {
                for i in 0..j {
                    let r = dot(&q[i], &q[j]);
                    let qi = q[i].clone();
                    q[j] = add_scaled(&q[j], -r, &qi);
                }
            }
            let nrm = norm2(&q[j]);
            if nrm < 1e-12 {
                return Err(Error::numerical("rank-deficient matrix in QR"));
            }
            q[j] = scaled(&q[j], 1.0 / nrm);
        }
        Matrix::from_cols(&q)
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Singular values and right singular vectors by one-sided Jacobi on the
/// columns. Returns (sigma, v) with sigma descending, v orthogonal, and
/// A v_k = sigma_k u_k.
pub fn svd_values(a: &Matrix) -> (Vec<f64>, Matrix) {
    let n = a.cols;
    let mut u: Vec<Vec<f64>> = (0..n).map(|j| a.col(j)).collect();
    let mut v = Matrix::identity(n);
    let eps = 1e-15;
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                let app = dot(&u[p], &u[p]);
                let aqq = dot(&u[q], &u[q]);
                let apq = dot(&u[p], &u[q]);
                if apq.abs() <= eps * (app * aqq).sqrt() || apq == 0.0 {
                    continue;
                }
                off = off.max(apq.abs() / (app * aqq).sqrt().max(1e-300));
                // Jacobi rotation zeroing the (p,q) Gram entry.
                let tau = (aqq - app) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..u[p].len() {
                    let up = u[p][i];
                    let uq = u[q][i];
                    u[p][i] = c * up - s * uq;
                    u[q][i] = s * up + c * uq;
                }
                for i in 0..n {
                    let vp = v[(i, p)];
                    let vq = v[(i, q)];
                    v[(i, p)] = c * vp - s * vq;
                    v[(i, q)] = s * vp + c * vq;
                }
            }
        }
        if off < 1e-14 {
            break;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let sigmas: Vec<f64> = u.iter().map(|c| norm2(c)).collect();
    order.sort_by(|&i, &j| sigmas[j].partial_cmp(&sigmas[i]).unwrap());
    let sorted: Vec<f64> = order.iter().map(|&i| sigmas[i]).collect();
    let mut vs = Matrix::zeros(n, n);
    for (newj, &oldj) in order.iter().enumerate() {
        for i in 0..n {
            vs[(i, newj)] = v[(i, oldj)];
        }
    }
    (sorted, vs)
}

/// Rank with a relative singular value threshold.
pub fn rank(a: &Matrix, rel_tol: f64) -> usize {
    let (sigma, _) = svd_values(a);
    let cutoff = sigma.first().copied().unwrap_or(0.0) * rel_tol;
    sigma.iter().filter(|&&s| s > cutoff && s > 0.0).count()
}

/// Orthonormal basis of the null space of A, via the right singular vectors
/// whose singular values fall below rel_tol * sigma_max.
pub fn null_space(a: &Matrix, rel_tol: f64) -> Vec<Vec<f64>> {
    let (sigma, v) = svd_values(a);
    let cutoff = sigma.first().copied().unwrap_or(0.0) * rel_tol;
    let mut basis = Vec::new();
    for (k, &s) in sigma.iter().enumerate() {
        if s <= cutoff || s == 0.0 {
            basis.push(v.col(k));
        }
    }
    basis
}
