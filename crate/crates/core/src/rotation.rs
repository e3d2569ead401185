//! Seeded randomness, Haar-distributed orthogonal matrices and the
//! dimension of the commutant of a finite set of orthogonal matrices.

use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::linalg::{rank, Matrix};

/// All randomized routines take an explicit seeded generator so runs are
/// reproducible byte for byte.
pub type SeededRng = rand_chacha::ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    SeededRng::seed_from_u64(seed)
}

/// Standard normal via Box-Muller.
pub fn standard_normal(rng: &mut SeededRng) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen::<f64>();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

pub fn normal_vector(dim: usize, rng: &mut SeededRng) -> Vec<f64> {
    (0..dim).map(|_| standard_normal(rng)).collect()
}

/// Haar-distributed element of the orthogonal group O(dim): a Gaussian
/// matrix orthonormalized column by column. Gram-Schmidt leaves the
/// triangular factor with positive diagonal, which is exactly the
/// normalization that makes the distribution Haar. Both determinant signs
/// occur.
pub fn random_rotation(dim: usize, rng: &mut SeededRng) -> Result<Matrix> {
    if dim == 0 {
        return Err(Error::invalid("dimension must be positive"));
    }
    for _attempt in 0..4 {
        let mut g = Matrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                g[(i, j)] = standard_normal(rng);
            }
        }
        if let Ok(q) = g.qr_q() {
            return Ok(q);
        }
        // Rank-deficient Gaussian draw has probability zero; retry.
    }
    Err(Error::numerical("failed to draw a full-rank Gaussian matrix"))
}

/// Dimension of { M : Mg = gM for all g } for a finite set of orthogonal
/// matrices, computed as the null space dimension of the stacked commutator
/// operators with a relative singular value cutoff.
///
/// An irreducible action gives 1; the identity-only set gives dim^2.
pub fn commutant_dimension(dim: usize, mats: &[Matrix], eps_eq: f64, eps_rank: f64) -> Result<usize> {
    if dim == 0 {
        return Err(Error::invalid("dimension must be positive"));
    }
    let n = dim;
    // With no constraints every matrix commutes: the commutant is all of
    // the n x n matrices.
    if mats.is_empty() {
        return Ok(n * n);
    }
    for g in mats {
        if g.rows != n || g.cols != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: g.rows.max(g.cols),
            });
        }
        let gtg = g.transpose().matmul(g);
        if gtg.max_abs_diff(&Matrix::identity(n)) > eps_eq.max(1e-12) * 10.0 {
            return Err(Error::hypothesis("matrix is not orthogonal"));
        }
    }
    // Column-major vec: vec(Mg - gM) = (g^T (x) I - I (x) g) vec(M).
    let nn = n * n;
    let mut stacked = Matrix::zeros(mats.len() * nn, nn);
    for (k, g) in mats.iter().enumerate() {
        for p in 0..n {
            for i in 0..n {
                let out_row = k * nn + p * n + i;
                for q in 0..n {
                    for j in 0..n {
                        let col = q * n + j;
                        // (g^T (x) I)[pn+i, qn+j] = g[q][p] * delta_ij
                        let mut v = 0.0;
                        if i == j {
                            v += g[(q, p)];
                        }
                        // (I (x) g)[pn+i, qn+j] = delta_pq * g[i][j]
                        if p == q {
                            v -= g[(i, j)];
                        }
                        stacked[(out_row, col)] = v;
                    }
                }
            }
        }
    }
    let r = rank(&stacked, eps_rank);
    Ok(nn - r)
}
