//! Projections onto a hyperplane with minimal sup-norm, and the slab
//! enlargement they induce.
//!
//! For a unit functional h, every projection onto ker h has the form
//! P = I - w h^T with h(w) = 1. Its operator norm on the sup-norm space
//! is the largest absolute row sum of the matrix, so minimizing over w is
//! a linear program. The induced enlargement A = [-h, h] + P(cube) is a
//! zonotope with generators h and P e_1, .., P e_n: it stays inside the
//! scaled cube 3 B_inf and inside the slab {x : |h(x)| <= 1}, and the
//! companion certificate replaces the segment [-h, h] by [-w, w].

use crate::body::Body;
use crate::certificate::{verify_certificate, Certificate, Pair, VerificationReport};
use crate::error::{Error, Result};
use crate::geometry::{contains_body, ContainmentCheck};
use crate::linalg::{check_finite, norm2, Matrix};
use crate::lp::{solve_lp, LpOutcome, LpProblem};
use crate::space::NormedSpace;
use crate::tol::TolerancePolicy;

#[derive(Debug, Clone)]
pub struct HyperplaneProjection {
    /// The kernel direction w with h(w) = 1; P annihilates it.
    pub kernel: Vec<f64>,
    /// P = I - w h^T.
    pub matrix: Matrix,
    /// Largest absolute row sum of P: its norm on the sup-norm space.
    pub operator_norm: f64,
}

fn inf_operator_norm(m: &Matrix) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..m.rows {
        worst = worst.max(m.row(i).iter().map(|v| v.abs()).sum());
    }
    worst
}

/// Minimizes the sup-norm operator norm of I - w h^T over all w with
/// h(w) = 1 by linear programming, and validates the optimizer: P must be
/// idempotent with range inside ker h.
pub fn minimal_norm_hyperplane_projection(
    h: &[f64],
    pol: &TolerancePolicy,
) -> Result<HyperplaneProjection> {
    pol.validate()?;
    check_finite(h, "hyperplane functional")?;
    let n = h.len();
    if n == 0 {
        return Err(Error::invalid("hyperplane functional must have positive dimension"));
    }
    let len = norm2(h);
    if (len - 1.0).abs() > pol.eps_eq.max(1e-8) {
        return Err(Error::hypothesis(format!(
            "hyperplane functional has length {len:.9}, expected 1"
        )));
    }
    // Variables: w (n), u (n*n, row-major bounds on |I - w h^T|), t.
    let nv = n + n * n + 1;
    let u_at = |i: usize, j: usize| n + i * n + j;
    let t_at = nv - 1;
    let mut obj = vec![0.0; nv];
    obj[t_at] = 1.0;
    let mut p = LpProblem::new(nv).minimize(obj);
    for i in 0..n {
        let mut row = vec![0.0; nv];
        for j in 0..n {
            row[u_at(i, j)] = 1.0;
        }
        row[t_at] = -1.0;
        p.add_leq(row, 0.0);
    }
    for i in 0..n {
        for j in 0..n {
            let delta = if i == j { 1.0 } else { 0.0 };
            let mut lo = vec![0.0; nv];
            lo[i] = -h[j];
            lo[u_at(i, j)] = -1.0;
            p.add_leq(lo, -delta);
            let mut hi = vec![0.0; nv];
            hi[i] = h[j];
            hi[u_at(i, j)] = -1.0;
            p.add_leq(hi, delta);
        }
    }
    p.add_eq(h.to_vec().into_iter().chain(vec![0.0; n * n + 1]).collect(), 1.0);
    let sol = match solve_lp(&p)? {
        LpOutcome::Optimal { x, .. } => x,
        _ => {
            return Err(Error::numerical(
                "projection norm LP did not reach an optimum",
            ))
        }
    };
    let w = sol[..n].to_vec();
    let mut matrix = Matrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            matrix[(i, j)] -= w[i] * h[j];
        }
    }
    let operator_norm = inf_operator_norm(&matrix);
    let idem = matrix.matmul(&matrix).max_abs_diff(&matrix);
    if idem > pol.eps_eq.max(1e-7) {
        return Err(Error::numerical(format!(
            "projection is not idempotent (residual {idem:.3e})"
        )));
    }
    let range_leak = matrix
        .transpose()
        .matvec(h)
        .iter()
        .fold(0.0_f64, |m, v| m.max(v.abs()));
    if range_leak > pol.eps_eq.max(1e-7) {
        return Err(Error::numerical(format!(
            "projection range leaves the hyperplane (residual {range_leak:.3e})"
        )));
    }
    Ok(HyperplaneProjection {
        kernel: w,
        matrix,
        operator_norm,
    })
}

#[derive(Debug, Clone)]
pub struct SlabEnlargementReport {
    pub projection: HyperplaneProjection,
    /// A = [-h, h] + P(cube): the geometric enlargement.
    pub enlargement: Body,
    /// Certificate with pairs (h, w) and (e_j, P e_j); its zonotope swaps
    /// the segment [-h, h] for [-w, w].
    pub certificate: Certificate,
    pub certificate_report: VerificationReport,
    pub a_in_cube3: ContainmentCheck,
    pub a_in_slab: ContainmentCheck,
    pub zonotope_in_cube3: ContainmentCheck,
    pub zonotope_in_slab: ContainmentCheck,
    /// Row-sum norm of the orthogonal projection I - h h^T, for
    /// comparison with the minimized norm.
    pub orthogonal_norm: f64,
}

/// Builds the slab enlargement for a unit functional h and checks its
/// containments: both the enlargement and the certificate zonotope must
/// stay inside 3 B_inf and inside the slab {|h(x)| <= 1}.
pub fn slab_enlargement_construction(
    h: &[f64],
    pol: &TolerancePolicy,
) -> Result<SlabEnlargementReport> {
    let projection = minimal_norm_hyperplane_projection(h, pol)?;
    let n = h.len();
    let mut a_gens = vec![h.to_vec()];
    let mut z_gens = vec![projection.kernel.clone()];
    for j in 0..n {
        let col = projection.matrix.col(j);
        a_gens.push(col.clone());
        z_gens.push(col);
    }
    let enlargement = Body::zonotope(n, a_gens)?;
    let zonotope = Body::zonotope(n, z_gens)?;

    let mut pairs = vec![Pair {
        functional: h.to_vec(),
        vector: projection.kernel.clone(),
    }];
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        pairs.push(Pair {
            functional: e,
            vector: projection.matrix.col(j),
        });
    }
    let certificate = Certificate::new(NormedSpace::euclidean(n), pairs, zonotope.clone())?;
    let certificate_report = verify_certificate(&certificate, pol)?;

    let cube3 = Body::cube(n, 3.0);
    let slab = Body::hpolytope(vec![h.to_vec()], vec![1.0])?;
    let a_in_cube3 = contains_body(&enlargement, &cube3, pol.eps_feas)?;
    let a_in_slab = contains_body(&enlargement, &slab, pol.eps_feas)?;
    let zonotope_in_cube3 = contains_body(&zonotope, &cube3, pol.eps_feas)?;
    let zonotope_in_slab = contains_body(&zonotope, &slab, pol.eps_feas)?;

    let mut ortho = Matrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            ortho[(i, j)] -= h[i] * h[j];
        }
    }
    Ok(SlabEnlargementReport {
        projection,
        enlargement,
        certificate,
        certificate_report,
        a_in_cube3,
        a_in_slab,
        zonotope_in_cube3,
        zonotope_in_slab,
        orthogonal_norm: inf_operator_norm(&ortho),
    })
}
