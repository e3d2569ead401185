//! Quantitative recovery of a circumscribed parallelepiped from an
//! enlargement that stays close to it.
//!
//! Setting: f_1..f_n are norm-one functionals, x_1..x_n norm-one points
//! with f_i(x_i) = 1, and Q = {x : |f_i(x)| <= 1} is the circumscribed
//! parallelepiped. The separation constant
//!
//!   c2 = 1 - max_{i<j} max_{f in B(X*)} min(|f(x_i)|, |f(x_j)|)
//!
//! measures how far any single dual-ball functional stays from norming two
//! of the tangency points at once. When c2 > 0 and a certificate zonotope
//! Z sits inside (1+c1)Q, the scaled box c3*Q with
//! c3 = 1 - ((2-c2)/c2)*c1 must lie inside Z. `box_recovery_check` tests
//! exactly that; `minimality_check` uses c2 > 0 alone, which already makes
//! Q minimal among the enlargements containing it.

use crate::body::Body;
use crate::certificate::{verify_certificate, Certificate};
use crate::error::{Error, Result};
use crate::linalg::{check_dim, check_finite, dot, norm2, scaled, Matrix};
use crate::lp::{solve_lp, LpOutcome, LpProblem};
use crate::net::direction_net;
use crate::space::NormedSpace;
use crate::tol::TolerancePolicy;

/// How the pairwise maximization inside the separation constant was solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeparationMode {
    /// Euclidean closed form (reduction to the span of the pair).
    ClosedForm,
    /// Exact sign-pattern LPs over a polytopal dual ball.
    SignPatternLp,
    /// Dense sampling of the dual sphere: a lower bound on the inner max,
    /// hence only an upper bound on the separation constant.
    Sampled,
}

#[derive(Debug, Clone)]
pub struct Separation {
    pub value: f64,
    pub mode: SeparationMode,
}

impl Separation {
    /// Whether the value is exact (certified) rather than a sampled bound.
    pub fn certified(&self) -> bool {
        self.mode != SeparationMode::Sampled
    }
}

#[derive(Debug, Clone)]
pub struct BoxRecoveryReport {
    /// c1: smallest c with the certificate zonotope inside (1+c)Q.
    pub excess: f64,
    /// c2: the separation constant of the frame.
    pub separation: f64,
    pub separation_mode: SeparationMode,
    /// c3 = 1 - ((2-c2)/c2)*c1.
    pub recovered_scale: f64,
    /// All vertices of the c3-scaled parallelepiped lie in the zonotope.
    pub holds: bool,
    /// False when c3 <= 0 (the statement is vacuous) or the separation
    /// constant is only a sampled bound (the hypothesis is uncertified).
    pub conclusive: bool,
    /// A violating vertex when holds is false.
    pub witness: Option<Vec<f64>>,
}

#[derive(Debug, Clone)]
pub struct MinimalityReport {
    pub minimal: bool,
    /// The separation constant; positive margin certifies minimality.
    pub margin: f64,
    pub certified: bool,
}

fn validate_frame(
    space: &NormedSpace,
    functionals: &[Vec<f64>],
    points: &[Vec<f64>],
    pol: &TolerancePolicy,
) -> Result<()> {
    let n = space.dim();
    if functionals.len() != n || points.len() != n {
        return Err(Error::invalid(
            "frame needs exactly dim functionals and dim points",
        ));
    }
    let tol = pol.eps_eq.max(1e-8);
    for (i, f) in functionals.iter().enumerate() {
        check_dim(f, n)?;
        check_finite(f, "functional")?;
        let d = space.dual_norm(f)?;
        if (d - 1.0).abs() > tol {
            return Err(Error::hypothesis(format!(
                "functional {i} has dual norm {d:.9}, expected 1"
            )));
        }
    }
    for (i, x) in points.iter().enumerate() {
        check_dim(x, n)?;
        check_finite(x, "point")?;
        let nx = space.norm(x)?;
        if (nx - 1.0).abs() > tol {
            return Err(Error::hypothesis(format!(
                "point {i} has norm {nx:.9}, expected 1"
            )));
        }
        let v = dot(&functionals[i], x);
        if (v - 1.0).abs() > tol {
            return Err(Error::hypothesis(format!(
                "f_{i}(x_{i}) = {v:.9}, expected 1"
            )));
        }
    }
    Ok(())
}

/// max over the Euclidean dual ball of min(|<f,x>|, |<f,y>|): the maximum
/// is attained in the span of x and y, where it is max(cos(g/2), sin(g/2))
/// for the angle g between them.
fn pair_max_euclidean(x: &[f64], y: &[f64]) -> f64 {
    let cx = norm2(x);
    let cy = norm2(y);
    let c = (dot(x, y) / (cx * cy)).clamp(-1.0, 1.0);
    let gamma = c.acos();
    (gamma / 2.0).cos().max((gamma / 2.0).sin())
}

/// One sign-pattern LP: maximize t subject to s1*<f,x> >= t, s2*<f,y> >= t
/// and f in the dual unit ball of the given (polytopal) primal ball.
fn sign_pattern_lp(ball: &Body, x: &[f64], y: &[f64], s1: f64, s2: f64) -> Result<f64> {
    let n = x.len();
    let p = match ball {
        Body::VPolytope { vertices, .. } => {
            // Variables: f (n), t. Constraints |<f, v_m>| <= 1.
            let mut obj = vec![0.0; n + 1];
            obj[n] = -1.0;
            let mut p = LpProblem::new(n + 1).minimize(obj);
            for v in vertices {
                let mut up = v.clone();
                up.push(0.0);
                p.add_leq(up, 1.0);
                let mut dn = scaled(v, -1.0);
                dn.push(0.0);
                p.add_leq(dn, 1.0);
            }
            let mut r1 = scaled(x, -s1);
            r1.push(1.0);
            p.add_leq(r1, 0.0);
            let mut r2 = scaled(y, -s2);
            r2.push(1.0);
            p.add_leq(r2, 0.0);
            p
        }
        Body::HPolytope {
            normals, offsets, ..
        } => {
            // Dual ball = conv{+-a_k/b_k}: f = sum (cp_k - cm_k) a_k/b_k,
            // sum(cp + cm) <= 1, cp, cm >= 0. Variables: cp (K), cm (K), t.
            let k = normals.len();
            let dirs: Vec<Vec<f64>> = normals
                .iter()
                .zip(offsets)
                .map(|(a, &b)| scaled(a, 1.0 / b))
                .collect();
            let mut obj = vec![0.0; 2 * k + 1];
            obj[2 * k] = -1.0;
            let mut p = LpProblem::new(2 * k + 1).minimize(obj);
            let mut mass = vec![1.0; 2 * k + 1];
            mass[2 * k] = 0.0;
            p.add_leq(mass, 1.0);
            for j in 0..2 * k {
                let mut nonneg = vec![0.0; 2 * k + 1];
                nonneg[j] = -1.0;
                p.add_leq(nonneg, 0.0);
            }
            for (point, s) in [(x, s1), (y, s2)] {
                let mut row = vec![0.0; 2 * k + 1];
                for (j, d) in dirs.iter().enumerate() {
                    let v = dot(d, point);
                    row[j] = -s * v;
                    row[k + j] = s * v;
                }
                row[2 * k] = 1.0;
                p.add_leq(row, 0.0);
            }
            p
        }
        Body::Zonotope { generators, .. } => {
            // f in the dual ball iff sum_j |<f, y_j>| <= 1. Variables:
            // f (n), u_j (m), t.
            let m = generators.len();
            let mut obj = vec![0.0; n + m + 1];
            obj[n + m] = -1.0;
            let mut p = LpProblem::new(n + m + 1).minimize(obj);
            for (j, g) in generators.iter().enumerate() {
                let mut up = vec![0.0; n + m + 1];
                up[..n].copy_from_slice(g);
                up[n + j] = -1.0;
                p.add_leq(up, 0.0);
                let mut dn = vec![0.0; n + m + 1];
                for (c, gi) in dn[..n].iter_mut().zip(g) {
                    *c = -gi;
                }
                dn[n + j] = -1.0;
                p.add_leq(dn, 0.0);
            }
            let mut mass = vec![0.0; n + m + 1];
            for c in mass[n..n + m].iter_mut() {
                *c = 1.0;
            }
            p.add_leq(mass, 1.0);
            for (point, s) in [(x, s1), (y, s2)] {
                let mut row = vec![0.0; n + m + 1];
                for (c, pi) in row[..n].iter_mut().zip(point) {
                    *c = -s * pi;
                }
                row[n + m] = 1.0;
                p.add_leq(row, 0.0);
            }
            p
        }
        _ => {
            return Err(Error::unsupported(
                "sign-pattern LP needs a polytopal unit ball",
            ))
        }
    };
    match solve_lp(&p)? {
        LpOutcome::Optimal { objective, .. } => Ok(-objective),
        // t can always be pushed to -infinity-free 0 by f = 0.
        _ => Err(Error::numerical("sign-pattern LP did not reach an optimum")),
    }
}

fn pair_max(space: &NormedSpace, x: &[f64], y: &[f64]) -> Result<(f64, SeparationMode)> {
    let ball = space.unit_ball().simplified();
    if let Body::EuclideanBall { .. } = ball {
        return Ok((pair_max_euclidean(x, y), SeparationMode::ClosedForm));
    }
    match &ball {
        Body::VPolytope { .. } | Body::HPolytope { .. } | Body::Zonotope { .. } => {
            let mut best = f64::NEG_INFINITY;
            for (s1, s2) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                best = best.max(sign_pattern_lp(&ball, x, y, s1, s2)?);
            }
            Ok((best, SeparationMode::SignPatternLp))
        }
        _ => {
            // Sampled lower bound on the max: scan dual-sphere directions.
            let net = direction_net(space.dim());
            let mut best: f64 = 0.0;
            for u in net.iter() {
                let d = space.dual_norm(u)?;
                if !(d.is_finite() && d > 0.0) {
                    continue;
                }
                let f = scaled(u, 1.0 / d);
                best = best.max(dot(&f, x).abs().min(dot(&f, y).abs()));
            }
            Ok((best, SeparationMode::Sampled))
        }
    }
}

/// The separation constant of a norming frame, with its certification
/// mode. Returns 1 (by convention) in dimension 1, where there are no
/// pairs to separate. A non-positive value means some dual-ball functional
/// (nearly) norms two of the points at once.
pub fn separation_constant(
    space: &NormedSpace,
    functionals: &[Vec<f64>],
    points: &[Vec<f64>],
    pol: &TolerancePolicy,
) -> Result<Separation> {
    pol.validate()?;
    validate_frame(space, functionals, points, pol)?;
    let n = space.dim();
    if n == 1 {
        return Ok(Separation {
            value: 1.0,
            mode: SeparationMode::ClosedForm,
        });
    }
    let mut worst = f64::NEG_INFINITY;
    let mut mode = SeparationMode::ClosedForm;
    for i in 0..n {
        for j in (i + 1)..n {
            let (v, m) = pair_max(space, &points[i], &points[j])?;
            worst = worst.max(v);
            if m == SeparationMode::Sampled {
                mode = SeparationMode::Sampled;
            } else if m == SeparationMode::SignPatternLp && mode != SeparationMode::Sampled {
                mode = SeparationMode::SignPatternLp;
            }
        }
    }
    Ok(Separation {
        value: 1.0 - worst,
        mode,
    })
}

/// Checks the parallelepiped-recovery statement for a concrete frame and
/// certificate: with c1 the zonotope's excess over Q and c2 the frame's
/// separation constant, every vertex of c3*Q must lie in the zonotope when
/// c3 = 1 - ((2-c2)/c2)*c1 is positive.
pub fn box_recovery_check(
    space: &NormedSpace,
    functionals: &[Vec<f64>],
    points: &[Vec<f64>],
    cert: &Certificate,
    pol: &TolerancePolicy,
) -> Result<BoxRecoveryReport> {
    pol.validate()?;
    let n = space.dim();
    let report = verify_certificate(cert, pol)?;
    if !report.valid {
        return Err(Error::hypothesis(
            "certificate does not verify; the recovery statement assumes a valid certificate",
        ));
    }
    let sep = separation_constant(space, functionals, points, pol)?;
    if sep.value <= 0.0 {
        return Err(Error::hypothesis(format!(
            "separation constant {:.9} is not positive",
            sep.value
        )));
    }
    let zonotope = cert.zonotope();
    let mut excess = 0.0_f64;
    for f in functionals {
        excess = excess.max(zonotope.support(f)? - 1.0);
    }
    let excess = excess.max(0.0);
    let recovered_scale = 1.0 - ((2.0 - sep.value) / sep.value) * excess;
    let conclusive = sep.certified() && recovered_scale > 0.0;

    let mut holds = true;
    let mut witness = None;
    if recovered_scale > 0.0 {
        // Vertices of c3*Q solve f_i(x) = +-c3; by symmetry half the sign
        // patterns suffice.
        let f_rows = Matrix::from_rows(functionals)?;
        let f_inv = f_rows
            .inverse()
            .map_err(|_| Error::hypothesis("frame functionals are linearly dependent"))?;
        let mut worst_gauge = f64::NEG_INFINITY;
        for mask in 0..(1u32 << (n - 1)) {
            let mut signs = vec![recovered_scale; n];
            for (i, s) in signs.iter_mut().enumerate().skip(1) {
                if mask >> (i - 1) & 1 == 1 {
                    *s = -recovered_scale;
                }
            }
            let vertex = f_inv.matvec(&signs);
            let g = zonotope.gauge(&vertex)?;
            if g > worst_gauge {
                worst_gauge = g;
                if g > 1.0 + pol.eps_feas {
                    holds = false;
                    witness = Some(vertex);
                }
            }
        }
    } else {
        holds = false;
    }

    Ok(BoxRecoveryReport {
        excess,
        separation: sep.value,
        separation_mode: sep.mode,
        recovered_scale,
        holds,
        conclusive,
        witness,
    })
}

/// A circumscribed parallelepiped with a positively separated frame of
/// tangency points is minimal: no proper symmetric convex subset of it is
/// an enlargement target for the same space. The margin is the separation
/// constant itself. Points may be given with either sign (|f_i(x_i)| = 1);
/// they are flipped to f_i(x_i) = 1 before the separation computation.
pub fn minimality_check(
    space: &NormedSpace,
    functionals: &[Vec<f64>],
    points: &[Vec<f64>],
    pol: &TolerancePolicy,
) -> Result<MinimalityReport> {
    pol.validate()?;
    let n = space.dim();
    if functionals.len() != n || points.len() != n {
        return Err(Error::invalid(
            "minimality check needs exactly dim functionals and dim points",
        ));
    }
    let mut oriented = Vec::with_capacity(n);
    for (f, x) in functionals.iter().zip(points) {
        check_dim(x, n)?;
        let v = dot(f, x);
        if v < 0.0 {
            oriented.push(scaled(x, -1.0));
        } else {
            oriented.push(x.clone());
        }
    }
    let sep = separation_constant(space, functionals, &oriented, pol)?;
    Ok(MinimalityReport {
        minimal: sep.value > pol.eps_feas,
        margin: sep.value,
        certified: sep.certified(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::parallelepiped_certificate;

    fn pol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    fn coord_frame(n: usize) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
        let fs: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                let mut e = vec![0.0; n];
                e[i] = 1.0;
                e
            })
            .collect();
        (fs.clone(), fs)
    }

    #[test]
    fn euclidean_plane_separation_value() {
        // Coordinate frame on the disc: the best joint normer of e1, e2 is
        // the 45-degree direction, giving 1 - 1/sqrt(2).
        let space = NormedSpace::euclidean(2);
        let (fs, xs) = coord_frame(2);
        let sep = separation_constant(&space, &fs, &xs, &pol()).unwrap();
        assert_eq!(sep.mode, SeparationMode::ClosedForm);
        assert!((sep.value - (1.0 - 1.0 / 2f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn sum_norm_plane_has_no_separation() {
        // On the sum-norm space the dual ball is the cube: f = (1,1) norms
        // both e1 and e2, so the separation constant vanishes.
        let space = NormedSpace::l1(2);
        let (fs, xs) = coord_frame(2);
        let sep = separation_constant(&space, &fs, &xs, &pol()).unwrap();
        assert_eq!(sep.mode, SeparationMode::SignPatternLp);
        assert!(sep.value.abs() < 1e-9, "value {}", sep.value);
    }

    #[test]
    fn separation_is_one_in_dimension_one() {
        let space = NormedSpace::euclidean(1);
        let sep =
            separation_constant(&space, &[vec![1.0]], &[vec![1.0]], &pol()).unwrap();
        assert_eq!(sep.value, 1.0);
    }

    #[test]
    fn euclidean_3d_separation_matches_pair_formula() {
        let space = NormedSpace::euclidean(3);
        let (fs, xs) = coord_frame(3);
        let sep = separation_constant(&space, &fs, &xs, &pol()).unwrap();
        // Every coordinate pair is orthogonal: same value as in the plane.
        assert!((sep.value - (1.0 - 1.0 / 2f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn cube_minimal_for_disc_not_for_cross_polytope() {
        let (fs, xs) = coord_frame(2);
        let disc = minimality_check(&NormedSpace::euclidean(2), &fs, &xs, &pol()).unwrap();
        assert!(disc.minimal);
        assert!((disc.margin - 0.292_893_218_813_452_5).abs() < 1e-9);
        let l1 = minimality_check(&NormedSpace::l1(2), &fs, &xs, &pol()).unwrap();
        assert!(!l1.minimal);
        assert!(l1.margin.abs() < 1e-9);
    }

    #[test]
    fn zero_excess_recovers_the_whole_box() {
        // The coordinate cube certificate for the disc has its zonotope
        // equal to Q: c1 = 0, c3 = 1, and every vertex of Q is in Z.
        let space = NormedSpace::euclidean(2);
        let (fs, xs) = coord_frame(2);
        let cert = parallelepiped_certificate(&space, &fs, &pol()).unwrap();
        let report = box_recovery_check(&space, &fs, &xs, &cert, &pol()).unwrap();
        assert!(report.holds);
        assert!(report.conclusive);
        assert!(report.excess.abs() < 1e-9);
        assert!((report.recovered_scale - 1.0).abs() < 1e-9);
    }

    #[test]
    fn inflated_zonotope_still_recovers_scaled_box() {
        // Mix the coordinate cube certificate with a rotated one: the
        // zonotope grows beyond Q (c1 > 0) but the recovery scale stays
        // positive and the check holds.
        let space = NormedSpace::euclidean(2);
        let (fs, xs) = coord_frame(2);
        let c1 = parallelepiped_certificate(&space, &fs, &pol()).unwrap();
        let s = 1.0 / 2f64.sqrt();
        let c2 = parallelepiped_certificate(&space, &[vec![s, s], vec![-s, s]], &pol()).unwrap();
        let mix = crate::certificate::convex_combination(&c1, &c2, 0.9).unwrap();
        let report = box_recovery_check(&space, &fs, &xs, &mix, &pol()).unwrap();
        assert!(report.excess > 0.0);
        assert!(report.recovered_scale > 0.0, "c3 = {}", report.recovered_scale);
        assert!(report.holds, "witness: {:?}", report.witness);
    }

    #[test]
    fn frame_preconditions_are_enforced() {
        let space = NormedSpace::euclidean(2);
        let bad_f = vec![vec![2.0, 0.0], vec![0.0, 1.0]];
        let (_, xs) = coord_frame(2);
        assert!(separation_constant(&space, &bad_f, &xs, &pol()).is_err());
        let (fs, _) = coord_frame(2);
        let bad_x = vec![vec![0.5, 0.0], vec![0.0, 1.0]];
        assert!(separation_constant(&space, &fs, &bad_x, &pol()).is_err());
    }
}
