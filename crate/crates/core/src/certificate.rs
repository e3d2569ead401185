//! Projection certificates and their verification.
//!
//! A certificate on an n-dimensional space X consists of pairs (f_j, y_j)
//! of a functional and a vector together with a candidate enlargement A.
//! It is valid when
//!
//!   1. every f_j lies in the dual unit ball: ||f_j||* <= 1,
//!   2. sum_j y_j f_j^T = I (the pairs reconstruct the identity),
//!   3. the zonotope Z spanned by the y_j is contained in A.
//!
//! Whenever 1 and 2 hold, Z automatically contains the unit ball of X
//! (each x in B(X) equals sum f_j(x) y_j with |f_j(x)| <= 1), and A then
//! catches the image of some norm-one projection onto X from any space
//! containing X isometrically: the f_j extend by Hahn-Banach to norm-one
//! functionals F_j, and P = sum y_j F_j is such a projection. Verification
//! checks 1-3 at the configured tolerances and also reports the implied
//! ball-in-zonotope containment.

use crate::body::Body;
use crate::error::{Error, Result};
use crate::geometry::{contains_body, ContainmentCheck};
use crate::linalg::{check_dim, check_finite, Matrix};
use crate::space::NormedSpace;
use crate::tol::TolerancePolicy;

#[derive(Debug, Clone, PartialEq)]
pub struct Pair {
    pub functional: Vec<f64>,
    pub vector: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    space: NormedSpace,
    pairs: Vec<Pair>,
    enlargement: Body,
}

/// Outcome of `verify_certificate`: the aggregate verdict plus the worst
/// observed value for each of the three invariants and the implied
/// ball-in-zonotope check.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub valid: bool,
    /// Largest dual norm among the functionals.
    pub worst_dual_norm: f64,
    /// Index of the functional attaining it.
    pub worst_dual_index: usize,
    /// Max-abs entry of sum_j y_j f_j^T - I.
    pub reconstruction_residual: f64,
    /// Zonotope of the y_j inside the enlargement.
    pub zonotope_in_enlargement: ContainmentCheck,
    /// Unit ball inside the zonotope of the y_j (implied by 1 and 2).
    pub ball_in_zonotope: ContainmentCheck,
}

impl Certificate {
    pub fn new(space: NormedSpace, pairs: Vec<Pair>, enlargement: Body) -> Result<Certificate> {
        let n = space.dim();
        if pairs.is_empty() {
            return Err(Error::invalid("a certificate needs at least one pair"));
        }
        for p in &pairs {
            check_dim(&p.functional, n)?;
            check_dim(&p.vector, n)?;
            check_finite(&p.functional, "functional")?;
            check_finite(&p.vector, "vector")?;
        }
        if enlargement.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: enlargement.dim(),
            });
        }
        Ok(Certificate {
            space,
            pairs,
            enlargement,
        })
    }

    pub fn space(&self) -> &NormedSpace {
        &self.space
    }

    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    pub fn enlargement(&self) -> &Body {
        &self.enlargement
    }

    /// The zonotope spanned by the vectors y_j.
    pub fn zonotope(&self) -> Body {
        Body::zonotope(
            self.space.dim(),
            self.pairs.iter().map(|p| p.vector.clone()).collect(),
        )
        .expect("vectors validated on construction")
    }

    /// Same pairs and space with a different enlargement.
    pub fn with_enlargement(&self, enlargement: Body) -> Result<Certificate> {
        Certificate::new(self.space.clone(), self.pairs.clone(), enlargement)
    }
}

pub fn verify_certificate(
    cert: &Certificate,
    pol: &TolerancePolicy,
) -> Result<VerificationReport> {
    pol.validate()?;
    let n = cert.space.dim();

    let mut worst_dual_norm = f64::NEG_INFINITY;
    let mut worst_dual_index = 0;
    for (j, p) in cert.pairs.iter().enumerate() {
        let d = cert.space.dual_norm(&p.functional)?;
        if !d.is_finite() {
            return Err(Error::numerical("dual norm evaluated to a non-finite value"));
        }
        if d > worst_dual_norm {
            worst_dual_norm = d;
            worst_dual_index = j;
        }
    }
    let dual_ok = worst_dual_norm <= 1.0 + pol.eps_feas;

    let mut recon = Matrix::zeros(n, n);
    for p in &cert.pairs {
        recon = recon.add(&Matrix::outer(&p.vector, &p.functional));
    }
    let reconstruction_residual = recon.max_abs_diff(&Matrix::identity(n));
    let recon_ok = reconstruction_residual <= pol.eps_eq;

    let zonotope = cert.zonotope();
    let zonotope_in_enlargement = contains_body(&zonotope, &cert.enlargement, pol.eps_feas)?;

    // Implied containment: allow the slack the implication itself carries,
    // one eps_feas from the dual norms plus n*eps_eq from reconstruction.
    let implied_eps = pol.eps_feas + n as f64 * pol.eps_eq;
    let ball_in_zonotope = contains_body(cert.space.unit_ball(), &zonotope, implied_eps)?;

    Ok(VerificationReport {
        valid: dual_ok && recon_ok && zonotope_in_enlargement.holds && ball_in_zonotope.holds,
        worst_dual_norm,
        worst_dual_index,
        reconstruction_residual,
        zonotope_in_enlargement,
        ball_in_zonotope,
    })
}

/// Certificate from a circumscribed parallelepiped.
///
/// Given n independent functionals f_i in the dual unit ball, the
/// parallelepiped Q = {x : |f_i(x)| <= 1} contains the unit ball and the
/// pairs (f_i, x_i) with the dual basis x_i (f_i(x_j) = delta_ij)
/// reconstruct the identity exactly. The enlargement is Q, represented by
/// its defining inequalities; the certificate zonotope equals Q as a set,
/// so the certificate is valid with zero containment slack.
pub fn parallelepiped_certificate(
    space: &NormedSpace,
    functionals: &[Vec<f64>],
    pol: &TolerancePolicy,
) -> Result<Certificate> {
    pol.validate()?;
    let n = space.dim();
    if functionals.len() != n {
        return Err(Error::invalid(
            "a parallelepiped certificate needs exactly dim functionals",
        ));
    }
    for (i, f) in functionals.iter().enumerate() {
        check_dim(f, n)?;
        check_finite(f, "functional")?;
        let dual = space.dual_norm(f)?;
        if dual > 1.0 + pol.eps_feas.max(1e-7) {
            return Err(Error::hypothesis(format!(
                "functional {i} has dual norm {dual:.6} > 1: the \
                 parallelepiped does not contain the unit ball"
            )));
        }
    }
    let f_rows = Matrix::from_rows(functionals)?;
    let x_cols = f_rows
        .inverse()
        .map_err(|_| Error::hypothesis("functionals are linearly dependent"))?;
    let mut pairs = Vec::with_capacity(n);
    for (i, f) in functionals.iter().enumerate() {
        pairs.push(Pair {
            functional: f.clone(),
            vector: x_cols.col(i),
        });
    }
    let enlargement = Body::hpolytope(functionals.to_vec(), vec![1.0; n])?;
    Certificate::new(space.clone(), pairs, enlargement)
}

/// Convex combination of two certificates on the same space.
///
/// The pairs are the union of the first certificate's pairs with vectors
/// scaled by lambda and the second's scaled by 1 - lambda; the enlargement
/// is the Minkowski combination lambda*A1 + (1-lambda)*A2. Validity is
/// preserved: the combined reconstruction is lambda*I + (1-lambda)*I and
/// the combined zonotope is exactly the Minkowski combination of the two
/// zonotopes. Endpoint values of lambda return a copy of one input.
pub fn convex_combination(a: &Certificate, b: &Certificate, lambda: f64) -> Result<Certificate> {
    if !(lambda.is_finite() && (0.0..=1.0).contains(&lambda)) {
        return Err(Error::invalid("lambda must lie in [0, 1]"));
    }
    if a.space != b.space {
        return Err(Error::invalid(
            "convex combination needs certificates on the same space",
        ));
    }
    if lambda == 0.0 {
        return Ok(b.clone());
    }
    if lambda == 1.0 {
        return Ok(a.clone());
    }
    let mut pairs = Vec::with_capacity(a.pairs.len() + b.pairs.len());
    for p in &a.pairs {
        pairs.push(Pair {
            functional: p.functional.clone(),
            vector: crate::linalg::scaled(&p.vector, lambda),
        });
    }
    for p in &b.pairs {
        pairs.push(Pair {
            functional: p.functional.clone(),
            vector: crate::linalg::scaled(&p.vector, 1.0 - lambda),
        });
    }
    let enlargement = Body::minkowski_sum(
        a.enlargement.clone().scale(lambda)?,
        b.enlargement.clone().scale(1.0 - lambda)?,
    )?;
    Certificate::new(a.space.clone(), pairs, enlargement)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    /// Coordinate certificate on the max-norm space: pairs (e_i, e_i),
    /// enlargement the unit cube.
    fn cube_certificate(n: usize) -> Certificate {
        let space = NormedSpace::linf(n);
        let pairs = (0..n)
            .map(|i| {
                let mut e = vec![0.0; n];
                e[i] = 1.0;
                Pair {
                    functional: e.clone(),
                    vector: e,
                }
            })
            .collect();
        Certificate::new(space, pairs, Body::cube(n, 1.0)).unwrap()
    }

    #[test]
    fn cube_certificate_verifies() {
        let report = verify_certificate(&cube_certificate(3), &pol()).unwrap();
        assert!(report.valid);
        assert!((report.worst_dual_norm - 1.0).abs() < 1e-12);
        assert!(report.reconstruction_residual < 1e-15);
        assert!(report.zonotope_in_enlargement.holds);
        assert!(report.ball_in_zonotope.holds);
    }

    #[test]
    fn bad_dual_norm_is_flagged() {
        let space = NormedSpace::linf(2);
        let pairs = vec![
            Pair {
                functional: vec![1.5, 0.0],
                vector: vec![1.0 / 1.5, 0.0],
            },
            Pair {
                functional: vec![0.0, 1.0],
                vector: vec![0.0, 1.0],
            },
        ];
        let cert = Certificate::new(space, pairs, Body::cube(2, 1.0)).unwrap();
        let report = verify_certificate(&cert, &pol()).unwrap();
        assert!(!report.valid);
        assert!((report.worst_dual_norm - 1.5).abs() < 1e-12);
        assert_eq!(report.worst_dual_index, 0);
    }

    #[test]
    fn bad_reconstruction_is_flagged() {
        let space = NormedSpace::linf(2);
        let pairs = vec![
            Pair {
                functional: vec![1.0, 0.0],
                vector: vec![1.05, 0.0],
            },
            Pair {
                functional: vec![0.0, 1.0],
                vector: vec![0.0, 1.0],
            },
        ];
        let cert = Certificate::new(space, pairs, Body::cube(2, 2.0)).unwrap();
        let report = verify_certificate(&cert, &pol()).unwrap();
        assert!(!report.valid);
        assert!((report.reconstruction_residual - 0.05).abs() < 1e-12);
    }

    #[test]
    fn enlargement_too_small_is_flagged() {
        let cert = cube_certificate(2);
        let shrunk = cert
            .with_enlargement(Body::cube(2, 0.9))
            .unwrap();
        let report = verify_certificate(&shrunk, &pol()).unwrap();
        assert!(!report.valid);
        assert!(report.zonotope_in_enlargement.margin < 0.0);
        // The other checks still pass.
        assert!(report.reconstruction_residual < 1e-15);
    }

    #[test]
    fn euclidean_rotated_parallelepiped() {
        let space = NormedSpace::euclidean(2);
        let s = 1.0 / 2f64.sqrt();
        let fs = vec![vec![s, s], vec![-s, s]];
        let cert = parallelepiped_certificate(&space, &fs, &pol()).unwrap();
        let report = verify_certificate(&cert, &pol()).unwrap();
        assert!(report.valid);
        assert!(report.reconstruction_residual < 1e-12);
        // The dual basis of a rotation is the same rotation.
        assert!((cert.pairs()[0].vector[0] - s).abs() < 1e-12);
    }

    #[test]
    fn sum_norm_coordinate_parallelepiped() {
        // Coordinate functionals on the sum-norm space give the unit cube.
        let space = NormedSpace::l1(2);
        let fs = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let cert = parallelepiped_certificate(&space, &fs, &pol()).unwrap();
        let report = verify_certificate(&cert, &pol()).unwrap();
        assert!(report.valid);
        assert!((report.zonotope_in_enlargement.margin).abs() < 1e-12);
    }

    #[test]
    fn oversized_functional_is_rejected() {
        // A functional of dual norm above one cuts into the unit ball.
        let space = NormedSpace::euclidean(2);
        let fs = vec![vec![1.5, 0.0], vec![0.0, 1.0]];
        let err = parallelepiped_certificate(&space, &fs, &pol()).unwrap_err();
        assert!(matches!(err, Error::Hypothesis(_)));
    }

    #[test]
    fn dependent_functionals_are_rejected() {
        let space = NormedSpace::euclidean(2);
        let fs = vec![vec![1.0, 0.0], vec![-1.0, 0.0]];
        assert!(parallelepiped_certificate(&space, &fs, &pol()).is_err());
    }

    #[test]
    fn convex_combination_verifies() {
        let space = NormedSpace::euclidean(2);
        let c1 = parallelepiped_certificate(
            &space,
            &[vec![1.0, 0.0], vec![0.0, 1.0]],
            &pol(),
        )
        .unwrap();
        let s = 1.0 / 2f64.sqrt();
        let c2 = parallelepiped_certificate(&space, &[vec![s, s], vec![-s, s]], &pol()).unwrap();
        let mix = convex_combination(&c1, &c2, 0.25).unwrap();
        assert_eq!(mix.pairs().len(), 4);
        let report = verify_certificate(&mix, &pol()).unwrap();
        assert!(report.valid, "combined certificate should verify");
        // Half of two cube certificates rotated 45 degrees apart spans an
        // octagonal zonotope.
        let half = convex_combination(&c1, &c2, 0.5).unwrap();
        let verts = crate::geometry::vertices(&half.zonotope()).unwrap();
        assert_eq!(verts.len(), 8);
    }

    #[test]
    fn combination_endpoints_copy_inputs() {
        let c = cube_certificate(2);
        let d = c
            .with_enlargement(Body::cube(2, 2.0))
            .unwrap();
        assert_eq!(&convex_combination(&c, &d, 1.0).unwrap(), &c);
        assert_eq!(&convex_combination(&c, &d, 0.0).unwrap(), &d);
    }

    #[test]
    fn mismatched_spaces_are_rejected() {
        let c = cube_certificate(2);
        let space = NormedSpace::euclidean(2);
        let d = parallelepiped_certificate(
            &space,
            &[vec![1.0, 0.0], vec![0.0, 1.0]],
            &pol(),
        )
        .unwrap();
        assert!(convex_combination(&c, &d, 0.5).is_err());
    }
}
