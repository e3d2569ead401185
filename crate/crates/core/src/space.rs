//! Finite-dimensional normed spaces, given by a unit ball.
//!
//! The ball must be a bounded, full-dimensional, centrally symmetric convex
//! body; its gauge is then a norm and its support function the dual norm.

use crate::body::Body;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct NormedSpace {
    dim: usize,
    unit_ball: Body,
}

impl NormedSpace {
    /// Wraps a body as a unit ball after checking it is bounded and
    /// full-dimensional (finite support and finite gauge along every
    /// coordinate direction; by symmetry and convexity that suffices).
    pub fn from_ball(unit_ball: Body) -> Result<NormedSpace> {
        let dim = unit_ball.dim();
        if dim == 0 {
            return Err(Error::invalid("dimension must be positive"));
        }
        let unit_ball = unit_ball.simplified();
        for i in 0..dim {
            let mut e = vec![0.0; dim];
            e[i] = 1.0;
            let s = unit_ball.support(&e)?;
            if !s.is_finite() {
                return Err(Error::invalid(
                    "unit ball is unbounded and does not define a norm",
                ));
            }
            let g = unit_ball.gauge(&e)?;
            if !g.is_finite() {
                return Err(Error::invalid(
                    "unit ball is not full-dimensional and does not define a norm",
                ));
            }
        }
        Ok(NormedSpace { dim, unit_ball })
    }

    pub fn euclidean(dim: usize) -> NormedSpace {
        NormedSpace::from_ball(Body::ball(dim, 1.0).expect("valid ball"))
            .expect("euclidean ball is a valid unit ball")
    }

    /// Space with the sum-of-absolute-values norm.
    pub fn l1(dim: usize) -> NormedSpace {
        NormedSpace::from_ball(Body::cross_polytope(dim))
            .expect("cross-polytope is a valid unit ball")
    }

    /// Space with the max-coordinate norm.
    pub fn linf(dim: usize) -> NormedSpace {
        NormedSpace::from_ball(Body::cube(dim, 1.0)).expect("cube is a valid unit ball")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit_ball(&self) -> &Body {
        &self.unit_ball
    }

    pub fn norm(&self, x: &[f64]) -> Result<f64> {
        self.unit_ball.gauge(x)
    }

    /// Norm of a functional: the support of the unit ball at f.
    pub fn dual_norm(&self, f: &[f64]) -> Result<f64> {
        self.unit_ball.support(f)
    }
}
