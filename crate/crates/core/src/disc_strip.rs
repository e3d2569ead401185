//! A plane normed by the intersection of the unit disc with a diagonal
//! strip, and the dichotomy its dual ball satisfies near the strip edge.
//!
//! The unit ball is B = {x : |x| <= 1, |x_1 - x_2| <= 1}, so the norm is
//! max(Euclidean length, |x_1 - x_2|) and the dual ball is the convex
//! hull of the disc with the two strip functionals +-(1, -1). For a small
//! angle t, the boundary points x_1 = (cos t, sin t) and
//! x_2 = (sin t, cos t) straddle the strip edge, and every dual-ball
//! functional must nearly miss one of them: min(|f(x_1)|, |f(x_2)|)
//! stays below 1 - tan t. `dichotomy_check` tests that bound over a dense
//! angular net of circle functionals together with the strip functionals.

use crate::body::Body;
use crate::error::{Error, Result};
use crate::linalg::dot;
use crate::space::NormedSpace;
use crate::tol::TolerancePolicy;
use std::f64::consts::{FRAC_PI_4, PI};

/// Number of circle functionals scanned by the dichotomy check.
pub const DICHOTOMY_NET: usize = 10_000;

/// The plane with unit ball disc-intersect-strip.
pub fn disc_strip_space() -> NormedSpace {
    let disc = Body::ball(2, 1.0).expect("unit disc");
    let strip = Body::hpolytope(vec![vec![1.0, -1.0]], vec![1.0]).expect("diagonal strip");
    let ball = Body::intersection(disc, strip).expect("compatible dimensions");
    NormedSpace::from_ball(ball).expect("disc-strip ball is a valid unit ball")
}

/// The strip edge functional (1, -1); together with its negative it spans
/// the non-circular extreme points of the dual ball.
pub fn strip_functional() -> Vec<f64> {
    vec![1.0, -1.0]
}

/// The two unit-sphere points used by the dichotomy check at angle `eps`.
pub fn boundary_points(eps: f64) -> (Vec<f64>, Vec<f64>) {
    (
        vec![eps.cos(), eps.sin()],
        vec![eps.sin(), eps.cos()],
    )
}

#[derive(Debug, Clone)]
pub struct DichotomyReport {
    pub eps: f64,
    /// The claimed bound 1 - tan(eps).
    pub bound: f64,
    /// Largest value of min(|f(x_1)|, |f(x_2)|) over the scanned
    /// functionals.
    pub worst_value: f64,
    /// bound - worst_value; the claim holds iff this is nonnegative.
    pub margin: f64,
    pub holds: bool,
    /// Functional attaining the worst value.
    pub worst_functional: Vec<f64>,
}

/// Scans min(|f(x_1)|, |f(x_2)|) <= 1 - tan(eps) over a dense net of unit
/// circle functionals plus the two strip functionals. Requires
/// 0 < eps < pi/4 so that both points lie on the unit sphere of the
/// disc-strip space.
pub fn dichotomy_check(eps: f64, _pol: &TolerancePolicy) -> Result<DichotomyReport> {
    if !eps.is_finite() || eps <= 0.0 || eps >= FRAC_PI_4 {
        return Err(Error::invalid(
            "dichotomy angle must satisfy 0 < eps < pi/4",
        ));
    }
    let (x1, x2) = boundary_points(eps);
    let bound = 1.0 - eps.tan();
    let mut worst_value = f64::NEG_INFINITY;
    let mut worst_functional = Vec::new();
    let mut consider = |f: Vec<f64>| {
        let v = dot(&f, &x1).abs().min(dot(&f, &x2).abs());
        if v > worst_value {
            worst_value = v;
            worst_functional = f;
        }
    };
    for k in 0..DICHOTOMY_NET {
        let th = 2.0 * PI * (k as f64) / (DICHOTOMY_NET as f64);
        consider(vec![th.cos(), th.sin()]);
    }
    let s = strip_functional();
    consider(s.clone());
    consider(vec![-s[0], -s[1]]);
    let margin = bound - worst_value;
    Ok(DichotomyReport {
        eps,
        bound,
        worst_value,
        margin,
        holds: margin >= 0.0,
        worst_functional,
    })
}
