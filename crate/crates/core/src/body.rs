//! Centrally symmetric convex bodies and their support/gauge calculus.
//!
//! Every representation is symmetric about the origin: an H-polytope stores
//! one normal per facet pair (`|<a_k, x>| <= b_k`), a V-polytope one vertex
//! per antipodal pair, a zonotope its generating segments. Support functions
//! and gauges are linked by polarity: the gauge of a body is the support of
//! its polar and vice versa, which is how the `Polar` node is evaluated
//! without ever materializing the dual set.
//!
//! Unbounded pieces (slabs: an H-polytope whose normals do not span) are
//! legal as intersection components; a full space's unit ball is validated
//! for boundedness separately.

use crate::error::{Error, Result};
use crate::linalg::{check_dim, check_finite, dot, norm2, scaled, sub, Matrix};
use crate::lp::{solve_lp, LpOutcome, LpProblem};

#[derive(Debug, Clone, PartialEq)]
pub enum Body {
    /// Intersection of slabs |<a_k, x>| <= b_k.
    HPolytope {
        dim: usize,
        normals: Vec<Vec<f64>>,
        offsets: Vec<f64>,
    },
    /// Convex hull of +-v_m.
    VPolytope { dim: usize, vertices: Vec<Vec<f64>> },
    /// Minkowski sum of segments [-y_j, y_j].
    Zonotope { dim: usize, generators: Vec<Vec<f64>> },
    EuclideanBall { dim: usize, radius: f64 },
    Polar(Box<Body>),
    Scaled { factor: f64, inner: Box<Body> },
    MinkowskiSum(Box<Body>, Box<Body>),
    Intersection(Box<Body>, Box<Body>),
}

fn check_points(dim: usize, pts: &[Vec<f64>], what: &str) -> Result<()> {
    for p in pts {
        check_dim(p, dim)?;
        check_finite(p, what)?;
    }
    Ok(())
}

impl Body {
    pub fn hpolytope(normals: Vec<Vec<f64>>, offsets: Vec<f64>) -> Result<Body> {
        if normals.is_empty() || normals.len() != offsets.len() {
            return Err(Error::invalid(
                "H-polytope needs matching nonempty normal and offset lists",
            ));
        }
        let dim = normals[0].len();
        check_points(dim, &normals, "normal")?;
        for (a, &b) in normals.iter().zip(&offsets) {
            if !(b.is_finite() && b > 0.0) {
                return Err(Error::invalid("H-polytope offsets must be positive"));
            }
            if norm2(a) == 0.0 {
                return Err(Error::invalid("H-polytope normal must be nonzero"));
            }
        }
        Ok(Body::HPolytope {
            dim,
            normals,
            offsets,
        })
    }

    pub fn vpolytope(vertices: Vec<Vec<f64>>) -> Result<Body> {
        if vertices.is_empty() {
            return Err(Error::invalid("V-polytope needs at least one vertex"));
        }
        let dim = vertices[0].len();
        check_points(dim, &vertices, "vertex")?;
        Ok(Body::VPolytope { dim, vertices })
    }

    pub fn zonotope(dim: usize, generators: Vec<Vec<f64>>) -> Result<Body> {
        check_points(dim, &generators, "generator")?;
        Ok(Body::Zonotope { dim, generators })
    }

    pub fn ball(dim: usize, radius: f64) -> Result<Body> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::invalid("ball radius must be positive"));
        }
        if dim == 0 {
            return Err(Error::invalid("dimension must be positive"));
        }
        Ok(Body::EuclideanBall { dim, radius })
    }

    /// Cube [-r, r]^dim.
    pub fn cube(dim: usize, r: f64) -> Body {
        let normals = (0..dim)
            .map(|i| {
                let mut e = vec![0.0; dim];
                e[i] = 1.0;
                e
            })
            .collect();
        Body::hpolytope(normals, vec![r; dim]).expect("cube data is valid")
    }

    /// Cross-polytope: the unit ball of the sum-of-absolute-values norm.
    pub fn cross_polytope(dim: usize) -> Body {
        let vertices = (0..dim)
            .map(|i| {
                let mut e = vec![0.0; dim];
                e[i] = 1.0;
                e
            })
            .collect();
        Body::vpolytope(vertices).expect("cross-polytope data is valid")
    }

    pub fn dim(&self) -> usize {
        match self {
            Body::HPolytope { dim, .. }
            | Body::VPolytope { dim, .. }
            | Body::Zonotope { dim, .. }
            | Body::EuclideanBall { dim, .. } => *dim,
            Body::Polar(b) => b.dim(),
            Body::Scaled { inner, .. } => inner.dim(),
            Body::MinkowskiSum(a, _) => a.dim(),
            Body::Intersection(a, _) => a.dim(),
        }
    }

    pub fn polar(self) -> Body {
        match self {
            Body::Polar(inner) => *inner,
            Body::HPolytope {
                dim,
                normals,
                offsets,
            } => {
                let vertices = normals
                    .iter()
                    .zip(&offsets)
                    .map(|(a, &b)| scaled(a, 1.0 / b))
                    .collect();
                Body::VPolytope { dim, vertices }
            }
            Body::VPolytope { dim, vertices } => {
                let offsets = vec![1.0; vertices.len()];
                Body::HPolytope {
                    dim,
                    normals: vertices,
                    offsets,
                }
            }
            Body::EuclideanBall { dim, radius } => Body::EuclideanBall {
                dim,
                radius: 1.0 / radius,
            },
            other => Body::Polar(Box::new(other)),
        }
    }

    pub fn scale(self, factor: f64) -> Result<Body> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::invalid("scale factor must be positive"));
        }
        Ok(Body::Scaled {
            factor,
            inner: Box::new(self),
        }
        .simplified())
    }

    pub fn minkowski_sum(a: Body, b: Body) -> Result<Body> {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch {
                expected: a.dim(),
                got: b.dim(),
            });
        }
        Ok(Body::MinkowskiSum(Box::new(a), Box::new(b)).simplified())
    }

    pub fn intersection(a: Body, b: Body) -> Result<Body> {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch {
                expected: a.dim(),
                got: b.dim(),
            });
        }
        Ok(Body::Intersection(Box::new(a), Box::new(b)).simplified())
    }

    /// Image under an invertible linear map.
    pub fn linear_image(&self, t: &Matrix) -> Result<Body> {
        let n = self.dim();
        if t.rows != n || t.cols != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: t.rows.max(t.cols),
            });
        }
        if t.det().abs() < 1e-12 {
            return Err(Error::invalid("linear image needs an invertible map"));
        }
        let out = match self {
            Body::HPolytope {
                dim,
                normals,
                offsets,
            } => {
                let inv_t = t.inverse()?.transpose();
                Body::HPolytope {
                    dim: *dim,
                    normals: normals.iter().map(|a| inv_t.matvec(a)).collect(),
                    offsets: offsets.clone(),
                }
            }
            Body::VPolytope { dim, vertices } => Body::VPolytope {
                dim: *dim,
                vertices: vertices.iter().map(|v| t.matvec(v)).collect(),
            },
            Body::Zonotope { dim, generators } => Body::Zonotope {
                dim: *dim,
                generators: generators.iter().map(|y| t.matvec(y)).collect(),
            },
            Body::EuclideanBall { dim, radius } => {
                // Only similarity maps keep a ball representable.
                let tt = t.transpose().matmul(t);
                let lambda2 = tt[(0, 0)];
                let mut scaled_id = Matrix::identity(*dim);
                scaled_id.scale_mut(lambda2);
                if tt.max_abs_diff(&scaled_id) > 1e-9 * lambda2.max(1.0) {
                    return Err(Error::unsupported(
                        "image of a ball under a non-similarity map",
                    ));
                }
                Body::EuclideanBall {
                    dim: *dim,
                    radius: radius * lambda2.sqrt(),
                }
            }
            Body::Polar(inner) => {
                let inv_t = t.inverse()?.transpose();
                Body::Polar(Box::new(inner.linear_image(&inv_t)?))
            }
            Body::Scaled { factor, inner } => Body::Scaled {
                factor: *factor,
                inner: Box::new(inner.linear_image(t)?),
            },
            Body::MinkowskiSum(a, b) => {
                Body::MinkowskiSum(Box::new(a.linear_image(t)?), Box::new(b.linear_image(t)?))
            }
            Body::Intersection(a, b) => {
                Body::Intersection(Box::new(a.linear_image(t)?), Box::new(b.linear_image(t)?))
            }
        };
        Ok(out.simplified())
    }

    /// Structural normalization: fold scalings into leaf data, expand polars
    /// of polytopes, merge zonotope sums and H-polytope intersections, and
    /// collapse double polars. Value-preserving.
    pub fn simplified(&self) -> Body {
        match self {
            Body::Scaled { factor, inner } => match inner.simplified() {
                Body::HPolytope {
                    dim,
                    normals,
                    offsets,
                } => Body::HPolytope {
                    dim,
                    normals,
                    offsets: offsets.iter().map(|b| b * factor).collect(),
                },
                Body::VPolytope { dim, vertices } => Body::VPolytope {
                    dim,
                    vertices: vertices.iter().map(|v| scaled(v, *factor)).collect(),
                },
                Body::Zonotope { dim, generators } => Body::Zonotope {
                    dim,
                    generators: generators.iter().map(|y| scaled(y, *factor)).collect(),
                },
                Body::EuclideanBall { dim, radius } => Body::EuclideanBall {
                    dim,
                    radius: radius * factor,
                },
                Body::Scaled {
                    factor: g,
                    inner: i,
                } => Body::Scaled {
                    factor: factor * g,
                    inner: i,
                }
                .simplified(),
                Body::MinkowskiSum(a, b) => Body::MinkowskiSum(
                    Box::new(
                        Body::Scaled {
                            factor: *factor,
                            inner: a,
                        }
                        .simplified(),
                    ),
                    Box::new(
                        Body::Scaled {
                            factor: *factor,
                            inner: b,
                        }
                        .simplified(),
                    ),
                )
                .simplified(),
                Body::Intersection(a, b) => Body::Intersection(
                    Box::new(
                        Body::Scaled {
                            factor: *factor,
                            inner: a,
                        }
                        .simplified(),
                    ),
                    Box::new(
                        Body::Scaled {
                            factor: *factor,
                            inner: b,
                        }
                        .simplified(),
                    ),
                )
                .simplified(),
                other => Body::Scaled {
                    factor: *factor,
                    inner: Box::new(other),
                },
            },
            Body::Polar(inner) => match inner.simplified() {
                Body::Polar(i) => i.simplified(),
                Body::HPolytope { .. } | Body::VPolytope { .. } | Body::EuclideanBall { .. } => {
                    inner.simplified().polar()
                }
                other => Body::Polar(Box::new(other)),
            },
            Body::MinkowskiSum(a, b) => {
                let a = a.simplified();
                let b = b.simplified();
                match (a, b) {
                    (
                        Body::Zonotope {
                            dim,
                            generators: mut ga,
                        },
                        Body::Zonotope { generators: gb, .. },
                    ) => {
                        ga.extend(gb);
                        Body::Zonotope {
                            dim,
                            generators: ga,
                        }
                    }
                    (a, b) => Body::MinkowskiSum(Box::new(a), Box::new(b)),
                }
            }
            Body::Intersection(a, b) => {
                let a = a.simplified();
                let b = b.simplified();
                match (a, b) {
                    (
                        Body::HPolytope {
                            dim,
                            normals: mut na,
                            offsets: mut oa,
                        },
                        Body::HPolytope {
                            normals: nb,
                            offsets: ob,
                            ..
                        },
                    ) => {
                        na.extend(nb);
                        oa.extend(ob);
                        Body::HPolytope {
                            dim,
                            normals: na,
                            offsets: oa,
                        }
                    }
                    (a, b) => Body::Intersection(Box::new(a), Box::new(b)),
                }
            }
            leaf => leaf.clone(),
        }
    }

    /// Support function h(self, a) = max over the body of <a, x>. Returns
    /// +inf for directions in which an unbounded component is unbounded.
    pub fn support(&self, a: &[f64]) -> Result<f64> {
        check_dim(a, self.dim())?;
        check_finite(a, "direction")?;
        match self {
            Body::HPolytope {
                normals, offsets, ..
            } => hpolytope_support(normals, offsets, a),
            Body::VPolytope { vertices, .. } => Ok(vertices
                .iter()
                .map(|v| dot(a, v).abs())
                .fold(0.0, f64::max)),
            Body::Zonotope { generators, .. } => {
                Ok(generators.iter().map(|y| dot(a, y).abs()).sum())
            }
            Body::EuclideanBall { radius, .. } => Ok(radius * norm2(a)),
            Body::Polar(inner) => inner.gauge(a),
            Body::Scaled { factor, inner } => Ok(factor * inner.support(a)?),
            Body::MinkowskiSum(p, q) => Ok(p.support(a)? + q.support(a)?),
            Body::Intersection(..) => intersection_support(self, a),
        }
    }

    /// Minkowski gauge: inf { t > 0 : x in t * body }. Returns +inf when x
    /// lies outside the span of a degenerate body.
    pub fn gauge(&self, x: &[f64]) -> Result<f64> {
        check_dim(x, self.dim())?;
        check_finite(x, "point")?;
        match self {
            Body::HPolytope {
                normals, offsets, ..
            } => Ok(normals
                .iter()
                .zip(offsets)
                .map(|(a, &b)| dot(a, x).abs() / b)
                .fold(0.0, f64::max)),
            Body::VPolytope { vertices, .. } => vpolytope_gauge(vertices, x),
            Body::Zonotope { generators, .. } => zonotope_gauge(generators, x),
            Body::EuclideanBall { radius, .. } => Ok(norm2(x) / radius),
            Body::Polar(inner) => inner.support(x),
            Body::Scaled { factor, inner } => Ok(inner.gauge(x)? / factor),
            Body::MinkowskiSum(..) => {
                let simplified = self.simplified();
                if matches!(simplified, Body::MinkowskiSum(..)) {
                    Err(Error::unsupported(
                        "gauge of a Minkowski sum that does not merge to a single representation",
                    ))
                } else {
                    simplified.gauge(x)
                }
            }
            Body::Intersection(p, q) => Ok(p.gauge(x)?.max(q.gauge(x)?)),
        }
    }

    /// Membership within tolerance; also reports the margin 1 - gauge(x)
    /// (positive inside, negative outside).
    pub fn contains_point(&self, x: &[f64], eps_feas: f64) -> Result<(bool, f64)> {
        let g = self.gauge(x)?;
        Ok((g <= 1.0 + eps_feas, 1.0 - g))
    }

    /// True if the normals/generators/vertices of the leaf span the ambient
    /// space, i.e. the body is bounded (H) or full-dimensional (V/Z).
    pub fn spans(&self) -> bool {
        let n = self.dim();
        let vecs: Vec<Vec<f64>> = match self {
            Body::HPolytope { normals, .. } => normals.clone(),
            Body::VPolytope { vertices, .. } => vertices.clone(),
            Body::Zonotope { generators, .. } => generators.clone(),
            Body::EuclideanBall { .. } => return true,
            Body::Polar(inner) => return inner.spans(),
            Body::Scaled { inner, .. } => return inner.spans(),
            // Conservative for composites: a sum spans if either part does;
            // an intersection is bounded if the merged constraints span.
            Body::MinkowskiSum(a, b) => return a.spans() || b.spans(),
            Body::Intersection(..) => {
                let s = self.simplified();
                if let Body::Intersection(a, b) = &s {
                    return a.spans() || b.spans();
                }
                return s.spans();
            }
        };
        if vecs.len() < n {
            return false;
        }
        let m = Matrix::from_rows(&vecs).expect("validated on construction");
        crate::linalg::rank(&m, 1e-10) == n
    }
}

fn hpolytope_support(normals: &[Vec<f64>], offsets: &[f64], a: &[f64]) -> Result<f64> {
    let n = a.len();
    let mut p = LpProblem::new(n).minimize(scaled(a, -1.0));
    for (nk, &bk) in normals.iter().zip(offsets) {
        p.add_leq(nk.clone(), bk);
        p.add_leq(scaled(nk, -1.0), bk);
    }
    match solve_lp(&p)? {
        LpOutcome::Optimal { objective, .. } => Ok(-objective),
        LpOutcome::Unbounded => Ok(f64::INFINITY),
        LpOutcome::Infeasible => Err(Error::numerical("support LP infeasible for a valid body")),
    }
}

fn vpolytope_gauge(vertices: &[Vec<f64>], x: &[f64]) -> Result<f64> {
    let n = x.len();
    let m = vertices.len();
    if crate::linalg::norm_inf(x) == 0.0 {
        return Ok(0.0);
    }
    // x = sum c_m v_m, minimize sum |c_m| via s_m >= |c_m|.
    let mut p = LpProblem::new(2 * m).minimize(
        (0..2 * m)
            .map(|j| if j >= m { 1.0 } else { 0.0 })
            .collect(),
    );
    for i in 0..n {
        let mut row = vec![0.0; 2 * m];
        for (j, v) in vertices.iter().enumerate() {
            row[j] = v[i];
        }
        p.add_eq(row, x[i]);
    }
    for j in 0..m {
        let mut up = vec![0.0; 2 * m];
        up[j] = 1.0;
        up[m + j] = -1.0;
        p.add_leq(up, 0.0);
        let mut dn = vec![0.0; 2 * m];
        dn[j] = -1.0;
        dn[m + j] = -1.0;
        p.add_leq(dn, 0.0);
    }
    match solve_lp(&p)? {
        LpOutcome::Optimal { objective, .. } => Ok(objective.max(0.0)),
        LpOutcome::Infeasible => Ok(f64::INFINITY),
        LpOutcome::Unbounded => Err(Error::numerical("gauge LP unbounded")),
    }
}

fn zonotope_gauge(generators: &[Vec<f64>], x: &[f64]) -> Result<f64> {
    let n = x.len();
    let m = generators.len();
    if crate::linalg::norm_inf(x) == 0.0 {
        return Ok(0.0);
    }
    if m == 0 {
        return Ok(f64::INFINITY);
    }
    // x = sum c_j y_j with |c_j| <= t, minimize t.
    let mut c = vec![0.0; m + 1];
    c[m] = 1.0;
    let mut p = LpProblem::new(m + 1).minimize(c);
    for i in 0..n {
        let mut row = vec![0.0; m + 1];
        for (j, y) in generators.iter().enumerate() {
            row[j] = y[i];
        }
        p.add_eq(row, x[i]);
    }
    for j in 0..m {
        let mut up = vec![0.0; m + 1];
        up[j] = 1.0;
        up[m] = -1.0;
        p.add_leq(up, 0.0);
        let mut dn = vec![0.0; m + 1];
        dn[j] = -1.0;
        dn[m] = -1.0;
        p.add_leq(dn, 0.0);
    }
    match solve_lp(&p)? {
        LpOutcome::Optimal { objective, .. } => Ok(objective.max(0.0)),
        LpOutcome::Infeasible => Ok(f64::INFINITY),
        LpOutcome::Unbounded => Err(Error::numerical("gauge LP unbounded")),
    }
}

/// Support of an intersection via infimal convolution of the component
/// supports: h(A cap B, a) = inf { h_A(u) + h_B(a - u) }.
///
/// The intersection tree is flattened; H-polytope components merge into one
/// constraint list whose support is an LP. One Euclidean ball component is
/// allowed alongside; its split is solved by cyclic exact line search on the
/// convex objective r*|a - sum(l_k a_k)| + sum(|l_k| b_k).
fn intersection_support(body: &Body, a: &[f64]) -> Result<f64> {
    let simplified = body.simplified();
    match &simplified {
        Body::Intersection(..) => {}
        other => return other.support(a),
    }
    let mut hparts: Vec<(Vec<f64>, f64)> = Vec::new();
    let mut ball: Option<f64> = None;
    let mut stack = vec![&simplified];
    while let Some(b) = stack.pop() {
        match b {
            Body::Intersection(p, q) => {
                stack.push(p);
                stack.push(q);
            }
            Body::HPolytope {
                normals, offsets, ..
            } => {
                for (nk, &bk) in normals.iter().zip(offsets) {
                    hparts.push((nk.clone(), bk));
                }
            }
            Body::EuclideanBall { radius, .. } => {
                if ball.replace(*radius).is_some() {
                    return Err(Error::unsupported(
                        "support of an intersection with two ball components",
                    ));
                }
            }
            _ => {
                return Err(Error::unsupported(
                    "support of an intersection with a non-polytopal, non-ball component",
                ))
            }
        }
    }
    let Some(r) = ball else {
        return hpolytope_support(
            &hparts.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>(),
            &hparts.iter().map(|&(_, b)| b).collect::<Vec<_>>(),
            a,
        );
    };
    if hparts.is_empty() {
        return Ok(r * norm2(a));
    }
    // Minimize f(l) = r * |a - sum l_k n_k| + sum |l_k| b_k by cyclic exact
    // line searches; f is convex and the l1 part is separable, so cyclic
    // descent converges.
    let k = hparts.len();
    let mut l = vec![0.0; k];
    let eval = |l: &[f64]| -> f64 {
        let mut w = a.to_vec();
        for (lk, (nk, _)) in l.iter().zip(&hparts) {
            if *lk != 0.0 {
                w = crate::linalg::add_scaled(&w, -*lk, nk);
            }
        }
        r * norm2(&w) + l.iter().zip(&hparts).map(|(lk, (_, bk))| lk.abs() * bk).sum::<f64>()
    };
    let mut best = eval(&l);
    for _sweep in 0..200 {
        let before = best;
        for idx in 0..k {
            let (nk, bk) = (&hparts[idx].0, hparts[idx].1);
            let mut w = a.to_vec();
            for (j, lj) in l.iter().enumerate() {
                if j != idx && *lj != 0.0 {
                    w = crate::linalg::add_scaled(&w, -*lj, &hparts[j].0);
                }
            }
            let rest: f64 = l
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != idx)
                .map(|(j, lj)| lj.abs() * hparts[j].1)
                .sum();
            let g = |t: f64| r * norm2(&sub(&w, &scaled(nk, t))) + t.abs() * bk + rest;
            // Bracket: any |t| with |t|*bk > current value is suboptimal.
            let bound = (best / bk).abs() + 1.0;
            let (mut lo, mut hi) = (-bound, bound);
            let phi = 0.5 * (3.0 - 5.0f64.sqrt());
            let (mut m1, mut m2) = (lo + phi * (hi - lo), hi - phi * (hi - lo));
            let (mut g1, mut g2) = (g(m1), g(m2));
            for _ in 0..120 {
                if g1 <= g2 {
                    hi = m2;
                    m2 = m1;
                    g2 = g1;
                    m1 = lo + phi * (hi - lo);
                    g1 = g(m1);
                } else {
                    lo = m1;
                    m1 = m2;
                    g1 = g2;
                    m2 = hi - phi * (hi - lo);
                    g2 = g(m2);
                }
            }
            let t = 0.5 * (lo + hi);
            // Snap to zero when the kink is the minimizer.
            let t = if g(0.0) <= g(t) { 0.0 } else { t };
            l[idx] = t;
            best = eval(&l);
        }
        if before - best < 1e-15 * (1.0 + best.abs()) {
            break;
        }
    }
    Ok(best)
}
