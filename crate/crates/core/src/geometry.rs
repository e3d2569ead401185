//! Exact polytope geometry in low dimension: vertex enumeration, facet
//! (H-representation) recovery, volumes, and body-in-body containment.
//!
//! Everything here works on the symmetric representations from `body`.
//! Vertex enumeration covers H/V-polytopes in dimension <= 3 and zonotopes
//! in dimension <= 3 (any rank); volumes cover zonotopes in any dimension,
//! parallelepipeds in any dimension, and general polytopes in dimension
//! <= 3. Containment is certified exactly when the inner body has an exact
//! finite description (vertices, or generator sums against facets) and
//! falls back to a sampled support-function comparison otherwise.

use crate::body::Body;
use crate::error::{Error, Result};
use crate::linalg::{add_scaled, cross3, dot, norm2, scaled, sub, Matrix};
use crate::net::direction_net;

const DEDUP_TOL: f64 = 1e-9;
const SUBSET_BUDGET: u64 = 200_000;

/// How a containment verdict was certified.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContainmentMode {
    /// Finitely many exact checks (vertex gauges or facet inequalities).
    Exact,
    /// Support functions compared on a fixed direction net only.
    Sampled,
}

#[derive(Debug, Clone)]
pub struct ContainmentCheck {
    pub holds: bool,
    pub mode: ContainmentMode,
    /// Worst slack: 1 - gauge for vertex checks, offset minus attained value
    /// for facet checks, support difference for sampled checks. Negative
    /// when the containment fails.
    pub margin: f64,
    /// Point or direction attaining the worst slack.
    pub witness: Option<Vec<f64>>,
}

fn binomial(m: usize, n: usize) -> u64 {
    if n > m {
        return 0;
    }
    let mut out: u64 = 1;
    for k in 0..n.min(m - n) {
        out = out.saturating_mul((m - k) as u64) / (k as u64 + 1);
    }
    out
}

fn dedup_points(points: &mut Vec<Vec<f64>>, tol: f64) {
    let mut kept: Vec<Vec<f64>> = Vec::new();
    'outer: for p in points.drain(..) {
        for q in &kept {
            if norm2(&sub(&p, q)) <= tol {
                continue 'outer;
            }
        }
        kept.push(p);
    }
    *points = kept;
}

/// Convex hull of a 2-D point set, counter-clockwise, via monotone chain.
pub fn hull_2d(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut pts: Vec<Vec<f64>> = points.to_vec();
    let scale = pts
        .iter()
        .map(|p| norm2(p))
        .fold(1.0_f64, f64::max);
    dedup_points(&mut pts, 1e-12 * scale);
    pts.sort_by(|a, b| {
        a[0].partial_cmp(&b[0])
            .unwrap()
            .then(a[1].partial_cmp(&b[1]).unwrap())
    });
    if pts.len() <= 2 {
        return pts;
    }
    let turn = |o: &[f64], a: &[f64], b: &[f64]| {
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let eps = 1e-12 * scale * scale;
    let mut lower: Vec<Vec<f64>> = Vec::new();
    for p in &pts {
        while lower.len() >= 2
            && turn(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= eps
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Vec<f64>> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && turn(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= eps
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Shoelace area of a polygon given in boundary order.
pub fn polygon_area(poly: &[Vec<f64>]) -> f64 {
    let k = poly.len();
    if k < 3 {
        return 0.0;
    }
    let mut twice = 0.0;
    for i in 0..k {
        let a = &poly[i];
        let b = &poly[(i + 1) % k];
        twice += a[0] * b[1] - a[1] * b[0];
    }
    twice.abs() / 2.0
}

/// Boundary vertices of the zonogon with the given 2-D generators.
fn zonogon_vertices(generators: &[Vec<f64>]) -> Vec<Vec<f64>> {
    // Canonicalize generators into the closed upper half plane and merge
    // collinear ones so the boundary walk is strictly turning.
    let mut gens: Vec<Vec<f64>> = generators
        .iter()
        .filter(|y| norm2(y) > 0.0)
        .map(|y| {
            if y[1] < 0.0 || (y[1] == 0.0 && y[0] < 0.0) {
                scaled(y, -1.0)
            } else {
                y.clone()
            }
        })
        .collect();
    if gens.is_empty() {
        return vec![vec![0.0, 0.0]];
    }
    gens.sort_by(|a, b| {
        a[1].atan2(a[0])
            .partial_cmp(&b[1].atan2(b[0]))
            .unwrap()
    });
    let mut merged: Vec<Vec<f64>> = Vec::new();
    for y in gens {
        if let Some(last) = merged.last_mut() {
            let cross = last[0] * y[1] - last[1] * y[0];
            if cross.abs() <= 1e-12 * norm2(last) * norm2(&y) {
                last[0] += y[0];
                last[1] += y[1];
                continue;
            }
        }
        merged.push(y);
    }
    let total: Vec<f64> = merged
        .iter()
        .fold(vec![0.0, 0.0], |acc, y| vec![acc[0] + y[0], acc[1] + y[1]]);
    let mut v = scaled(&total, -1.0);
    let mut chain = Vec::with_capacity(merged.len() + 1);
    for y in &merged {
        chain.push(v.clone());
        v = add_scaled(&v, 2.0, y);
    }
    chain.push(v);
    let mut out = chain.clone();
    out.extend(chain.iter().map(|p| scaled(p, -1.0)));
    let scale = norm2(&total).max(1.0);
    dedup_points(&mut out, DEDUP_TOL * scale);
    out
}

fn orthonormal_complement_basis(u: &[f64]) -> (Vec<f64>, Vec<f64>) {
    // u is a unit 3-vector; build two unit vectors spanning its orthogonal
    // plane.
    let pick = if u[0].abs() <= u[1].abs() && u[0].abs() <= u[2].abs() {
        vec![1.0, 0.0, 0.0]
    } else if u[1].abs() <= u[2].abs() {
        vec![0.0, 1.0, 0.0]
    } else {
        vec![0.0, 0.0, 1.0]
    };
    let b1 = cross3(u, &pick);
    let b1 = scaled(&b1, 1.0 / norm2(&b1));
    let b2 = cross3(u, &b1);
    let b2 = scaled(&b2, 1.0 / norm2(&b2));
    (b1, b2)
}

fn zonotope_vertices(dim: usize, generators: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let gens: Vec<Vec<f64>> = generators.iter().filter(|y| norm2(y) > 0.0).cloned().collect();
    if gens.is_empty() {
        return Ok(vec![vec![0.0; dim]]);
    }
    if dim == 1 {
        let s: f64 = gens.iter().map(|y| y[0].abs()).sum();
        return Ok(vec![vec![s], vec![-s]]);
    }
    if dim == 2 {
        return Ok(zonogon_vertices(&gens));
    }
    if dim != 3 {
        return Err(Error::unsupported(
            "zonotope vertex enumeration above dimension 3",
        ));
    }
    let mat = Matrix::from_rows(&gens)?;
    let rank = crate::linalg::rank(&mat, 1e-10);
    let scale = gens.iter().map(|y| norm2(y)).fold(0.0_f64, f64::max);
    match rank {
        0 => Ok(vec![vec![0.0; 3]]),
        1 => {
            let u = scaled(&gens[0], 1.0 / norm2(&gens[0]));
            let s: f64 = gens.iter().map(|y| dot(&u, y).abs()).sum();
            Ok(vec![scaled(&u, s), scaled(&u, -s)])
        }
        2 => {
            // Planar zonotope: work in an orthonormal basis of its plane.
            let (_, v) = crate::linalg::svd_values(&mat);
            let b1: Vec<f64> = (0..3).map(|i| v[(i, 0)]).collect();
            let b2: Vec<f64> = (0..3).map(|i| v[(i, 1)]).collect();
            let planar: Vec<Vec<f64>> = gens
                .iter()
                .map(|y| vec![dot(&b1, y), dot(&b2, y)])
                .collect();
            Ok(zonogon_vertices(&planar)
                .into_iter()
                .map(|w| {
                    let mut p = scaled(&b1, w[0]);
                    p = add_scaled(&p, w[1], &b2);
                    p
                })
                .collect())
        }
        _ => {
            // Full rank: sweep facet normals (pairwise cross products); each
            // facet is a translated zonogon of the coplanar generators.
            let mut normals: Vec<Vec<f64>> = Vec::new();
            for i in 0..gens.len() {
                for j in (i + 1)..gens.len() {
                    let c = cross3(&gens[i], &gens[j]);
                    let nc = norm2(&c);
                    if nc <= 1e-12 * norm2(&gens[i]) * norm2(&gens[j]) {
                        continue;
                    }
                    let mut u = scaled(&c, 1.0 / nc);
                    for k in 0..3 {
                        if u[k].abs() > 1e-9 {
                            if u[k] < 0.0 {
                                u = scaled(&u, -1.0);
                            }
                            break;
                        }
                    }
                    if !normals.iter().any(|w| norm2(&sub(w, &u)) < 1e-9) {
                        normals.push(u);
                    }
                }
            }
            let mut verts: Vec<Vec<f64>> = Vec::new();
            for u0 in &normals {
                for sign in [1.0, -1.0] {
                    let u = scaled(u0, sign);
                    let tolc = 1e-9 * scale;
                    let mut base = vec![0.0; 3];
                    let mut coplanar: Vec<&Vec<f64>> = Vec::new();
                    for y in &gens {
                        let d = dot(&u, y);
                        if d > tolc {
                            base = add_scaled(&base, 1.0, y);
                        } else if d < -tolc {
                            base = add_scaled(&base, -1.0, y);
                        } else {
                            coplanar.push(y);
                        }
                    }
                    let (b1, b2) = orthonormal_complement_basis(&u);
                    let planar: Vec<Vec<f64>> = coplanar
                        .iter()
                        .map(|y| vec![dot(&b1, y), dot(&b2, y)])
                        .collect();
                    for w in zonogon_vertices(&planar) {
                        let mut p = base.clone();
                        p = add_scaled(&p, w[0], &b1);
                        p = add_scaled(&p, w[1], &b2);
                        verts.push(p);
                    }
                }
            }
            dedup_points(&mut verts, DEDUP_TOL * scale.max(1.0));
            Ok(verts)
        }
    }
}

fn hpolytope_vertices(
    dim: usize,
    normals: &[Vec<f64>],
    offsets: &[f64],
) -> Result<Vec<Vec<f64>>> {
    // Work with the full signed constraint list <a, x> <= b.
    let mut rows: Vec<(Vec<f64>, f64)> = Vec::new();
    for (a, &b) in normals.iter().zip(offsets) {
        rows.push((a.clone(), b));
        rows.push((scaled(a, -1.0), b));
    }
    let feasible = |x: &[f64]| {
        rows.iter()
            .all(|(a, b)| dot(a, x) <= b + 1e-9 * b.abs().max(1.0))
    };
    let scale = offsets.iter().fold(1.0_f64, |m, &b| m.max(b));
    let mut verts: Vec<Vec<f64>> = Vec::new();
    match dim {
        1 => {
            let t = normals
                .iter()
                .zip(offsets)
                .map(|(a, &b)| b / a[0].abs())
                .fold(f64::INFINITY, f64::min);
            verts.push(vec![t]);
            verts.push(vec![-t]);
        }
        2 => {
            for i in 0..rows.len() {
                for j in (i + 1)..rows.len() {
                    let (a1, b1) = (&rows[i].0, rows[i].1);
                    let (a2, b2) = (&rows[j].0, rows[j].1);
                    let det = a1[0] * a2[1] - a1[1] * a2[0];
                    if det.abs() <= 1e-12 * norm2(a1) * norm2(a2) {
                        continue;
                    }
                    let x = vec![
                        (b1 * a2[1] - b2 * a1[1]) / det,
                        (a1[0] * b2 - a2[0] * b1) / det,
                    ];
                    if x.iter().all(|c| c.is_finite()) && feasible(&x) {
                        verts.push(x);
                    }
                }
            }
        }
        3 => {
            let k = rows.len();
            if binomial(k, 3) > SUBSET_BUDGET {
                return Err(Error::budget("too many facet triples to enumerate"));
            }
            for i in 0..k {
                for j in (i + 1)..k {
                    for l in (j + 1)..k {
                        let m = Matrix::from_rows(&[
                            rows[i].0.clone(),
                            rows[j].0.clone(),
                            rows[l].0.clone(),
                        ])?;
                        if m.det().abs() <= 1e-10 {
                            continue;
                        }
                        let x = match m.solve(&[rows[i].1, rows[j].1, rows[l].1]) {
                            Ok(x) => x,
                            Err(_) => continue,
                        };
                        if x.iter().all(|c| c.is_finite()) && feasible(&x) {
                            verts.push(x);
                        }
                    }
                }
            }
        }
        _ => {
            return Err(Error::unsupported(
                "H-polytope vertex enumeration above dimension 3",
            ))
        }
    }
    dedup_points(&mut verts, DEDUP_TOL * scale);
    if verts.is_empty() {
        return Err(Error::numerical("vertex enumeration found no vertices"));
    }
    Ok(verts)
}

/// All extreme points of a polytopal body, antipodal pairs included.
///
/// For a V-polytope in dimension 3 the returned set may include input
/// points lying on faces (they are not pruned); every true vertex is
/// present, which is what containment and facet recovery need.
pub fn vertices(body: &Body) -> Result<Vec<Vec<f64>>> {
    let b = body.simplified();
    match &b {
        Body::HPolytope {
            dim,
            normals,
            offsets,
        } => {
            if !b.spans() {
                return Err(Error::unsupported(
                    "vertex enumeration of an unbounded H-polytope",
                ));
            }
            hpolytope_vertices(*dim, normals, offsets)
        }
        Body::VPolytope { dim, vertices: vs } => {
            let mut pts: Vec<Vec<f64>> = vs.to_vec();
            pts.extend(vs.iter().map(|v| scaled(v, -1.0)));
            let scale = pts.iter().map(|p| norm2(p)).fold(1.0_f64, f64::max);
            dedup_points(&mut pts, DEDUP_TOL * scale);
            match dim {
                1 => {
                    let t = pts.iter().map(|p| p[0].abs()).fold(0.0_f64, f64::max);
                    Ok(vec![vec![t], vec![-t]])
                }
                2 => Ok(hull_2d(&pts)),
                3 => Ok(pts),
                _ => Err(Error::unsupported(
                    "V-polytope vertex enumeration above dimension 3",
                )),
            }
        }
        Body::Zonotope { dim, generators } => zonotope_vertices(*dim, generators),
        Body::EuclideanBall { .. } => Err(Error::unsupported("a ball has no vertex description")),
        _ => Err(Error::unsupported(
            "vertex enumeration of a non-polytopal composite body",
        )),
    }
}

/// Facet description (one normal/offset per antipodal facet pair) of a
/// polytopal body in dimension <= 3.
pub fn to_hrep(body: &Body) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    let b = body.simplified();
    match &b {
        Body::HPolytope {
            normals, offsets, ..
        } => Ok((normals.clone(), offsets.clone())),
        Body::Zonotope { dim, generators } => {
            let gens: Vec<Vec<f64>> =
                generators.iter().filter(|y| norm2(y) > 0.0).cloned().collect();
            match dim {
                1 => {
                    let s: f64 = gens.iter().map(|y| y[0].abs()).sum();
                    if s == 0.0 {
                        return Err(Error::unsupported("facets of a degenerate zonotope"));
                    }
                    Ok((vec![vec![1.0]], vec![s]))
                }
                2 => {
                    let mut normals: Vec<Vec<f64>> = Vec::new();
                    for y in &gens {
                        let mut u = vec![-y[1], y[0]];
                        let nu = norm2(&u);
                        u = scaled(&u, 1.0 / nu);
                        if u[0] < 0.0 || (u[0] == 0.0 && u[1] < 0.0) {
                            u = scaled(&u, -1.0);
                        }
                        if !normals.iter().any(|w| norm2(&sub(w, &u)) < 1e-9) {
                            normals.push(u);
                        }
                    }
                    let offsets = normals
                        .iter()
                        .map(|u| gens.iter().map(|y| dot(u, y).abs()).sum())
                        .collect();
                    if !b.spans() {
                        return Err(Error::unsupported("facets of a degenerate zonotope"));
                    }
                    Ok((normals, offsets))
                }
                3 => {
                    if !b.spans() {
                        return Err(Error::unsupported("facets of a degenerate zonotope"));
                    }
                    let mut normals: Vec<Vec<f64>> = Vec::new();
                    for i in 0..gens.len() {
                        for j in (i + 1)..gens.len() {
                            let c = cross3(&gens[i], &gens[j]);
                            let nc = norm2(&c);
                            if nc <= 1e-12 * norm2(&gens[i]) * norm2(&gens[j]) {
                                continue;
                            }
                            let mut u = scaled(&c, 1.0 / nc);
                            for k in 0..3 {
                                if u[k].abs() > 1e-9 {
                                    if u[k] < 0.0 {
                                        u = scaled(&u, -1.0);
                                    }
                                    break;
                                }
                            }
                            if !normals.iter().any(|w| norm2(&sub(w, &u)) < 1e-9) {
                                normals.push(u);
                            }
                        }
                    }
                    let offsets = normals
                        .iter()
                        .map(|u| gens.iter().map(|y| dot(u, y).abs()).sum())
                        .collect();
                    Ok((normals, offsets))
                }
                _ => Err(Error::unsupported(
                    "zonotope facet recovery above dimension 3",
                )),
            }
        }
        Body::VPolytope { dim, .. } => {
            let verts = vertices(&b)?;
            match dim {
                1 => {
                    let t = verts.iter().map(|v| v[0].abs()).fold(0.0_f64, f64::max);
                    Ok((vec![vec![1.0]], vec![t]))
                }
                2 => {
                    let hull = hull_2d(&verts);
                    if hull.len() < 3 {
                        return Err(Error::unsupported("facets of a degenerate polytope"));
                    }
                    let mut normals: Vec<Vec<f64>> = Vec::new();
                    let mut offsets: Vec<f64> = Vec::new();
                    for i in 0..hull.len() {
                        let p = &hull[i];
                        let q = &hull[(i + 1) % hull.len()];
                        let e = sub(q, p);
                        let mut u = vec![e[1], -e[0]];
                        let nu = norm2(&u);
                        if nu == 0.0 {
                            continue;
                        }
                        u = scaled(&u, 1.0 / nu);
                        let off = dot(&u, p);
                        let (u, off) = if off < 0.0 {
                            (scaled(&u, -1.0), -off)
                        } else {
                            (u, off)
                        };
                        if off <= 0.0 {
                            continue;
                        }
                        if !normals
                            .iter()
                            .any(|w| norm2(&sub(w, &u)) < 1e-9 || norm2(&add_scaled(w, 1.0, &u)) < 1e-9)
                        {
                            normals.push(u);
                            offsets.push(off);
                        }
                    }
                    Ok((normals, offsets))
                }
                3 => {
                    let k = verts.len();
                    if binomial(k, 3) > SUBSET_BUDGET {
                        return Err(Error::budget("too many vertex triples to scan for facets"));
                    }
                    let scale = verts.iter().map(|v| norm2(v)).fold(1.0_f64, f64::max);
                    let mut normals: Vec<Vec<f64>> = Vec::new();
                    let mut offsets: Vec<f64> = Vec::new();
                    for i in 0..k {
                        for j in (i + 1)..k {
                            for l in (j + 1)..k {
                                let e1 = sub(&verts[j], &verts[i]);
                                let e2 = sub(&verts[l], &verts[i]);
                                let c = cross3(&e1, &e2);
                                let nc = norm2(&c);
                                if nc <= 1e-10 * scale * scale {
                                    continue;
                                }
                                let u = scaled(&c, 1.0 / nc);
                                let off = dot(&u, &verts[i]);
                                let (u, off) = if off < 0.0 {
                                    (scaled(&u, -1.0), -off)
                                } else {
                                    (u, off)
                                };
                                if off <= 1e-9 * scale {
                                    continue;
                                }
                                let max_d = verts
                                    .iter()
                                    .map(|v| dot(&u, v).abs())
                                    .fold(0.0_f64, f64::max);
                                if max_d > off + 1e-9 * scale {
                                    continue;
                                }
                                if !normals.iter().any(|w| {
                                    norm2(&sub(w, &u)) < 1e-9
                                        || norm2(&add_scaled(w, 1.0, &u)) < 1e-9
                                }) {
                                    normals.push(u);
                                    offsets.push(off);
                                }
                            }
                        }
                    }
                    if normals.is_empty() {
                        return Err(Error::unsupported("facets of a degenerate polytope"));
                    }
                    Ok((normals, offsets))
                }
                _ => Err(Error::unsupported(
                    "V-polytope facet recovery above dimension 3",
                )),
            }
        }
        _ => Err(Error::unsupported(
            "facet recovery for a non-polytopal body",
        )),
    }
}

fn polytope_volume_3d(verts: &[Vec<f64>], normals: &[Vec<f64>], offsets: &[f64]) -> f64 {
    let scale = verts.iter().map(|v| norm2(v)).fold(1.0_f64, f64::max);
    let mut vol = 0.0;
    for (u0, &off) in normals.iter().zip(offsets) {
        for sign in [1.0, -1.0] {
            let u = scaled(u0, sign);
            let on_facet: Vec<Vec<f64>> = verts
                .iter()
                .filter(|v| (dot(&u, v) - off).abs() <= 1e-7 * scale.max(1.0))
                .cloned()
                .collect();
            if on_facet.len() < 3 {
                continue;
            }
            let (b1, b2) = orthonormal_complement_basis(&u);
            let planar: Vec<Vec<f64>> = on_facet
                .iter()
                .map(|v| vec![dot(&b1, v), dot(&b2, v)])
                .collect();
            let area = polygon_area(&hull_2d(&planar));
            vol += area * off / 3.0;
        }
    }
    vol
}

/// Volume of a polytopal body: zonotopes in any dimension (generator
/// determinant expansion), parallelepipeds in any dimension, and general
/// H/V-polytopes in dimension <= 3.
pub fn volume(body: &Body) -> Result<f64> {
    let b = body.simplified();
    match &b {
        Body::Zonotope { dim, generators } => {
            let n = *dim;
            let gens: Vec<&Vec<f64>> =
                generators.iter().filter(|y| norm2(y) > 0.0).collect();
            let m = gens.len();
            if m < n {
                return Ok(0.0);
            }
            if binomial(m, n) > SUBSET_BUDGET {
                return Err(Error::budget(
                    "zonotope volume with too many generator subsets",
                ));
            }
            // Sum |det| over all n-subsets of generators.
            let mut idx: Vec<usize> = (0..n).collect();
            let mut total = 0.0;
            loop {
                let cols: Vec<Vec<f64>> = idx.iter().map(|&j| gens[j].clone()).collect();
                let m2 = Matrix::from_cols(&cols)?;
                total += m2.det().abs();
                // Advance to the next n-combination.
                let mut i = n;
                loop {
                    if i == 0 {
                        return Ok(total * (1u64 << n) as f64);
                    }
                    i -= 1;
                    if idx[i] != i + m - n {
                        break;
                    }
                }
                idx[i] += 1;
                for j in (i + 1)..n {
                    idx[j] = idx[j - 1] + 1;
                }
            }
        }
        Body::HPolytope {
            dim,
            normals,
            offsets,
        } => {
            let n = *dim;
            if normals.len() == n {
                let a = Matrix::from_rows(normals)?;
                let d = a.det().abs();
                if d < 1e-300 {
                    return Ok(0.0);
                }
                let prod: f64 = offsets.iter().product();
                return Ok((1u64 << n) as f64 * prod / d);
            }
            match n {
                1 => {
                    let t = normals
                        .iter()
                        .zip(offsets)
                        .map(|(a, &bb)| bb / a[0].abs())
                        .fold(f64::INFINITY, f64::min);
                    Ok(2.0 * t)
                }
                2 => {
                    let verts = vertices(&b)?;
                    Ok(polygon_area(&hull_2d(&verts)))
                }
                3 => {
                    let verts = vertices(&b)?;
                    let unit_normals: Vec<Vec<f64>> =
                        normals.iter().map(|a| scaled(a, 1.0 / norm2(a))).collect();
                    let unit_offsets: Vec<f64> = normals
                        .iter()
                        .zip(offsets)
                        .map(|(a, &bb)| bb / norm2(a))
                        .collect();
                    Ok(polytope_volume_3d(&verts, &unit_normals, &unit_offsets))
                }
                _ => Err(Error::unsupported(
                    "H-polytope volume above dimension 3 (except parallelepipeds)",
                )),
            }
        }
        Body::VPolytope { dim, .. } => match *dim {
            1 => {
                let verts = vertices(&b)?;
                let t = verts.iter().map(|v| v[0].abs()).fold(0.0_f64, f64::max);
                Ok(2.0 * t)
            }
            2 => {
                let verts = vertices(&b)?;
                Ok(polygon_area(&hull_2d(&verts)))
            }
            3 => {
                let verts = vertices(&b)?;
                let (normals, offsets) = to_hrep(&b)?;
                Ok(polytope_volume_3d(&verts, &normals, &offsets))
            }
            _ => Err(Error::unsupported("V-polytope volume above dimension 3")),
        },
        _ => Err(Error::unsupported("volume of a non-polytopal body")),
    }
}

/// Certified containment `inner` within `(1 + eps) * outer`.
pub fn contains_body(inner: &Body, outer: &Body, eps: f64) -> Result<ContainmentCheck> {
    if inner.dim() != outer.dim() {
        return Err(Error::DimensionMismatch {
            expected: outer.dim(),
            got: inner.dim(),
        });
    }
    let inner_s = inner.simplified();
    let outer_s = outer.simplified();

    // Zonotope inside an H-polytope: per-facet generator sums are exact in
    // any dimension.
    if let (Body::Zonotope { generators, .. }, Body::HPolytope {
        normals, offsets, ..
    }) = (&inner_s, &outer_s)
    {
        let mut worst = f64::INFINITY;
        let mut witness = None;
        for (a, &bo) in normals.iter().zip(offsets) {
            let attained: f64 = generators.iter().map(|y| dot(a, y).abs()).sum();
            let slack = bo - attained;
            if slack < worst {
                worst = slack;
                witness = Some(a.clone());
            }
        }
        return Ok(ContainmentCheck {
            holds: worst >= -eps * offsets.iter().fold(1.0_f64, |m, &b| m.max(b)),
            mode: ContainmentMode::Exact,
            margin: worst,
            witness,
        });
    }

    // Euclidean ball inside polytopal/intersection outers: facet distances.
    if let Body::EuclideanBall { radius, .. } = &inner_s {
        let mut parts = vec![&outer_s];
        let mut rows: Vec<(Vec<f64>, f64)> = Vec::new();
        let mut outer_ball: Option<f64> = None;
        let mut polytopal = true;
        while let Some(p) = parts.pop() {
            match p {
                Body::Intersection(a, b2) => {
                    parts.push(a);
                    parts.push(b2);
                }
                Body::HPolytope {
                    normals, offsets, ..
                } => {
                    for (a, &bo) in normals.iter().zip(offsets) {
                        rows.push((a.clone(), bo));
                    }
                }
                Body::EuclideanBall { radius: r2, .. } => {
                    outer_ball = Some(outer_ball.map_or(*r2, |r: f64| r.min(*r2)));
                }
                _ => {
                    polytopal = false;
                    break;
                }
            }
        }
        if polytopal {
            let mut worst = f64::INFINITY;
            let mut witness = None;
            for (a, bo) in &rows {
                let slack = bo - radius * norm2(a);
                if slack < worst {
                    worst = slack;
                    witness = Some(a.clone());
                }
            }
            if let Some(r2) = outer_ball {
                let slack = r2 - radius;
                if slack < worst {
                    worst = slack;
                    witness = None;
                }
            }
            if worst.is_finite() {
                return Ok(ContainmentCheck {
                    holds: worst >= -eps,
                    mode: ContainmentMode::Exact,
                    margin: worst,
                    witness,
                });
            }
        }
    }

    // Vertex route: gauge every extreme point of the inner body.
    if let Ok(verts) = vertices(&inner_s) {
        let mut worst = f64::INFINITY;
        let mut witness = None;
        let mut gauge_ok = true;
        for v in &verts {
            match outer_s.gauge(v) {
                Ok(g) => {
                    let slack = 1.0 - g;
                    if slack < worst {
                        worst = slack;
                        witness = Some(v.clone());
                    }
                }
                Err(_) => {
                    gauge_ok = false;
                    break;
                }
            }
        }
        if gauge_ok {
            return Ok(ContainmentCheck {
                holds: worst >= -eps,
                mode: ContainmentMode::Exact,
                margin: worst,
                witness,
            });
        }
    }

    // Sampled fallback: compare support functions on the direction net.
    let net = direction_net(inner.dim());
    let mut worst = f64::INFINITY;
    let mut witness = None;
    for u in net.iter() {
        let hi = inner_s.support(u)?;
        let ho = outer_s.support(u)?;
        if !hi.is_finite() || !ho.is_finite() {
            return Err(Error::unsupported(
                "sampled containment with unbounded supports",
            ));
        }
        let slack = ho - hi;
        if slack < worst {
            worst = slack;
            witness = Some(u.clone());
        }
    }
    Ok(ContainmentCheck {
        holds: worst >= -eps,
        mode: ContainmentMode::Sampled,
        margin: worst,
        witness,
    })
}

/// Largest support-function gap between two bodies over the direction net;
/// equals the Hausdorff distance up to net resolution.
pub fn hausdorff_on_net(a: &Body, b: &Body) -> Result<f64> {
    let net = direction_net(a.dim());
    let mut worst = 0.0_f64;
    for u in net.iter() {
        let ha = a.support(u)?;
        let hb = b.support(u)?;
        if !ha.is_finite() || !hb.is_finite() {
            return Err(Error::unsupported("support gap with unbounded supports"));
        }
        worst = worst.max((ha - hb).abs());
    }
    Ok(worst)
}
