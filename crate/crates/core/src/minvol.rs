//! Volume minimization over certificate zonotopes.
//!
//! Among all certificates drawn from a fixed functional pool, the
//! self-certifying ones (enlargement equal to the generator zonotope)
//! can be ranked by zonotope volume. For a fixed choice of functionals
//! F the vectors form an affine family Y = Y_p + C N^T over the null
//! space N of F^T, and the volume 2^n sum |det| is convex along each
//! coordinate of C because a determinant is affine in a rank-one row
//! shift. Cyclic golden-section descent per coordinate therefore finds
//! a coordinatewise minimum, and random restarts over functional
//! subsets search the combinatorial part.

use crate::body::Body;
use crate::certificate::{verify_certificate, Certificate, Pair};
use crate::error::{Error, Result};
use crate::geometry::volume;
use crate::linalg::{norm2, null_space, rank, Matrix};
use crate::net::plane_directions;
use crate::rotation::rng_from_seed;
use crate::search::FunctionalPool;
use crate::space::NormedSpace;
use crate::tol::TolerancePolicy;
use rand::Rng;

/// A record of the best volume after a restart improved it.
#[derive(Debug, Clone)]
pub struct VolumeImprovement {
    pub restart: usize,
    pub volume: f64,
}

#[derive(Debug, Clone)]
pub struct MinVolReport {
    pub certificate: Certificate,
    pub volume: f64,
    /// Known floor for the volume when the space is Euclidean: no
    /// certificate zonotope beats the cube's 2^n.
    pub lower_bound: Option<f64>,
    pub history: Vec<VolumeImprovement>,
    pub restarts: usize,
    /// Restarts discarded because the drawn functionals did not span.
    pub degenerate_subsets: usize,
}

/// 2^n sum of |det| over n-subsets of the generator columns.
fn zonotope_volume(gens: &[Vec<f64>], n: usize) -> f64 {
    let m = gens.len();
    if m < n {
        return 0.0;
    }
    let mut idx: Vec<usize> = (0..n).collect();
    let mut total = 0.0;
    loop {
        let det = match n {
            1 => gens[idx[0]][0],
            2 => {
                let (a, b) = (&gens[idx[0]], &gens[idx[1]]);
                a[0] * b[1] - a[1] * b[0]
            }
            _ => {
                let cols: Vec<Vec<f64>> = idx.iter().map(|&j| gens[j].clone()).collect();
                Matrix::from_cols(&cols)
                    .map(|m2| m2.det())
                    .unwrap_or(0.0)
            }
        };
        total += det.abs();
        let mut i = n;
        loop {
            if i == 0 {
                return total * (1u64 << n) as f64;
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

/// Generators for parameter values c: column j of Y_p plus the
/// null-space mixing sum_k c[r][k] ns_k[j] on row r.
fn generators_at(yp: &Matrix, ns: &[Vec<f64>], c: &[Vec<f64>], n: usize, m: usize) -> Vec<Vec<f64>> {
    (0..m)
        .map(|j| {
            (0..n)
                .map(|r| {
                    let mut v = yp[(r, j)];
                    for (k, z) in ns.iter().enumerate() {
                        v += c[r][k] * z[j];
                    }
                    v
                })
                .collect()
        })
        .collect()
}

/// Minimizes a one-dimensional convex function by golden-section search
/// after expanding a bracket around the start point.
fn golden_minimize(mut eval: impl FnMut(f64) -> f64, start: f64) -> f64 {
    let phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut h = 1.0;
    let f0 = eval(start);
    let mut lo = start - h;
    let mut hi = start + h;
    for _ in 0..12 {
        let grow_lo = eval(lo) < f0;
        let grow_hi = eval(hi) < f0;
        if !grow_lo && !grow_hi {
            break;
        }
        h *= 2.0;
        lo = start - h;
        hi = start + h;
    }
    let mut a = lo;
    let mut b = hi;
    let mut x1 = b - phi * (b - a);
    let mut x2 = a + phi * (b - a);
    let mut f1 = eval(x1);
    let mut f2 = eval(x2);
    while b - a > 1e-10 {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = eval(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = eval(x2);
        }
    }
    let mid = 0.5 * (a + b);
    if eval(mid) <= f0 {
        mid
    } else {
        start
    }
}

/// Draws `count` distinct indices below `len` using the given RNG.
fn draw_subset(len: usize, count: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..len).collect();
    for i in 0..count {
        let j = rng.gen_range(i..len);
        idx.swap(i, j);
    }
    let mut subset = idx[..count].to_vec();
    subset.sort_unstable();
    subset
}

/// Multi-start search for the smallest-volume certificate zonotope over
/// `n_gens`-element subsets of the pool. Each restart draws a random
/// spanning subset, parametrizes the identity-reproducing vector
/// families through the null space, and descends the volume coordinate
/// by coordinate. The best verified certificate wins; its enlargement
/// is its own zonotope.
pub fn min_volume_search(
    space: &NormedSpace,
    pool: &FunctionalPool,
    n_gens: usize,
    restarts: usize,
    seed: u64,
    pol: &TolerancePolicy,
) -> Result<MinVolReport> {
    pol.validate()?;
    let n = space.dim();
    if pool.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: pool.dim(),
        });
    }
    if n_gens < n {
        return Err(Error::invalid(
            "generator budget must be at least the dimension",
        ));
    }
    if n_gens > pool.len() {
        return Err(Error::invalid(format!(
            "generator budget {n_gens} exceeds the pool size {}",
            pool.len()
        )));
    }
    if restarts == 0 {
        return Err(Error::invalid("the search needs at least one restart"));
    }
    let functionals: Vec<Vec<f64>> = pool.functionals().cloned().collect();
    let mut rng = rng_from_seed(seed);
    let mut best: Option<(Certificate, f64)> = None;
    let mut history = Vec::new();
    let mut degenerate = 0usize;

    for restart in 0..restarts {
        let subset = draw_subset(functionals.len(), n_gens, &mut rng);
        let rows: Vec<Vec<f64>> = subset.iter().map(|&j| functionals[j].clone()).collect();
        let jitter: Vec<f64> = (0..n * (n_gens - n))
            .map(|_| rng.gen_range(-0.5..0.5))
            .collect();
        let f = Matrix::from_rows(&rows)?;
        if rank(&f, 1e-10) < n {
            degenerate += 1;
            continue;
        }
        // Minimum-Frobenius particular solution Y_p = (F^T F)^{-1} F^T.
        let ft = f.transpose();
        let gram = ft.matmul(&f);
        let yp = gram.inverse()?.matmul(&ft);
        let ns = null_space(&ft, 1e-10);
        let dof = ns.len();
        let mut c: Vec<Vec<f64>> = (0..n).map(|_| vec![0.0; dof]).collect();
        if restart % 2 == 1 {
            for r in 0..n {
                for k in 0..dof {
                    c[r][k] = jitter[r * dof + k];
                }
            }
        }
        let m = n_gens;
        let mut current = zonotope_volume(&generators_at(&yp, &ns, &c, n, m), n);
        for _pass in 0..50 {
            let before = current;
            for r in 0..n {
                for k in 0..dof {
                    let t = golden_minimize(
                        |v| {
                            let mut trial = c.clone();
                            trial[r][k] = v;
                            zonotope_volume(&generators_at(&yp, &ns, &trial, n, m), n)
                        },
                        c[r][k],
                    );
                    c[r][k] = t;
                }
            }
            current = zonotope_volume(&generators_at(&yp, &ns, &c, n, m), n);
            if before - current < 1e-12 * (1.0 + before) {
                break;
            }
        }
        let gens = generators_at(&yp, &ns, &c, n, m);
        let mut pairs = Vec::new();
        let mut kept = Vec::new();
        for (local, &j) in subset.iter().enumerate() {
            if norm2(&gens[local]) > 1e-10 {
                pairs.push(Pair {
                    functional: functionals[j].clone(),
                    vector: gens[local].clone(),
                });
                kept.push(gens[local].clone());
            }
        }
        let enlargement = Body::zonotope(n, kept)?;
        let cert = Certificate::new(space.clone(), pairs, enlargement)?;
        let report = match verify_certificate(&cert, pol) {
            Ok(r) => r,
            Err(_) => continue,
        };
        if !report.valid {
            continue;
        }
        let vol = volume(cert.enlargement())?;
        if best.as_ref().map_or(true, |(_, v)| vol < *v - 1e-12) {
            history.push(VolumeImprovement {
                restart,
                volume: vol,
            });
            best = Some((cert, vol));
        }
    }

    let (certificate, best_volume) = best.ok_or_else(|| {
        Error::numerical("no restart produced a verifiable certificate")
    })?;
    let lower_bound = match space.unit_ball().simplified() {
        Body::EuclideanBall { radius, .. } if (radius - 1.0).abs() < 1e-12 => {
            Some((1u64 << n) as f64)
        }
        _ => None,
    };
    Ok(MinVolReport {
        certificate,
        volume: best_volume,
        lower_bound,
        history,
        restarts,
        degenerate_subsets: degenerate,
    })
}

/// Hausdorff distance (on a 720-direction support net) between a planar
/// body and its best rotated-cube alignment over a one-degree grid of
/// rotations in [0, 90) degrees.
pub fn hausdorff_to_aligned_cube(body: &Body) -> Result<f64> {
    if body.dim() != 2 {
        return Err(Error::unsupported(
            "cube alignment distance is implemented in the plane only",
        ));
    }
    let net = plane_directions(720);
    let supports: Vec<f64> = net
        .iter()
        .map(|u| body.support(u))
        .collect::<Result<_>>()?;
    let mut bestd = f64::INFINITY;
    for deg in 0..90 {
        let th = (deg as f64).to_radians();
        let (cth, sth) = (th.cos(), th.sin());
        let mut worst = 0.0f64;
        for (u, &h) in net.iter().zip(&supports) {
            // Support of the rotated unit cube: |<u, Re_1>| + |<u, Re_2>|.
            let hc = (u[0] * cth + u[1] * sth).abs() + (-u[0] * sth + u[1] * cth).abs();
            worst = worst.max((h - hc).abs());
        }
        bestd = bestd.min(worst);
    }
    Ok(bestd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::{default_pool, FunctionalPool, Provenance};

    fn pol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    #[test]
    fn axis_pool_recovers_the_unit_square() {
        let space = NormedSpace::euclidean(2);
        let pool = FunctionalPool::from_functionals(
            &space,
            vec![
                vec![1.0, 0.0],
                vec![0.0, 1.0],
                vec![-1.0, 0.0],
                vec![0.0, -1.0],
            ],
            Provenance::User,
            &pol(),
        )
        .unwrap();
        let report = min_volume_search(&space, &pool, 2, 8, 7, &pol()).unwrap();
        assert!((report.volume - 4.0).abs() < 1e-9, "volume {}", report.volume);
        assert_eq!(report.lower_bound, Some(4.0));
        let d = hausdorff_to_aligned_cube(report.certificate.enlargement()).unwrap();
        assert!(d < 1e-9, "distance to an aligned square {d}");
    }

    #[test]
    fn round_pool_approaches_the_square_floor() {
        let space = NormedSpace::euclidean(2);
        let pool = default_pool(&space, 8, &pol()).unwrap();
        let report = min_volume_search(&space, &pool, 4, 24, 11, &pol()).unwrap();
        assert!(report.volume >= 4.0 - 1e-9, "volume {}", report.volume);
        assert!(report.volume <= 4.3, "volume {}", report.volume);
        assert!(verify_certificate(&report.certificate, &pol()).unwrap().valid);
        assert!(!report.history.is_empty());
        let mut last = f64::INFINITY;
        for h in &report.history {
            assert!(h.volume < last);
            last = h.volume;
        }
    }

    #[test]
    fn repeated_runs_are_bitwise_identical() {
        let space = NormedSpace::euclidean(2);
        let pool = default_pool(&space, 8, &pol()).unwrap();
        let a = min_volume_search(&space, &pool, 4, 10, 42, &pol()).unwrap();
        let b = min_volume_search(&space, &pool, 4, 10, 42, &pol()).unwrap();
        assert_eq!(a.volume.to_bits(), b.volume.to_bits());
        assert_eq!(a.history.len(), b.history.len());
    }

    #[test]
    fn degenerate_subsets_are_skipped_not_fatal() {
        let space = NormedSpace::euclidean(2);
        let pool = FunctionalPool::from_functionals(
            &space,
            vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0]],
            Provenance::User,
            &pol(),
        )
        .unwrap();
        let report = min_volume_search(&space, &pool, 2, 30, 3, &pol()).unwrap();
        assert!(report.degenerate_subsets > 0);
        assert!((report.volume - 4.0).abs() < 1e-9);
    }

    #[test]
    fn budgets_are_validated() {
        let space = NormedSpace::euclidean(2);
        let pool = default_pool(&space, 8, &pol()).unwrap();
        assert!(min_volume_search(&space, &pool, 1, 5, 0, &pol()).is_err());
        assert!(min_volume_search(&space, &pool, 9, 5, 0, &pol()).is_err());
        assert!(min_volume_search(&space, &pool, 4, 0, 0, &pol()).is_err());
    }

    #[test]
    fn alignment_distance_sees_through_rotation() {
        let th = 20.0_f64.to_radians();
        let rotated = Body::zonotope(
            2,
            vec![
                vec![th.cos(), th.sin()],
                vec![-th.sin(), th.cos()],
            ],
        )
        .unwrap();
        let d = hausdorff_to_aligned_cube(&rotated).unwrap();
        assert!(d < 0.03, "rotated square alignment distance {d}");
        let ball = Body::ball(2, 1.0).unwrap();
        let d_ball = hausdorff_to_aligned_cube(&ball).unwrap();
        assert!(d_ball > 0.3, "ball alignment distance {d_ball}");
    }
}
