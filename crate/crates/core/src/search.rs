//! Certificate search over a finite pool of dual-ball functionals.
//!
//! A certificate needs functionals in the dual unit ball and vectors
//! reproducing the identity whose zonotope fits inside the target
//! enlargement. Fixing a finite pool of functionals turns the search
//! into a linear program in the vectors: the reconstruction identity is
//! linear, and containment of the zonotope in a facet-described target
//! is a family of per-facet load rows over absolute-value slacks.
//! Infeasibility only ever means "no certificate within this pool and
//! budget": richer pools can still succeed, so the result never claims
//! the target fails to be an enlargement.

use crate::body::Body;
use crate::certificate::{verify_certificate, Certificate, Pair};
use crate::error::{Error, Result};
use crate::geometry::{contains_body, to_hrep, vertices};
use crate::linalg::{dot, norm2, scaled, Matrix};
use crate::lp::{solve_lp, LpOutcome, LpProblem};
use crate::net::direction_net;
use crate::rotation::{normal_vector, rng_from_seed};
use crate::space::NormedSpace;
use crate::tol::TolerancePolicy;

/// Where a pool functional came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Vertex of the dual unit ball.
    DualVertex,
    /// Image of a seed functional under a group action.
    Orbit,
    /// Sampled point of the dual unit sphere.
    RandomExtreme,
    /// Supplied by the caller.
    User,
}

#[derive(Debug, Clone)]
pub struct PoolEntry {
    pub functional: Vec<f64>,
    pub provenance: Provenance,
}

/// A finite family of functionals inside the dual unit ball of a space.
#[derive(Debug, Clone)]
pub struct FunctionalPool {
    dim: usize,
    entries: Vec<PoolEntry>,
}

impl FunctionalPool {
    /// Validates every entry against the space's dual gauge.
    pub fn new(
        space: &NormedSpace,
        entries: Vec<PoolEntry>,
        pol: &TolerancePolicy,
    ) -> Result<Self> {
        pol.validate()?;
        if entries.is_empty() {
            return Err(Error::invalid("functional pool must be nonempty"));
        }
        for (i, e) in entries.iter().enumerate() {
            crate::linalg::check_dim(&e.functional, space.dim())?;
            crate::linalg::check_finite(&e.functional, "pool functional")?;
            let d = space.dual_norm(&e.functional)?;
            if d > 1.0 + pol.eps_feas {
                return Err(Error::invalid(format!(
                    "pool entry {i} has dual gauge {d:.9} > 1"
                )));
            }
        }
        Ok(Self {
            dim: space.dim(),
            entries,
        })
    }

    /// Wraps raw functionals under a single provenance tag.
    pub fn from_functionals(
        space: &NormedSpace,
        functionals: Vec<Vec<f64>>,
        provenance: Provenance,
        pol: &TolerancePolicy,
    ) -> Result<Self> {
        Self::new(
            space,
            functionals
                .into_iter()
                .map(|functional| PoolEntry {
                    functional,
                    provenance,
                })
                .collect(),
            pol,
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[PoolEntry] {
        &self.entries
    }

    pub fn functionals(&self) -> impl Iterator<Item = &Vec<f64>> {
        self.entries.iter().map(|e| &e.functional)
    }

    /// This pool's entries followed by another's, preserving order; used
    /// to grow a pool without disturbing existing indices.
    pub fn concat(&self, other: &FunctionalPool) -> Result<FunctionalPool> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Ok(FunctionalPool {
            dim: self.dim,
            entries,
        })
    }
}

fn dedup_directions(mut cands: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for c in cands.drain(..) {
        let dup = out.iter().any(|u| {
            u.iter()
                .zip(&c)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0_f64, f64::max)
                <= 1e-9
        });
        if !dup {
            out.push(c);
        }
    }
    out
}

/// Keeps only the extreme points of conv(candidates). A point is kept
/// exactly when a feasibility LP shows it is not a convex combination of
/// the remaining candidates.
fn prune_to_extreme(cands: Vec<Vec<f64>>) -> Result<Vec<Vec<f64>>> {
    let n = match cands.first() {
        Some(c) => c.len(),
        None => return Ok(cands),
    };
    let mut keep = Vec::new();
    for (i, c) in cands.iter().enumerate() {
        let others: Vec<&Vec<f64>> = cands
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, u)| u)
            .collect();
        if others.is_empty() {
            keep.push(c.clone());
            continue;
        }
        let m = others.len();
        // Variables: weights >= 0 with sum 1 combining the others to c.
        let mut p = LpProblem::new(m).minimize(vec![0.0; m]);
        for j in 0..m {
            let mut nonneg = vec![0.0; m];
            nonneg[j] = -1.0;
            p.add_leq(nonneg, 0.0);
        }
        p.add_eq(vec![1.0; m], 1.0);
        for r in 0..n {
            p.add_eq(others.iter().map(|u| u[r]).collect(), c[r]);
        }
        if !matches!(solve_lp(&p)?, LpOutcome::Optimal { .. }) {
            keep.push(c.clone());
        }
    }
    Ok(keep)
}

const POOL_SEED: u64 = 0x706f_6f6c;

/// `count` directions on the Euclidean unit sphere: both signs in
/// dimension 1, equally spaced angles in the plane, seeded Gaussian
/// directions above.
fn sphere_directions(dim: usize, count: usize) -> Vec<Vec<f64>> {
    if dim == 1 {
        return vec![vec![1.0], vec![-1.0]].into_iter().take(count).collect();
    }
    if dim == 2 {
        return (0..count)
            .map(|k| {
                let th = 2.0 * std::f64::consts::PI * (k as f64) / (count as f64);
                vec![th.cos(), th.sin()]
            })
            .collect();
    }
    let mut rng = rng_from_seed(POOL_SEED ^ dim as u64);
    (0..count)
        .map(|_| {
            let v = normal_vector(dim, &mut rng);
            scaled(&v, 1.0 / norm2(&v))
        })
        .collect()
}

fn facet_dual_vertices(normals: &[Vec<f64>], offsets: &[f64]) -> Result<Vec<Vec<f64>>> {
    let mut cands = Vec::with_capacity(2 * normals.len());
    for (a, &b) in normals.iter().zip(offsets) {
        let v = scaled(a, 1.0 / b);
        cands.push(v.clone());
        cands.push(scaled(&v, -1.0));
    }
    prune_to_extreme(dedup_directions(cands))
}

/// Default functional pool for a space: all dual-ball vertices when the
/// unit ball is polytopal, a spread of dual-sphere directions for the
/// Euclidean ball, and slab directions plus a round net for a
/// ball-with-slabs intersection. The budget caps the pool size; for
/// polytopal balls it must admit the full dual vertex set.
pub fn default_pool(
    space: &NormedSpace,
    budget: usize,
    pol: &TolerancePolicy,
) -> Result<FunctionalPool> {
    pol.validate()?;
    let n = space.dim();
    if budget < n {
        return Err(Error::invalid("pool budget must be at least the dimension"));
    }
    let ball = space.unit_ball().simplified();
    match &ball {
        Body::EuclideanBall { radius, .. } => {
            let dirs: Vec<Vec<f64>> = sphere_directions(n, budget)
                .into_iter()
                .map(|u| scaled(&u, 1.0 / radius))
                .collect();
            FunctionalPool::from_functionals(space, dirs, Provenance::RandomExtreme, pol)
        }
        Body::HPolytope {
            normals, offsets, ..
        } => {
            let verts = facet_dual_vertices(normals, offsets)?;
            if verts.len() > budget {
                return Err(Error::invalid(format!(
                    "budget {budget} is smaller than the dual vertex set ({})",
                    verts.len()
                )));
            }
            FunctionalPool::from_functionals(space, verts, Provenance::DualVertex, pol)
        }
        Body::Zonotope { .. } => {
            // The dual ball of a zonotope is spanned by the zonotope's
            // own normalized facet normals.
            let (normals, offsets) = to_hrep(&ball)?;
            let verts = facet_dual_vertices(&normals, &offsets)?;
            if verts.len() > budget {
                return Err(Error::invalid(format!(
                    "budget {budget} is smaller than the dual vertex set ({})",
                    verts.len()
                )));
            }
            FunctionalPool::from_functionals(space, verts, Provenance::DualVertex, pol)
        }
        Body::VPolytope {
            vertices: verts, ..
        } => {
            // The dual ball is the facet body over the primal vertices;
            // its own vertices come from facet enumeration.
            let dual = Body::hpolytope(verts.clone(), vec![1.0; verts.len()])?;
            let dual_verts = dedup_directions(vertices(&dual)?);
            if dual_verts.len() > budget {
                return Err(Error::invalid(format!(
                    "budget {budget} is smaller than the dual vertex set ({})",
                    dual_verts.len()
                )));
            }
            FunctionalPool::from_functionals(space, dual_verts, Provenance::DualVertex, pol)
        }
        Body::Intersection(..) => {
            let mut h_dirs: Vec<Vec<f64>> = Vec::new();
            let mut has_ball = false;
            let mut stack = vec![&ball];
            while let Some(p) = stack.pop() {
                match p {
                    Body::Intersection(a, b) => {
                        stack.push(a);
                        stack.push(b);
                    }
                    Body::HPolytope {
                        normals, offsets, ..
                    } => {
                        for (a, &b) in normals.iter().zip(offsets) {
                            let v = scaled(a, 1.0 / b);
                            h_dirs.push(v.clone());
                            h_dirs.push(scaled(&v, -1.0));
                        }
                    }
                    Body::EuclideanBall { .. } => has_ball = true,
                    _ => {
                        return Err(Error::unsupported(
                            "default pool for intersections needs slab and ball parts",
                        ))
                    }
                }
            }
            let h_dirs = dedup_directions(h_dirs);
            if !has_ball {
                if h_dirs.len() > budget {
                    return Err(Error::invalid(format!(
                        "budget {budget} is smaller than the dual direction set ({})",
                        h_dirs.len()
                    )));
                }
                return FunctionalPool::from_functionals(
                    space,
                    h_dirs,
                    Provenance::DualVertex,
                    pol,
                );
            }
            if budget <= h_dirs.len() {
                return Err(Error::invalid(format!(
                    "budget {budget} leaves no room for round directions beyond the {} \
                     slab directions",
                    h_dirs.len()
                )));
            }
            let mut entries: Vec<PoolEntry> = h_dirs
                .into_iter()
                .map(|functional| PoolEntry {
                    functional,
                    provenance: Provenance::DualVertex,
                })
                .collect();
            let fill = budget - entries.len();
            for u in sphere_directions(n, fill) {
                let d = space.dual_norm(&u)?;
                if d.is_finite() && d > 0.0 {
                    entries.push(PoolEntry {
                        functional: scaled(&u, 1.0 / d),
                        provenance: Provenance::RandomExtreme,
                    });
                }
            }
            FunctionalPool::new(space, entries, pol)
        }
        _ => Err(Error::unsupported("no default pool for this unit ball shape")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStatus {
    Found,
    /// No certificate exists within this pool and budget; this says
    /// nothing about richer pools.
    NotFoundWithinBudget,
}

#[derive(Debug, Clone)]
pub struct SearchDiagnostics {
    pub pool_size: usize,
    pub pairs_considered: usize,
    pub lp_columns: usize,
    pub lp_rows: usize,
    /// 0 when the target's facets gave exact containment rows.
    pub sampled_directions: usize,
    pub refinements: usize,
    /// True when the containment rows were exact and the program was
    /// proven infeasible: this pool cannot certify this target at all.
    pub pool_exhaustive: bool,
    pub message: String,
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub status: SearchStatus,
    pub certificate: Option<Certificate>,
    pub diagnostics: SearchDiagnostics,
}

/// One load row of the pool program: slack t_j >= |<dir, y_j>| per
/// vector, an optional cap sum_j t_j <= cap, and an objective weight on
/// the row's total load.
struct LoadRow {
    dir: Vec<f64>,
    cap: Option<f64>,
    weight: f64,
}

/// Facet rows of the target when it has (or admits) an exact facet
/// description, otherwise sampled support rows; the flag reports which.
fn containment_rows(enlargement: &Body, dirs: usize) -> Result<(Vec<(Vec<f64>, f64)>, bool)> {
    let simplified = enlargement.simplified();
    if let Body::HPolytope {
        normals, offsets, ..
    } = &simplified
    {
        return Ok((
            normals.iter().cloned().zip(offsets.iter().copied()).collect(),
            true,
        ));
    }
    if matches!(&simplified, Body::Zonotope { .. } | Body::VPolytope { .. })
        && simplified.dim() <= 3
    {
        if let Ok((normals, offsets)) = to_hrep(&simplified) {
            return Ok((normals.into_iter().zip(offsets).collect(), true));
        }
    }
    let n = simplified.dim();
    let sample: Vec<Vec<f64>> = if n == 2 {
        // Load rows are sign-symmetric, so half the circle suffices.
        (0..dirs)
            .map(|k| {
                let th = std::f64::consts::PI * (k as f64) / (dirs as f64);
                vec![th.cos(), th.sin()]
            })
            .collect()
    } else {
        direction_net(n).iter().take(dirs).cloned().collect()
    };
    let mut rows = Vec::with_capacity(sample.len());
    for d in sample {
        let h = simplified.support(&d)?;
        if !h.is_finite() {
            return Err(Error::unsupported("search target must have bounded support"));
        }
        rows.push((d, h));
    }
    Ok((rows, false))
}

/// Solves the fixed-pool program: vectors y_j for the given functionals
/// with sum_j y_j f_j^T = I and per-row loads t_{jk} >= |<a_k, y_j>|
/// obeying the row caps, minimizing the weighted total load. Returns the
/// vectors with the program size, or None when infeasible.
fn solve_pool_lp(
    functionals: &[Vec<f64>],
    rows: &[LoadRow],
    n: usize,
) -> Result<Option<(Vec<Vec<f64>>, usize, usize)>> {
    let m = functionals.len();
    let k = rows.len();
    let y_at = |j: usize, r: usize| j * n + r;
    let t_at = |j: usize, kk: usize| m * n + j * k + kk;
    let nv = m * n + m * k;
    let mut obj = vec![0.0; nv];
    for (kk, row) in rows.iter().enumerate() {
        for j in 0..m {
            obj[t_at(j, kk)] = row.weight;
        }
    }
    let mut p = LpProblem::new(nv).minimize(obj);
    for r in 0..n {
        for c in 0..n {
            let mut row = vec![0.0; nv];
            for (j, f) in functionals.iter().enumerate() {
                row[y_at(j, r)] = f[c];
            }
            p.add_eq(row, if r == c { 1.0 } else { 0.0 });
        }
    }
    let mut row_count = n * n;
    for (kk, load) in rows.iter().enumerate() {
        for j in 0..m {
            let mut up = vec![0.0; nv];
            for r in 0..n {
                up[y_at(j, r)] = load.dir[r];
            }
            up[t_at(j, kk)] = -1.0;
            p.add_leq(up, 0.0);
            let mut dn = vec![0.0; nv];
            for r in 0..n {
                dn[y_at(j, r)] = -load.dir[r];
            }
            dn[t_at(j, kk)] = -1.0;
            p.add_leq(dn, 0.0);
            row_count += 2;
        }
        if let Some(cap) = load.cap {
            let mut caprow = vec![0.0; nv];
            for j in 0..m {
                caprow[t_at(j, kk)] = 1.0;
            }
            p.add_leq(caprow, cap);
            row_count += 1;
        }
    }
    match solve_lp(&p)? {
        LpOutcome::Optimal { x, .. } => {
            let ys = (0..m)
                .map(|j| x[y_at(j, 0)..=y_at(j, n - 1)].to_vec())
                .collect();
            Ok(Some((ys, nv, row_count)))
        }
        _ => Ok(None),
    }
}

fn pairs_from_solution(functionals: &[Vec<f64>], ys: &[Vec<f64>]) -> Vec<Pair> {
    functionals
        .iter()
        .zip(ys)
        .filter(|(_, y)| norm2(y) > 1e-12)
        .map(|(f, y)| Pair {
            functional: f.clone(),
            vector: y.clone(),
        })
        .collect()
}

/// Searches for a certificate of the given enlargement using at most
/// `max_pairs` functionals from the pool (the leading ones; `None` takes
/// the whole pool). The enlargement must contain the unit ball. Targets
/// with facet descriptions go through the pool program on exact rows, so
/// infeasibility proves the pool cannot certify the target; sampled
/// targets are searched over reweighted dual frames and any candidate is
/// re-verified before it is returned.
pub fn find_certificate(
    space: &NormedSpace,
    enlargement: &Body,
    pool: &FunctionalPool,
    max_pairs: Option<usize>,
    pol: &TolerancePolicy,
) -> Result<SearchResult> {
    pol.validate()?;
    let n = space.dim();
    if pool.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: pool.dim(),
        });
    }
    if enlargement.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: enlargement.dim(),
        });
    }
    let ball_check = contains_body(space.unit_ball(), enlargement, pol.eps_feas)?;
    if !ball_check.holds {
        let witness = ball_check
            .witness
            .map(|w| format!(" at {w:?}"))
            .unwrap_or_default();
        return Err(Error::hypothesis(format!(
            "target does not contain the unit ball (margin {:.3e}{witness})",
            ball_check.margin
        )));
    }
    let take = max_pairs.unwrap_or(pool.len()).min(pool.len());
    if take == 0 {
        return Err(Error::invalid("certificate search needs at least one functional"));
    }
    let functionals: Vec<Vec<f64>> = pool
        .entries()
        .iter()
        .take(take)
        .map(|e| e.functional.clone())
        .collect();

    let dense = if n == 2 { 360 } else { 2000 };
    let (row_data, exact) = containment_rows(enlargement, dense)?;
    let sampled_directions = if exact { 0 } else { row_data.len() };
    let diag = |lp_columns, lp_rows, refinements, pool_exhaustive, message: String| {
        SearchDiagnostics {
            pool_size: pool.len(),
            pairs_considered: take,
            lp_columns,
            lp_rows,
            sampled_directions,
            refinements,
            pool_exhaustive,
            message,
        }
    };
    let finish = |ys: &[Vec<f64>],
                  lp_columns: usize,
                  lp_rows: usize,
                  refinements: usize|
     -> Result<SearchResult> {
        let pairs = pairs_from_solution(&functionals, ys);
        let cert = Certificate::new(space.clone(), pairs, enlargement.clone())?;
        let report = verify_certificate(&cert, pol)?;
        if report.valid {
            return Ok(SearchResult {
                status: SearchStatus::Found,
                certificate: Some(cert),
                diagnostics: diag(
                    lp_columns,
                    lp_rows,
                    refinements,
                    false,
                    "certificate found and re-verified".into(),
                ),
            });
        }
        Ok(SearchResult {
            status: SearchStatus::NotFoundWithinBudget,
            certificate: None,
            diagnostics: diag(
                lp_columns,
                lp_rows,
                refinements,
                false,
                format!(
                    "candidate failed re-verification (worst dual {:.6}, recon \
                     residual {:.3e}, zonotope margin {:.3e}, ball margin {:.3e})",
                    report.worst_dual_norm,
                    report.reconstruction_residual,
                    report.zonotope_in_enlargement.margin,
                    report.ball_in_zonotope.margin
                ),
            ),
        })
    };

    if exact {
        // Facet targets go into the pool program whole; infeasibility
        // there is a proof that no subset of this pool works.
        let rows: Vec<LoadRow> = row_data
            .into_iter()
            .map(|(dir, cap)| LoadRow {
                dir,
                cap: Some(cap),
                weight: 1.0,
            })
            .collect();
        let solved = solve_pool_lp(&functionals, &rows, n)?;
        return match solved {
            Some((ys, lp_columns, lp_rows)) => finish(&ys, lp_columns, lp_rows, 0),
            None => Ok(SearchResult {
                status: SearchStatus::NotFoundWithinBudget,
                certificate: None,
                diagnostics: diag(
                    take * (n + rows.len()),
                    n * n + rows.len() * (2 * take + 1),
                    0,
                    true,
                    "no certificate exists within this pool for this target".into(),
                ),
            }),
        };
    }

    // Sampled targets: the load-variable program grows far too degenerate
    // at this many rows, so search over weighted dual frames instead.
    // Minimizing sum_j w_j |y_j|^2 subject to sum_j y_j f_j^T = I has the
    // closed form y_j = M^{-1} f_j / w_j with M = sum_j f_j f_j^T / w_j;
    // reweighting against the most loaded directions steers the zonotope
    // into the target, and the candidate is re-verified before returning.
    let mut weights = vec![1.0; functionals.len()];
    let mut best_ratio = f64::INFINITY;
    let mut stalled = 0usize;
    let mut rounds = 0usize;
    for round in 0..80 {
        rounds = round + 1;
        let mut gram = Matrix::zeros(n, n);
        for (f, w) in functionals.iter().zip(&weights) {
            let mut outer = Matrix::outer(f, f);
            outer.scale_mut(1.0 / w);
            gram = gram.add(&outer);
        }
        let inv = match gram.inverse() {
            Ok(inv) => inv,
            Err(_) => break,
        };
        let ys: Vec<Vec<f64>> = functionals
            .iter()
            .zip(&weights)
            .map(|(f, w)| scaled(&inv.matvec(f), 1.0 / w))
            .collect();

        let mut worst = 0.0f64;
        let mut loads = Vec::with_capacity(row_data.len());
        for (dir, cap) in &row_data {
            let load: f64 = ys.iter().map(|y| dot(dir, y).abs()).sum();
            worst = worst.max(load / cap);
            loads.push(load);
        }
        if worst <= 1.0 + 1e-12 {
            return finish(&ys, 0, 0, round);
        }

        // Push weight onto the functionals that feed the overloaded
        // directions, shrinking their vectors in the next frame.
        let threshold = (0.95 * worst).max(1.0);
        let mut share = vec![0.0; functionals.len()];
        let mut hit = 0usize;
        for ((dir, cap), load) in row_data.iter().zip(&loads) {
            if load / cap > threshold {
                hit += 1;
                for (s, y) in share.iter_mut().zip(&ys) {
                    *s += dot(dir, y).abs() / load;
                }
            }
        }
        if hit == 0 {
            break;
        }
        for (w, s) in weights.iter_mut().zip(&share) {
            *w *= 1.0 + 0.5 * s / hit as f64;
        }
        let min_w = weights.iter().cloned().fold(f64::INFINITY, f64::min);
        for w in &mut weights {
            *w /= min_w;
        }

        if worst >= best_ratio - 1e-9 {
            stalled += 1;
            if stalled >= 12 {
                break;
            }
        } else {
            best_ratio = worst;
            stalled = 0;
        }
    }
    Ok(SearchResult {
        status: SearchStatus::NotFoundWithinBudget,
        certificate: None,
        diagnostics: diag(
            0,
            0,
            rounds,
            false,
            "no certificate found within this pool and direction budget".into(),
        ),
    })
}

/// Linear objective for re-solving a certificate's pool program.
#[derive(Debug, Clone)]
pub enum TightenObjective {
    /// Total Euclidean length of the generators, steered through
    /// direction-net load rows (the exact lengths decide acceptance).
    GeneratorNormSum,
    /// Total support of the zonotope at the given directions (exactly
    /// linear in the row loads).
    SupportAtDirections(Vec<Vec<f64>>),
}

fn true_objective(cert: &Certificate, objective: &TightenObjective) -> Result<f64> {
    match objective {
        TightenObjective::GeneratorNormSum => {
            Ok(cert.pairs().iter().map(|p| norm2(&p.vector)).sum())
        }
        TightenObjective::SupportAtDirections(dirs) => {
            let z = cert.zonotope();
            let mut total = 0.0;
            for d in dirs {
                total += z.support(d)?;
            }
            Ok(total)
        }
    }
}

/// Re-solves a certificate's pool program with a linear objective,
/// keeping the same functionals and enlargement. The result is always a
/// valid certificate whose true objective does not exceed the input's;
/// when the re-solve fails to improve, the input comes back unchanged.
pub fn tighten_certificate(
    cert: &Certificate,
    objective: &TightenObjective,
    pol: &TolerancePolicy,
) -> Result<Certificate> {
    pol.validate()?;
    let n = cert.space().dim();
    let functionals: Vec<Vec<f64>> =
        cert.pairs().iter().map(|p| p.functional.clone()).collect();
    let (row_data, _exact) = containment_rows(cert.enlargement(), if n == 2 { 48 } else { 96 })?;
    let mut rows: Vec<LoadRow> = row_data
        .into_iter()
        .map(|(dir, cap)| LoadRow {
            dir,
            cap: Some(cap),
            weight: 0.0,
        })
        .collect();
    match objective {
        TightenObjective::GeneratorNormSum => {
            // sum_d |<d, y>| over a spread of unit directions grows
            // monotonically with |y|, so pricing these uncapped rows
            // steers the program toward short generators.
            for d in sphere_directions(n, if n == 2 { 16 } else { 32 }) {
                rows.push(LoadRow {
                    dir: d,
                    cap: None,
                    weight: 1.0,
                });
            }
        }
        TightenObjective::SupportAtDirections(dirs) => {
            if dirs.is_empty() {
                return Ok(cert.clone());
            }
            for d in dirs {
                crate::linalg::check_dim(d, n)?;
                rows.push(LoadRow {
                    dir: d.clone(),
                    cap: None,
                    weight: 1.0,
                });
            }
        }
    }
    let solved = solve_pool_lp(&functionals, &rows, n)?;
    let (ys, _, _) = match solved {
        Some(s) => s,
        None => return Ok(cert.clone()),
    };
    let pairs = pairs_from_solution(&functionals, &ys);
    let candidate = Certificate::new(cert.space().clone(), pairs, cert.enlargement().clone())?;
    let report = verify_certificate(&candidate, pol)?;
    if !report.valid {
        return Ok(cert.clone());
    }
    let before = true_objective(cert, objective)?;
    let after = true_objective(&candidate, objective)?;
    if after <= before + 1e-12 * (1.0 + before.abs()) {
        Ok(candidate)
    } else {
        Ok(cert.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::norm1;

    fn pol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    #[test]
    fn default_pool_for_the_plane_ball_is_equally_spaced() {
        let space = NormedSpace::euclidean(2);
        let pool = default_pool(&space, 16, &pol()).unwrap();
        assert_eq!(pool.len(), 16);
        for e in pool.entries() {
            assert!((norm2(&e.functional) - 1.0).abs() < 1e-12);
            assert_eq!(e.provenance, Provenance::RandomExtreme);
        }
        let angle = |f: &[f64]| f[1].atan2(f[0]);
        let step = angle(&pool.entries()[1].functional) - angle(&pool.entries()[0].functional);
        assert!((step - std::f64::consts::PI / 8.0).abs() < 1e-12);
    }

    #[test]
    fn default_pool_for_the_cube_is_the_cross_polytope_vertex_set() {
        let space = NormedSpace::linf(3);
        let pool = default_pool(&space, 10, &pol()).unwrap();
        assert_eq!(pool.len(), 6);
        for e in pool.entries() {
            assert_eq!(e.provenance, Provenance::DualVertex);
            assert!((norm1(&e.functional) - 1.0).abs() < 1e-12);
            let nonzero = e.functional.iter().filter(|t| t.abs() > 1e-12).count();
            assert_eq!(nonzero, 1);
        }
    }

    #[test]
    fn default_pool_for_the_cross_polytope_is_the_cube_vertex_set() {
        let space = NormedSpace::l1(2);
        let pool = default_pool(&space, 8, &pol()).unwrap();
        assert_eq!(pool.len(), 4);
        for e in pool.entries() {
            assert!((e.functional[0].abs() - 1.0).abs() < 1e-9);
            assert!((e.functional[1].abs() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn pool_budget_below_dimension_is_rejected() {
        let space = NormedSpace::euclidean(3);
        let err = default_pool(&space, 2, &pol()).unwrap_err();
        assert!(err.to_string().contains("budget"));
    }

    #[test]
    fn pool_budget_below_dual_vertex_count_is_rejected() {
        let space = NormedSpace::linf(3);
        let err = default_pool(&space, 4, &pol()).unwrap_err();
        assert!(err.to_string().contains("dual vertex set"));
    }

    #[test]
    fn pool_rejects_functionals_outside_the_dual_ball() {
        let space = NormedSpace::euclidean(2);
        let err = FunctionalPool::from_functionals(
            &space,
            vec![vec![1.1, 0.0]],
            Provenance::User,
            &pol(),
        )
        .unwrap_err();
        assert!(err.to_string().contains("dual gauge"));
    }

    #[test]
    fn find_certificate_for_the_cube_in_itself() {
        let space = NormedSpace::linf(2);
        let pool = default_pool(&space, 8, &pol()).unwrap();
        let target = Body::cube(2, 1.0);
        let result = find_certificate(&space, &target, &pool, None, &pol()).unwrap();
        assert_eq!(result.status, SearchStatus::Found);
        assert_eq!(result.diagnostics.sampled_directions, 0);
        let cert = result.certificate.unwrap();
        assert!(verify_certificate(&cert, &pol()).unwrap().valid);
    }

    #[test]
    fn find_certificate_for_the_plane_ball_in_a_generous_square() {
        let space = NormedSpace::euclidean(2);
        let pool = default_pool(&space, 16, &pol()).unwrap();
        let target = Body::cube(2, 1.2);
        let result = find_certificate(&space, &target, &pool, None, &pol()).unwrap();
        assert_eq!(result.status, SearchStatus::Found);
        let report = verify_certificate(&result.certificate.unwrap(), &pol()).unwrap();
        assert!(report.valid);
    }

    #[test]
    fn find_certificate_rejects_targets_missing_the_ball() {
        let space = NormedSpace::euclidean(2);
        let pool = default_pool(&space, 16, &pol()).unwrap();
        let target = Body::cube(2, 0.9);
        let err = find_certificate(&space, &target, &pool, None, &pol()).unwrap_err();
        assert!(err.to_string().contains("does not contain the unit ball"));
    }

    #[test]
    fn axis_pool_fails_conclusively_on_a_corner_cut_target() {
        // With only the two axis functionals the reconstruction forces
        // y_1 = e_1 and y_2 = e_2, whose zonotope is the unit square;
        // a target that cuts the square's corner cannot contain it, and
        // with exact facet rows the infeasibility is conclusive for
        // this pool.
        let space = NormedSpace::euclidean(2);
        let pool = FunctionalPool::from_functionals(
            &space,
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            Provenance::User,
            &pol(),
        )
        .unwrap();
        let corner_cut = Body::hpolytope(
            vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]],
            vec![1.0, 1.0, 1.5],
        )
        .unwrap();
        let result = find_certificate(&space, &corner_cut, &pool, None, &pol()).unwrap();
        assert_eq!(result.status, SearchStatus::NotFoundWithinBudget);
        assert!(result.diagnostics.pool_exhaustive);
        assert!(result.certificate.is_none());
    }

    #[test]
    fn richer_pools_recover_what_small_pools_miss() {
        // The pool of two axis functionals forces the unit square as
        // the zonotope, which does not fit in the rotated square; the
        // 16-direction pool contains the diagonal functionals that
        // certify it exactly.
        let space = NormedSpace::euclidean(2);
        let s = std::f64::consts::SQRT_2;
        let rotated_square = Body::hpolytope(
            vec![vec![1.0, 1.0], vec![1.0, -1.0]],
            vec![s, s],
        )
        .unwrap();
        let small = FunctionalPool::from_functionals(
            &space,
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            Provenance::User,
            &pol(),
        )
        .unwrap();
        let small_result =
            find_certificate(&space, &rotated_square, &small, None, &pol()).unwrap();
        assert_eq!(small_result.status, SearchStatus::NotFoundWithinBudget);
        assert!(small_result.diagnostics.pool_exhaustive);
        let rich = default_pool(&space, 16, &pol()).unwrap();
        let rich_result =
            find_certificate(&space, &rotated_square, &rich, None, &pol()).unwrap();
        assert_eq!(rich_result.status, SearchStatus::Found);
    }

    #[test]
    fn tighten_shrinks_generator_norms_without_breaking_validity() {
        let space = NormedSpace::euclidean(2);
        let pool = default_pool(&space, 16, &pol()).unwrap();
        let target = Body::cube(2, 1.5);
        let found = find_certificate(&space, &target, &pool, None, &pol())
            .unwrap()
            .certificate
            .unwrap();
        let tightened =
            tighten_certificate(&found, &TightenObjective::GeneratorNormSum, &pol()).unwrap();
        let before: f64 = found.pairs().iter().map(|p| norm2(&p.vector)).sum();
        let after: f64 = tightened.pairs().iter().map(|p| norm2(&p.vector)).sum();
        assert!(after <= before + 1e-9);
        assert!(verify_certificate(&tightened, &pol()).unwrap().valid);
    }

    #[test]
    fn tighten_reduces_support_at_chosen_directions() {
        let space = NormedSpace::euclidean(2);
        let pool = default_pool(&space, 16, &pol()).unwrap();
        let target = Body::cube(2, 1.5);
        let found = find_certificate(&space, &target, &pool, None, &pol())
            .unwrap()
            .certificate
            .unwrap();
        let dirs = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let objective = TightenObjective::SupportAtDirections(dirs.clone());
        let tightened = tighten_certificate(&found, &objective, &pol()).unwrap();
        let sum = |c: &Certificate| -> f64 {
            dirs.iter().map(|d| c.zonotope().support(d).unwrap()).sum()
        };
        assert!(sum(&tightened) <= sum(&found) + 1e-9);
        assert!(verify_certificate(&tightened, &pol()).unwrap().valid);
    }

    #[test]
    fn disc_strip_pool_keeps_the_strip_directions() {
        let space = crate::disc_strip::disc_strip_space();
        let pool = default_pool(&space, 40, &pol()).unwrap();
        assert_eq!(pool.len(), 40);
        let has_strip = pool.entries().iter().any(|e| {
            e.provenance == Provenance::DualVertex
                && (e.functional[0] - 1.0).abs() < 1e-9
                && (e.functional[1] + 1.0).abs() < 1e-9
        });
        assert!(has_strip);
        for e in pool.entries() {
            assert!(space.dual_norm(&e.functional).unwrap() <= 1.0 + 1e-9);
        }
    }
}
