//! Acceptance gate: one test per release criterion, each printing a
//! single pass/fail line (visible with --nocapture, and on failure).
//!
//! The suite exercises the library end to end at desk scale: group-orbit
//! frames, smallness classification, Monte Carlo calibration, certificate
//! algebra, box recovery, minimality margins, the norming dichotomy,
//! prism merging, direct sums, minimum-volume search, sign-vector
//! certificates, and search soundness.

use std::f64::consts::PI;
use std::time::Instant;

use enlarge_core::body::Body;
use enlarge_core::box_recovery::{box_recovery_check, minimality_check, separation_constant};
use enlarge_core::certificate::{
    convex_combination, parallelepiped_certificate, verify_certificate, Certificate, Pair,
};
use enlarge_core::disc_strip::{dichotomy_check, strip_functional};
use enlarge_core::euclidean::{
    average_segment_radius, direct_sum, hadamard_certificate, monte_carlo_average_support,
    orbit_zonotope, segment_average_factor, smallness_check, SmallnessVerdict,
};
use enlarge_core::geometry::vertices;
use enlarge_core::group::OrthogonalGroupAction;
use enlarge_core::linalg::{dot, norm2, scaled, Matrix};
use enlarge_core::minvol::{hausdorff_to_aligned_cube, min_volume_search};
use enlarge_core::net::direction_net;
use enlarge_core::prism::prismify;
use enlarge_core::rotation::{normal_vector, random_rotation, rng_from_seed, SeededRng};
use enlarge_core::search::{default_pool, find_certificate, FunctionalPool, Provenance, SearchStatus};
use enlarge_core::space::NormedSpace;
use enlarge_core::tol::TolerancePolicy;
use rand::Rng;

fn pol() -> TolerancePolicy {
    TolerancePolicy::default()
}

fn unit_vector(dim: usize, rng: &mut SeededRng) -> Vec<f64> {
    loop {
        let v = normal_vector(dim, rng);
        let n = norm2(&v);
        if n > 1e-3 {
            return scaled(&v, 1.0 / n);
        }
    }
}

fn matrix_rows(m: &Matrix) -> Vec<Vec<f64>> {
    (0..m.rows)
        .map(|i| (0..m.cols).map(|j| m[(i, j)]).collect())
        .collect()
}

fn basis_vector(dim: usize, i: usize) -> Vec<f64> {
    let mut e = vec![0.0; dim];
    e[i] = 1.0;
    e
}

/// All eight study groups with their ambient dimensions.
fn study_groups() -> Vec<(String, OrthogonalGroupAction)> {
    let pol = pol();
    let mut out = Vec::new();
    for k in 3..=8 {
        out.push((
            format!("d{k}"),
            OrthogonalGroupAction::dihedral(k, &pol).expect("dihedral group"),
        ));
    }
    out.push((
        "octahedral".into(),
        OrthogonalGroupAction::octahedral(&pol).expect("octahedral group"),
    ));
    out.push((
        "icosahedral".into(),
        OrthogonalGroupAction::icosahedral(&pol).expect("icosahedral group"),
    ));
    out
}

/// Symmetric polytopal ball: unit box rows plus a few random cuts.
fn random_polytopal_space(n: usize, rng: &mut SeededRng) -> NormedSpace {
    let mut normals: Vec<Vec<f64>> = (0..n).map(|i| basis_vector(n, i)).collect();
    let mut offsets = vec![1.0; n];
    let cuts = rng.gen_range(1..=3);
    for _ in 0..cuts {
        normals.push(unit_vector(n, rng));
        offsets.push(rng.gen_range(0.7..1.3));
    }
    let ball = Body::hpolytope(normals, offsets).expect("bounded symmetric polytope");
    NormedSpace::from_ball(ball).expect("polytopal space")
}

/// A well-conditioned basis of dual-unit-sphere functionals.
fn random_dual_frame(space: &NormedSpace, rng: &mut SeededRng) -> Vec<Vec<f64>> {
    let n = space.dim();
    loop {
        let raw: Vec<Vec<f64>> = (0..n).map(|_| unit_vector(n, rng)).collect();
        let normalized: Vec<Vec<f64>> = raw
            .iter()
            .map(|f| {
                let d = space.dual_norm(f).expect("dual norm");
                scaled(f, 1.0 / d)
            })
            .collect();
        let m = Matrix::from_rows(&normalized).expect("frame matrix");
        if m.det().abs() > 0.05 {
            return normalized;
        }
    }
}

/// A random polytopal space whose unit ball is the parallelepiped of a
/// random frame, possibly tightened by extra rows that stay clear of the
/// facet centers. The facet centers then norm the frame functionals, and
/// no dual functional can norm two of them at once, so the separation
/// constant stays away from zero.
fn boxlike_space_with_frame(
    n: usize,
    rng: &mut SeededRng,
) -> (NormedSpace, Vec<Vec<f64>>, Vec<Vec<f64>>) {
    loop {
        let frame: Vec<Vec<f64>> = (0..n).map(|_| unit_vector(n, rng)).collect();
        let m = Matrix::from_rows(&frame).expect("frame matrix");
        if m.det().abs() < 0.25 {
            continue;
        }
        let inverse = m.inverse().expect("frame inverse");
        let points: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|r| inverse[(r, i)]).collect())
            .collect();
        let mut normals = frame.clone();
        let mut offsets = vec![1.0; n];
        for _ in 0..rng.gen_range(0..=2) {
            let g = unit_vector(n, rng);
            let reach = points
                .iter()
                .map(|p| dot(&g, p).abs())
                .fold(0.0_f64, f64::max);
            normals.push(g);
            offsets.push(reach * rng.gen_range(1.05..1.4));
        }
        let ball = Body::hpolytope(normals, offsets).expect("bounded symmetric ball");
        let space = NormedSpace::from_ball(ball).expect("polytopal space");
        return (space, frame, points);
    }
}

/// Identity-matrix frame on a Euclidean space, as functionals and points.
fn coordinate_frame(n: usize) -> Vec<Vec<f64>> {
    (0..n).map(|i| basis_vector(n, i)).collect()
}

#[test]
fn criterion_01_group_orbits_reconstruct_the_identity() {
    let pol = pol();
    let start = Instant::now();
    let mut rng = rng_from_seed(0xACC1);
    let mut worst = 0.0_f64;
    for (name, group) in study_groups() {
        let n = group.dim();
        let tests: Vec<Vec<f64>> = (0..100).map(|_| unit_vector(n, &mut rng)).collect();
        for _ in 0..20 {
            let y = unit_vector(n, &mut rng);
            let cert = orbit_zonotope(&group, &y, false, &pol)
                .unwrap_or_else(|e| panic!("orbit certificate for {name}: {e}"));
            for x in &tests {
                let mut rec = vec![0.0; n];
                for p in cert.pairs() {
                    let c = dot(&p.functional, x);
                    for (r, v) in rec.iter_mut().zip(&p.vector) {
                        *r += c * v;
                    }
                }
                let residual = rec
                    .iter()
                    .zip(x)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                worst = worst.max(residual);
                assert!(
                    residual <= 1e-9,
                    "orbit of {name} fails to reconstruct: residual {residual:.3e}"
                );
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 10.0, "orbit reconstruction took {elapsed:.1} s");
    println!(
        "criterion 1: PASS - 8 groups x 20 orbits reconstruct 100 vectors, worst residual {worst:.3e}, {elapsed:.1} s"
    );
}

#[test]
fn criterion_02_generator_norm_sums_hit_the_dimension_floor() {
    let pol = pol();
    let mut rng = rng_from_seed(0xACC2);

    // Every orbit certificate sums to exactly the dimension.
    for (name, group) in study_groups() {
        let n = group.dim() as f64;
        for _ in 0..3 {
            let y = unit_vector(group.dim(), &mut rng);
            let cert = orbit_zonotope(&group, &y, false, &pol).expect("orbit certificate");
            let report = smallness_check(&cert, &pol).expect("smallness report");
            assert_eq!(report.verdict, SmallnessVerdict::Small, "{name} orbit not small");
            assert!(
                (report.generator_norm_sum - n).abs() <= 1e-12 * n,
                "{name} orbit sums to {:.15}, expected {n}",
                report.generator_norm_sum
            );

            // The same certificate scaled by 1.1 is valid but not small.
            let scaled_pairs: Vec<Pair> = cert
                .pairs()
                .iter()
                .map(|p| Pair {
                    functional: scaled(&p.functional, 1.0 / 1.1),
                    vector: scaled(&p.vector, 1.1),
                })
                .collect();
            let scaled_enlargement = cert.zonotope().scale(1.1).expect("scaled zonotope");
            let scaled_cert =
                Certificate::new(cert.space().clone(), scaled_pairs, scaled_enlargement)
                    .expect("scaled certificate");
            let scaled_report = smallness_check(&scaled_cert, &pol).expect("smallness report");
            assert_eq!(
                scaled_report.verdict,
                SmallnessVerdict::NotSmall,
                "scaled {name} orbit still reports small"
            );
        }
    }

    // No randomized valid certificate ever beats the floor.
    let mut minimum_slack = f64::INFINITY;
    for i in 0..1000 {
        let n = if i % 2 == 0 { 2 } else { 3 };
        let space = NormedSpace::euclidean(n);
        let cert = match i % 3 {
            0 => {
                let group = if n == 2 {
                    OrthogonalGroupAction::dihedral(3 + (i / 2) % 6, &pol).expect("dihedral")
                } else if i % 125 == 0 {
                    OrthogonalGroupAction::icosahedral(&pol).expect("icosahedral")
                } else {
                    OrthogonalGroupAction::octahedral(&pol).expect("octahedral")
                };
                let y = unit_vector(n, &mut rng);
                orbit_zonotope(&group, &y, false, &pol).expect("orbit certificate")
            }
            1 => {
                let rot = random_rotation(n, &mut rng).expect("rotation");
                parallelepiped_certificate(&space, &matrix_rows(&rot), &pol)
                    .expect("rotated frame certificate")
            }
            _ => {
                let ra = random_rotation(n, &mut rng).expect("rotation");
                let rb = random_rotation(n, &mut rng).expect("rotation");
                let a = parallelepiped_certificate(&space, &matrix_rows(&ra), &pol)
                    .expect("certificate");
                let b = parallelepiped_certificate(&space, &matrix_rows(&rb), &pol)
                    .expect("certificate");
                convex_combination(&a, &b, rng.gen_range(0.0..1.0)).expect("combination")
            }
        };
        if i % 10 == 0 {
            let report = verify_certificate(&cert, &pol).expect("verification");
            assert!(report.valid, "randomized certificate {i} fails verification");
        }
        let sum: f64 = cert.pairs().iter().map(|p| norm2(&p.vector)).sum();
        minimum_slack = minimum_slack.min(sum - n as f64);
        assert!(
            sum >= n as f64 - 1e-9,
            "certificate {i} reports generator sum {sum:.15} below the floor {n}"
        );
    }
    println!(
        "criterion 2: PASS - orbit sums exact, 1.1-scaled copies not small, 1000 randomized certificates stay >= n - 1e-9 (worst slack {minimum_slack:.3e})"
    );
}

#[test]
fn criterion_03_average_support_calibration() {
    let start = Instant::now();
    assert_eq!(segment_average_factor(1).expect("factor"), 1.0);
    let l2 = segment_average_factor(2).expect("factor");
    assert!(
        (l2 - 4.0 / PI).abs() <= 1e-14,
        "plane factor {l2:.16} vs 4/pi"
    );
    let l3 = segment_average_factor(3).expect("factor");
    assert!((l3 - 1.5).abs() <= 1e-14, "space factor {l3:.16} vs 3/2");

    let mut reports = Vec::new();
    for (seed, z, u) in [
        (31u64, vec![0.6, -1.1], vec![1.0, 0.0]),
        (32u64, vec![0.4, 0.7, -0.2], vec![0.0, 0.0, 1.0]),
    ] {
        let n = z.len();
        let segment = Body::zonotope(n, vec![z.clone()]).expect("segment body");
        let expected = average_segment_radius(&z).expect("closed form");
        let est = monte_carlo_average_support(&segment, &u, 100_000, seed)
            .expect("Monte Carlo estimate");
        let rel = (est.mean - expected).abs() / expected;
        assert!(
            rel <= 0.01,
            "dimension {n}: Monte Carlo {:.6} vs closed form {expected:.6} ({:.2}% off)",
            est.mean,
            100.0 * rel
        );
        reports.push(format!("n={n} off by {:.3}%", 100.0 * rel));
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 30.0, "calibration run took {elapsed:.1} s");
    println!(
        "criterion 3: PASS - factors 1, 4/pi, 3/2 exact; 1e5-sample averages {} ({elapsed:.1} s)",
        reports.join(", ")
    );
}

#[test]
fn criterion_04_parallelepiped_and_combination_certificates_verify() {
    let pol = pol();
    let mut rng = rng_from_seed(0xACC4);
    for i in 0..50 {
        let n = 2 + i % 3;
        let space = random_polytopal_space(n, &mut rng);
        let frame = random_dual_frame(&space, &mut rng);
        let cert = parallelepiped_certificate(&space, &frame, &pol)
            .unwrap_or_else(|e| panic!("instance {i}: construction fails: {e}"));
        let report = verify_certificate(&cert, &pol).expect("verification");
        assert!(report.valid, "instance {i} (n={n}) fails verification: {report:?}");
    }
    for i in 0..20 {
        let n = 2 + i % 3;
        let space = random_polytopal_space(n, &mut rng);
        let a = parallelepiped_certificate(&space, &random_dual_frame(&space, &mut rng), &pol)
            .expect("first certificate");
        let b = parallelepiped_certificate(&space, &random_dual_frame(&space, &mut rng), &pol)
            .expect("second certificate");
        let lambda = rng.gen_range(0.0..1.0);
        let mix = convex_combination(&a, &b, lambda).expect("combination");
        let report = verify_certificate(&mix, &pol).expect("verification");
        assert!(
            report.valid,
            "combination {i} (n={n}, lambda={lambda:.3}) fails verification"
        );
    }
    println!(
        "criterion 4: PASS - 50 parallelepiped certificates and 20 convex combinations verify, zero failures"
    );
}

#[test]
fn criterion_05_box_recovery_holds_on_randomized_instances() {
    let pol = pol();
    let mut rng = rng_from_seed(0xACC5);
    let mut accepted = 0usize;
    let mut attempts = 0usize;
    let mut strictly_inflated = 0usize;
    let mut worst_scale = f64::INFINITY;
    while accepted < 200 {
        attempts += 1;
        assert!(attempts < 5000, "instance generation stalls");
        let n = 2 + accepted % 2;
        let (space, frame, points) = boxlike_space_with_frame(n, &mut rng);
        let sep = separation_constant(&space, &frame, &points, &pol).expect("separation");
        if !(sep.value > 0.05 && sep.certified()) {
            continue;
        }
        let base = parallelepiped_certificate(&space, &frame, &pol).expect("base certificate");
        let inflator =
            parallelepiped_certificate(&space, &random_dual_frame(&space, &mut rng), &pol)
                .expect("inflating certificate");
        let mut lambda = 0.08;
        let mut chosen = None;
        for _ in 0..10 {
            let cert = convex_combination(&inflator, &base, lambda).expect("combination");
            let report =
                box_recovery_check(&space, &frame, &points, &cert, &pol).expect("recovery report");
            if report.recovered_scale > 0.0 {
                chosen = Some(report);
                break;
            }
            lambda *= 0.5;
        }
        let report = chosen.expect("shrinking the mix always recovers a positive scale");
        assert!(
            report.holds && report.conclusive,
            "instance {accepted} (n={n}): c1={:.6} c2={:.6} c3={:.6} fails",
            report.excess,
            report.separation,
            report.recovered_scale
        );
        if report.excess > 0.0 {
            strictly_inflated += 1;
        }
        worst_scale = worst_scale.min(report.recovered_scale);
        accepted += 1;
    }
    println!(
        "criterion 5: PASS - 200 randomized recoveries hold ({strictly_inflated} strictly inflated, smallest recovered scale {worst_scale:.4})"
    );
}

#[test]
fn criterion_06_cube_minimality_margins() {
    let pol = pol();
    let expected = 1.0 - 1.0 / 2.0_f64.sqrt();

    let plane = NormedSpace::euclidean(2);
    let frame2 = coordinate_frame(2);
    let report2 = minimality_check(&plane, &frame2, &frame2, &pol).expect("plane report");
    assert!(report2.minimal && report2.certified, "plane cube not minimal");
    assert!(
        (report2.margin - expected).abs() <= 1e-6,
        "plane margin {:.9} vs {expected:.9}",
        report2.margin
    );

    let threespace = NormedSpace::euclidean(3);
    let frame3 = coordinate_frame(3);
    let report3 = minimality_check(&threespace, &frame3, &frame3, &pol).expect("space report");
    assert!(
        report3.minimal && report3.certified,
        "cube over the Euclidean 3-space not minimal"
    );

    let diamond = NormedSpace::l1(2);
    let report1 = minimality_check(&diamond, &frame2, &frame2, &pol).expect("diamond report");
    assert!(
        !report1.minimal,
        "cube over the diamond reported minimal with margin {:.3e}",
        report1.margin
    );
    assert!(
        report1.margin.abs() <= 1e-12,
        "diamond margin {:.3e} expected 0",
        report1.margin
    );

    println!(
        "criterion 6: PASS - margins {:.7} (plane), {:.7} (3-space), {:.1e} (diamond, not minimal)",
        report2.margin, report3.margin, report1.margin
    );
}

#[test]
fn criterion_07_norming_dichotomy_margins() {
    let pol = pol();

    // The strip functional norms the two boundary points exactly.
    let f3 = strip_functional();
    let x1 = [1.0, 0.0];
    let x2 = [0.0, 1.0];
    assert!(
        (dot(&f3, &x1) - 1.0).abs() <= 1e-12,
        "strip functional at x1: {:.15}",
        dot(&f3, &x1)
    );
    assert!(
        (dot(&f3, &x2) + 1.0).abs() <= 1e-12,
        "strip functional at x2: {:.15}",
        dot(&f3, &x2)
    );

    let angles = [PI / 16.0, PI / 8.0, PI / 6.0, PI / 5.0];
    let reports: Vec<_> = angles
        .iter()
        .map(|&eps| dichotomy_check(eps, &pol).expect("dichotomy report"))
        .collect();
    for r in &reports {
        println!(
            "  eps {:.6}: bound {:.6}, worst functional value {:.6}, margin {:+.6}, holds {}",
            r.eps, r.bound, r.worst_value, r.margin, r.holds
        );
    }

    // Where the margin actually changes sign.
    let (mut lo, mut hi) = (0.05_f64, 0.25_f64);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if dichotomy_check(mid, &pol).expect("dichotomy report").holds {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    println!(
        "  margin changes sign near eps = {:.6}; all four study angles sit above it",
        0.5 * (lo + hi)
    );

    let margins: Vec<f64> = reports.iter().map(|r| r.margin).collect();
    assert!(
        reports.iter().all(|r| r.holds),
        "expected positive margins at all four angles, got {margins:?}"
    );
    println!("criterion 7: PASS - dichotomy margins positive at all four angles");
}

#[test]
fn criterion_08_slab_certificates_merge_into_prisms() {
    let pol = pol();
    let mut rng = rng_from_seed(0xACC8);
    for i in 0..50 {
        let n = 2 + i % 2;
        let rot = random_rotation(n, &mut rng).expect("rotation");
        let frame = matrix_rows(&rot);
        let h = frame[0].clone();
        let alpha: f64 = rng.gen_range(0.15..0.85);
        let mut v = vec![0.0; n];
        for f in frame.iter().skip(1) {
            let c: f64 = rng.gen_range(-0.4..0.4);
            for (vi, fi) in v.iter_mut().zip(f) {
                *vi += c * fi;
            }
        }
        let b1: Vec<f64> = h.iter().zip(&v).map(|(hi, vi)| alpha * hi + vi).collect();
        let b2: Vec<f64> = h
            .iter()
            .zip(&v)
            .map(|(hi, vi)| (alpha - 1.0) * hi + vi)
            .collect();

        let mut pairs = vec![
            Pair {
                functional: h.clone(),
                vector: b1.clone(),
            },
            Pair {
                functional: scaled(&h, -1.0),
                vector: b2.clone(),
            },
        ];
        let mut generators = vec![b1, b2];
        for f in frame.iter().skip(1) {
            pairs.push(Pair {
                functional: f.clone(),
                vector: f.clone(),
            });
            generators.push(f.clone());
        }
        let enlargement = Body::zonotope(n, generators).expect("slab zonotope");
        let cert = Certificate::new(NormedSpace::euclidean(n), pairs, enlargement)
            .expect("slab certificate");
        assert!(
            verify_certificate(&cert, &pol).expect("verification").valid,
            "instance {i}: slab certificate invalid before merging"
        );

        let basis: Vec<Vec<f64>> = frame.to_vec();
        let (merged, report) = prismify(&cert, &h, &basis, &pol)
            .unwrap_or_else(|e| panic!("instance {i}: prism merge fails: {e}"));
        assert!(
            verify_certificate(&merged, &pol).expect("verification").valid,
            "instance {i}: merged certificate invalid"
        );
        for &idx in &report.decomposition.residual {
            let load = dot(&h, &cert.pairs()[idx].vector).abs();
            assert!(
                load <= 1e-9,
                "instance {i}: residual generator {idx} has slab load {load:.3e}"
            );
        }
        let original = cert.zonotope();
        for vtx in vertices(&merged.zonotope()).expect("merged vertices") {
            let g = original.gauge(&vtx).expect("gauge");
            assert!(
                g <= 1.0 + 1e-9,
                "instance {i}: merged vertex leaves the original zonotope (gauge {g:.12})"
            );
        }
    }
    println!(
        "criterion 8: PASS - 50 slab certificates merge, residual generators stay in the hyperplane, merged zonotopes contained"
    );
}

#[test]
fn criterion_09_direct_sums_stay_small() {
    let pol = pol();

    let hexagon = orbit_zonotope(
        &OrthogonalGroupAction::dihedral(3, &pol).expect("triangle group"),
        &[1.0, 0.0],
        false,
        &pol,
    )
    .expect("hexagon certificate");
    let segment = Certificate::new(
        NormedSpace::euclidean(1),
        vec![Pair {
            functional: vec![1.0],
            vector: vec![1.0],
        }],
        Body::zonotope(1, vec![vec![1.0]]).expect("segment body"),
    )
    .expect("segment certificate");
    let prism = direct_sum(&hexagon, &segment, &pol).expect("hexagon plus segment");
    assert!(
        verify_certificate(&prism, &pol).expect("verification").valid,
        "hexagonal prism certificate invalid"
    );
    let prism_report = smallness_check(&prism, &pol).expect("smallness");
    assert_eq!(prism_report.verdict, SmallnessVerdict::Small);
    assert!(
        (prism_report.generator_norm_sum - 3.0).abs() <= 1e-12,
        "prism sum {:.15} expected 3",
        prism_report.generator_norm_sum
    );

    let square = orbit_zonotope(
        &OrthogonalGroupAction::dihedral(4, &pol).expect("square group"),
        &[1.0, 0.0],
        false,
        &pol,
    )
    .expect("square certificate");
    let tesseract = direct_sum(&square, &square, &pol).expect("square plus square");
    assert!(
        verify_certificate(&tesseract, &pol).expect("verification").valid,
        "4-dimensional sum certificate invalid"
    );
    let tesseract_report = smallness_check(&tesseract, &pol).expect("smallness");
    assert_eq!(tesseract_report.verdict, SmallnessVerdict::Small);
    assert!(
        (tesseract_report.generator_norm_sum - 4.0).abs() <= 1e-12,
        "4-cube sum {:.15} expected 4",
        tesseract_report.generator_norm_sum
    );

    println!(
        "criterion 9: PASS - direct sums verify with generator sums {:.12} and {:.12}",
        prism_report.generator_norm_sum, tesseract_report.generator_norm_sum
    );
}

#[test]
fn criterion_10_minimum_volume_search_recovers_the_square() {
    let pol = pol();
    let start = Instant::now();
    let space = NormedSpace::euclidean(2);
    let pool = default_pool(&space, 16, &pol).expect("16-direction pool");
    let mut best: Option<(f64, Certificate)> = None;
    for n_gens in 4..=6 {
        let report = min_volume_search(&space, &pool, n_gens, 100, 0xACC10, &pol)
            .unwrap_or_else(|e| panic!("search with {n_gens} generators fails: {e}"));
        assert_eq!(report.lower_bound, Some(4.0));
        for entry in &report.history {
            assert!(
                entry.volume >= 4.0 - 1e-6,
                "{n_gens}-generator restart {} dips to volume {:.9}",
                entry.restart,
                entry.volume
            );
        }
        assert!(report.volume >= 4.0 - 1e-6);
        if best.as_ref().map_or(true, |(v, _)| report.volume < *v) {
            best = Some((report.volume, report.certificate));
        }
    }
    let (volume, certificate) = best.expect("at least one search succeeds");
    assert!(
        volume <= 4.05,
        "best volume {volume:.6} misses the 4.05 target"
    );
    let distance =
        hausdorff_to_aligned_cube(&certificate.zonotope()).expect("alignment distance");
    assert!(
        distance <= 0.05,
        "best zonotope sits {distance:.4} from an aligned square"
    );
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 120.0, "search took {elapsed:.1} s");
    println!(
        "criterion 10: PASS - best volume {volume:.9} (floor 4 intact), {distance:.4} from an aligned square, {elapsed:.1} s"
    );
}

#[test]
fn criterion_11_sign_vector_certificates_fill_the_ball() {
    let pol = pol();
    let mut worst_excess = f64::NEG_INFINITY;
    for n in 1..=8 {
        let cert = hadamard_certificate(n, &pol).expect("sign-vector certificate");
        let report = verify_certificate(&cert, &pol).expect("verification");
        assert!(report.valid, "dimension {n}: certificate invalid");
        for u in direction_net(n).iter() {
            let support: f64 = cert
                .pairs()
                .iter()
                .map(|p| dot(u, &p.vector).abs())
                .sum();
            let excess = support - 1.0;
            worst_excess = worst_excess.max(excess);
            assert!(
                excess <= 1e-9,
                "dimension {n}: zonotope support {support:.12} exceeds the ball"
            );
        }
    }
    println!(
        "criterion 11: PASS - sign-vector certificates verify for n = 1..8, worst support excess {worst_excess:.3e}"
    );
}

/// A search fixture: a target body with a hand-written membership test.
struct Fixture {
    name: &'static str,
    target: Body,
    rows: Vec<(Vec<f64>, f64)>,
    radius: Option<f64>,
    feasible: bool,
}

impl Fixture {
    fn contains(&self, x: &[f64]) -> bool {
        let in_rows = self
            .rows
            .iter()
            .all(|(a, b)| dot(a, x).abs() <= b + 1e-9);
        let in_ball = self.radius.map_or(true, |r| norm2(x) <= r + 1e-9);
        in_rows && in_ball
    }
}

fn search_fixtures() -> Vec<Fixture> {
    let rt = 2.0_f64.sqrt();
    let c = (PI / 8.0).cos();
    let s = (PI / 8.0).sin();
    vec![
        Fixture {
            name: "box 1.2",
            target: Body::cube(2, 1.2),
            rows: vec![(vec![1.0, 0.0], 1.2), (vec![0.0, 1.0], 1.2)],
            radius: None,
            feasible: true,
        },
        Fixture {
            name: "box 1.05",
            target: Body::cube(2, 1.05),
            rows: vec![(vec![1.0, 0.0], 1.05), (vec![0.0, 1.0], 1.05)],
            radius: None,
            feasible: true,
        },
        Fixture {
            name: "rotated square",
            target: Body::hpolytope(
                vec![vec![1.0, 1.0], vec![1.0, -1.0]],
                vec![rt, rt],
            )
            .expect("rotated square"),
            rows: vec![(vec![1.0, 1.0], rt), (vec![1.0, -1.0], rt)],
            radius: None,
            feasible: true,
        },
        Fixture {
            // Wide enough for the four-direction orbit zonogon; a tighter
            // octagon falls below the perimeter floor 4n of certificate
            // zonogons and admits none.
            name: "octagon",
            target: Body::hpolytope(
                vec![
                    vec![1.0, 0.0],
                    vec![0.0, 1.0],
                    vec![1.0, 1.0],
                    vec![1.0, -1.0],
                ],
                vec![1.25, 1.25, 1.75, 1.75],
            )
            .expect("octagon"),
            rows: vec![
                (vec![1.0, 0.0], 1.25),
                (vec![0.0, 1.0], 1.25),
                (vec![1.0, 1.0], 1.75),
                (vec![1.0, -1.0], 1.75),
            ],
            radius: None,
            feasible: true,
        },
        Fixture {
            name: "disc 1.35",
            target: Body::ball(2, 1.35).expect("scaled disc"),
            rows: Vec::new(),
            radius: Some(1.35),
            feasible: true,
        },
        Fixture {
            name: "square plus diagonal segment",
            target: Body::zonotope(
                2,
                vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![0.35, 0.35]],
            )
            .expect("zonotope target"),
            rows: vec![
                (vec![1.0, 0.0], 1.35),
                (vec![0.0, 1.0], 1.35),
                (vec![1.0, -1.0], 2.0),
            ],
            radius: None,
            feasible: true,
        },
        Fixture {
            name: "tilted box",
            target: Body::hpolytope(
                vec![vec![c, s], vec![-s, c]],
                vec![1.1, 1.3],
            )
            .expect("tilted box"),
            rows: vec![(vec![c, s], 1.1), (vec![-s, c], 1.3)],
            radius: None,
            feasible: true,
        },
        Fixture {
            name: "wide slab crossing",
            target: Body::hpolytope(
                vec![vec![1.0, 0.0], vec![0.0, 1.0]],
                vec![2.0, 1.01],
            )
            .expect("slab crossing"),
            rows: vec![(vec![1.0, 0.0], 2.0), (vec![0.0, 1.0], 1.01)],
            radius: None,
            feasible: true,
        },
        Fixture {
            name: "vertex square 1.2",
            target: Body::vpolytope(vec![
                vec![1.2, 1.2],
                vec![-1.2, 1.2],
                vec![-1.2, -1.2],
                vec![1.2, -1.2],
            ])
            .expect("vertex square"),
            rows: vec![(vec![1.0, 0.0], 1.2), (vec![0.0, 1.0], 1.2)],
            radius: None,
            feasible: true,
        },
        Fixture {
            name: "corner-cut hexagon",
            target: Body::hpolytope(
                vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]],
                vec![1.0, 1.0, 1.5],
            )
            .expect("corner-cut hexagon"),
            rows: vec![
                (vec![1.0, 0.0], 1.0),
                (vec![0.0, 1.0], 1.0),
                (vec![1.0, 1.0], 1.5),
            ],
            radius: None,
            // Its volume is below the certificate floor of 4, so no
            // certificate zonotope fits, whatever the pool.
            feasible: false,
        },
    ]
}

/// Planar zonogon vertices by the angular-sweep construction, written
/// here independently of the library's enumeration.
fn zonogon_vertices(generators: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut oriented: Vec<Vec<f64>> = generators
        .iter()
        .filter(|g| norm2(g) > 1e-12)
        .map(|g| {
            if g[1] < 0.0 || (g[1] == 0.0 && g[0] < 0.0) {
                scaled(g, -1.0)
            } else {
                g.clone()
            }
        })
        .collect();
    oriented.sort_by(|a, b| {
        a[1].atan2(a[0])
            .partial_cmp(&b[1].atan2(b[0]))
            .expect("finite angles")
    });
    let mut current = vec![0.0, 0.0];
    for g in &oriented {
        current[0] -= g[0];
        current[1] -= g[1];
    }
    let mut verts = vec![current.clone()];
    for g in &oriented {
        current[0] += 2.0 * g[0];
        current[1] += 2.0 * g[1];
        verts.push(current.clone());
    }
    let mirrored: Vec<Vec<f64>> = verts.iter().map(|v| scaled(v, -1.0)).collect();
    verts.extend(mirrored);
    verts
}

/// Certificate checks written from scratch: reconstruction, dual norms,
/// zonotope inside the fixture, unit disc inside the zonogon.
fn independent_check(cert: &Certificate, fixture: &Fixture) {
    let n = 2;
    for i in 0..n {
        for j in 0..n {
            let mut entry = 0.0;
            for p in cert.pairs() {
                entry += p.vector[i] * p.functional[j];
            }
            let target = if i == j { 1.0 } else { 0.0 };
            assert!(
                (entry - target).abs() <= 1e-9,
                "{}: reconstruction entry ({i},{j}) = {entry:.12}",
                fixture.name
            );
        }
    }
    let generators: Vec<Vec<f64>> = cert.pairs().iter().map(|p| p.vector.clone()).collect();
    for p in cert.pairs() {
        assert!(
            norm2(&p.functional) <= 1.0 + 1e-9,
            "{}: functional leaves the dual disc",
            fixture.name
        );
    }
    for vtx in zonogon_vertices(&generators) {
        assert!(
            fixture.contains(&vtx),
            "{}: zonogon vertex {vtx:?} leaves the target",
            fixture.name
        );
    }
    // Each zonogon edge line must stay at distance >= 1 from the origin.
    for g in &generators {
        if norm2(g) <= 1e-12 {
            continue;
        }
        let normal = vec![-g[1] / norm2(g), g[0] / norm2(g)];
        let distance: f64 = generators.iter().map(|y| dot(&normal, y).abs()).sum();
        assert!(
            distance >= 1.0 - 1e-9,
            "{}: zonogon facet at distance {distance:.12} cuts the unit disc",
            fixture.name
        );
    }
}

#[test]
fn criterion_12_search_is_sound_and_pool_monotone() {
    let pol = pol();
    let space = NormedSpace::euclidean(2);
    let axis_pool = FunctionalPool::from_functionals(
        &space,
        vec![vec![1.0, 0.0], vec![0.0, 1.0]],
        Provenance::User,
        &pol,
    )
    .expect("axis pool");
    let circle: Vec<Vec<f64>> = (0..16)
        .map(|k| {
            let a = PI * (k as f64) / 16.0;
            vec![a.cos(), a.sin()]
        })
        .collect();
    let rich_pool = axis_pool
        .concat(&FunctionalPool::from_functionals(&space, circle, Provenance::User, &pol)
            .expect("circle pool"))
        .expect("concatenated pool");

    let mut small_finds = 0usize;
    let mut rich_finds = 0usize;
    for fixture in search_fixtures() {
        let small = find_certificate(&space, &fixture.target, &axis_pool, None, &pol)
            .unwrap_or_else(|e| panic!("{}: axis search errors: {e}", fixture.name));
        let rich = find_certificate(&space, &fixture.target, &rich_pool, None, &pol)
            .unwrap_or_else(|e| panic!("{}: rich search errors: {e}", fixture.name));
        let small_found = small.status == SearchStatus::Found;
        let rich_found = rich.status == SearchStatus::Found;
        assert!(
            !small_found || rich_found,
            "{}: found with the axis pool but lost with the larger one",
            fixture.name
        );
        assert_eq!(
            rich_found, fixture.feasible,
            "{}: rich-pool search expected {}",
            fixture.name,
            if fixture.feasible { "a certificate" } else { "no certificate" }
        );
        for (result, label) in [(&small, "axis"), (&rich, "rich")] {
            if result.status == SearchStatus::Found {
                let cert = result.certificate.as_ref().expect("found certificate");
                independent_check(cert, &fixture);
                if label == "axis" {
                    small_finds += 1;
                } else {
                    rich_finds += 1;
                }
            }
        }
    }
    println!(
        "criterion 12: PASS - {small_finds} axis-pool and {rich_finds} rich-pool finds re-verify independently; pool growth never loses a certificate"
    );
}
