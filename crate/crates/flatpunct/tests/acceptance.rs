//! End-to-end acceptance gate. Each numbered criterion prints one pass/fail
//! line; the test fails if any criterion fails or exceeds its time budget.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use nalgebra::{Complex, DMatrix};
use num_rational::Rational64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use flatpunct::circulant::{
    determinant, eigenvalues, principal_matrix, rank_by_gcd, singular_case, CirculantMatrix,
};
use flatpunct::classify::{classify_regularity, cone_completion, equivalent, invariant, invariant_seeded, ConeCompletion};
use flatpunct::geom::develop_boundary;
use flatpunct::metric::{canonical_count, CanonicalClass};
use flatpunct::moves::{
    apply_principal, apply_step, apply_tri_cut, canonicalize, verify_plan, PlanStep,
    PrincipalMove, TriCut,
};
use flatpunct::svg::render_development;
use flatpunct::{Angle, CanonicalMetric, DiskMetric, FlatDiskMetric};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random metric with exact rational curvatures, each in about (-0.95, -0.05)pi.
fn random_exact_disk(rng: &mut ChaCha8Rng, k: usize) -> DiskMetric {
    let kappas: Vec<Angle> = (0..k)
        .map(|_| Angle::from_pi_exact(Rational64::new(-rng.gen_range(4..60), 64)))
        .collect();
    let lengths: Vec<f64> = (0..k).map(|_| rng.gen_range(0.3..3.0)).collect();
    DiskMetric::new(kappas, lengths).expect("generated metric is valid")
}

/// Random metric with total curvature exactly -2pi (denominator 24).
fn random_minus_two_pi(rng: &mut ChaCha8Rng) -> DiskMetric {
    let k = rng.gen_range(3..=6);
    loop {
        let mut parts: Vec<i64> = (0..k - 1).map(|_| rng.gen_range(2..23)).collect();
        let last = 48 - parts.iter().sum::<i64>();
        if last < 2 || last > 22 {
            continue;
        }
        parts.push(last);
        let kappas: Vec<Angle> = parts
            .iter()
            .map(|&p| Angle::from_pi_exact(Rational64::new(-p, 24)))
            .collect();
        let lengths: Vec<f64> = (0..k).map(|_| rng.gen_range(0.3..3.0)).collect();
        return DiskMetric::new(kappas, lengths).expect("curvatures sum to -2pi");
    }
}

/// Partition a fixed total curvature into k pieces, each within (-0.95pi, 0).
fn partitioned_disk(rng: &mut ChaCha8Rng, total_pi: f64, k: usize) -> DiskMetric {
    loop {
        let weights: Vec<f64> = (0..k).map(|_| rng.gen_range(0.2..1.0)).collect();
        let sum: f64 = weights.iter().sum();
        let kappas: Vec<f64> = weights.iter().map(|w| total_pi * w / sum).collect();
        if kappas.iter().any(|&x| x <= -0.95) {
            continue;
        }
        let lengths: Vec<f64> = (0..k).map(|_| rng.gen_range(0.3..3.0)).collect();
        return DiskMetric::new(kappas.into_iter().map(Angle::from_pi).collect(), lengths)
            .expect("partitioned metric is valid");
    }
}

fn assert_close(a: f64, b: f64, tol: f64, what: &str) {
    assert!(
        (a - b).abs() <= tol,
        "{what}: {a} vs {b} differs by {}",
        (a - b).abs()
    );
}

// 1. Principal moves obey the semigroup laws componentwise within 1e-12.
fn criterion_1() {
    let mut rng = rng(101);
    for _ in 0..1000 {
        let n = rng.gen_range(3..=8usize);
        let kpi = -rng.gen_range((n as f64 - 1.0)..n as f64);
        let lengths: Vec<f64> = (0..n).map(|_| rng.gen_range(5.0..10.0)).collect();
        let base = CanonicalMetric::new(Angle::from_pi(kpi), lengths);
        let (j, jp) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let (r, rp) = (rng.gen_range(0.0..0.5), rng.gen_range(0.0..0.5));

        let id = apply_principal(&base, &PrincipalMove { j, r: 0.0 }).unwrap();
        for (x, y) in id.lengths.iter().zip(&base.lengths) {
            assert_close(*x, *y, 1e-12, "identity law");
        }

        let two = apply_principal(
            &apply_principal(&base, &PrincipalMove { j, r }).unwrap(),
            &PrincipalMove { j, r: rp },
        )
        .unwrap();
        let fused = apply_principal(&base, &PrincipalMove { j, r: r + rp }).unwrap();
        for (x, y) in two.lengths.iter().zip(&fused.lengths) {
            assert_close(*x, *y, 1e-12, "composition law");
        }

        let ab = apply_principal(
            &apply_principal(&base, &PrincipalMove { j, r }).unwrap(),
            &PrincipalMove { j: jp, r: rp },
        )
        .unwrap();
        let ba = apply_principal(
            &apply_principal(&base, &PrincipalMove { j: jp, r: rp }).unwrap(),
            &PrincipalMove { j, r },
        )
        .unwrap();
        for (x, y) in ab.lengths.iter().zip(&ba.lengths) {
            assert_close(*x, *y, 1e-12, "commutation law");
        }
    }
}

// 2. Circulant formulas agree with dense linear algebra oracles.
fn criterion_2() {
    let mut rng = rng(202);
    for _ in 0..500 {
        let m = rng.gen_range(1..=12usize);
        let coeffs: Vec<Rational64> = (0..m)
            .map(|_| Rational64::new(rng.gen_range(-6..=6), rng.gen_range(1..=4)))
            .collect();
        let circ = CirculantMatrix::new_exact(coeffs);
        let c = circ.coefficients();

        let dense = DMatrix::from_fn(m, m, |row, col| c[(row + m - col) % m]);
        let det_lu = dense.clone().lu().determinant();
        let det = determinant(&circ);
        assert!(
            (det - det_lu).abs() <= 1e-9 * det_lu.abs().max(1.0),
            "determinant {det} vs LU {det_lu}"
        );

        let svd = dense.clone().svd(false, false);
        let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
        let numeric_rank = svd
            .singular_values
            .iter()
            .filter(|&&s| s > 1e-9 * smax.max(1.0))
            .count();
        assert_eq!(rank_by_gcd(&circ).unwrap(), numeric_rank, "rank mismatch");

        let spectrum = eigenvalues(&circ);
        let dense_c = dense.map(|x| Complex::new(x, 0.0));
        for (lambda, v) in spectrum.eigenvalues.iter().zip(&spectrum.eigenvectors) {
            let vec = DMatrix::from_fn(m, 1, |row, _| Complex::new(v[row].re, v[row].im));
            let residual = &dense_c * &vec
                - &vec * Complex::new(lambda.re, lambda.im);
            let norm = residual.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            assert!(norm <= 1e-9, "eigen residual {norm}");
        }
    }
}

// 3. The principal matrix is singular exactly at K = -2pi.
fn criterion_3() {
    for n in 3..=8usize {
        for t in 0..1000i64 {
            let kpi = Rational64::new(-(((n as i64) - 1) * 1000 + t), 1000);
            let k = Angle::from_pi_exact(kpi);
            let expected = n == 3 && kpi == Rational64::from_integer(-2);
            assert_eq!(
                singular_case(k, n),
                expected,
                "singularity at K = {kpi}pi, n = {n}"
            );
        }
    }
    // At K = -2pi the vanishing factors are the j = 1, 2 roots of 1 + x + x^2.
    let matrix = principal_matrix(Angle::from_pi_exact(Rational64::from_integer(-2)), 3).unwrap();
    let spectrum = eigenvalues(&matrix);
    assert!(spectrum.eigenvalues[0].norm() > 1.0);
    assert!(spectrum.eigenvalues[1].norm() <= 1e-9);
    assert!(spectrum.eigenvalues[2].norm() <= 1e-9);
}

// 4. Moves conserve total curvature (exactly, in rational mode) and keep
// lengths positive.
fn criterion_4() {
    let mut rng = rng(404);
    for iter in 0..10_000 {
        match iter % 3 {
            0 => {
                let k = rng.gen_range(3..=8);
                let metric = random_exact_disk(&mut rng, k);
                let before = metric.total_curvature();
                let i = rng.gen_range(0..metric.vertex_count());
                let theta = metric.theta(i);
                let a = theta * rng.gen_range(1..25) / 100;
                let v = theta * rng.gen_range(1..25) / 100;
                let cut = apply_tri_cut(&metric, &TriCut { i, a, v }).unwrap();
                assert_eq!(
                    before.exact(),
                    cut.total_curvature().exact(),
                    "tri-cut curvature drift"
                );
                assert!(before.exact().is_some(), "exact mode lost");
                assert!(cut.lengths().iter().all(|&l| l > 0.0));
            }
            1 => {
                let n = rng.gen_range(3..=8usize);
                let kpi = -rng.gen_range((n as f64 - 1.0)..n as f64);
                let base = CanonicalMetric::new(
                    Angle::from_pi(kpi),
                    (0..n).map(|_| rng.gen_range(2.0..6.0)).collect(),
                );
                let mv = PrincipalMove {
                    j: rng.gen_range(0..n),
                    r: rng.gen_range(0.0..1.0),
                };
                let moved = apply_principal(&base, &mv).unwrap();
                assert_close(
                    moved.total_curvature.pi_units(),
                    kpi,
                    0.0,
                    "principal curvature drift",
                );
                assert!(moved.lengths.iter().all(|&l| l > 0.0));
            }
            _ => {
                let k = rng.gen_range(3..=8);
                let metric = random_exact_disk(&mut rng, k);
                let before = metric.total_curvature();
                let i = rng.gen_range(0..metric.vertex_count());
                let theta = metric.theta(i);
                let left = theta * rng.gen_range(20..80) / 100;
                let right = theta - left;
                let split = apply_step(
                    &metric,
                    &PlanStep::Split {
                        i,
                        left,
                        right,
                        length: rng.gen_range(0.2..2.0),
                    },
                )
                .unwrap();
                assert!(split.lengths().iter().all(|&l| l > 0.0));
                let merged = apply_step(&split, &PlanStep::Merge { i }).unwrap();
                assert_eq!(
                    before.exact(),
                    merged.total_curvature().exact(),
                    "merge/split curvature drift"
                );
                assert!(merged.approx_eq(&metric, 1e-9, false), "round trip drift");
            }
        }
    }
}

// 5. Canonicalization reaches n = canonical_count(K) equal vertices and the
// emitted plan replays.
fn criterion_5() -> Vec<FlatDiskMetric> {
    let mut rng = rng(505);
    let mut corpus = Vec::new();
    for _ in 0..200 {
        let k = rng.gen_range(1..=10usize);
        let mut metric = random_exact_disk(&mut rng, k);
        if rng.gen_bool(0.2) {
            // Oversized vertex to exercise the staging pass.
            let mut kappas = metric.kappas().to_vec();
            kappas[0] = Angle::from_pi_exact(Rational64::new(-rng.gen_range(65..120), 64));
            metric = DiskMetric::new(kappas, metric.lengths().to_vec()).unwrap();
        }
        let total = metric.total_curvature();
        let (canonical, plan) = canonicalize(&metric).expect("canonicalization succeeds");
        let n = match canonical_count(total).unwrap() {
            CanonicalClass::Vertices(n) => n,
            CanonicalClass::Cylinder => unreachable!("generated K < 0"),
        };
        assert_eq!(canonical.n(), n, "canonical vertex count");
        let expected = total.pi_units() / n as f64;
        let result = canonical.to_disk();
        for kappa in result.kappas() {
            assert_close(kappa.pi_units(), expected, 1e-9, "canonical curvature");
        }
        let ok = verify_plan(
            &FlatDiskMetric::Disk(metric.clone()),
            &plan,
            &FlatDiskMetric::Disk(result),
            true,
        )
        .expect("replay runs");
        assert!(ok, "plan does not replay to the canonical form");
        corpus.push(FlatDiskMetric::Disk(metric));
    }
    corpus
}

fn orbit_representative(metric: &DiskMetric) -> (f64, f64) {
    let report = invariant(&FlatDiskMetric::Disk(metric.clone())).expect("invariant");
    report.representative.expect("K = -2pi metrics carry an orbit")
}

// 6. The K = -2pi orbit is independent of the canonicalization route, and the
// planar-triangle-complement oracle lands in the trivial class.
fn criterion_6() -> Vec<FlatDiskMetric> {
    let mut rng = rng(606);
    let mut corpus = Vec::new();
    for _ in 0..100 {
        let metric = FlatDiskMetric::Disk(random_minus_two_pi(&mut rng));
        let mut reference = None;
        for trial in 0..10 {
            // Each seed draws different tie-breaks inside the planners, so
            // the ten plans take genuinely different cut routes.
            let report = invariant_seeded(&metric, rng.gen()).expect("invariant");
            let rep = report.representative.expect("K = -2pi metrics carry an orbit");
            match reference {
                None => reference = Some(rep),
                Some(reference) => {
                    assert_close(rep.0, reference.0, 1e-6, "orbit x");
                    assert_close(rep.1, reference.1, 1e-6, "orbit y");
                }
            }
            if trial == 0 {
                // The randomized plan still replays to its canonical form.
                let common =
                    FlatDiskMetric::Disk(report.canonical.expect("canonical form").to_disk());
                let plan = report.plan.expect("plan");
                assert!(
                    verify_plan(&metric, &plan, &common, false).expect("replay"),
                    "seeded plan must replay"
                );
            }
        }
        corpus.push(metric);
    }

    for _ in 0..100 {
        // Complement of a random planar triangle: kappa_i = A_i - pi, with
        // lengths[i] the side from vertex i to i+1 (opposite A_{i+2}).
        let alpha = rng.gen_range(0.2..PI - 0.4);
        let beta = rng.gen_range(0.1..(PI - alpha - 0.1).min(PI - 0.4));
        let gamma = PI - alpha - beta;
        let scale = rng.gen_range(0.5..4.0);
        let (a, b, c) = (scale * alpha.sin(), scale * beta.sin(), scale * gamma.sin());
        let metric = DiskMetric::new(
            vec![
                Angle::from_radians(alpha - PI),
                Angle::from_radians(beta - PI),
                Angle::from_radians(gamma - PI),
            ],
            vec![c, a, b],
        )
        .unwrap();
        let rep = orbit_representative(&metric);
        assert_close(rep.0, 0.0, 1e-6, "triangle complement orbit x");
        assert_close(rep.1, 0.0, 1e-6, "triangle complement orbit y");
        let reg = classify_regularity(&FlatDiskMetric::Disk(metric.clone())).unwrap();
        assert!(reg.regular, "triangle complement must be regular");
        corpus.push(FlatDiskMetric::Disk(metric));
    }
    corpus
}

fn check_certificate(a: &FlatDiskMetric, b: &FlatDiskMetric) -> bool {
    let result = equivalent(a, b, false).expect("decision");
    assert!(result.equivalent, "same-K pair must be equivalent");
    match result.certificate {
        Some(cert) => {
            let common = FlatDiskMetric::Disk(cert.common.to_disk());
            assert!(
                verify_plan(a, &cert.plan_left, &common, true).expect("left replay"),
                "left plan fails"
            );
            assert!(
                verify_plan(b, &cert.plan_right, &common, true).expect("right replay"),
                "right plan fails"
            );
            true
        }
        None => false,
    }
}

// 7. Same-K pairs are equivalent with verifiable certificates; at K = -2pi
// the orbit separates classes.
fn criterion_7() -> Vec<FlatDiskMetric> {
    let mut rng = rng(707);
    let mut corpus = Vec::new();
    let mut uncertified_n2 = 0usize;
    for i in 0..100 {
        let (kpi, ka, kb) = match i % 3 {
            0 => (-rng.gen_range(0.1..0.95), rng.gen_range(1..=3), rng.gen_range(1..=3)),
            1 => (-rng.gen_range(2.1..3.4), rng.gen_range(4..=7), rng.gen_range(4..=7)),
            _ => (-rng.gen_range(1.1..1.9), rng.gen_range(2..=5), rng.gen_range(2..=5)),
        };
        let a = FlatDiskMetric::Disk(partitioned_disk(&mut rng, kpi, ka));
        let b = FlatDiskMetric::Disk(partitioned_disk(&mut rng, kpi, kb));
        let certified = check_certificate(&a, &b);
        if i % 3 == 2 && !certified {
            uncertified_n2 += 1;
        } else if i % 3 != 2 {
            assert!(certified, "n = 1 and n >= 3 pairs must carry certificates");
        }
        corpus.push(a);
        corpus.push(b);
    }
    if uncertified_n2 > 0 {
        println!("  note: {uncertified_n2} n = 2 pairs asserted equivalent without certificate");
    }

    let third = Angle::from_pi_exact(Rational64::new(-2, 3));
    let mk = |lengths: &[f64]| {
        FlatDiskMetric::disk(vec![third; 3], lengths.to_vec()).unwrap()
    };
    assert!(check_certificate(&mk(&[1.0, 2.0, 3.0]), &mk(&[2.0, 3.0, 4.0])));
    let separated = equivalent(&mk(&[1.0, 2.0, 3.0]), &mk(&[1.0, 2.0, 4.0]), false).unwrap();
    assert!(!separated.equivalent, "(1,2,3) vs (1,2,4) must differ");
    corpus.push(mk(&[1.0, 2.0, 3.0]));
    corpus.push(mk(&[1.0, 2.0, 4.0]));
    corpus
}

// 8. Irregular iff puncture curvature 4pi with nonzero invariant: checkable
// direction over every metric the earlier criteria generated.
fn criterion_8(corpus: &[FlatDiskMetric]) {
    assert!(corpus.len() > 400, "corpus should cover criteria 5-7");
    for metric in corpus {
        let reg = classify_regularity(metric).expect("classification");
        let puncture = reg.puncture_curvature.pi_units();
        if !reg.regular {
            assert_close(puncture, 4.0, 1e-9, "irregular puncture curvature");
        }
        if (puncture - 4.0).abs() > 1e-9 {
            assert!(reg.regular, "puncture != 4pi must be regular");
        }
    }
}

// 9. Cone completion: exact n = 1 recipe; n = 2 kite bisection.
fn criterion_9() {
    let mut rng = rng(909);
    for _ in 0..50 {
        let kpi = Rational64::new(-rng.gen_range(2..30), 32);
        let metric =
            FlatDiskMetric::disk(vec![Angle::from_pi_exact(kpi)], vec![rng.gen_range(0.5..3.0)])
                .unwrap();
        match cone_completion(&metric).unwrap() {
            ConeCompletion::Cone { pieces, .. } => {
                let kabs = Angle::from_pi_exact(-kpi).radians();
                let piece = &pieces[0];
                assert_close(piece.apex_angle, kabs, 1e-15, "n = 1 apex");
                assert_close(piece.base_angles[0], (PI - kabs) / 2.0, 1e-15, "n = 1 base");
                assert_close(piece.base_angles[1], (PI - kabs) / 2.0, 1e-15, "n = 1 base");
            }
            other => panic!("expected a cone, got {other:?}"),
        }
    }

    for i in 0..100 {
        let kabs_pi = rng.gen_range(1.0f64..1.95);
        let l1 = rng.gen_range(0.5..2.0);
        let ratio_cap = if kabs_pi > 1.0 + 1e-9 {
            (1.0 / ((kabs_pi - 1.0) * PI / 2.0).sin()).min(4.0)
        } else {
            4.0
        };
        let symmetric = i % 4 == 0;
        let l2 = if symmetric {
            l1
        } else {
            l1 * rng.gen_range(1.0..0.95 * ratio_cap.max(1.06))
        };
        let half = Angle::from_pi(-kabs_pi / 2.0);
        let metric = FlatDiskMetric::disk(vec![half, half], vec![l1, l2]).unwrap();
        match cone_completion(&metric).unwrap() {
            ConeCompletion::Cone { pieces, .. } => {
                assert_eq!(pieces.len(), 2);
                let residual = (pieces[0].legs[0] - pieces[1].legs[0]).abs();
                assert!(residual < 1e-10, "kite residual {residual}");
                if symmetric {
                    let expected = kabs_pi * PI / 2.0;
                    assert_close(pieces[0].apex_angle, expected, 1e-12, "symmetric split");
                    assert_close(pieces[1].apex_angle, expected, 1e-12, "symmetric split");
                }
            }
            other => panic!("expected a cone, got {other:?}"),
        }
    }
}

// 10. Development holonomy matches total curvature mod 2pi, and rendering is
// byte-stable against the golden file.
fn criterion_10() {
    let mut rng = rng(1010);
    for _ in 0..1000 {
        let k = rng.gen_range(1..=8);
        let metric = random_exact_disk(&mut rng, k);
        let dev = develop_boundary(&metric);
        let total = metric.total_curvature().radians();
        let diff = (dev.closing_motion.rotation - total) / (2.0 * PI);
        let defect = (diff - diff.round()).abs() * 2.0 * PI;
        assert!(defect <= 1e-9, "holonomy defect {defect}");
    }

    let metric = DiskMetric::new(
        vec![
            Angle::from_pi_exact(Rational64::new(-1, 2)),
            Angle::from_pi_exact(Rational64::new(-1, 4)),
            Angle::from_pi_exact(Rational64::new(-3, 4)),
        ],
        vec![1.0, 1.5, 0.8],
    )
    .unwrap();
    let svg = render_development(&metric, None);
    assert_eq!(svg, render_development(&metric, None), "non-deterministic SVG");
    let golden = include_str!("golden/development.svg");
    assert_eq!(svg, golden, "SVG drifted from the golden file");
}

#[test]
fn acceptance() {
    let mut failures = Vec::new();
    let mut corpus: Vec<FlatDiskMetric> = Vec::new();

    let mut run = |name: &str, budget: Duration, f: &mut dyn FnMut() -> Option<Vec<FlatDiskMetric>>| {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(|| f()));
        let elapsed = start.elapsed();
        let (status, extra) = match outcome {
            Ok(metrics) => {
                if elapsed <= budget {
                    (true, metrics)
                } else {
                    (false, metrics)
                }
            }
            Err(_) => (false, None),
        };
        println!(
            "criterion {name}: {} ({elapsed:.2?}, budget {budget:.0?})",
            if status { "pass" } else { "FAIL" }
        );
        if !status {
            failures.push(name.to_string());
        }
        extra
    };

    run("1 semigroup laws", Duration::from_secs(1), &mut || {
        criterion_1();
        None
    });
    run("2 circulant oracle", Duration::from_secs(5), &mut || {
        criterion_2();
        None
    });
    run("3 singular locus", Duration::from_secs(2), &mut || {
        criterion_3();
        None
    });
    run("4 conservation", Duration::from_secs(5), &mut || {
        criterion_4();
        None
    });
    if let Some(m) = run("5 canonicalization", Duration::from_secs(30), &mut || {
        Some(criterion_5())
    }) {
        corpus.extend(m);
    }
    if let Some(m) = run("6 orbit well-defined", Duration::from_secs(30), &mut || {
        Some(criterion_6())
    }) {
        corpus.extend(m);
    }
    if let Some(m) = run("7 equivalence certificates", Duration::from_secs(20), &mut || {
        Some(criterion_7())
    }) {
        corpus.extend(m);
    }
    {
        let corpus = &corpus;
        run("8 regularity iff", Duration::from_secs(5), &mut || {
            criterion_8(corpus);
            None
        });
    }
    run("9 cone completion", Duration::from_secs(2), &mut || {
        criterion_9();
        None
    });
    run("10 holonomy + golden SVG", Duration::from_secs(3), &mut || {
        criterion_10();
        None
    });

    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
