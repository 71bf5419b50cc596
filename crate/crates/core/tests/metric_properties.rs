use kuratowski::metric_spaces::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_triples(n: usize, count: usize, seed: u64) -> Vec<(usize, usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n)))
        .collect()
}

fn assert_metric_axioms(sample: &PointSample, seed: u64) {
    for (i, j, k) in random_triples(sample.len(), 10_000, seed) {
        let (dij, djk, dik) = (sample.dist(i, j), sample.dist(j, k), sample.dist(i, k));
        assert_eq!(sample.dist(i, i), 0.0, "{}: diagonal at {i}", sample.label());
        assert_eq!(dij, sample.dist(j, i), "{}: asymmetric at ({i}, {j})", sample.label());
        assert!(dij >= 0.0);
        assert!(dik <= dij + djk + 1e-9, "{}: triangle ({i}, {j}, {k})", sample.label());
    }
}

fn cloud(n: usize, dim: usize, side: f64, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| (0..dim).map(|_| rng.random_range(0.0..side)).collect())
        .collect()
}

#[test]
fn axioms_on_every_oracle() {
    let mut fixtures = vec![
        sample_sphere(2, 10.0, 300, 1).unwrap(),
        sample_sphere(4, 1.0, 200, 2).unwrap(),
        sample_torus(&[1.0, 1.0], TorusLayout::Grid { resolution: 15 }).unwrap(),
        sample_torus(&[2.0, 0.5, 1.0], TorusLayout::Random { count: 250, seed: 3 }).unwrap(),
        PointSample::euclidean(cloud(200, 3, 2.0, 4)).unwrap(),
        build_graph_metric(cloud(200, 2, 1.0, 5), 10).unwrap(),
    ];
    let m = fixtures[4].to_matrix();
    fixtures.push(PointSample::from_matrix(m, METRIC_TOLERANCE).unwrap());
    for (seed, sample) in fixtures.iter().enumerate() {
        assert_metric_axioms(sample, seed as u64 + 100);
    }
}

#[test]
fn mean_sphere_distance_is_quarter_circumference() {
    let s = sample_sphere(2, 10.0, 10_000, 11).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let pairs = 200_000;
    let total: f64 = (0..pairs)
        .map(|_| s.dist(rng.random_range(0..s.len()), rng.random_range(0..s.len())))
        .sum();
    let mean = total / pairs as f64;
    let expected = 5.0 * std::f64::consts::PI;
    assert!((mean - expected).abs() / expected < 0.02, "mean {mean}");
}

#[test]
fn graph_metric_recovers_circle_arcs() {
    let n = 2000;
    let pts: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let a = std::f64::consts::TAU * i as f64 / n as f64;
            vec![a.cos(), a.sin()]
        })
        .collect();
    let g = build_graph_metric(pts, 8).unwrap();
    for i in [0, 17, 500, 1234] {
        let d = g.dist(i, (i + n / 2) % n);
        assert!((d - std::f64::consts::PI).abs() / std::f64::consts::PI < 0.05, "{d}");
    }
}

fn dyadic() -> impl Strategy<Value = f64> {
    // multiples of 2^-10 in [0, 4) keep every sum and reduction exact
    (0u32..4096).prop_map(|k| f64::from(k) / 1024.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn torus_translation_is_exact_on_dyadic_points(
        a in prop::collection::vec(dyadic(), 2),
        b in prop::collection::vec(dyadic(), 2),
        shift in prop::collection::vec(-3i32..4, 2),
        log_period in prop::collection::vec(-1i32..2, 2),
    ) {
        let periods: Vec<f64> = log_period.iter().map(|&e| 2f64.powi(e)).collect();
        let moved: Vec<f64> = a.iter().zip(&shift).zip(&periods)
            .map(|((x, &k), p)| x + f64::from(k) * p)
            .collect();
        prop_assert_eq!(torus_distance(&periods, &a, &b), torus_distance(&periods, &moved, &b));
        prop_assert_eq!(torus_distance(&periods, &b, &a), torus_distance(&periods, &b, &moved));
    }

    #[test]
    fn torus_translation_on_general_points(
        a in prop::collection::vec(-5.0..5.0f64, 3),
        b in prop::collection::vec(-5.0..5.0f64, 3),
        shift in prop::collection::vec(-3i32..4, 3),
        periods in prop::collection::vec(0.3..3.0f64, 3),
    ) {
        let moved: Vec<f64> = a.iter().zip(&shift).zip(&periods)
            .map(|((x, &k), p)| x + f64::from(k) * p)
            .collect();
        let d0 = torus_distance(&periods, &a, &b);
        let d1 = torus_distance(&periods, &moved, &b);
        prop_assert!((d0 - d1).abs() <= 1e-12 * periods.iter().sum::<f64>());
    }

    #[test]
    fn sphere_distance_is_rotation_invariant(seed in any::<u64>(), angle in 0.0..std::f64::consts::TAU, radius in 0.5..20.0f64) {
        let s = sample_sphere(2, radius, 2, seed).unwrap();
        let (c, sn) = (angle.cos(), angle.sin());
        // rotate in the (x, z) plane
        let rot = |p: &[f64]| vec![c * p[0] - sn * p[2], p[1], sn * p[0] + c * p[2]];
        let p: Vec<Vec<f64>> = (0..2).map(|i| s.coords(i).unwrap().to_vec()).collect();
        let r = PointSample::sphere(radius, vec![rot(&p[0]), rot(&p[1])]).unwrap();
        prop_assert!((s.dist(0, 1) - r.dist(0, 1)).abs() <= 1e-9 * radius.max(1.0));
    }

    #[test]
    fn graph_distance_dominates_euclidean(seed in any::<u64>(), k in 3usize..12) {
        let pts = cloud(60, 2, 1.0, seed);
        let g = match build_graph_metric(pts.clone(), k) {
            Ok(g) => g,
            Err(kuratowski::Error::DisconnectedGraph { .. }) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        for i in 0..pts.len() {
            for j in 0..pts.len() {
                prop_assert!(g.dist(i, j) >= euclidean(&pts[i], &pts[j]) - 1e-12);
            }
        }
    }

    #[test]
    fn sampling_is_deterministic(seed in any::<u64>()) {
        let a = sample_sphere(3, 2.0, 20, seed).unwrap();
        let b = sample_sphere(3, 2.0, 20, seed).unwrap();
        for i in 0..20 {
            prop_assert_eq!(a.coords(i), b.coords(i));
        }
    }
}
